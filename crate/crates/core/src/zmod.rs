//! Arithmetic in Z/p^k for an odd prime p.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps every product inside a u64.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zmod {
    p: u64,
    k: u32,
    m: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Zmod {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::input(format!("characteristic base {p} is not an odd prime")));
        }
        if k == 0 {
            return Err(Error::input("exponent k must be positive"));
        }
        let mut m: u64 = 1;
        for _ in 0..k {
            m = m
                .checked_mul(p)
                .filter(|&m| m <= MAX_MODULUS)
                .ok_or_else(|| Error::input(format!("{p}^{k} exceeds the supported modulus")))?;
        }
        Ok(Zmod { p, k, m })
    }

    /// Parses a characteristic given as the integer p^k.
    pub fn from_characteristic(c: u64) -> Result<Self> {
        if c < 3 {
            return Err(Error::input(format!("characteristic {c} is not an odd prime power")));
        }
        let mut p = 2;
        while c % p != 0 {
            p += 1;
        }
        let mut k = 0;
        let mut r = c;
        while r % p == 0 {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::input(format!("characteristic {c} is not a prime power")));
        }
        Zmod::new(p, k)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.m
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// p^e as an integer, for e ≤ k.
    pub fn p_pow(&self, e: u32) -> u64 {
        debug_assert!(e <= self.k);
        self.p.pow(e)
    }

    /// p-adic valuation, with val(0) = k.
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.m as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.reduce(s0))
    }

    /// Writes a nonzero a as p^v · u with u a unit; returns (v, u).
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.val(a);
        (v, a / self.p_pow(v))
    }

    pub fn half(&self) -> u64 {
        self.inv(2).expect("p is odd")
    }
}
