#![allow(dead_code)]

use std::collections::BTreeSet;

use ordpsr::{Elem, FiniteRing, Zmod};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Enumeration cap for the brute-force checks.
pub const LIMIT: u64 = 1 << 12;

/// (Z/p^k)[x, y] modulo the monomials outside a staircase: x^i y^j survives
/// iff j < heights[i], heights non-increasing.
pub struct Monomial {
    pub ring: FiniteRing,
    pub p: u64,
    pub k: u32,
    pub heights: Vec<usize>,
    pub monomials: Vec<(usize, usize)>,
}

impl Monomial {
    pub fn new(p: u64, k: u32, heights: Vec<usize>) -> Monomial {
        assert!(heights.windows(2).all(|w| w[0] >= w[1]) && heights.iter().all(|&h| h > 0));
        let monomials: Vec<(usize, usize)> =
            heights.iter().enumerate().flat_map(|(i, &h)| (0..h).map(move |j| (i, j))).collect();
        let n = monomials.len();
        let index = |i: usize, j: usize| monomials.iter().position(|&m| m == (i, j));
        let mut mul = vec![vec![vec![0; n]; n]; n];
        for (a, &(i, j)) in monomials.iter().enumerate() {
            for (b, &(u, v)) in monomials.iter().enumerate() {
                if let Some(c) = index(i + u, j + v) {
                    mul[a][b][c] = 1;
                }
            }
        }
        let mut one = vec![0; n];
        one[0] = 1;
        let ring = FiniteRing::from_dense(Zmod::new(p, k).unwrap(), &mul, &one).unwrap();
        Monomial { ring, p, k, heights, monomials }
    }

    /// Random small instance whose element count stays under LIMIT.
    pub fn random(rng: &mut ChaCha8Rng) -> Monomial {
        let p = [3, 5, 7][rng.gen_range(0..3)];
        let k = if rng.gen_bool(0.3) { 2 } else { 1 };
        let width = rng.gen_range(1..=3);
        let mut heights: Vec<usize> = (0..width).map(|_| rng.gen_range(1..=3)).collect();
        heights.sort_unstable_by(|a, b| b.cmp(a));
        while (p as f64).powi((k as usize * heights.iter().sum::<usize>()) as i32) > LIMIT as f64 {
            let last = heights.len() - 1;
            heights[last] -= 1;
            if heights[last] == 0 {
                heights.pop();
            }
        }
        Monomial::new(p, k, heights)
    }

    /// Staircase corners, i.e. the monomials spanning the socle.
    pub fn corners(&self) -> usize {
        let h = &self.heights;
        (0..h.len()).filter(|&i| i + 1 == h.len() || h[i + 1] < h[i]).count()
    }

    /// Random element; with `nonunit` its constant term is divisible by p.
    pub fn element(&self, rng: &mut ChaCha8Rng, nonunit: bool) -> Elem {
        let q = Zmod::new(self.p, self.k).unwrap().modulus();
        let mut x: Elem = (0..self.monomials.len()).map(|_| rng.gen_range(0..q)).collect();
        if nonunit {
            x[0] = self.p * rng.gen_range(0..q / self.p);
        }
        // Sparse elements make for more interesting ideals.
        for c in x.iter_mut().skip(1) {
            if rng.gen_bool(0.4) {
                *c = 0;
            }
        }
        x
    }
}

/// Closure of a set of vectors under addition, coordinates mod `modulus`.
pub fn additive_closure(modulus: u64, gens: &[Vec<u64>], dim: usize) -> BTreeSet<Vec<u64>> {
    let mut seen: BTreeSet<Vec<u64>> = [vec![0; dim]].into_iter().collect();
    let mut frontier: Vec<Vec<u64>> = seen.iter().cloned().collect();
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % modulus).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

/// The ideal generated by `gens`: additive closure of the basis multiples.
pub fn ideal_closure(r: &FiniteRing, gens: &[Elem]) -> BTreeSet<Elem> {
    let basis = r.basis_elements();
    let products: Vec<Elem> = gens.iter().flat_map(|g| basis.iter().map(move |b| r.mul(b, g))).collect();
    additive_closure(r.zm().modulus(), &products, r.dim())
}
