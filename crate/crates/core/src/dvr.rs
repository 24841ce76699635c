//! Truncated discrete valuation rings k[t]/(t^N).

use crate::algebra::{Elem, Hom};
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, Ideal};

pub const DEFAULT_TRUNCATION: u32 = 16;

#[derive(Clone, Debug)]
pub struct DvrModel {
    pub residue: FiniteRing,
    pub ring: FiniteRing,
    pub t: Elem,
    pub n: u32,
    /// Inclusion k → k[t]/(t^N).
    pub base_map: Hom,
}

impl DvrModel {
    /// F_{p^f}[t]/(t^n).
    pub fn new(p: u64, f: u32, n: u32) -> Result<DvrModel> {
        if n == 0 {
            return Err(Error::input("truncation order must be positive"));
        }
        let residue = FiniteRing::galois_field(p, f)?;
        let ext = residue.truncated(n as usize);
        Ok(DvrModel { residue, ring: ext.ring, t: ext.root, n, base_map: ext.base_map })
    }

    pub fn q(&self) -> u64 {
        self.residue.zm().p().pow(self.residue.log_size())
    }

    pub fn t_pow(&self, e: u32) -> Elem {
        if e >= self.n {
            return self.ring.zero();
        }
        self.ring.pow(&self.t, e as u64)
    }

    /// Valuation of x, with v(0) = N.
    pub fn valuation(&self, x: &[u64]) -> u32 {
        let f = self.residue.dim();
        match x.iter().position(|&c| c != 0) {
            Some(i) => (i / f) as u32,
            None => self.n,
        }
    }

    /// The ideal (t^e).
    pub fn ideal_t(&self, e: u32) -> Ideal {
        self.ring.ideal(&[self.t_pow(e)])
    }

    /// e with I = (t^e).
    pub fn ideal_exponent(&self, i: &Ideal) -> u32 {
        self.ring.quotient_length(i).expect("truncated DVR is local")
    }

    /// Embeds a residue-field element as a constant.
    pub fn constant(&self, a: &[u64]) -> Elem {
        self.base_map.apply(&self.ring, a)
    }

    /// Reduction k[t]/(t^N) → k[t]/(t^M) for a coarser model with M ≤ N.
    pub fn reduction(&self, coarse: &DvrModel) -> Result<Hom> {
        if coarse.n > self.n || coarse.residue != self.residue {
            return Err(Error::input("reduction target must be a coarser model over the same field"));
        }
        let keep = coarse.ring.dim();
        let images = (0..self.ring.dim()).map(|i| if i < keep { coarse.ring.basis(i) } else { coarse.ring.zero() }).collect();
        Ok(Hom { images })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_and_lengths() {
        let o = DvrModel::new(5, 1, 6).unwrap();
        assert_eq!(o.valuation(&o.t_pow(4)), 4);
        assert_eq!(o.valuation(&o.ring.zero()), 6);
        let u = o.ring.add(&o.ring.one(), &o.t);
        assert_eq!(o.valuation(&o.ring.mul(&u, &o.t_pow(2))), 2);
        for m in 0..=6 {
            assert_eq!(o.ideal_exponent(&o.ideal_t(m)), m);
        }
    }

    #[test]
    fn extension_residue_field() {
        let o = DvrModel::new(5, 2, 3).unwrap();
        assert_eq!(o.q(), 25);
        assert_eq!(o.ring.residue_degree().unwrap(), 2);
        assert_eq!(o.valuation(&o.t_pow(2)), 2);
        assert_eq!(o.ideal_exponent(&o.ideal_t(2)), 2);
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let fine = DvrModel::new(3, 2, 5).unwrap();
        let coarse = DvrModel::new(3, 2, 3).unwrap();
        let red = fine.reduction(&coarse).unwrap();
        red.check_ring_hom(&fine.ring, &coarse.ring).unwrap();
        assert_eq!(red.apply(&coarse.ring, &fine.t), coarse.t);
        assert!(red.is_surjective(&coarse.ring));
        assert!(coarse.reduction(&fine).is_err());
    }
}
