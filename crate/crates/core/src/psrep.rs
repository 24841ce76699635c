//! Degree-2 pseudorepresentations stored as (trace, det) on group elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, Elem, Hom};
use crate::error::{Error, Result};
use crate::group::{character_from_generators, GroupAlgebra, MarkedGroup};
use crate::howell::{Solver, Span};
use crate::ring::{FiniteRing, RingQuotient};

/// A 2×2 matrix [a, b, c, d] = [[a, b], [c, d]] over a ring.
pub type Mat2 = [Elem; 4];

pub fn mat_identity(r: &FiniteRing) -> Mat2 {
    [r.one(), r.zero(), r.zero(), r.one()]
}

pub fn mat_mul(r: &FiniteRing, x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| r.add(&r.mul(&x[2 * i], &y[j]), &r.mul(&x[2 * i + 1], &y[2 + j]));
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

pub fn mat_det(r: &FiniteRing, x: &Mat2) -> Elem {
    r.sub(&r.mul(&x[0], &x[3]), &r.mul(&x[1], &x[2]))
}

pub fn mat_trace(r: &FiniteRing, x: &Mat2) -> Elem {
    r.add(&x[0], &x[3])
}

pub fn mat_inv(r: &FiniteRing, x: &Mat2) -> Option<Mat2> {
    let di = r.inverse(&mat_det(r, x))?;
    Some([r.mul(&di, &x[3]), r.neg(&r.mul(&di, &x[1])), r.neg(&r.mul(&di, &x[2])), r.mul(&di, &x[0])])
}

pub fn mat_from_ints(r: &FiniteRing, v: [i64; 4]) -> Mat2 {
    let s = |c: i64| r.scalar(r.zm().reduce(c));
    [s(v[0]), s(v[1]), s(v[2]), s(v[3])]
}

/// A representation G → GL_2(R) given by generator images.
#[derive(Clone, Debug)]
pub struct MatrixRep2 {
    pub ring: FiniteRing,
    pub group: MarkedGroup,
    pub generator_images: Vec<Mat2>,
    images: Vec<Mat2>,
}

impl MatrixRep2 {
    pub fn new(ring: &FiniteRing, group: &MarkedGroup, generator_images: Vec<Mat2>) -> Result<MatrixRep2> {
        if generator_images.len() != group.generators().len() {
            return Err(Error::input("one matrix per group generator is required"));
        }
        let generator_images: Vec<Mat2> = generator_images.into_iter().map(|m| m.map(|x| ring.reduced(x))).collect();
        for m in &generator_images {
            if mat_inv(ring, m).is_none() {
                return Err(Error::input("generator image is not invertible"));
            }
        }
        let images: Vec<Mat2> = (0..group.order())
            .map(|x| group.word(x).iter().fold(mat_identity(ring), |acc, &s| mat_mul(ring, &acc, &generator_images[s])))
            .collect();
        for (x, s, y) in group.cayley_edges() {
            if images[y] != mat_mul(ring, &images[x], &generator_images[s]) {
                return Err(Error::input(format!(
                    "generator images violate a group relation at {}·{}",
                    group.label(x),
                    group.label(group.generators()[s])
                )));
            }
        }
        Ok(MatrixRep2 { ring: ring.clone(), group: group.clone(), generator_images, images })
    }

    /// Direct sum of two characters.
    pub fn diagonal(ring: &FiniteRing, group: &MarkedGroup, chi1: &[Elem], chi2: &[Elem]) -> Result<MatrixRep2> {
        let gens = group
            .generators()
            .iter()
            .map(|&s| [chi1[s].clone(), ring.zero(), ring.zero(), chi2[s].clone()])
            .collect();
        MatrixRep2::new(ring, group, gens)
    }

    pub fn image(&self, g: usize) -> &Mat2 {
        &self.images[g]
    }

    pub fn images(&self) -> &[Mat2] {
        &self.images
    }

    /// M ρ M⁻¹.
    pub fn conjugate(&self, m: &Mat2) -> Result<MatrixRep2> {
        let r = &self.ring;
        let mi = mat_inv(r, m).ok_or_else(|| Error::input("conjugating matrix is not invertible"))?;
        let gens = self.generator_images.iter().map(|x| mat_mul(r, &mat_mul(r, m, x), &mi)).collect();
        MatrixRep2::new(r, &self.group, gens)
    }

    /// Applies a ring map to all entries.
    pub fn map_ring(&self, dst: &FiniteRing, f: &crate::algebra::Hom) -> Result<MatrixRep2> {
        let gens = self.generator_images.iter().map(|m| m.clone().map(|x| f.apply(dst, &x))).collect();
        MatrixRep2::new(dst, &self.group, gens)
    }
}

/// The violated identity and a witness pair of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub g: usize,
    pub h: usize,
}

#[derive(Clone, Debug)]
pub struct Pseudorep2 {
    pub ring: FiniteRing,
    pub group: MarkedGroup,
    pub trace: Vec<Elem>,
    pub det: Vec<Elem>,
}

impl Pseudorep2 {
    pub fn new(ring: &FiniteRing, group: &MarkedGroup, trace: Vec<Elem>, det: Vec<Elem>) -> Result<Pseudorep2> {
        let n = group.order();
        if trace.len() != n || det.len() != n {
            return Err(Error::input("trace and det need one value per group element"));
        }
        let trace = trace.into_iter().map(|x| ring.reduced(x)).collect();
        let det = det.into_iter().map(|x| ring.reduced(x)).collect();
        Ok(Pseudorep2 { ring: ring.clone(), group: group.clone(), trace, det })
    }

    pub fn of_rep(rho: &MatrixRep2) -> Pseudorep2 {
        let r = &rho.ring;
        let trace = rho.images().iter().map(|m| mat_trace(r, m)).collect();
        let det = rho.images().iter().map(|m| mat_det(r, m)).collect();
        Pseudorep2 { ring: r.clone(), group: rho.group.clone(), trace, det }
    }

    /// ψ(χ1 ⊕ χ2).
    pub fn of_characters(ring: &FiniteRing, group: &MarkedGroup, chi1: &[Elem], chi2: &[Elem]) -> Pseudorep2 {
        let trace = chi1.iter().zip(chi2).map(|(a, b)| ring.add(a, b)).collect();
        let det = chi1.iter().zip(chi2).map(|(a, b)| ring.mul(a, b)).collect();
        Pseudorep2 { ring: ring.clone(), group: group.clone(), trace, det }
    }

    /// Checks the identity system; None means every identity holds.
    pub fn validate(&self) -> Option<Violation> {
        let r = &self.ring;
        let g = &self.group;
        let n = g.order();
        let v = |name: &str, a: usize, b: usize| Some(Violation { identity: name.to_string(), g: a, h: b });
        if self.trace[0] != r.scalar(2) {
            return v("trace_of_identity", 0, 0);
        }
        for a in 0..n {
            if !r.is_unit(&self.det[a]) {
                return v("det_is_unit", a, a);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                if self.det[ab] != r.mul(&self.det[a], &self.det[b]) {
                    return v("det_multiplicative", a, b);
                }
                if self.trace[ab] != self.trace[g.mul(b, a)] {
                    return v("trace_central", a, b);
                }
            }
        }
        for a in 0..n {
            let t = &self.trace[a];
            let expect = r.halve(&r.sub(&r.mul(t, t), &self.trace[g.mul(a, a)]));
            if self.det[a] != expect {
                return v("det_from_trace", a, a);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = r.mul(&self.trace[a], &self.trace[b]);
                let rhs = r.add(&self.trace[g.mul(a, b)], &r.mul(&self.det[b], &self.trace[g.mul(a, g.inv(b))]));
                if lhs != rhs {
                    return v("trace_recursion", a, b);
                }
            }
        }
        None
    }

    /// Every identity of the system as a residual that must vanish (det
    /// units excepted); used to linearize deformation problems.
    pub fn identity_residuals(&self) -> Vec<Elem> {
        let r = &self.ring;
        let g = &self.group;
        let n = g.order();
        let mut out = vec![r.sub(&self.trace[0], &r.scalar(2))];
        for a in 0..n {
            let t = &self.trace[a];
            out.push(r.sub(&self.det[a], &r.halve(&r.sub(&r.mul(t, t), &self.trace[g.mul(a, a)]))));
            for b in 0..n {
                let ab = g.mul(a, b);
                out.push(r.sub(&self.det[ab], &r.mul(&self.det[a], &self.det[b])));
                out.push(r.sub(&self.trace[ab], &self.trace[g.mul(b, a)]));
                let lhs = r.mul(&self.trace[a], &self.trace[b]);
                let rhs = r.add(&self.trace[ab], &r.mul(&self.det[b], &self.trace[g.mul(a, g.inv(b))]));
                out.push(r.sub(&lhs, &rhs));
            }
        }
        out
    }

    /// The law with det(g) = (t(g)² − t(g²))/2.
    pub fn from_trace(ring: &FiniteRing, group: &MarkedGroup, trace: Vec<Elem>) -> Result<Pseudorep2> {
        if trace.len() != group.order() {
            return Err(Error::input("trace needs one value per group element"));
        }
        let det = (0..group.order())
            .map(|a| ring.halve(&ring.sub(&ring.mul(&trace[a], &trace[a]), &trace[group.mul(a, a)])))
            .collect();
        Pseudorep2::new(ring, group, trace, det)
    }

    pub fn require_valid(&self) -> Result<()> {
        match self.validate() {
            None => Ok(()),
            Some(v) => Err(Error::invariant(format!(
                "pseudorepresentation fails {} at ({}, {})",
                v.identity,
                self.group.label(v.g),
                self.group.label(v.h)
            ))),
        }
    }

    pub fn group_algebra(&self) -> GroupAlgebra {
        GroupAlgebra::new(&self.ring, &self.group)
    }

    /// (t_x, d_x) for x in A[G]: the characteristic polynomial X² − t_x X + d_x.
    pub fn char_poly_at(&self, ga: &GroupAlgebra, x: &[u64]) -> (Elem, Elem) {
        let r = &self.ring;
        let t = ga.extend_linearly(&self.trace, x);
        let t2 = ga.extend_linearly(&self.trace, &ga.algebra.mul(x, x));
        let d = r.halve(&r.sub(&r.mul(&t, &t), &t2));
        (t, d)
    }

    /// Trace of each generator of A[G] (a_j·g ↦ a_j t(g)).
    pub fn trace_on_generators(&self, ga: &GroupAlgebra) -> Vec<Elem> {
        let r = &self.ring;
        let nr = r.dim();
        (0..ga.algebra.dim()).map(|i| r.mul(&r.basis(i % nr), &self.trace[i / nr])).collect()
    }

    /// ker(D) = {x : t(xy) = 0 and t(x)t(y) − t(xy) = 0 for all y}; with 2
    /// invertible this is {x : t(xg) = 0 for all g}, already a two-sided ideal.
    pub fn kernel(&self, ga: &GroupAlgebra) -> Span {
        let r = &self.ring;
        let g = &self.group;
        let n = g.order();
        let nr = r.dim();
        let zm = r.zm();
        let target = Span::from_rows(
            zm,
            n * nr,
            (0..n).flat_map(|b| {
                r.relations().rows().iter().map(move |row| {
                    let mut v = vec![0; n * nr];
                    v[b * nr..(b + 1) * nr].copy_from_slice(row);
                    v
                })
            }),
        );
        let images: Vec<Vec<u64>> = (0..ga.algebra.dim())
            .map(|i| {
                let (h, j) = (i / nr, i % nr);
                let a = r.basis(j);
                let mut v = Vec::with_capacity(n * nr);
                for y in 0..n {
                    v.extend(r.mul(&a, &self.trace[g.mul(h, y)]));
                }
                v
            })
            .collect();
        Solver::new(zm, ga.algebra.dim(), &images, &target).kernel().join(ga.algebra.relations())
    }

    /// A[G]/ker(D) with the trace descended to it.
    pub fn kernel_quotient(&self) -> KernelQuotient {
        let ga = self.group_algebra();
        let kernel = self.kernel(&ga);
        let trace_all = self.trace_on_generators(&ga);
        let q = ga.algebra.quotient(&kernel);
        let trace_gens = q.section.iter().map(|&i| trace_all[i].clone()).collect();
        KernelQuotient { group_algebra: ga, kernel, algebra: q.algebra, projection: q.projection, trace_gens, trace_all }
    }

    /// Residual split into two characters over the residue field.
    pub fn residual_split(&self) -> Result<ResidualSplit> {
        let res = self.ring.residue_field()?.clone();
        let k = &res.ring;
        let g = &self.group;
        let tbar: Vec<Elem> = self.trace.iter().map(|x| res.project(x)).collect();
        let dbar: Vec<Elem> = self.det.iter().map(|x| res.project(x)).collect();
        let field_elems = k.elements();
        let roots = |a: usize| -> Vec<Elem> {
            field_elems
                .iter()
                .filter(|x| {
                    let v = k.add(&k.sub(&k.mul(x, x), &k.mul(&tbar[a], x)), &dbar[a]);
                    k.is_zero(&v)
                })
                .cloned()
                .collect()
        };
        for a in 0..g.order() {
            if roots(a).is_empty() {
                return Err(Error::unsupported(format!(
                    "characteristic polynomial at {} is irreducible over the residue field",
                    g.label(a)
                )));
            }
        }
        let gen_roots: Vec<Vec<Elem>> = g.generators().iter().map(|&s| roots(s)).collect();
        let mut choice = vec![0usize; gen_roots.len()];
        loop {
            let v1: Vec<Elem> = choice.iter().zip(&gen_roots).map(|(&c, rs)| rs[c].clone()).collect();
            let v2: Vec<Elem> =
                g.generators().iter().zip(&v1).map(|(&s, x)| k.sub(&tbar[s], x)).collect();
            if let (Ok(chi1), Ok(chi2)) = (character_from_generators(g, k, &v1), character_from_generators(g, k, &v2)) {
                let ok = (0..g.order())
                    .all(|a| k.add(&chi1[a], &chi2[a]) == tbar[a] && k.mul(&chi1[a], &chi2[a]) == dbar[a]);
                if ok {
                    return Ok(ResidualSplit::new(res, chi1, chi2));
                }
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Err(Error::unsupported("no split into residual characters: residually irreducible"));
                }
                choice[i] += 1;
                if choice[i] < gen_roots[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Pushes the law along a ring map.
    pub fn map_ring(&self, dst: &FiniteRing, f: &crate::algebra::Hom) -> Pseudorep2 {
        Pseudorep2 {
            ring: dst.clone(),
            group: self.group.clone(),
            trace: self.trace.iter().map(|x| f.apply(dst, x)).collect(),
            det: self.det.iter().map(|x| f.apply(dst, x)).collect(),
        }
    }

    pub fn reduce_mod(&self, q: &RingQuotient) -> Pseudorep2 {
        self.map_ring(&q.ring, &q.projection)
    }
}

/// Quotients with at most this many elements have d(xy) = d(x)d(y) checked
/// on every pair.
pub const INDUCED_PAIR_LIMIT: u64 = 256;

/// A[G]/ker(D) and the law descended to it.
#[derive(Clone, Debug)]
pub struct KernelQuotient {
    pub group_algebra: GroupAlgebra,
    pub kernel: Span,
    pub algebra: Algebra,
    pub projection: Hom,
    /// Trace of each generator of the quotient.
    pub trace_gens: Vec<Elem>,
    trace_all: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedLawReport {
    pub kernel_log_size: u32,
    pub quotient_log_size: u32,
    pub pairs_checked: u64,
    pub exhaustive: bool,
}

impl KernelQuotient {
    pub fn trace(&self, x: &[u64]) -> Elem {
        let r = &self.group_algebra.ring;
        let terms: Vec<(u64, &Elem)> = x.iter().copied().zip(&self.trace_gens).filter(|(c, _)| *c != 0).collect();
        r.combine(&terms)
    }

    pub fn det(&self, x: &[u64]) -> Elem {
        let r = &self.group_algebra.ring;
        let t = self.trace(x);
        r.halve(&r.sub(&r.mul(&t, &t), &self.trace(&self.algebra.mul(x, x))))
    }

    /// Checks that the law descends and is a faithful multiplicative
    /// degree-2 law on the quotient reproducing D on G. Pairs are checked
    /// exhaustively on small quotients, otherwise on basis pairs plus
    /// `samples` seeded random pairs.
    pub fn check(&self, d: &Pseudorep2, samples: usize, seed: u64) -> Result<InducedLawReport> {
        let ga = &self.group_algebra;
        let r = &ga.ring;
        let e = &self.algebra;
        let src_trace = |x: &[u64]| -> Elem {
            let terms: Vec<(u64, &Elem)> = x.iter().copied().zip(&self.trace_all).filter(|(c, _)| *c != 0).collect();
            r.combine(&terms)
        };
        let src_basis = ga.algebra.basis_elements();
        for k in self.kernel.rows() {
            for y in &src_basis {
                if !r.is_zero(&src_trace(&ga.algebra.mul(k, y))) {
                    return Err(Error::invariant("trace does not vanish on ker(D)·A[G]"));
                }
            }
        }
        // the trace form on the quotient has no kernel
        let basis = e.basis_elements();
        let nr = r.dim();
        let images: Vec<Vec<u64>> =
            basis.iter().map(|x| basis.iter().flat_map(|y| self.trace(&e.mul(x, y))).collect()).collect();
        let width = basis.len() * nr;
        let target = Span::from_rows(
            r.zm(),
            width,
            (0..basis.len()).flat_map(|b| {
                r.relations().rows().iter().map(move |row| {
                    let mut v = vec![0; width];
                    v[b * nr..(b + 1) * nr].copy_from_slice(row);
                    v
                })
            }),
        );
        let radical = Solver::new(r.zm(), e.dim(), &images, &target).kernel();
        if !e.relations().contains_span(&radical) {
            return Err(Error::invariant("descended law is not faithful on A[G]/ker(D)"));
        }
        let g = &d.group;
        let rho: Vec<Elem> = (0..g.order()).map(|x| self.projection.apply(e, &ga.element(x))).collect();
        let induced = Pseudorep2::new(r, g, rho.iter().map(|x| self.trace(x)).collect(), rho.iter().map(|x| self.det(x)).collect())?;
        if induced.trace != d.trace || induced.det != d.det {
            return Err(Error::invariant("descended law does not reproduce D on G"));
        }
        induced.require_valid()?;
        let mult = |x: &[u64], y: &[u64]| r.mul(&self.det(x), &self.det(y)) == self.det(&e.mul(x, y));
        let size = (e.zmod().p() as f64).powi(e.log_size() as i32);
        let (pairs_checked, exhaustive) = if size <= INDUCED_PAIR_LIMIT as f64 {
            let elems = e.elements();
            for x in &elems {
                for y in &elems {
                    if !mult(x, y) {
                        return Err(Error::invariant("descended determinant is not multiplicative"));
                    }
                }
            }
            ((elems.len() * elems.len()) as u64, true)
        } else {
            let m = e.zmod().modulus();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut random = || e.reduced((0..e.dim()).map(|_| rng.gen_range(0..m)).collect());
            let mut pairs: Vec<(Elem, Elem)> =
                basis.iter().flat_map(|x| basis.iter().map(move |y| (x.clone(), y.clone()))).collect();
            for _ in 0..samples {
                pairs.push((random(), random()));
            }
            for (x, y) in &pairs {
                if !mult(x, y) {
                    return Err(Error::invariant("descended determinant is not multiplicative"));
                }
            }
            (pairs.len() as u64, false)
        };
        Ok(InducedLawReport {
            kernel_log_size: self.kernel.log_size() - ga.algebra.relations().log_size(),
            quotient_log_size: e.log_size(),
            pairs_checked,
            exhaustive,
        })
    }
}

/// Two residual characters with trace ≡ χ1 + χ2 and det ≡ χ1χ2.
#[derive(Clone, Debug)]
pub struct ResidualSplit {
    pub residue: RingQuotient,
    pub chi1: Vec<Elem>,
    pub chi2: Vec<Elem>,
    pub multiplicity_free: bool,
}

impl ResidualSplit {
    pub fn new(residue: RingQuotient, chi1: Vec<Elem>, chi2: Vec<Elem>) -> ResidualSplit {
        let multiplicity_free = chi1 != chi2;
        ResidualSplit { residue, chi1, chi2, multiplicity_free }
    }

    /// Orders the pair so that χ1 is the given character.
    pub fn with_first(self, chi: &[Elem]) -> Result<ResidualSplit> {
        if self.chi1 == chi {
            Ok(self)
        } else if self.chi2 == chi {
            Ok(ResidualSplit { chi1: self.chi2, chi2: self.chi1, ..self })
        } else {
            Err(Error::input("labelled residual character is not a constituent of the residual split"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::character_from_generators;

    #[test]
    fn diag_rep_of_c4() {
        let r = FiniteRing::zmod(5, 1).unwrap();
        let g = MarkedGroup::cyclic(4).unwrap();
        let rho = MatrixRep2::new(&r, &g, vec![mat_from_ints(&r, [2, 0, 0, 3])]).unwrap();
        let d = Pseudorep2::of_rep(&rho);
        assert_eq!(d.trace[1], vec![0]);
        assert_eq!(d.det[1], vec![1]);
        assert!(d.validate().is_none());
        let split = d.residual_split().unwrap();
        assert!(split.multiplicity_free);
        let chi2 = character_from_generators(&g, &split.residue.ring, &[vec![2]]).unwrap();
        let s = split.with_first(&chi2).unwrap();
        assert_eq!(s.chi1[1], vec![2]);
        assert_eq!(s.chi2[1], vec![3]);
    }

    #[test]
    fn relation_violation_is_rejected() {
        let r = FiniteRing::zmod(5, 1).unwrap();
        let g = MarkedGroup::cyclic(4).unwrap();
        assert!(MatrixRep2::new(&r, &g, vec![mat_from_ints(&r, [3, 0, 0, 3])]).is_ok());
        assert!(MatrixRep2::new(&r, &g, vec![mat_from_ints(&r, [1, 1, 0, 1])]).is_err());
    }

    #[test]
    fn s3_standard_over_f7() {
        let r = FiniteRing::zmod(7, 1).unwrap();
        let g = MarkedGroup::symmetric(3).unwrap();
        // (0 1) and (0 1 2) on the standard quotient
        let rho = MatrixRep2::new(&r, &g, vec![mat_from_ints(&r, [-1, 1, 0, 1]), mat_from_ints(&r, [0, -1, 1, -1])]).unwrap();
        let d = Pseudorep2::of_rep(&rho);
        assert!(d.validate().is_none());
        let t = g.generators()[0];
        assert_eq!(d.trace[t], vec![0]);
        assert_eq!(d.det[t], vec![6]);
        assert!(matches!(d.residual_split(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn perturbation_fails() {
        let r = FiniteRing::zmod(5, 1).unwrap();
        let g = MarkedGroup::cyclic(4).unwrap();
        let rho = MatrixRep2::new(&r, &g, vec![mat_from_ints(&r, [2, 0, 0, 3])]).unwrap();
        let mut d = Pseudorep2::of_rep(&rho);
        d.trace[1] = r.add(&d.trace[1], &r.one());
        assert!(d.validate().is_some());
    }

    #[test]
    fn kernel_quotients() {
        // S3 irreducible over F_7: A[G]/ker(D) is M_2(F_7)
        let r = FiniteRing::zmod(7, 1).unwrap();
        let g = MarkedGroup::symmetric(3).unwrap();
        let rho = MatrixRep2::new(&r, &g, vec![mat_from_ints(&r, [-1, 1, 0, 1]), mat_from_ints(&r, [0, -1, 1, -1])]).unwrap();
        let d = Pseudorep2::of_rep(&rho);
        let kq = d.kernel_quotient();
        let rep = kq.check(&d, 32, 0).unwrap();
        assert_eq!((rep.kernel_log_size, rep.quotient_log_size), (2, 4));
        assert!(!rep.exhaustive);
        // C4 split over F_5 with distinct characters: A × A
        let r = FiniteRing::zmod(5, 1).unwrap();
        let g = MarkedGroup::cyclic(4).unwrap();
        let d = Pseudorep2::of_characters(&r, &g, &[vec![1], vec![2], vec![4], vec![3]], &[vec![1], vec![3], vec![4], vec![2]]);
        let rep = d.kernel_quotient().check(&d, 0, 0).unwrap();
        assert_eq!(rep.quotient_log_size, 2);
        assert!(rep.exhaustive);
    }
}
