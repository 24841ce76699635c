//! Finite commutative rings, their ideals, and local structure.

use std::ops::Deref;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::algebra::{sparse, Algebra, Elem, Hom, Product, Quotient};
use crate::error::{Error, Result};
use crate::howell::{Solver, Span};
use crate::zmod::Zmod;

/// An ideal, stored as the Howell basis of its additive span together with
/// the ring relations. Equal ideals compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Ideal {
    span: Span,
}

impl Ideal {
    pub fn span(&self) -> &Span {
        &self.span
    }
    pub fn from_span(span: Span) -> Ideal {
        Ideal { span }
    }
}

#[derive(Clone, Debug)]
pub struct LocalData {
    pub max_ideal: Ideal,
    pub residue: RingQuotient,
    /// Residue field has p^f elements.
    pub f: u32,
}

#[derive(Clone, Debug)]
pub struct FiniteRing {
    alg: Algebra,
    local: Arc<OnceLock<std::result::Result<LocalData, Error>>>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg
    }
}

impl Deref for FiniteRing {
    type Target = Algebra;
    fn deref(&self) -> &Algebra {
        &self.alg
    }
}

/// A quotient ring with its projection and a generator section.
#[derive(Clone, Debug)]
pub struct RingQuotient {
    pub ring: FiniteRing,
    pub projection: Hom,
    pub section: Vec<usize>,
}

impl RingQuotient {
    fn from_algebra_quotient(q: Quotient) -> RingQuotient {
        RingQuotient { ring: FiniteRing::wrap(q.algebra), projection: q.projection, section: q.section }
    }

    pub fn project(&self, x: &[u64]) -> Elem {
        self.projection.apply(&self.ring, x)
    }

    /// A preimage in the source: quotient generators are source generators.
    pub fn lift(&self, y: &[u64], src_dim: usize) -> Elem {
        let mut v = vec![0; src_dim];
        for (&c, &i) in y.iter().zip(&self.section) {
            v[i] = c;
        }
        v
    }
}

impl FiniteRing {
    pub(crate) fn wrap(alg: Algebra) -> FiniteRing {
        FiniteRing { alg, local: Arc::new(OnceLock::new()) }
    }

    pub fn from_algebra(alg: Algebra) -> Result<FiniteRing> {
        if !alg.is_commutative() {
            return Err(Error::input("ring multiplication is not commutative"));
        }
        Ok(FiniteRing::wrap(alg))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    /// Z/p^k itself.
    pub fn zmod(p: u64, k: u32) -> Result<FiniteRing> {
        let zm = Zmod::new(p, k)?;
        Ok(FiniteRing::over(zm))
    }

    pub fn over(zm: Zmod) -> FiniteRing {
        FiniteRing::wrap(Algebra::build(zm, 1, vec![vec![(0, 1)]], vec![1], Span::zero(zm, 1)).algebra)
    }

    /// Ring from dense structure constants `mul[i][j][k]` and a unit vector.
    pub fn from_dense(zm: Zmod, mul: &[Vec<Vec<u64>>], one: &[u64]) -> Result<FiniteRing> {
        let q = Algebra::from_dense(zm, mul, one, &[])?;
        FiniteRing::from_algebra(q.algebra)
    }

    pub fn zm(&self) -> Zmod {
        self.alg.zmod()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.alg.is_zero_algebra()
    }

    pub fn size_exceeds(&self, bound_log: u32) -> bool {
        self.log_size() > bound_log
    }

    // ---- ideals ----

    pub fn ideal(&self, gens: &[Elem]) -> Ideal {
        Ideal { span: self.alg.ideal_closure(gens, false) }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal { span: self.relations().clone() }
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal { span: Span::full(self.zm(), self.dim()) }
    }

    pub fn is_unit_ideal(&self, i: &Ideal) -> bool {
        i.span.is_full()
    }

    pub fn is_zero_ideal(&self, i: &Ideal) -> bool {
        i.span == *self.relations()
    }

    pub fn contains(&self, i: &Ideal, x: &[u64]) -> bool {
        i.span.contains(x)
    }

    pub fn ideal_contains(&self, big: &Ideal, small: &Ideal) -> bool {
        big.span.contains_span(&small.span)
    }

    /// Nonzero canonical Howell rows of the ideal (an additive generating set).
    pub fn ideal_basis(&self, i: &Ideal) -> Vec<Elem> {
        i.span
            .rows()
            .iter()
            .map(|r| self.reduced(r.clone()))
            .filter(|r| !self.is_zero(r))
            .collect()
    }

    /// log_p of the number of elements of the ideal.
    pub fn ideal_log_size(&self, i: &Ideal) -> u32 {
        i.span.log_size() - self.relations().log_size()
    }

    pub fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal { span: a.span.join(&b.span) }
    }

    pub fn ideal_product(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal { span: self.alg.product_span(&a.span, &b.span) }
    }

    pub fn ideal_intersection(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal { span: a.span.intersect(&b.span) }
    }

    pub fn ideal_power(&self, a: &Ideal, e: u32) -> Ideal {
        let mut r = self.unit_ideal();
        for _ in 0..e {
            r = self.ideal_product(&r, a);
        }
        r
    }

    /// Extension of an ideal along x ↦ x·s for a scaling element list: the
    /// ideal generated by images under a ring map.
    pub fn ideal_image(&self, src: &FiniteRing, f: &Hom, i: &Ideal) -> Ideal {
        let imgs: Vec<Elem> = src.ideal_basis(i).iter().map(|x| f.apply(self, x)).collect();
        self.ideal(&imgs)
    }

    pub fn ideal_preimage(&self, f: &Hom, j: &Ideal) -> Ideal {
        let k = Solver::new(self.zm(), self.dim(), &f.images, &j.span).kernel();
        Ideal { span: k.join(self.relations()) }
    }

    /// {r : r·I = 0}.
    pub fn annihilator(&self, i: &Ideal) -> Ideal {
        let mut ann = Span::full(self.zm(), self.dim());
        for g in self.ideal_basis(i) {
            let k = self.mult_solver(&g, true).kernel().join(self.relations());
            ann = ann.intersect(&k);
        }
        Ideal { span: ann }
    }

    /// {r : r·x ∈ I}.
    pub fn colon(&self, i: &Ideal, x: &[u64]) -> Ideal {
        let images: Vec<Elem> = self.basis_elements().iter().map(|e| self.mul(x, e)).collect();
        let k = Solver::new(self.zm(), self.dim(), &images, &i.span).kernel();
        Ideal { span: k.join(self.relations()) }
    }

    pub fn quotient(&self, i: &Ideal) -> RingQuotient {
        RingQuotient::from_algebra_quotient(self.alg.quotient(&i.span))
    }

    /// A small generating set: greedily keeps basis rows not in the ideal of
    /// the previously kept ones.
    pub fn ideal_generators(&self, i: &Ideal) -> Vec<Elem> {
        let mut kept: Vec<Elem> = Vec::new();
        let mut cur = self.zero_ideal();
        for g in self.ideal_basis(i) {
            if !cur.span.contains(&g) {
                kept.push(g);
                cur = self.ideal(&kept);
                if cur == *i {
                    break;
                }
            }
        }
        kept
    }

    // ---- local structure ----

    /// Maximal ideal, residue field and its degree; errors on the zero ring
    /// and on non-local rings.
    pub fn local(&self) -> Result<&LocalData> {
        self.local.get_or_init(|| self.compute_local()).as_ref().map_err(|e| e.clone())
    }

    pub fn is_local(&self) -> bool {
        self.local().is_ok()
    }

    fn compute_local(&self) -> Result<LocalData> {
        if self.is_zero_ring() {
            return Err(Error::input("the zero ring is not local"));
        }
        let zm = self.zm();
        let p = zm.p();
        let pr = self.quotient(&self.ideal(&[self.scalar(p)]));
        let q1 = &pr.ring;
        // x ↦ x^(p^e) kills exactly the nilradical once p^e exceeds the F_p-dimension
        let fp_dim = q1.log_size() as u64;
        let mut e = 0;
        let mut pe = 1u64;
        while pe <= fp_dim {
            pe *= p;
            e += 1;
        }
        let frob_pow: Vec<Elem> = q1
            .basis_elements()
            .iter()
            .map(|b| {
                let mut y = b.clone();
                for _ in 0..e {
                    y = q1.pow(&y, p);
                }
                y
            })
            .collect();
        let nil = Solver::new(zm, q1.dim(), &frob_pow, q1.relations()).kernel();
        let mut gens: Vec<Elem> = nil.rows().iter().map(|r| self.reduced(pr.lift(r, self.dim()))).collect();
        gens.push(self.scalar(p));
        let max_ideal = self.ideal(&gens);
        let residue = self.quotient(&max_ideal);
        let k = &residue.ring;
        if k.is_zero_ring() {
            return Err(Error::invariant("residue ring is zero"));
        }
        let frob_minus_id: Vec<Elem> = k.basis_elements().iter().map(|b| k.sub(&k.pow(b, p), b)).collect();
        let fixed = Solver::new(zm, k.dim(), &frob_minus_id, k.relations()).kernel();
        let factors = fixed.log_size() - k.relations().intersect(&fixed).log_size();
        if factors != 1 {
            return Err(Error::input(format!("ring is not local: reduction has {factors} field factors")));
        }
        let f = k.log_size();
        Ok(LocalData { max_ideal, residue, f })
    }

    pub fn max_ideal(&self) -> Result<&Ideal> {
        Ok(&self.local()?.max_ideal)
    }

    pub fn residue_field(&self) -> Result<&RingQuotient> {
        Ok(&self.local()?.residue)
    }

    pub fn residue_degree(&self) -> Result<u32> {
        Ok(self.local()?.f)
    }

    /// Residue field order q.
    pub fn residue_order(&self) -> Result<u64> {
        Ok(self.zm().p().pow(self.residue_degree()?))
    }

    /// Length of a finite module of p^log_size elements over this local ring.
    pub fn length_from_log_size(&self, log_size: u32) -> Result<u32> {
        let f = self.residue_degree()?;
        if log_size % f != 0 {
            return Err(Error::invariant("module size is not a power of the residue field order"));
        }
        Ok(log_size / f)
    }

    /// Length of R/I.
    pub fn quotient_length(&self, i: &Ideal) -> Result<u32> {
        self.length_from_log_size(self.log_size() - self.ideal_log_size(i))
    }

    /// Length of the ideal as an R-module.
    pub fn ideal_length(&self, i: &Ideal) -> Result<u32> {
        self.length_from_log_size(self.ideal_log_size(i))
    }

    /// Minimal number of generators of I: dim of I/mI over the residue field.
    pub fn min_generators(&self, i: &Ideal) -> Result<u32> {
        let m = self.max_ideal()?;
        let mi = self.ideal_product(m, i);
        self.length_from_log_size(i.span.log_size() - mi.span.log_size())
    }

    pub fn is_principal(&self, i: &Ideal) -> Result<bool> {
        Ok(self.min_generators(i)? <= 1)
    }

    pub fn embedding_dimension(&self) -> Result<u32> {
        let m = self.max_ideal()?.clone();
        self.min_generators(&m)
    }

    pub fn socle(&self) -> Result<Ideal> {
        let m = self.max_ideal()?.clone();
        Ok(self.annihilator(&m))
    }

    /// Artinian Gorenstein test: the socle is one-dimensional.
    pub fn is_gorenstein(&self) -> Result<bool> {
        let s = self.socle()?;
        Ok(self.ideal_length(&s)? == 1)
    }

    pub fn residue(&self, x: &[u64]) -> Result<Elem> {
        Ok(self.local()?.residue.project(x))
    }

    /// Nilpotent elements of a local ring are exactly the maximal ideal.
    pub fn is_nonunit(&self, x: &[u64]) -> Result<bool> {
        Ok(self.max_ideal()?.span.contains(x))
    }

    pub fn inverse_or_err(&self, x: &[u64]) -> Result<Elem> {
        self.inverse(x).ok_or_else(|| Error::input("element is not a unit"))
    }

    /// (x − y)/2-style helper: multiplies by the inverse of 2.
    pub fn halve(&self, x: &[u64]) -> Elem {
        self.scale(self.zm().half(), x)
    }

    // ---- constructors ----

    /// R[x]/(x^d + c_{d-1}x^{d-1} + ... + c_0) with `tail` = [c_0, ..., c_{d-1}].
    pub fn adjoin_root(&self, tail: &[Elem]) -> Extension {
        let d = tail.len();
        assert!(d > 0, "polynomial must have positive degree");
        let n = self.dim();
        let zm = self.zm();
        // powers x^e for e < 2d - 1 as coefficient lists in R
        let mut powers: Vec<Vec<Elem>> = Vec::new();
        for e in 0..(2 * d).max(1) {
            let mut c = vec![self.zero(); d];
            if e < d {
                c[e] = self.one();
            } else {
                let prev = &powers[e - 1];
                let top = prev[d - 1].clone();
                for i in (1..d).rev() {
                    c[i] = prev[i - 1].clone();
                }
                c[0] = self.zero();
                for i in 0..d {
                    c[i] = self.sub(&c[i], &self.mul(&top, &tail[i]));
                }
            }
            powers.push(c);
        }
        let dim = n * d;
        let idx = |power: usize, j: usize| power * n + j;
        let mut table: Vec<Product> = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let (pa, ja) = (a / n, a % n);
                let (pb, jb) = (b / n, b % n);
                let base = self.mul(&self.basis(ja), &self.basis(jb));
                let mut v = vec![0u64; dim];
                for (s, coeff) in powers[pa + pb].iter().enumerate() {
                    let c = self.mul(&base, coeff);
                    for (j, &x) in c.iter().enumerate() {
                        v[idx(s, j)] = zm.add(v[idx(s, j)], x);
                    }
                }
                table.push(sparse(&v));
            }
        }
        let rel = Span::from_rows(
            zm,
            dim,
            (0..d).flat_map(|s| {
                self.relations().rows().iter().map(move |r| {
                    let mut v = vec![0; dim];
                    v[s * n..(s + 1) * n].copy_from_slice(r);
                    v
                })
            }),
        );
        let mut one = vec![0; dim];
        one[..n].copy_from_slice(&self.one());
        let q = Algebra::build(zm, dim, table, one, rel);
        let ring = FiniteRing::wrap(q.algebra);
        let embed = |v: &[u64], s: usize| -> Elem {
            let mut w = vec![0; dim];
            w[s * n..(s + 1) * n].copy_from_slice(v);
            q.projection.apply(&ring, &w)
        };
        let base_map = Hom { images: self.basis_elements().iter().map(|b| embed(b, 0)).collect() };
        let root = if d > 1 { embed(&self.one(), 1) } else { ring.reduced(base_map.apply(&ring, &self.neg(&tail[0]))) };
        Extension { ring, base_map, root }
    }

    /// R[x]/(x^d).
    pub fn truncated(&self, d: usize) -> Extension {
        self.adjoin_root(&vec![self.zero(); d])
    }

    /// R × S with its two projections.
    pub fn product(&self, other: &FiniteRing) -> Product2 {
        let zm = self.zm();
        assert_eq!(zm, other.zm());
        let (n, m) = (self.dim(), other.dim());
        let dim = n + m;
        let mut table: Vec<Product> = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let prod = if a < n && b < n {
                    self.table()[a * n + b].clone()
                } else if a >= n && b >= n {
                    other.table()[(a - n) * m + (b - n)].iter().map(|&(k, c)| (k + n as u32, c)).collect()
                } else {
                    Vec::new()
                };
                table.push(prod);
            }
        }
        let mut one = self.one();
        one.extend(other.one());
        let rel = Span::from_rows(
            zm,
            dim,
            self.relations()
                .rows()
                .iter()
                .map(|r| {
                    let mut v = r.clone();
                    v.resize(dim, 0);
                    v
                })
                .chain(other.relations().rows().iter().map(|r| {
                    let mut v = vec![0; n];
                    v.extend_from_slice(r);
                    v
                })),
        );
        let ring = FiniteRing::wrap(Algebra::build(zm, dim, table, one, rel).algebra);
        let p1 = Hom { images: (0..dim).map(|i| if i < n { self.basis(i) } else { self.zero() }).collect() };
        let p2 = Hom { images: (0..dim).map(|i| if i >= n { other.basis(i - n) } else { other.zero() }).collect() };
        Product2 { ring, p1, p2 }
    }

    /// The subring whose additive group is `span` (must contain 1 and be
    /// closed under multiplication), with its inclusion.
    pub fn subring(&self, span: &Span) -> Result<Subring> {
        let zm = self.zm();
        let span = span.join(self.relations());
        if !span.contains(&self.one()) {
            return Err(Error::invariant("subring span does not contain 1"));
        }
        let gens: Vec<Elem> = span.rows().iter().map(|r| self.reduced(r.clone())).collect();
        let g = gens.len();
        let solver = Solver::new(zm, g, &gens, self.relations());
        let mut table = Vec::with_capacity(g * g);
        for a in &gens {
            for b in &gens {
                let c = solver
                    .solve(&self.mul(a, b))
                    .ok_or_else(|| Error::invariant("subring span is not closed under multiplication"))?;
                table.push(sparse(&c));
            }
        }
        let one = solver.solve(&self.one()).unwrap();
        let rel = solver.kernel();
        let q = Algebra::build(zm, g, table, one, rel);
        let ring = FiniteRing::wrap(q.algebra);
        let inclusion = Hom { images: q.section.iter().map(|&i| gens[i].clone()).collect() };
        Ok(Subring { ring, inclusion })
    }

    /// {(a, b) : f(a) = g(b)} for surjections f: self → C, g: other → C.
    pub fn fiber_product(&self, other: &FiniteRing, c: &FiniteRing, f: &Hom, g: &Hom) -> Result<FiberProduct> {
        f.check_ring_hom(self, c)?;
        g.check_ring_hom(other, c)?;
        if !f.is_surjective(c) || !g.is_surjective(c) {
            return Err(Error::input("fiber product requires surjective maps"));
        }
        let prod = self.product(other);
        let images: Vec<Elem> = f.images.iter().cloned().chain(g.images.iter().map(|y| c.neg(y))).collect();
        let diff = Solver::new(self.zm(), prod.ring.dim(), &images, c.relations()).kernel();
        let sub = prod.ring.subring(&diff)?;
        let p1 = sub.inclusion.then(&prod.p1, self);
        let p2 = sub.inclusion.then(&prod.p2, other);
        Ok(FiberProduct { ring: sub.ring, p1, p2 })
    }

    /// A finite field F_{p^f}, built as F_p[x]/(g) for the first monic
    /// irreducible g of degree f in lexicographic order.
    pub fn galois_field(p: u64, f: u32) -> Result<FiniteRing> {
        let base = FiniteRing::zmod(p, 1)?;
        if f == 1 {
            return Ok(base);
        }
        let tail = first_irreducible(p, f as usize);
        let tail: Vec<Elem> = tail.into_iter().map(|c| vec![c]).collect();
        Ok(base.adjoin_root(&tail).ring)
    }
}

/// Coefficients c_0..c_{d-1} of the first monic irreducible polynomial of
/// degree d over F_p, found by exhaustive search.
pub fn first_irreducible(p: u64, d: usize) -> Vec<u64> {
    let count = p.pow(d as u32);
    for code in 0..count {
        let mut tail = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            tail.push(c % p);
            c /= p;
        }
        let mut poly = tail.clone();
        poly.push(1);
        if is_irreducible(p, &poly) {
            return tail;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = crate::zmod::Zmod::new(p, 1).unwrap().inv(b[db]).unwrap();
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let q = top * lead_inv % p;
            let shift = r.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - q * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let d = poly.len() - 1;
    for dd in 1..=d / 2 {
        for code in 0..p.pow(dd as u32) {
            let mut div = Vec::with_capacity(dd + 1);
            let mut c = code;
            for _ in 0..dd {
                div.push(c % p);
                c /= p;
            }
            div.push(1);
            if poly_rem(p, poly, &div).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub ring: FiniteRing,
    pub base_map: Hom,
    pub root: Elem,
}

#[derive(Clone, Debug)]
pub struct Product2 {
    pub ring: FiniteRing,
    pub p1: Hom,
    pub p2: Hom,
}

#[derive(Clone, Debug)]
pub struct Subring {
    pub ring: FiniteRing,
    pub inclusion: Hom,
}

#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub ring: FiniteRing,
    pub p1: Hom,
    pub p2: Hom,
}
