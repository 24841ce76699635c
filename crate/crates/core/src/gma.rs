//! Cayley-Hamilton algebras, idempotent lifting and generalized matrix algebras.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{sparse, Algebra, Elem, Hom, Product};
use crate::error::{Error, Result};
use crate::group::{GroupAlgebra, MarkedGroup};
use crate::howell::{Solver, Span};
use crate::psrep::{Mat2, MatrixRep2, Pseudorep2, ResidualSplit};
use crate::ring::{FiniteRing, Ideal, RingQuotient};

/// Exhaustive CH checks are run when the algebra has at most this many elements.
pub const EXHAUSTIVE_LIMIT: u64 = 15_625;

/// An algebra E over a commutative base A with a trace E → A whose degree-2
/// law d(x) = (t(x)² − t(x²))/2 is Cayley-Hamilton.
#[derive(Clone, Debug)]
pub struct ChAlgebra {
    pub base: FiniteRing,
    pub algebra: Algebra,
    /// Structure map A → E.
    pub structure: Hom,
    /// Trace of each generator of E, in A.
    pub trace_gens: Vec<Elem>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChReport {
    pub elements_checked: u64,
    pub exhaustive: bool,
}

impl ChAlgebra {
    pub fn trace(&self, x: &[u64]) -> Elem {
        let a = &self.base;
        let terms: Vec<(u64, &Elem)> = x.iter().copied().zip(self.trace_gens.iter()).filter(|(c, _)| *c != 0).collect();
        a.combine(&terms)
    }

    pub fn det(&self, x: &[u64]) -> Elem {
        let a = &self.base;
        let t = self.trace(x);
        a.halve(&a.sub(&a.mul(&t, &t), &self.trace(&self.algebra.mul(x, x))))
    }

    pub fn scalar(&self, a: &[u64]) -> Elem {
        self.structure.apply(&self.algebra, a)
    }

    /// x² − t(x)x + d(x)·1.
    pub fn ch_residual(&self, x: &[u64]) -> Elem {
        let e = &self.algebra;
        let x2 = e.mul(x, x);
        let tx = e.mul(&self.scalar(&self.trace(x)), x);
        e.add(&e.sub(&x2, &tx), &self.scalar(&self.det(x)))
    }

    /// xy + yx − t(x)y − t(y)x + (t(x)t(y) − t(xy))·1.
    pub fn ch_polarized(&self, x: &[u64], y: &[u64]) -> Elem {
        polarized(&self.algebra, &self.base, &|z| self.trace(z), &|a| self.scalar(a), x, y)
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Elem {
        let m = self.algebra.zmod().modulus();
        self.algebra.reduced((0..self.algebra.dim()).map(|_| rng.gen_range(0..m)).collect())
    }

    /// Verifies: trace well defined and central, structure map central and
    /// injective, and the CH identity (exhaustively for small algebras,
    /// otherwise on basis elements plus `samples` seeded random elements).
    pub fn check_invariants(&self, samples: usize, seed: u64) -> Result<ChReport> {
        let e = &self.algebra;
        let a = &self.base;
        for r in e.relations().rows() {
            if !a.is_zero(&self.trace(r)) {
                return Err(Error::invariant("trace does not vanish on the algebra relations"));
            }
        }
        let basis = e.basis_elements();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                if self.trace(&e.mul(x, y)) != self.trace(&e.mul(y, x)) {
                    return Err(Error::invariant(format!("trace is not central on generators ({i},{j})")));
                }
            }
        }
        self.structure.check_ring_hom(a, e)?;
        if !self.structure.is_injective(a, e) {
            return Err(Error::invariant("structure map from the base is not injective"));
        }
        for s in &self.structure.images {
            for x in &basis {
                if e.mul(s, x) != e.mul(x, s) {
                    return Err(Error::invariant("base does not map into the center"));
                }
            }
        }
        let size = (e.zmod().p() as f64).powi(e.log_size() as i32);
        if size <= EXHAUSTIVE_LIMIT as f64 {
            let elems = e.elements();
            for x in &elems {
                if !e.is_zero(&self.ch_residual(x)) {
                    return Err(Error::invariant("Cayley-Hamilton identity fails"));
                }
            }
            return Ok(ChReport { elements_checked: elems.len() as u64, exhaustive: true });
        }
        for x in &basis {
            if !e.is_zero(&self.ch_residual(x)) {
                return Err(Error::invariant("Cayley-Hamilton identity fails on a generator"));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = self.random_element(&mut rng);
            if !e.is_zero(&self.ch_residual(&x)) {
                return Err(Error::invariant("Cayley-Hamilton identity fails on a sampled element"));
            }
        }
        Ok(ChReport { elements_checked: (basis.len() + samples) as u64, exhaustive: false })
    }

    /// Radical {x : t(xy) ∈ m_A for all y}, as a span; checked nilpotent.
    /// Returns the span and its nilpotency class.
    pub fn radical(&self) -> Result<(Span, usize)> {
        let e = &self.algebra;
        let a = &self.base;
        let res = a.residue_field()?;
        let k = &res.ring;
        let n = e.dim();
        let kd = k.dim();
        let basis = e.basis_elements();
        let target = Span::from_rows(
            a.zmod(),
            n * kd,
            (0..n).flat_map(|b| {
                k.relations().rows().iter().map(move |row| {
                    let mut v = vec![0; n * kd];
                    v[b * kd..(b + 1) * kd].copy_from_slice(row);
                    v
                })
            }),
        );
        let images: Vec<Vec<u64>> = basis
            .iter()
            .map(|x| basis.iter().flat_map(|y| res.project(&self.trace(&e.mul(x, y)))).collect())
            .collect();
        let rad = Solver::new(a.zmod(), n, &images, &target).kernel().join(e.relations());
        let mut power = rad.clone();
        let mut class = 1;
        while power != *e.relations() {
            power = e.product_span(&power, &rad);
            class += 1;
            if class > (e.log_size() as usize) + 2 {
                return Err(Error::invariant("trace radical is not nilpotent"));
            }
        }
        Ok((rad, class))
    }

    /// M_2(A).
    pub fn matrix_algebra(a: &FiniteRing) -> ChAlgebra {
        ChAlgebra::standard_gma(a, &a.one())
    }

    /// The GMA [[A, A], [A, A]] with B·C → A given by b·c = m·bc.
    pub fn standard_gma(a: &FiniteRing, m: &[u64]) -> ChAlgebra {
        // blocks 0 = E11, 1 = E12, 2 = E21, 3 = E22
        let one = a.one();
        let rule = |x: usize, y: usize| -> Option<(usize, Elem)> {
            match (x, y) {
                (0, 0) => Some((0, one.clone())),
                (0, 1) => Some((1, one.clone())),
                (1, 2) => Some((0, m.to_vec())),
                (1, 3) => Some((1, one.clone())),
                (2, 0) => Some((2, one.clone())),
                (2, 1) => Some((3, m.to_vec())),
                (3, 2) => Some((2, one.clone())),
                (3, 3) => Some((3, one.clone())),
                _ => None,
            }
        };
        block_algebra(a, 4, &rule, &[0, 3], &|blk| blk == 0 || blk == 3)
    }

    /// A × A with trace (a, b) ↦ a + b.
    pub fn diagonal_pair(a: &FiniteRing) -> ChAlgebra {
        let one = a.one();
        let rule = |x: usize, y: usize| if x == y { Some((x, one.clone())) } else { None };
        block_algebra(a, 2, &rule, &[0, 1], &|_| true)
    }

    /// Element Σ x_blk E_blk of an algebra built by [`block_algebra`].
    pub fn block_element(&self, blocks: &[Elem]) -> Elem {
        self.algebra.reduced(blocks.iter().flat_map(|b| b.iter().copied()).collect())
    }

    pub fn matrix_element(&self, m: &Mat2) -> Elem {
        self.block_element(m)
    }

    /// Quotient by a two-sided ideal of E that the trace kills, over the base
    /// quotient A/J_A where J_A must satisfy s(J_A) ⊆ ideal.
    pub fn quotient(&self, ideal: &Span, base_ideal: &Ideal) -> Result<(ChAlgebra, Hom, RingQuotient)> {
        let e = &self.algebra;
        let a = &self.base;
        let base_q = a.quotient(base_ideal);
        for r in ideal.rows() {
            let t = self.trace(r);
            if !a.contains(base_ideal, &t) {
                return Err(Error::invariant("trace does not descend to the quotient"));
            }
        }
        let q = e.quotient(ideal);
        let structure = Hom { images: base_q.section.iter().map(|&i| q.projection.apply(&q.algebra, &self.structure.images[i])).collect() };
        let trace_gens = q.section.iter().map(|&i| base_q.project(&self.trace_gens[i])).collect();
        let ch = ChAlgebra { base: base_q.ring.clone(), algebra: q.algebra, structure, trace_gens };
        Ok((ch, q.projection, base_q))
    }
}

fn polarized(
    e: &Algebra,
    a: &FiniteRing,
    trace: &dyn Fn(&[u64]) -> Elem,
    scalar: &dyn Fn(&[u64]) -> Elem,
    x: &[u64],
    y: &[u64],
) -> Elem {
    let xy = e.mul(x, y);
    let yx = e.mul(y, x);
    let (tx, ty) = (trace(x), trace(y));
    let c = a.sub(&a.mul(&tx, &ty), &trace(&xy));
    let mut out = e.add(&xy, &yx);
    out = e.sub(&out, &e.mul(&scalar(&tx), y));
    out = e.sub(&out, &e.mul(&scalar(&ty), x));
    e.add(&out, &scalar(&c))
}

/// Algebra free over A on `nblocks` symbols with symbol products given by
/// `rule`, unit the sum of `unit_blocks`, trace 1 on blocks where `traced`.
fn block_algebra(
    a: &FiniteRing,
    nblocks: usize,
    rule: &dyn Fn(usize, usize) -> Option<(usize, Elem)>,
    unit_blocks: &[usize],
    traced: &dyn Fn(usize) -> bool,
) -> ChAlgebra {
    let na = a.dim();
    let dim = na * nblocks;
    let zm = a.zm();
    let mut table: Vec<Product> = Vec::with_capacity(dim * dim);
    for x in 0..dim {
        for y in 0..dim {
            let (bx, jx) = (x / na, x % na);
            let (by, jy) = (y / na, y % na);
            match rule(bx, by) {
                Some((blk, c)) => {
                    let coeff = a.mul(&a.mul(&a.basis(jx), &a.basis(jy)), &c);
                    let mut v = vec![0; dim];
                    v[blk * na..(blk + 1) * na].copy_from_slice(&coeff);
                    table.push(sparse(&v));
                }
                None => table.push(Vec::new()),
            }
        }
    }
    let rel = Span::from_rows(
        zm,
        dim,
        (0..nblocks).flat_map(|b| {
            a.relations().rows().iter().map(move |row| {
                let mut v = vec![0; dim];
                v[b * na..(b + 1) * na].copy_from_slice(row);
                v
            })
        }),
    );
    let embed = |x: &[u64]| -> Elem {
        let mut v = vec![0; dim];
        for &b in unit_blocks {
            v[b * na..(b + 1) * na].copy_from_slice(x);
        }
        v
    };
    let algebra = Algebra::build(zm, dim, table, embed(&a.one()), rel).algebra;
    debug_assert_eq!(algebra.dim(), dim);
    let structure = Hom { images: a.basis_elements().iter().map(|b| algebra.reduced(embed(b))).collect() };
    let trace_gens = (0..dim).map(|i| if traced(i / na) { a.basis(i % na) } else { a.zero() }).collect();
    ChAlgebra { base: a.clone(), algebra, structure, trace_gens }
}

/// A CH quotient of A[G] together with the map from A[G] and the induced
/// representation G → E^×.
#[derive(Clone, Debug)]
pub struct ChQuotient {
    pub ch: ChAlgebra,
    pub group_algebra: GroupAlgebra,
    pub projection: Hom,
    /// Source generator of A[G] behind each generator of E.
    pub section: Vec<usize>,
    pub psrep: Pseudorep2,
    /// Image of each group element.
    pub rho: Vec<Elem>,
    /// Number of closure rounds until the CH identity held on the quotient.
    pub rounds: usize,
}

/// Quotient of A[G] by the two-sided ideal generated by the polarized
/// Cayley-Hamilton elements.
pub fn ch_quotient(d: &Pseudorep2) -> Result<ChQuotient> {
    d.require_valid()?;
    let ga = d.group_algebra();
    let g = &d.group;
    let a = &d.ring;
    let alg = &ga.algebra;
    let trace_gens = d.trace_on_generators(&ga);
    let trace = |x: &[u64]| -> Elem {
        let terms: Vec<(u64, &Elem)> = x.iter().copied().zip(trace_gens.iter()).filter(|(c, _)| *c != 0).collect();
        a.combine(&terms)
    };
    let scalar = |x: &[u64]| ga.scalar(x);
    let mut gens = Vec::new();
    for x in 0..g.order() {
        for y in x..g.order() {
            let p = polarized(alg, a, &trace, &scalar, &ga.element(x), &ga.element(y));
            if !alg.is_zero(&p) {
                gens.push(p);
            }
        }
    }
    let multipliers: Vec<Elem> = a
        .basis_elements()
        .iter()
        .map(|b| ga.scalar(b))
        .chain(g.generators().iter().map(|&s| ga.element(s)))
        .collect();
    let mut ideal = two_sided_closure(alg, &gens, &multipliers);
    let mut rounds = 1;
    loop {
        for r in ideal.rows() {
            if !a.is_zero(&trace(r)) {
                return Err(Error::invariant("trace does not descend to the Cayley-Hamilton quotient"));
            }
        }
        let q = alg.quotient(&ideal);
        let e = &q.algebra;
        let structure = Hom { images: a.basis_elements().iter().map(|b| q.projection.apply(e, &ga.scalar(b))).collect() };
        let ch = ChAlgebra {
            base: a.clone(),
            algebra: e.clone(),
            structure,
            trace_gens: q.section.iter().map(|&i| trace_gens[i].clone()).collect(),
        };
        let basis = e.basis_elements();
        let mut extra = Vec::new();
        for (i, x) in basis.iter().enumerate() {
            for y in &basis[i..] {
                let p = ch.ch_polarized(x, y);
                if !e.is_zero(&p) {
                    let mut lift = vec![0; alg.dim()];
                    for (&c, &s) in p.iter().zip(&q.section) {
                        lift[s] = c;
                    }
                    extra.push(lift);
                }
            }
        }
        if extra.is_empty() {
            let rho = (0..g.order()).map(|x| q.projection.apply(e, &ga.element(x))).collect();
            return Ok(ChQuotient { ch, group_algebra: ga.clone(), projection: q.projection, section: q.section, psrep: d.clone(), rho, rounds });
        }
        ideal = two_sided_closure(alg, &[ideal.rows().to_vec(), extra].concat(), &multipliers);
        rounds += 1;
    }
}

/// Idempotents of trace 1, by scanning every element of E; a budget error
/// when E has more than `limit` elements.
pub fn rank_one_idempotents(ch: &ChAlgebra, limit: usize) -> Result<Vec<Elem>> {
    let e = &ch.algebra;
    let count = (e.zmod().p() as f64).powi(e.log_size() as i32);
    if count > limit as f64 {
        return Err(Error::budget(format!("{count} elements exceed the idempotent scan limit")));
    }
    let one = ch.base.one();
    Ok(e.elements().into_iter().filter(|x| e.mul(x, x) == *x && ch.trace(x) == one).collect())
}

/// Two-sided ideal generated by `gens`, closing under left and right
/// multiplication by a generating set of the algebra.
pub fn two_sided_closure(alg: &Algebra, gens: &[Elem], multipliers: &[Elem]) -> Span {
    let mut span = alg.relations().with_rows(gens.iter().cloned());
    let mut frontier: Vec<Elem> = span.rows().to_vec();
    while !frontier.is_empty() {
        let mut new_rows = Vec::new();
        for r in &frontier {
            for m in multipliers {
                new_rows.push(alg.mul(m, r));
                new_rows.push(alg.mul(r, m));
            }
        }
        let next = span.with_rows(new_rows);
        if next.log_size() == span.log_size() {
            break;
        }
        frontier = next.rows().iter().filter(|r| !span.contains(r)).cloned().collect();
        span = next;
    }
    span
}

/// Newton iteration e ← 3e² − 2e³ until e² = e.
pub fn lift_idempotent(e: &Algebra, x: &[u64], max_iter: usize) -> Result<(Elem, usize)> {
    let mut cur = x.to_vec();
    for it in 0..=max_iter {
        let sq = e.mul(&cur, &cur);
        if sq == cur {
            return Ok((cur, it));
        }
        let cube = e.mul(&sq, &cur);
        cur = e.sub(&e.scale(3, &sq), &e.scale(2, &cube));
    }
    Err(Error::invariant("idempotent iteration did not converge"))
}

#[derive(Clone, Debug)]
pub struct LiftedIdempotents {
    pub e1: Elem,
    pub e2: Elem,
    /// Newton steps spent on e1 and on the re-lift of e2.
    pub iterations: usize,
    pub radical_class: usize,
}

/// Lifts approximate idempotents (idempotent modulo the radical) to an
/// orthogonal pair e1 + e2 = 1.
pub fn lift_idempotents(ch: &ChAlgebra, approx_e1: &[u64], approx_e2: &[u64]) -> Result<LiftedIdempotents> {
    let e = &ch.algebra;
    let (rad, class) = ch.radical()?;
    for x in [approx_e1, approx_e2] {
        if !rad.contains(&e.sub(&e.mul(x, x), x)) {
            return Err(Error::input("approximate idempotent is not idempotent modulo the radical"));
        }
    }
    let (e1, it1) = lift_idempotent(e, approx_e1, class + 1)?;
    let (e2p, it2) = lift_idempotent(e, approx_e2, class + 1)?;
    let c = e.sub(&e.one(), &e1);
    let e2pp = e.mul(&e.mul(&c, &e2p), &c);
    let (e2, it3) = lift_idempotent(e, &e2pp, class + 1)?;
    if e.add(&e1, &e2) != e.one() || !e.is_zero(&e.mul(&e1, &e2)) || !e.is_zero(&e.mul(&e2, &e1)) {
        return Err(Error::invariant("lifted idempotents are not complementary"));
    }
    Ok(LiftedIdempotents { e1, e2, iterations: it1.max(it2).max(it3), radical_class: class })
}

/// Residual preimages (g0 − χ2(g0))/(χ1(g0) − χ2(g0)) and its complement,
/// for the first g0 separating the residual characters.
pub fn residual_idempotent_preimages(q: &ChQuotient, split: &ResidualSplit) -> Result<(Elem, Elem)> {
    if !split.multiplicity_free {
        return Err(Error::input("residual split is not multiplicity free"));
    }
    let a = &q.ch.base;
    let e = &q.ch.algebra;
    let g0 = (0..q.psrep.group.order())
        .find(|&x| split.chi1[x] != split.chi2[x])
        .expect("multiplicity free");
    let lift = |y: &Elem| a.reduced(split.residue.lift(y, a.dim()));
    let c1 = lift(&split.chi1[g0]);
    let c2 = lift(&split.chi2[g0]);
    let denom = a.inverse_or_err(&a.sub(&c1, &c2))?;
    let x1 = e.mul(&q.ch.scalar(&denom), &e.sub(&q.rho[g0], &q.ch.scalar(&c2)));
    let x2 = e.mul(&q.ch.scalar(&a.neg(&denom)), &e.sub(&q.rho[g0], &q.ch.scalar(&c1)));
    Ok((x1, x2))
}

/// Coordinates of x in the decomposition [[A, B], [C, A]].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coordinates {
    pub a11: Elem,
    pub b: Elem,
    pub c: Elem,
    pub a22: Elem,
}

/// A CH algebra with orthogonal idempotents e1 (κ-side) and e2 and the
/// resulting generalized matrix algebra data.
#[derive(Clone, Debug)]
pub struct GmaAlgebra {
    pub ch: ChAlgebra,
    pub e1: Elem,
    pub e2: Elem,
    /// e1 E e2 and e2 E e1 as spans in E (with the relations).
    pub b_span: Span,
    pub c_span: Span,
    /// Minimal A-module generators of B and C.
    pub b_gens: Vec<Elem>,
    pub c_gens: Vec<Elem>,
    /// m(b_i, c_j) ∈ A.
    pub m_table: Vec<Vec<Elem>>,
    phi: [Solver; 2],
}

impl GmaAlgebra {
    pub fn new(ch: &ChAlgebra, e1: &[u64], e2: &[u64]) -> Result<GmaAlgebra> {
        let e = &ch.algebra;
        let a = &ch.base;
        let (e1, e2) = (e.reduced(e1.to_vec()), e.reduced(e2.to_vec()));
        if e.mul(&e1, &e1) != e1 || e.mul(&e2, &e2) != e2 {
            return Err(Error::input("e1 and e2 must be idempotent"));
        }
        if !e.is_zero(&e.mul(&e1, &e2)) || !e.is_zero(&e.mul(&e2, &e1)) || e.add(&e1, &e2) != e.one() {
            return Err(Error::input("e1 and e2 must be orthogonal with sum 1"));
        }
        let basis = e.basis_elements();
        let corner = |x: &Elem, y: &Elem| e.relations().with_rows(basis.iter().map(|b| e.mul(&e.mul(x, b), y)));
        let b_span = corner(&e1, &e2);
        let c_span = corner(&e2, &e1);
        let mut phi = Vec::new();
        for ei in [&e1, &e2] {
            let images: Vec<Elem> = a.basis_elements().iter().map(|b| e.mul(&ch.scalar(b), ei)).collect();
            let solver = Solver::new(a.zmod(), a.dim(), &images, e.relations());
            if solver.image() != corner(ei, ei) {
                return Err(Error::invariant("diagonal corner is not generated by the base"));
            }
            if solver.kernel() != *a.relations() {
                return Err(Error::invariant("diagonal corner is not free of rank one over the base"));
            }
            phi.push(solver);
        }
        let phi: [Solver; 2] = [phi.remove(0), phi.remove(0)];
        let mut g = GmaAlgebra {
            ch: ch.clone(),
            e1,
            e2,
            b_span,
            c_span,
            b_gens: Vec::new(),
            c_gens: Vec::new(),
            m_table: Vec::new(),
            phi,
        };
        g.b_gens = g.minimal_generators(&g.b_span)?;
        g.c_gens = g.minimal_generators(&g.c_span)?;
        g.m_table = g.b_gens.iter().map(|b| g.c_gens.iter().map(|c| g.m(b, c)).collect()).collect();
        Ok(g)
    }

    pub fn base(&self) -> &FiniteRing {
        &self.ch.base
    }

    fn a_span(&self, v: &Elem) -> Vec<Elem> {
        let e = &self.ch.algebra;
        self.ch.structure.images.iter().map(|s| e.mul(s, v)).collect()
    }

    fn minimal_generators(&self, span: &Span) -> Result<Vec<Elem>> {
        let e = &self.ch.algebra;
        let a = &self.ch.base;
        let rows: Vec<Elem> = span.rows().iter().map(|r| e.reduced(r.clone())).filter(|r| !e.is_zero(r)).collect();
        if rows.is_empty() {
            return Ok(Vec::new());
        }
        let m = a.max_ideal()?;
        let mb: Vec<Elem> = a
            .ideal_basis(m)
            .iter()
            .flat_map(|x| {
                let s = self.ch.scalar(x);
                rows.iter().map(move |r| e.mul(&s, r)).collect::<Vec<_>>()
            })
            .collect();
        let mut cur = e.relations().with_rows(mb);
        let mut gens = Vec::new();
        for r in rows {
            if cur.contains(&r) {
                continue;
            }
            cur = cur.with_rows(self.a_span(&r));
            gens.push(r);
        }
        Ok(gens)
    }

    /// φ_i: e_i E e_i → A.
    pub fn phi(&self, i: usize, x: &[u64]) -> Result<Elem> {
        let a = &self.ch.base;
        self.phi[i]
            .solve(x)
            .map(|v| a.reduced(v))
            .ok_or_else(|| Error::invariant("element is not in the diagonal corner"))
    }

    /// m(b, c) = φ1(bc).
    pub fn m(&self, b: &[u64], c: &[u64]) -> Elem {
        self.phi(0, &self.ch.algebra.mul(b, c)).expect("B·C lies in e1 E e1")
    }

    pub fn coordinates(&self, x: &[u64]) -> Coordinates {
        let e = &self.ch.algebra;
        let (e1, e2) = (&self.e1, &self.e2);
        let corner = |l: &Elem, r: &Elem| e.mul(&e.mul(l, x), r);
        Coordinates {
            a11: self.phi(0, &corner(e1, e1)).expect("corner"),
            b: corner(e1, e2),
            c: corner(e2, e1),
            a22: self.phi(1, &corner(e2, e2)).expect("corner"),
        }
    }

    pub fn reassemble(&self, c: &Coordinates) -> Elem {
        let e = &self.ch.algebra;
        let d1 = e.mul(&self.ch.scalar(&c.a11), &self.e1);
        let d2 = e.mul(&self.ch.scalar(&c.a22), &self.e2);
        e.add(&e.add(&d1, &c.b), &e.add(&c.c, &d2))
    }

    pub fn gma_trace(&self, x: &[u64]) -> Elem {
        let c = self.coordinates(x);
        self.ch.base.add(&c.a11, &c.a22)
    }

    pub fn gma_det(&self, x: &[u64]) -> Elem {
        let a = &self.ch.base;
        let c = self.coordinates(x);
        a.sub(&a.mul(&c.a11, &c.a22), &self.m(&c.b, &c.c))
    }

    /// Checks the GMA axioms and agreement with the CH law on generators.
    pub fn check(&self) -> Result<()> {
        let e = &self.ch.algebra;
        let basis = e.basis_elements();
        for x in &basis {
            let c = self.coordinates(x);
            if self.reassemble(&c) != *x {
                return Err(Error::invariant("GMA coordinates do not reassemble"));
            }
            if self.gma_trace(x) != self.ch.trace(x) {
                return Err(Error::invariant("GMA trace differs from the CH trace"));
            }
            if self.gma_det(x) != self.ch.det(x) {
                return Err(Error::invariant("GMA determinant differs from the CH determinant"));
            }
        }
        for x in &basis {
            for y in &basis {
                if self.gma_trace(&e.mul(x, y)) != self.gma_trace(&e.mul(y, x)) {
                    return Err(Error::invariant("GMA trace is not central"));
                }
            }
        }
        for b in &self.b_gens {
            for c in &self.c_gens {
                let m1 = self.m(b, c);
                let m2 = self.phi(1, &e.mul(c, b))?;
                if m1 != m2 {
                    return Err(Error::invariant("pairing differs between the two diagonal corners"));
                }
            }
        }
        Ok(())
    }

    /// Ideal of A generated by m(B, C).
    pub fn reducibility_ideal(&self) -> Ideal {
        let gens: Vec<Elem> = self.m_table.iter().flatten().cloned().collect();
        self.ch.base.ideal(&gens)
    }

    /// The four coordinates of ρ(g) for every g.
    pub fn coordinate_maps(&self, rho: &[Elem]) -> Result<Vec<Coordinates>> {
        let e = &self.ch.algebra;
        rho.iter()
            .map(|x| {
                if !e.is_unit(x) {
                    return Err(Error::input("representation value is not a unit"));
                }
                let c = self.coordinates(x);
                if self.reassemble(&c) != *x {
                    return Err(Error::invariant("coordinates do not reassemble"));
                }
                Ok(c)
            })
            .collect()
    }
}

/// Characters (φ1(e1ρe1), φ2(e2ρe2)) modulo J_D, with their verification.
#[derive(Clone, Debug)]
pub struct ReducibilityCertificate {
    pub ideal: Ideal,
    pub quotient: RingQuotient,
    pub chi1: Vec<Elem>,
    pub chi2: Vec<Elem>,
}

pub fn reducibility_certificate(gma: &GmaAlgebra, group: &MarkedGroup, rho: &[Elem]) -> Result<ReducibilityCertificate> {
    let a = &gma.ch.base;
    let ideal = gma.reducibility_ideal();
    let quotient = a.quotient(&ideal);
    let coords = gma.coordinate_maps(rho)?;
    let chi1: Vec<Elem> = coords.iter().map(|c| quotient.project(&c.a11)).collect();
    let chi2: Vec<Elem> = coords.iter().map(|c| quotient.project(&c.a22)).collect();
    let cert = ReducibilityCertificate { ideal, quotient, chi1, chi2 };
    verify_split(&cert.quotient.ring, group, &cert.chi1, &cert.chi2, rho, &gma.ch, &cert.quotient)?;
    Ok(cert)
}

pub(crate) fn verify_split(
    r: &FiniteRing,
    group: &MarkedGroup,
    chi1: &[Elem],
    chi2: &[Elem],
    rho: &[Elem],
    ch: &ChAlgebra,
    q: &RingQuotient,
) -> Result<()> {
    for chi in [chi1, chi2] {
        for x in 0..group.order() {
            for y in 0..group.order() {
                if chi[group.mul(x, y)] != r.mul(&chi[x], &chi[y]) {
                    return Err(Error::invariant("split character is not multiplicative"));
                }
            }
        }
    }
    for x in 0..group.order() {
        if q.project(&ch.trace(&rho[x])) != r.add(&chi1[x], &chi2[x]) {
            return Err(Error::invariant("split characters do not reproduce the trace"));
        }
        if q.project(&ch.det(&rho[x])) != r.mul(&chi1[x], &chi2[x]) {
            return Err(Error::invariant("split characters do not reproduce the determinant"));
        }
    }
    Ok(())
}

/// Some pair of characters χ1, χ2: G → R^× with ψ(χ1 ⊕ χ2) = (trace, det),
/// by enumeration of generator values; errors beyond `budget` candidates.
pub fn find_split(r: &FiniteRing, group: &MarkedGroup, trace: &[Elem], det: &[Elem], budget: u64) -> Result<Option<(Vec<Elem>, Vec<Elem>)>> {
    let elems = r.elements();
    let units: Vec<Elem> = elems.into_iter().filter(|x| r.is_unit(x)).collect();
    let ngen = group.generators().len();
    let total = (units.len() as u64).checked_pow(ngen as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::budget(format!("{total} candidate characters exceed the budget {budget}")));
    }
    let mut idx = vec![0usize; ngen];
    loop {
        let vals: Vec<Elem> = idx.iter().map(|&i| units[i].clone()).collect();
        if let Ok(chi1) = crate::group::character_from_generators(group, r, &vals) {
            let chi2: Vec<Elem> = (0..group.order()).map(|x| r.sub(&trace[x], &chi1[x])).collect();
            let ok = (0..group.order()).all(|x| r.mul(&chi1[x], &chi2[x]) == det[x])
                && (0..group.order())
                    .all(|x| (0..group.order()).all(|y| chi2[group.mul(x, y)] == r.mul(&chi2[x], &chi2[y])));
            if ok {
                return Ok(Some((chi1, chi2)));
            }
        }
        let mut i = 0;
        loop {
            if i == ngen {
                return Ok(None);
            }
            idx[i] += 1;
            if idx[i] < units.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Maximal proper sub-ideals J' ⊂ J (those with J/J' ≅ residue field).
pub fn maximal_subideals(a: &FiniteRing, j: &Ideal) -> Result<Vec<Ideal>> {
    if a.is_zero_ideal(j) {
        return Ok(Vec::new());
    }
    let m = a.max_ideal()?;
    let mj = a.ideal_product(m, j);
    let res = a.residue_field()?;
    let k = &res.ring;
    // Nakayama basis of J/mJ
    let mut gens: Vec<Elem> = Vec::new();
    let mut cur = mj.clone();
    for g in a.ideal_basis(j) {
        if !a.contains(&cur, &g) {
            gens.push(g.clone());
            cur = a.ideal_sum(&cur, &a.ideal(&[g]));
        }
    }
    let r = gens.len();
    let kelems = k.elements();
    let mut out = Vec::new();
    // functionals λ normalised with first nonzero coordinate 1
    for lead in 0..r {
        let free = r - lead - 1;
        let count = kelems.len().pow(free as u32);
        for code in 0..count {
            let mut lambda = vec![k.zero(); r];
            lambda[lead] = k.one();
            let mut c = code;
            for l in lambda.iter_mut().skip(lead + 1) {
                *l = kelems[c % kelems.len()].clone();
                c /= kelems.len();
            }
            let mut kernel_gens: Vec<Elem> = Vec::new();
            for i in 0..r {
                if i == lead {
                    continue;
                }
                // e_i − λ_i e_lead lies in the kernel when λ_lead = 1
                let li = a.reduced(res.lift(&lambda[i], a.dim()));
                kernel_gens.push(a.sub(&gens[i], &a.mul(&li, &gens[lead])));
            }
            let sub = a.ideal_sum(&mj, &a.ideal(&kernel_gens));
            out.push(sub);
        }
    }
    Ok(out)
}

/// Representation ρ into a CH algebra, given by the images of group elements.
pub fn rep_into(ch: &ChAlgebra, group: &MarkedGroup, gen_images: &[Elem]) -> Result<Vec<Elem>> {
    let e = &ch.algebra;
    if gen_images.len() != group.generators().len() {
        return Err(Error::input("one image per generator is required"));
    }
    let images: Vec<Elem> = (0..group.order())
        .map(|x| group.word(x).iter().fold(e.one(), |acc, &s| e.mul(&acc, &gen_images[s])))
        .collect();
    for (x, s, y) in group.cayley_edges() {
        if images[y] != e.mul(&images[x], &gen_images[s]) {
            return Err(Error::input("images violate a group relation"));
        }
    }
    Ok(images)
}

/// ρ viewed inside M_2(A) built by [`ChAlgebra::matrix_algebra`].
pub fn matrix_rep_into(ch: &ChAlgebra, rho: &MatrixRep2) -> Vec<Elem> {
    rho.images().iter().map(|m| ch.matrix_element(m)).collect()
}
