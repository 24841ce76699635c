//! Ordinary Cayley-Hamilton representations and the ordinary quotient.

use serde::Serialize;

use crate::algebra::{Elem, Hom};
use crate::error::{Error, Result};
use crate::gma::{
    ch_quotient, lift_idempotents, rank_one_idempotents, residual_idempotent_preimages, two_sided_closure, verify_split, ChAlgebra, ChQuotient,
    GmaAlgebra,
};
use crate::group::{character_check, MarkedGroup};
use crate::howell::{Solver, Span};
use crate::psrep::{Pseudorep2, ResidualSplit};
use crate::ring::{Ideal, RingQuotient};

/// A GMA-structured CH representation ρ: G → E^× with a marked group and
/// the character κ whose inverse the (1,1)-coordinate must match on Ip.
#[derive(Clone, Debug)]
pub struct OrdinaryContext {
    pub group: MarkedGroup,
    pub kappa: Vec<Elem>,
    pub gma: GmaAlgebra,
    pub rho: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinaryWitness {
    pub element: String,
    pub coordinate: String,
}

impl OrdinaryContext {
    pub fn new(group: &MarkedGroup, kappa: Vec<Elem>, gma: &GmaAlgebra, rho: Vec<Elem>) -> Result<OrdinaryContext> {
        let a = gma.base();
        let e = &gma.ch.algebra;
        let kappa: Vec<Elem> = kappa.into_iter().map(|x| a.reduced(x)).collect();
        if let Some((x, y)) = character_check(group, a, &kappa)? {
            return Err(Error::input(format!(
                "kappa is not multiplicative at ({}, {})",
                group.label(x),
                group.label(y)
            )));
        }
        if rho.len() != group.order() {
            return Err(Error::input("rho needs one value per group element"));
        }
        let rho: Vec<Elem> = rho.into_iter().map(|x| e.reduced(x)).collect();
        for x in 0..group.order() {
            for y in 0..group.order() {
                if rho[group.mul(x, y)] != e.mul(&rho[x], &rho[y]) {
                    return Err(Error::input("rho is not multiplicative"));
                }
            }
        }
        Ok(OrdinaryContext { group: group.clone(), kappa, gma: gma.clone(), rho })
    }

    /// Context on the CH quotient of D, with e1 lifted from the first
    /// residual character of `split`.
    pub fn from_quotient(q: &ChQuotient, split: &ResidualSplit, kappa: Vec<Elem>) -> Result<OrdinaryContext> {
        let gma = gma_for_split(q, split)?;
        OrdinaryContext::new(&q.psrep.group, kappa, &gma, q.rho.clone())
    }

    pub fn kappa_inverse(&self, g: usize) -> Elem {
        self.gma.base().inverse(&self.kappa[g]).expect("kappa values are units")
    }
}

/// GMA structure on a CH quotient from a multiplicity-free residual split.
pub fn gma_for_split(q: &ChQuotient, split: &ResidualSplit) -> Result<GmaAlgebra> {
    let (x1, x2) = residual_idempotent_preimages(q, split)?;
    let lifted = lift_idempotents(&q.ch, &x1, &x2)?;
    GmaAlgebra::new(&q.ch, &lifted.e1, &lifted.e2)
}

/// Orders a residual split so that the first character agrees with κ̄⁻¹ on
/// Ip when exactly one of the two does.
pub fn kappa_side_first(split: ResidualSplit, group: &MarkedGroup, kappa: &[Elem]) -> ResidualSplit {
    let k = &split.residue.ring;
    let kinv: Vec<Elem> = kappa
        .iter()
        .map(|x| k.inverse(&split.residue.project(x)).expect("kappa values are units"))
        .collect();
    let matches = |chi: &[Elem]| group.ip().iter().all(|&g| chi[g] == kinv[g]);
    if !matches(&split.chi1) && matches(&split.chi2) {
        let chi = split.chi2.clone();
        return split.with_first(&chi).expect("constituent");
    }
    split
}

#[derive(Clone, Debug, Serialize)]
pub struct OrdinaryVerdict {
    pub ordinary: bool,
    pub witness: Option<OrdinaryWitness>,
}

/// ρ₁₂ vanishes on Dp and ρ₁₁ = κ⁻¹ on Ip.
pub fn is_ordinary_rep(ctx: &OrdinaryContext) -> OrdinaryVerdict {
    let g = &ctx.group;
    let e = &ctx.gma.ch.algebra;
    for &x in g.dp() {
        let c = ctx.gma.coordinates(&ctx.rho[x]);
        if !e.is_zero(&c.b) {
            return OrdinaryVerdict {
                ordinary: false,
                witness: Some(OrdinaryWitness { element: g.label(x).to_string(), coordinate: "rho12".into() }),
            };
        }
    }
    for &x in g.ip() {
        let c = ctx.gma.coordinates(&ctx.rho[x]);
        if c.a11 != ctx.kappa_inverse(x) {
            return OrdinaryVerdict {
                ordinary: false,
                witness: Some(OrdinaryWitness { element: g.label(x).to_string(), coordinate: "rho11".into() }),
            };
        }
    }
    OrdinaryVerdict { ordinary: true, witness: None }
}

/// A generator with the clause that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub clause: String,
    pub value: Elem,
}

#[derive(Clone, Debug)]
pub struct OrdinaryQuotient {
    /// Generators of J*: ρ₁₂(g) for g ∈ Dp and (ρ₁₁(g) − κ⁻¹(g))e1 for g ∈ Ip.
    pub star_generators: Vec<Generator>,
    pub j_star: Span,
    /// Generators of J_R in A, each enlarging the ideal generated so far.
    pub base_generators: Vec<Generator>,
    pub j_r: Ideal,
    /// J* + J_R·E.
    pub j: Span,
    pub e_ord: ChAlgebra,
    pub projection: Hom,
    pub base_quotient: RingQuotient,
    pub rho: Vec<Elem>,
    pub e1: Elem,
    pub e2: Elem,
    /// Index into `base_generators` at which J_R became the unit ideal.
    pub collapse_step: Option<usize>,
}

impl OrdinaryQuotient {
    pub fn is_zero_ring(&self) -> bool {
        self.e_ord.algebra.is_zero_algebra()
    }
}

/// Number of seeded random elements used when an algebra is too large for an
/// exhaustive Cayley-Hamilton check.
pub const CH_SAMPLES: usize = 64;

pub fn ordinary_quotient(ctx: &OrdinaryContext) -> Result<OrdinaryQuotient> {
    let gma = &ctx.gma;
    let ch = &gma.ch;
    let e = &ch.algebra;
    let a = &ch.base;
    let g = &ctx.group;
    let mut star_generators = Vec::new();
    for &x in g.dp() {
        let c = gma.coordinates(&ctx.rho[x]);
        if !e.is_zero(&c.b) {
            star_generators.push(Generator { clause: format!("rho12({})", g.label(x)), value: c.b });
        }
    }
    for &x in g.ip() {
        let c = gma.coordinates(&ctx.rho[x]);
        let diff = a.sub(&c.a11, &ctx.kappa_inverse(x));
        if !a.is_zero(&diff) {
            let v = e.mul(&ch.scalar(&diff), &gma.e1);
            star_generators.push(Generator { clause: format!("rho11({}) - kappa^-1", g.label(x)), value: v });
        }
    }
    let gens: Vec<Elem> = star_generators.iter().map(|s| s.value.clone()).collect();
    let basis = e.basis_elements();
    let j_star = two_sided_closure(e, &gens, &basis);

    let mut base_generators = Vec::new();
    let mut j_r = a.zero_ideal();
    let mut collapse_step = None;
    let mut offer = |clause: String, v: Elem, j_r: &mut Ideal| {
        if a.contains(j_r, &v) {
            return;
        }
        *j_r = a.ideal_sum(j_r, &a.ideal(&[v.clone()]));
        base_generators.push(Generator { clause, value: v });
        if collapse_step.is_none() && a.is_unit_ideal(j_r) {
            collapse_step = Some(base_generators.len() - 1);
        }
    };
    for s in &star_generators {
        for (i, y) in basis.iter().enumerate() {
            let t = ch.trace(&e.mul(&s.value, y));
            offer(format!("Tr({}·b{i})", s.clause), t, &mut j_r);
        }
        offer(format!("D({})", s.clause), ch.det(&s.value), &mut j_r);
    }

    let scaled: Vec<Elem> = a
        .ideal_basis(&j_r)
        .iter()
        .flat_map(|r| {
            let s = ch.scalar(r);
            basis.iter().map(move |y| e.mul(&s, y)).collect::<Vec<_>>()
        })
        .collect();
    let j = j_star.with_rows(scaled);
    let (e_ord, projection, base_quotient) = ch.quotient(&j, &j_r)?;
    e_ord.check_invariants(CH_SAMPLES, 0)?;
    let rho = ctx.rho.iter().map(|x| projection.apply(&e_ord.algebra, x)).collect();
    let e1 = projection.apply(&e_ord.algebra, &gma.e1);
    let e2 = projection.apply(&e_ord.algebra, &gma.e2);
    Ok(OrdinaryQuotient {
        star_generators,
        j_star,
        base_generators,
        j_r,
        j,
        e_ord,
        projection,
        base_quotient,
        rho,
        e1,
        e2,
        collapse_step,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PsrepOrdinarity {
    pub ordinary: bool,
    /// GMA structures examined (orderings of the residual split, or rank-one
    /// idempotents in the residually irreducible field case).
    pub structures_tried: usize,
}

/// Budget on the number of CH-quotient elements scanned for rank-one
/// idempotents when D is residually irreducible over a field.
pub const IDEMPOTENT_SCAN_LIMIT: usize = 1 << 16;

/// D is ordinary iff some GMA structure on its CH quotient has J_R = 0.
pub fn is_ordinary_psrep(d: &Pseudorep2, kappa: &[Elem]) -> Result<PsrepOrdinarity> {
    let q = ch_quotient(d)?;
    is_ordinary_on(&q, kappa)
}

pub fn is_ordinary_on(q: &ChQuotient, kappa: &[Elem]) -> Result<PsrepOrdinarity> {
    let d = &q.psrep;
    let a = &d.ring;
    match d.residual_split() {
        Ok(split) => {
            if !split.multiplicity_free {
                return Err(Error::unsupported("residual characters coincide"));
            }
            let swapped = split.clone().with_first(&split.chi2)?;
            let mut tried = 0;
            for s in [split, swapped] {
                tried += 1;
                let ctx = OrdinaryContext::from_quotient(q, &s, kappa.to_vec())?;
                if a.is_zero_ideal(&ordinary_quotient(&ctx)?.j_r) {
                    return Ok(PsrepOrdinarity { ordinary: true, structures_tried: tried });
                }
            }
            Ok(PsrepOrdinarity { ordinary: false, structures_tried: tried })
        }
        Err(Error::Unsupported(msg)) => {
            if !a.is_zero_ideal(a.max_ideal()?) {
                return Err(Error::Unsupported(msg));
            }
            let ch = &q.ch;
            let e = &ch.algebra;
            let mut tried = 0;
            for e1 in rank_one_idempotents(ch, IDEMPOTENT_SCAN_LIMIT)? {
                tried += 1;
                let e2 = e.sub(&e.one(), &e1);
                let gma = GmaAlgebra::new(ch, &e1, &e2)?;
                let ctx = OrdinaryContext::new(&d.group, kappa.to_vec(), &gma, q.rho.clone())?;
                if a.is_zero_ideal(&ordinary_quotient(&ctx)?.j_r) {
                    return Ok(PsrepOrdinarity { ordinary: true, structures_tried: tried });
                }
            }
            Ok(PsrepOrdinarity { ordinary: false, structures_tried: tried })
        }
        Err(err) => Err(err),
    }
}

#[derive(Clone, Debug)]
pub struct ReducibleOrdinary {
    pub ordinary: OrdinaryQuotient,
    /// J_R plus the ideal of values m(ρ₁₂(g), ρ₂₁(h)).
    pub ideal: Ideal,
    pub e_red: ChAlgebra,
    pub projection: Hom,
    pub base_quotient: RingQuotient,
    /// Characters (ρ₁₁, ρ₂₂) modulo `ideal`.
    pub chi1: Vec<Elem>,
    pub chi2: Vec<Elem>,
    /// E_red → E_ord/(J_D·E_ord) is well defined and surjective.
    pub surjective: bool,
}

pub fn reducible_ordinary_quotient(ctx: &OrdinaryContext) -> Result<ReducibleOrdinary> {
    let ord = ordinary_quotient(ctx)?;
    let gma = &ctx.gma;
    let ch = &gma.ch;
    let e = &ch.algebra;
    let a = &ch.base;
    let n = ctx.group.order();
    let coords = gma.coordinate_maps(&ctx.rho)?;
    let mut products = Vec::new();
    let mut m_values = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let (b, c) = (&coords[x].b, &coords[y].c);
            products.push(e.mul(b, c));
            m_values.push(gma.m(b, c));
        }
    }
    let m_ideal = a.ideal(&m_values);
    let ideal = a.ideal_sum(&ord.j_r, &m_ideal);
    let basis = e.basis_elements();
    let scale_by = |i: &Ideal| -> Vec<Elem> {
        a.ideal_basis(i)
            .iter()
            .flat_map(|r| {
                let s = ch.scalar(r);
                basis.iter().map(move |y| e.mul(&s, y)).collect::<Vec<_>>()
            })
            .collect()
    };
    let bc = two_sided_closure(e, &products, &basis);
    let k_red = ord.j.join(&bc).with_rows(scale_by(&ideal));
    let (e_red, projection, base_quotient) = ch.quotient(&k_red, &ideal)?;
    e_red.check_invariants(CH_SAMPLES, 0)?;
    let chi1: Vec<Elem> = coords.iter().map(|c| base_quotient.project(&c.a11)).collect();
    let chi2: Vec<Elem> = coords.iter().map(|c| base_quotient.project(&c.a22)).collect();
    verify_split(&base_quotient.ring, &ctx.group, &chi1, &chi2, &ctx.rho, ch, &base_quotient)?;
    let k_target = ord.j.with_rows(scale_by(&m_ideal));
    let target_log = e.quotient(&k_target).algebra.log_size();
    let surjective = k_target.contains_span(&k_red) && e_red.algebra.log_size() >= target_log;
    Ok(ReducibleOrdinary { ordinary: ord, ideal, e_red, projection, base_quotient, chi1, chi2, surjective })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TangentConstraint {
    All,
    Ordinary,
    ReducibleOrdinary,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentCount {
    pub constraint: TangentConstraint,
    /// Dimension over the residue field.
    pub dimension: u32,
    pub solutions: u64,
    pub unconstrained_dimension: u32,
}

/// First-order deformations t̄ + εδt of a field-valued law over F[ε],
/// filtered by the constraint. Errors with a budget error when the
/// unconstrained space has more than `budget` elements.
pub fn ordinary_tangent_count(
    dbar: &Pseudorep2,
    kappa: &[Elem],
    constraint: TangentConstraint,
    budget: u64,
) -> Result<TangentCount> {
    dbar.require_valid()?;
    let f = &dbar.ring;
    if !f.is_zero_ideal(f.max_ideal()?) {
        return Err(Error::input("tangent counts need a field-valued law"));
    }
    let g = &dbar.group;
    let n = g.order();
    let ext = f.truncated(2);
    let (fe, eps) = (ext.ring, ext.root);
    let lift = |x: &Elem| ext.base_map.apply(&fe, x);
    let tbar: Vec<Elem> = dbar.trace.iter().map(lift).collect();
    let nf = f.dim();
    // F_p-coordinates of δt: (group element, residue basis index)
    let law = |delta: &[u64]| -> Result<Pseudorep2> {
        let trace = (0..n)
            .map(|x| fe.add(&tbar[x], &fe.mul(&eps, &lift(&f.reduced(delta[x * nf..(x + 1) * nf].to_vec())))))
            .collect();
        Pseudorep2::from_trace(&fe, g, trace)
    };
    let src = n * nf;
    let zero_res = law(&vec![0; src])?.identity_residuals();
    let width = zero_res.len() * fe.dim();
    let flat = |v: &[Elem]| -> Vec<u64> { v.iter().flat_map(|x| x.iter().copied()).collect() };
    let base = flat(&zero_res);
    let images: Vec<Vec<u64>> = (0..src)
        .map(|i| {
            let mut delta = vec![0; src];
            delta[i] = 1;
            let r = flat(&law(&delta)?.identity_residuals());
            Ok(r.iter().zip(&base).map(|(&x, &y)| fe.zm().sub(x, y)).collect())
        })
        .collect::<Result<_>>()?;
    let space = Solver::new(fe.zm(), src, &images, &Span::zero(fe.zm(), width)).kernel();
    let log = space.log_size();
    let unconstrained_dimension = log / nf as u32;
    let p = fe.zm().p();
    if constraint == TangentConstraint::All {
        return Ok(TangentCount { constraint, dimension: unconstrained_dimension, solutions: p.pow(log), unconstrained_dimension });
    }
    if (log as f64) * (p as f64).log2() > (budget as f64).log2() {
        return Err(Error::budget(format!("{p}^{log} tangent vectors exceed the budget {budget}")));
    }
    let kappa_e: Vec<Elem> = kappa.iter().map(lift).collect();
    let mut kept: Vec<Vec<u64>> = Vec::new();
    for delta in space.elements() {
        let d = law(&delta)?;
        if d.validate().is_some() {
            return Err(Error::invariant("linearized solution is not a deformation"));
        }
        let q = ch_quotient(&d)?;
        if !is_ordinary_on(&q, &kappa_e)?.ordinary {
            continue;
        }
        if constraint == TangentConstraint::ReducibleOrdinary && !is_reducible_on(&q)? {
            continue;
        }
        kept.push(delta);
    }
    let kept_span = Span::from_rows(fe.zm(), src, kept.iter().cloned());
    if kept_span.log_size() as f64 != (kept.len() as f64).log(p as f64).round() || (p.pow(kept_span.log_size()) as usize) != kept.len() {
        return Err(Error::invariant("constrained tangent vectors are not closed under addition"));
    }
    let dimension = kept_span.log_size() / nf as u32;
    Ok(TangentCount { constraint, dimension, solutions: kept.len() as u64, unconstrained_dimension })
}

/// Reducibility ideal of the CH quotient is zero (for either residual order).
pub fn is_reducible_on(q: &ChQuotient) -> Result<bool> {
    let split = q.psrep.residual_split()?;
    let gma = gma_for_split(q, &split)?;
    Ok(q.ch.base.is_zero_ideal(&gma.reducibility_ideal()))
}
