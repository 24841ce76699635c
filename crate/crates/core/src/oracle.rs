//! Brute-force oracles. Everything here works by enumerating elements or by
//! dense elimination over F_p, independently of the Howell-form machinery,
//! and is meant for cross-checking the structured computations on small
//! instances.

use std::collections::BTreeSet;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::gma::ChQuotient;
use crate::group::{character_from_generators, MarkedGroup};
use crate::howell::Span;
use crate::ordinary::{OrdinaryContext, OrdinaryQuotient};
use crate::psrep::{mat_det, mat_identity, mat_mul, mat_trace, Mat2, MatrixRep2, Pseudorep2};
use crate::ring::FiniteRing;

/// Every element of a ring or algebra, in coordinates reduced modulo the
/// relations. Errors when there are more than `limit`.
pub fn all_elements(a: &Algebra, limit: u64) -> Result<Vec<Elem>> {
    let count = (a.zmod().p() as f64).powi(a.log_size() as i32);
    if count > limit as f64 {
        return Err(Error::budget(format!("{count} elements exceed the enumeration limit {limit}")));
    }
    Ok(a.elements())
}

/// Elements of a span, reduced in the ring.
pub fn span_elements(a: &Algebra, s: &Span) -> BTreeSet<Elem> {
    s.elements().into_iter().map(|v| a.reduced(v)).collect()
}

/// The ideal generated by `gens`, as the Minkowski sum of the sets R·g.
pub fn ideal_elements(r: &FiniteRing, gens: &[Elem], limit: u64) -> Result<BTreeSet<Elem>> {
    let all = all_elements(r, limit)?;
    let mut acc: BTreeSet<Elem> = [r.zero()].into_iter().collect();
    for g in gens {
        let multiples: BTreeSet<Elem> = all.iter().map(|x| r.mul(x, g)).collect();
        let mut next = BTreeSet::new();
        for a in &acc {
            for m in &multiples {
                next.insert(r.add(a, m));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// {x : x·y = 0 for all y in `of`}.
pub fn annihilator_elements(r: &FiniteRing, of: &[Elem], limit: u64) -> Result<BTreeSet<Elem>> {
    Ok(all_elements(r, limit)?.into_iter().filter(|x| of.iter().all(|y| r.is_zero(&r.mul(x, y)))).collect())
}

/// Rank of a matrix over F_p by plain Gaussian elimination.
pub fn fp_rank(p: u64, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let width = m.first().map_or(0, |r| r.len());
    let inv = |a: u64| -> u64 {
        let (mut b, mut e, mut acc) = (a, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, piv);
        let s = inv(m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][col] != 0 {
                let c = m[i][col];
                for j in 0..width {
                    m[i][j] = (m[i][j] + p * p - c * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A finite F_p-algebra is Gorenstein iff some functional φ makes the
/// pairing (x, y) ↦ φ(xy) nondegenerate. Only for rings over a prime field.
pub fn gorenstein_by_duality(r: &FiniteRing, limit: u64) -> Result<bool> {
    let zm = r.zm();
    if zm.k() != 1 {
        return Err(Error::input("duality oracle needs a ring over a prime field"));
    }
    let p = zm.p();
    let n = r.dim();
    if !r.relations().is_zero() {
        return Err(Error::input("duality oracle needs a ring without coordinate relations"));
    }
    let basis = r.basis_elements();
    let products: Vec<Vec<Elem>> = basis.iter().map(|x| basis.iter().map(|y| r.mul(x, y)).collect()).collect();
    let functionals = Span::full(zm, n).elements();
    if functionals.len() as u64 > limit {
        return Err(Error::budget("too many functionals"));
    }
    for phi in functionals {
        let gram: Vec<Vec<u64>> = products
            .iter()
            .map(|row| row.iter().map(|v| v.iter().zip(&phi).fold(0, |acc, (&a, &b)| (acc + a * b) % p)).collect())
            .collect();
        if fp_rank(p, &gram) == n {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All characters G → R^×, found by trying every tuple of unit generator
/// images.
pub fn characters(g: &MarkedGroup, r: &FiniteRing, limit: u64) -> Result<Vec<Vec<Elem>>> {
    let units: Vec<Elem> = all_elements(r, limit)?.into_iter().filter(|x| r.is_unit(x)).collect();
    let k = g.generators().len();
    let total = (units.len() as f64).powi(k as i32);
    if total > limit as f64 {
        return Err(Error::budget("too many generator tuples"));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let vals: Vec<Elem> = idx.iter().map(|&i| units[i].clone()).collect();
        if let Ok(chi) = character_from_generators(g, r, &vals) {
            out.push(chi);
        }
        if !advance(&mut idx, units.len()) {
            return Ok(out);
        }
    }
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in idx.iter_mut() {
        *i += 1;
        if *i < base {
            return true;
        }
        *i = 0;
    }
    false
}

/// Every ρ: G → GL_2(A) with ψ(ρ) = D, by enumerating generator matrices
/// with the prescribed trace and determinant.
pub fn reps_with_law(d: &Pseudorep2, limit: u64) -> Result<Vec<MatrixRep2>> {
    let r = &d.ring;
    let g = &d.group;
    let all = all_elements(r, limit)?;
    let mut per_gen: Vec<Vec<Mat2>> = Vec::new();
    for &s in g.generators() {
        let (t, det) = (&d.trace[s], &d.det[s]);
        let mut mats = Vec::new();
        for a in &all {
            let dd = r.sub(t, a);
            let ad = r.mul(a, &dd);
            for b in &all {
                for c in &all {
                    if r.sub(&ad, &r.mul(b, c)) == *det {
                        mats.push([a.clone(), b.clone(), c.clone(), dd.clone()]);
                    }
                }
            }
        }
        per_gen.push(mats);
    }
    let combos: f64 = per_gen.iter().map(|m| m.len() as f64).product();
    if combos > limit as f64 {
        return Err(Error::budget(format!("{combos} generator tuples exceed the enumeration limit {limit}")));
    }
    let mut out = Vec::new();
    if per_gen.iter().any(|m| m.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; per_gen.len()];
    loop {
        let gens: Vec<Mat2> = idx.iter().zip(&per_gen).map(|(&i, m)| m[i].clone()).collect();
        if let Ok(rho) = MatrixRep2::new(r, g, gens) {
            let ok = (0..g.order())
                .all(|x| mat_trace(r, rho.image(x)) == d.trace[x] && mat_det(r, rho.image(x)) == d.det[x]);
            if ok {
                out.push(rho);
            }
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < per_gen[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Matrices e with e² = e and trace 1.
pub fn rank_one_idempotents(f: &FiniteRing, limit: u64) -> Result<Vec<Mat2>> {
    let all = all_elements(f, limit)?;
    let one = f.one();
    let mut out = Vec::new();
    for a in &all {
        let d = f.sub(&one, a);
        for b in &all {
            for c in &all {
                let m: Mat2 = [a.clone(), b.clone(), c.clone(), d.clone()];
                if mat_mul(f, &m, &m) == m {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

fn mat_sub(r: &FiniteRing, x: &Mat2, y: &Mat2) -> Mat2 {
    [r.sub(&x[0], &y[0]), r.sub(&x[1], &y[1]), r.sub(&x[2], &y[2]), r.sub(&x[3], &y[3])]
}

fn mat_scale(r: &FiniteRing, a: &[u64], x: &Mat2) -> Mat2 {
    x.clone().map(|v| r.mul(a, &v))
}

fn mat_is_zero(r: &FiniteRing, x: &Mat2) -> bool {
    x.iter().all(|v| r.is_zero(v))
}

/// e1·ρ(g)·e2 = 0 on Dp and e1·ρ(g)·e1 = κ⁻¹(g)·e1 on Ip, with e2 = 1 − e1.
pub fn matrix_ordinary(r: &FiniteRing, g: &MarkedGroup, images: &[Mat2], kappa: &[Elem], e1: &Mat2) -> bool {
    let e2 = mat_sub(r, &mat_identity(r), e1);
    let upper = g.dp().iter().all(|&x| mat_is_zero(r, &mat_mul(r, &mat_mul(r, e1, &images[x]), &e2)));
    upper
        && g.ip().iter().all(|&x| {
            let kinv = r.inverse(&kappa[x]).expect("kappa values are units");
            mat_mul(r, &mat_mul(r, e1, &images[x]), e1) == mat_scale(r, &kinv, e1)
        })
}

/// Ordinarity of a field-valued representation: some rank-one idempotent
/// satisfies [`matrix_ordinary`].
pub fn rep_ordinary_over_field(f: &FiniteRing, g: &MarkedGroup, images: &[Mat2], kappa: &[Elem], limit: u64) -> Result<bool> {
    Ok(rank_one_idempotents(f, limit)?.iter().any(|e| matrix_ordinary(f, g, images, kappa, e)))
}

/// The semisimple representations diag(χ1, χ2) with ψ = D, over a field.
pub fn semisimple_split_reps(d: &Pseudorep2, limit: u64) -> Result<Vec<Vec<Mat2>>> {
    let f = &d.ring;
    let chars = characters(&d.group, f, limit)?;
    let n = d.group.order();
    let mut out = Vec::new();
    for c1 in &chars {
        for c2 in &chars {
            if (0..n).all(|x| f.add(&c1[x], &c2[x]) == d.trace[x] && f.mul(&c1[x], &c2[x]) == d.det[x]) {
                out.push((0..n).map(|x| [c1[x].clone(), f.zero(), f.zero(), c2[x].clone()]).collect());
            }
        }
    }
    Ok(out)
}

/// Outcome of the exhaustive universality check on one law.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniversalityTally {
    pub reps: usize,
    pub ordinary: usize,
    pub exceptions: usize,
}

/// The map E → M_2(A) induced by ρ, as images of the generators of E.
/// Errors if ρ does not factor through E.
pub fn induced_matrix_map(q: &ChQuotient, rho: &MatrixRep2) -> Result<Vec<Mat2>> {
    let a = &q.ch.base;
    let nr = a.dim();
    let e = &q.ch.algebra;
    let images: Vec<Mat2> = q.section.iter().map(|&s| mat_scale(a, &a.basis(s % nr), rho.image(s / nr))).collect();
    let apply = |x: &[u64]| -> Mat2 {
        let mut acc: Mat2 = [a.zero(), a.zero(), a.zero(), a.zero()];
        for (&c, m) in x.iter().zip(&images) {
            if c != 0 {
                for k in 0..4 {
                    acc[k] = a.add(&acc[k], &a.scale(c, &m[k]));
                }
            }
        }
        acc
    };
    for rel in e.relations().rows() {
        if !mat_is_zero(a, &apply(rel)) {
            return Err(Error::invariant("representation does not factor through the Cayley-Hamilton quotient"));
        }
    }
    let basis = e.basis_elements();
    for x in &basis {
        for y in &basis {
            if apply(&e.mul(x, y)) != mat_mul(a, &apply(x), &apply(y)) {
                return Err(Error::invariant("induced map is not multiplicative"));
            }
        }
    }
    Ok(basis.iter().map(|x| apply(x)).collect())
}

/// Every ρ with ψ(ρ) = D together with its induced map E → M_2(A).
pub fn induced_maps(q: &ChQuotient, limit: u64) -> Result<Vec<(MatrixRep2, Vec<Mat2>)>> {
    reps_with_law(&q.psrep, limit)?
        .into_iter()
        .map(|rho| {
            let images = induced_matrix_map(q, &rho)?;
            Ok((rho, images))
        })
        .collect()
}

/// For every ρ in `maps`: ρ is ordinary for the idempotent coming from E
/// iff E → M_2(A) kills the ordinary ideal J. The idempotent is the
/// context's e1 in E, not its image in E_ord, which may be the zero ring.
pub fn universality_tally(ctx: &OrdinaryContext, ord: &OrdinaryQuotient, maps: &[(MatrixRep2, Vec<Mat2>)]) -> UniversalityTally {
    let a = ctx.gma.base();
    let g = &ctx.group;
    let mut tally = UniversalityTally::default();
    for (rho, images) in maps {
        let apply = |x: &[u64]| -> Mat2 {
            let mut acc: Mat2 = [a.zero(), a.zero(), a.zero(), a.zero()];
            for (&c, m) in x.iter().zip(images) {
                if c != 0 {
                    for k in 0..4 {
                        acc[k] = a.add(&acc[k], &a.scale(c, &m[k]));
                    }
                }
            }
            acc
        };
        let e1 = apply(&ctx.gma.e1);
        let ordinary = matrix_ordinary(a, g, rho.images(), &ctx.kappa, &e1);
        let factors = ord.j.rows().iter().all(|r| mat_is_zero(a, &apply(r)));
        tally.reps += 1;
        tally.ordinary += ordinary as usize;
        tally.exceptions += (ordinary != factors) as usize;
    }
    tally
}

/// Number of trace functions t̄ + εδ over F[ε] satisfying every identity
/// (det derived from the trace), by enumerating δ ∈ F^G.
pub fn tangent_solutions(dbar: &Pseudorep2, limit: u64) -> Result<u64> {
    let f = &dbar.ring;
    let g = &dbar.group;
    let n = g.order();
    let ext = f.truncated(2);
    let (fe, eps) = (&ext.ring, &ext.root);
    let fields = all_elements(f, limit)?;
    let total = (fields.len() as f64).powi(n as i32);
    if total > limit as f64 {
        return Err(Error::budget(format!("{total} trace lifts exceed the enumeration limit {limit}")));
    }
    let tbar: Vec<Elem> = dbar.trace.iter().map(|x| ext.base_map.apply(fe, x)).collect();
    let lifts: Vec<Elem> = fields.iter().map(|x| fe.mul(eps, &ext.base_map.apply(fe, x))).collect();
    let mut idx = vec![0usize; n];
    let mut count = 0;
    loop {
        let trace: Vec<Elem> = (0..n).map(|x| fe.add(&tbar[x], &lifts[idx[x]])).collect();
        if Pseudorep2::from_trace(fe, g, trace)?.validate().is_none() {
            count += 1;
        }
        if !advance(&mut idx, fields.len()) {
            return Ok(count);
        }
    }
}
