//! Finitely presented modules over finite commutative rings.

use crate::algebra::{Elem, Hom};
use crate::error::{Error, Result};
use crate::howell::{Solver, Span};
use crate::ring::{FiniteRing, Ideal};

/// Cokernel of R^relations → R^ngens; each relation is a row of length ngens.
#[derive(Clone, Debug)]
pub struct FinModule {
    base: FiniteRing,
    ngens: usize,
    relations: Vec<Vec<Elem>>,
}

/// Largest generator count accepted by the determinant-based Fitting ideal.
pub const MAX_FITTING_GENERATORS: usize = 12;

impl FinModule {
    pub fn new(base: &FiniteRing, ngens: usize, relations: Vec<Vec<Elem>>) -> Result<FinModule> {
        for r in &relations {
            if r.len() != ngens || r.iter().any(|x| x.len() != base.dim()) {
                return Err(Error::input(format!("relation rows must have {ngens} ring elements")));
            }
        }
        let relations = relations.into_iter().map(|r| r.into_iter().map(|x| base.reduced(x)).collect()).collect();
        Ok(FinModule { base: base.clone(), ngens, relations })
    }

    pub fn free(base: &FiniteRing, n: usize) -> FinModule {
        FinModule { base: base.clone(), ngens: n, relations: Vec::new() }
    }

    /// R/I.
    pub fn cyclic(base: &FiniteRing, ideal: &Ideal) -> FinModule {
        let relations = base.ideal_generators(ideal).into_iter().map(|g| vec![g]).collect();
        FinModule { base: base.clone(), ngens: 1, relations }
    }

    pub fn direct_sum(&self, other: &FinModule) -> FinModule {
        let zero = self.base.zero();
        let g = self.ngens + other.ngens;
        let mut relations = Vec::new();
        for r in &self.relations {
            let mut row = r.clone();
            row.resize(g, zero.clone());
            relations.push(row);
        }
        for r in &other.relations {
            let mut row = vec![zero.clone(); self.ngens];
            row.extend(r.iter().cloned());
            relations.push(row);
        }
        FinModule { base: self.base.clone(), ngens: g, relations }
    }

    pub fn base(&self) -> &FiniteRing {
        &self.base
    }
    pub fn ngens(&self) -> usize {
        self.ngens
    }
    pub fn relations(&self) -> &[Vec<Elem>] {
        &self.relations
    }

    fn flatten(&self, row: &[Elem]) -> Vec<u64> {
        row.iter().flat_map(|x| x.iter().copied()).collect()
    }

    /// The relation submodule of R^g as a Z/p^k-span (with ring relations).
    pub fn relation_span(&self) -> Span {
        let r = &self.base;
        let n = r.dim();
        let g = self.ngens;
        let basis = r.basis_elements();
        let mut rows = Vec::new();
        for i in 0..g {
            for rr in r.relations().rows() {
                let mut v = vec![0; n * g];
                v[i * n..(i + 1) * n].copy_from_slice(rr);
                rows.push(v);
            }
        }
        for rel in &self.relations {
            for b in &basis {
                let scaled: Vec<Elem> = rel.iter().map(|x| r.mul(x, b)).collect();
                rows.push(self.flatten(&scaled));
            }
        }
        Span::from_rows(r.zm(), n * g, rows)
    }

    /// log_p |M|.
    pub fn log_size(&self) -> u32 {
        let k = self.base.zm().k();
        k * (self.base.dim() * self.ngens) as u32 - self.relation_span().log_size()
    }

    /// Composition length over a local base.
    pub fn length(&self) -> Result<u32> {
        self.base.length_from_log_size(self.log_size())
    }

    /// Drops relations already in the R-span of the earlier ones.
    pub fn pruned(&self) -> FinModule {
        let mut kept: Vec<Vec<Elem>> = Vec::new();
        let mut cur = FinModule { base: self.base.clone(), ngens: self.ngens, relations: Vec::new() };
        let mut span = cur.relation_span();
        for rel in &self.relations {
            if span.contains(&self.flatten(rel)) {
                continue;
            }
            kept.push(rel.clone());
            cur.relations = kept.clone();
            span = cur.relation_span();
        }
        cur
    }

    /// 0th Fitting ideal: generated by the maximal minors of the relation matrix.
    pub fn fitting_ideal(&self) -> Result<Ideal> {
        let r = &self.base;
        let g = self.ngens;
        if g == 0 {
            return Ok(r.unit_ideal());
        }
        if g > MAX_FITTING_GENERATORS {
            return Err(Error::budget(format!("Fitting ideal of a module with {g} generators")));
        }
        let pruned = self.pruned();
        let rows = &pruned.relations;
        if rows.len() < g {
            return Ok(r.zero_ideal());
        }
        let mut minors = Vec::new();
        for_each_subset(rows.len(), g, &mut |subset| {
            let m: Vec<&Vec<Elem>> = subset.iter().map(|&i| &rows[i]).collect();
            minors.push(determinant(r, &m));
        });
        Ok(r.ideal(&minors))
    }

    /// {r : r·M = 0}.
    pub fn annihilator(&self) -> Ideal {
        let r = &self.base;
        let n = r.dim();
        let g = self.ngens;
        let target = self.relation_span();
        let mut ann = Span::full(r.zm(), n);
        for i in 0..g {
            let images: Vec<Vec<u64>> = r
                .basis_elements()
                .iter()
                .map(|b| {
                    let mut v = vec![0; n * g];
                    v[i * n..(i + 1) * n].copy_from_slice(b);
                    v
                })
                .collect();
            let k = Solver::new(r.zm(), n, &images, &target).kernel();
            ann = ann.intersect(&k.join(r.relations()));
        }
        Ideal::from_span(ann)
    }

    /// Presentation over `base` of N/N', where N' ⊆ N are spans in the
    /// ambient module of `target` stable under the action b·v = s(b)·v.
    pub fn present_quotient(base: &FiniteRing, target: &FiniteRing, s: &Hom, n: &Span, n_sub: &Span) -> FinModule {
        let zm = base.zm();
        let bbasis = base.basis_elements();
        let sb: Vec<Elem> = bbasis.iter().map(|b| s.apply(target, b)).collect();
        let n_sub = n_sub.join(target.relations());
        let orbit = |v: &Elem| -> Vec<Vec<u64>> { sb.iter().map(|x| target.mul(x, v)).collect() };
        let mut gens: Vec<Elem> = Vec::new();
        let mut cur = n_sub.clone();
        for row in n.rows() {
            let v = target.reduced(row.clone());
            if cur.contains(&v) {
                continue;
            }
            cur = cur.with_rows(orbit(&v));
            gens.push(v);
        }
        let g = gens.len();
        let nb = base.dim();
        let mut images = Vec::with_capacity(g * nb);
        for v in &gens {
            images.extend(orbit(v));
        }
        let k = Solver::new(zm, g * nb, &images, &n_sub).kernel();
        let relations: Vec<Vec<Elem>> = k
            .rows()
            .iter()
            .map(|row| (0..g).map(|i| base.reduced(row[i * nb..(i + 1) * nb].to_vec())).collect::<Vec<Elem>>())
            .filter(|r: &Vec<Elem>| r.iter().any(|x| !base.is_zero(x)))
            .collect();
        FinModule { base: base.clone(), ngens: g, relations }.pruned()
    }
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Division-free determinant of a square matrix over a commutative ring,
/// by expansion over column subsets.
pub fn determinant(r: &FiniteRing, m: &[&Vec<Elem>]) -> Elem {
    let g = m.len();
    let mut dp: Vec<Option<Elem>> = vec![None; 1 << g];
    dp[0] = Some(r.one());
    for mask in 1usize..(1 << g) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = r.zero();
        for c in 0..g {
            if mask & (1 << c) == 0 {
                continue;
            }
            let rest = mask & !(1 << c);
            let above = (rest >> c).count_ones();
            let term = r.mul(&m[row][c], dp[rest].as_ref().unwrap());
            acc = if above % 2 == 0 { r.add(&acc, &term) } else { r.sub(&acc, &term) };
        }
        dp[mask] = Some(acc);
    }
    dp[(1 << g) - 1].take().unwrap()
}
