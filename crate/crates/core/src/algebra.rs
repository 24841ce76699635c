//! Finite associative algebras over Z/p^k given by generators, structure
//! constants and a relation submodule.
//!
//! An algebra is (Z/p^k)^n modulo a two-sided ideal `rel`; elements are
//! stored as canonical representatives (reduced against the Howell basis of
//! `rel`). Coordinates whose relation pivot is a unit are always zero, and
//! [`Algebra::compact`] removes them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::howell::{Solver, Span};
use crate::zmod::Zmod;

pub type Elem = Vec<u64>;

/// Sparse product of two generators.
pub type Product = Vec<(u32, u64)>;

#[derive(Debug)]
struct AlgebraData {
    zm: Zmod,
    dim: usize,
    table: Vec<Product>,
    one: Elem,
    rel: Span,
    commutative: bool,
}

#[derive(Clone, Debug)]
pub struct Algebra(Arc<AlgebraData>);

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.zm == other.0.zm
                && self.0.dim == other.0.dim
                && self.0.one == other.0.one
                && self.0.rel == other.0.rel
                && self.0.table == other.0.table)
    }
}

pub(crate) fn sparse(v: &[u64]) -> Product {
    v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, x)).collect()
}

fn unit_vector(dim: usize, i: usize) -> Elem {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// Result of quotienting or compacting: the new algebra plus the images of
/// the old generators.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Algebra,
    pub projection: Hom,
    /// For each generator of the quotient, the old generator it came from.
    pub section: Vec<usize>,
}

impl Algebra {
    /// Builds an algebra and drops coordinates killed by the relations.
    /// `table[i * dim + j]` is the product of generators i and j.
    pub fn build(zm: Zmod, dim: usize, table: Vec<Product>, one: Elem, rel: Span) -> Quotient {
        assert_eq!(table.len(), dim * dim);
        assert_eq!(one.len(), dim);
        let unit_cols = rel.unit_pivot_columns();
        let mut dropped = vec![false; dim];
        for c in unit_cols {
            dropped[c] = true;
        }
        let kept: Vec<usize> = (0..dim).filter(|&c| !dropped[c]).collect();
        let restrict = |v: &[u64]| -> Elem {
            let w = rel.reduced(v);
            kept.iter().map(|&c| w[c]).collect()
        };
        let n = kept.len();
        // rows with a unit pivot vanish off their own column once reduced
        let new_rel = Span::from_rows(
            zm,
            n,
            rel.rows()
                .iter()
                .filter(|r| r.iter().position(|&x| x != 0).is_some_and(|c| !dropped[c]))
                .map(|r| kept.iter().map(|&c| r[c]).collect::<Vec<u64>>()),
        );
        let mut new_table = Vec::with_capacity(n * n);
        for &i in &kept {
            for &j in &kept {
                let mut v = vec![0; dim];
                for &(k, c) in &table[i * dim + j] {
                    v[k as usize] = zm.add(v[k as usize], c);
                }
                new_table.push(sparse(&restrict(&v)));
            }
        }
        let images: Vec<Elem> = (0..dim).map(|i| restrict(&unit_vector(dim, i))).collect();
        let new_one = restrict(&one);
        let algebra = Algebra::from_parts(zm, n, new_table, new_one, new_rel);
        Quotient { algebra, projection: Hom { images }, section: kept }
    }

    /// Assumes `rel` has no unit pivots and is a two-sided ideal.
    fn from_parts(zm: Zmod, dim: usize, table: Vec<Product>, one: Elem, rel: Span) -> Algebra {
        let mut a = AlgebraData { zm, dim, table, one, rel, commutative: false };
        let mut comm = true;
        'outer: for i in 0..dim {
            for j in i + 1..dim {
                let mut x = vec![0; dim];
                let mut y = vec![0; dim];
                for &(k, c) in &a.table[i * dim + j] {
                    x[k as usize] = c;
                }
                for &(k, c) in &a.table[j * dim + i] {
                    y[k as usize] = c;
                }
                a.rel.reduce(&mut x);
                a.rel.reduce(&mut y);
                if x != y {
                    comm = false;
                    break 'outer;
                }
            }
        }
        a.commutative = comm;
        Algebra(Arc::new(a))
    }

    /// Dense structure constants `mul[i][j][k]`, relations given as vectors.
    pub fn from_dense(zm: Zmod, mul: &[Vec<Vec<u64>>], one: &[u64], relations: &[Elem]) -> Result<Quotient> {
        let n = one.len();
        if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::input(format!("structure constants must have shape {n}x{n}x{n}")));
        }
        let table = mul.iter().flat_map(|row| row.iter().map(|v| sparse(&reduce_all(zm, v)))).collect();
        let rel = Span::from_rows(zm, n, relations.iter().map(|r| reduce_all(zm, r)));
        let q = Algebra::build(zm, n, table, reduce_all(zm, one), rel);
        q.algebra.check_axioms()?;
        Ok(q)
    }

    pub fn zmod(&self) -> Zmod {
        self.0.zm
    }
    pub fn dim(&self) -> usize {
        self.0.dim
    }
    pub fn relations(&self) -> &Span {
        &self.0.rel
    }
    pub fn is_commutative(&self) -> bool {
        self.0.commutative
    }
    pub fn one(&self) -> Elem {
        self.0.one.clone()
    }
    pub fn zero(&self) -> Elem {
        vec![0; self.0.dim]
    }
    pub fn is_zero_algebra(&self) -> bool {
        self.0.dim == 0
    }
    pub fn table(&self) -> &[Product] {
        &self.0.table
    }

    /// Canonical image of generator i.
    pub fn basis(&self, i: usize) -> Elem {
        self.reduced(unit_vector(self.0.dim, i))
    }

    pub fn basis_elements(&self) -> Vec<Elem> {
        (0..self.0.dim).map(|i| self.basis(i)).collect()
    }

    /// log_p of the number of elements.
    pub fn log_size(&self) -> u32 {
        self.0.zm.k() * self.0.dim as u32 - self.0.rel.log_size()
    }

    pub fn reduced(&self, mut v: Elem) -> Elem {
        self.0.rel.reduce(&mut v);
        v
    }

    pub fn from_ints(&self, v: &[i64]) -> Elem {
        self.reduced(v.iter().map(|&x| self.0.zm.reduce(x)).collect())
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        let zm = self.0.zm;
        self.reduced(x.iter().zip(y).map(|(&a, &b)| zm.add(a, b)).collect())
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Elem {
        let zm = self.0.zm;
        self.reduced(x.iter().zip(y).map(|(&a, &b)| zm.sub(a, b)).collect())
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        let zm = self.0.zm;
        self.reduced(x.iter().map(|&a| zm.neg(a)).collect())
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Elem {
        let zm = self.0.zm;
        self.reduced(x.iter().map(|&a| zm.mul(c, a)).collect())
    }

    /// The scalar c·1.
    pub fn scalar(&self, c: u64) -> Elem {
        self.scale(c, &self.0.one)
    }

    /// Product before reduction by the relations.
    fn mul_raw(&self, x: &[u64], y: &[u64]) -> Elem {
        let zm = self.0.zm;
        let n = self.0.dim;
        let mut out = vec![0u64; n];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = zm.mul(a, b);
                for &(k, v) in &self.0.table[i * n + j] {
                    let k = k as usize;
                    out[k] = zm.add(out[k], zm.mul(c, v));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Elem {
        self.reduced(self.mul_raw(x, y))
    }

    pub fn pow(&self, x: &[u64], mut e: u64) -> Elem {
        let mut r = self.one();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Linear combination Σ c_i x_i.
    pub fn combine(&self, terms: &[(u64, &Elem)]) -> Elem {
        let zm = self.0.zm;
        let mut out = vec![0; self.0.dim];
        for (c, x) in terms {
            for (o, &v) in out.iter_mut().zip(x.iter()) {
                *o = zm.add(*o, zm.mul(*c, v));
            }
        }
        self.reduced(out)
    }

    /// Every element, each exactly once, in a fixed order.
    pub fn elements(&self) -> Vec<Elem> {
        let zm = self.0.zm;
        let mut bound = vec![zm.modulus(); self.0.dim];
        for (c, a) in self.0.rel.pivots() {
            bound[c] = zm.p_pow(a);
        }
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.0.dim];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < bound[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Verifies relations form a two-sided ideal, associativity on generator
    /// triples, and the unit law.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.0.dim;
        let basis = self.basis_elements();
        for r in self.0.rel.rows() {
            for (i, e) in basis.iter().enumerate() {
                if !self.is_zero(&self.mul(r, e)) || !self.is_zero(&self.mul(e, r)) {
                    return Err(Error::input(format!("relations are not stable under multiplication by generator {i}")));
                }
            }
        }
        for (i, e) in basis.iter().enumerate() {
            if self.mul(&self.0.one, e) != *e || self.mul(e, &self.0.one) != *e {
                return Err(Error::input(format!("unit element is not an identity for generator {i}")));
            }
        }
        let prods: Vec<Elem> = (0..n * n).map(|ij| self.mul(&basis[ij / n], &basis[ij % n])).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = self.mul(&prods[i * n + j], &basis[k]);
                    let r = self.mul(&basis[i], &prods[j * n + k]);
                    if l != r {
                        return Err(Error::input(format!("multiplication is not associative on generators ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Two-sided ideal generated by `gens`, as a span containing the relations.
    pub fn two_sided_ideal(&self, gens: &[Elem]) -> Span {
        self.ideal_closure(gens, true)
    }

    /// Left ideal for noncommutative algebras when `two_sided` is false;
    /// for commutative algebras both coincide.
    pub(crate) fn ideal_closure(&self, gens: &[Elem], two_sided: bool) -> Span {
        let basis = self.basis_elements();
        let mut span = self.0.rel.with_rows(gens.iter().cloned());
        let mut frontier: Vec<Elem> = span.rows().to_vec();
        while !frontier.is_empty() {
            let mut new_rows = Vec::new();
            for r in &frontier {
                for e in &basis {
                    new_rows.push(self.mul_raw(e, r));
                    if two_sided && !self.0.commutative {
                        new_rows.push(self.mul_raw(r, e));
                    }
                }
            }
            let before = span.log_size();
            let next = span.with_rows(new_rows);
            if next.log_size() == before {
                break;
            }
            frontier = next.rows().iter().filter(|r| !span.contains(r)).cloned().collect();
            if frontier.is_empty() {
                frontier = next.rows().to_vec();
            }
            span = next;
        }
        span
    }

    /// Quotient by a two-sided ideal given as a span (the relations are
    /// joined automatically).
    pub fn quotient(&self, ideal: &Span) -> Quotient {
        let rel = self.0.rel.join(ideal);
        Algebra::build(self.0.zm, self.0.dim, self.0.table.clone(), self.one(), rel)
    }

    /// Solver for y ↦ x·y (left = true) or y ↦ y·x.
    pub fn mult_solver(&self, x: &[u64], left: bool) -> Solver {
        let images: Vec<Elem> = self
            .basis_elements()
            .iter()
            .map(|e| if left { self.mul(x, e) } else { self.mul(e, x) })
            .collect();
        Solver::new(self.0.zm, self.0.dim, &images, &self.0.rel)
    }

    pub fn inverse(&self, x: &[u64]) -> Option<Elem> {
        let y = self.reduced(self.mult_solver(x, true).solve(&self.0.one)?);
        if self.mul(&y, x) == self.0.one {
            Some(y)
        } else {
            None
        }
    }

    pub fn is_unit(&self, x: &[u64]) -> bool {
        self.inverse(x).is_some()
    }

    /// Sub-Z/p^k-module spanned by products of the rows of two spans.
    pub fn product_span(&self, a: &Span, b: &Span) -> Span {
        let mut rows = Vec::new();
        for x in a.rows() {
            for y in b.rows() {
                rows.push(self.mul_raw(x, y));
            }
        }
        self.0.rel.with_rows(rows)
    }
}

pub(crate) fn reduce_all(zm: Zmod, v: &[u64]) -> Elem {
    v.iter().map(|&x| x % zm.modulus()).collect()
}

/// A Z/p^k-linear map between algebras, given by images of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub images: Vec<Elem>,
}

impl Hom {
    pub fn identity(a: &Algebra) -> Hom {
        Hom { images: a.basis_elements() }
    }

    pub fn apply(&self, dst: &Algebra, x: &[u64]) -> Elem {
        let zm = dst.zmod();
        let mut out = vec![0; dst.dim()];
        for (&c, img) in x.iter().zip(&self.images) {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(img) {
                *o = zm.add(*o, zm.mul(c, v));
            }
        }
        dst.reduced(out)
    }

    /// self followed by other.
    pub fn then(&self, other: &Hom, dst: &Algebra) -> Hom {
        Hom { images: self.images.iter().map(|x| other.apply(dst, x)).collect() }
    }

    /// Checks well-definedness, unitality and multiplicativity on generators.
    pub fn check_ring_hom(&self, src: &Algebra, dst: &Algebra) -> Result<()> {
        if self.images.len() != src.dim() {
            return Err(Error::input("map has the wrong number of generator images"));
        }
        for r in src.relations().rows() {
            if !dst.is_zero(&self.apply(dst, r)) {
                return Err(Error::invariant("map does not kill the source relations"));
            }
        }
        if self.apply(dst, &src.one()) != dst.one() {
            return Err(Error::invariant("map is not unital"));
        }
        let basis = src.basis_elements();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let l = self.apply(dst, &src.mul(x, y));
                let r = dst.mul(&self.apply(dst, x), &self.apply(dst, y));
                if l != r {
                    return Err(Error::invariant(format!("map is not multiplicative on generators ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Kernel as a span in the source (containing the source relations).
    pub fn kernel(&self, src: &Algebra, dst: &Algebra) -> Span {
        let k = Solver::new(src.zmod(), src.dim(), &self.images, dst.relations()).kernel();
        k.join(src.relations())
    }

    /// Image as a span in the target (containing the target relations).
    pub fn image(&self, dst: &Algebra) -> Span {
        dst.relations().with_rows(self.images.iter().cloned())
    }

    pub fn is_surjective(&self, dst: &Algebra) -> bool {
        self.image(dst).is_full()
    }

    pub fn is_injective(&self, src: &Algebra, dst: &Algebra) -> bool {
        self.kernel(src, dst) == *src.relations()
    }

    /// The unique unital ring map sending gens[i] to imgs[i], if it exists
    /// and the generators generate the source.
    pub fn determined_by(src: &Algebra, dst: &Algebra, gens: &[Elem], imgs: &[Elem]) -> Result<Hom> {
        let zm = src.zmod();
        let (n, m) = (src.dim(), dst.dim());
        let pair = |x: &[u64], y: &[u64]| -> Elem {
            let mut v = x.to_vec();
            v.extend_from_slice(y);
            v
        };
        let mut pairs: Vec<(Elem, Elem)> = vec![(src.one(), dst.one())];
        pairs.extend(gens.iter().cloned().zip(imgs.iter().cloned()));
        let fixed = src
            .relations()
            .rows()
            .iter()
            .map(|r| pair(r, &vec![0; m]))
            .chain(dst.relations().rows().iter().map(|r| pair(&vec![0; n], r)));
        let mut span = Span::from_rows(zm, n + m, fixed.chain(pairs.iter().map(|(a, b)| pair(a, b))));
        loop {
            let before = span.log_size();
            let mut rows = Vec::new();
            for r in span.rows() {
                let (a, b) = r.split_at(n);
                for (g, h) in &pairs {
                    rows.push(pair(&src.mul(a, g), &dst.mul(b, h)));
                    rows.push(pair(&src.mul(g, a), &dst.mul(h, b)));
                }
            }
            span = span.with_rows(rows);
            if span.log_size() == before {
                break;
            }
        }
        for r in span.rows() {
            if r[..n].iter().all(|&x| x == 0) && !dst.relations().contains(&r[n..]) {
                return Err(Error::invariant("prescribed images do not define a well-defined ring map"));
            }
        }
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = pair(&unit_vector(n, i), &vec![0; m]);
            span.reduce(&mut v);
            if v[..n].iter().any(|&x| x != 0) {
                return Err(Error::input("the given elements do not generate the source ring"));
            }
            images.push(dst.reduced(v[n..].iter().map(|&x| zm.neg(x)).collect()));
        }
        Ok(Hom { images })
    }
}
