//! Howell normal form over Z/p^k and the submodule calculus built on it.
//!
//! A [`Span`] is a Z/p^k-submodule of (Z/p^k)^n stored as its Howell basis:
//! rows in echelon form, each pivot a power of p, entries above a pivot
//! reduced modulo that pivot, and closed under "multiply by the pivot
//! annihilator". Two spans are equal iff their row lists are equal.

use serde::Serialize;

use crate::zmod::Zmod;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    #[serde(skip)]
    zm: Zmod,
    dim: usize,
    rows: Vec<Vec<u64>>,
}

fn first_nonzero(v: &[u64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Incremental echelon builder with one slot per pivot column.
struct Echelon {
    zm: Zmod,
    slot: Vec<Option<Vec<u64>>>,
}

impl Echelon {
    fn new(zm: Zmod, dim: usize) -> Self {
        Echelon { zm, slot: vec![None; dim] }
    }

    fn scaled(&self, v: &[u64], c: u64) -> Vec<u64> {
        v.iter().map(|&x| self.zm.mul(x, c)).collect()
    }

    fn insert(&mut self, v: Vec<u64>) {
        let zm = self.zm;
        let k = zm.k();
        let mut stack = vec![v];
        while let Some(mut v) = stack.pop() {
            while let Some(c) = first_nonzero(&v) {
                let (b, u) = zm.split(v[c]);
                let existing_val = self.slot[c].as_ref().map(|r| zm.val(r[c]));
                match existing_val {
                    Some(a) if b >= a => {
                        let q = v[c] / zm.p_pow(a);
                        let r = self.slot[c].as_ref().unwrap();
                        for (x, &y) in v.iter_mut().zip(r.iter()) {
                            *x = zm.sub(*x, zm.mul(q, y));
                        }
                    }
                    _ => {
                        let uinv = zm.inv(u).unwrap();
                        let v = self.scaled(&v, uinv);
                        if b > 0 {
                            stack.push(self.scaled(&v, zm.p_pow(k - b)));
                        }
                        if let Some(old) = self.slot[c].replace(v) {
                            stack.push(old);
                        }
                        break;
                    }
                }
            }
        }
    }

    fn finish(self, dim: usize) -> Span {
        let zm = self.zm;
        let mut rows: Vec<Vec<u64>> = self.slot.into_iter().flatten().collect();
        for i in 0..rows.len() {
            let c = first_nonzero(&rows[i]).unwrap();
            let piv = rows[i][c];
            let (head, tail) = rows.split_at_mut(i);
            let r = &tail[0];
            for row in head.iter_mut() {
                let q = row[c] / piv;
                if q != 0 {
                    for (x, &y) in row.iter_mut().zip(r.iter()).skip(c) {
                        *x = zm.sub(*x, zm.mul(q, y));
                    }
                }
            }
        }
        Span { zm, dim, rows }
    }
}

impl Span {
    pub fn zero(zm: Zmod, dim: usize) -> Self {
        Span { zm, dim, rows: Vec::new() }
    }

    pub fn full(zm: Zmod, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = 1;
                r
            })
            .collect();
        Span { zm, dim, rows }
    }

    pub fn from_rows<I>(zm: Zmod, dim: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let mut e = Echelon::new(zm, dim);
        for r in rows {
            debug_assert_eq!(r.len(), dim);
            e.insert(r);
        }
        e.finish(dim)
    }

    pub fn zmod(&self) -> Zmod {
        self.zm
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
    pub fn into_rows(self) -> Vec<Vec<u64>> {
        self.rows
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// (pivot column, pivot valuation) of each row.
    pub fn pivots(&self) -> Vec<(usize, u32)> {
        self.rows
            .iter()
            .map(|r| {
                let c = first_nonzero(r).unwrap();
                (c, self.zm.val(r[c]))
            })
            .collect()
    }

    /// log_p of the number of elements.
    pub fn log_size(&self) -> u32 {
        let k = self.zm.k();
        self.pivots().iter().map(|&(_, a)| k - a).sum()
    }

    pub fn is_full(&self) -> bool {
        self.log_size() == self.zm.k() * self.dim as u32
    }

    pub fn with_rows<I>(&self, extra: I) -> Span
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        Span::from_rows(self.zm, self.dim, self.rows.iter().cloned().chain(extra))
    }

    pub fn join(&self, other: &Span) -> Span {
        self.with_rows(other.rows.iter().cloned())
    }

    /// Reduces v to its canonical representative modulo the span.
    pub fn reduce(&self, v: &mut [u64]) {
        let zm = self.zm;
        for r in &self.rows {
            let c = first_nonzero(r).unwrap();
            let q = v[c] / r[c];
            if q != 0 {
                for (x, &y) in v.iter_mut().zip(r.iter()).skip(c) {
                    *x = zm.sub(*x, zm.mul(q, y));
                }
            }
        }
    }

    pub fn reduced(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduced(v).iter().all(|&x| x == 0)
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Columns whose pivot is a unit: these coordinates vanish on every reduced vector.
    pub fn unit_pivot_columns(&self) -> Vec<usize> {
        self.pivots().into_iter().filter(|&(_, a)| a == 0).map(|(c, _)| c).collect()
    }

    /// Every element of the span, each exactly once.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let zm = self.zm;
        let ranges: Vec<u64> = self.pivots().iter().map(|&(_, a)| zm.p_pow(zm.k() - a)).collect();
        let mut out = Vec::new();
        let mut coeff = vec![0u64; self.rows.len()];
        loop {
            let mut v = vec![0u64; self.dim];
            for (c, r) in coeff.iter().zip(&self.rows) {
                for (x, &y) in v.iter_mut().zip(r) {
                    *x = zm.add(*x, zm.mul(*c, y));
                }
            }
            out.push(v);
            let mut i = 0;
            loop {
                if i == coeff.len() {
                    return out;
                }
                coeff[i] += 1;
                if coeff[i] < ranges[i] {
                    break;
                }
                coeff[i] = 0;
                i += 1;
            }
        }
    }

    /// Intersection of two spans in the same ambient module.
    pub fn intersect(&self, other: &Span) -> Span {
        let n = self.dim;
        let zm = self.zm;
        // rows (u|u) for u in self, (w|0) for w in other; kernel part is the intersection
        let rows = self
            .rows
            .iter()
            .map(|u| {
                let mut r = u.clone();
                r.extend_from_slice(u);
                r
            })
            .chain(other.rows.iter().map(|w| {
                let mut r = w.clone();
                r.extend(std::iter::repeat(0).take(n));
                r
            }));
        let big = Span::from_rows(zm, 2 * n, rows);
        Span::from_rows(
            zm,
            n,
            big.rows
                .iter()
                .filter(|r| first_nonzero(r).unwrap() >= n)
                .map(|r| r[n..].to_vec()),
        )
    }

    /// Keeps only the listed coordinates.
    pub fn project(&self, cols: &[usize]) -> Span {
        Span::from_rows(self.zm, cols.len(), self.rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()))
    }
}

/// Z/p^k-linear solver for x ↦ Σ x_i images[i] modulo a target span.
#[derive(Clone, Debug)]
pub struct Solver {
    src: usize,
    tgt: usize,
    graph: Span,
}

impl Solver {
    pub fn new(zm: Zmod, src: usize, images: &[Vec<u64>], target: &Span) -> Self {
        let tgt = target.dim();
        debug_assert_eq!(images.len(), src);
        let rows = images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let mut r = img.clone();
                r.resize(tgt + src, 0);
                r[tgt + i] = 1;
                r
            })
            .chain(target.rows().iter().map(|t| {
                let mut r = t.clone();
                r.resize(tgt + src, 0);
                r
            }));
        Solver { src, tgt, graph: Span::from_rows(zm, tgt + src, rows) }
    }

    /// Some x with map(x) ≡ y, or None if y is not in the image.
    pub fn solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        let zm = self.graph.zmod();
        let mut v = y.to_vec();
        v.resize(self.tgt + self.src, 0);
        self.graph.reduce(&mut v);
        if v[..self.tgt].iter().any(|&x| x != 0) {
            return None;
        }
        Some(v[self.tgt..].iter().map(|&x| zm.neg(x)).collect())
    }

    /// Kernel of the map, as a span in the source.
    pub fn kernel(&self) -> Span {
        let t = self.tgt;
        Span::from_rows(
            self.graph.zmod(),
            self.src,
            self.graph
                .rows()
                .iter()
                .filter(|r| first_nonzero(r).unwrap() >= t)
                .map(|r| r[t..].to_vec()),
        )
    }

    /// Image of the map joined with the target span.
    pub fn image(&self) -> Span {
        Span::from_rows(
            self.graph.zmod(),
            self.tgt,
            self.graph.rows().iter().filter(|r| first_nonzero(r).unwrap() < self.tgt).map(|r| r[..self.tgt].to_vec()),
        )
    }
}

pub fn kernel(zm: Zmod, images: &[Vec<u64>], target: &Span) -> Span {
    Solver::new(zm, images.len(), images, target).kernel()
}
