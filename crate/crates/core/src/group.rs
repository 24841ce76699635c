//! Finite groups with marked subgroups Dp ⊇ Ip, characters, and group algebras.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::algebra::{Algebra, Elem, Hom, Product};
use crate::error::{Error, Result};
use crate::howell::Span;
use crate::ring::FiniteRing;

/// Default bound on group orders, keeping brute-force oracles feasible.
pub const MAX_ORDER: usize = 48;

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    labels: Vec<String>,
    dp: Vec<usize>,
    ip: Vec<usize>,
    /// Reserved order-2 element; carried along but not used by any construction.
    conj: Option<usize>,
    /// BFS tree: how each element is reached from the identity by right
    /// multiplication with a generator.
    #[serde(skip)]
    parent: Vec<Option<(usize, usize)>>,
}

impl MarkedGroup {
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, generators: Vec<usize>, labels: Option<Vec<String>>) -> Result<MarkedGroup> {
        let n = table.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::input(format!("group order {n} outside 1..={MAX_ORDER}")));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::input("multiplication table is not square or has out-of-range entries"));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::input("element 0 is not the identity"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::input(format!("multiplication is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inv[a] = b,
                None => return Err(Error::input(format!("element {a} has no inverse"))),
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::input("generator out of range"));
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if labels.len() != n {
            return Err(Error::input("label count does not match the group order"));
        }
        let mut g = MarkedGroup {
            name: name.to_string(),
            table,
            inv,
            generators,
            labels,
            dp: vec![0],
            ip: vec![0],
            conj: None,
            parent: Vec::new(),
        };
        g.parent = g.bfs_tree()?;
        let all: Vec<usize> = (0..n).collect();
        g.dp = all.clone();
        g.ip = all;
        Ok(g)
    }

    fn bfs_tree(&self) -> Result<Vec<Option<(usize, usize)>>> {
        let n = self.order();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (si, &s) in self.generators.iter().enumerate() {
                let y = self.table[x][s];
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, si));
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::input("generators do not generate the group"));
        }
        Ok(parent)
    }

    /// Closure of permutations (on 0..degree) under composition; x·y means
    /// "apply y, then x".
    pub fn from_permutations(name: &str, degree: usize, gens: &[Vec<usize>]) -> Result<MarkedGroup> {
        for p in gens {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::input("generator is not a permutation of the stated degree"));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        while i < elems.len() {
            for p in gens {
                let q: Vec<usize> = (0..degree).map(|j| elems[i][p[j]]).collect();
                if !index.contains_key(&q) {
                    if elems.len() >= MAX_ORDER {
                        return Err(Error::input(format!("permutation group exceeds order {MAX_ORDER}")));
                    }
                    index.insert(q.clone(), elems.len());
                    elems.push(q);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| index[&(0..degree).map(|j| elems[a][elems[b][j]]).collect::<Vec<_>>()]).collect())
            .collect();
        let generators = gens.iter().map(|p| index[p]).collect();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        MarkedGroup::from_table(name, table, generators, Some(labels))
    }

    pub fn cyclic(n: usize) -> Result<MarkedGroup> {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("g^{i}") }).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        MarkedGroup::from_table(&format!("C{n}"), table, gens, Some(labels))
    }

    /// Dihedral group of order 2n: r^a s^b is element a + n·b.
    pub fn dihedral(n: usize) -> Result<MarkedGroup> {
        if n < 2 {
            return Err(Error::input("dihedral group needs n >= 2"));
        }
        let enc = |a: usize, b: usize| a + n * b;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for x in 0..2 * n {
            for y in 0..2 * n {
                let (a, b) = (x % n, x / n);
                let (c, d) = (y % n, y / n);
                let rc = if b == 0 { c } else { (n - c) % n };
                table[x][y] = enc((a + rc) % n, (b + d) % 2);
            }
        }
        let labels = (0..2 * n)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                match (a, b) {
                    (0, 0) => "1".to_string(),
                    (a, 0) => format!("r^{a}"),
                    (0, _) => "s".to_string(),
                    (a, _) => format!("r^{a}s"),
                }
            })
            .collect();
        MarkedGroup::from_table(&format!("D{}", 2 * n), table, vec![enc(1, 0), enc(0, 1)], Some(labels))
    }

    /// Symmetric group on n letters, generated by (0 1) and (0 1 ... n-1).
    pub fn symmetric(n: usize) -> Result<MarkedGroup> {
        let mut t: Vec<usize> = (0..n).collect();
        if n > 1 {
            t.swap(0, 1);
        }
        let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        MarkedGroup::from_permutations(&format!("S{n}"), n, &[t, c])
    }

    pub fn direct_product(&self, other: &MarkedGroup) -> Result<MarkedGroup> {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.table[x / m][y / m] * m + other.table[x % m][y % m]).collect())
            .collect();
        let mut gens: Vec<usize> = self.generators.iter().map(|&g| g * m).collect();
        gens.extend(other.generators.iter().copied());
        let labels = (0..n * m).map(|x| format!("({},{})", self.labels[x / m], other.labels[x % m])).collect();
        MarkedGroup::from_table(&format!("{}x{}", self.name, other.name), table, gens, Some(labels))
    }

    /// Marks Dp and Ip by generators; requires Ip ⊆ Dp.
    pub fn with_marking(mut self, dp_gens: &[usize], ip_gens: &[usize]) -> Result<MarkedGroup> {
        let dp = self.subgroup_closure(dp_gens)?;
        let ip = self.subgroup_closure(ip_gens)?;
        if ip.iter().any(|x| dp.binary_search(x).is_err()) {
            return Err(Error::input("inertia subgroup is not contained in the decomposition subgroup"));
        }
        self.dp = dp;
        self.ip = ip;
        Ok(self)
    }

    pub fn with_conjugation(mut self, c: usize) -> Result<MarkedGroup> {
        if c >= self.order() || self.table[c][c] != 0 || c == 0 {
            return Err(Error::input("conjugation element must have order 2"));
        }
        self.conj = Some(c);
        Ok(self)
    }

    pub fn with_name(mut self, name: &str) -> MarkedGroup {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }
    pub fn dp(&self) -> &[usize] {
        &self.dp
    }
    pub fn ip(&self) -> &[usize] {
        &self.ip
    }
    pub fn conjugation(&self) -> Option<usize> {
        self.conj
    }
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.table[x][a];
            k += 1;
        }
        k
    }

    /// Smallest subgroup containing gens, as a sorted element list.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Result<Vec<usize>> {
        let n = self.order();
        if gens.iter().any(|&g| g >= n) {
            return Err(Error::input("subgroup generator out of range"));
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.table[x][g];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        Ok((0..n).filter(|&x| seen[x]).collect())
    }

    /// The generator word reaching each element: element = gens[w0]·gens[w1]·...
    pub fn word(&self, a: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut x = a;
        while let Some((prev, s)) = self.parent[x] {
            w.push(s);
            x = prev;
        }
        w.reverse();
        w
    }

    /// Edges (x, s, x·gens[s]) of the Cayley graph; a map defined on
    /// generators extends to a homomorphism iff it is consistent on all edges.
    pub fn cayley_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.order()).flat_map(move |x| self.generators.iter().enumerate().map(move |(si, &s)| (x, si, self.table[x][s])))
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for i in 0..p.len() {
        if seen[i] || p[i] == i {
            continue;
        }
        let mut cyc = vec![i];
        seen[i] = true;
        let mut j = p[i];
        while j != i {
            seen[j] = true;
            cyc.push(j);
            j = p[j];
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "1".to_string()
    } else {
        out
    }
}

/// Multiplicativity check for χ: G → R^×. Ok(None) on success, Ok(Some((g,h)))
/// with a pair where χ(gh) ≠ χ(g)χ(h); errors if some value is not a unit.
pub fn character_check(g: &MarkedGroup, r: &FiniteRing, values: &[Elem]) -> Result<Option<(usize, usize)>> {
    if values.len() != g.order() {
        return Err(Error::input("character must have one value per group element"));
    }
    for (i, v) in values.iter().enumerate() {
        if !r.is_unit(v) {
            return Err(Error::input(format!("character value at {} is not a unit", g.label(i))));
        }
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            if values[g.mul(a, b)] != r.mul(&values[a], &values[b]) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Extends generator values to a character; errors if inconsistent.
pub fn character_from_generators(g: &MarkedGroup, r: &FiniteRing, gen_values: &[Elem]) -> Result<Vec<Elem>> {
    if gen_values.len() != g.generators().len() {
        return Err(Error::input("one character value per generator is required"));
    }
    let gen_values: Vec<Elem> = gen_values.iter().map(|v| r.reduced(v.clone())).collect();
    let values: Vec<Elem> = (0..g.order())
        .map(|x| g.word(x).iter().fold(r.one(), |acc, &s| r.mul(&acc, &gen_values[s])))
        .collect();
    for (x, s, y) in g.cayley_edges() {
        if values[y] != r.mul(&values[x], &gen_values[s]) {
            return Err(Error::input("character values on generators violate a group relation"));
        }
    }
    if let Some((a, b)) = character_check(g, r, &values)? {
        return Err(Error::invariant(format!("character not multiplicative at ({}, {})", g.label(a), g.label(b))));
    }
    Ok(values)
}

/// R[G] with generator index g·dim(R) + j for a_j·g.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub algebra: Algebra,
    pub ring: FiniteRing,
    pub group: MarkedGroup,
}

impl GroupAlgebra {
    pub fn new(r: &FiniteRing, g: &MarkedGroup) -> GroupAlgebra {
        let nr = r.dim();
        let n = g.order();
        let dim = nr * n;
        let zm = r.zm();
        let mut table: Vec<Product> = Vec::with_capacity(dim * dim);
        for x in 0..dim {
            for y in 0..dim {
                let (ga, ja) = (x / nr, x % nr);
                let (gb, jb) = (y / nr, y % nr);
                let block = g.mul(ga, gb) * nr;
                table.push(r.table()[ja * nr + jb].iter().map(|&(k, c)| ((block + k as usize) as u32, c)).collect());
            }
        }
        let rel = Span::from_rows(
            zm,
            dim,
            (0..n).flat_map(|b| {
                r.relations().rows().iter().map(move |row| {
                    let mut v = vec![0; dim];
                    v[b * nr..(b + 1) * nr].copy_from_slice(row);
                    v
                })
            }),
        );
        let mut one = vec![0; dim];
        one[..nr].copy_from_slice(&r.one());
        let algebra = Algebra::build(zm, dim, table, one, rel).algebra;
        debug_assert_eq!(algebra.dim(), dim);
        GroupAlgebra { algebra, ring: r.clone(), group: g.clone() }
    }

    fn nr(&self) -> usize {
        self.ring.dim()
    }

    /// a·g.
    pub fn term(&self, a: &[u64], g: usize) -> Elem {
        let nr = self.nr();
        let mut v = vec![0; self.algebra.dim()];
        v[g * nr..(g + 1) * nr].copy_from_slice(a);
        self.algebra.reduced(v)
    }

    pub fn element(&self, g: usize) -> Elem {
        self.term(&self.ring.one(), g)
    }

    pub fn scalar(&self, a: &[u64]) -> Elem {
        self.term(a, 0)
    }

    /// Structure map R → R[G].
    pub fn structure_map(&self) -> Hom {
        Hom { images: self.ring.basis_elements().iter().map(|b| self.scalar(b)).collect() }
    }

    /// Coefficient of g in x.
    pub fn coefficient(&self, x: &[u64], g: usize) -> Elem {
        let nr = self.nr();
        self.ring.reduced(x[g * nr..(g + 1) * nr].to_vec())
    }

    /// Σ_g coeff[g]·g.
    pub fn from_coefficients(&self, coeffs: &[Elem]) -> Elem {
        self.algebra.reduced(coeffs.iter().flat_map(|c| c.iter().copied()).collect())
    }

    /// Linear extension of a function on G with values in R.
    pub fn extend_linearly(&self, values: &[Elem], x: &[u64]) -> Elem {
        let mut acc = self.ring.zero();
        for g in 0..self.group.order() {
            acc = self.ring.add(&acc, &self.ring.mul(&self.coefficient(x, g), &values[g]));
        }
        acc
    }
}
