//! Seeded scenario corpus.
//!
//! Families: `diagonal`, `triangular` and `irreducible` laws over fields and
//! truncated DVRs, `fiber` laws over fiber-product rings, bare trace/det
//! `law`s, Eisenstein `tower`s (Gorenstein and not) and `lenstra` cases.
//! Scenario names are `s{seed}-{family}-{index}`, so corpora for different
//! seeds never share a name. The manifest checksum is the SHA-256 of the
//! lines `name family file-sha256`, in name order.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ordpsr::algebra::Elem;
use ordpsr::criterion::{tower_corpus, HSpec, LenstraCase};
use ordpsr::error::{Error, Result};
use ordpsr::group::{character_from_generators, MarkedGroup};
use ordpsr::literal::{ElemLit, GroupShape, GroupSpec, RingLiteral, RingSpec};
use ordpsr::psrep::{mat_det, mat_from_ints, Mat2, MatrixRep2, Pseudorep2};
use ordpsr::ring::FiniteRing;

use crate::scenario::{LawSpec, LenstraSpec, RepSpec, Scenario, DEFAULT_BUDGET, SCENARIO_SCHEMA};

pub const CORPUS_SCHEMA: &str = "ordpsr-corpus/1";
pub const MANIFEST_FILE: &str = "manifest.json";
/// Truncation order of corpus towers.
pub const TOWER_TRUNCATION: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Diagonal,
    Triangular,
    Irreducible,
    Fiber,
    Law,
    Tower,
    Lenstra,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::Diagonal, Family::Triangular, Family::Irreducible, Family::Fiber, Family::Law, Family::Tower, Family::Lenstra];

    pub fn name(self) -> &'static str {
        match self {
            Family::Diagonal => "diagonal",
            Family::Triangular => "triangular",
            Family::Irreducible => "irreducible",
            Family::Fiber => "fiber",
            Family::Law => "law",
            Family::Tower => "tower",
            Family::Lenstra => "lenstra",
        }
    }
}

/// Scenarios per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub diagonal: usize,
    pub triangular: usize,
    pub irreducible: usize,
    pub fiber: usize,
    pub law: usize,
    pub tower: usize,
    pub lenstra: usize,
}

impl Default for Counts {
    fn default() -> Counts {
        Counts { diagonal: 6, triangular: 4, irreducible: 4, fiber: 3, law: 3, tower: 4, lenstra: 4 }
    }
}

impl Counts {
    pub fn uniform(n: usize) -> Counts {
        Counts { diagonal: n, triangular: n, irreducible: n, fiber: n, law: n, tower: n, lenstra: n }
    }

    pub fn get(&self, f: Family) -> usize {
        match f {
            Family::Diagonal => self.diagonal,
            Family::Triangular => self.triangular,
            Family::Irreducible => self.irreducible,
            Family::Fiber => self.fiber,
            Family::Law => self.law,
            Family::Tower => self.tower,
            Family::Lenstra => self.lenstra,
        }
    }
}

/// Size bounds: ring order and group order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_ring: u64,
    pub max_group: usize,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { max_ring: 625, max_group: 12 }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub family: Family,
    pub scenario: Scenario,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub family: Family,
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub seed: u64,
    pub counts: Counts,
    pub bounds: Bounds,
    pub entries: Vec<ManifestEntry>,
    pub checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn ring_order(r: &FiniteRing) -> u64 {
    r.zm().p().saturating_pow(r.log_size())
}

/// Named rings of odd characteristic: fields, Z/p^k and truncated DVRs.
pub fn ring_pool(max_ring: u64) -> Vec<RingSpec> {
    let all = [
        RingSpec::Field { p: 3, f: 1 },
        RingSpec::Field { p: 5, f: 1 },
        RingSpec::Field { p: 7, f: 1 },
        RingSpec::Field { p: 3, f: 2 },
        RingSpec::Field { p: 5, f: 2 },
        RingSpec::Zmod { p: 3, k: 2 },
        RingSpec::Zmod { p: 5, k: 2 },
        RingSpec::Zmod { p: 3, k: 3 },
        RingSpec::Dual { p: 3, f: 1 },
        RingSpec::Dual { p: 5, f: 1 },
        RingSpec::Dual { p: 7, f: 1 },
        RingSpec::Dvr { p: 3, f: 1, n: 3 },
        RingSpec::Dvr { p: 5, f: 1, n: 3 },
        RingSpec::Dvr { p: 3, f: 2, n: 2 },
        RingSpec::Dvr { p: 5, f: 1, n: 4 },
    ];
    all.into_iter().filter(|s| s.build().map(|b| ring_order(&b.ring) <= max_ring).unwrap_or(false)).collect()
}

/// Fields of odd characteristic with at most `max` elements.
pub fn field_pool(max: u64) -> Vec<RingSpec> {
    [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2)]
        .into_iter()
        .filter(|&(p, f)| p.pow(f) <= max)
        .map(|(p, f)| RingSpec::Field { p, f })
        .collect()
}

/// Local fiber products: two copies of a ring glued along its residue field.
pub fn fiber_pool(max_ring: u64) -> Result<Vec<RingSpec>> {
    let mut out = Vec::new();
    for (p, f, n) in [(3, 1, 2), (5, 1, 2), (3, 1, 3), (7, 1, 2)] {
        let dvr = ordpsr::dvr::DvrModel::new(p, f, n)?;
        let k = dvr.ring.quotient(&dvr.ideal_t(1));
        let fp = dvr.ring.fiber_product(&dvr.ring, &k.ring, &k.projection, &k.projection)?;
        if ring_order(&fp.ring) <= max_ring {
            out.push(RingSpec::Literal(RingLiteral::from_ring(&fp.ring)));
        }
    }
    // Z/9 ×_{F_3} Z/9
    let z9 = FiniteRing::zmod(3, 2)?;
    let k = z9.quotient(&z9.ideal(&[z9.scalar(3)]));
    let fp = z9.fiber_product(&z9, &k.ring, &k.projection, &k.projection)?;
    if ring_order(&fp.ring) <= max_ring {
        out.push(RingSpec::Literal(RingLiteral::from_ring(&fp.ring)));
    }
    Ok(out)
}

/// Cyclic, dihedral and symmetric groups up to the given order.
pub fn group_pool(max_order: usize) -> Vec<GroupSpec> {
    let mut shapes: Vec<GroupShape> = (2..=max_order).map(|n| GroupShape::Cyclic { n }).collect();
    shapes.extend((2..=max_order / 2).map(|n| GroupShape::Dihedral { n }));
    if max_order >= 6 {
        shapes.push(GroupShape::Symmetric { n: 3 });
    }
    shapes.into_iter().map(|shape| GroupSpec { shape, dp: None, ip: None }).collect()
}

fn lits(xs: &[Elem]) -> Vec<ElemLit> {
    xs.iter().map(|x| ElemLit::from_elem(x)).collect()
}

fn mat_lit(m: &Mat2) -> [ElemLit; 4] {
    [ElemLit::from_elem(&m[0]), ElemLit::from_elem(&m[1]), ElemLit::from_elem(&m[2]), ElemLit::from_elem(&m[3])]
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Integral matrices of a standard 2-dimensional representation, when the
/// group has one in this list.
pub fn standard_matrices(shape: &GroupShape) -> Option<Vec<[i64; 4]>> {
    Some(match shape {
        GroupShape::Symmetric { n: 3 } => vec![[-1, 1, 0, 1], [0, -1, 1, -1]],
        GroupShape::Dihedral { n: 3 } => vec![[0, -1, 1, -1], [0, 1, 1, 0]],
        GroupShape::Dihedral { n: 4 } => vec![[0, -1, 1, 0], [1, 0, 0, -1]],
        GroupShape::Dihedral { n: 6 } => vec![[1, -1, 1, 0], [0, 1, 1, 0]],
        GroupShape::Cyclic { n: 3 } => vec![[0, -1, 1, -1]],
        GroupShape::Cyclic { n: 4 } => vec![[0, -1, 1, 0]],
        GroupShape::Cyclic { n: 6 } => vec![[0, -1, 1, 1]],
        _ => return None,
    })
}

/// Seeded sampler of laws.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).expect("non-empty pool").clone()
    }

    pub fn element(&mut self, a: &FiniteRing) -> Elem {
        let m = a.zm().modulus();
        a.reduced((0..a.dim()).map(|_| self.rng.gen_range(0..m)).collect())
    }

    pub fn unit(&mut self, a: &FiniteRing) -> Elem {
        loop {
            let x = self.element(a);
            if a.is_unit(&x) {
                return x;
            }
        }
    }

    pub fn invertible_matrix(&mut self, a: &FiniteRing) -> Mat2 {
        loop {
            let m = [self.element(a), self.element(a), self.element(a), self.element(a)];
            if a.is_unit(&mat_det(a, &m)) {
                return m;
            }
        }
    }

    /// Generator values of a random character, found by raising random
    /// units to the power that kills everything of order prime to the
    /// generator's order; the trivial character after 64 misses.
    pub fn character(&mut self, a: &FiniteRing, g: &MarkedGroup) -> Vec<Elem> {
        let units = a.elements().into_iter().filter(|x| a.is_unit(x)).count() as u64;
        for _ in 0..64 {
            let vals: Vec<Elem> = g
                .generators()
                .iter()
                .map(|&s| {
                    let o = g.element_order(s) as u64;
                    let x = self.unit(a);
                    a.pow(&x, units / gcd(units, o))
                })
                .collect();
            if character_from_generators(g, a, &vals).is_ok() {
                return vals;
            }
        }
        vec![a.one(); g.generators().len()]
    }

    /// A character that differs from `c1` residually, so the GMA stages
    /// apply; a fifth of the time (or after 16 misses) whatever comes up.
    fn second_character(&mut self, a: &FiniteRing, g: &MarkedGroup, c1: &[Elem]) -> Vec<Elem> {
        let residual = |c: &[Elem]| -> Vec<Elem> { c.iter().map(|x| a.residue(x).unwrap_or_default()).collect() };
        let target = residual(c1);
        let mut c2 = self.character(a, g);
        if self.rng.gen_bool(0.2) {
            return c2;
        }
        for _ in 0..16 {
            if residual(&c2) != target {
                break;
            }
            c2 = self.character(a, g);
        }
        c2
    }

    /// κ: half the time the inverse of χ1 (so the κ-side exists), else random.
    fn kappa(&mut self, a: &FiniteRing, g: &MarkedGroup, chi1: &[Elem]) -> Vec<Elem> {
        if self.rng.gen_bool(0.5) {
            chi1.iter().map(|x| a.inverse(x).expect("character values are units")).collect()
        } else {
            self.character(a, g)
        }
    }

    fn marking(&mut self, g: &GroupSpec) -> GroupSpec {
        let mut g = g.clone();
        if let GroupShape::Cyclic { n } = g.shape {
            if n % 2 == 0 && n > 2 && self.rng.gen_bool(1.0 / 3.0) {
                g.ip = Some(vec!["g^2".into()]);
            }
        }
        g
    }

    /// χ1 ⊕ χ2, conjugated by a random invertible matrix when `conjugate`.
    pub fn diagonal(&mut self, ring: &RingSpec, group: &GroupSpec, conjugate: bool) -> Result<LawSpec> {
        let a = ring.build()?.ring;
        let group = self.marking(group);
        let g = group.build()?;
        let c1 = self.character(&a, &g);
        let c2 = self.second_character(&a, &g, &c1);
        let kappa = Some(lits(&self.kappa(&a, &g, &c1)));
        let rep = if conjugate {
            let chi1 = character_from_generators(&g, &a, &c1)?;
            let chi2 = character_from_generators(&g, &a, &c2)?;
            let rho = MatrixRep2::diagonal(&a, &g, &chi1, &chi2)?.conjugate(&self.invertible_matrix(&a))?;
            RepSpec::Matrices { generators: g.generators().iter().map(|&s| mat_lit(rho.image(s))).collect() }
        } else {
            RepSpec::Characters { chi1: lits(&c1), chi2: lits(&c2) }
        };
        Ok(LawSpec { ring: ring.clone(), group, rep, kappa })
    }

    /// Upper-triangular [[χ1, b], [0, χ2]] with random b, retried until the
    /// group relations hold (b = 0 as a last resort).
    pub fn triangular(&mut self, ring: &RingSpec, group: &GroupSpec) -> Result<LawSpec> {
        let a = ring.build()?.ring;
        let group = self.marking(group);
        let g = group.build()?;
        let c1 = self.character(&a, &g);
        let c2 = self.second_character(&a, &g, &c1);
        let kappa = Some(lits(&self.kappa(&a, &g, &c1)));
        for attempt in 0..32 {
            let mats: Vec<Mat2> = (0..c1.len())
                .map(|i| {
                    let b = if attempt < 31 { self.element(&a) } else { a.zero() };
                    [c1[i].clone(), b, a.zero(), c2[i].clone()]
                })
                .collect();
            if MatrixRep2::new(&a, &g, mats.clone()).is_ok() {
                let rep = RepSpec::Matrices { generators: mats.iter().map(mat_lit).collect() };
                return Ok(LawSpec { ring: ring.clone(), group, rep, kappa });
            }
        }
        Err(Error::invariant("diagonal matrices of characters violate the group relations"))
    }

    /// A standard representation conjugated at random; None when the group
    /// has no standard matrices or they fail over this ring.
    pub fn irreducible(&mut self, ring: &RingSpec, group: &GroupSpec) -> Result<Option<LawSpec>> {
        let Some(ints) = standard_matrices(&group.shape) else { return Ok(None) };
        let a = ring.build()?.ring;
        let g = group.build()?;
        let mats = ints.iter().map(|m| mat_from_ints(&a, *m)).collect();
        let Ok(rho) = MatrixRep2::new(&a, &g, mats) else { return Ok(None) };
        let rho = rho.conjugate(&self.invertible_matrix(&a))?;
        let kappa = Some(lits(&self.character(&a, &g)));
        let rep = RepSpec::Matrices { generators: g.generators().iter().map(|&s| mat_lit(rho.image(s))).collect() };
        Ok(Some(LawSpec { ring: ring.clone(), group: group.clone(), rep, kappa }))
    }

    /// The (trace, det) of a random diagonal or triangular law.
    pub fn bare_law(&mut self, ring: &RingSpec, group: &GroupSpec) -> Result<LawSpec> {
        let spec = if self.rng.gen_bool(0.5) { self.diagonal(ring, group, true)? } else { self.triangular(ring, group)? };
        let law = spec.build()?;
        let d: &Pseudorep2 = &law.psrep;
        Ok(LawSpec { rep: RepSpec::Law { trace: lits(&d.trace), det: lits(&d.det) }, ..spec })
    }
}

fn scenario(name: String, seed: u64) -> Scenario {
    Scenario { schema: SCENARIO_SCHEMA.into(), name, seed, budget: DEFAULT_BUDGET, law: None, tower: None, lenstra: None }
}

/// Groups whose order divides into the ring comfortably: at most 8 elements
/// for the law families keeps every pipeline stage fast.
fn law_groups(bounds: &Bounds) -> Vec<GroupSpec> {
    group_pool(bounds.max_group.min(8))
}

pub fn generate_corpus(seed: u64, counts: Counts, bounds: Bounds) -> Result<Vec<CorpusEntry>> {
    let mut s = Sampler::new(seed);
    let rings = ring_pool(bounds.max_ring);
    let fibers = fiber_pool(bounds.max_ring)?;
    let groups = law_groups(&bounds);
    if rings.is_empty() || groups.is_empty() {
        return Err(Error::input("size bounds leave no rings or groups to sample"));
    }
    let irreducible_groups: Vec<GroupSpec> =
        groups.iter().filter(|g| standard_matrices(&g.shape).is_some()).cloned().collect();
    let mut out = Vec::new();
    for family in Family::ALL {
        for idx in 0..counts.get(family) {
            let mut sc = scenario(format!("s{seed}-{}-{idx:03}", family.name()), seed);
            match family {
                Family::Diagonal => {
                    let (r, g) = (s.pick(&rings), s.pick(&groups));
                    let conj = s.rng().gen_bool(0.5);
                    sc.law = Some(s.diagonal(&r, &g, conj)?);
                }
                Family::Triangular => {
                    let (r, g) = (s.pick(&rings), s.pick(&groups));
                    sc.law = Some(s.triangular(&r, &g)?);
                }
                Family::Irreducible => {
                    if irreducible_groups.is_empty() {
                        return Err(Error::input("group bound excludes every group with a standard representation"));
                    }
                    sc.law = loop {
                        let (r, g) = (s.pick(&rings), s.pick(&irreducible_groups));
                        if let Some(l) = s.irreducible(&r, &g)? {
                            break Some(l);
                        }
                    };
                }
                Family::Fiber => {
                    if fibers.is_empty() {
                        return Err(Error::input("ring bound excludes every fiber-product ring"));
                    }
                    let (r, g) = (s.pick(&fibers), s.pick(&groups));
                    sc.law = Some(if s.rng().gen_bool(0.5) { s.diagonal(&r, &g, true)? } else { s.triangular(&r, &g)? });
                }
                Family::Law => {
                    let (r, g) = (s.pick(&rings), s.pick(&groups));
                    sc.law = Some(s.bare_law(&r, &g)?);
                }
                Family::Tower => {
                    sc.tower = Some(s.pick(&tower_corpus(TOWER_TRUNCATION)));
                }
                Family::Lenstra => {
                    let case = s.pick(&[
                        LenstraCase::Family { r: 1 },
                        LenstraCase::Family { r: 2 },
                        LenstraCase::Family { r: 3 },
                        LenstraCase::Cubic,
                        LenstraCase::Shape { spec: HSpec::TwoAxis },
                        LenstraCase::Shape { spec: HSpec::ThreeAxis },
                    ]);
                    let (p, f) = s.pick(&[(5, 1), (3, 2), (7, 1)]);
                    let n = s.rng().gen_range(6..=10);
                    sc.lenstra = Some(LenstraSpec { p, f, n, case });
                }
            }
            out.push(CorpusEntry { family, scenario: sc });
        }
    }
    out.sort_by(|a, b| a.scenario.name.cmp(&b.scenario.name));
    Ok(out)
}

pub fn manifest(seed: u64, counts: Counts, bounds: Bounds, entries: &[CorpusEntry]) -> Manifest {
    let mut rows: Vec<ManifestEntry> = entries
        .iter()
        .map(|e| ManifestEntry {
            name: e.scenario.name.clone(),
            family: e.family,
            file: format!("{}.json", e.scenario.name),
            sha256: sha256_hex(e.scenario.to_json().as_bytes()),
        })
        .collect();
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let lines: String = rows.iter().map(|r| format!("{} {} {}\n", r.name, r.family.name(), r.sha256)).collect();
    Manifest { schema: CORPUS_SCHEMA.into(), seed, counts, bounds, checksum: sha256_hex(lines.as_bytes()), entries: rows }
}

/// Writes every scenario and `manifest.json` into `dir`.
pub fn write_corpus(dir: &Path, seed: u64, counts: Counts, bounds: Bounds) -> Result<Manifest> {
    let entries = generate_corpus(seed, counts, bounds)?;
    let m = manifest(seed, counts, bounds, &entries);
    let io = |e: std::io::Error| Error::input(format!("cannot write corpus to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for e in &entries {
        std::fs::write(dir.join(format!("{}.json", e.scenario.name)), e.scenario.to_json()).map_err(io)?;
    }
    std::fs::write(dir.join(MANIFEST_FILE), crate::report::to_json(&m)).map_err(io)?;
    Ok(m)
}
