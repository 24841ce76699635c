//! η-invariants, cotangent lengths, the Wiles-Lenstra numerical criterion,
//! synthetic Eisenstein towers built as fiber products, and the audit of
//! the equivalent conditions on such towers.
//!
//! Towers are built honestly: h and H are assembled over a deeper model
//! k[t]/(t^(N+r)) and then reduced mod t^N, so H is free over the level-N
//! model and η is computed exactly. Statements whose true form is "x = 0"
//! or "A = B" in the untruncated ring are compared modulo t^(N - margin).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Hom};
use crate::dvr::DvrModel;
use crate::error::{Error, Result};
use crate::howell::{Solver, Span};
use crate::module::FinModule;
use crate::ring::{FiberProduct, FiniteRing, Ideal, RingQuotient};

/// A finite free O-algebra T with an augmentation pi: T → O splitting the
/// structure map.
#[derive(Clone, Debug)]
pub struct AugmentedAlgebra {
    pub base: DvrModel,
    pub ring: FiniteRing,
    pub structure: Hom,
    pub pi: Hom,
    /// ker(pi).
    pub kernel: Ideal,
    pub rank: u32,
}

impl AugmentedAlgebra {
    pub fn new(base: DvrModel, ring: FiniteRing, structure: Hom, pi: Hom) -> Result<AugmentedAlgebra> {
        structure.check_ring_hom(&base.ring, &ring)?;
        pi.check_ring_hom(&ring, &base.ring)?;
        let back = structure.then(&pi, &base.ring);
        if back.images != base.ring.basis_elements() {
            return Err(Error::input("augmentation does not split the structure map"));
        }
        let rank = free_rank(&base, &ring, &structure)?;
        let kernel = ring.ideal_preimage(&pi, &base.ring.zero_ideal());
        Ok(AugmentedAlgebra { base, ring, structure, pi, kernel, rank })
    }

    /// O itself with pi = id.
    pub fn trivial(base: &DvrModel) -> AugmentedAlgebra {
        let id = Hom::identity(&base.ring);
        let kernel = base.ring.zero_ideal();
        AugmentedAlgebra { base: base.clone(), ring: base.ring.clone(), structure: id.clone(), pi: id, kernel, rank: 1 }
    }

    /// O[x]/(x² − t^r x) with x ↦ 0.
    pub fn eisenstein_family(base: &DvrModel, r: u32) -> Result<AugmentedAlgebra> {
        let o = &base.ring;
        let ext = o.adjoin_root(&[o.zero(), o.neg(&base.t_pow(r))]);
        let pi = augment_roots(o, &ext.ring, &ext.base_map, &[ext.root.clone()])?;
        AugmentedAlgebra::new(base.clone(), ext.ring, ext.base_map, pi)
    }

    /// One of the tower shapes, augmented by its first factor.
    pub fn from_spec(base: &DvrModel, spec: HSpec) -> Result<AugmentedAlgebra> {
        let c = carrier(spec, base)?;
        AugmentedAlgebra::new(base.clone(), c.ring, c.structure, c.aug)
    }

    pub fn eta(&self) -> Ideal {
        eta_invariant(self)
    }

    pub fn eta_length(&self) -> u32 {
        self.base.ideal_exponent(&self.eta())
    }
}

/// The O-algebra map sending the structure image of O identically and each
/// of `roots` to 0.
fn augment_roots(o: &FiniteRing, t: &FiniteRing, structure: &Hom, roots: &[Elem]) -> Result<Hom> {
    let mut gens = structure.images.clone();
    let mut imgs = o.basis_elements();
    for x in roots {
        gens.push(x.clone());
        imgs.push(o.zero());
    }
    Hom::determined_by(t, o, &gens, &imgs)
}

/// Rank of T as an O-module, or an input error if T is not free.
pub fn free_rank(base: &DvrModel, t: &FiniteRing, structure: &Hom) -> Result<u32> {
    let f = base.residue.log_size();
    let tt = t.ideal(&[structure.apply(t, &base.t)]);
    let fiber = t.log_size() - t.ideal_log_size(&tt);
    if fiber % f != 0 {
        return Err(Error::invariant("special fiber is not a vector space over the residue field"));
    }
    let g = fiber / f;
    if t.log_size() != g * base.ring.log_size() {
        return Err(Error::input("algebra is not free over the base"));
    }
    Ok(g)
}

/// η = pi(Ann_T(ker pi)).
pub fn eta_invariant(t: &AugmentedAlgebra) -> Ideal {
    let ann = t.ring.annihilator(&t.kernel);
    t.base.ring.ideal_image(&t.ring, &t.pi, &ann)
}

/// Length of wp/wp² as an O-module.
pub fn cotangent_length(base: &DvrModel, r: &FiniteRing, wp: &Ideal) -> Result<u32> {
    let sq = r.ideal_product(wp, wp);
    let d = r.ideal_log_size(wp) - r.ideal_log_size(&sq);
    let f = base.residue.log_size();
    if d % f != 0 {
        return Err(Error::invariant("cotangent space is not a vector space over the residue field"));
    }
    Ok(d / f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LenstraVerdict {
    pub cotangent_length: u32,
    pub eta_length: u32,
    /// ℓ(J/J²) ≤ ℓ(O/η).
    pub criterion_met: bool,
    /// Checked only when the criterion is met.
    pub isomorphism: Option<bool>,
    /// Certified through a principal augmentation ideal; None when that
    /// route does not apply.
    pub complete_intersection: Option<bool>,
    pub truncation: u32,
    /// A length reached the truncation order, so it is only a lower bound.
    pub saturated: bool,
}

/// Numerical criterion for R ↠ T ↠ O, with phi: R → T and R's structure
/// map. A met criterion whose direct isomorphism check fails is an
/// invariant error.
pub fn lenstra_check(r: &FiniteRing, r_structure: &Hom, t: &AugmentedAlgebra, phi: &Hom) -> Result<LenstraVerdict> {
    let o = &t.base;
    r_structure.check_ring_hom(&o.ring, r)?;
    phi.check_ring_hom(r, &t.ring)?;
    if !phi.is_surjective(&t.ring) {
        return Err(Error::input("R → T is not surjective"));
    }
    if r_structure.then(phi, &t.ring) != t.structure {
        return Err(Error::input("R → T is not a map of O-algebras"));
    }
    let pi_r = phi.then(&t.pi, &o.ring);
    let j = r.ideal_preimage(&pi_r, &o.ring.zero_ideal());
    let cot = cotangent_length(o, r, &j)?;
    let eta = t.eta_length();
    let met = cot <= eta;
    let (isomorphism, complete_intersection) = if met {
        if !phi.is_injective(r, &t.ring) {
            return Err(Error::invariant(format!(
                "criterion met (ℓ(J/J²) = {cot} ≤ {eta} = ℓ(O/η)) but R → T is not injective"
            )));
        }
        let ci = if t.ring.is_local() && t.ring.is_principal(&t.kernel)? { Some(true) } else { None };
        (Some(true), ci)
    } else {
        (None, None)
    };
    Ok(LenstraVerdict {
        cotangent_length: cot,
        eta_length: eta,
        criterion_met: met,
        isomorphism,
        complete_intersection,
        truncation: o.n,
        saturated: cot >= o.n || eta >= o.n,
    })
}

/// Named instances of the numerical criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LenstraCase {
    /// R = T = O[x]/(x² − t^r x).
    Family { r: u32 },
    /// R = O[x]/(x³, tx) onto T = O.
    Cubic,
    /// R = T = a tower shape augmented by its first factor.
    Shape { spec: HSpec },
}

/// A surjection R ↠ T of O-algebras with T augmented.
#[derive(Clone, Debug)]
pub struct LenstraInstance {
    pub r: FiniteRing,
    pub r_structure: Hom,
    pub t: AugmentedAlgebra,
    pub phi: Hom,
}

impl LenstraInstance {
    pub fn identity(t: AugmentedAlgebra) -> LenstraInstance {
        LenstraInstance { r: t.ring.clone(), r_structure: t.structure.clone(), phi: Hom::identity(&t.ring), t }
    }

    pub fn build(base: &DvrModel, case: LenstraCase) -> Result<LenstraInstance> {
        Ok(match case {
            LenstraCase::Family { r } => LenstraInstance::identity(AugmentedAlgebra::eisenstein_family(base, r)?),
            LenstraCase::Shape { spec } => LenstraInstance::identity(AugmentedAlgebra::from_spec(base, spec)?),
            LenstraCase::Cubic => {
                let o = &base.ring;
                let ext = o.truncated(3);
                let tx = ext.ring.mul(&ext.base_map.apply(&ext.ring, &base.t), &ext.root);
                let q = ext.ring.quotient(&ext.ring.ideal(&[tx]));
                let r_structure = ext.base_map.then(&q.projection, &q.ring);
                let phi = augment_roots(o, &q.ring, &r_structure, &[q.project(&ext.root)])?;
                LenstraInstance { r: q.ring, r_structure, t: AugmentedAlgebra::trivial(base), phi }
            }
        })
    }

    pub fn check(&self) -> Result<LenstraVerdict> {
        lenstra_check(&self.r, &self.r_structure, &self.t, &self.phi)
    }
}

// ---- Eisenstein towers ----

/// Shapes of the ring h in a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HSpec {
    /// h = Λ.
    Lambda,
    /// Two copies of Λ glued along the residue field.
    TwoAxis,
    /// Three copies of Λ glued along the residue field.
    ThreeAxis,
    /// Λ[x]/(x²).
    Dual,
    /// Λ[x, y]/(x, y)².
    Square,
    /// Λ[x]/(x², tx); not flat, always rejected.
    TorsionDual,
}

impl HSpec {
    pub const ALL: [HSpec; 6] =
        [HSpec::Lambda, HSpec::TwoAxis, HSpec::ThreeAxis, HSpec::Dual, HSpec::Square, HSpec::TorsionDual];

    pub fn name(self) -> &'static str {
        match self {
            HSpec::Lambda => "lambda",
            HSpec::TwoAxis => "two-axis",
            HSpec::ThreeAxis => "three-axis",
            HSpec::Dual => "dual",
            HSpec::Square => "square",
            HSpec::TorsionDual => "torsion-dual",
        }
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<HSpec> {
        HSpec::ALL.into_iter().find(|h| h.name() == s).ok_or_else(|| Error::input(format!("unknown h-spec {s:?}")))
    }
}

/// A ring over Λ with structure map and augmentation to Λ.
struct Carrier {
    ring: FiniteRing,
    structure: Hom,
    aug: Hom,
}

fn lambda_carrier(lam: &DvrModel) -> Carrier {
    let id = Hom::identity(&lam.ring);
    Carrier { ring: lam.ring.clone(), structure: id.clone(), aug: id }
}

/// Solves for the element of a fiber product with given coordinates.
struct PairSolver {
    solver: Solver,
    dims: (usize, usize),
}

impl PairSolver {
    fn new(fp: &FiberProduct, a: &FiniteRing, b: &FiniteRing) -> PairSolver {
        let (n, m) = (a.dim(), b.dim());
        let images: Vec<Elem> = fp.p1.images.iter().zip(&fp.p2.images).map(|(u, v)| concat(u, v)).collect();
        let target = Span::from_rows(
            a.zm(),
            n + m,
            a.relations()
                .rows()
                .iter()
                .map(|r| concat(r, &vec![0; m]))
                .chain(b.relations().rows().iter().map(|r| concat(&vec![0; n], r))),
        );
        PairSolver { solver: Solver::new(a.zm(), fp.ring.dim(), &images, &target), dims: (n, m) }
    }

    fn solve(&self, fp: &FiberProduct, x: &[u64], y: &[u64]) -> Result<Elem> {
        debug_assert_eq!((x.len(), y.len()), self.dims);
        let v = self.solver.solve(&concat(x, y)).ok_or_else(|| Error::invariant("pair is not in the fiber product"))?;
        Ok(fp.ring.reduced(v))
    }
}

fn concat(x: &[u64], y: &[u64]) -> Elem {
    let mut v = x.to_vec();
    v.extend_from_slice(y);
    v
}

/// a ×_k b along the two augmentations reduced mod t; augmented by the
/// first factor.
fn glue(lam: &DvrModel, a: &Carrier, b: &Carrier) -> Result<Carrier> {
    let k = lam.ring.quotient(&lam.ideal_t(1));
    let fa = a.aug.then(&k.projection, &k.ring);
    let fb = b.aug.then(&k.projection, &k.ring);
    let fp = a.ring.fiber_product(&b.ring, &k.ring, &fa, &fb)?;
    let ps = PairSolver::new(&fp, &a.ring, &b.ring);
    let images = lam
        .ring
        .basis_elements()
        .iter()
        .map(|x| ps.solve(&fp, &a.structure.apply(&a.ring, x), &b.structure.apply(&b.ring, x)))
        .collect::<Result<Vec<_>>>()?;
    let aug = fp.p1.then(&a.aug, &lam.ring);
    Ok(Carrier { ring: fp.ring, structure: Hom { images }, aug })
}

fn carrier(spec: HSpec, lam: &DvrModel) -> Result<Carrier> {
    let o = &lam.ring;
    let c = match spec {
        HSpec::Lambda => lambda_carrier(lam),
        // gluing over k is not compatible with truncation: glue one level
        // deeper, where t·(a ⊕ b) lands inside the glued ring, then reduce
        HSpec::TwoAxis | HSpec::ThreeAxis => {
            let deep = DvrModel::new(lam.residue.zm().p(), lam.residue.log_size(), lam.n + 1)?;
            let first = if spec == HSpec::TwoAxis { lambda_carrier(&deep) } else { carrier(HSpec::TwoAxis, &deep)? };
            let glued = glue(&deep, &first, &lambda_carrier(&deep))?;
            truncate_carrier(&glued, &deep, lam)?
        }
        HSpec::Dual => {
            let ext = o.truncated(2);
            let aug = augment_roots(o, &ext.ring, &ext.base_map, &[ext.root.clone()])?;
            Carrier { ring: ext.ring, structure: ext.base_map, aug }
        }
        HSpec::Square => {
            let ex = o.truncated(2);
            let ey = ex.ring.truncated(2);
            let x = ey.base_map.apply(&ey.ring, &ex.root);
            let y = ey.root.clone();
            let q = ey.ring.quotient(&ey.ring.ideal(&[ey.ring.mul(&x, &y)]));
            let structure = ex.base_map.then(&ey.base_map, &ey.ring).then(&q.projection, &q.ring);
            let roots = [q.project(&x), q.project(&y)];
            let aug = augment_roots(o, &q.ring, &structure, &roots)?;
            Carrier { ring: q.ring, structure, aug }
        }
        HSpec::TorsionDual => {
            let ext = o.truncated(2);
            let tx = ext.ring.mul(&ext.base_map.apply(&ext.ring, &lam.t), &ext.root);
            let q = ext.ring.quotient(&ext.ring.ideal(&[tx]));
            let structure = ext.base_map.then(&q.projection, &q.ring);
            let aug = augment_roots(o, &q.ring, &structure, &[q.project(&ext.root)])?;
            Carrier { ring: q.ring, structure, aug }
        }
    };
    free_rank(lam, &c.ring, &c.structure).map_err(|e| match e {
        Error::Input(_) => Error::input(format!("h-spec {spec} is not flat over Λ")),
        e => e,
    })?;
    Ok(c)
}

/// c ⊗ k[t]/(t^N) for a carrier over a deeper model.
fn truncate_carrier(c: &Carrier, deep: &DvrModel, lam: &DvrModel) -> Result<Carrier> {
    let red = deep.reduction(lam)?;
    let q = c.ring.quotient(&c.ring.ideal(&[c.structure.apply(&c.ring, &deep.t_pow(lam.n))]));
    let keep = lam.ring.dim();
    let structure = Hom { images: c.structure.images[..keep].iter().map(|x| q.project(x)).collect() };
    let aug = Hom { images: q.section.iter().map(|&j| red.apply(&lam.ring, &c.aug.images[j])).collect() };
    Ok(Carrier { ring: q.ring, structure, aug })
}

/// Parameters of a synthetic tower over F_{p^f}[t]/(t^n) with ξ = t^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TowerParams {
    pub spec: HSpec,
    pub p: u64,
    pub f: u32,
    pub n: u32,
    pub r: u32,
}

impl TowerParams {
    pub fn label(&self) -> String {
        format!("{}-p{}-f{}-n{}-r{}", self.spec, self.p, self.f, self.n, self.r)
    }
}

/// Results of the structural checks run while building a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerChecks {
    /// 𝓘 → I is onto and injective (modulo the margin).
    pub script_i_iso: bool,
    /// Ann_H(𝓘) = ker(H → h).
    pub ann_script_i: bool,
    /// Ann_H(ker(H → h)) = 𝓘.
    pub ann_kernel: bool,
    /// ℓ(H/I_H) = ℓ(h/I) = r.
    pub quotients: bool,
    /// T0 generates ker(H → h) and maps to ξ.
    pub t0: bool,
}

impl TowerChecks {
    pub fn all(&self) -> bool {
        self.script_i_iso && self.ann_script_i && self.ann_kernel && self.quotients && self.t0
    }
}

#[derive(Clone, Debug)]
pub struct EisensteinTower {
    pub params: TowerParams,
    pub lambda: DvrModel,
    pub xi: Elem,
    /// Λ → Λ/ξ.
    pub xi_quotient: RingQuotient,
    pub h: FiniteRing,
    pub h_structure: Hom,
    /// h → Λ.
    pub h_aug: Hom,
    pub big: FiniteRing,
    pub big_structure: Hom,
    /// H → h.
    pub p1: Hom,
    /// H → Λ.
    pub p2: Hom,
    /// ker(h → Λ/ξ).
    pub i: Ideal,
    /// ker(H → Λ/ξ).
    pub i_big: Ideal,
    /// ker(H → Λ).
    pub script_i: Ideal,
    /// ker(H → h).
    pub kernel: Ideal,
    pub t0: Elem,
    pub rank: u32,
    /// ξ is a unit, so H = h × Λ.
    pub degenerate: bool,
    /// Truncation-sensitive equalities are compared modulo t^(n - margin).
    pub margin: u32,
    pub checks: TowerChecks,
}

/// Largest K ∩ 𝓘 enumerated while searching for T0.
pub const T0_SEARCH_LIMIT: usize = 1 << 12;

pub fn tower_margin(r: u32) -> u32 {
    2 * r + 1
}

/// Builds h ×_{Λ/ξ} Λ for ξ = t^r over the given level-N model and verifies
/// the pullback identities; any failed identity is an invariant error.
pub fn build_eisenstein_tower(lambda: &DvrModel, r: u32, spec: HSpec) -> Result<EisensteinTower> {
    let p = lambda.residue.zm().p();
    let f = lambda.residue.log_size();
    let n = lambda.n;
    let margin = tower_margin(r);
    if n <= margin + r {
        return Err(Error::input(format!("truncation order {n} too small for r = {r}")));
    }
    let params = TowerParams { spec, p, f, n, r };
    let deep = DvrModel::new(p, f, n + r)?;
    let red = deep.reduction(lambda)?;
    let hc = carrier(spec, &deep)?;

    let deep_xi = deep.ring.quotient(&deep.ideal_t(r));
    let to_xi = hc.aug.then(&deep_xi.projection, &deep_xi.ring);
    let fp = hc.ring.fiber_product(&deep.ring, &deep_xi.ring, &to_xi, &deep_xi.projection)?;
    let ps = PairSolver::new(&fp, &hc.ring, &deep.ring);
    let big_structure_deep = Hom {
        images: deep
            .ring
            .basis_elements()
            .iter()
            .map(|x| ps.solve(&fp, &hc.structure.apply(&hc.ring, x), x))
            .collect::<Result<Vec<_>>>()?,
    };

    // reduce everything mod t^N
    let tn_h = hc.structure.apply(&hc.ring, &deep.t_pow(n));
    let qh = hc.ring.quotient(&hc.ring.ideal(&[tn_h]));
    let tn_big = big_structure_deep.apply(&fp.ring, &deep.t_pow(n));
    let qb = fp.ring.quotient(&fp.ring.ideal(&[tn_big]));
    let (h, big) = (qh.ring.clone(), qb.ring.clone());
    let keep = lambda.ring.dim();
    let h_structure = Hom { images: hc.structure.images[..keep].iter().map(|x| qh.project(x)).collect() };
    let big_structure = Hom { images: big_structure_deep.images[..keep].iter().map(|x| qb.project(x)).collect() };
    let h_aug = Hom { images: qh.section.iter().map(|&j| red.apply(&lambda.ring, &hc.aug.images[j])).collect() };
    let p1 = Hom { images: qb.section.iter().map(|&j| qh.project(&fp.p1.images[j])).collect() };
    let p2 = Hom { images: qb.section.iter().map(|&j| red.apply(&lambda.ring, &fp.p2.images[j])).collect() };
    h_structure.check_ring_hom(&lambda.ring, &h)?;
    big_structure.check_ring_hom(&lambda.ring, &big)?;
    h_aug.check_ring_hom(&h, &lambda.ring)?;
    p1.check_ring_hom(&big, &h)?;
    p2.check_ring_hom(&big, &lambda.ring)?;
    let rank = free_rank(lambda, &big, &big_structure)?;

    let xi = lambda.t_pow(r);
    let xi_quotient = lambda.ring.quotient(&lambda.ideal_t(r));
    let zero_xi = xi_quotient.ring.zero_ideal();
    let i = h.ideal_preimage(&h_aug.then(&xi_quotient.projection, &xi_quotient.ring), &zero_xi);
    let i_big = big.ideal_preimage(&p2.then(&xi_quotient.projection, &xi_quotient.ring), &zero_xi);
    let script_i = big.ideal_preimage(&p2, &lambda.ring.zero_ideal());
    let kernel = big.ideal_preimage(&p1, &h.zero_ideal());

    let t0 = find_t0(&big, &p2, &lambda.ring, &kernel, &script_i, &xi)?;

    let tm = big.ideal(&[big_structure.apply(&big, &lambda.t_pow(n - margin))]);
    let eq_mod = |a: &Ideal, b: &Ideal| big.ideal_sum(a, &tm) == big.ideal_sum(b, &tm);
    let onto = h.ideal_image(&big, &p1, &script_i) == i;
    let injective = big.ideal_contains(&tm, &big.ideal_intersection(&kernel, &script_i));
    let checks = TowerChecks {
        script_i_iso: onto && injective,
        ann_script_i: eq_mod(&big.annihilator(&script_i), &kernel),
        ann_kernel: eq_mod(&big.annihilator(&kernel), &script_i),
        quotients: r == 0 || (h.quotient_length(&i)? == r && big.quotient_length(&i_big)? == r),
        t0: t0.is_some(),
    };
    let tower = EisensteinTower {
        params,
        lambda: lambda.clone(),
        xi,
        xi_quotient,
        h,
        h_structure,
        h_aug,
        big,
        big_structure,
        p1,
        p2,
        i,
        i_big,
        script_i,
        kernel,
        t0: t0.unwrap_or_default(),
        rank,
        degenerate: r == 0,
        margin,
        checks,
    };
    if !tower.checks.all() {
        return Err(Error::invariant(format!("tower {} fails its pullback identities: {:?}", params.label(), tower.checks)));
    }
    Ok(tower)
}

/// A generator of K = ker(H → h) mapping to ξ: a particular solution plus
/// a search over K ∩ 𝓘.
fn find_t0(big: &FiniteRing, p2: &Hom, o: &FiniteRing, k: &Ideal, script_i: &Ideal, xi: &Elem) -> Result<Option<Elem>> {
    let kb = big.ideal_basis(k);
    let images: Vec<Elem> = kb.iter().map(|x| p2.apply(o, x)).collect();
    let Some(coeffs) = Solver::new(big.zm(), kb.len(), &images, o.relations()).solve(xi) else {
        return Ok(None);
    };
    let zm = big.zm();
    let x0 = big.combine(&coeffs.iter().zip(&kb).map(|(&c, x)| (c, x)).collect::<Vec<_>>());
    let both = big.ideal_intersection(k, script_i);
    let log = big.ideal_log_size(&both);
    if (zm.p() as f64).powi(log as i32) > T0_SEARCH_LIMIT as f64 {
        return Err(Error::budget(format!("T0 search over p^{log} candidates")));
    }
    for z in both.span().elements() {
        let cand = big.add(&x0, &z);
        if big.ideal(&[cand.clone()]) == *k {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

impl EisensteinTower {
    pub fn build(params: TowerParams) -> Result<EisensteinTower> {
        let lambda = DvrModel::new(params.p, params.f, params.n)?;
        build_eisenstein_tower(&lambda, params.r, params.spec)
    }

    /// t^e·H.
    pub fn big_t_ideal(&self, e: u32) -> Ideal {
        self.big.ideal(&[self.big_structure.apply(&self.big, &self.lambda.t_pow(e))])
    }

    /// t^e·h.
    pub fn h_t_ideal(&self, e: u32) -> Ideal {
        self.h.ideal(&[self.h_structure.apply(&self.h, &self.lambda.t_pow(e))])
    }

    /// H with pi = p2, as an augmented algebra.
    pub fn augmented(&self) -> Result<AugmentedAlgebra> {
        AugmentedAlgebra::new(self.lambda.clone(), self.big.clone(), self.big_structure.clone(), self.p2.clone())
    }

    /// x is a non-zero-divisor of h: with ℓ = ℓ(h/xh) ≤ N − margin, the
    /// untruncated annihilator vanishes iff Ann(x) ⊆ t^(N−ℓ)h here.
    pub fn is_h_nonzerodivisor(&self, x: &[u64]) -> Result<bool> {
        let xi = self.h.ideal(&[x.to_vec()]);
        let l = self.h.quotient_length(&xi)?;
        if l + self.margin > self.lambda.n {
            return Ok(false);
        }
        let ann = self.h.annihilator(&xi);
        Ok(self.h.ideal_contains(&self.h_t_ideal(self.lambda.n - l), &ann))
    }
}

/// Three-valued entry of the condition table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    True,
    False,
    Skipped,
}

impl Decision {
    pub fn decided(self) -> Option<bool> {
        match self {
            Decision::True => Some(true),
            Decision::False => Some(false),
            Decision::Skipped => None,
        }
    }
}

impl From<bool> for Decision {
    fn from(b: bool) -> Decision {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::True => "true",
            Decision::False => "false",
            Decision::Skipped => "skipped",
        })
    }
}

/// One row of the condition table.
///
/// c1: class-group data (not modeled, always skipped).
/// c2: I generated by a single non-zero-divisor.
/// c3: I and 𝓘 principal.
/// c4: embdim(H) = 2.
/// c5: h and H complete intersections (certified only through c3).
/// c6: h and H Gorenstein (socle test on special fibers).
/// c7: r = 1.
/// c8: h regular and h ⊗_H H/𝓘 a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub tower: String,
    pub c1: Decision,
    pub c2: Decision,
    pub c3: Decision,
    pub c4: Decision,
    pub c5: Decision,
    pub c6: Decision,
    pub c7: Decision,
    pub c8: Decision,
    pub generators_i: u32,
    pub generators_script_i: u32,
    pub embdim_big: u32,
    pub embdim_h: u32,
    /// ℓ(h/I), expected to equal r.
    pub length_h_mod_i: u32,
    pub eta_length: u32,
    /// Decided entries among c2, c3, c4, c6 agree, and c7 ⇔ c8 when they
    /// are all true.
    pub consistent: bool,
    pub annihilators: bool,
}

impl AuditRow {
    pub fn conditions(&self) -> [Decision; 8] {
        [self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7, self.c8]
    }
}

fn special_fiber_gorenstein(ring: &FiniteRing, t: Elem) -> Result<bool> {
    let q = ring.quotient(&ring.ideal(&[t]));
    q.ring.is_gorenstein()
}

pub fn theorem_audit(tower: &EisensteinTower) -> Result<AuditRow> {
    if tower.degenerate {
        return Err(Error::unsupported("degenerate tower (ξ a unit) has no local fiber product"));
    }
    let h = &tower.h;
    let big = &tower.big;
    let t = &tower.lambda.t;
    let gi = h.min_generators(&tower.i)?;
    let gs = big.min_generators(&tower.script_i)?;
    let principal = gi <= 1 && gs <= 1;
    let nzd_generator = if gi <= 1 {
        let mi = h.ideal_product(h.max_ideal()?, &tower.i);
        let g = h
            .ideal_basis(&tower.i)
            .into_iter()
            .find(|x| !mi.span().contains(x))
            .ok_or_else(|| Error::invariant("principal ideal without a generator"))?;
        tower.is_h_nonzerodivisor(&g)?
    } else {
        false
    };
    let embdim_big = big.embedding_dimension()?;
    let embdim_h = h.embedding_dimension()?;
    let gorenstein = special_fiber_gorenstein(h, tower.h_structure.apply(h, t))?
        && special_fiber_gorenstein(big, tower.big_structure.apply(big, t))?;
    let transverse = {
        let q = big.quotient(&big.ideal_sum(&tower.kernel, &tower.script_i));
        !q.ring.is_zero_ring() && q.ring.is_local() && q.ring.is_zero_ideal(q.ring.max_ideal()?)
    };
    let c2 = Decision::from(nzd_generator);
    let c3 = Decision::from(principal);
    let c4 = Decision::from(embdim_big == 2);
    let c5 = if principal { Decision::True } else { Decision::Skipped };
    let c6 = Decision::from(gorenstein);
    let c7 = Decision::from(tower.params.r == 1);
    let c8 = Decision::from(embdim_h == 1 && transverse);
    let decided: Vec<bool> = [c2, c3, c4, c6].iter().filter_map(|d| d.decided()).collect();
    let agree = decided.windows(2).all(|w| w[0] == w[1]);
    let all_true = agree && decided.first() == Some(&true);
    let consistent = agree && (!all_true || c7 == c8);
    Ok(AuditRow {
        tower: tower.params.label(),
        c1: Decision::Skipped,
        c2,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        generators_i: gi,
        generators_script_i: gs,
        embdim_big,
        embdim_h,
        length_h_mod_i: h.quotient_length(&tower.i)?,
        eta_length: tower.augmented()?.eta_length(),
        consistent,
        annihilators: tower.checks.ann_script_i && tower.checks.ann_kernel,
    })
}

/// Replay of the Fitting-ideal length bound on the h side of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittingReplay {
    pub tower: String,
    /// Ann_h(I) = 0 (modulo the margin).
    pub annihilator_zero: bool,
    /// Fitt_h(I) = 0 (modulo the margin).
    pub fitting_zero: bool,
    /// Fitt_h(I) ⊆ Ann_h(I).
    pub fitting_in_annihilator: bool,
    /// ℓ(I/I²).
    pub cotangent_length: u32,
    pub r: u32,
    pub bound_holds: bool,
}

pub fn fitting_replay(tower: &EisensteinTower) -> Result<FittingReplay> {
    let h = &tower.h;
    let small = tower.h_t_ideal(tower.lambda.n - tower.margin);
    let ann = h.annihilator(&tower.i);
    let module = FinModule::present_quotient(h, h, &Hom::identity(h), tower.i.span(), h.relations());
    let fitt = module.fitting_ideal()?;
    let cot = cotangent_length(&tower.lambda, h, &tower.i)?;
    Ok(FittingReplay {
        tower: tower.params.label(),
        annihilator_zero: h.ideal_contains(&small, &ann),
        fitting_zero: h.ideal_contains(&small, &fitt),
        fitting_in_annihilator: h.ideal_contains(&ann, &fitt),
        cotangent_length: cot,
        r: tower.params.r,
        bound_holds: cot >= tower.params.r,
    })
}

/// The tower corpus used by the equivalence audit: every flat h-spec, each
/// r in 1..=3, over F_5 and F_9.
pub fn tower_corpus(n: u32) -> Vec<TowerParams> {
    let mut out = Vec::new();
    for (p, f) in [(5, 1), (3, 2)] {
        for spec in [HSpec::Lambda, HSpec::TwoAxis, HSpec::ThreeAxis, HSpec::Dual, HSpec::Square] {
            for r in 1..=3 {
                out.push(TowerParams { spec, p, f, n, r });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(n: u32) -> DvrModel {
        DvrModel::new(5, 1, n).unwrap()
    }

    #[test]
    fn eta_of_trivial_and_family() {
        let base = o(8);
        let t = AugmentedAlgebra::trivial(&base);
        assert!(base.ring.is_unit_ideal(&t.eta()));
        for r in 1..=3 {
            let a = AugmentedAlgebra::eisenstein_family(&base, r).unwrap();
            assert_eq!(a.rank, 2);
            assert_eq!(a.eta(), base.ideal_t(r));
            assert_eq!(cotangent_length(&base, &a.ring, &a.kernel).unwrap(), r);
        }
    }

    #[test]
    fn dual_numbers_cotangent_is_saturated() {
        let base = o(6);
        let ext = base.ring.truncated(2);
        let pi = augment_roots(&base.ring, &ext.ring, &ext.base_map, &[ext.root.clone()]).unwrap();
        let a = AugmentedAlgebra::new(base.clone(), ext.ring, ext.base_map, pi).unwrap();
        assert_eq!(cotangent_length(&base, &a.ring, &a.kernel).unwrap(), 6);
    }

    #[test]
    fn lenstra_on_family_and_identity() {
        let base = o(8);
        for r in 1..=3 {
            let a = AugmentedAlgebra::eisenstein_family(&base, r).unwrap();
            let v = lenstra_check(&a.ring, &a.structure, &a, &Hom::identity(&a.ring)).unwrap();
            assert_eq!((v.cotangent_length, v.eta_length), (r, r));
            assert!(v.criterion_met);
            assert_eq!(v.isomorphism, Some(true));
            assert_eq!(v.complete_intersection, Some(true));
        }
        let t = AugmentedAlgebra::trivial(&base);
        let v = lenstra_check(&base.ring, &t.structure, &t, &Hom::identity(&base.ring)).unwrap();
        assert_eq!((v.cotangent_length, v.eta_length, v.criterion_met), (0, 0, true));
    }

    #[test]
    fn lenstra_not_met_for_cubic_over_trivial() {
        let v = LenstraInstance::build(&o(8), LenstraCase::Cubic).unwrap().check().unwrap();
        assert_eq!((v.cotangent_length, v.eta_length), (1, 0));
        assert!(!v.criterion_met);
        assert_eq!(v.isomorphism, None);
    }

    #[test]
    fn three_axis_is_not_a_complete_intersection() {
        let inst = LenstraInstance::build(&o(8), LenstraCase::Shape { spec: HSpec::ThreeAxis }).unwrap();
        assert_eq!(inst.t.rank, 3);
        assert!(!inst.t.ring.is_gorenstein().unwrap());
        let v = inst.check().unwrap();
        assert_eq!((v.cotangent_length, v.eta_length), (2, 1));
        assert!(!v.criterion_met);
        assert_eq!(v.isomorphism, None);
    }

    #[test]
    fn plane_tower_r2() {
        let tower = build_eisenstein_tower(&o(10), 2, HSpec::Lambda).unwrap();
        assert_eq!(tower.rank, 2);
        assert_eq!(tower.p2.apply(&tower.lambda.ring, &tower.t0), tower.xi);
        let row = theorem_audit(&tower).unwrap();
        for c in [row.c2, row.c3, row.c4, row.c5, row.c6] {
            assert_eq!(c, Decision::True);
        }
        assert_eq!((row.c7, row.c8), (Decision::False, Decision::False));
        assert_eq!(row.length_h_mod_i, 2);
        assert_eq!(row.eta_length, 2);
        assert!(row.consistent);
    }

    #[test]
    fn r1_plane_is_transverse() {
        let tower = build_eisenstein_tower(&o(8), 1, HSpec::Lambda).unwrap();
        let row = theorem_audit(&tower).unwrap();
        assert_eq!((row.c7, row.c8), (Decision::True, Decision::True));
    }

    #[test]
    fn three_axis_tower_is_all_false() {
        let tower = build_eisenstein_tower(&o(8), 1, HSpec::ThreeAxis).unwrap();
        let row = theorem_audit(&tower).unwrap();
        assert_eq!([row.c2, row.c3, row.c4, row.c6], [Decision::False; 4]);
        assert!(row.consistent);
        assert_eq!(row.length_h_mod_i, 1);
    }

    #[test]
    fn degenerate_and_non_flat() {
        let tower = build_eisenstein_tower(&o(6), 0, HSpec::Lambda).unwrap();
        assert!(tower.degenerate);
        assert!(theorem_audit(&tower).is_err());
        let err = build_eisenstein_tower(&o(8), 1, HSpec::TorsionDual).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn spec_names_round_trip() {
        for s in HSpec::ALL {
            assert_eq!(s.name().parse::<HSpec>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
    }
}
