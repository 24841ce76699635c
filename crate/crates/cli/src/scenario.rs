//! Scenario files: a versioned JSON description of one run.
//!
//! ```json
//! {
//!   "schema": "ordpsr-scenario/1",
//!   "name": "diag-ordinary",
//!   "seed": 0,
//!   "budget": 1048576,
//!   "law": {
//!     "ring": {"kind": "field", "p": 5, "f": 1},
//!     "group": {"kind": "cyclic", "n": 4},
//!     "rep": {"kind": "characters", "chi1": [2], "chi2": [3]},
//!     "kappa": [3]
//!   },
//!   "tower": {"spec": "lambda", "p": 5, "f": 1, "n": 16, "r": 2},
//!   "lenstra": {"p": 5, "f": 1, "n": 8, "case": {"kind": "family", "r": 2}}
//! }
//! ```
//!
//! Every section is optional but at least one must be present. Character,
//! matrix and kappa values are given on the group generators; trace/det
//! laws list one value per group element in the group's element order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use ordpsr::algebra::Elem;
use ordpsr::criterion::{LenstraCase, TowerParams};
use ordpsr::dvr::DvrModel;
use ordpsr::error::{Error, Result};
use ordpsr::group::{character_from_generators, MarkedGroup};
use ordpsr::literal::{BuiltRing, ElemLit, GroupSpec, RingSpec};
use ordpsr::psrep::{MatrixRep2, Pseudorep2};

pub const SCENARIO_SCHEMA: &str = "ordpsr-scenario/1";
pub const DEFAULT_BUDGET: u64 = 1 << 20;

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lenstra: Option<LenstraSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    pub ring: RingSpec,
    pub group: GroupSpec,
    pub rep: RepSpec,
    /// κ on the generators; trivial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<ElemLit>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RepSpec {
    /// Row-major [a, b, c, d] for each generator.
    Matrices { generators: Vec<[ElemLit; 4]> },
    /// ρ = χ1 ⊕ χ2.
    Characters { chi1: Vec<ElemLit>, chi2: Vec<ElemLit> },
    /// A bare (trace, det) pair.
    Law { trace: Vec<ElemLit>, det: Vec<ElemLit> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LenstraSpec {
    pub p: u64,
    pub f: u32,
    pub n: u32,
    pub case: LenstraCase,
}

impl LenstraSpec {
    pub fn base(&self) -> Result<DvrModel> {
        DvrModel::new(self.p, self.f, self.n)
    }
}

/// A built law: ring, group, the law itself and κ on every element.
#[derive(Clone, Debug)]
pub struct Law {
    pub ring: BuiltRing,
    pub group: MarkedGroup,
    pub rho: Option<MatrixRep2>,
    pub psrep: Pseudorep2,
    pub kappa: Vec<Elem>,
}

impl LawSpec {
    /// Builds the law without validating the pseudorepresentation identities.
    pub fn build(&self) -> Result<Law> {
        let ring = self.ring.build()?;
        let group = self.group.build()?;
        let a = &ring.ring;
        let ngens = group.generators().len();
        let on_generators = |what: &str, lits: &[ElemLit]| -> Result<Vec<Elem>> {
            if lits.len() != ngens {
                return Err(Error::input(format!("{what} has {} values, the group has {ngens} generators", lits.len())));
            }
            ring.elements(lits)
        };
        let (rho, psrep) = match &self.rep {
            RepSpec::Matrices { generators } => {
                if generators.len() != ngens {
                    return Err(Error::input(format!(
                        "rep has {} matrices, the group has {ngens} generators",
                        generators.len()
                    )));
                }
                let mats = generators
                    .iter()
                    .map(|m| Ok([ring.element(&m[0])?, ring.element(&m[1])?, ring.element(&m[2])?, ring.element(&m[3])?]))
                    .collect::<Result<Vec<_>>>()?;
                let rho = MatrixRep2::new(a, &group, mats)?;
                let d = Pseudorep2::of_rep(&rho);
                (Some(rho), d)
            }
            RepSpec::Characters { chi1, chi2 } => {
                let c1 = character_from_generators(&group, a, &on_generators("chi1", chi1)?)?;
                let c2 = character_from_generators(&group, a, &on_generators("chi2", chi2)?)?;
                let rho = MatrixRep2::diagonal(a, &group, &c1, &c2)?;
                (Some(rho), Pseudorep2::of_characters(a, &group, &c1, &c2))
            }
            RepSpec::Law { trace, det } => {
                let n = group.order();
                if trace.len() != n || det.len() != n {
                    return Err(Error::input(format!("trace and det need {n} values, one per group element")));
                }
                (None, Pseudorep2::new(a, &group, ring.elements(trace)?, ring.elements(det)?)?)
            }
        };
        let kappa = match &self.kappa {
            None => vec![a.one(); group.order()],
            Some(k) => character_from_generators(&group, a, &on_generators("kappa", k)?)?,
        };
        if kappa.iter().any(|x| !a.is_unit(x)) {
            return Err(Error::input("kappa must take unit values"));
        }
        Ok(Law { ring, group, rho, psrep, kappa })
    }
}

impl Scenario {
    /// Parses and checks a scenario; errors carry the JSON path and position.
    pub fn parse(text: &str) -> Result<Scenario> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let s: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::input(format!("scenario parse error at `{path}` (line {}, column {}): {inner}", inner.line(), inner.column()))
        })?;
        s.check()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Scenario::parse(&text).map_err(|e| match e {
            Error::Input(m) => Error::input(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    pub fn check(&self) -> Result<()> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(Error::input(format!("unsupported scenario schema {:?}, expected {SCENARIO_SCHEMA:?}", self.schema)));
        }
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::input(format!("scenario name {:?} must be non-empty ASCII letters, digits, '-' or '_'", self.name)));
        }
        if self.budget == 0 {
            return Err(Error::input("budget must be positive"));
        }
        if self.law.is_none() && self.tower.is_none() && self.lenstra.is_none() {
            return Err(Error::input("scenario has no law, tower or lenstra section"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenarios serialize");
        s.push('\n');
        s
    }
}
