//! JSON-facing descriptions of rings, groups and elements.
//!
//! A ring literal is `{"char": p^k, "basis": n, "mul": [[[c]]], "one": [..]}`
//! where `mul[i][j]` is the coordinate vector of e_i·e_j; an optional
//! `relations` list gives extra vectors that are set to zero.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Elem, Hom};
use crate::dvr::DvrModel;
use crate::error::{Error, Result};
use crate::group::MarkedGroup;
use crate::ring::FiniteRing;
use crate::zmod::Zmod;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingLiteral {
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub basis: usize,
    pub mul: Vec<Vec<Vec<u64>>>,
    pub one: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<u64>>,
}

/// A ring together with the map from the coordinates its description uses.
#[derive(Clone, Debug)]
pub struct BuiltRing {
    pub ring: FiniteRing,
    /// From description coordinates to ring coordinates.
    pub coordinates: Hom,
    pub source_dim: usize,
}

impl BuiltRing {
    fn plain(ring: FiniteRing) -> BuiltRing {
        let source_dim = ring.dim();
        BuiltRing { coordinates: Hom::identity(&ring), ring, source_dim }
    }

    /// Interprets an element literal.
    pub fn element(&self, lit: &ElemLit) -> Result<Elem> {
        match lit {
            ElemLit::Int(c) => Ok(self.ring.scale(self.ring.zm().reduce(*c), &self.ring.one())),
            ElemLit::Coords(v) => {
                if v.len() != self.source_dim {
                    return Err(Error::input(format!(
                        "element has {} coordinates, the ring basis has {}",
                        v.len(),
                        self.source_dim
                    )));
                }
                let zm = self.ring.zm();
                let raw: Vec<u64> = v.iter().map(|&c| zm.reduce(c)).collect();
                Ok(self.coordinates.apply(&self.ring, &raw))
            }
        }
    }

    pub fn elements(&self, lits: &[ElemLit]) -> Result<Vec<Elem>> {
        lits.iter().map(|l| self.element(l)).collect()
    }
}

impl RingLiteral {
    pub fn from_ring(r: &FiniteRing) -> RingLiteral {
        let basis = r.basis_elements();
        let mul = basis.iter().map(|x| basis.iter().map(|y| r.mul(x, y)).collect()).collect();
        RingLiteral {
            characteristic: r.zm().modulus(),
            basis: r.dim(),
            mul,
            one: r.one(),
            relations: r.relations().rows().to_vec(),
        }
    }

    pub fn build(&self) -> Result<BuiltRing> {
        let zm = Zmod::from_characteristic(self.characteristic)?;
        if self.one.len() != self.basis {
            return Err(Error::input(format!("\"one\" has {} entries, expected {}", self.one.len(), self.basis)));
        }
        if let Some(r) = self.relations.iter().find(|r| r.len() != self.basis) {
            return Err(Error::input(format!("relation of length {} in a ring of basis {}", r.len(), self.basis)));
        }
        let q = Algebra::from_dense(zm, &self.mul, &self.one, &self.relations)?;
        let ring = FiniteRing::from_algebra(q.algebra)?;
        Ok(BuiltRing { ring, coordinates: q.projection, source_dim: self.basis })
    }
}

/// An element: an integer multiple of 1, or a coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemLit {
    Int(i64),
    Coords(Vec<i64>),
}

impl ElemLit {
    pub fn from_elem(x: &[u64]) -> ElemLit {
        ElemLit::Coords(x.iter().map(|&c| c as i64).collect())
    }
}

/// Named ring constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RingSpec {
    /// Z/p^k.
    Zmod { p: u64, k: u32 },
    /// F_{p^f}, basis 1, x, ..., x^(f-1).
    Field { p: u64, f: u32 },
    /// F_{p^f}[t]/(t^n), basis index e·f + j for t^e x^j.
    Dvr { p: u64, f: u32, n: u32 },
    /// F_{p^f}[ε]/(ε²).
    Dual { p: u64, f: u32 },
    Literal(RingLiteral),
}

impl RingSpec {
    pub fn build(&self) -> Result<BuiltRing> {
        Ok(match self {
            RingSpec::Zmod { p, k } => BuiltRing::plain(FiniteRing::zmod(*p, *k)?),
            RingSpec::Field { p, f } => BuiltRing::plain(FiniteRing::galois_field(*p, *f)?),
            RingSpec::Dvr { p, f, n } => BuiltRing::plain(DvrModel::new(*p, *f, *n)?.ring),
            RingSpec::Dual { p, f } => BuiltRing::plain(FiniteRing::galois_field(*p, *f)?.truncated(2).ring),
            RingSpec::Literal(lit) => lit.build()?,
        })
    }
}

/// Named group constructions with an optional Dp ⊇ Ip marking given by
/// element labels (default: the whole group for both).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    pub shape: GroupShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupShape {
    Cyclic { n: usize },
    /// Order 2n.
    Dihedral { n: usize },
    Symmetric { n: usize },
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
    Table { table: Vec<Vec<usize>>, generators: Vec<usize> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<MarkedGroup> {
        let g = match &self.shape {
            GroupShape::Cyclic { n } => MarkedGroup::cyclic(*n)?,
            GroupShape::Dihedral { n } => MarkedGroup::dihedral(*n)?,
            GroupShape::Symmetric { n } => MarkedGroup::symmetric(*n)?,
            GroupShape::Permutations { degree, generators } => MarkedGroup::from_permutations("G", *degree, generators)?,
            GroupShape::Table { table, generators } => MarkedGroup::from_table("G", table.clone(), generators.clone(), None)?,
        };
        if self.dp.is_none() && self.ip.is_none() {
            return Ok(g);
        }
        let resolve = |labels: &Option<Vec<String>>| -> Result<Vec<usize>> {
            match labels {
                None => Ok((0..g.order()).collect()),
                Some(ls) => ls
                    .iter()
                    .map(|l| g.find_label(l).ok_or_else(|| Error::input(format!("unknown group element label {l:?}"))))
                    .collect(),
            }
        };
        let dp = resolve(&self.dp)?;
        let ip = resolve(&self.ip)?;
        g.clone().with_marking(&dp, &ip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_literal_round_trip() {
        let r = FiniteRing::galois_field(3, 2).unwrap();
        let lit = RingLiteral::from_ring(&r);
        let json = serde_json::to_string(&lit).unwrap();
        assert!(json.starts_with("{\"char\":3,\"basis\":2,\"mul\":"));
        let back: RingLiteral = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap().ring, r);
    }

    #[test]
    fn literal_with_relations_projects_elements() {
        // Z/25[x]/(x², 5x) given on the basis 1, x
        let lit: RingLiteral = serde_json::from_str(
            r#"{"char": 25, "basis": 2, "mul": [[[1,0],[0,1]],[[0,1],[0,0]]], "one": [1,0], "relations": [[0,5]]}"#,
        )
        .unwrap();
        let b = lit.build().unwrap();
        assert_eq!(b.ring.log_size(), 3);
        let x = b.element(&ElemLit::Coords(vec![0, 1])).unwrap();
        assert!(b.ring.is_zero(&b.ring.scale(5, &x)));
        assert_eq!(b.element(&ElemLit::Int(-1)).unwrap(), b.ring.neg(&b.ring.one()));
    }

    #[test]
    fn bad_literals_are_input_errors() {
        let lit = RingLiteral { characteristic: 6, basis: 1, mul: vec![vec![vec![1]]], one: vec![1], relations: vec![] };
        assert!(matches!(lit.build(), Err(Error::Input(_))));
        let lit = RingLiteral { characteristic: 5, basis: 2, mul: vec![vec![vec![1]]], one: vec![1, 0], relations: vec![] };
        assert!(matches!(lit.build(), Err(Error::Input(_))));
    }

    #[test]
    fn group_spec_marking() {
        let spec: GroupSpec = serde_json::from_str(r#"{"kind": "cyclic", "n": 4, "dp": ["g^1"], "ip": ["g^2"]}"#).unwrap();
        let g = spec.build().unwrap();
        assert_eq!(g.dp().len(), 4);
        assert_eq!(g.ip().len(), 2);
        let bad: GroupSpec = serde_json::from_str(r#"{"kind": "cyclic", "n": 4, "dp": ["h"]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn ring_specs() {
        let s: RingSpec = serde_json::from_str(r#"{"kind": "dvr", "p": 5, "f": 1, "n": 3}"#).unwrap();
        assert_eq!(s.build().unwrap().ring.log_size(), 3);
        let s: RingSpec = serde_json::from_str(r#"{"kind": "dual", "p": 3, "f": 2}"#).unwrap();
        assert_eq!(s.build().unwrap().ring.log_size(), 4);
        let s: RingSpec =
            serde_json::from_str(r#"{"kind": "literal", "char": 7, "basis": 1, "mul": [[[1]]], "one": [1]}"#).unwrap();
        assert_eq!(s.build().unwrap().ring, FiniteRing::zmod(7, 1).unwrap());
    }
}
