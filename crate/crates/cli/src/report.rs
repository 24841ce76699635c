//! Report schema ("ordpsr-report/1") and renderers.
//!
//! Reports are plain data: element values are coordinate vectors over the
//! ring's Z/p^k basis, ideals are given by a basis and a generating set,
//! and every verdict sits next to the certificate it was derived from.
//! Timings are only included on request so that reports stay byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use ordpsr::algebra::Elem;
use ordpsr::criterion::{AuditRow, FittingReplay, LenstraCase, LenstraVerdict, TowerChecks, TowerParams};
use ordpsr::ordinary::{Generator, OrdinaryWitness, PsrepOrdinarity};
use ordpsr::psrep::InducedLawReport;

pub const REPORT_SCHEMA: &str = "ordpsr-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub scenario: String,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<LawReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lenstra: Option<LenstraReport>,
    /// Hard invariant failures; non-empty means exit code 1.
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u64>>,
}

/// Outcome of one pipeline stage.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Stage<T> {
    Ok(T),
    /// Outside the supported class for this stage.
    Skipped { reason: String },
    /// A checked invariant failed.
    Failed { error: String },
}

impl<T> Stage<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Stage::Ok(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSummary {
    pub characteristic: u64,
    pub dim: usize,
    pub log_size: u32,
    pub local: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_order: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub order: usize,
    pub elements: Vec<String>,
    pub generators: Vec<String>,
    pub dp: Vec<String>,
    pub ip: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    pub identity: String,
    pub g: String,
    pub h: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateStage {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChStage {
    pub dim: usize,
    pub log_size: u32,
    pub rounds: usize,
    pub elements_checked: u64,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualKind {
    Split,
    Irreducible,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualStage {
    pub kind: ResidualKind,
    pub residue_order: u64,
    /// Residual characters on every group element, κ-side first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi1: Option<Vec<Elem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi2: Option<Vec<Elem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity_free: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdempotentSource {
    /// Lifted from the residual split.
    Lifted,
    /// First trace-one idempotent of a residually irreducible field law.
    RankOneScan,
}

#[derive(Clone, Debug, Serialize)]
pub struct GmaStage {
    pub source: IdempotentSource,
    pub e1: Elem,
    pub e2: Elem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical_class: Option<usize>,
    pub b_generators: Vec<Elem>,
    pub c_generators: Vec<Elem>,
    pub m_table: Vec<Vec<Elem>>,
    /// e1, e2 orthogonal idempotents summing to 1 and the GMA trace and
    /// determinant agreeing with the CH law.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    pub generators: Vec<Elem>,
    pub basis: Vec<Elem>,
    pub zero: bool,
    pub unit: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducibilityStage {
    pub ideal: IdealReport,
    pub quotient_log_size: u32,
    /// Split characters modulo J_D, over the quotient's coordinates.
    pub chi1: Vec<Elem>,
    pub chi2: Vec<Elem>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrdinaryStage {
    pub is_ordinary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<OrdinaryWitness>,
    pub star_generators: Vec<Generator>,
    pub base_generators: Vec<Generator>,
    pub j_r: IdealReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapse_step: Option<usize>,
    pub e_ord_log_size: u32,
    pub zero_ring: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducibleOrdinaryStage {
    pub ideal: IdealReport,
    pub e_red_log_size: u32,
    pub chi1: Vec<Elem>,
    pub chi2: Vec<Elem>,
    pub surjective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub ring: RingSummary,
    pub group: GroupSummary,
    pub validate: ValidateStage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Stage<InducedLawReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ch: Option<Stage<ChStage>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Stage<ResidualStage>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gma: Option<Stage<GmaStage>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reducibility: Option<Stage<ReducibilityStage>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordinary: Option<Stage<OrdinaryStage>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psrep_ordinary: Option<Stage<PsrepOrdinarity>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reducible_ordinary: Option<Stage<ReducibleOrdinaryStage>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub params: TowerParams,
    pub label: String,
    pub rank: u32,
    pub margin: u32,
    pub degenerate: bool,
    pub checks: TowerChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<Stage<AuditRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitting: Option<Stage<FittingReplay>>,
    /// The criterion for H ↠ Λ along the second projection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lenstra: Option<Stage<LenstraVerdict>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LenstraReport {
    pub p: u64,
    pub f: u32,
    pub n: u32,
    pub case: LenstraCase,
    pub rank: u32,
    pub verdict: LenstraVerdict,
}

/// The condition table over a list of towers.
#[derive(Clone, Debug, Serialize)]
pub struct AuditTable {
    pub schema: String,
    pub command: String,
    pub truncation: u32,
    pub rows: Vec<AuditRow>,
    pub fitting: Vec<FittingReplay>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

/// Pretty JSON with arrays free of objects kept on one line.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = String::new();
    json_into(&mut out, &serde_json::to_value(value).expect("reports serialize"), 0);
    out.push('\n');
    out
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(a) => a.iter().any(has_object),
        _ => false,
    }
}

fn json_into(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                write!(out, "{}{}: ", pad(depth + 1), Value::String(k.clone())).unwrap();
                json_into(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            write!(out, "{}}}", pad(depth)).unwrap();
        }
        Value::Array(items) if has_object(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                json_into(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            write!(out, "{}]", pad(depth)).unwrap();
        }
        x => out.push_str(&serde_json::to_string(x).expect("values serialize")),
    }
}

pub fn render<T: Serialize>(value: &T, format: Format) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Text => render_text(&serde_json::to_value(value).expect("reports serialize")),
    }
}

/// Indented `key: value` rendering; arrays of scalars stay on one line.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    text_into(&mut out, v, 0);
    out
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) => {
            let parts: Option<Vec<String>> = a.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(" ")))
        }
        Value::Object(_) => None,
    }
}

fn text_into(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        text_into(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match inline(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}- [{i}]").unwrap();
                        text_into(out, x, depth + 1);
                    }
                }
            }
        }
        x => writeln!(out, "{pad}{}", inline(x).unwrap_or_default()).unwrap(),
    }
}

/// The audit table as aligned columns.
pub fn render_audit_text(t: &AuditTable) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<26} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3}  gI g𝓘 edH edh l(h/I) eta cons ann",
        "tower", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"
    )
    .unwrap();
    let short = |d: ordpsr::criterion::Decision| match d.decided() {
        Some(true) => "T",
        Some(false) => "F",
        None => "-",
    };
    for r in &t.rows {
        let c = r.conditions();
        writeln!(
            out,
            "{:<26} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3}  {:>2} {:>2} {:>3} {:>3} {:>6} {:>3} {:>4} {:>3}",
            r.tower,
            short(c[0]),
            short(c[1]),
            short(c[2]),
            short(c[3]),
            short(c[4]),
            short(c[5]),
            short(c[6]),
            short(c[7]),
            r.generators_i,
            r.generators_script_i,
            r.embdim_big,
            r.embdim_h,
            r.length_h_mod_i,
            r.eta_length,
            r.consistent,
            r.annihilators
        )
        .unwrap();
    }
    for f in &t.failures {
        writeln!(out, "FAILURE: {f}").unwrap();
    }
    out
}
