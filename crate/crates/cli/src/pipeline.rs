//! Runs scenarios through the stages and assembles reports.
//!
//! Stage errors are sorted by kind: unsupported inputs mark the stage as
//! skipped, invariant failures mark it failed and are listed in the
//! report's `failures`, while input and budget errors abort the run.

use std::collections::BTreeMap;
use std::time::Instant;

use ordpsr::criterion::{fitting_replay, theorem_audit, tower_corpus, EisensteinTower, LenstraInstance, TowerParams};
use ordpsr::error::{Error, Result};
use ordpsr::gma::{
    ch_quotient, lift_idempotents, rank_one_idempotents, reducibility_certificate, residual_idempotent_preimages, ChQuotient,
    GmaAlgebra,
};
use ordpsr::group::MarkedGroup;
use ordpsr::ordinary::{
    is_ordinary_on, is_ordinary_rep, kappa_side_first, ordinary_quotient, reducible_ordinary_quotient, OrdinaryContext,
};
use ordpsr::psrep::ResidualSplit;
use ordpsr::ring::{FiniteRing, Ideal};

use crate::report::*;
use crate::scenario::{Law, LenstraSpec, Scenario};

/// Seeded random samples used by the CH and descended-law checks beyond
/// their exhaustive range.
pub const CHECK_SAMPLES: usize = 100;

/// Truncation order of the built-in tower corpus.
pub const AUDIT_TRUNCATION: u32 = 16;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Pipeline,
    Audit,
    Criterion,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Pipeline => "pipeline",
            Command::Audit => "audit",
            Command::Criterion => "criterion",
        }
    }
}

struct Timer {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, u64>,
}

impl Timer {
    fn new(enabled: bool) -> Timer {
        Timer { enabled, last: Instant::now(), laps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        *self.laps.entry(name.to_string()).or_default() += (now - self.last).as_millis() as u64;
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, u64>> {
        self.enabled.then_some(self.laps)
    }
}

enum Halt {
    Skipped(String),
    Failed(String),
}

impl Halt {
    fn stage<T>(&self) -> Stage<T> {
        match self {
            Halt::Skipped(reason) => Stage::Skipped { reason: reason.clone() },
            Halt::Failed(error) => Stage::Failed { error: error.clone() },
        }
    }
}

fn settle<T>(name: &str, failures: &mut Vec<String>, r: Result<T>) -> Result<std::result::Result<T, Halt>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::Unsupported(m)) => Ok(Err(Halt::Skipped(m))),
        Err(Error::Invariant(m)) => {
            failures.push(format!("{name}: {m}"));
            Ok(Err(Halt::Failed(m)))
        }
        Err(e) => Err(e),
    }
}

fn needs(stage: &str) -> Halt {
    Halt::Skipped(format!("needs the {stage} stage"))
}

fn ideal_report(r: &FiniteRing, i: &Ideal) -> IdealReport {
    IdealReport {
        generators: r.ideal_generators(i),
        basis: r.ideal_basis(i),
        zero: r.is_zero_ideal(i),
        unit: r.is_unit_ideal(i),
    }
}

fn ring_summary(r: &FiniteRing) -> RingSummary {
    RingSummary {
        characteristic: r.zm().modulus(),
        dim: r.dim(),
        log_size: r.log_size(),
        local: r.is_local(),
        residue_order: r.residue_order().ok(),
    }
}

fn group_summary(g: &MarkedGroup) -> GroupSummary {
    let names = |xs: &[usize]| xs.iter().map(|&x| g.label(x).to_string()).collect();
    GroupSummary {
        name: g.name().to_string(),
        order: g.order(),
        elements: g.labels().to_vec(),
        generators: names(g.generators()),
        dp: names(g.dp()),
        ip: names(g.ip()),
    }
}

/// GMA structure with its provenance: lifted from a multiplicity-free split
/// or, for residually irreducible laws over a field, the first trace-one
/// idempotent of E.
pub fn build_gma(q: &ChQuotient, split: Option<&ResidualSplit>, budget: u64) -> Result<(GmaAlgebra, GmaStage)> {
    let ch = &q.ch;
    let e = &ch.algebra;
    let (gma, source, iterations, radical_class) = match split {
        Some(s) => {
            if !s.multiplicity_free {
                return Err(Error::unsupported("residual characters coincide"));
            }
            let (x1, x2) = residual_idempotent_preimages(q, s)?;
            let lifted = lift_idempotents(ch, &x1, &x2)?;
            if lifted.iterations > lifted.radical_class {
                return Err(Error::invariant(format!(
                    "idempotent lifting took {} steps, radical class is {}",
                    lifted.iterations, lifted.radical_class
                )));
            }
            let gma = GmaAlgebra::new(ch, &lifted.e1, &lifted.e2)?;
            (gma, IdempotentSource::Lifted, Some(lifted.iterations), Some(lifted.radical_class))
        }
        None => {
            let a = &ch.base;
            if !a.is_zero_ideal(a.max_ideal()?) {
                return Err(Error::unsupported("residually irreducible law over a non-field"));
            }
            let limit = usize::try_from(budget).unwrap_or(usize::MAX);
            let e1 = rank_one_idempotents(ch, limit)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::unsupported("not absolutely irreducible: no trace-one idempotent"))?;
            let e2 = e.sub(&e.one(), &e1);
            (GmaAlgebra::new(ch, &e1, &e2)?, IdempotentSource::RankOneScan, None, None)
        }
    };
    gma.check()?;
    let (e1, e2) = (&gma.e1, &gma.e2);
    let orthogonal = e.mul(e1, e1) == *e1
        && e.mul(e2, e2) == *e2
        && e.is_zero(&e.mul(e1, e2))
        && e.is_zero(&e.mul(e2, e1))
        && e.add(e1, e2) == e.one();
    if !orthogonal {
        return Err(Error::invariant("GMA idempotents are not orthogonal with sum 1"));
    }
    let stage = GmaStage {
        source,
        e1: e1.clone(),
        e2: e2.clone(),
        iterations,
        radical_class,
        b_generators: gma.b_gens.clone(),
        c_generators: gma.c_gens.clone(),
        m_table: gma.m_table.clone(),
        verified: true,
    };
    Ok((gma, stage))
}

/// Runs a law through validation and, when `full`, every later stage.
pub fn law_report(law: &Law, seed: u64, budget: u64, full: bool, failures: &mut Vec<String>) -> Result<LawReport> {
    let mut t = Timer::new(false);
    law_report_timed(law, seed, budget, full, failures, &mut t)
}

fn law_report_timed(
    law: &Law,
    seed: u64,
    budget: u64,
    full: bool,
    failures: &mut Vec<String>,
    timer: &mut Timer,
) -> Result<LawReport> {
    let d = &law.psrep;
    let a = &law.ring.ring;
    let g = &law.group;
    let violation = d.validate();
    let validate = ValidateStage {
        valid: violation.is_none(),
        violation: violation.as_ref().map(|v| ViolationReport {
            identity: v.identity.clone(),
            g: g.label(v.g).to_string(),
            h: g.label(v.h).to_string(),
        }),
    };
    timer.lap("validate");
    let mut report = LawReport {
        ring: ring_summary(a),
        group: group_summary(g),
        validate,
        kernel: None,
        ch: None,
        residual: None,
        gma: None,
        reducibility: None,
        ordinary: None,
        psrep_ordinary: None,
        reducible_ordinary: None,
    };
    if let Some(v) = &violation {
        failures.push(format!("validate: pseudorepresentation fails {} at ({}, {})", v.identity, g.label(v.g), g.label(v.h)));
        return Ok(report);
    }
    if !full {
        return Ok(report);
    }

    let kernel = settle("kernel", failures, d.kernel_quotient().check(d, CHECK_SAMPLES, seed))?;
    report.kernel = Some(kernel.map_or_else(|h| h.stage(), Stage::Ok));
    timer.lap("kernel");

    let q = settle("ch", failures, ch_quotient(d).and_then(|q| q.ch.check_invariants(CHECK_SAMPLES, seed).map(|c| (q, c))))?;
    let q = match q {
        Ok((q, c)) => {
            report.ch = Some(Stage::Ok(ChStage {
                dim: q.ch.algebra.dim(),
                log_size: q.ch.algebra.log_size(),
                rounds: q.rounds,
                elements_checked: c.elements_checked,
                exhaustive: c.exhaustive,
            }));
            q
        }
        Err(h) => {
            report.ch = Some(h.stage());
            return Ok(report);
        }
    };
    timer.lap("ch");

    // residual split, κ-side first
    let split = match d.residual_split() {
        Ok(s) => Ok(Some(kappa_side_first(s, g, &law.kappa))),
        Err(Error::Unsupported(_)) if a.is_local() => Ok(None),
        Err(e) => Err(e),
    };
    let split = match settle("residual", failures, split)? {
        Ok(s) => s,
        Err(h) => {
            report.residual = Some(h.stage());
            return Ok(report);
        }
    };
    let residue_order = a.residue_order()?;
    report.residual = Some(Stage::Ok(match &split {
        Some(s) => ResidualStage {
            kind: ResidualKind::Split,
            residue_order,
            chi1: Some(s.chi1.clone()),
            chi2: Some(s.chi2.clone()),
            multiplicity_free: Some(s.multiplicity_free),
        },
        None => ResidualStage { kind: ResidualKind::Irreducible, residue_order, chi1: None, chi2: None, multiplicity_free: None },
    }));
    timer.lap("residual");

    let psrep_ord = settle("psrep_ordinary", failures, is_ordinary_on(&q, &law.kappa))?;
    report.psrep_ordinary = Some(psrep_ord.map_or_else(|h| h.stage(), Stage::Ok));
    timer.lap("psrep_ordinary");

    let gma = match settle("gma", failures, build_gma(&q, split.as_ref(), budget))? {
        Ok((gma, stage)) => {
            report.gma = Some(Stage::Ok(stage));
            gma
        }
        Err(h) => {
            report.gma = Some(h.stage());
            let h = needs("gma");
            report.reducibility = Some(h.stage());
            report.ordinary = Some(h.stage());
            if split.is_some() {
                report.reducible_ordinary = Some(h.stage());
            }
            return Ok(report);
        }
    };
    timer.lap("gma");

    let cert = settle("reducibility", failures, reducibility_certificate(&gma, g, &q.rho))?;
    report.reducibility = Some(match cert {
        Ok(c) => Stage::Ok(ReducibilityStage {
            ideal: ideal_report(a, &c.ideal),
            quotient_log_size: c.quotient.ring.log_size(),
            chi1: c.chi1,
            chi2: c.chi2,
            verified: true,
        }),
        Err(h) => h.stage(),
    });
    timer.lap("reducibility");

    let ctx = match settle("ordinary", failures, OrdinaryContext::new(g, law.kappa.clone(), &gma, q.rho.clone()))? {
        Ok(ctx) => ctx,
        Err(h) => {
            report.ordinary = Some(h.stage());
            return Ok(report);
        }
    };
    let verdict = is_ordinary_rep(&ctx);
    let ord = settle("ordinary", failures, ordinary_quotient(&ctx))?;
    report.ordinary = Some(match ord {
        Ok(o) => {
            // the verdict and J* = 0 are the same statement
            if verdict.ordinary != gma.ch.algebra.relations().contains_span(&o.j_star) {
                failures.push("ordinary: verdict disagrees with the vanishing of J*".into());
            }
            Stage::Ok(OrdinaryStage {
                is_ordinary: verdict.ordinary,
                witness: verdict.witness.clone(),
                star_generators: o.star_generators.clone(),
                base_generators: o.base_generators.clone(),
                j_r: ideal_report(a, &o.j_r),
                collapse_step: o.collapse_step,
                e_ord_log_size: o.e_ord.algebra.log_size(),
                zero_ring: o.is_zero_ring(),
            })
        }
        Err(h) => h.stage(),
    });
    timer.lap("ordinary");

    if split.is_some() {
        let red = settle("reducible_ordinary", failures, reducible_ordinary_quotient(&ctx))?;
        report.reducible_ordinary = Some(match red {
            Ok(r) => Stage::Ok(ReducibleOrdinaryStage {
                ideal: ideal_report(a, &r.ideal),
                e_red_log_size: r.e_red.algebra.log_size(),
                chi1: r.chi1,
                chi2: r.chi2,
                surjective: r.surjective,
            }),
            Err(h) => h.stage(),
        });
        timer.lap("reducible_ordinary");
    }
    Ok(report)
}

pub fn tower_report(params: TowerParams, failures: &mut Vec<String>) -> Result<TowerReport> {
    let tower = EisensteinTower::build(params)?;
    let label = params.label();
    let mut report = TowerReport {
        params,
        label: label.clone(),
        rank: tower.rank,
        margin: tower.margin,
        degenerate: tower.degenerate,
        checks: tower.checks.clone(),
        audit: None,
        fitting: None,
        lenstra: None,
    };
    if !tower.checks.all() {
        failures.push(format!("tower {label}: structural checks failed"));
    }
    report.audit = Some(match settle("audit", failures, theorem_audit(&tower))? {
        Ok(row) => {
            if !row.consistent {
                failures.push(format!("audit {label}: decided conditions disagree"));
            }
            if !row.annihilators {
                failures.push(format!("audit {label}: annihilator identities fail"));
            }
            if row.length_h_mod_i != params.r {
                failures.push(format!("audit {label}: l(h/I) = {} but r = {}", row.length_h_mod_i, params.r));
            }
            Stage::Ok(row)
        }
        Err(h) => h.stage(),
    });
    if !tower.degenerate {
        report.fitting = Some(match settle("fitting", failures, fitting_replay(&tower))? {
            Ok(f) => {
                if !f.fitting_in_annihilator {
                    failures.push(format!("fitting {label}: Fitt(I) is not inside Ann(I)"));
                }
                if f.annihilator_zero && !f.bound_holds {
                    failures.push(format!("fitting {label}: l(I/I²) = {} < r = {}", f.cotangent_length, f.r));
                }
                Stage::Ok(f)
            }
            Err(h) => h.stage(),
        });
        let verdict = tower.augmented().and_then(|t| LenstraInstance::identity(t).check());
        report.lenstra = Some(settle("lenstra", failures, verdict)?.map_or_else(|h| h.stage(), Stage::Ok));
    }
    Ok(report)
}

pub fn lenstra_report(spec: &LenstraSpec) -> Result<LenstraReport> {
    let inst = LenstraInstance::build(&spec.base()?, spec.case)?;
    let verdict = inst.check()?;
    Ok(LenstraReport { p: spec.p, f: spec.f, n: spec.n, case: spec.case, rank: inst.t.rank, verdict })
}

/// Runs one scenario for a command.
pub fn run_scenario(s: &Scenario, command: Command, opts: RunOptions) -> Result<Report> {
    let seed = opts.seed.unwrap_or(s.seed);
    let budget = opts.budget.unwrap_or(s.budget);
    if budget == 0 {
        return Err(Error::input("budget must be positive"));
    }
    let mut timer = Timer::new(opts.timing);
    let mut failures = Vec::new();
    let mut report = Report {
        schema: REPORT_SCHEMA.into(),
        scenario: s.name.clone(),
        command: command.name().into(),
        seed,
        law: None,
        tower: None,
        lenstra: None,
        failures: Vec::new(),
        timing_ms: None,
    };
    let missing = |what: &str| Error::input(format!("scenario {:?} has no {what} section for `{}`", s.name, command.name()));
    let run_law = matches!(command, Command::Validate | Command::Pipeline);
    let run_tower = matches!(command, Command::Audit | Command::Pipeline | Command::Criterion);
    let run_lenstra = matches!(command, Command::Criterion | Command::Pipeline);
    match command {
        Command::Validate if s.law.is_none() => return Err(missing("law")),
        Command::Audit if s.tower.is_none() => return Err(missing("tower")),
        Command::Criterion if s.lenstra.is_none() && s.tower.is_none() => return Err(missing("lenstra or tower")),
        _ => {}
    }
    if let (true, Some(spec)) = (run_law, &s.law) {
        let law = spec.build()?;
        timer.lap("build");
        report.law = Some(law_report_timed(&law, seed, budget, command == Command::Pipeline, &mut failures, &mut timer)?);
    }
    if let (true, Some(params)) = (run_tower, s.tower) {
        report.tower = Some(tower_report(params, &mut failures)?);
        timer.lap("tower");
    }
    if let (true, Some(spec)) = (run_lenstra, &s.lenstra) {
        report.lenstra = Some(lenstra_report(spec)?);
        timer.lap("lenstra");
    }
    report.failures = failures;
    report.timing_ms = timer.finish();
    Ok(report)
}

/// The condition table over the built-in tower corpus.
pub fn audit_corpus(truncation: u32, opts: RunOptions) -> Result<AuditTable> {
    let mut timer = Timer::new(opts.timing);
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut fitting = Vec::new();
    for params in tower_corpus(truncation) {
        let t = tower_report(params, &mut failures)?;
        if let Some(Stage::Ok(row)) = t.audit {
            rows.push(row);
        }
        if let Some(Stage::Ok(f)) = t.fitting {
            fitting.push(f);
        }
        timer.lap(&t.label);
    }
    Ok(AuditTable {
        schema: REPORT_SCHEMA.into(),
        command: "audit".into(),
        truncation,
        rows,
        fitting,
        failures,
        timing_ms: timer.finish(),
    })
}
