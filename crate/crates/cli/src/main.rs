use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ordpsr::error::{Error, Result};
use ordpsr_cli::corpus::{write_corpus, Bounds, Counts, MANIFEST_FILE};
use ordpsr_cli::pipeline::{audit_corpus, run_scenario, Command, RunOptions, AUDIT_TRUNCATION};
use ordpsr_cli::report::{render, render_audit_text, Format};
use ordpsr_cli::scenario::Scenario;

/// Exact pseudorepresentation, Cayley-Hamilton and numerical-criterion toolkit.
///
/// Exit codes: 0 success, 1 invariant failure, 2 input error, 3 budget exceeded.
#[derive(Parser)]
#[command(name = "ordpsr", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Global {
    /// Overrides the scenario seed (corpus: generator seed, default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the scenario enumeration budget.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write one file per report into DIR instead of printing.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Include wall-clock timings (reports are then no longer byte-stable).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the pseudorepresentation identities of each scenario's law.
    Validate { scenarios: Vec<PathBuf> },
    /// Run every stage on each scenario.
    Pipeline { scenarios: Vec<PathBuf> },
    /// Condition table for each scenario's tower, or for the built-in tower
    /// corpus when no scenario is given.
    Audit {
        scenarios: Vec<PathBuf>,
        /// Truncation order of the built-in tower corpus.
        #[arg(long, default_value_t = AUDIT_TRUNCATION)]
        truncation: u32,
    },
    /// Numerical criterion for each scenario's lenstra or tower section.
    Criterion { scenarios: Vec<PathBuf> },
    /// Write a seeded scenario corpus and its manifest into --out.
    Corpus {
        /// Scenarios per family (default: the built-in counts).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = Bounds::default().max_ring)]
        max_ring: u64,
        #[arg(long, default_value_t = Bounds::default().max_group)]
        max_group: usize,
    },
}

/// Scenario files from the arguments; directories contribute their *.json
/// files except the corpus manifest.
fn collect(paths: &[PathBuf]) -> Result<Vec<Scenario>> {
    if paths.is_empty() {
        return Err(Error::input("no scenario files given"));
    }
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let rd = std::fs::read_dir(p).map_err(|e| Error::input(format!("cannot read {}: {e}", p.display())))?;
            for entry in rd {
                let f = entry.map_err(|e| Error::input(e.to_string()))?.path();
                if f.extension().is_some_and(|x| x == "json") && f.file_name().is_some_and(|n| n != MANIFEST_FILE) {
                    files.push(f);
                }
            }
        } else {
            files.push(p.clone());
        }
    }
    let mut out = files.iter().map(|f| Scenario::load(f)).collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = out.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(Error::input(format!("duplicate scenario name {:?}", w[0].name)));
    }
    Ok(out)
}

fn emit(out: Option<&Path>, name: &str, format: Format, text: &str) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(dir) => {
            let io = |e: std::io::Error| Error::input(format!("cannot write to {}: {e}", dir.display()));
            std::fs::create_dir_all(dir).map_err(io)?;
            std::fs::write(dir.join(format!("{name}.{}", format.extension())), text).map_err(io)
        }
    }
}

/// Runs every scenario; the exit code is the most severe outcome.
fn run_all(cmd: Command, paths: &[PathBuf], g: &Global) -> Result<i32> {
    let opts = RunOptions { seed: g.seed, budget: g.budget, timing: g.timing };
    let mut code = 0;
    for s in collect(paths)? {
        match run_scenario(&s, cmd, opts) {
            Ok(report) => {
                emit(g.out.as_deref(), &s.name, g.format, &render(&report, g.format))?;
                if !report.failures.is_empty() {
                    for f in &report.failures {
                        eprintln!("{}: {f}", s.name);
                    }
                    code = code.max(1);
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", s.name);
                code = code.max(e.exit_code());
            }
        }
    }
    Ok(code)
}

fn run(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Cmd::Validate { scenarios } => run_all(Command::Validate, scenarios, g),
        Cmd::Pipeline { scenarios } => run_all(Command::Pipeline, scenarios, g),
        Cmd::Criterion { scenarios } => run_all(Command::Criterion, scenarios, g),
        Cmd::Audit { scenarios, truncation } => {
            if !scenarios.is_empty() {
                return run_all(Command::Audit, scenarios, g);
            }
            let opts = RunOptions { seed: g.seed, budget: g.budget, timing: g.timing };
            let table = audit_corpus(*truncation, opts)?;
            let text = match g.format {
                Format::Json => render(&table, Format::Json),
                Format::Text => render_audit_text(&table),
            };
            emit(g.out.as_deref(), &format!("audit-n{truncation}"), g.format, &text)?;
            for f in &table.failures {
                eprintln!("{f}");
            }
            Ok(if table.failures.is_empty() { 0 } else { 1 })
        }
        Cmd::Corpus { count, max_ring, max_group } => {
            let dir = g.out.as_deref().ok_or_else(|| Error::input("corpus needs --out DIR"))?;
            let counts = count.map_or_else(Counts::default, Counts::uniform);
            let bounds = Bounds { max_ring: *max_ring, max_group: *max_group };
            let m = write_corpus(dir, g.seed.unwrap_or(0), counts, bounds)?;
            match g.format {
                Format::Json => println!("{}", serde_json::json!({"entries": m.entries.len(), "checksum": m.checksum})),
                Format::Text => println!("{} scenarios, checksum {}", m.entries.len(), m.checksum),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
