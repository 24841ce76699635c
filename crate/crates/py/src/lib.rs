//! Python bindings. Reports cross the boundary as the same JSON the CLI
//! prints; library errors map onto a small exception hierarchy.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use ordpsr::criterion::LenstraCase;
use ordpsr::error::Error;
use ordpsr_cli::corpus::{generate_corpus, manifest, Bounds, Counts};
use ordpsr_cli::pipeline::{audit_corpus, lenstra_report, run_scenario, Command, RunOptions, AUDIT_TRUNCATION};
use ordpsr_cli::report::{render_text as render_value, to_json};
use ordpsr_cli::scenario::{LenstraSpec, Scenario};

create_exception!(_ordpsr, OrdpsrError, PyException);
create_exception!(_ordpsr, InputError, OrdpsrError);
create_exception!(_ordpsr, InvariantError, OrdpsrError);
create_exception!(_ordpsr, UnsupportedError, OrdpsrError);
create_exception!(_ordpsr, BudgetExceeded, OrdpsrError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Input(_) => InputError::new_err(msg),
        Error::Invariant(_) => InvariantError::new_err(msg),
        Error::Unsupported(_) => UnsupportedError::new_err(msg),
        Error::Budget(_) => BudgetExceeded::new_err(msg),
    }
}

fn command(name: &str) -> PyResult<Command> {
    Ok(match name {
        "validate" => Command::Validate,
        "pipeline" => Command::Pipeline,
        "audit" => Command::Audit,
        "criterion" => Command::Criterion,
        _ => return Err(InputError::new_err(format!("unknown command {name:?}"))),
    })
}

/// Runs one command on a scenario given as JSON text and returns the report
/// as JSON. Invariant failures are listed in the report's `failures`.
#[pyfunction]
#[pyo3(signature = (command_name, scenario, seed=None, budget=None))]
fn run(py: Python<'_>, command_name: &str, scenario: &str, seed: Option<u64>, budget: Option<u64>) -> PyResult<String> {
    let cmd = command(command_name)?;
    let s = Scenario::parse(scenario).map_err(py_err)?;
    let opts = RunOptions { seed, budget, timing: false };
    py.detach(|| run_scenario(&s, cmd, opts)).map(|r| to_json(&r)).map_err(py_err)
}

/// The CLI's text rendering of a JSON report.
#[pyfunction]
fn render_text(report: &str) -> PyResult<String> {
    let v: serde_json::Value = serde_json::from_str(report).map_err(|e| InputError::new_err(e.to_string()))?;
    Ok(render_value(&v))
}

/// Condition table of the built-in tower corpus, as JSON.
#[pyfunction]
#[pyo3(signature = (truncation=AUDIT_TRUNCATION))]
fn audit(py: Python<'_>, truncation: u32) -> PyResult<String> {
    py.detach(|| audit_corpus(truncation, RunOptions::default())).map(|t| to_json(&t)).map_err(py_err)
}

/// Numerical criterion over F_{p^f}[t]/(t^n); `case` is JSON such as
/// `{"kind": "family", "r": 2}`.
#[pyfunction]
fn lenstra(py: Python<'_>, p: u64, f: u32, n: u32, case: &str) -> PyResult<String> {
    let case: LenstraCase = serde_json::from_str(case).map_err(|e| InputError::new_err(e.to_string()))?;
    let spec = LenstraSpec { p, f, n, case };
    py.detach(|| lenstra_report(&spec)).map(|r| to_json(&r)).map_err(py_err)
}

/// Seeded corpus: (manifest checksum, [(name, family, scenario JSON)]).
#[pyfunction]
#[pyo3(signature = (seed=0, count=None))]
fn corpus(py: Python<'_>, seed: u64, count: Option<usize>) -> PyResult<(String, Vec<(String, String, String)>)> {
    let counts = count.map_or_else(Counts::default, Counts::uniform);
    let bounds = Bounds::default();
    let entries = py.detach(|| generate_corpus(seed, counts, bounds)).map_err(py_err)?;
    let m = manifest(seed, counts, bounds, &entries);
    let rows = entries
        .iter()
        .map(|e| (e.scenario.name.clone(), e.family.name().to_string(), e.scenario.to_json()))
        .collect();
    Ok((m.checksum, rows))
}

#[pymodule]
pub fn _ordpsr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("OrdpsrError", py.get_type::<OrdpsrError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("InvariantError", py.get_type::<InvariantError>())?;
    m.add("UnsupportedError", py.get_type::<UnsupportedError>())?;
    m.add("BudgetExceeded", py.get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(render_text, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(lenstra, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    Ok(())
}
