//! Python bindings: parse, compute and verify through strings in the
//! same textual syntax as scenario files.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use salab::fuzz::{run_fuzz, FuzzConfig};
use salab::gen::GenConfig;
use salab::lie::{chern_simons as cs, Connection, LieAlgebraSpec, LieForm};
use salab::mutation::Mutation;
use salab::scenario::{print_lieform, run_text};
use salab::text::{parse_form, print_form};
use salab::Form;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn form(s: &str, n: usize) -> PyResult<Form> {
    parse_form(s, n).map_err(err)
}

fn matrix(rows: Vec<Vec<String>>, n: usize) -> PyResult<LieForm> {
    let k = rows.len();
    let mut e = Vec::with_capacity(k * k);
    for row in &rows {
        if row.len() != k {
            return Err(err(format!("matrix must be {k}x{k}")));
        }
        for s in row {
            e.push(form(s, n)?);
        }
    }
    Ok(LieForm::new(k, e))
}

/// Canonical printed form of `s`.
#[pyfunction]
fn normalize(s: &str, n: usize) -> PyResult<String> {
    Ok(print_form(&form(s, n)?))
}

#[pyfunction]
fn d(s: &str, n: usize) -> PyResult<String> {
    Ok(print_form(&form(s, n)?.d()))
}

#[pyfunction]
fn del_(s: &str, n: usize) -> PyResult<String> {
    Ok(print_form(&form(s, n)?.del()))
}

#[pyfunction]
fn delbar(s: &str, n: usize) -> PyResult<String> {
    Ok(print_form(&form(s, n)?.delbar()))
}

#[pyfunction]
fn wedge(a: &str, b: &str, n: usize) -> PyResult<String> {
    Ok(print_form(&form(a, n)?.wedge(&form(b, n)?)))
}

/// Sorted (p, q) types present in `s`.
#[pyfunction]
fn bidegrees(s: &str, n: usize) -> PyResult<Vec<(usize, usize)>> {
    Ok(form(s, n)?.bidegrees().into_iter().collect())
}

/// CS(θ) for a gl(k) connection given as a row-major matrix of 1-forms.
#[pyfunction]
fn chern_simons(theta: Vec<Vec<String>>, n: usize) -> PyResult<String> {
    let m = matrix(theta, n)?;
    let alg = LieAlgebraSpec::gl(m.size());
    let th = Connection::from_form(&m).map_err(err)?;
    Ok(print_form(&cs(&alg, &th)))
}

/// Curvature dθ + θ∧θ of a gl(k) connection.
#[pyfunction]
fn curvature(theta: Vec<Vec<String>>, n: usize) -> PyResult<String> {
    let th = Connection::from_form(&matrix(theta, n)?).map_err(err)?;
    Ok(print_lieform(&th.curvature()))
}

/// Runs a scenario given as JSON text; returns (exit code, JSON report).
#[pyfunction]
#[pyo3(signature = (text, stop_on_fail = false))]
fn run_scenario(text: &str, stop_on_fail: bool) -> PyResult<(i32, String)> {
    let r = run_text(text, stop_on_fail, false);
    Ok((r.exit_code(), serde_json::to_string(&r).map_err(err)?))
}

#[pyfunction]
fn mutations() -> Vec<String> {
    Mutation::all().iter().map(|m| m.to_string()).collect()
}

/// Runs the property fuzzer; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (seed = 0, n = 2, deg = 2, cases = 100, k = 2, mutation = None))]
fn fuzz(seed: u64, n: usize, deg: u32, cases: usize, k: usize, mutation: Option<&str>) -> PyResult<String> {
    let mutation = match mutation {
        Some(s) => s.parse::<Mutation>().map_err(err)?,
        None => Mutation::None,
    };
    let cfg = FuzzConfig {
        seed,
        cases,
        gen: GenConfig { n, deg, ..GenConfig::default() },
        k,
        mutation,
        ..FuzzConfig::default()
    };
    let r = run_fuzz(&cfg).map_err(err)?;
    serde_json::to_string(&r).map_err(err)
}

#[pymodule]
#[pyo3(name = "salab")]
fn salab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(d, m)?)?;
    m.add_function(wrap_pyfunction!(del_, m)?)?;
    m.add_function(wrap_pyfunction!(delbar, m)?)?;
    m.add_function(wrap_pyfunction!(wedge, m)?)?;
    m.add_function(wrap_pyfunction!(bidegrees, m)?)?;
    m.add_function(wrap_pyfunction!(chern_simons, m)?)?;
    m.add_function(wrap_pyfunction!(curvature, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(mutations, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    Ok(())
}
