//! Python bindings. Every function takes the same JSON texts the CLI reads
//! and returns the result object as a JSON string, so consumers parse with
//! the standard library and stay exact (integers and rationals are decimal
//! strings, never floats).

use grpd_core::decide::{decide, Certificate, Verdict};
use grpd_core::drgroupoid::{dg_equal, dg_positive, DimensionGroupElement, Positivity};
use grpd_core::dynsys::{compression_exists, pseudoloop_exists, FiniteSystem, MetricModel};
use grpd_core::exactlin::{int, parse_rational, snf, Int, IntMatrix};
use grpd_core::fibered::{diagonal_indicator, fiber_sum, homology, trace_phi, FiberedSet, Section};
use grpd_core::graphmodel::{adjacency_transfer, validate, DirectedGraph};
use grpd_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;

fn raise(e: Error) -> PyErr {
    match e {
        Error::Inconsistency(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn int_vec(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn verdict_value(v: &Verdict) -> Value {
    let certificate = match &v.certificate {
        None => Value::Null,
        Some(Certificate::Witness { f, h }) => {
            json!({"type": "witness", "f": int_vec(f), "h": int_vec(h)})
        }
        Some(Certificate::FixedVector { y }) => json!({"type": "fixed_vector", "y": int_vec(y)}),
    };
    json!({
        "method": v.method.name(),
        "power": v.power,
        "embeddable": v.embeddable,
        "certificate": certificate,
    })
}

fn to_text(v: &Value) -> String {
    serde_json::to_string(v).expect("results serialize")
}

/// Sink/source report for a graph JSON text.
#[pyfunction]
fn validate_graph(text: &str) -> PyResult<String> {
    let g = DirectedGraph::from_json(text).map_err(raise)?;
    let report = validate(&g);
    Ok(to_text(&json!({
        "admissible": report.is_admissible(),
        "sinks": report.sinks,
        "sources": report.sources,
        "row_finite": report.row_finite,
    })))
}

/// Full three-method embeddability decision with certificates.
#[pyfunction]
#[pyo3(signature = (text, power = 1))]
fn decide_graph(text: &str, power: u32) -> PyResult<String> {
    let g = DirectedGraph::from_json(text).map_err(raise)?;
    let decision = decide(&g, power).map_err(raise)?;
    Ok(to_text(&json!({
        "embeddable": decision.embeddable,
        "verdicts": Value::Array(decision.verdicts.iter().map(verdict_value).collect()),
    })))
}

/// Homology presentation of a fibered set in the given degree.
#[pyfunction]
#[pyo3(signature = (text, degree = 0))]
fn fibered_homology(text: &str, degree: usize) -> PyResult<String> {
    let fs = FiberedSet::from_json(text).map_err(raise)?;
    let pres = homology(&fs, degree).map_err(raise)?;
    let cone = match &pres.positive_cone {
        None => Value::Null,
        Some(rows) => Value::Array(rows.iter().map(|r| int_vec(r)).collect()),
    };
    Ok(to_text(&json!({
        "degree": degree,
        "free_rank": pres.free_rank,
        "torsion": Value::Array(pres.torsion.iter().map(|t| Value::String(t.to_string())).collect()),
        "positive_cone": cone,
    })))
}

/// Trace of the diagonal identity through the least section of each fiber.
#[pyfunction]
fn trace_identity(text: &str) -> PyResult<String> {
    let fs = FiberedSet::from_json(text).map_err(raise)?;
    let mut phi = BTreeMap::new();
    for y in fs.sorted_y() {
        let fiber = fs.fiber(&y);
        phi.insert(y.clone(), fiber[0].clone());
    }
    let phi = Section::new(&fs, phi).map_err(raise)?;
    let traced = trace_phi(&fs, &phi, &diagonal_indicator(&fs.sorted_x())).map_err(raise)?;
    let sums = fiber_sum(&fs, &traced).map_err(raise)?;
    let values: BTreeMap<String, String> = traced
        .values()
        .iter()
        .map(|(key, c)| (key[0].clone(), c.to_string()))
        .collect();
    Ok(to_text(&json!({
        "section": phi.phi,
        "trace": values,
        "fiber_sums": int_vec(&sums),
    })))
}

fn element(level: usize, v: Vec<i64>) -> DimensionGroupElement {
    DimensionGroupElement::new(level, v.into_iter().map(int).collect())
}

/// Equality of two dimension-group elements over the graph's transfer matrix.
#[pyfunction]
fn dimension_group_equal(
    text: &str,
    level1: usize,
    v1: Vec<i64>,
    level2: usize,
    v2: Vec<i64>,
) -> PyResult<bool> {
    let g = DirectedGraph::from_json(text).map_err(raise)?;
    let tm = adjacency_transfer(&g).map_err(raise)?;
    dg_equal(&element(level1, v1), &element(level2, v2), &tm).map_err(raise)
}

/// Three-valued positivity of a dimension-group element at a search depth.
#[pyfunction]
fn dimension_group_positive(text: &str, level: usize, v: Vec<i64>, depth: u32) -> PyResult<String> {
    let g = DirectedGraph::from_json(text).map_err(raise)?;
    let tm = adjacency_transfer(&g).map_err(raise)?;
    let verdict = match dg_positive(&element(level, v), &tm, depth).map_err(raise)? {
        Positivity::Positive(k) => json!({"positivity": "positive", "power": k}),
        Positivity::NotPositive => json!({"positivity": "not_positive"}),
        Positivity::Unknown(d) => json!({"positivity": "unknown", "depth": d}),
    };
    Ok(to_text(&verdict))
}

/// Pseudoloop search on a metric model at a base point and tolerance "p/q".
#[pyfunction]
fn pseudoloop(text: &str, base: &str, eps: &str) -> PyResult<String> {
    let model = MetricModel::from_json(text).map_err(raise)?;
    let tolerance = parse_rational(eps).map_err(raise)?;
    let report = pseudoloop_exists(&model, base, &tolerance).map_err(raise)?;
    Ok(to_text(&json!({
        "exists": report.exists,
        "witness": report.witness,
        "cap": report.cap,
    })))
}

/// Exhaustive compression check for a finite bijection.
#[pyfunction]
fn compression(text: &str) -> PyResult<String> {
    let sys = FiniteSystem::from_json(text).map_err(raise)?;
    let report = compression_exists(&sys).map_err(raise)?;
    Ok(to_text(&json!({
        "exists": report.exists,
        "subsets_checked": u64::try_from(report.subsets_checked)
            .map_err(|_| PyValueError::new_err("subset count exceeds u64"))?,
    })))
}

/// Smith normal form of an integer matrix given as rows.
#[pyfunction]
fn smith_normal_form(rows: Vec<Vec<i64>>) -> PyResult<String> {
    let m = IntMatrix::from_rows(&rows).map_err(raise)?;
    let s = snf(&m);
    let matrix_value = |m: &IntMatrix| -> Value {
        Value::Array(
            (0..m.rows())
                .map(|i| {
                    Value::Array(
                        (0..m.cols())
                            .map(|j| Value::String(m.get(i, j).to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    };
    Ok(to_text(&json!({
        "diagonal": int_vec(&s.diagonal()),
        "u": matrix_value(&s.u),
        "v": matrix_value(&s.v),
    })))
}

#[pymodule]
fn grpd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate_graph, m)?)?;
    m.add_function(wrap_pyfunction!(decide_graph, m)?)?;
    m.add_function(wrap_pyfunction!(fibered_homology, m)?)?;
    m.add_function(wrap_pyfunction!(trace_identity, m)?)?;
    m.add_function(wrap_pyfunction!(dimension_group_equal, m)?)?;
    m.add_function(wrap_pyfunction!(dimension_group_positive, m)?)?;
    m.add_function(wrap_pyfunction!(pseudoloop, m)?)?;
    m.add_function(wrap_pyfunction!(compression, m)?)?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    Ok(())
}
