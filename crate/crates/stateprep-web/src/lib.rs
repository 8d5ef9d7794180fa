//! Browser bindings: string-in/string-out JSON wrappers around the
//! library, thin enough to unit-test natively. Errors come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use serde::Deserialize;
use stateprep::circuit::{
    circuit_depth, cx_equivalent_count, fidelity, serialize_circuit, simulate, Circuit,
    Statevector,
};
use stateprep::complexity::Bindings;
use stateprep::loader::{
    dense_target_state, load_dense, load_sparse, parse_dense_text, parse_sparse_text,
    sparse_target_state, DenseState, SparsePointSet,
};
use stateprep::pareto::{ConstraintSet, WeightVector};
use stateprep::plot::render_scatter_svg;
use stateprep::registry::{builtin_registry, Representation};
use stateprep::report::{build_report, render_json, ComparisonReport, CsvRow};
use wasm_bindgen::prelude::wasm_bindgen;

/// Circuits up to this size are simulated in the browser to report the
/// achieved fidelity; larger ones skip the check (null in the reply).
const BROWSER_SIM_QUBIT_CAP: usize = 14;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareRequest {
    representation: Representation,
    n: u32,
    #[serde(default)]
    r: Option<u64>,
    #[serde(default)]
    max_depth: Option<f64>,
    #[serde(default)]
    max_runtime: Option<f64>,
    #[serde(default)]
    max_qubits: Option<f64>,
    /// depth, runtime, qubits; equal when omitted.
    #[serde(default)]
    weights: Option<[f64; 3]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SynthesizeRequest {
    representation: Representation,
    text: String,
    #[serde(default)]
    normalize: bool,
}

fn error_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

fn comparison(request: &str) -> Result<ComparisonReport, String> {
    let request: CompareRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let bindings = match (request.representation, request.r) {
        (Representation::Dense, None) => Bindings::dense(request.n),
        (Representation::Sparse, Some(r)) => Bindings::sparse(request.n, r),
        (Representation::Dense, Some(_)) => {
            return Err("r only applies to the sparse representation".to_string());
        }
        (Representation::Sparse, None) => {
            return Err("the sparse representation needs r".to_string());
        }
    }
    .map_err(|e| e.to_string())?;
    let weights = match request.weights {
        Some([depth, runtime, qubits]) => {
            WeightVector::new(depth, runtime, qubits).map_err(|e| e.to_string())?
        }
        None => WeightVector::equal(),
    };
    let constraints = ConstraintSet {
        max_depth: request.max_depth,
        max_runtime: request.max_runtime,
        max_qubits: request.max_qubits,
    };
    build_report(&builtin_registry(), request.representation, bindings, constraints, weights)
        .map_err(|e| e.to_string())
}

/// Comparison report as JSON (same shape as the CLI's json format).
#[wasm_bindgen]
pub fn compare(request: &str) -> String {
    match comparison(request) {
        Ok(report) => render_json(&report),
        Err(message) => error_json(message),
    }
}

/// The same comparison as a three-panel SVG scatter. Replies starting
/// with '<' are markup; anything else is an error object.
#[wasm_bindgen]
pub fn compare_svg(request: &str) -> String {
    let report = match comparison(request) {
        Ok(report) => report,
        Err(message) => return error_json(message),
    };
    let rows: Vec<CsvRow> = report
        .rows
        .iter()
        .map(|row| CsvRow {
            algorithm: row.point.algorithm.clone(),
            depth: row.point.depth,
            runtime: row.point.runtime,
            qubits: row.point.qubits,
            pareto: row.pareto,
        })
        .collect();
    match render_scatter_svg(&rows) {
        Ok(svg) => svg,
        Err(e) => error_json(e),
    }
}

fn synthesized(request: &str) -> Result<(Circuit, Statevector), String> {
    let request: SynthesizeRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    match request.representation {
        Representation::Dense => {
            let amplitudes = parse_dense_text(&request.text).map_err(|e| e.to_string())?;
            let state = if request.normalize {
                DenseState::new_normalized(amplitudes)
            } else {
                DenseState::new(amplitudes)
            }
            .map_err(|e| e.to_string())?;
            let circuit = load_dense(&state).map_err(|e| e.to_string())?;
            Ok((circuit, dense_target_state(&state)))
        }
        Representation::Sparse => {
            let points = parse_sparse_text(&request.text).map_err(|e| e.to_string())?;
            let set = if request.normalize {
                SparsePointSet::new_normalized(points)
            } else {
                SparsePointSet::new(points)
            }
            .map_err(|e| e.to_string())?;
            let circuit = load_sparse(&set).map_err(|e| e.to_string())?;
            Ok((circuit, sparse_target_state(&set)))
        }
    }
}

/// Synthesize a loader circuit from state-file text; returns metrics,
/// the circuit text, and (for small circuits) the simulated fidelity.
#[wasm_bindgen]
pub fn synthesize(request: &str) -> String {
    let (circuit, target) = match synthesized(request) {
        Ok(pair) => pair,
        Err(message) => return error_json(message),
    };
    let achieved = if circuit.num_qubits() <= BROWSER_SIM_QUBIT_CAP {
        let out = simulate(&circuit, &Statevector::zero(circuit.num_qubits()))
            .expect("within simulator cap");
        Some(fidelity(&out, &target).expect("same dimension"))
    } else {
        None
    };
    serde_json::json!({
        "qubits": circuit.num_qubits(),
        "gates": circuit.gates().len(),
        "depth": circuit_depth(&circuit),
        "cx_equivalent": cx_equivalent_count(&circuit),
        "fidelity": achieved,
        "circuit": serialize_circuit(&circuit),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_reports_the_dense_catalog() {
        let reply = compare(r#"{"representation": "dense", "n": 20}"#);
        let value: serde_json::Value = serde_json::from_str(&reply).unwrap();
        assert!(value.get("error").is_none(), "got {reply}");
        assert_eq!(value["rows"].as_array().unwrap().len(), 6);
        let pareto = value["rows"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|row| row["pareto"].as_bool().unwrap())
            .count();
        assert_eq!(pareto, 4);
    }

    #[test]
    fn compare_rejects_bad_requests_gracefully() {
        for request in [
            "not json",
            r#"{"representation": "dense"}"#,
            r#"{"representation": "sparse", "n": 10}"#,
            r#"{"representation": "dense", "n": 10, "r": 4}"#,
            r#"{"representation": "dense", "n": 10, "weights": [0, 0, 0]}"#,
            r#"{"representation": "dense", "n": 10, "unknown_field": 1}"#,
        ] {
            let reply = compare(request);
            let value: serde_json::Value = serde_json::from_str(&reply).unwrap();
            assert!(value["error"].is_string(), "request {request} should fail, got {reply}");
        }
    }

    #[test]
    fn svg_reply_is_markup_with_one_marker_per_row() {
        let svg = compare_svg(r#"{"representation": "sparse", "n": 10, "r": 10}"#);
        assert!(svg.starts_with("<svg"), "got {svg}");
        assert_eq!(svg.matches("class=\"marker marker-pareto\"").count(), 3 * 2);
        assert_eq!(svg.matches("class=\"marker marker-dominated\"").count(), 3 * 2);
    }

    #[test]
    fn synthesize_builds_and_checks_a_bell_circuit() {
        let request = serde_json::json!({
            "representation": "dense",
            "text": "0.7071067811865476\n0\n0\n0.7071067811865476\n",
        })
        .to_string();
        let reply = synthesize(&request);
        let value: serde_json::Value = serde_json::from_str(&reply).unwrap();
        assert_eq!(value["gates"], 5, "got {reply}");
        assert_eq!(value["depth"], 4);
        assert_eq!(value["cx_equivalent"], 2);
        assert!(value["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
        assert!(value["circuit"].as_str().unwrap().starts_with("qubits 2\n"));
    }

    #[test]
    fn synthesize_handles_sparse_points_and_normalization() {
        let strict = serde_json::json!({
            "representation": "sparse",
            "text": "000 0.5\n111 0.5\n",
        })
        .to_string();
        let reply = synthesize(&strict);
        let value: serde_json::Value = serde_json::from_str(&reply).unwrap();
        assert!(value["error"].as_str().unwrap().contains("norm"), "got {reply}");

        let relaxed = serde_json::json!({
            "representation": "sparse",
            "text": "000 0.5\n111 0.5\n",
            "normalize": true,
        })
        .to_string();
        let reply = synthesize(&relaxed);
        let value: serde_json::Value = serde_json::from_str(&reply).unwrap();
        assert_eq!(value["qubits"], 4, "got {reply}");
        assert!(value["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    }
}
