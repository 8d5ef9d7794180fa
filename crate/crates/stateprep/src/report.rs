//! Comparison reports: every registry record of one representation
//! evaluated at fixed bindings, flagged with constraint satisfaction
//! and Pareto membership, ranked by weighted score. Renderers for
//! plain-text tables, CSV (the interchange format the plotter reads
//! back), and JSON.

use crate::complexity::Bindings;
use crate::pareto::{
    filter_constraints, pareto_set, rank_weighted, ConstraintSet, ObjectivePoint, ParetoError,
    WeightVector,
};
use crate::registry::{evaluate_registry, AlgorithmRecord, RegistryError, Representation};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    #[serde(flatten)]
    pub point: ObjectivePoint,
    pub pareto: bool,
    pub passed_constraints: bool,
    pub rank: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub representation: Representation,
    pub bindings: Bindings,
    pub weights: WeightVector,
    pub constraints: ConstraintSet,
    /// Sorted by rank ascending; covers every record of the selected
    /// representation.
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
    #[error("no {representation} records in the registry")]
    NoRecords { representation: Representation },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// Evaluate, rank, filter, and flag. Ranking covers all rows (so
/// filtered-out algorithms stay visible in context); Pareto membership
/// is decided among the constraint survivors only.
pub fn build_report(
    records: &[AlgorithmRecord],
    representation: Representation,
    bindings: Bindings,
    constraints: ConstraintSet,
    weights: WeightVector,
) -> Result<ComparisonReport, ReportError> {
    let points = evaluate_registry(records, representation, &bindings)?;
    if points.is_empty() {
        return Err(ReportError::NoRecords { representation });
    }
    let survivors = filter_constraints(&points, &constraints);
    let pareto_names: BTreeSet<String> = if survivors.is_empty() {
        BTreeSet::new()
    } else {
        pareto_set(&survivors)?.into_iter().map(|p| p.algorithm).collect()
    };
    let rows = rank_weighted(&points, &weights)?
        .into_iter()
        .map(|ranked| {
            let passed_constraints = constraints.satisfies(&ranked.point);
            let pareto = passed_constraints && pareto_names.contains(&ranked.point.algorithm);
            ReportRow {
                point: ranked.point,
                pareto,
                passed_constraints,
                rank: ranked.rank,
                score: ranked.score,
            }
        })
        .collect();
    Ok(ComparisonReport { representation, bindings, weights, constraints, rows })
}

pub const CSV_HEADER: &str =
    "algorithm,group,representation,n,r,depth,runtime,qubits,pareto,passed_constraints,rank,score";

/// CSV rendering; byte-deterministic for a given report.
pub fn render_csv(report: &ComparisonReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let n = report.bindings.qubit_count();
    let r = report.bindings.nonzero_count();
    for row in &report.rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            row.point.algorithm,
            row.point.group,
            report.representation,
            n,
            r.map(|v| v.to_string()).unwrap_or_default(),
            row.point.depth,
            row.point.runtime,
            row.point.qubits,
            row.pareto,
            row.passed_constraints,
            row.rank,
            row.score,
        );
        out.push('\n');
    }
    out
}

/// Human-oriented fixed-width table.
pub fn render_table(report: &ComparisonReport) -> String {
    let header = ["algorithm", "depth", "runtime", "qubits", "pareto", "passed", "rank", "score"];
    let mut cells: Vec<[String; 8]> = Vec::with_capacity(report.rows.len());
    for row in &report.rows {
        cells.push([
            row.point.algorithm.clone(),
            format_value(row.point.depth),
            format_value(row.point.runtime),
            format_value(row.point.qubits),
            if row.pareto { "yes" } else { "no" }.to_string(),
            if row.passed_constraints { "yes" } else { "no" }.to_string(),
            row.rank.to_string(),
            format!("{:.4}", row.score),
        ]);
    }
    let mut widths = header.map(str::len);
    for row in &cells {
        for (width, cell) in widths.iter_mut().zip(row) {
            *width = (*width).max(cell.len());
        }
    }
    let mut out = String::new();
    let describe = match report.bindings.nonzero_count() {
        Some(r) => format!(
            "{} algorithms at n = {}, r = {}",
            report.representation,
            report.bindings.qubit_count(),
            r
        ),
        None => {
            format!("{} algorithms at n = {}", report.representation, report.bindings.qubit_count())
        }
    };
    out.push_str(&describe);
    out.push('\n');
    for (i, name) in header.iter().enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        let _ = write!(out, "{name:<width$}", width = widths[i]);
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out.push('\n');
    for row in &cells {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{cell:<width$}", width = widths[i]);
        }
        // Trailing alignment spaces add nothing.
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

/// Large objective values are orders, not counts: render compactly.
fn format_value(value: f64) -> String {
    if value >= 1e6 {
        format!("{value:.3e}")
    } else {
        format!("{value}")
    }
}

pub fn render_json(report: &ComparisonReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

/// One row of a comparison CSV, as the plotter consumes it.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub algorithm: String,
    pub depth: f64,
    pub runtime: f64,
    pub qubits: f64,
    pub pareto: bool,
}

/// Parse a comparison CSV back into plottable rows. Columns are located
/// by header name, so column order is not load-bearing.
pub fn parse_compare_csv(text: &str) -> Result<Vec<CsvRow>, ReportError> {
    let fail = |line: usize, message: String| ReportError::Csv { line, message };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| fail(1, "empty file".to_string()))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| fail(1, format!("missing column `{name}`")))
    };
    let algorithm_at = find("algorithm")?;
    let depth_at = find("depth")?;
    let runtime_at = find("runtime")?;
    let qubits_at = find("qubits")?;
    let pareto_at = find("pareto")?;
    let mut rows = Vec::new();
    for (index, raw) in lines {
        let line = index + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        let get = |at: usize| {
            fields
                .get(at)
                .copied()
                .ok_or_else(|| fail(line, format!("expected at least {} fields", at + 1)))
        };
        let number = |at: usize| -> Result<f64, ReportError> {
            let token = get(at)?;
            token
                .parse()
                .map_err(|_| fail(line, format!("bad number `{token}`")))
        };
        let pareto = match get(pareto_at)? {
            "true" => true,
            "false" => false,
            other => return Err(fail(line, format!("bad boolean `{other}`"))),
        };
        rows.push(CsvRow {
            algorithm: get(algorithm_at)?.to_string(),
            depth: number(depth_at)?,
            runtime: number(runtime_at)?,
            qubits: number(qubits_at)?,
            pareto,
        });
    }
    if rows.is_empty() {
        return Err(fail(1, "no data rows".to_string()));
    }
    Ok(rows)
}
