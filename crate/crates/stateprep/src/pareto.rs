//! Multi-objective comparison of evaluated algorithm records: dominance,
//! Pareto-set extraction, constraint filtering, and weighted ranking.
//! All three objectives (depth, classical runtime, qubit count) are
//! minimized.

use crate::complexity::Bindings;
use thiserror::Error;

/// One algorithm evaluated at concrete bindings: the unit of comparison.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ObjectivePoint {
    pub algorithm: String,
    pub group: String,
    pub depth: f64,
    pub runtime: f64,
    pub qubits: f64,
    /// Carried for dominance hygiene (points from different bindings
    /// must not be compared); reports serialize bindings once, not per row.
    #[serde(skip)]
    pub bindings: Bindings,
}

impl ObjectivePoint {
    fn values(&self) -> [f64; 3] {
        [self.depth, self.runtime, self.qubits]
    }
}

/// Upper bounds on the three objectives; an absent bound means +∞.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct ConstraintSet {
    pub max_depth: Option<f64>,
    pub max_runtime: Option<f64>,
    pub max_qubits: Option<f64>,
}

impl ConstraintSet {
    pub fn satisfies(&self, point: &ObjectivePoint) -> bool {
        point.depth <= self.max_depth.unwrap_or(f64::INFINITY)
            && point.runtime <= self.max_runtime.unwrap_or(f64::INFINITY)
            && point.qubits <= self.max_qubits.unwrap_or(f64::INFINITY)
    }
}

/// Non-negative objective weights, normalized to sum 1 on construction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WeightVector {
    depth: f64,
    runtime: f64,
    qubits: f64,
}

impl WeightVector {
    pub fn new(depth: f64, runtime: f64, qubits: f64) -> Result<Self, ParetoError> {
        let sum = depth + runtime + qubits;
        let valid = depth >= 0.0 && runtime >= 0.0 && qubits >= 0.0 && sum > 0.0 && sum.is_finite();
        if !valid {
            return Err(ParetoError::InvalidWeights);
        }
        Ok(WeightVector { depth: depth / sum, runtime: runtime / sum, qubits: qubits / sum })
    }

    pub fn equal() -> Self {
        WeightVector::new(1.0, 1.0, 1.0).expect("equal weights are valid")
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn runtime(&self) -> f64 {
        self.runtime
    }

    pub fn qubits(&self) -> f64 {
        self.qubits
    }
}

/// A point with its position in the weighted ranking (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPoint {
    pub point: ObjectivePoint,
    pub rank: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParetoError {
    #[error("objective points were evaluated under different bindings")]
    BindingsMismatch,
    #[error("at least one objective point is required")]
    EmptyInput,
    #[error("weights must be non-negative, finite, and not all zero")]
    InvalidWeights,
    #[error("algorithm `{0}` has a non-positive objective value")]
    NonPositiveObjective(String),
}

/// Componentwise strict dominance: `a` is at least as good everywhere
/// and strictly better somewhere (minimization).
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> Result<bool, ParetoError> {
    if a.bindings != b.bindings {
        return Err(ParetoError::BindingsMismatch);
    }
    Ok(dominates_values(a.values(), b.values()))
}

fn dominates_values(a: [f64; 3], b: [f64; 3]) -> bool {
    let no_worse = a.iter().zip(&b).all(|(x, y)| x <= y);
    let better = a.iter().zip(&b).any(|(x, y)| x < y);
    no_worse && better
}

/// Per-point Pareto membership flags, in input order. Points with
/// identical objective vectors never dominate each other, so duplicates
/// are all flagged as members.
pub fn pareto_flags(points: &[ObjectivePoint]) -> Result<Vec<bool>, ParetoError> {
    let first = points.first().ok_or(ParetoError::EmptyInput)?;
    if points.iter().any(|p| p.bindings != first.bindings) {
        return Err(ParetoError::BindingsMismatch);
    }
    Ok(points
        .iter()
        .map(|p| !points.iter().any(|q| dominates_values(q.values(), p.values())))
        .collect())
}

/// The non-dominated subset, preserving input order.
pub fn pareto_set(points: &[ObjectivePoint]) -> Result<Vec<ObjectivePoint>, ParetoError> {
    let flags = pareto_flags(points)?;
    Ok(points
        .iter()
        .zip(flags)
        .filter(|(_, keep)| *keep)
        .map(|(p, _)| p.clone())
        .collect())
}

/// Points satisfying every bound of `constraints`, preserving order.
pub fn filter_constraints(
    points: &[ObjectivePoint],
    constraints: &ConstraintSet,
) -> Vec<ObjectivePoint> {
    points.iter().filter(|p| constraints.satisfies(p)).cloned().collect()
}

/// Rank points by weighted log-scale score, ascending (lower is
/// better); ties broken by algorithm name. Objectives span many orders
/// of magnitude, hence the log10.
pub fn rank_weighted(
    points: &[ObjectivePoint],
    weights: &WeightVector,
) -> Result<Vec<RankedPoint>, ParetoError> {
    let mut scored: Vec<(f64, &ObjectivePoint)> = Vec::with_capacity(points.len());
    for point in points {
        if point.values().iter().any(|v| *v <= 0.0 || !v.is_finite()) {
            return Err(ParetoError::NonPositiveObjective(point.algorithm.clone()));
        }
        let score = weights.depth * point.depth.log10()
            + weights.runtime * point.runtime.log10()
            + weights.qubits * point.qubits.log10();
        scored.push((score, point));
    }
    scored.sort_by(|(sa, pa), (sb, pb)| {
        sa.total_cmp(sb).then_with(|| pa.algorithm.cmp(&pb.algorithm))
    });
    Ok(scored
        .into_iter()
        .enumerate()
        .map(|(i, (score, point))| RankedPoint { point: point.clone(), rank: i + 1, score })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(name: &str, depth: f64, runtime: f64, qubits: f64) -> ObjectivePoint {
        ObjectivePoint {
            algorithm: name.to_string(),
            group: name.to_string(),
            depth,
            runtime,
            qubits,
            bindings: Bindings::dense(10).unwrap(),
        }
    }

    fn names(points: &[ObjectivePoint]) -> Vec<&str> {
        points.iter().map(|p| p.algorithm.as_str()).collect()
    }

    #[test]
    fn dominance_requires_strict_improvement() {
        let a = point("a", 10.0, 1024.0, 1024.0);
        let b = point("b", 100.0, 1024.0, 1024.0);
        assert!(dominates(&a, &b).unwrap());
        assert!(!dominates(&b, &a).unwrap());
        assert!(!dominates(&a, &a.clone()).unwrap());
    }

    #[test]
    fn incomparable_points_do_not_dominate() {
        let a = point("a", 100.0, 1048576.0, 10.0);
        let b = point("b", 1024.0, 1024.0, 10.0);
        assert!(!dominates(&a, &b).unwrap());
        assert!(!dominates(&b, &a).unwrap());
    }

    #[test]
    fn dominance_rejects_mixed_bindings() {
        let a = point("a", 1.0, 1.0, 1.0);
        let mut b = point("b", 2.0, 2.0, 2.0);
        b.bindings = Bindings::dense(20).unwrap();
        assert_eq!(dominates(&a, &b), Err(ParetoError::BindingsMismatch));
    }

    #[test]
    fn pareto_set_keeps_duplicates_and_order() {
        let points = vec![
            point("twin1", 5.0, 5.0, 5.0),
            point("loser", 6.0, 6.0, 6.0),
            point("twin2", 5.0, 5.0, 5.0),
        ];
        assert_eq!(names(&pareto_set(&points).unwrap()), ["twin1", "twin2"]);
    }

    #[test]
    fn pareto_set_of_single_point_is_itself() {
        let points = vec![point("only", 1.0, 2.0, 3.0)];
        assert_eq!(pareto_set(&points).unwrap(), points);
    }

    #[test]
    fn pareto_set_rejects_empty_input() {
        assert_eq!(pareto_set(&[]), Err(ParetoError::EmptyInput));
    }

    #[test]
    fn constraints_default_to_identity() {
        let points = vec![point("a", 1.0, 2.0, 3.0), point("b", 4.0, 5.0, 6.0)];
        assert_eq!(filter_constraints(&points, &ConstraintSet::default()), points);
        let tight = ConstraintSet { max_depth: Some(0.5), ..Default::default() };
        assert!(filter_constraints(&points, &tight).is_empty());
    }

    #[test]
    fn weights_normalize_and_reject_bad_input() {
        let w = WeightVector::new(2.0, 2.0, 2.0).unwrap();
        assert_eq!(w.depth(), 1.0 / 3.0);
        assert!(WeightVector::new(0.0, 0.0, 0.0).is_err());
        assert!(WeightVector::new(-1.0, 2.0, 0.0).is_err());
        assert!(WeightVector::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn ranking_is_ascending_with_name_tie_break() {
        let points = vec![
            point("b-twin", 10.0, 10.0, 10.0),
            point("a-twin", 10.0, 10.0, 10.0),
            point("small", 1.0, 1.0, 1.0),
        ];
        let ranked = rank_weighted(&points, &WeightVector::equal()).unwrap();
        let order: Vec<&str> = ranked.iter().map(|r| r.point.algorithm.as_str()).collect();
        assert_eq!(order, ["small", "a-twin", "b-twin"]);
        assert_eq!(ranked[0].rank, 1);
        assert_eq!(ranked[2].rank, 3);
    }

    #[test]
    fn ranking_rejects_non_positive_values() {
        let points = vec![point("zero", 0.0, 1.0, 1.0)];
        assert_eq!(
            rank_weighted(&points, &WeightVector::equal()),
            Err(ParetoError::NonPositiveObjective("zero".to_string()))
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        prop_compose! {
            // A small value grid makes dominance, incomparability, and
            // exact duplicates all likely.
            fn arb_points()(values in proptest::collection::vec((1u8..=6, 1u8..=6, 1u8..=6), 1..12))
                -> Vec<ObjectivePoint>
            {
                values
                    .into_iter()
                    .enumerate()
                    .map(|(i, (d, r, q))| point(&format!("p{i:02}"), d as f64, r as f64, q as f64))
                    .collect()
            }
        }

        // Reference implementation straight from the definition, kept
        // deliberately separate from the production path.
        fn oracle_pareto(points: &[ObjectivePoint]) -> Vec<ObjectivePoint> {
            let mut kept = Vec::new();
            for p in points {
                let mut dominated = false;
                for q in points {
                    let no_worse = q.depth <= p.depth && q.runtime <= p.runtime && q.qubits <= p.qubits;
                    let better = q.depth < p.depth || q.runtime < p.runtime || q.qubits < p.qubits;
                    if no_worse && better {
                        dominated = true;
                        break;
                    }
                }
                if !dominated {
                    kept.push(p.clone());
                }
            }
            kept
        }

        proptest! {
            #[test]
            fn matches_brute_force_oracle(points in arb_points()) {
                prop_assert_eq!(pareto_set(&points).unwrap(), oracle_pareto(&points));
            }

            #[test]
            fn members_cover_all_points(points in arb_points()) {
                let members = pareto_set(&points).unwrap();
                for p in &points {
                    let covered = members.iter().any(|m| {
                        m.algorithm == p.algorithm || dominates(m, p).unwrap()
                    });
                    prop_assert!(covered, "{} neither kept nor dominated", p.algorithm);
                }
            }

            #[test]
            fn idempotent(points in arb_points()) {
                let once = pareto_set(&points).unwrap();
                prop_assert_eq!(pareto_set(&once).unwrap(), once.clone());
            }

            #[test]
            fn invariant_under_increasing_transforms(points in arb_points()) {
                let base: Vec<String> = pareto_set(&points).unwrap()
                    .into_iter().map(|p| p.algorithm).collect();
                for transform in [|v: f64| v.log2(), |v: f64| v * 7.0] {
                    let mapped: Vec<ObjectivePoint> = points.iter().cloned().map(|mut p| {
                        p.depth = transform(p.depth);
                        p.runtime = transform(p.runtime);
                        p.qubits = transform(p.qubits);
                        p
                    }).collect();
                    let got: Vec<String> = pareto_set(&mapped).unwrap()
                        .into_iter().map(|p| p.algorithm).collect();
                    prop_assert_eq!(&got, &base);
                }
            }

            #[test]
            fn dominance_is_irreflexive_and_antisymmetric(points in arb_points()) {
                for a in &points {
                    prop_assert!(!dominates(a, a).unwrap());
                    for b in &points {
                        prop_assert!(!(dominates(a, b).unwrap() && dominates(b, a).unwrap()));
                    }
                }
            }

            #[test]
            fn dominance_is_transitive(points in arb_points()) {
                for a in &points {
                    for b in &points {
                        for c in &points {
                            if dominates(a, b).unwrap() && dominates(b, c).unwrap() {
                                prop_assert!(dominates(a, c).unwrap());
                            }
                        }
                    }
                }
            }

            #[test]
            fn concentrated_weight_ranks_argmin_first(points in arb_points(), axis in 0usize..3) {
                let weights = match axis {
                    0 => WeightVector::new(1.0, 0.0, 0.0).unwrap(),
                    1 => WeightVector::new(0.0, 1.0, 0.0).unwrap(),
                    _ => WeightVector::new(0.0, 0.0, 1.0).unwrap(),
                };
                let pick = |p: &ObjectivePoint| match axis {
                    0 => p.depth,
                    1 => p.runtime,
                    _ => p.qubits,
                };
                let ranked = rank_weighted(&points, &weights).unwrap();
                let best = pick(&ranked[0].point);
                let min = points.iter().map(pick).fold(f64::INFINITY, f64::min);
                prop_assert_eq!(best, min);
            }
        }
    }
}
