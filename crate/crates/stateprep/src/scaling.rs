//! Empirical scaling checks: seeded random loader inputs, per-size
//! measurement sweeps, and the log-log slope fit that turns gate
//! counts into an observed growth exponent.

use crate::circuit::{circuit_depth, cx_equivalent_count, fidelity, simulate, Statevector};
use crate::loader::{
    load_dense, load_sparse, BitPattern, DenseState, SparsePointSet,
};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("xs and ys have different lengths ({xs} vs {ys})")]
    LengthMismatch { xs: usize, ys: usize },
    #[error("log-log fit needs at least two distinct x values")]
    DegenerateFit,
    #[error("log-log fit needs strictly positive finite values")]
    NonPositive,
}

/// Ordinary least-squares slope of log2(y) against log2(x).
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64, ScalingError> {
    if xs.len() != ys.len() {
        return Err(ScalingError::LengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(ScalingError::NonPositive);
    }
    let log_xs: Vec<f64> = xs.iter().map(|x| x.log2()).collect();
    let log_ys: Vec<f64> = ys.iter().map(|y| y.log2()).collect();
    let n = log_xs.len() as f64;
    let mean_x = log_xs.iter().sum::<f64>() / n;
    let mean_y = log_ys.iter().sum::<f64>() / n;
    let mut covariance = 0.0;
    let mut variance = 0.0;
    for (x, y) in log_xs.iter().zip(&log_ys) {
        covariance += (x - mean_x) * (y - mean_y);
        variance += (x - mean_x) * (x - mean_x);
    }
    if variance == 0.0 {
        return Err(ScalingError::DegenerateFit);
    }
    Ok(covariance / variance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeKind {
    /// Real, non-negative entries — the regime of the exact CX-count law.
    NonNegative,
    /// Real entries of either sign.
    Real,
    /// Fully complex entries.
    Complex,
}

/// A random normalized full statevector over `num_qubits` qubits,
/// entries drawn from a standard normal (so the direction is uniform).
pub fn random_dense_state(
    rng: &mut impl Rng,
    num_qubits: usize,
    kind: AmplitudeKind,
) -> DenseState {
    let amplitudes: Vec<Complex64> = (0..1usize << num_qubits)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            match kind {
                AmplitudeKind::NonNegative => Complex64::new(re.abs(), 0.0),
                AmplitudeKind::Real => Complex64::new(re, 0.0),
                AmplitudeKind::Complex => Complex64::new(re, rng.sample(StandardNormal)),
            }
        })
        .collect();
    DenseState::new_normalized(amplitudes).expect("normal samples are finite and nonzero")
}

/// A random normalized sparse point set: `count` distinct patterns of
/// the given width with complex normal amplitudes (floored away from
/// zero so every point stays meaningful after rescaling).
pub fn random_sparse_points(rng: &mut impl Rng, width: usize, count: usize) -> SparsePointSet {
    assert!((1..=63).contains(&width), "pattern width {width} out of range");
    assert!(
        count >= 1 && (width >= 63 || count as u64 <= 1u64 << width),
        "cannot place {count} distinct patterns in {width} bits"
    );
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < count {
        chosen.insert(rng.random_range(0..1u64 << width));
    }
    // Visit in random order: sorted patterns would make consecutive
    // diffs artificially short and skew per-block gate counts.
    let mut chosen: Vec<u64> = chosen.into_iter().collect();
    chosen.shuffle(rng);
    let points = chosen
        .into_iter()
        .map(|bits| {
            let amplitude = loop {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let candidate = Complex64::new(re, im);
                if candidate.norm() >= 0.05 {
                    break candidate;
                }
            };
            (BitPattern::new(bits, width).expect("sampled in range"), amplitude)
        })
        .collect();
    SparsePointSet::new_normalized(points).expect("points are distinct and non-tiny")
}

/// One size's worth of scaling measurements (medians over the trials).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSample {
    /// The size value the fit runs on: 2^n for the dense sweep
    /// (log2 = n), r for the sparse sweep.
    pub size: f64,
    pub gates: f64,
    pub cx_equivalent: f64,
    pub depth: f64,
    pub seconds: f64,
    /// Worst fidelity against exact simulation across the trials, or
    /// None when the circuits were too large to simulate in a sweep.
    pub min_fidelity: Option<f64>,
}

/// Simulation budget for in-sweep verification. The hard simulator cap
/// is 20 qubits, but a sweep simulates every trial of every size, so it
/// stops verifying (with a warning from the caller) where full
/// statevector simulation stops being interactive.
pub const SWEEP_VERIFY_QUBIT_BUDGET: usize = 14;

fn trial_rng(seed: u64, size: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(size << 20 | trial);
    rng
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

struct TrialTally {
    gates: Vec<f64>,
    cx: Vec<f64>,
    depth: Vec<f64>,
    seconds: Vec<f64>,
    min_fidelity: Option<f64>,
}

impl TrialTally {
    fn new() -> Self {
        TrialTally {
            gates: Vec::new(),
            cx: Vec::new(),
            depth: Vec::new(),
            seconds: Vec::new(),
            min_fidelity: None,
        }
    }

    fn record(&mut self, circuit: &crate::circuit::Circuit, seconds: f64, target: Option<Statevector>) {
        self.gates.push(circuit.gates().len() as f64);
        self.cx.push(cx_equivalent_count(circuit) as f64);
        self.depth.push(circuit_depth(circuit) as f64);
        self.seconds.push(seconds);
        if let Some(target) = target {
            let out = simulate(circuit, &Statevector::zero(circuit.num_qubits()))
                .expect("within simulation budget");
            let f = fidelity(&out, &target).expect("same dimension");
            self.min_fidelity = Some(match self.min_fidelity {
                Some(best) => best.min(f),
                None => f,
            });
        }
    }

    fn into_sample(mut self, size: f64) -> ScalingSample {
        ScalingSample {
            size,
            gates: median(&mut self.gates),
            cx_equivalent: median(&mut self.cx),
            depth: median(&mut self.depth),
            seconds: median(&mut self.seconds),
            min_fidelity: self.min_fidelity,
        }
    }
}

/// Measure the dense loader at one size, on non-negative inputs (the
/// exact-CX-law regime the dense sweep checks against O(N)).
pub fn measure_dense(num_qubits: usize, trials: usize, seed: u64) -> ScalingSample {
    let verify = num_qubits <= SWEEP_VERIFY_QUBIT_BUDGET;
    let mut tally = TrialTally::new();
    for trial in 0..trials.max(1) {
        let mut rng = trial_rng(seed, num_qubits as u64, trial as u64);
        let state = random_dense_state(&mut rng, num_qubits, AmplitudeKind::NonNegative);
        let start = Instant::now();
        let circuit = load_dense(&state).expect("size pre-checked by caller");
        let seconds = start.elapsed().as_secs_f64();
        let target = verify.then(|| crate::loader::dense_target_state(&state));
        tally.record(&circuit, seconds, target);
    }
    tally.into_sample(f64::from(u32::try_from(num_qubits).expect("small")).exp2())
}

/// Measure the sparse loader at one point count (fixed width).
pub fn measure_sparse(width: usize, count: usize, trials: usize, seed: u64) -> ScalingSample {
    // The circuit spans width + 1 qubits (data plus flag).
    let verify = width < SWEEP_VERIFY_QUBIT_BUDGET;
    let mut tally = TrialTally::new();
    for trial in 0..trials.max(1) {
        let mut rng = trial_rng(seed, (width as u64) << 32 | count as u64, trial as u64);
        let points = random_sparse_points(&mut rng, width, count);
        let start = Instant::now();
        let circuit = load_sparse(&points).expect("size pre-checked by caller");
        let seconds = start.elapsed().as_secs_f64();
        let target = verify.then(|| crate::loader::sparse_target_state(&points));
        tally.record(&circuit, seconds, target);
    }
    tally.into_sample(count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_the_trivial_slopes() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        assert_eq!(fit_loglog_slope(&xs, &xs).unwrap(), 1.0);
        let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert!((fit_loglog_slope(&xs, &squares).unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn fits_powers_of_two_exactly() {
        let xs: Vec<f64> = (4..=12).map(|n| f64::from(n).exp2()).collect();
        let slope = fit_loglog_slope(&xs, &xs).unwrap();
        assert_eq!(slope, 1.0);
    }

    #[test]
    fn rejects_degenerate_fits() {
        assert_eq!(
            fit_loglog_slope(&[2.0], &[4.0]).unwrap_err(),
            ScalingError::DegenerateFit
        );
        assert_eq!(
            fit_loglog_slope(&[2.0, 2.0], &[4.0, 8.0]).unwrap_err(),
            ScalingError::DegenerateFit
        );
        assert_eq!(
            fit_loglog_slope(&[1.0, -2.0], &[1.0, 2.0]).unwrap_err(),
            ScalingError::NonPositive
        );
        assert_eq!(
            fit_loglog_slope(&[1.0, 2.0], &[1.0]).unwrap_err(),
            ScalingError::LengthMismatch { xs: 2, ys: 1 }
        );
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(
            random_dense_state(&mut a, 4, AmplitudeKind::Complex),
            random_dense_state(&mut b, 4, AmplitudeKind::Complex)
        );
        assert_eq!(
            random_sparse_points(&mut a, 6, 9),
            random_sparse_points(&mut b, 6, 9)
        );
    }

    #[test]
    fn dense_sweep_holds_the_cx_law_and_verifies() {
        for n in [3usize, 5, 7] {
            let sample = measure_dense(n, 3, 42);
            assert_eq!(sample.cx_equivalent, ((1u64 << n) - 2) as f64);
            assert_eq!(sample.size, f64::from(n as u32).exp2());
            let f = sample.min_fidelity.expect("within budget");
            assert!(f >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn sparse_sweep_grows_linearly_in_count_and_verifies() {
        let counts = [4usize, 8, 16, 32, 64];
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for count in counts {
            let sample = measure_sparse(8, count, 3, 42);
            let f = sample.min_fidelity.expect("within budget");
            assert!(f >= 1.0 - 1e-9);
            xs.push(sample.size);
            ys.push(sample.gates);
        }
        let slope = fit_loglog_slope(&xs, &ys).unwrap();
        assert!((slope - 1.0).abs() <= 0.1, "slope {slope}");
    }
}
