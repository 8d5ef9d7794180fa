//! Dense amplitude encoder. A binary tree of branch angles (split
//! ratios of block norms) is realized level by level: the level-k
//! uniformly controlled RY on qubit k, conditioned on qubits 0..k-1,
//! is emitted as the gray-code decomposition — 2^k plain rotations
//! interleaved with 2^k CX gates. Complex inputs get a second, RZ,
//! cascade for the phase tree.

use super::LoaderError;
use crate::circuit::{Circuit, Gate, Statevector};
use num_complex::Complex64;

pub const DENSE_QUBIT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    /// A full statevector, already normalized within 1e-8.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, LoaderError> {
        let norm = validate_shape(&amplitudes)?;
        if (norm - 1.0).abs() > 1e-8 {
            return Err(LoaderError::NotNormalized { norm });
        }
        Ok(DenseState { amplitudes })
    }

    /// Rescale to unit norm instead of rejecting.
    pub fn new_normalized(mut amplitudes: Vec<Complex64>) -> Result<Self, LoaderError> {
        let norm = validate_shape(&amplitudes)?;
        if norm < 1e-12 {
            return Err(LoaderError::ZeroNorm);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(DenseState { amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

fn validate_shape(amplitudes: &[Complex64]) -> Result<f64, LoaderError> {
    if amplitudes.len() < 2 || !amplitudes.len().is_power_of_two() {
        return Err(LoaderError::BadLength(amplitudes.len()));
    }
    if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(LoaderError::NonFiniteAmplitude);
    }
    Ok(amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt())
}

/// Branch angles of the magnitude tree, levels 0..n-1; level k holds
/// 2^k angles indexed by the assignment of qubits 0..k-1. Node (k, c)
/// splits its block by qubit k: θ = 2·arccos(‖left‖/‖block‖), with the
/// ratio clamped to [0, 1] and zero-norm blocks assigned θ = 0.
pub fn magnitude_angles(state: &DenseState) -> Vec<Vec<f64>> {
    let n = state.num_qubits();
    let mut tree = vec![Vec::new(); n];
    let mut norms: Vec<f64> = state.amplitudes.iter().map(|a| a.norm()).collect();
    for k in (0..n).rev() {
        let half = 1usize << k;
        let mut level = vec![0.0; half];
        let mut merged = vec![0.0; half];
        for c in 0..half {
            let left = norms[c];
            let block = left.hypot(norms[c + half]);
            merged[c] = block;
            if block > 0.0 {
                level[c] = 2.0 * (left / block).clamp(0.0, 1.0).acos();
            }
        }
        tree[k] = level;
        norms = merged;
    }
    tree
}

/// Phase-tree analogue: β = mean phase of the right half minus mean
/// phase of the left half, with arg(0) taken as 0. The residual global
/// phase (the grand mean) is discarded.
pub fn phase_angles(state: &DenseState) -> Vec<Vec<f64>> {
    let n = state.num_qubits();
    let mut tree = vec![Vec::new(); n];
    let mut means: Vec<f64> = state.amplitudes.iter().map(|a| a.arg()).collect();
    for k in (0..n).rev() {
        let half = 1usize << k;
        let mut level = vec![0.0; half];
        let mut merged = vec![0.0; half];
        for c in 0..half {
            let left = means[c];
            let right = means[c + half];
            level[c] = right - left;
            merged[c] = 0.5 * (left + right);
        }
        tree[k] = level;
        means = merged;
    }
    tree
}

/// Synthesize a circuit on exactly n qubits preparing `state` from
/// |0…0⟩ up to a global phase. The gate structure is input-independent:
/// 2^n − 1 RY and 2^n − 2 CX, plus an equally shaped RZ cascade iff any
/// phase angle is non-zero.
pub fn load_dense(state: &DenseState) -> Result<Circuit, LoaderError> {
    let n = state.num_qubits();
    if n > DENSE_QUBIT_CAP {
        return Err(LoaderError::TooManyQubits { qubits: n, cap: DENSE_QUBIT_CAP });
    }
    let mut circuit = Circuit::new(n).expect("at least one qubit");
    for (k, level) in magnitude_angles(state).into_iter().enumerate() {
        emit_rotation_cascade(&mut circuit, k, level, Gate::ry);
    }
    let phase_tree = phase_angles(state);
    if phase_tree.iter().flatten().any(|beta| *beta != 0.0) {
        for (k, level) in phase_tree.into_iter().enumerate() {
            emit_rotation_cascade(&mut circuit, k, level, Gate::rz);
        }
    }
    Ok(circuit)
}

/// The prepared state as a simulator-ready vector (re-normalized, so
/// it is valid even when the input sits at the edge of the 1e-8 band).
pub fn dense_target_state(state: &DenseState) -> Statevector {
    let norm = state.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Statevector::new(state.amplitudes.iter().map(|a| a / norm).collect())
        .expect("normalized by construction")
}

/// Emit one uniformly controlled rotation as its gray-code cascade:
/// rotation i carries the Walsh-transformed angle for gray(i), and the
/// CX after it targets qubit `level` with control ctz(i+1) — except the
/// closing CX, whose control is level−1, returning the cumulative
/// conjugation mask to zero. Level 0 is a single uncontrolled rotation.
fn emit_rotation_cascade(
    circuit: &mut Circuit,
    level: usize,
    mut branch_angles: Vec<f64>,
    make: fn(f64, usize) -> Gate,
) {
    if level == 0 {
        let gate = make(branch_angles[0], 0);
        circuit.push(gate).expect("valid by construction");
        return;
    }
    walsh_transform(&mut branch_angles);
    let size = branch_angles.len();
    for i in 0..size {
        let angle = branch_angles[gray(i)] / size as f64;
        circuit.push(make(angle, level)).expect("valid by construction");
        let control =
            if i + 1 == size { level - 1 } else { (i + 1).trailing_zeros() as usize };
        circuit.push(Gate::cx(control, level)).expect("valid by construction");
    }
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// In-place Walsh–Hadamard butterfly (natural ordering, unscaled).
fn walsh_transform(values: &mut [f64]) {
    let mut h = 1;
    while h < values.len() {
        for chunk in values.chunks_exact_mut(2 * h) {
            let (left, right) = chunk.split_at_mut(h);
            for i in 0..h {
                let x = left[i];
                let y = right[i];
                left[i] = x + y;
                right[i] = x - y;
            }
        }
        h *= 2;
    }
}
