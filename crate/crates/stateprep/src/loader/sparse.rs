//! Sparse block-per-point loader. One flag qubit (index n) marks the
//! still-unwritten remainder of the amplitude mass; each data point
//! gets one block that walks the data register from the previous
//! pattern to its own, splits its amplitude off the remainder with a
//! rotation on the flag, and stamps its phase onto the frozen branch.
//! Blocks touch disjoint slices of the work, which is what makes
//! add/remove edits local.

use super::LoaderError;
use crate::circuit::{Circuit, Control, Gate, Statevector};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// Data-register cap; the loader adds one flag qubit on top, landing
/// exactly on the simulator's 20-qubit limit.
pub const SPARSE_DATA_QUBIT_CAP: usize = 19;

const MIN_AMPLITUDE: f64 = 1e-12;

/// A fixed-width bit pattern. The string form is written
/// most-significant-first: in "110" qubit 0 is 0 and qubit 2 is 1, and
/// the basis index is simply the string read as a binary number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitPattern {
    bits: u64,
    width: usize,
}

impl BitPattern {
    pub fn new(bits: u64, width: usize) -> Result<Self, LoaderError> {
        if width == 0 || width > 63 || bits >> width != 0 {
            return Err(LoaderError::BadPattern(format!("{bits:#b}/{width}")));
        }
        Ok(BitPattern { bits, width })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bit(&self, qubit: usize) -> bool {
        self.bits >> qubit & 1 == 1
    }

    /// Basis-state index of this pattern in a `width`-qubit register.
    pub fn index(&self) -> usize {
        self.bits as usize
    }
}

impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for qubit in (0..self.width).rev() {
            f.write_str(if self.bit(qubit) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitPattern {
    type Err = LoaderError;

    fn from_str(s: &str) -> Result<Self, LoaderError> {
        if s.is_empty() || s.len() > 63 {
            return Err(LoaderError::BadPattern(s.to_string()));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = bits << 1
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(LoaderError::BadPattern(s.to_string())),
                };
        }
        Ok(BitPattern { bits, width: s.len() })
    }
}

/// The nonzero amplitudes of a sparse state, in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePointSet {
    width: usize,
    points: Vec<(BitPattern, Complex64)>,
}

impl SparsePointSet {
    /// Points must already be normalized within 1e-8.
    pub fn new(points: Vec<(BitPattern, Complex64)>) -> Result<Self, LoaderError> {
        let (width, norm) = validate_points(&points)?;
        if (norm - 1.0).abs() > 1e-8 {
            return Err(LoaderError::NotNormalized { norm });
        }
        Ok(SparsePointSet { width, points })
    }

    /// Rescale to unit norm instead of rejecting.
    pub fn new_normalized(mut points: Vec<(BitPattern, Complex64)>) -> Result<Self, LoaderError> {
        let (width, norm) = validate_points(&points)?;
        if norm < MIN_AMPLITUDE {
            return Err(LoaderError::ZeroNorm);
        }
        for (_, amplitude) in &mut points {
            *amplitude /= norm;
        }
        Ok(SparsePointSet { width, points })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(BitPattern, Complex64)] {
        &self.points
    }
}

fn validate_points(points: &[(BitPattern, Complex64)]) -> Result<(usize, f64), LoaderError> {
    let width = match points.first() {
        Some((pattern, _)) => pattern.width(),
        None => return Err(LoaderError::EmptySet),
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut norm_sq = 0.0;
    for (pattern, amplitude) in points {
        if pattern.width() != width {
            return Err(LoaderError::WidthMismatch { got: pattern.width(), want: width });
        }
        if !seen.insert(pattern.bits()) {
            return Err(LoaderError::DuplicatePattern(pattern.to_string()));
        }
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(LoaderError::NonFiniteAmplitude);
        }
        if amplitude.norm() < MIN_AMPLITUDE {
            return Err(LoaderError::TinyAmplitude(pattern.to_string()));
        }
        norm_sq += amplitude.norm_sqr();
    }
    Ok((width, norm_sq.sqrt()))
}

/// The structural skeleton of one point's block: everything except the
/// angles, which depend on the amplitudes and are recomputed at every
/// emission.
#[derive(Debug, Clone, Copy, PartialEq)]
struct BlockSpec {
    pattern: BitPattern,
    diff_mask: u64,
    is_last: bool,
}

fn block_spec(pattern: BitPattern, predecessor: u64, is_last: bool) -> BlockSpec {
    BlockSpec { pattern, diff_mask: pattern.bits() ^ predecessor, is_last }
}

fn block_specs(points: &[(BitPattern, Complex64)]) -> Vec<BlockSpec> {
    let mut specs = Vec::with_capacity(points.len());
    let mut predecessor = 0u64;
    for (k, (pattern, _)) in points.iter().enumerate() {
        specs.push(block_spec(*pattern, predecessor, k + 1 == points.len()));
        predecessor = pattern.bits();
    }
    specs
}

/// Synthesize the circuit for the given blocks and amplitudes. The
/// amplitudes are consumed exactly as given — no rescaling happens
/// here — so `load_sparse` and `SparseBuilder::emit`, which both end
/// up here with the same values, agree gate for gate and bit for bit.
fn materialize(width: usize, specs: &[BlockSpec], points: &[(BitPattern, Complex64)]) -> Circuit {
    let flag = width;
    let mut circuit = Circuit::new(width + 1).expect("at least one qubit");
    let ok = "loader-built gates are valid";
    circuit.push(Gate::x(flag)).expect(ok);
    let mut spent = 0.0f64;
    for (spec, (_, amplitude)) in specs.iter().zip(points) {
        let magnitude = amplitude.norm();
        // (i) walk the data register from the previous pattern to this
        // one, but only on the still-active (flag = 1) branch.
        for qubit in 0..width {
            if spec.diff_mask >> qubit & 1 == 1 {
                circuit
                    .push(Gate::x(qubit).controlled(vec![Control::positive(flag)]))
                    .expect(ok);
            }
        }
        // (ii) split this point's share off the remainder. The final
        // block takes everything, so it is a plain controlled X.
        let pattern_controls: Vec<Control> = (0..width)
            .map(|qubit| {
                if spec.pattern.bit(qubit) {
                    Control::positive(qubit)
                } else {
                    Control::negative(qubit)
                }
            })
            .collect();
        if spec.is_last {
            circuit.push(Gate::x(flag).controlled(pattern_controls)).expect(ok);
        } else {
            let residual = (1.0 - spent).max(0.0).sqrt();
            let ratio = if residual > 0.0 {
                (magnitude / residual).clamp(0.0, 1.0)
            } else {
                1.0
            };
            let theta = 2.0 * ratio.asin();
            circuit.push(Gate::ry(-theta, flag).controlled(pattern_controls)).expect(ok);
        }
        // (iii) stamp the phase onto the branch frozen by (ii): the
        // component with data = pattern and flag = 0. A PHASE gate needs
        // a target in state |1⟩, so use the pattern's lowest set bit; an
        // all-zeros pattern has none, so borrow the flag by conjugating
        // with X.
        let phase = amplitude.arg();
        if phase != 0.0 {
            match (0..width).find(|q| spec.pattern.bit(*q)) {
                Some(target) => {
                    let mut controls: Vec<Control> = (0..width)
                        .filter(|q| *q != target)
                        .map(|qubit| {
                            if spec.pattern.bit(qubit) {
                                Control::positive(qubit)
                            } else {
                                Control::negative(qubit)
                            }
                        })
                        .collect();
                    controls.push(Control::negative(flag));
                    circuit.push(Gate::phase(phase, target).controlled(controls)).expect(ok);
                }
                None => {
                    let controls: Vec<Control> = (0..width).map(Control::negative).collect();
                    circuit.push(Gate::x(flag)).expect(ok);
                    circuit.push(Gate::phase(phase, flag).controlled(controls)).expect(ok);
                    circuit.push(Gate::x(flag)).expect(ok);
                }
            }
        }
        spent += magnitude * magnitude;
    }
    circuit
}

/// Synthesize a circuit on width+1 qubits (data register plus flag)
/// preparing |0⟩_flag ⊗ Σ_k a_k |p_k⟩ from |0…0⟩.
pub fn load_sparse(set: &SparsePointSet) -> Result<Circuit, LoaderError> {
    if set.width() > SPARSE_DATA_QUBIT_CAP {
        return Err(LoaderError::TooManyQubits {
            qubits: set.width(),
            cap: SPARSE_DATA_QUBIT_CAP,
        });
    }
    Ok(materialize(set.width(), &block_specs(set.points()), set.points()))
}

/// The prepared state embedded in the loader's width+1-qubit space:
/// amplitude a_k at basis index p_k with the flag qubit 0.
pub fn sparse_target_state(set: &SparsePointSet) -> Statevector {
    let norm = set.points().iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
    let mut amplitudes = vec![Complex64::ZERO; 1 << (set.width() + 1)];
    for (pattern, amplitude) in set.points() {
        amplitudes[pattern.index()] = amplitude / norm;
    }
    Statevector::new(amplitudes).expect("normalized by construction")
}

/// Incrementally editable sparse loader. Amplitudes are stored exactly
/// as supplied: the caller either keeps the running set normalized
/// across edits or calls [`SparseBuilder::renormalize`] before
/// emitting. Structural block skeletons are cached; an edit rebuilds at
/// most two of them (the edited position's and its neighbor's), while
/// rotation angles — which depend on the residual norms — are
/// recomputed on every emit anyway, and renormalization is likewise an
/// angles-only update.
#[derive(Debug, Clone)]
pub struct SparseBuilder {
    width: usize,
    points: Vec<(BitPattern, Complex64)>,
    blocks: Vec<BlockSpec>,
    resynthesized: usize,
}

impl SparseBuilder {
    pub fn new(width: usize) -> Result<Self, LoaderError> {
        if width == 0 || width > 63 {
            return Err(LoaderError::BadPattern(format!("width {width}")));
        }
        Ok(SparseBuilder { width, points: Vec::new(), blocks: Vec::new(), resynthesized: 0 })
    }

    pub fn from_points(set: &SparsePointSet) -> Self {
        SparseBuilder {
            width: set.width(),
            points: set.points().to_vec(),
            blocks: block_specs(set.points()),
            resynthesized: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The raw point list, in insertion order — exactly what
    /// `load_sparse` would be given to reproduce `emit()`.
    pub fn points(&self) -> &[(BitPattern, Complex64)] {
        &self.points
    }

    /// How many block skeletons the last add/remove rebuilt.
    pub fn resynthesized_last_edit(&self) -> usize {
        self.resynthesized
    }

    /// Residual norms s_0..s_r, s_k = sqrt(1 − Σ_{j<k} |a_j|²): s_0 = 1
    /// and, for a normalized set, s_r = 0 up to rounding.
    pub fn residual_norms(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.points.len() + 1);
        let mut spent = 0.0f64;
        out.push(1.0);
        for (_, amplitude) in &self.points {
            spent += amplitude.norm_sqr();
            out.push((1.0 - spent).max(0.0).sqrt());
        }
        out
    }

    /// Rescale every stored amplitude to unit total norm. Angles-only:
    /// no block skeletons are rebuilt.
    pub fn renormalize(&mut self) -> Result<(), LoaderError> {
        let norm = self.points.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < MIN_AMPLITUDE {
            return Err(LoaderError::ZeroNorm);
        }
        for (_, amplitude) in &mut self.points {
            *amplitude /= norm;
        }
        Ok(())
    }

    pub fn add_point(
        &mut self,
        pattern: BitPattern,
        amplitude: Complex64,
    ) -> Result<(), LoaderError> {
        if pattern.width() != self.width {
            return Err(LoaderError::WidthMismatch { got: pattern.width(), want: self.width });
        }
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(LoaderError::NonFiniteAmplitude);
        }
        if amplitude.norm() < MIN_AMPLITUDE {
            return Err(LoaderError::TinyAmplitude(pattern.to_string()));
        }
        if self.points.iter().any(|(p, _)| p.bits() == pattern.bits()) {
            return Err(LoaderError::PatternPresent(pattern.to_string()));
        }
        let mut rebuilt = 0;
        if let Some(last) = self.blocks.last_mut() {
            last.is_last = false;
            rebuilt += 1;
        }
        let predecessor = self.points.last().map_or(0, |(p, _)| p.bits());
        self.blocks.push(block_spec(pattern, predecessor, true));
        rebuilt += 1;
        self.points.push((pattern, amplitude));
        self.resynthesized = rebuilt;
        Ok(())
    }

    /// Remove a point, returning its stored amplitude (handy for exact
    /// re-insertion).
    pub fn remove_point(&mut self, pattern: &BitPattern) -> Result<Complex64, LoaderError> {
        let index = self
            .points
            .iter()
            .position(|(p, _)| p.bits() == pattern.bits() && p.width() == pattern.width())
            .ok_or_else(|| LoaderError::PatternAbsent(pattern.to_string()))?;
        let (_, amplitude) = self.points.remove(index);
        self.blocks.remove(index);
        let mut rebuilt = 0;
        if index < self.blocks.len() {
            // The successor's walk now starts from a different pattern.
            let predecessor = if index == 0 { 0 } else { self.points[index - 1].0.bits() };
            let successor = self.points[index].0;
            let is_last = index + 1 == self.blocks.len();
            self.blocks[index] = block_spec(successor, predecessor, is_last);
            rebuilt += 1;
        } else if let Some(last) = self.blocks.last_mut() {
            // Removed the final point: its predecessor becomes the
            // terminal all-or-nothing block.
            last.is_last = true;
            rebuilt += 1;
        }
        self.resynthesized = rebuilt;
        Ok(amplitude)
    }

    /// Synthesize the circuit for the current point list. Identical,
    /// gate for gate, to `load_sparse` on `points()`; like there, the
    /// set must be normalized within 1e-8 (see
    /// [`SparseBuilder::renormalize`]).
    pub fn emit(&self) -> Result<Circuit, LoaderError> {
        if self.points.is_empty() {
            return Err(LoaderError::EmptySet);
        }
        if self.width > SPARSE_DATA_QUBIT_CAP {
            return Err(LoaderError::TooManyQubits {
                qubits: self.width,
                cap: SPARSE_DATA_QUBIT_CAP,
            });
        }
        let norm = self.points.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(LoaderError::NotNormalized { norm });
        }
        Ok(materialize(self.width, &self.blocks, &self.points))
    }
}
