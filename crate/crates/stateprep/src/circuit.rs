//! Gate-level circuit IR with polarized multi-controls, exact dense
//! statevector simulation, and the metrics the comparisons are built
//! on: greedy depth and CX-equivalent cost.
//!
//! Conventions, fixed once for every module: basis ordering is
//! little-endian (qubit 0 is the least-significant bit of the basis
//! index); `RY(θ) = [[cos(θ/2), −sin(θ/2)], [sin(θ/2), cos(θ/2)]]`;
//! `RZ(θ) = diag(e^{−iθ/2}, e^{iθ/2})`; `PHASE(φ) = diag(1, e^{iφ})`.

use num_complex::Complex64;
use std::fmt::Write as _;
use thiserror::Error;

/// Hard simulator cap: 2^20 doubles-pairs ≈ 16 MiB of amplitudes.
pub const SIMULATION_QUBIT_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Ry(f64),
    Rz(f64),
    Phase(f64),
}

impl GateKind {
    fn angle(&self) -> Option<f64> {
        match self {
            GateKind::X => None,
            GateKind::Ry(a) | GateKind::Rz(a) | GateKind::Phase(a) => Some(*a),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Phase(_) => "PHASE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Fires when the control qubit is |1⟩ (written `+`).
    Positive,
    /// Fires when the control qubit is |0⟩ (written `-`).
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn positive(qubit: usize) -> Self {
        Control { qubit, polarity: Polarity::Positive }
    }

    pub fn negative(qubit: usize) -> Self {
        Control { qubit, polarity: Polarity::Negative }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate { kind: GateKind::X, target, controls: Vec::new() }
    }

    pub fn ry(theta: f64, target: usize) -> Self {
        Gate { kind: GateKind::Ry(theta), target, controls: Vec::new() }
    }

    pub fn rz(theta: f64, target: usize) -> Self {
        Gate { kind: GateKind::Rz(theta), target, controls: Vec::new() }
    }

    pub fn phase(phi: f64, target: usize) -> Self {
        Gate { kind: GateKind::Phase(phi), target, controls: Vec::new() }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::x(target).controlled(vec![Control::positive(control)])
    }

    pub fn controlled(mut self, controls: Vec<Control>) -> Self {
        self.controls = controls;
        self
    }

    /// Target plus control qubits — the wires this gate occupies.
    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().map(|c| c.qubit))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Circuit { num_qubits, gates: Vec::new() })
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if let Some(angle) = gate.kind.angle() {
            if !angle.is_finite() {
                return Err(CircuitError::NonFiniteAngle);
            }
        }
        for qubit in gate.support() {
            if qubit >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
            }
        }
        let mut seen = 1u64 << gate.target;
        for control in &gate.controls {
            if control.qubit == gate.target {
                return Err(CircuitError::TargetIsControl(gate.target));
            }
            let bit = 1u64 << control.qubit;
            if seen & bit != 0 {
                return Err(CircuitError::DuplicateControl(control.qubit));
            }
            seen |= bit;
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// A normalized state over at least one qubit; the length must be a
    /// power of two and the L2 norm 1 within 1e-10.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, CircuitError> {
        if amplitudes.len() < 2 || !amplitudes.len().is_power_of_two() {
            return Err(CircuitError::BadDimension(amplitudes.len()));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(CircuitError::NotNormalized(norm));
        }
        Ok(Statevector { amplitudes })
    }

    /// |0…0⟩. Panics if `num_qubits` is 0 or absurdly large.
    pub fn zero(num_qubits: usize) -> Self {
        Statevector::basis(num_qubits, 0)
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!((1..=30).contains(&num_qubits), "unreasonable qubit count {num_qubits}");
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        amplitudes[index] = Complex64::ONE;
        Statevector { amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("circuits need at least one qubit")]
    NoQubits,
    #[error("gate references qubit {qubit}, but the circuit has {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate target {0} is also listed as a control")]
    TargetIsControl(usize),
    #[error("control qubit {0} is listed twice")]
    DuplicateControl(usize),
    #[error("gate angles must be finite")]
    NonFiniteAngle,
    #[error("statevector length {0} is not a power of two of at least one qubit")]
    BadDimension(usize),
    #[error("statevector norm is {0}, not 1 within 1e-10")]
    NotNormalized(f64),
    #[error("simulation is capped at {SIMULATION_QUBIT_CAP} qubits, the circuit has {0}")]
    TooManyQubits(usize),
    #[error("circuit acts on {circuit} qubits, state has {state}")]
    DimensionMismatch { circuit: usize, state: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Apply the circuit's gates in order to a copy of `initial`.
pub fn simulate(circuit: &Circuit, initial: &Statevector) -> Result<Statevector, CircuitError> {
    if circuit.num_qubits() > SIMULATION_QUBIT_CAP {
        return Err(CircuitError::TooManyQubits(circuit.num_qubits()));
    }
    if initial.num_qubits() != circuit.num_qubits() {
        return Err(CircuitError::DimensionMismatch {
            circuit: circuit.num_qubits(),
            state: initial.num_qubits(),
        });
    }
    let mut amplitudes = initial.amplitudes.clone();
    for gate in circuit.gates() {
        apply_gate(&mut amplitudes, gate);
    }
    Ok(Statevector { amplitudes })
}

fn apply_gate(amplitudes: &mut [Complex64], gate: &Gate) {
    let target = 1usize << gate.target;
    let mut ones = 0usize;
    let mut zeros = 0usize;
    for control in &gate.controls {
        match control.polarity {
            Polarity::Positive => ones |= 1 << control.qubit,
            Polarity::Negative => zeros |= 1 << control.qubit,
        }
    }
    let fires = |i: usize| i & ones == ones && i & zeros == 0;
    match gate.kind {
        GateKind::X => {
            for i in 0..amplitudes.len() {
                if i & target == 0 && fires(i) {
                    amplitudes.swap(i, i | target);
                }
            }
        }
        GateKind::Ry(theta) => {
            let (sin, cos) = (theta / 2.0).sin_cos();
            for i in 0..amplitudes.len() {
                if i & target == 0 && fires(i) {
                    let low = amplitudes[i];
                    let high = amplitudes[i | target];
                    amplitudes[i] = cos * low - sin * high;
                    amplitudes[i | target] = sin * low + cos * high;
                }
            }
        }
        GateKind::Rz(theta) => {
            let low_phase = Complex64::from_polar(1.0, -theta / 2.0);
            let high_phase = Complex64::from_polar(1.0, theta / 2.0);
            for (i, amp) in amplitudes.iter_mut().enumerate() {
                if fires(i) {
                    *amp *= if i & target == 0 { low_phase } else { high_phase };
                }
            }
        }
        GateKind::Phase(phi) => {
            let phase = Complex64::from_polar(1.0, phi);
            for (i, amp) in amplitudes.iter_mut().enumerate() {
                if i & target != 0 && fires(i) {
                    *amp *= phase;
                }
            }
        }
    }
}

/// `|⟨a|b⟩|` — insensitive to global phase.
pub fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64, CircuitError> {
    if a.amplitudes.len() != b.amplitudes.len() {
        return Err(CircuitError::DimensionMismatch {
            circuit: a.num_qubits(),
            state: b.num_qubits(),
        });
    }
    let inner: Complex64 =
        a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum();
    Ok(inner.norm())
}

/// Greedy as-soon-as-possible layering in gate order: two gates share a
/// layer iff their supports (target + controls) are disjoint.
pub fn circuit_depth(circuit: &Circuit) -> usize {
    let mut busy_until = vec![0usize; circuit.num_qubits()];
    let mut depth = 0;
    for gate in circuit.gates() {
        let layer = 1 + gate.support().map(|q| busy_until[q]).max().unwrap_or(0);
        for qubit in gate.support() {
            busy_until[qubit] = layer;
        }
        depth = depth.max(layer);
    }
    depth
}

/// CX-equivalent cost of one gate, by control count: 0 controls are
/// free; a CX costs 1 and any other singly-controlled gate 2; a gate
/// with c ≥ 2 controls costs 12c − 18 (V-chain decomposition, so a
/// Toffoli is 6). A convention for comparison, not a claim of
/// optimality.
fn gate_cx_cost(gate: &Gate) -> u64 {
    let controls = gate.controls.len() as u64;
    match controls {
        0 => 0,
        1 => {
            if matches!(gate.kind, GateKind::X) {
                1
            } else {
                2
            }
        }
        c => 12 * c - 18,
    }
}

pub fn cx_equivalent_count(circuit: &Circuit) -> u64 {
    circuit.gates().iter().map(gate_cx_cost).sum()
}

/// Ancillas implied by the V-chain costing: the widest gate needs
/// max(0, controls − 2) work qubits.
pub fn ancilla_estimate(circuit: &Circuit) -> usize {
    circuit
        .gates()
        .iter()
        .map(|g| g.controls.len())
        .max()
        .unwrap_or(0)
        .saturating_sub(2)
}

// ---------------------------------------------------------------------------
// Text format. Line-oriented: `qubits <k>` then one gate per line,
// `KIND[(angle)] t=IDX [c=IDX:±,IDX:±]`; `#` starts a comment. Angles
// print with however many digits an exact round-trip needs (at most 17
// significant digits), so parse∘serialize is the identity.

pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.num_qubits());
    for gate in circuit.gates() {
        out.push_str(gate.kind.name());
        if let Some(angle) = gate.kind.angle() {
            let _ = write!(out, "({angle})");
        }
        let _ = write!(out, " t={}", gate.target);
        if !gate.controls.is_empty() {
            out.push_str(" c=");
            for (i, control) in gate.controls.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let sign = match control.polarity {
                    Polarity::Positive => '+',
                    Polarity::Negative => '-',
                };
                let _ = write!(out, "{}:{}", control.qubit, sign);
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    for (index, raw) in text.lines().enumerate() {
        let line_number = index + 1;
        let fail = |message: String| CircuitError::Parse { line: line_number, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match circuit.as_mut() {
            None => {
                let count = line
                    .strip_prefix("qubits")
                    .map(str::trim)
                    .ok_or_else(|| fail("expected `qubits <count>`".to_string()))?;
                let count: usize = count
                    .parse()
                    .map_err(|_| fail(format!("bad qubit count `{count}`")))?;
                circuit = Some(Circuit::new(count).map_err(|e| fail(e.to_string()))?);
            }
            Some(c) => {
                let gate = parse_gate_line(line).map_err(fail)?;
                c.push(gate).map_err(|e| fail(e.to_string()))?;
            }
        }
    }
    circuit.ok_or(CircuitError::Parse {
        line: 1,
        message: "empty circuit file".to_string(),
    })
}

fn parse_gate_line(line: &str) -> Result<Gate, String> {
    let mut parts = line.split_whitespace();
    let head = parts.next().expect("caller skips blank lines");
    let (kind_name, angle) = match head.split_once('(') {
        Some((name, rest)) => {
            let digits = rest
                .strip_suffix(')')
                .ok_or_else(|| format!("unterminated angle in `{head}`"))?;
            let angle: f64 =
                digits.parse().map_err(|_| format!("bad angle `{digits}`"))?;
            (name, Some(angle))
        }
        None => (head, None),
    };
    let kind = match (kind_name, angle) {
        ("X", None) => GateKind::X,
        ("X", Some(_)) => return Err("X takes no angle".to_string()),
        ("RY", Some(a)) => GateKind::Ry(a),
        ("RZ", Some(a)) => GateKind::Rz(a),
        ("PHASE", Some(a)) => GateKind::Phase(a),
        ("RY" | "RZ" | "PHASE", None) => {
            return Err(format!("{kind_name} needs an angle"));
        }
        _ => return Err(format!("unknown gate kind `{kind_name}`")),
    };
    let target = parts
        .next()
        .and_then(|p| p.strip_prefix("t="))
        .ok_or_else(|| "expected `t=<index>`".to_string())?;
    let target: usize = target.parse().map_err(|_| format!("bad target `{target}`"))?;
    let mut controls = Vec::new();
    if let Some(part) = parts.next() {
        let list = part
            .strip_prefix("c=")
            .ok_or_else(|| format!("unexpected token `{part}`"))?;
        for item in list.split(',') {
            let (index, sign) = item
                .split_once(':')
                .ok_or_else(|| format!("bad control `{item}`, expected `index:+` or `index:-`"))?;
            let qubit: usize =
                index.parse().map_err(|_| format!("bad control index `{index}`"))?;
            let polarity = match sign {
                "+" => Polarity::Positive,
                "-" => Polarity::Negative,
                _ => return Err(format!("bad control polarity `{sign}`")),
            };
            controls.push(Control { qubit, polarity });
        }
    }
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected token `{extra}`"));
    }
    Ok(Gate { kind, target, controls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn circuit(num_qubits: usize, gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::new(num_qubits).unwrap();
        for gate in gates {
            c.push(gate).unwrap();
        }
        c
    }

    fn assert_state(state: &Statevector, expected: &[Complex64]) {
        for (i, (got, want)) in state.amplitudes().iter().zip(expected).enumerate() {
            assert!((got - want).norm() <= 1e-12, "index {i}: {got} != {want}");
        }
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn x_flips_a_single_qubit() {
        let c = circuit(1, vec![Gate::x(0)]);
        let out = simulate(&c, &Statevector::zero(1)).unwrap();
        assert_state(&out, &[re(0.0), re(1.0)]);
    }

    #[test]
    fn ry_half_pi_makes_plus_state() {
        let c = circuit(1, vec![Gate::ry(FRAC_PI_2, 0)]);
        let out = simulate(&c, &Statevector::zero(1)).unwrap();
        assert_state(&out, &[re(INV_SQRT2), re(INV_SQRT2)]);
    }

    #[test]
    fn bell_pair_from_ry_and_cx() {
        let c = circuit(2, vec![Gate::ry(FRAC_PI_2, 0), Gate::cx(0, 1)]);
        let out = simulate(&c, &Statevector::zero(2)).unwrap();
        assert_state(&out, &[re(INV_SQRT2), re(0.0), re(0.0), re(INV_SQRT2)]);
    }

    #[test]
    fn negative_controls_fire_on_zero_exhaustively() {
        // X on qubit 1 with a negative control on qubit 0: flips qubit 1
        // exactly when qubit 0 is 0.
        let c = circuit(2, vec![Gate::x(1).controlled(vec![Control::negative(0)])]);
        for basis in 0..4usize {
            let out = simulate(&c, &Statevector::basis(2, basis)).unwrap();
            let expected = if basis & 1 == 0 { basis ^ 2 } else { basis };
            assert_state(&out, Statevector::basis(2, expected).amplitudes());
        }
    }

    #[test]
    fn rz_and_phase_apply_the_documented_phases() {
        let theta = 0.7;
        let c = circuit(1, vec![Gate::rz(theta, 0)]);
        let plus = Statevector::new(vec![re(INV_SQRT2), re(INV_SQRT2)]).unwrap();
        let out = simulate(&c, &plus).unwrap();
        let expected = [
            Complex64::from_polar(INV_SQRT2, -theta / 2.0),
            Complex64::from_polar(INV_SQRT2, theta / 2.0),
        ];
        assert_state(&out, &expected);

        let c = circuit(1, vec![Gate::phase(theta, 0)]);
        let out = simulate(&c, &plus).unwrap();
        let expected = [re(INV_SQRT2), Complex64::from_polar(INV_SQRT2, theta)];
        assert_state(&out, &expected);
    }

    #[test]
    fn simulation_rejects_oversized_and_mismatched_inputs() {
        let c = Circuit::new(21).unwrap();
        assert_eq!(
            simulate(&c, &Statevector::zero(2)).unwrap_err(),
            CircuitError::TooManyQubits(21)
        );
        let c = Circuit::new(2).unwrap();
        assert_eq!(
            simulate(&c, &Statevector::zero(3)).unwrap_err(),
            CircuitError::DimensionMismatch { circuit: 2, state: 3 }
        );
    }

    #[test]
    fn fidelity_basics() {
        let zero = Statevector::zero(1);
        let one = Statevector::basis(1, 1);
        assert_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);

        let phase = Complex64::from_polar(1.0, 1.23);
        let rotated =
            Statevector::new(vec![phase, Complex64::ZERO]).unwrap();
        assert!((fidelity(&zero, &rotated).unwrap() - 1.0).abs() <= 1e-12);

        let bell = Statevector::new(vec![re(INV_SQRT2), re(0.0), re(0.0), re(INV_SQRT2)]).unwrap();
        let zz = Statevector::zero(2);
        assert!((fidelity(&bell, &zz).unwrap() - INV_SQRT2).abs() <= 1e-12);
    }

    #[test]
    fn depth_of_bell_loading_circuit_is_four() {
        // Ry q0; Ry q1; CX q0→q1; Ry q1; CX q0→q1 — the two leading
        // rotations share a layer.
        let c = circuit(
            2,
            vec![
                Gate::ry(FRAC_PI_2, 0),
                Gate::ry(FRAC_PI_2, 1),
                Gate::cx(0, 1),
                Gate::ry(-FRAC_PI_2, 1),
                Gate::cx(0, 1),
            ],
        );
        assert_eq!(circuit_depth(&c), 4);
    }

    #[test]
    fn depth_trivia() {
        assert_eq!(circuit_depth(&Circuit::new(3).unwrap()), 0);
        assert_eq!(circuit_depth(&circuit(2, vec![Gate::x(0), Gate::x(1)])), 1);
    }

    #[test]
    fn cx_cost_table() {
        assert_eq!(cx_equivalent_count(&circuit(2, vec![Gate::cx(0, 1)])), 1);
        let toffoli = Gate::x(2).controlled(vec![Control::positive(0), Control::positive(1)]);
        assert_eq!(cx_equivalent_count(&circuit(3, vec![toffoli])), 6);
        let triple = Gate::ry(0.5, 3)
            .controlled(vec![Control::positive(0), Control::negative(1), Control::positive(2)]);
        let c = circuit(4, vec![triple]);
        assert_eq!(cx_equivalent_count(&c), 18);
        assert_eq!(ancilla_estimate(&c), 1);
        let single = circuit(2, vec![Gate::ry(0.5, 1).controlled(vec![Control::positive(0)])]);
        assert_eq!(cx_equivalent_count(&single), 2);
        assert_eq!(ancilla_estimate(&single), 0);
        assert_eq!(cx_equivalent_count(&circuit(1, vec![Gate::x(0)])), 0);
    }

    #[test]
    fn gate_validation_catches_bad_wiring() {
        let mut c = Circuit::new(2).unwrap();
        assert_eq!(
            c.push(Gate::x(5)),
            Err(CircuitError::QubitOutOfRange { qubit: 5, num_qubits: 2 })
        );
        assert_eq!(
            c.push(Gate::x(0).controlled(vec![Control::positive(0)])),
            Err(CircuitError::TargetIsControl(0))
        );
        assert_eq!(
            c.push(Gate::x(0).controlled(vec![Control::positive(1), Control::negative(1)])),
            Err(CircuitError::DuplicateControl(1))
        );
        assert_eq!(c.push(Gate::ry(f64::NAN, 0)), Err(CircuitError::NonFiniteAngle));
        assert_eq!(Circuit::new(0).unwrap_err(), CircuitError::NoQubits);
    }

    #[test]
    fn serializes_the_documented_format() {
        let c = circuit(1, vec![Gate::x(0)]);
        assert_eq!(serialize_circuit(&c), "qubits 1\nX t=0\n");

        let c = circuit(
            3,
            vec![Gate::ry(FRAC_PI_2, 1)
                .controlled(vec![Control::positive(0), Control::negative(2)])],
        );
        assert_eq!(
            serialize_circuit(&c),
            "qubits 3\nRY(1.5707963267948966) t=1 c=0:+,2:-\n"
        );
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# loading circuit\n\nqubits 2\nX t=0 # flip\n  \nPHASE(0.25) t=1 c=0:-\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.gates().len(), 2);
        assert_eq!(c.gates()[1].controls, vec![Control::negative(0)]);
    }

    #[test]
    fn parse_reports_line_numbers_and_ranges() {
        let err = parse_circuit("qubits 2\nX t=5\n").unwrap_err();
        assert!(matches!(err, CircuitError::Parse { line: 2, .. }), "{err}");

        let err = parse_circuit("qubits 2\nRY t=0\n").unwrap_err();
        assert!(matches!(&err, CircuitError::Parse { line: 2, message } if message.contains("angle")));

        let err = parse_circuit("X t=0\n").unwrap_err();
        assert!(matches!(err, CircuitError::Parse { line: 1, .. }));

        let err = parse_circuit("").unwrap_err();
        assert!(matches!(&err, CircuitError::Parse { message, .. } if message.contains("empty")));
    }

    #[test]
    fn round_trips_a_mixed_circuit() {
        let c = circuit(
            3,
            vec![
                Gate::ry(FRAC_PI_2, 0),
                Gate::ry(FRAC_PI_2, 1),
                Gate::cx(0, 1),
                Gate::ry(-FRAC_PI_2, 1),
                Gate::cx(0, 1),
                Gate::rz(-PI / 3.0, 2),
                Gate::phase(0.1, 2).controlled(vec![Control::negative(0)]),
            ],
        );
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_gate(num_qubits: usize) -> impl Strategy<Value = Gate> {
            let kind = prop_oneof![
                Just(GateKind::X),
                (-10.0f64..10.0).prop_map(GateKind::Ry),
                (-10.0f64..10.0).prop_map(GateKind::Rz),
                (-10.0f64..10.0).prop_map(GateKind::Phase),
            ];
            (kind, 0..num_qubits, proptest::collection::vec(proptest::bool::ANY, num_qubits))
                .prop_map(move |(kind, target, picks)| {
                    let controls = picks
                        .iter()
                        .enumerate()
                        .filter(|(q, _)| *q != target)
                        .map(|(q, plus)| {
                            if *plus {
                                Control::positive(q)
                            } else {
                                Control::negative(q)
                            }
                        })
                        .take(3)
                        .collect();
                    Gate { kind, target, controls }
                })
        }

        fn arb_circuit() -> impl Strategy<Value = Circuit> {
            (1usize..=8).prop_flat_map(|n| {
                proptest::collection::vec(arb_gate(n), 0..200).prop_map(move |gates| {
                    let mut c = Circuit::new(n).unwrap();
                    for gate in gates {
                        c.push(gate).unwrap();
                    }
                    c
                })
            })
        }

        fn arb_state(num_qubits: usize) -> impl Strategy<Value = Statevector> {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << num_qubits).prop_map(
                |pairs| {
                    let mut amps: Vec<Complex64> =
                        pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                    if norm < 1e-6 {
                        amps[0] = Complex64::ONE;
                        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                        for a in &mut amps {
                            *a /= norm;
                        }
                    } else {
                        for a in &mut amps {
                            *a /= norm;
                        }
                    }
                    Statevector::new(amps).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn simulation_preserves_norm(c in arb_circuit()) {
                let state = simulate(&c, &Statevector::zero(c.num_qubits())).unwrap();
                let norm: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!((norm - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn serialization_round_trips(c in arb_circuit()) {
                prop_assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
            }

            #[test]
            fn rotations_invert(theta in -10.0f64..10.0, qubits in 1usize..=4) {
                let state = Statevector::basis(qubits, (1usize << qubits) - 1);
                for make in [Gate::ry, Gate::rz, Gate::phase] {
                    let mut c = Circuit::new(qubits).unwrap();
                    c.push(make(theta, 0)).unwrap();
                    c.push(make(-theta, 0)).unwrap();
                    let out = simulate(&c, &state).unwrap();
                    prop_assert!((fidelity(&out, &state).unwrap() - 1.0).abs() <= 1e-12);
                }
            }

            #[test]
            fn random_state_round_trips_through_inverse_rotation(
                theta in -10.0f64..10.0,
                state in arb_state(3),
            ) {
                let mut c = Circuit::new(3).unwrap();
                c.push(Gate::ry(theta, 1).controlled(vec![Control::positive(0)])).unwrap();
                c.push(Gate::ry(-theta, 1).controlled(vec![Control::positive(0)])).unwrap();
                let out = simulate(&c, &state).unwrap();
                for (a, b) in out.amplitudes().iter().zip(state.amplitudes()) {
                    prop_assert!((a - b).norm() <= 1e-12);
                }
            }

            #[test]
            fn depth_is_subadditive_and_cx_additive(
                a in arb_circuit(),
                b in arb_circuit(),
            ) {
                // Concatenate over the wider wire count.
                let n = a.num_qubits().max(b.num_qubits());
                let mut joined = Circuit::new(n).unwrap();
                for gate in a.gates().iter().chain(b.gates()) {
                    joined.push(gate.clone()).unwrap();
                }
                prop_assert!(circuit_depth(&joined) <= circuit_depth(&a) + circuit_depth(&b));
                prop_assert_eq!(
                    cx_equivalent_count(&joined),
                    cx_equivalent_count(&a) + cx_equivalent_count(&b)
                );
            }
        }
    }
}
