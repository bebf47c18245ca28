//! Unitary circuits, their encoding as proofs, extraction back from the
//! machine, and a direct state-vector simulator.
//!
//! A proof of `|- <>^m ~a, []^m a` is read as a circuit on `m` qubits:
//! a quantum rule of arity `k` applied on top of a derivation of depth `j`
//! acts on qubits `j+1 ..= j+k`, and sequential layers are composed by cuts.

use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{Context, Formula};
use crate::matrix::{
    apply_at, matrix_from_json, ComplexMatrix, Gate, GateName, MatrixError, StateVector, UnitaryMatrix, C64,
};
use crate::proof::Proof;
use crate::qiam::{extract_gate_sequence, MachineError};

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitGate {
    pub gate: Gate,
    /// Strictly increasing, 1-based.
    pub targets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<CircuitGate>,
}

/// A gate acting on the contiguous block `offset+1 ..= offset+k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedGate {
    pub gate: Gate,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CircuitError {
    #[error("invalid circuit JSON: {0}")]
    Json(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("targets {targets:?} invalid for a {arity}-qubit gate on {qubits} qubit(s)")]
    BadTargets { targets: Vec<usize>, arity: usize, qubits: usize },
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("input has {found} qubit(s), circuit has {expected}")]
    InputSize { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

impl Circuit {
    pub fn new(qubits: usize) -> Circuit {
        Circuit { qubits, gates: Vec::new() }
    }

    pub fn push(&mut self, gate: impl Into<Gate>, targets: Vec<usize>) -> Result<(), CircuitError> {
        let gate = gate.into();
        validate(&gate, &targets, self.qubits)?;
        self.gates.push(CircuitGate { gate, targets });
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Circuit, CircuitError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        let bad = |m: &str| CircuitError::Json(m.to_string());
        let qubits = v.get("qubits").and_then(Value::as_u64).ok_or_else(|| bad("missing `qubits`"))? as usize;
        let mut c = Circuit::new(qubits);
        let gates = v.get("gates").and_then(Value::as_array).ok_or_else(|| bad("missing `gates`"))?;
        for g in gates {
            let targets = g
                .get("targets")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("gate without `targets`"))?
                .iter()
                .map(|t| t.as_u64().map(|t| t as usize).ok_or_else(|| bad("targets must be positive integers")))
                .collect::<Result<Vec<_>, _>>()?;
            let gate = match (g.get("gate"), g.get("matrix")) {
                (Some(Value::String(name)), None) => {
                    Gate::named(GateName::parse(name).ok_or_else(|| CircuitError::UnknownGate(name.clone()))?)
                }
                (None, Some(m)) => Gate::raw(UnitaryMatrix::new(matrix_from_json(m)?)?),
                _ => return Err(bad("each gate needs exactly one of `gate` or `matrix`")),
            };
            c.push(gate, targets)?;
        }
        Ok(c)
    }

    /// Compact JSON with one gate per line.
    pub fn to_json(&self) -> String {
        let gates: Vec<String> = self
            .gates
            .iter()
            .map(|g| {
                let head = match g.gate.name() {
                    Some(name) => json!(name.to_string()).to_string(),
                    None => {
                        let rows: Vec<Value> = g
                            .gate
                            .unitary()
                            .matrix()
                            .row_vecs()
                            .iter()
                            .map(|r| Value::Array(r.iter().map(|z| json!([z.re, z.im])).collect()))
                            .collect();
                        Value::Array(rows).to_string()
                    }
                };
                let key = if g.gate.name().is_some() { "gate" } else { "matrix" };
                format!("    {{\"{key}\": {head}, \"targets\": {}}}", json!(g.targets))
            })
            .collect();
        if gates.is_empty() {
            return format!("{{\"qubits\": {}, \"gates\": []}}", self.qubits);
        }
        format!("{{\"qubits\": {}, \"gates\": [\n{}\n]}}", self.qubits, gates.join(",\n"))
    }

    /// Unitary of the whole circuit, column by column through [`simulate`].
    pub fn unitary(&self) -> Result<UnitaryMatrix, CircuitError> {
        let dim = 1usize << self.qubits;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for col in 0..dim {
            let out = simulate(self, &StateVector::basis(self.qubits, col))?;
            for (row, z) in out.amplitudes().iter().enumerate() {
                m.set(row, col, *z);
            }
        }
        Ok(UnitaryMatrix::new(m)?)
    }
}

fn validate(gate: &Gate, targets: &[usize], qubits: usize) -> Result<(), CircuitError> {
    let ok = targets.len() == gate.qubits()
        && targets.iter().all(|&t| t >= 1 && t <= qubits)
        && targets.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(CircuitError::BadTargets { targets: targets.to_vec(), arity: gate.qubits(), qubits })
    }
}

/// Moves a gate onto a contiguous block. Scattered targets become the
/// covering block, with the gate conjugated by the permutation that brings
/// the targets to the front and identity on the qubits in between.
pub fn embed_gate(g: &CircuitGate, qubits: usize) -> Result<EmbeddedGate, CircuitError> {
    validate(&g.gate, &g.targets, qubits)?;
    let (lo, hi) = (g.targets[0], g.targets[g.targets.len() - 1]);
    let k = g.targets.len();
    if hi - lo + 1 == k {
        return Ok(EmbeddedGate { gate: g.gate.clone(), offset: lo - 1 });
    }
    let b = hi - lo + 1;
    let local: Vec<usize> = g.targets.iter().map(|t| t - lo).collect();
    let rest: Vec<usize> = (0..b).filter(|q| !local.contains(q)).collect();
    // bit of local qubit q in a b-qubit index; qubit 0 is the most significant
    let bit = |x: usize, q: usize| (x >> (b - 1 - q)) & 1;
    let gather = |x: usize, qs: &[usize]| qs.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q));
    let dim = 1usize << b;
    let u = g.gate.unitary().matrix();
    let mut w = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        for y in 0..dim {
            if gather(x, &rest) == gather(y, &rest) {
                w.set(y, x, u.get(gather(y, &local), gather(x, &local)));
            }
        }
    }
    Ok(EmbeddedGate { gate: Gate::raw(UnitaryMatrix::new(w)?), offset: lo - 1 })
}

/// Applies the circuit's gates in order.
pub fn simulate(c: &Circuit, input: &StateVector) -> Result<StateVector, CircuitError> {
    if input.qubits() != c.qubits {
        return Err(CircuitError::InputSize { expected: c.qubits, found: input.qubits() });
    }
    let mut state = input.clone();
    for g in &c.gates {
        let e = embed_gate(g, c.qubits)?;
        state = apply_at(e.gate.unitary(), &state, e.offset)?;
    }
    Ok(state)
}

/// Groups gates into layers: a gate joins the last layer when its block is
/// disjoint from every block already there.
fn layers(c: &Circuit) -> Result<Vec<Vec<EmbeddedGate>>, CircuitError> {
    let mut out: Vec<Vec<EmbeddedGate>> = Vec::new();
    for g in &c.gates {
        let e = embed_gate(g, c.qubits)?;
        let span = |e: &EmbeddedGate| e.offset..e.offset + e.gate.qubits();
        let fits = out.last().is_some_and(|layer| {
            layer.iter().all(|other| {
                let (a, b) = (span(&e), span(other));
                a.end <= b.start || b.end <= a.start
            })
        });
        if fits {
            out.last_mut().expect("non-empty").push(e);
        } else {
            out.push(vec![e]);
        }
    }
    Ok(out)
}

/// One layer as a tower of quantum rules over `|- ~a, a`, each gap filled
/// by a single identity rule.
fn layer_proof(layer: &[EmbeddedGate], qubits: usize) -> Proof {
    let mut gates: Vec<&EmbeddedGate> = layer.iter().collect();
    gates.sort_by_key(|g| g.offset);
    let mut p = Proof::axiom(Formula::atom("a"));
    let mut depth = 0;
    for g in gates {
        if g.offset > depth {
            p = Proof::quantum(g.offset - depth, Gate::identity(g.offset - depth), p);
        }
        p = Proof::quantum(g.gate.qubits(), g.gate.clone(), p);
        depth = g.offset + g.gate.qubits();
    }
    if depth < qubits {
        p = Proof::quantum(qubits - depth, Gate::identity(qubits - depth), p);
    }
    p
}

/// Proof of `|- <>^m ~a, []^m a` computing the circuit. Layers are chained
/// left to right by cuts, `(cut 2 1 (cut 2 1 L1 L2) L3)`.
pub fn encode(c: &Circuit) -> Result<Proof, CircuitError> {
    if c.qubits == 0 {
        return Err(CircuitError::NoQubits);
    }
    let mut layers = layers(c)?.into_iter();
    let first = layers.next().unwrap_or_default();
    Ok(layers.fold(layer_proof(&first, c.qubits), |acc, l| Proof::cut(1, 0, acc, layer_proof(&l, c.qubits))))
}

/// Library name of `u`, if it matches one of the fixed gates.
fn recognise(u: &UnitaryMatrix) -> Gate {
    let candidates = [
        GateName::Identity(u.qubits()),
        GateName::H,
        GateName::X,
        GateName::Y,
        GateName::Z,
        GateName::S,
        GateName::T,
        GateName::Cnot,
        GateName::Swap,
    ];
    candidates
        .into_iter()
        .filter(|n| n.qubits() == u.qubits())
        .find(|n| n.unitary().matrix().max_abs_diff(u.matrix()).is_ok_and(|d| d <= 1e-12))
        .map(Gate::named)
        .unwrap_or_else(|| Gate::raw(u.clone()))
}

/// Circuit of the gates met by the machine entering at conclusion
/// occurrence `entry` with negative context `n`. With `prune`, identity
/// gates are dropped.
pub fn extract(p: &Proof, entry: usize, n: &Context, prune: bool) -> Result<Circuit, CircuitError> {
    let mut c = Circuit::new(n.depth());
    for (u, offset) in extract_gate_sequence(p, entry, n)? {
        if prune && u.is_identity(1e-12) {
            continue;
        }
        let targets = (offset + 1..=offset + u.qubits()).collect();
        c.push(recognise(&u), targets)?;
    }
    Ok(c)
}

/// Builds an amplitude vector from `(index, amplitude)` pairs.
pub fn sparse_state(qubits: usize, entries: &[(usize, C64)]) -> Result<StateVector, MatrixError> {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << qubits];
    for &(i, z) in entries {
        amps[i] = z;
    }
    StateVector::new(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{approx_equal, EQUALITY_TOL};
    use crate::proof::print_proof;

    fn circuit(json: &str) -> Circuit {
        Circuit::from_json(json).unwrap()
    }

    #[test]
    fn golden_encodings() {
        let cases = [
            (r#"{"qubits": 3, "gates": []}"#, "(q 3 I3 (ax a))"),
            (r#"{"qubits": 3, "gates": [{"gate": "H", "targets": [2]}]}"#, "(q 1 I1 (q 1 H (q 1 I1 (ax a))))"),
            (
                r#"{"qubits": 3, "gates": [{"gate": "H", "targets": [1]}, {"gate": "CNOT", "targets": [2, 3]}]}"#,
                "(q 2 CNOT (q 1 H (ax a)))",
            ),
            (
                r#"{"qubits": 2, "gates": [{"gate": "H", "targets": [1]}, {"gate": "Z", "targets": [1]},
                    {"gate": "X", "targets": [2]}, {"gate": "CNOT", "targets": [1, 2]}]}"#,
                "(cut 2 1 (cut 2 1 (q 1 I1 (q 1 H (ax a))) (q 1 X (q 1 Z (ax a)))) (q 2 CNOT (ax a)))",
            ),
        ];
        for (json, expected) in cases {
            let p = encode(&circuit(json)).unwrap();
            assert_eq!(print_proof(&p), expected);
            assert!(p.conclusion().is_ok());
        }
    }

    #[test]
    fn embed_contiguous_keeps_gate() {
        let g = CircuitGate { gate: GateName::H.into(), targets: vec![2] };
        assert_eq!(embed_gate(&g, 3).unwrap(), EmbeddedGate { gate: GateName::H.into(), offset: 1 });
        let g = CircuitGate { gate: GateName::Cnot.into(), targets: vec![2, 3] };
        assert_eq!(embed_gate(&g, 3).unwrap().offset, 1);
    }

    #[test]
    fn embed_scattered_cnot() {
        // CNOT control 1, target 3: flips qubit 3 when qubit 1 is set
        let g = CircuitGate { gate: GateName::Cnot.into(), targets: vec![1, 3] };
        let e = embed_gate(&g, 3).unwrap();
        assert_eq!((e.offset, e.gate.qubits()), (0, 3));
        for x in 0..8usize {
            let y = if x & 0b100 != 0 { x ^ 0b001 } else { x };
            assert_eq!(e.gate.unitary().matrix().get(y, x), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn simulate_examples() {
        let c = circuit(r#"{"qubits": 1, "gates": [{"gate": "H", "targets": [1]}]}"#);
        let out = simulate(&c, &StateVector::basis(1, 0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(out.max_abs_diff(&sparse_state(1, &[(0, h.into()), (1, h.into())]).unwrap()) < 1e-12);
        let empty = Circuit::new(2);
        let v = StateVector::basis(2, 3);
        assert_eq!(simulate(&empty, &v).unwrap(), v);
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"qubits": 2, "gates": [{"gate": "CNOT", "targets": [1, 2]},
            {"matrix": [[[0,0],[1,0]],[[1,0],[0,0]]], "targets": [2]}]}"#;
        let c = circuit(json);
        assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(matches!(
            Circuit::from_json(r#"{"qubits": 2, "gates": [{"gate": "CNOT", "targets": [2, 1]}]}"#),
            Err(CircuitError::BadTargets { .. })
        ));
        assert!(matches!(
            Circuit::from_json(r#"{"qubits": 2, "gates": [{"gate": "H", "targets": [3]}]}"#),
            Err(CircuitError::BadTargets { .. })
        ));
        assert!(matches!(Circuit::from_json(r#"{"qubits": 2}"#), Err(CircuitError::Json(_))));
    }

    #[test]
    fn extract_inverts_encode() {
        let c = circuit(
            r#"{"qubits": 2, "gates": [{"gate": "H", "targets": [1]}, {"gate": "Z", "targets": [1]},
                {"gate": "X", "targets": [2]}, {"gate": "CNOT", "targets": [1, 2]}]}"#,
        );
        let p = encode(&c).unwrap();
        let n: Context = "<><>[.]".parse().unwrap();
        let back = extract(&p, 0, &n, true).unwrap();
        let names: Vec<String> = back.gates.iter().map(|g| g.gate.name().unwrap().to_string()).collect();
        assert_eq!(names, ["H", "Z", "X", "CNOT"]);
        assert!(approx_equal(back.unitary().unwrap().matrix(), c.unitary().unwrap().matrix(), EQUALITY_TOL).unwrap());
    }
}
