//! Property tests over formulas, matrices, proof syntax and circuits.

use proptest::prelude::*;
use qmll::circuit::{embed_gate, encode, extract, simulate, Circuit, CircuitGate};
use qmll::cutelim::{normalize, Strategy as Reduction};
use qmll::formula::{Context, Formula, Modality};
use qmll::generate::{random_proof, GenConfig};
use qmll::matrix::{
    apply_at, approx_equal, ComplexMatrix, Gate, GateName, StateVector, UnitaryMatrix, C64, EQUALITY_TOL,
};
use qmll::proof::{parse_proof, print_proof, Proof};
use qmll::qiam::semantics_relative;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "c1"]).prop_map(Formula::atom),
        prop::sample::select(vec!["a", "b", "c1"]).prop_map(Formula::co_atom),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::par(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::diamond),
        ]
    })
}

fn one_qubit_gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        prop::sample::select(vec![GateName::H, GateName::X, GateName::Y, GateName::Z, GateName::S, GateName::T])
            .prop_map(Gate::from),
        (0.0..std::f64::consts::TAU).prop_map(|t| {
            let (c, s) = (t.cos(), t.sin());
            let m = ComplexMatrix::from_rows(vec![
                vec![C64::new(c, 0.0), C64::new(0.0, -s)],
                vec![C64::new(0.0, -s), C64::new(c, 0.0)],
            ])
            .unwrap();
            Gate::raw(UnitaryMatrix::new(m).unwrap())
        }),
    ]
}

fn gate(arity: usize) -> BoxedStrategy<Gate> {
    match arity {
        1 => one_qubit_gate().boxed(),
        2 => prop_oneof![
            Just(Gate::from(GateName::Cnot)),
            Just(Gate::from(GateName::Swap)),
            (one_qubit_gate(), one_qubit_gate()).prop_map(|(a, b)| Gate::raw(a.unitary().tensor(b.unitary())))
        ]
        .boxed(),
        n => (one_qubit_gate(), gate(n - 1)).prop_map(|(a, b)| Gate::raw(a.unitary().tensor(b.unitary()))).boxed(),
    }
}

fn state(qubits: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << qubits)
        .prop_filter("non-zero", |v| v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3))
        .prop_map(|v| {
            let amps: Vec<C64> = v.into_iter().map(|(r, i)| C64::new(r, i)).collect();
            let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            StateVector::normalised(amps.into_iter().map(|z| z / n).collect()).unwrap()
        })
}

/// A gate with sorted distinct targets inside `m` qubits.
fn placed_gate(m: usize) -> impl Strategy<Value = CircuitGate> {
    (1..=m.min(3))
        .prop_flat_map(move |k| (gate(k), prop::sample::subsequence((1..=m).collect::<Vec<_>>(), k)))
        .prop_map(|(gate, targets)| CircuitGate { gate, targets })
}

fn circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_qubits).prop_flat_map(move |m| {
        prop::collection::vec(placed_gate(m), 0..=max_gates).prop_map(move |gates| Circuit { qubits: m, gates })
    })
}

/// Applies `g` to basis state `x` of `m` qubits by direct bit manipulation.
fn brute_force(g: &CircuitGate, m: usize, x: usize) -> Vec<C64> {
    let u = g.gate.unitary().matrix();
    let bit = |v: usize, q: usize| (v >> (m - q)) & 1;
    let local = |v: usize| g.targets.iter().fold(0, |acc, &t| (acc << 1) | bit(v, t));
    let mut out = vec![C64::new(0.0, 0.0); 1 << m];
    for (y, slot) in out.iter_mut().enumerate() {
        let others_agree = (1..=m).filter(|q| !g.targets.contains(q)).all(|q| bit(x, q) == bit(y, q));
        if others_agree {
            *slot = u.get(local(y), local(x));
        }
    }
    out
}

fn modal_conclusion(m: usize) -> Vec<Formula> {
    vec![Formula::co_atom("a").with_prefix(Modality::Diamond, m), Formula::atom("a").with_prefix(Modality::Box, m)]
}

fn entry_context(m: usize) -> Context {
    Context::Hole.with_prefix(Modality::Diamond, m)
}

fn no_connectives(p: &Proof) -> bool {
    !matches!(p, Proof::Par { .. } | Proof::Tensor { .. }) && p.children().into_iter().all(no_connectives)
}

proptest! {
    #[test]
    fn formula_print_parse_round_trip(f in formula()) {
        prop_assert_eq!(f.to_string().parse::<Formula>().unwrap(), f);
    }

    #[test]
    fn dual_is_an_involution(f in formula()) {
        prop_assert_eq!(f.dual().dual(), f.clone());
        prop_assert_eq!(f.dual().size(), f.size());
    }

    #[test]
    fn contexts_rebuild_the_formula(f in formula()) {
        let cs = f.contexts();
        prop_assert_eq!(cs.len(), f.atom_count());
        for (c, _) in cs {
            let path = c.path();
            let atom = Formula::Atom(f.atom_at(&path).unwrap().clone());
            prop_assert_eq!(c.subst(&atom), f.clone());
            let modal_steps = path.iter().filter(|s| **s == qmll::formula::HoleStep::Modal).count();
            prop_assert_eq!(c.depth(), modal_steps);
        }
    }

    #[test]
    fn apply_at_is_undone_by_the_adjoint((k, u, v) in (1usize..=3).prop_flat_map(|n| (0..=4 - n, gate(n), state(4)))) {
        let there = apply_at(u.unitary(), &v, k).unwrap();
        let back = apply_at(&u.unitary().adjoint(), &there, k).unwrap();
        prop_assert!(back.max_abs_diff(&v) <= EQUALITY_TOL);
        prop_assert!((there.norm() - 1.0).abs() <= EQUALITY_TOL);
    }

    #[test]
    fn tensor_and_product_are_unitary((a, b) in (gate(2), gate(2))) {
        let p = a.unitary().matmul(b.unitary()).unwrap();
        let t = a.unitary().tensor(b.unitary());
        prop_assert!(p.matrix().unitarity_defect() <= 1e-9);
        prop_assert!(t.matrix().unitarity_defect() <= 1e-9);
        let lhs = p.adjoint();
        let rhs = b.unitary().adjoint().matmul(&a.unitary().adjoint()).unwrap();
        prop_assert!(approx_equal(lhs.matrix(), rhs.matrix(), EQUALITY_TOL).unwrap());
    }

    #[test]
    fn embedding_matches_brute_force((m, g) in (1usize..=4).prop_flat_map(|m| (Just(m), placed_gate(m)))) {
        let e = embed_gate(&g, m).unwrap();
        prop_assert!(e.offset + e.gate.qubits() <= m);
        for x in 0..1usize << m {
            let got = apply_at(e.gate.unitary(), &StateVector::basis(m, x), e.offset).unwrap();
            let want = StateVector::new(brute_force(&g, m, x)).unwrap();
            prop_assert!(got.max_abs_diff(&want) <= EQUALITY_TOL);
        }
    }

    #[test]
    fn proof_print_parse_round_trip(seed in any::<u64>()) {
        let p = random_proof(seed, GenConfig::default());
        let text = print_proof(&p);
        let q = parse_proof(&text).unwrap();
        prop_assert_eq!(print_proof(&q), text);
        prop_assert_eq!(q.conclusion().unwrap(), p.conclusion().unwrap());
    }

    #[test]
    fn encoding_computes_the_circuit(c in circuit(4, 6)) {
        let p = encode(&c).unwrap();
        prop_assert_eq!(p.conclusion().unwrap().0, modal_conclusion(c.qubits));
        prop_assert!(no_connectives(&p));
        let oracle = c.unitary().unwrap();
        let s = semantics_relative(&p, 0, &entry_context(c.qubits)).unwrap();
        prop_assert!(approx_equal(s.unitary.matrix(), oracle.matrix(), EQUALITY_TOL).unwrap());
        let back = extract(&p, 0, &entry_context(c.qubits), false).unwrap();
        prop_assert!(approx_equal(back.unitary().unwrap().matrix(), oracle.matrix(), EQUALITY_TOL).unwrap());
        let input = StateVector::basis(c.qubits, 0);
        prop_assert!(simulate(&c, &input).unwrap().max_abs_diff(&input.apply_matrix(oracle.matrix()).unwrap()) <= EQUALITY_TOL);
    }

    #[test]
    fn normalizing_an_encoding_keeps_its_unitary(c in circuit(3, 5)) {
        let p = encode(&c).unwrap();
        let t = normalize(&p, Reduction::LeftmostInnermost).unwrap();
        prop_assert!(!t.normal.contains_cut());
        let before = semantics_relative(&p, 0, &entry_context(c.qubits)).unwrap();
        let after = semantics_relative(&t.normal, 0, &entry_context(c.qubits)).unwrap();
        prop_assert!(approx_equal(before.unitary.matrix(), after.unitary.matrix(), EQUALITY_TOL).unwrap());
    }

    #[test]
    fn encode_extract_encode_is_stable(c in circuit(4, 6)) {
        let p = encode(&c).unwrap();
        let again = encode(&extract(&p, 0, &entry_context(c.qubits), false).unwrap()).unwrap();
        prop_assert_eq!(print_proof(&again), print_proof(&p));
    }
}
