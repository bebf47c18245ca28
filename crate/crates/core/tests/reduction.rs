//! Cut elimination over the generated corpus: termination, normal forms,
//! confluence and invariance of the machine semantics.

use qmll::cutelim::{find_redexes, joinable, net_signature, normalize, step, weight, JoinBudget, RedexKind, Strategy};
use qmll::formula::Polarity;
use qmll::generate::{corpus, GenConfig};
use qmll::matrix::{approx_equal, EQUALITY_TOL};
use qmll::proof::{check, parse_proof, print_proof, Proof};
use qmll::qiam::semantics_relative;

fn proofs(n: usize) -> Vec<Proof> {
    corpus(1000, n, GenConfig::default())
}

/// Every (entry position, negative context) of the conclusion.
fn entries(p: &Proof) -> Vec<(usize, qmll::formula::Context)> {
    let s = p.conclusion().unwrap();
    let mut out = Vec::new();
    for (i, f) in s.0.iter().enumerate() {
        for (c, pol) in f.contexts() {
            if pol == Polarity::Negative {
                out.push((i, c));
            }
        }
    }
    out
}

fn same_semantics(a: &Proof, b: &Proof) -> Result<(), String> {
    for (i, n) in entries(a) {
        let sa = semantics_relative(a, i, &n).map_err(|e| format!("before: {e}"))?;
        let sb = semantics_relative(b, i, &n).map_err(|e| format!("after: {e}"))?;
        if sa.exit != sb.exit || sa.exit_context != sb.exit_context {
            return Err(format!(
                "entry {i} {n}: exits {} {} vs {} {}",
                sa.exit, sa.exit_context, sb.exit, sb.exit_context
            ));
        }
        if !approx_equal(sa.unitary.matrix(), sb.unitary.matrix(), EQUALITY_TOL).unwrap() {
            return Err(format!("entry {i} {n}: unitaries differ"));
        }
    }
    Ok(())
}

#[test]
fn normal_forms_are_cut_free() {
    for p in proofs(400) {
        let t = normalize(&p, Strategy::LeftmostInnermost).unwrap_or_else(|e| panic!("{e} on {p:?}"));
        assert!(!t.normal.contains_cut(), "cut left in {:?}", t.normal);
        assert!(find_redexes(&t.normal).is_empty());
        assert_eq!(t.normal.conclusion().unwrap(), p.conclusion().unwrap());
    }
}

#[test]
fn every_step_preserves_conclusion_and_lowers_weight() {
    for p in proofs(200) {
        let c = p.conclusion().unwrap();
        for r in find_redexes(&p) {
            let q = step(&p, &r).unwrap();
            assert!(check(&q).is_valid(), "{r} on {p:?}");
            assert_eq!(q.conclusion().unwrap(), c, "{r} on {p:?}");
            assert!(weight(&q) < weight(&p), "{r} on {p:?}");
        }
    }
}

#[test]
fn strategies_agree() {
    for p in proofs(100) {
        let reference = net_signature(&normalize(&p, Strategy::LeftmostInnermost).unwrap().normal);
        for seed in 0..20 {
            let other = net_signature(&normalize(&p, Strategy::Random(seed)).unwrap().normal);
            assert!(reference.approx_eq(&other, EQUALITY_TOL), "seed {seed} on {p:?}");
        }
    }
}

#[test]
fn divergent_steps_rejoin() {
    let budget = JoinBudget { steps: 5, max_states: 200_000 };
    for p in proofs(300) {
        let rs = find_redexes(&p);
        for (k, r1) in rs.iter().enumerate() {
            for r2 in &rs[k + 1..] {
                let (a, b) = (step(&p, r1).unwrap(), step(&p, r2).unwrap());
                assert!(joinable(&a, &b, budget), "{r1} / {r2} on {}", print_proof(&p));
            }
        }
    }
}

/// Contracting the box under a principal cut changes its arity, so the
/// other reduct needs three steps to catch up.
#[test]
fn contraction_against_principal_cut_needs_three_steps() {
    let p = parse_proof("(cut 2 1 (q 1 H (q 1 X (ax a))) (q 1 Z (ax []a)))").unwrap();
    let rs = find_redexes(&p);
    let kinds: Vec<RedexKind> = rs.iter().map(|r| r.kind).collect();
    assert!(kinds.contains(&RedexKind::QContract) && kinds.contains(&RedexKind::QuantumPrincipal), "{kinds:?}");
    let pick = |k| step(&p, rs.iter().find(|r| r.kind == k).unwrap()).unwrap();
    let (a, b) = (pick(RedexKind::QContract), pick(RedexKind::QuantumPrincipal));
    assert!(!joinable(&a, &b, JoinBudget { steps: 2, max_states: 200_000 }));
    assert!(joinable(&a, &b, JoinBudget { steps: 3, max_states: 200_000 }));
}

#[test]
fn steps_preserve_semantics() {
    let mut checked = 0;
    for p in proofs(200) {
        for r in find_redexes(&p) {
            let q = step(&p, &r).unwrap();
            if let Err(e) = same_semantics(&p, &q) {
                panic!("{r}: {e} on {}", print_proof(&p));
            }
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn quantum_principal_fuses_gates() {
    let p = parse_proof("(cut 2 1 (q 1 H (ax a)) (q 1 X (ax a)))").unwrap();
    let rs = find_redexes(&p);
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0].kind, RedexKind::QuantumPrincipal);
    same_semantics(&p, &step(&p, &rs[0]).unwrap()).unwrap();
}
