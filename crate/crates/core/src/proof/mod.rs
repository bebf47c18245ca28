//! Proof trees over ordered sequents, the rule checker and occurrence
//! bookkeeping.
//!
//! Conclusion order of every rule (positions are 0-based here, 1-based in
//! files):
//!
//! | rule                      | conclusion                                 |
//! |---------------------------|--------------------------------------------|
//! | `Axiom(A)`                | `~A, A`                                    |
//! | `Cut(i, j, L, R)`         | `L` without `i`, then `R` without `j`      |
//! | `Par(i, j, P)`            | `P` without `i, j`, then `P[i] % P[j]`     |
//! | `Tensor(i, j, L, R)`      | `L` without `i`, `R` without `j`, `L[i] * R[j]` |
//! | `Quantum(n, U, P)`        | `<>^n P[0], []^n P[1]`                     |
//! | `Exchange(order, P)`      | `P[order[0]], P[order[1]], ...`            |
//!
//! `Exchange` never appears in hand-written proofs; cut elimination inserts
//! it when a rewrite changes the order in which the conclusion is assembled.

mod mll;
mod syntax;

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Modality};
use crate::matrix::Gate;

pub use mll::{mll_axiom_link_matrix, MllError};
pub use syntax::{parse_proof, parse_proof_unchecked, print_proof, ProofParseError};

#[derive(Clone, Debug, PartialEq)]
pub enum Proof {
    Axiom(Formula),
    Cut { left_pos: usize, right_pos: usize, left: Box<Proof>, right: Box<Proof> },
    Par { first: usize, second: usize, premise: Box<Proof> },
    Tensor { left_pos: usize, right_pos: usize, left: Box<Proof>, right: Box<Proof> },
    Quantum { arity: usize, gate: Gate, premise: Box<Proof> },
    Exchange { order: Vec<usize>, premise: Box<Proof> },
}

impl Proof {
    pub fn axiom(f: Formula) -> Proof {
        Proof::Axiom(f)
    }

    pub fn cut(left_pos: usize, right_pos: usize, left: Proof, right: Proof) -> Proof {
        Proof::Cut { left_pos, right_pos, left: Box::new(left), right: Box::new(right) }
    }

    pub fn par(first: usize, second: usize, premise: Proof) -> Proof {
        Proof::Par { first, second, premise: Box::new(premise) }
    }

    pub fn tensor(left_pos: usize, right_pos: usize, left: Proof, right: Proof) -> Proof {
        Proof::Tensor { left_pos, right_pos, left: Box::new(left), right: Box::new(right) }
    }

    pub fn quantum(arity: usize, gate: impl Into<Gate>, premise: Proof) -> Proof {
        Proof::Quantum { arity, gate: gate.into(), premise: Box::new(premise) }
    }

    /// Wraps `premise` in an exchange, collapsing nested and identity ones.
    pub fn exchange(order: Vec<usize>, premise: Proof) -> Proof {
        let (order, premise) = match premise {
            Proof::Exchange { order: inner, premise } => {
                (order.iter().map(|&k| inner[k]).collect::<Vec<_>>(), *premise)
            }
            other => (order, other),
        };
        if order.iter().enumerate().all(|(k, &o)| k == o) {
            premise
        } else {
            Proof::Exchange { order, premise: Box::new(premise) }
        }
    }

    pub fn children(&self) -> Vec<&Proof> {
        match self {
            Proof::Axiom(_) => vec![],
            Proof::Cut { left, right, .. } | Proof::Tensor { left, right, .. } => vec![left, right],
            Proof::Par { premise, .. } | Proof::Quantum { premise, .. } | Proof::Exchange { premise, .. } => {
                vec![premise]
            }
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Proof> {
        match self {
            Proof::Axiom(_) => vec![],
            Proof::Cut { left, right, .. } | Proof::Tensor { left, right, .. } => vec![left, right],
            Proof::Par { premise, .. } | Proof::Quantum { premise, .. } | Proof::Exchange { premise, .. } => {
                vec![premise]
            }
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            Proof::Axiom(_) => "ax",
            Proof::Cut { .. } => "cut",
            Proof::Par { .. } => "par",
            Proof::Tensor { .. } => "tensor",
            Proof::Quantum { .. } => "q",
            Proof::Exchange { .. } => "ex",
        }
    }

    /// Number of logical rule instances; exchanges are not counted.
    pub fn rule_count(&self) -> usize {
        let own = usize::from(!matches!(self, Proof::Exchange { .. }));
        own + self.children().into_iter().map(Proof::rule_count).sum::<usize>()
    }

    pub fn at(&self, path: &NodePath) -> Option<&Proof> {
        path.0.iter().try_fold(self, |p, &c| p.children().get(c).copied())
    }

    pub fn at_mut(&mut self, path: &NodePath) -> Option<&mut Proof> {
        let mut p = self;
        for &c in &path.0 {
            p = p.children_mut().into_iter().nth(c)?;
        }
        Some(p)
    }

    /// Every node path in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        fn go(p: &Proof, here: &mut Vec<usize>, out: &mut Vec<NodePath>) {
            out.push(NodePath(here.clone()));
            for (k, c) in p.children().into_iter().enumerate() {
                here.push(k);
                go(c, here, out);
                here.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn contains_cut(&self) -> bool {
        matches!(self, Proof::Cut { .. }) || self.children().into_iter().any(Proof::contains_cut)
    }

    pub fn contains_quantum(&self) -> bool {
        matches!(self, Proof::Quantum { .. }) || self.children().into_iter().any(Proof::contains_quantum)
    }

    /// Conclusion of this node given its premises' conclusions, together
    /// with the source of each conclusion occurrence.
    pub fn infer(&self, premises: &[&Sequent]) -> Result<(Sequent, Vec<Source>), ViolationKind> {
        use ViolationKind as V;
        let in_range = |s: &Sequent, i: usize| {
            if i < s.len() {
                Ok(())
            } else {
                Err(V::PositionOutOfRange { position: i + 1, len: s.len() })
            }
        };
        let without = |child: usize, s: &Sequent, skip: &[usize]| -> (Vec<Formula>, Vec<Source>) {
            s.0.iter()
                .enumerate()
                .filter(|(k, _)| !skip.contains(k))
                .map(|(k, f)| (f.clone(), Source::Premise { child, position: k }))
                .unzip()
        };
        match self {
            Proof::Axiom(f) => Ok((Sequent(vec![f.dual(), f.clone()]), vec![Source::Principal; 2])),
            Proof::Cut { left_pos, right_pos, .. } => {
                let (l, r) = (premises[0], premises[1]);
                in_range(l, *left_pos)?;
                in_range(r, *right_pos)?;
                if r.0[*right_pos] != l.0[*left_pos].dual() {
                    return Err(V::CutNotDual { left: l.0[*left_pos].clone(), right: r.0[*right_pos].clone() });
                }
                let (mut fs, mut src) = without(0, l, &[*left_pos]);
                let (fs2, src2) = without(1, r, &[*right_pos]);
                fs.extend(fs2);
                src.extend(src2);
                Ok((Sequent(fs), src))
            }
            Proof::Par { first, second, .. } => {
                let p = premises[0];
                in_range(p, *first)?;
                in_range(p, *second)?;
                if first == second {
                    return Err(V::SamePosition(first + 1));
                }
                let (mut fs, mut src) = without(0, p, &[*first, *second]);
                fs.push(Formula::par(p.0[*first].clone(), p.0[*second].clone()));
                src.push(Source::Principal);
                Ok((Sequent(fs), src))
            }
            Proof::Tensor { left_pos, right_pos, .. } => {
                let (l, r) = (premises[0], premises[1]);
                in_range(l, *left_pos)?;
                in_range(r, *right_pos)?;
                let (mut fs, mut src) = without(0, l, &[*left_pos]);
                let (fs2, src2) = without(1, r, &[*right_pos]);
                fs.extend(fs2);
                src.extend(src2);
                fs.push(Formula::tensor(l.0[*left_pos].clone(), r.0[*right_pos].clone()));
                src.push(Source::Principal);
                Ok((Sequent(fs), src))
            }
            Proof::Quantum { arity, gate, .. } => {
                let p = premises[0];
                if *arity == 0 {
                    return Err(V::ZeroArity);
                }
                if gate.qubits() != *arity {
                    return Err(V::GateDimension { arity: *arity, gate_qubits: gate.qubits() });
                }
                if p.len() != 2 {
                    return Err(V::QuantumPremiseSize(p.len()));
                }
                if p.0[0].is_modal() != p.0[1].is_modal() {
                    return Err(V::MixedModality { first: p.0[0].clone(), second: p.0[1].clone() });
                }
                let fs = vec![
                    p.0[0].clone().with_prefix(Modality::Diamond, *arity),
                    p.0[1].clone().with_prefix(Modality::Box, *arity),
                ];
                Ok((Sequent(fs), vec![Source::Principal; 2]))
            }
            Proof::Exchange { order, .. } => {
                let p = premises[0];
                let mut seen = vec![false; p.len()];
                if order.len() != p.len()
                    || order.iter().any(|&k| k >= p.len() || std::mem::replace(&mut seen[k], true))
                {
                    return Err(V::BadExchange { len: p.len() });
                }
                let fs = order.iter().map(|&k| p.0[k].clone()).collect();
                let src = order.iter().map(|&k| Source::Premise { child: 0, position: k }).collect();
                Ok((Sequent(fs), src))
            }
        }
    }

    /// Conclusion sequent, validating every node on the way.
    pub fn conclusion(&self) -> Result<Sequent, Violation> {
        fn go(p: &Proof, here: &mut Vec<usize>) -> Result<Sequent, Violation> {
            let mut premises = Vec::new();
            for (k, c) in p.children().into_iter().enumerate() {
                here.push(k);
                premises.push(go(c, here)?);
                here.pop();
            }
            let refs: Vec<&Sequent> = premises.iter().collect();
            p.infer(&refs).map(|(s, _)| s).map_err(|kind| Violation { path: NodePath(here.clone()), kind })
        }
        go(self, &mut Vec::new())
    }
}

/// Where a conclusion occurrence of a node comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Introduced by the node's own rule.
    Principal,
    /// The same occurrence in premise `child` at `position`.
    Premise { child: usize, position: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequent(pub Vec<Formula>);

impl Sequent {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.0
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|-")?;
        for (k, a) in self.0.iter().enumerate() {
            write!(f, "{}{a}", if k == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

/// Path of child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> NodePath {
        NodePath(Vec::new())
    }

    pub fn child(&self, k: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(k);
        NodePath(v)
    }

    pub fn join(&self, rest: &[usize]) -> NodePath {
        let mut v = self.0.clone();
        v.extend_from_slice(rest);
        NodePath(v)
    }

    pub fn parent(&self) -> Option<(NodePath, usize)> {
        let (&last, init) = self.0.split_last()?;
        Some((NodePath(init.to_vec()), last))
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root")?;
        for k in &self.0 {
            write!(f, "/{k}")?;
        }
        Ok(())
    }
}

/// One formula occurrence: a node and a position in its conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrenceId {
    pub node: NodePath,
    pub position: usize,
}

impl fmt::Display for OccurrenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.node, self.position + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ViolationKind {
    #[error("position {position} out of range for a sequent of {len} formula(s)")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("cut formulas {left} and {right} are not dual")]
    CutNotDual { left: Formula, right: Formula },
    #[error("par principal positions coincide ({0})")]
    SamePosition(usize),
    #[error("quantum rule of arity {arity} annotated with a {gate_qubits}-qubit gate")]
    GateDimension { arity: usize, gate_qubits: usize },
    #[error("quantum rule needs a two-formula premise, found {0}")]
    QuantumPremiseSize(usize),
    #[error("quantum rule premise mixes modal and non-modal formulas ({first}, {second})")]
    MixedModality { first: Formula, second: Formula },
    #[error("quantum rule arity must be positive")]
    ZeroArity,
    #[error("exchange is not a permutation of {len} position(s)")]
    BadExchange { len: usize },
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("at {path}: {kind}")]
pub struct Violation {
    pub path: NodePath,
    pub kind: ViolationKind,
}

/// Outcome of [`check`].
#[derive(Clone, Debug, PartialEq)]
pub enum CheckReport {
    Valid(Sequent),
    Invalid(Violation),
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckReport::Valid(_))
    }
}

/// Validates every node; reports the first violation in post-order.
pub fn check(p: &Proof) -> CheckReport {
    match p.conclusion() {
        Ok(s) => CheckReport::Valid(s),
        Err(v) => CheckReport::Invalid(v),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no node at {0}")]
pub struct BadPath(pub NodePath);

/// Occurrences introduced, or cut, by the rule at `path`.
pub fn principal_formulas(p: &Proof, path: &NodePath) -> Result<Vec<OccurrenceId>, BadPath> {
    let node = p.at(path).ok_or_else(|| BadPath(path.clone()))?;
    let here = |position| OccurrenceId { node: path.clone(), position };
    Ok(match node {
        Proof::Axiom(_) | Proof::Quantum { .. } => vec![here(0), here(1)],
        Proof::Cut { left_pos, right_pos, .. } => vec![
            OccurrenceId { node: path.child(0), position: *left_pos },
            OccurrenceId { node: path.child(1), position: *right_pos },
        ],
        Proof::Par { .. } | Proof::Tensor { .. } => {
            let len = node.conclusion().map(|s| s.len()).map_err(|_| BadPath(path.clone()))?;
            vec![here(len - 1)]
        }
        Proof::Exchange { .. } => vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::GateName;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn three_qubit_identity_checks() {
        let p = Proof::quantum(3, Gate::identity(3), Proof::axiom(f("a")));
        let CheckReport::Valid(s) = check(&p) else { panic!() };
        assert_eq!(s.0, vec![f("<><><>~a"), f("[][][]a")]);
    }

    #[test]
    fn quantum_dimension_violation() {
        let p = Proof::quantum(1, GateName::Cnot, Proof::axiom(f("a")));
        let CheckReport::Invalid(v) = check(&p) else { panic!() };
        assert_eq!(v.path, NodePath::root());
        assert!(matches!(v.kind, ViolationKind::GateDimension { arity: 1, gate_qubits: 2 }));
    }

    #[test]
    fn mixed_modality_violation() {
        let three = Proof::tensor(1, 1, Proof::axiom(f("a")), Proof::axiom(f("<>a")));
        let two = Proof::par(0, 2, three);
        assert_eq!(two.conclusion().unwrap().0, vec![f("[]~a"), f("(~a % (a * <>a))")]);
        let CheckReport::Invalid(v) = check(&Proof::quantum(1, GateName::H, two)) else { panic!() };
        assert!(matches!(v.kind, ViolationKind::MixedModality { .. }));
    }

    #[test]
    fn cut_and_par_violations_report_paths() {
        let bad_cut = Proof::cut(0, 0, Proof::axiom(f("a")), Proof::axiom(f("b")));
        let CheckReport::Invalid(v) = check(&Proof::par(0, 1, bad_cut)) else { panic!() };
        assert_eq!(v.path, NodePath(vec![0]));
        assert!(matches!(v.kind, ViolationKind::CutNotDual { .. }));

        let bad_par = Proof::quantum(1, GateName::H, Proof::par(0, 0, Proof::axiom(f("a"))));
        let CheckReport::Invalid(v) = check(&bad_par) else { panic!() };
        assert_eq!(v.path, NodePath(vec![0]));
        assert_eq!(v.kind, ViolationKind::SamePosition(1));

        let oob = Proof::par(0, 2, Proof::axiom(f("a")));
        assert!(matches!(
            check(&oob),
            CheckReport::Invalid(Violation { kind: ViolationKind::PositionOutOfRange { .. }, .. })
        ));
    }

    #[test]
    fn principal_formula_examples() {
        let ax = Proof::axiom(f("a"));
        assert_eq!(principal_formulas(&ax, &NodePath::root()).unwrap().len(), 2);
        let par = Proof::par(0, 1, ax.clone());
        assert_eq!(
            principal_formulas(&par, &NodePath::root()).unwrap(),
            vec![OccurrenceId { node: NodePath::root(), position: 0 }]
        );
        let q = Proof::quantum(2, GateName::Cnot, ax.clone());
        let ps = principal_formulas(&q, &NodePath::root()).unwrap();
        let s = q.conclusion().unwrap();
        let formulas: Vec<_> = ps.iter().map(|o| s.0[o.position].clone()).collect();
        assert_eq!(formulas, vec![f("<><>~a"), f("[][]a")]);
        assert!(principal_formulas(&q, &NodePath(vec![3])).is_err());
    }
}
