//! Cut elimination: redex detection, the rewrite schemas, normalization and
//! the instrumentation used to test confluence and termination.
//!
//! Rewrites keep the conclusion sequent exactly, order included. When a
//! schema assembles the conclusion in a different order the reduct is
//! wrapped in an exchange; exchanges are merged so no exchange ever sits
//! directly on another one.

mod build;
mod confluence;
mod net;
mod normalize;

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Modality};
use crate::matrix::Gate;
use crate::proof::{NodePath, Proof};
use build::{Label, Mismatch, Piece};

pub use confluence::{joinable, JoinBudget};
pub use net::{net_signature, NetSignature};
pub use normalize::{normalize, step_bound, weight, NormalizeError, ReductionTrace, Strategy, TraceStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RedexKind {
    AxiomRed,
    MultPrincipal,
    QuantumPrincipal,
    EtaExpand,
    QContract,
    CommutePar,
    CommuteTensorLeft,
    CommuteTensorRight,
}

impl RedexKind {
    pub fn is_commuting(self) -> bool {
        matches!(self, RedexKind::CommutePar | RedexKind::CommuteTensorLeft | RedexKind::CommuteTensorRight)
    }
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Premise of a cut on which the schema's distinguished rule sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Redex {
    pub kind: RedexKind,
    pub site: NodePath,
    /// For cut redexes: the premise holding the axiom, the par, the tensor
    /// or the quantum rule whose box formula is cut.
    pub side: Option<Side>,
    /// Arity of the quantum rules involved.
    pub arity: Option<usize>,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(side) = self.side {
            write!(f, "({})", if side == Side::Left { "left" } else { "right" })?;
        }
        write!(f, " at {}", self.site)
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum StepError {
    #[error("stale redex {0}: the proof does not contain it")]
    Stale(Redex),
}

/// Every redex of `p`, in post-order (children left to right, then node).
pub fn find_redexes(p: &Proof) -> Vec<Redex> {
    let mut out = Vec::new();
    collect(p, &mut Vec::new(), &mut out);
    out
}

fn collect(p: &Proof, here: &mut Vec<usize>, out: &mut Vec<Redex>) {
    for (k, c) in p.children().into_iter().enumerate() {
        here.push(k);
        collect(c, here, out);
        here.pop();
    }
    out.extend(redexes_at(p, &NodePath(here.clone())));
}

fn len(p: &Proof) -> usize {
    p.conclusion().map(|s| s.len()).unwrap_or(0)
}

/// The rule under at most one exchange, and the position seen through it.
fn peel(p: &Proof, position: usize) -> (&Proof, usize) {
    match p {
        Proof::Exchange { order, premise } => (premise, order.get(position).copied().unwrap_or(position)),
        other => (other, position),
    }
}

fn is_principal_par(p: &Proof, position: usize) -> bool {
    let (y, q) = peel(p, position);
    matches!(y, Proof::Par { .. }) && q + 1 == len(y)
}

fn redexes_at(p: &Proof, site: &NodePath) -> Vec<Redex> {
    let redex = |kind, side, arity| Redex { kind, site: site.clone(), side, arity };
    match p {
        Proof::Axiom(f) => {
            if f.uniform_prefix_len(Modality::Box) > 0 || f.uniform_prefix_len(Modality::Diamond) > 0 {
                vec![redex(RedexKind::EtaExpand, None, None)]
            } else {
                vec![]
            }
        }
        Proof::Quantum { arity, premise, .. } => match premise.as_ref() {
            Proof::Quantum { arity: inner, .. } => vec![redex(RedexKind::QContract, None, Some(inner + arity))],
            _ => vec![],
        },
        Proof::Cut { left_pos, right_pos, left, right } => {
            let mut out = Vec::new();
            for side in [Side::Left, Side::Right] {
                let ((x, pos), (other, opos)) = match side {
                    Side::Left => ((left, *left_pos), (right, *right_pos)),
                    Side::Right => ((right, *right_pos), (left, *left_pos)),
                };
                let (y, q) = peel(x, pos);
                match y {
                    Proof::Axiom(_) => out.push(redex(RedexKind::AxiomRed, Some(side), None)),
                    Proof::Par { .. } if q + 1 != len(y) => out.push(redex(RedexKind::CommutePar, Some(side), None)),
                    Proof::Tensor { left: t1, .. } => {
                        if q + 1 == len(y) {
                            if is_principal_par(other, opos) {
                                out.push(redex(RedexKind::MultPrincipal, Some(side), None));
                            }
                        } else if q + 1 < len(t1) {
                            out.push(redex(RedexKind::CommuteTensorLeft, Some(side), None));
                        } else {
                            out.push(redex(RedexKind::CommuteTensorRight, Some(side), None));
                        }
                    }
                    Proof::Quantum { arity, .. } if q == 1 => {
                        if let (Proof::Quantum { arity: other_arity, .. }, 0) = peel(other, opos) {
                            if other_arity == arity {
                                out.push(redex(RedexKind::QuantumPrincipal, Some(side), Some(*arity)));
                            }
                        }
                    }
                    _ => {}
                }
            }
            out
        }
        _ => vec![],
    }
}

/// Fires `r` on `p`.
pub fn step(p: &Proof, r: &Redex) -> Result<Proof, StepError> {
    let stale = || StepError::Stale(r.clone());
    let node = p.at(&r.site).ok_or_else(stale)?;
    if !redexes_at(node, &r.site).contains(r) {
        return Err(stale());
    }
    let reduct = rewrite(node, r).map_err(|_| stale())?;
    let mut out = p.clone();
    splice(&mut out, &r.site, reduct);
    Ok(out)
}

fn splice(p: &mut Proof, site: &NodePath, reduct: Proof) {
    if matches!(reduct, Proof::Exchange { .. }) {
        if let Some((parent, _)) = site.parent() {
            if let Some(slot) = p.at_mut(&parent) {
                if let Proof::Exchange { order, .. } = slot {
                    let order = std::mem::take(order);
                    *slot = Proof::exchange(order, reduct);
                    return;
                }
            }
        }
    }
    if let Some(slot) = p.at_mut(site) {
        *slot = reduct;
    }
}

/// Builds the piece for a cut premise, replaying an exchange on top of it.
fn peeled(x: &Proof, inner: impl FnOnce(&Proof) -> Result<Piece, Mismatch>) -> Result<Piece, Mismatch> {
    match x {
        Proof::Exchange { order, premise } => build::exchange(inner(premise)?, order),
        other => inner(other),
    }
}

/// Cut of two pieces at the given positions, keeping the original sides.
fn cut_at(left: Piece, i: usize, right: Piece, j: usize) -> Result<Piece, Mismatch> {
    let (l, r) = (left.label(i)?, right.label(j)?);
    build::cut(left, l, right, r)
}

fn under(p: &Proof) -> &Proof {
    match p {
        Proof::Exchange { premise, .. } => premise,
        other => other,
    }
}

fn rewrite(node: &Proof, r: &Redex) -> Result<Proof, Mismatch> {
    use Label::{Fresh, Sub};
    match (r.kind, node) {
        (RedexKind::EtaExpand, Proof::Axiom(f)) => eta(f),
        (RedexKind::QContract, Proof::Quantum { arity, gate: v, premise }) => match premise.as_ref() {
            Proof::Quantum { arity: k, gate: u, premise: s } => {
                let g = Gate::raw(u.unitary().tensor(v.unitary()));
                Ok(Proof::quantum(k + arity, g, (**s).clone()))
            }
            _ => Err(Mismatch),
        },
        (kind, Proof::Cut { left_pos, right_pos, left, right }) => {
            let side = r.side.ok_or(Mismatch)?;
            // `x` holds the distinguished rule, `g` is the opposite premise.
            let (x, g, gpos) = match side {
                Side::Left => (left.as_ref(), right.as_ref(), *right_pos),
                Side::Right => (right.as_ref(), left.as_ref(), *left_pos),
            };
            let assemble = |xp: Piece, gp: Piece| match side {
                Side::Left => cut_at(xp, *left_pos, gp, *right_pos),
                Side::Right => cut_at(gp, *left_pos, xp, *right_pos),
            };
            match kind {
                RedexKind::AxiomRed => {
                    let xp = peeled(x, |a| Ok(build::axiom(a.clone(), Fresh(0), Fresh(1))))?;
                    let gp = Piece::sub(0, g)?;
                    let xpos = if side == Side::Left { *left_pos } else { *right_pos };
                    let other = if xp.label(xpos)? == Fresh(0) { Fresh(1) } else { Fresh(0) };
                    let orig = assemble(xp, gp)?;
                    let target: Vec<Label> =
                        orig.labels.iter().map(|&l| if l == other { Sub(0, gpos) } else { l }).collect();
                    build::finish(Piece::sub(0, g)?, &target)
                }
                RedexKind::MultPrincipal => {
                    let (
                        Proof::Tensor { left_pos: a, right_pos: b, left: t1, right: t2 },
                        Proof::Par { first: c, second: d, premise: p1 },
                    ) = (under(x), under(g))
                    else {
                        return Err(Mismatch);
                    };
                    let xp = peeled(x, |_| {
                        build::tensor(Piece::sub(0, t1)?, Sub(0, *a), Piece::sub(1, t2)?, Sub(1, *b), Fresh(0))
                    })?;
                    let gp = peeled(g, |_| build::par(Piece::sub(2, p1)?, Sub(2, *c), Sub(2, *d), Fresh(1)))?;
                    let orig = assemble(xp, gp)?;
                    let inner = build::cut(Piece::sub(1, t2)?, Sub(1, *b), Piece::sub(2, p1)?, Sub(2, *d))?;
                    let reduct = build::cut(Piece::sub(0, t1)?, Sub(0, *a), inner, Sub(2, *c))?;
                    build::finish(reduct, &orig.labels)
                }
                RedexKind::QuantumPrincipal => {
                    let (
                        Proof::Quantum { arity: m, gate: u, premise: s1 },
                        Proof::Quantum { gate: v, premise: s2, .. },
                    ) = (under(x), under(g))
                    else {
                        return Err(Mismatch);
                    };
                    let xp = peeled(x, |_| {
                        build::quantum(*m, u.clone(), Piece::sub(0, s1)?, Sub(0, 0), Sub(0, 1), [Fresh(0), Fresh(1)])
                    })?;
                    let gp = peeled(g, |_| {
                        build::quantum(*m, v.clone(), Piece::sub(1, s2)?, Sub(1, 0), Sub(1, 1), [Fresh(2), Fresh(3)])
                    })?;
                    let orig = assemble(xp, gp)?;
                    let w = v.unitary().matmul(u.unitary()).map_err(|_| Mismatch)?;
                    let premise = build::cut(Piece::sub(0, s1)?, Sub(0, 1), Piece::sub(1, s2)?, Sub(1, 0))?;
                    let reduct = build::quantum(*m, Gate::raw(w), premise, Sub(0, 0), Sub(1, 1), [Fresh(0), Fresh(3)])?;
                    build::finish(reduct, &orig.labels)
                }
                RedexKind::CommutePar => {
                    let Proof::Par { first: c, second: d, premise: p1 } = under(x) else { return Err(Mismatch) };
                    let par_piece = || peeled(x, |_| build::par(Piece::sub(1, p1)?, Sub(1, *c), Sub(1, *d), Fresh(0)));
                    let xpos = if side == Side::Left { *left_pos } else { *right_pos };
                    let lx = par_piece()?.label(xpos)?;
                    let lg = Sub(0, gpos);
                    let orig = assemble(par_piece()?, Piece::sub(0, g)?)?;
                    let inner = build::cut(Piece::sub(0, g)?, lg, Piece::sub(1, p1)?, lx)?;
                    let reduct = build::par(inner, Sub(1, *c), Sub(1, *d), Fresh(0))?;
                    build::finish(reduct, &orig.labels)
                }
                RedexKind::CommuteTensorLeft | RedexKind::CommuteTensorRight => {
                    let Proof::Tensor { left_pos: a, right_pos: b, left: t1, right: t2 } = under(x) else {
                        return Err(Mismatch);
                    };
                    let tensor_piece = || {
                        peeled(x, |_| {
                            build::tensor(Piece::sub(1, t1)?, Sub(1, *a), Piece::sub(2, t2)?, Sub(2, *b), Fresh(0))
                        })
                    };
                    let xpos = if side == Side::Left { *left_pos } else { *right_pos };
                    let lx = tensor_piece()?.label(xpos)?;
                    let lg = Sub(0, gpos);
                    let orig = assemble(tensor_piece()?, Piece::sub(0, g)?)?;
                    let reduct = if kind == RedexKind::CommuteTensorLeft {
                        let inner = build::cut(Piece::sub(0, g)?, lg, Piece::sub(1, t1)?, lx)?;
                        build::tensor(inner, Sub(1, *a), Piece::sub(2, t2)?, Sub(2, *b), Fresh(0))?
                    } else {
                        let inner = build::cut(Piece::sub(0, g)?, lg, Piece::sub(2, t2)?, lx)?;
                        build::tensor(Piece::sub(1, t1)?, Sub(1, *a), inner, Sub(2, *b), Fresh(0))?
                    };
                    build::finish(reduct, &orig.labels)
                }
                _ => Err(Mismatch),
            }
        }
        _ => Err(Mismatch),
    }
}

/// Replaces an axiom on a formula with a shared modal prefix by a quantum
/// rule over the axiom on what remains.
fn eta(f: &Formula) -> Result<Proof, Mismatch> {
    use Label::Fresh;
    let boxes = f.uniform_prefix_len(Modality::Box);
    let diamonds = f.uniform_prefix_len(Modality::Diamond);
    let (n, modality) = if boxes > 0 { (boxes, Modality::Box) } else { (diamonds, Modality::Diamond) };
    let body = f.strip_prefix(modality, n).ok_or(Mismatch)?;
    let gate = Gate::identity(n);
    let reduct = match modality {
        // F = []^n X: the premise |- ~X, X already has the right order.
        Modality::Box => {
            let ax = build::axiom(Proof::axiom(body.clone()), Fresh(10), Fresh(11));
            build::quantum(n, gate, ax, Fresh(10), Fresh(11), [Fresh(0), Fresh(1)])?
        }
        // F = <>^n G: the diamonds go on G, which the axiom on ~G lists first.
        Modality::Diamond => {
            let ax = build::axiom(Proof::axiom(body.dual()), Fresh(10), Fresh(11));
            build::quantum(n, gate, ax, Fresh(10), Fresh(11), [Fresh(1), Fresh(0)])?
        }
    };
    build::finish(reduct, &[Fresh(0), Fresh(1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{approx_equal, GateName, EQUALITY_TOL};
    use crate::proof::{parse_proof, print_proof};

    fn p(s: &str) -> Proof {
        parse_proof(s).unwrap()
    }

    fn kinds(s: &str) -> Vec<RedexKind> {
        find_redexes(&p(s)).into_iter().map(|r| r.kind).collect()
    }

    fn fire(s: &str, kind: RedexKind) -> Proof {
        let q = p(s);
        let r = find_redexes(&q).into_iter().find(|r| r.kind == kind).unwrap();
        let out = step(&q, &r).unwrap();
        assert_eq!(out.conclusion().unwrap(), q.conclusion().unwrap());
        out
    }

    #[test]
    fn normal_mll_has_no_redex() {
        assert!(kinds("(par 2 1 (par 1 2 (tensor 2 2 (ax a) (ax a))))").is_empty());
    }

    #[test]
    fn eta_on_modal_axiom() {
        assert_eq!(kinds("(ax []a)"), vec![RedexKind::EtaExpand]);
        assert_eq!(print_proof(&fire("(ax []a)", RedexKind::EtaExpand)), "(q 1 I1 (ax a))");
        assert_eq!(print_proof(&fire("(ax <><>a)", RedexKind::EtaExpand)), "(ex (2 1) (q 2 I2 (ax ~a)))");
        assert_eq!(print_proof(&fire("(ax [][]<>a)", RedexKind::EtaExpand)), "(q 2 I2 (ax <>a))");
    }

    #[test]
    fn contraction_tensors_inner_first() {
        assert_eq!(kinds("(q 1 I1 (q 1 H (ax a)))"), vec![RedexKind::QContract]);
        let out = fire("(q 1 I1 (q 1 H (ax a)))", RedexKind::QContract);
        let Proof::Quantum { arity: 2, gate, .. } = &out else { panic!() };
        let expected = GateName::H.unitary().tensor(&GateName::Identity(1).unitary());
        assert!(approx_equal(gate.unitary().matrix(), expected.matrix(), EQUALITY_TOL).unwrap());
    }

    #[test]
    fn axiom_reduction_returns_other_premise() {
        let out = fire("(cut 2 1 (q 1 H (ax a)) (ax []a))", RedexKind::AxiomRed);
        assert_eq!(print_proof(&out), "(q 1 H (ax a))");
        let out = fire("(cut 2 2 (q 1 H (ax a)) (ax <>~a))", RedexKind::AxiomRed);
        assert_eq!(print_proof(&out), "(q 1 H (ax a))");
    }

    #[test]
    fn quantum_principal_multiplies() {
        let s = "(cut 2 1 (q 1 H (ax a)) (q 1 H (ax a)))";
        assert!(kinds(s).contains(&RedexKind::QuantumPrincipal));
        let out = fire(s, RedexKind::QuantumPrincipal);
        let Proof::Quantum { gate, .. } = &out else { panic!("{}", print_proof(&out)) };
        assert!(gate.unitary().is_identity(EQUALITY_TOL));
    }

    #[test]
    fn multiplicative_principal_and_commuting() {
        let s = "(cut 3 2 (tensor 2 2 (ax a) (ax b)) (par 1 2 (tensor 2 2 (ax a) (ax b))))";
        let q = p(s);
        assert!(q.conclusion().is_ok(), "{:?}", q.conclusion());
        assert!(kinds(s).contains(&RedexKind::MultPrincipal));
        fire(s, RedexKind::MultPrincipal);

        let s = "(cut 2 1 (ax a) (par 2 3 (tensor 2 2 (ax a) (ax b))))";
        assert!(kinds(s).contains(&RedexKind::CommutePar));
        fire(s, RedexKind::CommutePar);
    }

    #[test]
    fn stale_redex_is_rejected() {
        let q = p("(q 1 I1 (q 1 H (ax a)))");
        let r = find_redexes(&q).remove(0);
        let other = p("(q 1 H (ax a))");
        assert_eq!(step(&other, &r), Err(StepError::Stale(r)));
    }
}
