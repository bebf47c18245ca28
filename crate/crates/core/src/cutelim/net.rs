//! Proof-structure signatures: a canonical description of the graph of
//! links behind a proof, blind to exchanges and to the order in which
//! independent rules were applied.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::formula::{Formula, Modality};
use crate::matrix::{approx_equal, UnitaryMatrix};
use crate::proof::Proof;

#[derive(Clone, Debug)]
enum Link {
    /// Formula on port 1; port 0 carries its dual.
    Ax(Formula),
    /// Formula on port 0; port 1 carries its dual.
    Cut(Formula),
    Par,
    Tensor,
    Box(UnitaryMatrix),
}

impl Link {
    fn ports(&self) -> u8 {
        match self {
            Link::Ax(_) | Link::Cut(_) => 2,
            Link::Par | Link::Tensor => 3,
            Link::Box(_) => 4,
        }
    }

    fn symmetric(&self) -> bool {
        matches!(self, Link::Ax(_) | Link::Cut(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum End {
    Port(usize, u8),
    Conclusion(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Conclusion(usize),
    Ax(Formula),
    Cut(Formula),
    Par(u8),
    Tensor(u8),
    Box(u8, UnitaryMatrix),
    Ref(usize, u8),
}

/// Canonical form of a proof's link graph. Two proofs with approximately
/// equal signatures differ only by exchanges and rule permutations.
#[derive(Clone, Debug, PartialEq)]
pub struct NetSignature(Vec<Token>);

impl NetSignature {
    /// Exact structure, with each gate reduced to its qubit count.
    pub fn shape(&self) -> String {
        let mut s = String::new();
        for t in &self.0 {
            let _ = match t {
                Token::Conclusion(k) => write!(s, "c{k} "),
                Token::Ax(f) => write!(s, "ax:{f} "),
                Token::Cut(f) => write!(s, "cut:{f} "),
                Token::Par(p) => write!(s, "par{p} "),
                Token::Tensor(p) => write!(s, "ten{p} "),
                Token::Box(p, u) => write!(s, "q{}.{p} ", u.qubits()),
                Token::Ref(id, p) => write!(s, "r{id}.{p} "),
            };
        }
        s
    }

    /// Same shape and every gate equal entry-wise within `tol`.
    pub fn approx_eq(&self, other: &NetSignature, tol: f64) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| match (a, b) {
                (Token::Box(p, u), Token::Box(q, v)) => {
                    p == q && approx_equal(u.matrix(), v.matrix(), tol).unwrap_or(false)
                }
                _ => a == b,
            })
    }
}

struct Graph {
    links: Vec<Link>,
    wires: HashMap<End, End>,
}

impl Graph {
    fn connect(&mut self, a: End, b: End) {
        self.wires.insert(a, b);
        self.wires.insert(b, a);
    }

    fn add(&mut self, link: Link) -> usize {
        self.links.push(link);
        self.links.len() - 1
    }

    /// Adds the links of `p`; returns its dangling conclusion ends.
    fn build(&mut self, p: &Proof) -> Vec<(End, Formula)> {
        match p {
            Proof::Axiom(f) => {
                let id = self.add(Link::Ax(f.clone()));
                vec![(End::Port(id, 0), f.dual()), (End::Port(id, 1), f.clone())]
            }
            Proof::Cut { left_pos, right_pos, left, right } => {
                let mut l = self.build(left);
                let mut r = self.build(right);
                let (le, lf) = l.remove(*left_pos);
                let (re, _) = r.remove(*right_pos);
                let id = self.add(Link::Cut(lf));
                self.connect(le, End::Port(id, 0));
                self.connect(re, End::Port(id, 1));
                l.extend(r);
                l
            }
            Proof::Par { first, second, premise } => {
                let prem = self.build(premise);
                let id = self.add(Link::Par);
                let (a, b) = (prem[*first].clone(), prem[*second].clone());
                self.connect(a.0, End::Port(id, 0));
                self.connect(b.0, End::Port(id, 1));
                let mut out: Vec<_> =
                    prem.into_iter().enumerate().filter(|(k, _)| k != first && k != second).map(|(_, e)| e).collect();
                out.push((End::Port(id, 2), Formula::par(a.1, b.1)));
                out
            }
            Proof::Tensor { left_pos, right_pos, left, right } => {
                let mut l = self.build(left);
                let mut r = self.build(right);
                let a = l.remove(*left_pos);
                let b = r.remove(*right_pos);
                let id = self.add(Link::Tensor);
                self.connect(a.0, End::Port(id, 0));
                self.connect(b.0, End::Port(id, 1));
                l.extend(r);
                l.push((End::Port(id, 2), Formula::tensor(a.1, b.1)));
                l
            }
            Proof::Quantum { arity, gate, premise } => {
                let prem = self.build(premise);
                let id = self.add(Link::Box(gate.unitary().clone()));
                self.connect(prem[0].0, End::Port(id, 0));
                self.connect(prem[1].0, End::Port(id, 1));
                vec![
                    (End::Port(id, 2), prem[0].1.clone().with_prefix(Modality::Diamond, *arity)),
                    (End::Port(id, 3), prem[1].1.clone().with_prefix(Modality::Box, *arity)),
                ]
            }
            Proof::Exchange { order, premise } => {
                let prem = self.build(premise);
                order.iter().map(|&k| prem[k].clone()).collect()
            }
        }
    }
}

struct Walk<'a> {
    graph: &'a Graph,
    ids: Vec<Option<(usize, u8)>>,
    next: usize,
    out: Vec<Token>,
}

impl Walk<'_> {
    fn visit(&mut self, end: End) {
        let End::Port(link, port) = end else {
            if let End::Conclusion(k) = end {
                self.out.push(Token::Conclusion(k));
            }
            return;
        };
        let kind = &self.graph.links[link];
        if let Some((id, entered)) = self.ids[link] {
            let port = if kind.symmetric() { u8::from(port != entered) } else { port };
            self.out.push(Token::Ref(id, port));
            return;
        }
        self.ids[link] = Some((self.next, port));
        self.next += 1;
        self.out.push(match kind {
            Link::Ax(f) => Token::Ax(if port == 1 { f.clone() } else { f.dual() }),
            Link::Cut(f) => Token::Cut(if port == 0 { f.clone() } else { f.dual() }),
            Link::Par => Token::Par(port),
            Link::Tensor => Token::Tensor(port),
            Link::Box(u) => Token::Box(port, u.clone()),
        });
        for q in 0..kind.ports() {
            if q != port {
                let next = self.graph.wires[&End::Port(link, q)];
                self.visit(next);
            }
        }
    }
}

/// Signature of a well-formed proof.
pub fn net_signature(p: &Proof) -> NetSignature {
    let mut g = Graph { links: Vec::new(), wires: HashMap::new() };
    let ends = g.build(p);
    for (k, (e, _)) in ends.iter().enumerate() {
        g.connect(*e, End::Conclusion(k));
    }
    let mut w = Walk { graph: &g, ids: vec![None; g.links.len()], next: 0, out: Vec::new() };
    for (e, _) in &ends {
        w.visit(*e);
    }
    NetSignature(w.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::parse_proof;

    fn sig(s: &str) -> NetSignature {
        net_signature(&parse_proof(s).unwrap())
    }

    #[test]
    fn rule_permutation_is_invisible() {
        let t = "(tensor 3 2 (tensor 2 2 (ax a) (ax b)) (ax c))";
        let a = sig(&format!("(par 1 2 (par 3 4 {t}))"));
        let c = sig(&format!("(ex (2 1) (par 1 2 (par 1 2 {t})))"));
        assert!(a.approx_eq(&c, 1e-8));
        let unswapped = sig(&format!("(par 1 2 (par 1 2 {t}))"));
        assert!(!a.approx_eq(&unswapped, 1e-8));
    }

    #[test]
    fn axiom_orientation_is_invisible() {
        assert!(sig("(ex (2 1) (ax ~a))").approx_eq(&sig("(ax a)"), 1e-8));
        assert!(!sig("(ax ~a)").approx_eq(&sig("(ax a)"), 1e-8));
    }

    #[test]
    fn gates_compare_approximately() {
        let a = sig("(q 1 H (ax a))");
        let b = sig("(q 1 (mat [[0.7071067811865476,0.0],[0.7071067811865475,0.0]] [[0.7071067811865475,0.0],[-0.7071067811865476,0.0]]) (ax a))");
        assert!(a.approx_eq(&b, 1e-8));
        assert!(!a.approx_eq(&sig("(q 1 X (ax a))"), 1e-8));
    }
}
