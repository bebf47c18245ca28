//! Occurrence graph of a proof and the transition function over it.

use std::collections::HashMap;

use super::{Control, ControlStep, Direction, GateEvent};
use crate::formula::{Context, Formula, Modality, Polarity};
use crate::matrix::UnitaryMatrix;
use crate::proof::{NodePath, OccurrenceId, Proof, Sequent, Source, Violation};

#[derive(Clone, Debug)]
enum Rule {
    Axiom,
    Cut { left_pos: usize, right_pos: usize },
    Par { first: usize, second: usize },
    Tensor { left_pos: usize, right_pos: usize },
    Quantum { arity: usize, unitary: UnitaryMatrix },
    Exchange,
}

#[derive(Clone, Debug)]
struct Node {
    path: NodePath,
    rule: Rule,
    sequent: Sequent,
    sources: Vec<Source>,
    children: Vec<usize>,
    /// Parent index and the child slot this node fills there.
    parent: Option<(usize, usize)>,
    /// Total arity of the quantum rules strictly below this node.
    box_depth: usize,
}

/// Every formula occurrence of a proof with the links the token follows.
#[derive(Clone, Debug)]
pub struct OccurrenceGraph {
    nodes: Vec<Node>,
    index: HashMap<NodePath, usize>,
}

impl OccurrenceGraph {
    pub fn new(p: &Proof) -> Result<OccurrenceGraph, Violation> {
        p.conclusion()?;
        let mut g = OccurrenceGraph { nodes: Vec::new(), index: HashMap::new() };
        g.add(p, NodePath::root(), None, 0);
        Ok(g)
    }

    fn add(&mut self, p: &Proof, path: NodePath, parent: Option<(usize, usize)>, box_depth: usize) -> usize {
        let id = self.nodes.len();
        let rule = match p {
            Proof::Axiom(_) => Rule::Axiom,
            Proof::Cut { left_pos, right_pos, .. } => Rule::Cut { left_pos: *left_pos, right_pos: *right_pos },
            Proof::Par { first, second, .. } => Rule::Par { first: *first, second: *second },
            Proof::Tensor { left_pos, right_pos, .. } => Rule::Tensor { left_pos: *left_pos, right_pos: *right_pos },
            Proof::Quantum { arity, gate, .. } => Rule::Quantum { arity: *arity, unitary: gate.unitary().clone() },
            Proof::Exchange { .. } => Rule::Exchange,
        };
        self.nodes.push(Node {
            path: path.clone(),
            rule,
            sequent: Sequent::default(),
            sources: Vec::new(),
            children: Vec::new(),
            parent,
            box_depth,
        });
        self.index.insert(path.clone(), id);
        let inner_depth = match p {
            Proof::Quantum { arity, .. } => box_depth + arity,
            _ => box_depth,
        };
        let children: Vec<usize> = p
            .children()
            .into_iter()
            .enumerate()
            .map(|(k, c)| self.add(c, path.child(k), Some((id, k)), inner_depth))
            .collect();
        let premises: Vec<Sequent> = children.iter().map(|&c| self.nodes[c].sequent.clone()).collect();
        let refs: Vec<&Sequent> = premises.iter().collect();
        let (sequent, sources) = p.infer(&refs).expect("checked proof");
        let node = &mut self.nodes[id];
        node.sequent = sequent;
        node.sources = sources;
        node.children = children;
        id
    }

    fn node(&self, o: &OccurrenceId) -> Option<(usize, &Node)> {
        let &id = self.index.get(&o.node)?;
        let n = &self.nodes[id];
        (o.position < n.sequent.len()).then_some((id, n))
    }

    fn occ(&self, node: usize, position: usize) -> OccurrenceId {
        OccurrenceId { node: self.nodes[node].path.clone(), position }
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.nodes[0].sequent
    }

    pub fn formula(&self, o: &OccurrenceId) -> Option<&Formula> {
        self.node(o).map(|(_, n)| &n.sequent.0[o.position])
    }

    /// Every occurrence, node by node in pre-order.
    pub fn occurrences(&self) -> Vec<OccurrenceId> {
        self.nodes
            .iter()
            .flat_map(|n| (0..n.sequent.len()).map(move |k| OccurrenceId { node: n.path.clone(), position: k }))
            .collect()
    }

    /// Stack length of any reachable state at `o`: its box-nesting depth.
    pub fn expected_stack_len(&self, o: &OccurrenceId) -> Option<usize> {
        self.node(o).map(|(_, n)| n.box_depth)
    }

    pub fn is_legal(&self, c: &Control) -> bool {
        self.expected_stack_len(&c.occurrence) == Some(c.stack.len())
            && self.formula(&c.occurrence).and_then(|f| c.context.polarity_for(f)).is_some()
    }

    /// Number of legal control states; no run is longer.
    pub fn step_bound(&self) -> u128 {
        self.nodes
            .iter()
            .flat_map(|n| n.sequent.0.iter().map(move |f| (f, n.box_depth)))
            .map(|(f, d)| {
                let stacks = u32::try_from(d).ok().and_then(|d| 1u128.checked_shl(d)).unwrap_or(u128::MAX);
                (f.atom_count() as u128).saturating_mul(stacks)
            })
            .fold(0u128, u128::saturating_add)
    }

    fn premise_formula(&self, node: usize, child: usize, position: usize) -> Formula {
        self.nodes[self.nodes[node].children[child]].sequent.0[position].clone()
    }

    pub fn step_control(&self, c: &Control) -> ControlStep {
        let Some((x, node)) = self.node(&c.occurrence) else { return ControlStep::Stuck };
        let k = c.occurrence.position;
        let Some(polarity) = c.context.polarity_for(&node.sequent.0[k]) else { return ControlStep::Stuck };
        let next = |n: usize, pos: usize, context: Context, stack| {
            ControlStep::Next(Control { occurrence: self.occ(n, pos), context, stack }, None)
        };
        match polarity {
            Polarity::Negative => {
                if let Rule::Axiom = node.rule {
                    return next(x, 1 - k, c.context.dual(), c.stack.clone());
                }
                match node.sources[k] {
                    Source::Premise { child, position } => {
                        next(node.children[child], position, c.context.clone(), c.stack.clone())
                    }
                    Source::Principal => match (&node.rule, &c.context) {
                        (Rule::Par { first, .. }, Context::ParLeft(inner, _)) => {
                            next(node.children[0], *first, (**inner).clone(), c.stack.clone())
                        }
                        (Rule::Par { second, .. }, Context::ParRight(_, inner)) => {
                            next(node.children[0], *second, (**inner).clone(), c.stack.clone())
                        }
                        (Rule::Tensor { left_pos, .. }, Context::TensorLeft(inner, _)) => {
                            next(node.children[0], *left_pos, (**inner).clone(), c.stack.clone())
                        }
                        (Rule::Tensor { right_pos, .. }, Context::TensorRight(_, inner)) => {
                            next(node.children[1], *right_pos, (**inner).clone(), c.stack.clone())
                        }
                        (Rule::Quantum { arity, .. }, ctx) => {
                            let m = if k == 0 { Modality::Diamond } else { Modality::Box };
                            let Some(inner) = ctx.strip_prefix(m, *arity) else { return ControlStep::Stuck };
                            let mut stack = c.stack.clone();
                            stack.push_n(m, *arity);
                            next(node.children[0], k, inner.clone(), stack)
                        }
                        _ => ControlStep::Stuck,
                    },
                }
            }
            Polarity::Positive => {
                let Some((y, slot)) = node.parent else {
                    return if c.stack.is_empty() { ControlStep::Final } else { ControlStep::Stuck };
                };
                let parent = &self.nodes[y];
                let through = Source::Premise { child: slot, position: k };
                if let Some(pos) = parent.sources.iter().position(|s| *s == through) {
                    return next(y, pos, c.context.clone(), c.stack.clone());
                }
                let last = parent.sequent.len().saturating_sub(1);
                match &parent.rule {
                    Rule::Cut { left_pos, right_pos } => {
                        let (other, pos) = if slot == 0 { (1, *right_pos) } else { (0, *left_pos) };
                        next(parent.children[other], pos, c.context.dual(), c.stack.clone())
                    }
                    Rule::Par { first, second } => {
                        let ctx = if k == *first {
                            Context::ParLeft(Box::new(c.context.clone()), self.premise_formula(y, 0, *second))
                        } else {
                            Context::ParRight(self.premise_formula(y, 0, *first), Box::new(c.context.clone()))
                        };
                        next(y, last, ctx, c.stack.clone())
                    }
                    Rule::Tensor { left_pos, right_pos } => {
                        let ctx = if slot == 0 {
                            Context::TensorLeft(Box::new(c.context.clone()), self.premise_formula(y, 1, *right_pos))
                        } else {
                            Context::TensorRight(self.premise_formula(y, 0, *left_pos), Box::new(c.context.clone()))
                        };
                        next(y, last, ctx, c.stack.clone())
                    }
                    Rule::Quantum { arity, unitary } => {
                        let Some(block) = c.stack.top_block(*arity) else { return ControlStep::Stuck };
                        let mut stack = c.stack.clone();
                        stack.pop_n(*arity);
                        let offset = c.context.depth();
                        let (modality, direction) = if k == 0 {
                            (Modality::Diamond, (block == Modality::Box).then_some(Direction::Backward))
                        } else {
                            (Modality::Box, (block == Modality::Diamond).then_some(Direction::Forward))
                        };
                        let event =
                            direction.map(|direction| GateEvent { unitary: unitary.clone(), direction, offset });
                        let context = c.context.clone().with_prefix(modality, *arity);
                        ControlStep::Next(Control { occurrence: self.occ(y, k), context, stack }, event)
                    }
                    Rule::Axiom | Rule::Exchange => ControlStep::Stuck,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Stack;
    use crate::proof::parse_proof;

    fn start(g: &OccurrenceGraph, position: usize, ctx: &str) -> Control {
        let c = Control {
            occurrence: OccurrenceId { node: NodePath::root(), position },
            context: ctx.parse().unwrap(),
            stack: Stack::new(),
        };
        assert!(g.is_legal(&c));
        c
    }

    #[test]
    fn axiom_turns_around() {
        let g = OccurrenceGraph::new(&parse_proof("(ax a)").unwrap()).unwrap();
        let c = start(&g, 0, "[.]");
        let ControlStep::Next(d, None) = g.step_control(&c) else { panic!() };
        assert_eq!(d.occurrence.position, 1);
        assert_eq!(g.step_control(&d), ControlStep::Final);
    }

    #[test]
    fn box_entry_pushes_and_exit_applies() {
        let g = OccurrenceGraph::new(&parse_proof("(q 1 H (ax a))").unwrap()).unwrap();
        let c = start(&g, 0, "<>[.]");
        let ControlStep::Next(d, None) = g.step_control(&c) else { panic!() };
        assert_eq!(d.stack.to_string(), "<>");
        assert_eq!(d.context, Context::Hole);
        assert_eq!(g.expected_stack_len(&d.occurrence), Some(1));
        let ControlStep::Next(e, None) = g.step_control(&d) else { panic!() };
        let ControlStep::Next(f, Some(ev)) = g.step_control(&e) else { panic!() };
        assert_eq!(ev.offset, 0);
        assert_eq!(ev.direction, Direction::Forward);
        assert_eq!(f.context.to_string(), "[][.]");
        assert!(f.stack.is_empty());
        assert_eq!(g.step_control(&f), ControlStep::Final);
    }

    #[test]
    fn cut_routes_to_dual() {
        let g = OccurrenceGraph::new(&parse_proof("(cut 2 1 (ax a) (ax a))").unwrap()).unwrap();
        let c = start(&g, 0, "[.]");
        let mut cur = c;
        let mut visited = vec![cur.occurrence.to_string()];
        while let ControlStep::Next(n, _) = g.step_control(&cur) {
            visited.push(n.occurrence.to_string());
            cur = n;
        }
        assert_eq!(visited, ["root#1", "root/0#1", "root/0#2", "root/1#1", "root/1#2", "root#2"]);
    }

    #[test]
    fn illegal_stack_is_stuck() {
        let g = OccurrenceGraph::new(&parse_proof("(ax a)").unwrap()).unwrap();
        let mut c = start(&g, 1, "[.]");
        c.stack.push_n(Modality::Box, 1);
        assert!(!g.is_legal(&c));
        assert_eq!(g.step_control(&c), ControlStep::Stuck);
    }
}
