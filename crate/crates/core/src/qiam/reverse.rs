//! Exhaustive inversion of the transition function over legal states.

use std::collections::{HashMap, HashSet};

use super::{Control, ControlStep, GateEvent, MachineError, MachineState, OccurrenceGraph};
use crate::formula::{Modality, Polarity, Stack};
use crate::matrix::apply_at;
use crate::proof::{NodePath, OccurrenceId};

/// Each state's predecessor and the event of the step between them.
pub type Predecessors = HashMap<Control, (Control, Option<GateEvent>)>;

/// Two states with the same successor.
#[derive(Clone, Debug, PartialEq)]
pub struct Collision {
    pub first: Control,
    pub second: Control,
}

/// Every control state whose stack length matches its occurrence's
/// box-nesting depth.
fn legal_controls(g: &OccurrenceGraph) -> Vec<Control> {
    let mut out = Vec::new();
    for o in g.occurrences() {
        let (Some(f), Some(d)) = (g.formula(&o), g.expected_stack_len(&o)) else { continue };
        for (context, _) in f.contexts() {
            for bits in 0..(1usize << d) {
                let symbols =
                    (0..d).map(|i| if bits >> i & 1 == 1 { Modality::Box } else { Modality::Diamond }).collect();
                out.push(Control {
                    occurrence: o.clone(),
                    context: context.clone(),
                    stack: Stack::from_symbols(symbols),
                });
            }
        }
    }
    out
}

/// Control states visited by some run from an initial state.
pub fn reachable_controls(g: &OccurrenceGraph) -> Vec<Control> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (position, f) in g.conclusion().0.iter().enumerate() {
        for (context, polarity) in f.contexts() {
            if polarity != Polarity::Negative {
                continue;
            }
            let mut c =
                Control { occurrence: OccurrenceId { node: NodePath::root(), position }, context, stack: Stack::new() };
            while seen.insert(c.clone()) {
                out.push(c.clone());
                match g.step_control(&c) {
                    ControlStep::Next(d, _) => c = d,
                    ControlStep::Final | ControlStep::Stuck => break,
                }
            }
        }
    }
    out
}

fn invert(g: &OccurrenceGraph, controls: Vec<Control>) -> Result<Predecessors, Box<Collision>> {
    let mut map = Predecessors::new();
    for c in controls {
        if let ControlStep::Next(d, e) = g.step_control(&c) {
            if let Some((prev, _)) = map.get(&d) {
                return Err(Box::new(Collision { first: prev.clone(), second: c }));
            }
            map.insert(d, (c, e));
        }
    }
    Ok(map)
}

/// Maps each successor of a reachable state back to that state and the
/// event of the transition. Fails with two colliding states if runs from
/// different states merge.
///
/// Over all legal states the map is not injective: leaving a box on its
/// box side forgets whether the stack block was made of boxes or diamonds.
pub fn predecessor_map(g: &OccurrenceGraph) -> Result<Predecessors, Box<Collision>> {
    invert(g, reachable_controls(g))
}

/// Whether no two reachable states share a successor.
pub fn check_injective(g: &OccurrenceGraph) -> Result<(), Box<Collision>> {
    predecessor_map(g).map(|_| ())
}

/// First pair of legal states sharing a successor, if any.
pub fn legal_collision(g: &OccurrenceGraph) -> Option<Collision> {
    invert(g, legal_controls(g)).err().map(|c| *c)
}

/// Walks back from `end` to the state with no predecessor, undoing every
/// register update.
pub fn run_backward(preds: &Predecessors, end: &MachineState) -> Result<MachineState, MachineError> {
    let mut control = end.control();
    let mut register = end.register.clone();
    let mut guard = preds.len() + 1;
    while let Some((prev, event)) = preds.get(&control) {
        if let Some(e) = event {
            register = apply_at(&e.applied().adjoint(), &register, e.offset)?;
        }
        control = prev.clone();
        guard -= 1;
        if guard == 0 {
            return Err(MachineError::BoundExceeded(preds.len() as u128));
        }
    }
    Ok(MachineState { occurrence: control.occurrence, context: control.context, stack: control.stack, register })
}
