//! Runs from initial states, relative semantics and gate extraction.

use super::{polarity_name, Control, ControlStep, GateEvent, MachineError, MachineState, MachineStep, OccurrenceGraph};
use crate::formula::{Context, Formula, Polarity, Stack};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::proof::{NodePath, OccurrenceId, Proof};

#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub final_state: MachineState,
    pub events: Vec<GateEvent>,
    pub steps: usize,
}

fn initial_control(g: &OccurrenceGraph, c: &Control) -> Result<(), MachineError> {
    if c.occurrence.node != NodePath::root() {
        return Err(MachineError::NotConclusion);
    }
    let f = g.formula(&c.occurrence).ok_or_else(|| MachineError::UnknownOccurrence(c.occurrence.clone()))?;
    if c.context.polarity_for(f) != Some(Polarity::Negative) {
        return Err(MachineError::BadContext {
            context: c.context.to_string(),
            formula: f.to_string(),
            expected: polarity_name(Polarity::Negative),
        });
    }
    if !c.stack.is_empty() {
        return Err(MachineError::NonEmptyStack);
    }
    Ok(())
}

/// Runs the control part alone from an initial state, collecting the gate
/// events in order.
fn run_control(g: &OccurrenceGraph, start: Control) -> Result<(Control, Vec<GateEvent>, usize), MachineError> {
    initial_control(g, &start)?;
    let bound = g.step_bound();
    let mut c = start;
    let mut events = Vec::new();
    let mut steps = 0usize;
    loop {
        match g.step_control(&c) {
            ControlStep::Final => return Ok((c, events, steps)),
            ControlStep::Stuck => return Err(MachineError::Stuck(c)),
            ControlStep::Next(next, event) => {
                steps += 1;
                if steps as u128 > bound {
                    return Err(MachineError::BoundExceeded(bound));
                }
                events.extend(event);
                c = next;
            }
        }
    }
}

/// Runs the machine from an initial state to its final state. `observe` sees
/// every state after the initial one with the event that produced it.
pub fn run(
    g: &OccurrenceGraph,
    initial: MachineState,
    mut observe: impl FnMut(&MachineState, Option<&GateEvent>),
) -> Result<Run, MachineError> {
    initial_control(g, &initial.control())?;
    let expected = initial.context.depth();
    if initial.register.qubits() != expected {
        return Err(MachineError::RegisterSize { expected, found: initial.register.qubits() });
    }
    let bound = g.step_bound();
    let mut s = initial;
    let mut events = Vec::new();
    let mut steps = 0usize;
    loop {
        match super::step_machine(g, &s)? {
            MachineStep::Final => return Ok(Run { final_state: s, events, steps }),
            MachineStep::Stuck => return Err(MachineError::Stuck(s.control())),
            MachineStep::Next(next, event) => {
                steps += 1;
                if steps as u128 > bound {
                    return Err(MachineError::BoundExceeded(bound));
                }
                observe(&next, event.as_ref());
                events.extend(event);
                s = next;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemanticsResult {
    pub entry: OccurrenceId,
    pub entry_context: Context,
    pub exit: OccurrenceId,
    pub exit_context: Context,
    pub unitary: UnitaryMatrix,
}

fn entry_control(p: &Proof, entry: usize, n: &Context) -> Result<(OccurrenceGraph, Control), MachineError> {
    let g = OccurrenceGraph::new(p).map_err(|v| MachineError::BadContext {
        context: n.to_string(),
        formula: format!("an ill-formed proof ({v})"),
        expected: polarity_name(Polarity::Negative),
    })?;
    let c = Control {
        occurrence: OccurrenceId { node: NodePath::root(), position: entry },
        context: n.clone(),
        stack: Stack::new(),
    };
    Ok((g, c))
}

/// The unitary computed by `p` for a token entering at conclusion
/// occurrence `entry` with negative context `n`, obtained by composing the
/// gate events of a symbolic run.
pub fn semantics_relative(p: &Proof, entry: usize, n: &Context) -> Result<SemanticsResult, MachineError> {
    let (g, start) = entry_control(p, entry, n)?;
    let (exit, events, _) = run_control(&g, start.clone())?;
    let mut m = ComplexMatrix::identity(1 << n.depth());
    for e in &events {
        e.applied().apply_to_columns(&mut m, e.offset)?;
    }
    Ok(SemanticsResult {
        entry: start.occurrence,
        entry_context: start.context,
        exit: exit.occurrence,
        exit_context: exit.context,
        unitary: UnitaryMatrix::new(m)?,
    })
}

/// Gates applied along the run, in order, with their offsets.
pub fn extract_gate_sequence(
    p: &Proof,
    entry: usize,
    n: &Context,
) -> Result<Vec<(UnitaryMatrix, usize)>, MachineError> {
    let (g, start) = entry_control(p, entry, n)?;
    let (_, events, _) = run_control(&g, start)?;
    Ok(events.iter().map(|e| (e.applied(), e.offset)).collect())
}

/// The only negative context of `f`, when it has exactly one.
pub fn unique_negative_context(f: &Formula) -> Option<Context> {
    let mut negatives = f.contexts().into_iter().filter(|(_, p)| *p == Polarity::Negative);
    match (negatives.next(), negatives.next()) {
        (Some((c, _)), None) => Some(c),
        _ => None,
    }
}
