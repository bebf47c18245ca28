//! The quantum interaction abstract machine.
//!
//! A token walks the formula occurrences of a proof carrying a context (the
//! atom it is looking at), a stack of modalities (the box doors it went
//! through) and a quantum register. A negative context moves the token up
//! toward the axioms, a positive one down toward the conclusion; axioms and
//! cuts turn it around.
//!
//! Register layout: qubit 1 is the most significant bit. The first
//! `depth(context)` qubits belong to the context's modalities, counted from
//! the hole outward; the stack follows, its top next to the context. Moving
//! symbols between the context and the stack therefore never reorders the
//! register.

mod graph;
mod reverse;
mod run;

use std::fmt;

use thiserror::Error;

use crate::formula::{Context, Polarity, Stack};
use crate::matrix::{StateVector, UnitaryMatrix};
use crate::proof::OccurrenceId;

pub use graph::OccurrenceGraph;
pub use reverse::{
    check_injective, legal_collision, predecessor_map, reachable_controls, run_backward, Collision, Predecessors,
};
pub use run::{extract_gate_sequence, run, semantics_relative, unique_negative_context, Run, SemanticsResult};

/// Occurrence, context and stack: the part of a state that drives the
/// machine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub occurrence: OccurrenceId,
    pub context: Context,
    pub stack: Stack,
}

impl Control {
    pub fn register_qubits(&self) -> usize {
        self.context.depth() + self.stack.len()
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.occurrence, self.context, self.stack)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MachineState {
    pub occurrence: OccurrenceId,
    pub context: Context,
    pub stack: Stack,
    pub register: StateVector,
}

impl MachineState {
    pub fn control(&self) -> Control {
        Control { occurrence: self.occurrence.clone(), context: self.context.clone(), stack: self.stack.clone() }
    }

    fn from_control(c: Control, register: StateVector) -> MachineState {
        MachineState { occurrence: c.occurrence, context: c.context, stack: c.stack, register }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The box's own unitary.
    Forward,
    /// Its adjoint.
    Backward,
}

/// A register update made when the token leaves a box.
#[derive(Clone, Debug, PartialEq)]
pub struct GateEvent {
    pub unitary: UnitaryMatrix,
    pub direction: Direction,
    /// Qubits before the gate's block.
    pub offset: usize,
}

impl GateEvent {
    /// The matrix actually applied to the block.
    pub fn applied(&self) -> UnitaryMatrix {
        match self.direction {
            Direction::Forward => self.unitary.clone(),
            Direction::Backward => self.unitary.adjoint(),
        }
    }
}

/// Outcome of one transition on the control part.
#[derive(Clone, Debug, PartialEq)]
pub enum ControlStep {
    Next(Control, Option<GateEvent>),
    Final,
    Stuck,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MachineStep {
    Next(MachineState, Option<GateEvent>),
    Final,
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MachineError {
    #[error("no occurrence {0}")]
    UnknownOccurrence(OccurrenceId),
    #[error("context {context} is not a {expected} context for {formula}")]
    BadContext { context: String, formula: String, expected: &'static str },
    #[error("initial stack must be empty")]
    NonEmptyStack,
    #[error("entry must be a conclusion occurrence")]
    NotConclusion,
    #[error("register has {found} qubits, state needs {expected}")]
    RegisterSize { expected: usize, found: usize },
    #[error("machine stuck at {0}")]
    Stuck(Control),
    #[error("step bound {0} exceeded")]
    BoundExceeded(u128),
    #[error("{0}")]
    Matrix(#[from] crate::matrix::MatrixError),
}

/// Polarity names used in error messages.
pub(crate) fn polarity_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Positive => "positive",
        Polarity::Negative => "negative",
    }
}

/// One transition of the full machine.
pub fn step_machine(g: &OccurrenceGraph, s: &MachineState) -> Result<MachineStep, MachineError> {
    match g.step_control(&s.control()) {
        ControlStep::Final => Ok(MachineStep::Final),
        ControlStep::Stuck => Ok(MachineStep::Stuck),
        ControlStep::Next(c, event) => {
            let register = match &event {
                Some(e) => crate::matrix::apply_at(&e.applied(), &s.register, e.offset)?,
                None => s.register.clone(),
            };
            Ok(MachineStep::Next(MachineState::from_control(c, register), event))
        }
    }
}
