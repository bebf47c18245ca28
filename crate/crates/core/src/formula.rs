//! Formulas, one-hole contexts and traversal stacks.
//!
//! Concrete syntax:
//!
//! ```text
//! F ::= ident | "~" ident | "(" F "%" F ")" | "(" F "*" F ")" | "[]" F | "<>" F
//! ```
//!
//! Contexts use the same syntax with `[.]` standing for the hole.

use std::fmt;
use std::str::FromStr;

use crate::syntax::{Cursor, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// The two quantum modalities. `Box` is written `[]`, `Diamond` is `<>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Box,
    Diamond,
}

impl Modality {
    pub fn dual(self) -> Modality {
        match self {
            Modality::Box => Modality::Diamond,
            Modality::Diamond => Modality::Box,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Modality::Box => "[]",
            Modality::Diamond => "<>",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: String,
    pub polarity: Polarity,
}

impl Atom {
    pub fn positive(name: impl Into<String>) -> Atom {
        Atom { name: name.into(), polarity: Polarity::Positive }
    }

    pub fn negative(name: impl Into<String>) -> Atom {
        Atom { name: name.into(), polarity: Polarity::Negative }
    }

    pub fn dual(&self) -> Atom {
        Atom { name: self.name.clone(), polarity: self.polarity.flip() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Par(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    Modal(Modality, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::positive(name))
    }

    pub fn co_atom(name: &str) -> Formula {
        Formula::Atom(Atom::negative(name))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Modal(Modality::Box, Box::new(a))
    }

    pub fn diamond(a: Formula) -> Formula {
        Formula::Modal(Modality::Diamond, Box::new(a))
    }

    /// Wraps `self` in `n` copies of `modality`.
    pub fn with_prefix(self, modality: Modality, n: usize) -> Formula {
        (0..n).fold(self, |f, _| Formula::Modal(modality, Box::new(f)))
    }

    /// Linear negation (De Morgan dual).
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.dual()),
            Formula::Par(a, b) => Formula::tensor(a.dual(), b.dual()),
            Formula::Tensor(a, b) => Formula::par(a.dual(), b.dual()),
            Formula::Modal(m, a) => Formula::Modal(m.dual(), Box::new(a.dual())),
        }
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Modal(..))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Par(a, b) | Formula::Tensor(a, b) => 1 + a.size() + b.size(),
            Formula::Modal(_, a) => 1 + a.size(),
        }
    }

    /// Length of the leading run of modalities, of any kind.
    pub fn modal_prefix_len(&self) -> usize {
        match self {
            Formula::Modal(_, a) => 1 + a.modal_prefix_len(),
            _ => 0,
        }
    }

    /// Length of the leading run of `modality` only.
    pub fn uniform_prefix_len(&self, modality: Modality) -> usize {
        match self {
            Formula::Modal(m, a) if *m == modality => 1 + a.uniform_prefix_len(modality),
            _ => 0,
        }
    }

    /// Removes `n` leading modalities, all of which must be `modality`.
    pub fn strip_prefix(&self, modality: Modality, n: usize) -> Option<&Formula> {
        let mut f = self;
        for _ in 0..n {
            match f {
                Formula::Modal(m, a) if *m == modality => f = a,
                _ => return None,
            }
        }
        Some(f)
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Par(a, b) | Formula::Tensor(a, b) => a.atom_count() + b.atom_count(),
            Formula::Modal(_, a) => a.atom_count(),
        }
    }

    /// Every atom occurrence of `self`, left to right, as a context with its
    /// polarity. Substituting the atom back into the context yields `self`.
    pub fn contexts(&self) -> Vec<(Context, Polarity)> {
        match self {
            Formula::Atom(a) => vec![(Context::Hole, a.polarity)],
            Formula::Par(a, b) => {
                let mut out: Vec<_> =
                    a.contexts().into_iter().map(|(c, p)| (Context::ParLeft(Box::new(c), (**b).clone()), p)).collect();
                out.extend(b.contexts().into_iter().map(|(c, p)| (Context::ParRight((**a).clone(), Box::new(c)), p)));
                out
            }
            Formula::Tensor(a, b) => {
                let mut out: Vec<_> = a
                    .contexts()
                    .into_iter()
                    .map(|(c, p)| (Context::TensorLeft(Box::new(c), (**b).clone()), p))
                    .collect();
                out.extend(
                    b.contexts().into_iter().map(|(c, p)| (Context::TensorRight((**a).clone(), Box::new(c)), p)),
                );
                out
            }
            Formula::Modal(m, a) => {
                a.contexts().into_iter().map(|(c, p)| (Context::Modal(*m, Box::new(c)), p)).collect()
            }
        }
    }

    /// The atom found by following `path` from the root, if it ends on one.
    pub fn atom_at(&self, path: &[HoleStep]) -> Option<&Atom> {
        match (self, path.split_first()) {
            (Formula::Atom(a), None) => Some(a),
            (Formula::Par(a, _), Some((HoleStep::Left, rest)))
            | (Formula::Tensor(a, _), Some((HoleStep::Left, rest))) => a.atom_at(rest),
            (Formula::Par(_, b), Some((HoleStep::Right, rest)))
            | (Formula::Tensor(_, b), Some((HoleStep::Right, rest))) => b.atom_at(rest),
            (Formula::Modal(_, a), Some((HoleStep::Modal, rest))) => a.atom_at(rest),
            _ => None,
        }
    }

    /// Builds the context of `self` whose hole sits at `path`. The path must
    /// end on an atom.
    pub fn context_at(&self, path: &[HoleStep]) -> Option<Context> {
        match (self, path.split_first()) {
            (Formula::Atom(_), None) => Some(Context::Hole),
            (Formula::Par(a, b), Some((HoleStep::Left, rest))) => {
                Some(Context::ParLeft(Box::new(a.context_at(rest)?), (**b).clone()))
            }
            (Formula::Par(a, b), Some((HoleStep::Right, rest))) => {
                Some(Context::ParRight((**a).clone(), Box::new(b.context_at(rest)?)))
            }
            (Formula::Tensor(a, b), Some((HoleStep::Left, rest))) => {
                Some(Context::TensorLeft(Box::new(a.context_at(rest)?), (**b).clone()))
            }
            (Formula::Tensor(a, b), Some((HoleStep::Right, rest))) => {
                Some(Context::TensorRight((**a).clone(), Box::new(b.context_at(rest)?)))
            }
            (Formula::Modal(m, a), Some((HoleStep::Modal, rest))) => {
                Some(Context::Modal(*m, Box::new(a.context_at(rest)?)))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Par(a, b) => write!(f, "({a} % {b})"),
            Formula::Tensor(a, b) => write!(f, "({a} * {b})"),
            Formula::Modal(m, a) => write!(f, "{}{a}", m.symbol()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "{}", self.name),
            Polarity::Negative => write!(f, "~{}", self.name),
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut cursor = Cursor::new(text);
    let f = cursor.formula()?;
    cursor.expect_end()?;
    Ok(f)
}

/// One step along the path from a formula's root to the hole of a context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HoleStep {
    Left,
    Right,
    Modal,
}

impl HoleStep {
    pub fn letter(self) -> char {
        match self {
            HoleStep::Left => 'L',
            HoleStep::Right => 'R',
            HoleStep::Modal => 'M',
        }
    }
}

/// A formula with exactly one hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Hole,
    ParLeft(Box<Context>, Formula),
    ParRight(Formula, Box<Context>),
    TensorLeft(Box<Context>, Formula),
    TensorRight(Formula, Box<Context>),
    Modal(Modality, Box<Context>),
}

impl Context {
    /// Number of modalities enclosing the hole.
    pub fn depth(&self) -> usize {
        match self {
            Context::Hole => 0,
            Context::ParLeft(c, _)
            | Context::ParRight(_, c)
            | Context::TensorLeft(c, _)
            | Context::TensorRight(_, c) => c.depth(),
            Context::Modal(_, c) => 1 + c.depth(),
        }
    }

    pub fn subst(&self, a: &Formula) -> Formula {
        match self {
            Context::Hole => a.clone(),
            Context::ParLeft(c, b) => Formula::par(c.subst(a), b.clone()),
            Context::ParRight(b, c) => Formula::par(b.clone(), c.subst(a)),
            Context::TensorLeft(c, b) => Formula::tensor(c.subst(a), b.clone()),
            Context::TensorRight(b, c) => Formula::tensor(b.clone(), c.subst(a)),
            Context::Modal(m, c) => Formula::Modal(*m, Box::new(c.subst(a))),
        }
    }

    pub fn dual(&self) -> Context {
        match self {
            Context::Hole => Context::Hole,
            Context::ParLeft(c, b) => Context::TensorLeft(Box::new(c.dual()), b.dual()),
            Context::ParRight(b, c) => Context::TensorRight(b.dual(), Box::new(c.dual())),
            Context::TensorLeft(c, b) => Context::ParLeft(Box::new(c.dual()), b.dual()),
            Context::TensorRight(b, c) => Context::ParRight(b.dual(), Box::new(c.dual())),
            Context::Modal(m, c) => Context::Modal(m.dual(), Box::new(c.dual())),
        }
    }

    /// Polarity of this context relative to `f`: positive when `f` is the
    /// context filled with a positive atom, negative for a co-atom, `None`
    /// when the context is not a context for `f` at all.
    pub fn polarity_for(&self, f: &Formula) -> Option<Polarity> {
        match (self, f) {
            (Context::Hole, Formula::Atom(a)) => Some(a.polarity),
            (Context::ParLeft(c, b), Formula::Par(x, y)) | (Context::TensorLeft(c, b), Formula::Tensor(x, y))
                if **y == *b =>
            {
                c.polarity_for(x)
            }
            (Context::ParRight(b, c), Formula::Par(x, y)) | (Context::TensorRight(b, c), Formula::Tensor(x, y))
                if **x == *b =>
            {
                c.polarity_for(y)
            }
            (Context::Modal(m, c), Formula::Modal(n, x)) if m == n => c.polarity_for(x),
            _ => None,
        }
    }

    pub fn path(&self) -> Vec<HoleStep> {
        let mut out = Vec::new();
        let mut c = self;
        loop {
            match c {
                Context::Hole => return out,
                Context::ParLeft(inner, _) | Context::TensorLeft(inner, _) => {
                    out.push(HoleStep::Left);
                    c = inner;
                }
                Context::ParRight(_, inner) | Context::TensorRight(_, inner) => {
                    out.push(HoleStep::Right);
                    c = inner;
                }
                Context::Modal(_, inner) => {
                    out.push(HoleStep::Modal);
                    c = inner;
                }
            }
        }
    }

    /// Wraps `self` in `n` modalities.
    pub fn with_prefix(self, modality: Modality, n: usize) -> Context {
        (0..n).fold(self, |c, _| Context::Modal(modality, Box::new(c)))
    }

    /// Removes `n` leading `modality` layers.
    pub fn strip_prefix(&self, modality: Modality, n: usize) -> Option<&Context> {
        let mut c = self;
        for _ in 0..n {
            match c {
                Context::Modal(m, inner) if *m == modality => c = inner,
                _ => return None,
            }
        }
        Some(c)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Hole => write!(f, "[.]"),
            Context::ParLeft(c, b) => write!(f, "({c} % {b})"),
            Context::ParRight(b, c) => write!(f, "({b} % {c})"),
            Context::TensorLeft(c, b) => write!(f, "({c} * {b})"),
            Context::TensorRight(b, c) => write!(f, "({b} * {c})"),
            Context::Modal(m, c) => write!(f, "{}{c}", m.symbol()),
        }
    }
}

impl FromStr for Context {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = Cursor::new(s);
        let c = cursor.context()?;
        cursor.expect_end()?;
        Ok(c)
    }
}

/// Traversal stack over `{box, diamond}`; the last element is the top.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Stack(Vec<Modality>);

impl Stack {
    pub fn new() -> Stack {
        Stack(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push_n(&mut self, modality: Modality, n: usize) {
        self.0.extend(std::iter::repeat_n(modality, n));
    }

    /// The modality shared by the top `n` symbols, if they agree.
    pub fn top_block(&self, n: usize) -> Option<Modality> {
        if n == 0 || self.0.len() < n {
            return None;
        }
        let top = &self.0[self.0.len() - n..];
        let first = top[0];
        top.iter().all(|m| *m == first).then_some(first)
    }

    pub fn pop_n(&mut self, n: usize) {
        let keep = self.0.len().saturating_sub(n);
        self.0.truncate(keep);
    }

    pub fn symbols(&self) -> &[Modality] {
        &self.0
    }

    pub fn from_symbols(symbols: Vec<Modality>) -> Stack {
        Stack(symbols)
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for m in &self.0 {
            write!(f, "{}", m.symbol())?;
        }
        Ok(())
    }
}
