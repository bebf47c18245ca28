//! Multiplicative linear logic with quantum modalities: formulas, proofs,
//! cut elimination, the token-machine semantics and circuit encoding.

pub mod circuit;
pub mod cutelim;
pub mod formula;
pub mod generate;
pub mod matrix;
pub mod proof;
pub mod qiam;
mod syntax;

pub use syntax::ParseError;
