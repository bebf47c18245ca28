//! S-expression syntax for proofs.
//!
//! ```text
//! P ::= (ax F) | (cut i j P P) | (par i j P) | (tensor i j P P)
//!     | (q n G P) | (ex (k ...) P)
//! G ::= NAME | (mat ROW ...)      ROW ::= [[re,im], ...]
//! ```
//!
//! Positions are 1-based. `;` starts a comment running to the end of the line.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Proof, Violation};
use crate::matrix::{ComplexMatrix, Gate, GateName, MatrixError, UnitaryMatrix, C64};
use crate::syntax::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProofParseError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("gate matrix at byte {position}: {source}")]
    Gate { position: usize, source: MatrixError },
    #[error("ill-formed proof {0}")]
    Invalid(Violation),
}

/// Parses and checks a proof.
pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let p = parse_proof_unchecked(text)?;
    p.conclusion().map_err(ProofParseError::Invalid)?;
    Ok(p)
}

/// Parses a proof without running the rule checker.
pub fn parse_proof_unchecked(text: &str) -> Result<Proof, ProofParseError> {
    let cleaned = strip_comments(text);
    let mut c = Cursor::new(&cleaned);
    let p = proof(&mut c)?;
    c.expect_end()?;
    Ok(p)
}

fn strip_comments(text: &str) -> String {
    // Comment bytes become spaces so error positions refer to the original text.
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    for ch in text.chars() {
        match ch {
            ';' => in_comment = true,
            '\n' => in_comment = false,
            _ => {}
        }
        if in_comment {
            out.extend(std::iter::repeat_n(' ', ch.len_utf8()));
        } else {
            out.push(ch);
        }
    }
    out
}

fn position(c: &mut Cursor<'_>) -> Result<usize, ParseError> {
    let n = c.natural()?;
    if n == 0 {
        return c.error("positions are 1-based");
    }
    Ok(n - 1)
}

fn proof(c: &mut Cursor<'_>) -> Result<Proof, ProofParseError> {
    c.expect("(")?;
    let head_at = c.position();
    let head = c.ident()?;
    let p = match head.as_str() {
        "ax" => Proof::axiom(c.formula()?),
        "cut" => {
            let (i, j) = (position(c)?, position(c)?);
            Proof::cut(i, j, proof(c)?, proof(c)?)
        }
        "par" => {
            let (i, j) = (position(c)?, position(c)?);
            Proof::par(i, j, proof(c)?)
        }
        "tensor" => {
            let (i, j) = (position(c)?, position(c)?);
            Proof::tensor(i, j, proof(c)?, proof(c)?)
        }
        "q" => {
            let n = c.natural()?;
            let g = gate(c)?;
            Proof::quantum(n, g, proof(c)?)
        }
        "ex" => {
            c.expect("(")?;
            let mut order = Vec::new();
            while !c.eat(")") {
                order.push(position(c)?);
            }
            Proof::Exchange { order, premise: Box::new(proof(c)?) }
        }
        other => return Err(ParseError { position: head_at, message: format!("unknown rule `{other}`") }.into()),
    };
    c.expect(")")?;
    Ok(p)
}

fn gate(c: &mut Cursor<'_>) -> Result<Gate, ProofParseError> {
    let start = c.position();
    if !c.eat("(") {
        let name = c.ident()?;
        return GateName::parse(&name)
            .map(Gate::named)
            .ok_or_else(|| ParseError { position: start, message: format!("unknown gate `{name}`") }.into());
    }
    c.expect("mat")?;
    let mut rows = Vec::new();
    while !c.eat(")") {
        c.expect("[")?;
        let mut row = Vec::new();
        loop {
            c.expect("[")?;
            let re = c.number()?;
            c.expect(",")?;
            let im = c.number()?;
            c.expect("]")?;
            row.push(C64::new(re, im));
            if !c.eat(",") {
                break;
            }
        }
        c.expect("]")?;
        rows.push(row);
    }
    let err = |source| ProofParseError::Gate { position: start, source };
    let m = ComplexMatrix::from_rows(rows).map_err(err)?;
    Ok(Gate::raw(UnitaryMatrix::new(m).map_err(err)?))
}

pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_proof(&mut out, p);
    out
}

fn write_proof(out: &mut String, p: &Proof) {
    match p {
        Proof::Axiom(f) => {
            let _ = write!(out, "(ax {f})");
        }
        Proof::Cut { left_pos, right_pos, left, right } => {
            let _ = write!(out, "(cut {} {} ", left_pos + 1, right_pos + 1);
            write_proof(out, left);
            out.push(' ');
            write_proof(out, right);
            out.push(')');
        }
        Proof::Par { first, second, premise } => {
            let _ = write!(out, "(par {} {} ", first + 1, second + 1);
            write_proof(out, premise);
            out.push(')');
        }
        Proof::Tensor { left_pos, right_pos, left, right } => {
            let _ = write!(out, "(tensor {} {} ", left_pos + 1, right_pos + 1);
            write_proof(out, left);
            out.push(' ');
            write_proof(out, right);
            out.push(')');
        }
        Proof::Quantum { arity, gate, premise } => {
            let _ = write!(out, "(q {arity} ");
            write_gate(out, gate);
            out.push(' ');
            write_proof(out, premise);
            out.push(')');
        }
        Proof::Exchange { order, premise } => {
            let ks: Vec<String> = order.iter().map(|k| (k + 1).to_string()).collect();
            let _ = write!(out, "(ex ({}) ", ks.join(" "));
            write_proof(out, premise);
            out.push(')');
        }
    }
}

fn write_gate(out: &mut String, g: &Gate) {
    if let Some(name) = g.name() {
        let _ = write!(out, "{name}");
        return;
    }
    out.push_str("(mat");
    for row in g.unitary().matrix().row_vecs() {
        let cells: Vec<String> = row.iter().map(|z| format!("[{:?},{:?}]", z.re, z.im)).collect();
        let _ = write!(out, " [{}]", cells.join(","));
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::ViolationKind;

    #[test]
    fn round_trip_named() {
        for src in [
            "(q 3 I3 (ax a))",
            "(q 1 I1 (q 1 H (q 1 I1 (ax a))))",
            "(cut 2 1 (cut 2 1 (q 1 I1 (q 1 H (ax a))) (q 1 X (q 1 Z (ax a)))) (q 2 CNOT (ax a)))",
            "(par 2 1 (par 1 2 (tensor 2 2 (ax a) (ax a))))",
            "(ex (2 1) (ax ([]a % b)))",
        ] {
            let p = parse_proof(src).unwrap();
            assert_eq!(print_proof(&p), src);
        }
    }

    #[test]
    fn round_trip_matrix_gate() {
        let src = "(q 1 (mat [[0.0,0.0],[0.0,-1.0]] [[0.0,1.0],[0.0,0.0]]) (ax a))";
        let p = parse_proof(src).unwrap();
        assert_eq!(print_proof(&p), src);
        assert_eq!(parse_proof(&print_proof(&p)).unwrap(), p);
    }

    #[test]
    fn comments_and_whitespace() {
        let p = parse_proof("; identity\n(q 1   H\n  (ax a)) ; done").unwrap();
        assert_eq!(print_proof(&p), "(q 1 H (ax a))");
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_proof("(foo a)"), Err(ProofParseError::Syntax(_))));
        assert!(matches!(parse_proof("(par 0 1 (ax a))"), Err(ProofParseError::Syntax(_))));
        assert!(matches!(parse_proof("(q 1 NOPE (ax a))"), Err(ProofParseError::Syntax(_))));
        assert!(matches!(
            parse_proof("(q 1 (mat [[1,0],[1,0]] [[0,0],[1,0]]) (ax a))"),
            Err(ProofParseError::Gate { source: MatrixError::NotUnitary(_), .. })
        ));
        match parse_proof("(q 2 H (ax a))") {
            Err(ProofParseError::Invalid(v)) => assert!(matches!(v.kind, ViolationKind::GateDimension { .. })),
            other => panic!("{other:?}"),
        }
        assert!(parse_proof_unchecked("(q 2 H (ax a))").is_ok());
    }
}
