//! Axiom-link matrices of cut-free multiplicative proofs.

use thiserror::Error;

use super::{NodePath, Proof, Source, Violation};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MllError {
    #[error("proof contains a cut at {0}")]
    Cut(NodePath),
    #[error("proof contains a quantum rule at {0}")]
    Quantum(NodePath),
    #[error("non-atomic axiom at {0}")]
    NonAtomicAxiom(NodePath),
    #[error("ill-formed proof {0}")]
    Invalid(Violation),
}

/// Axiom end: the leaf's pre-order index and which of its two formulas.
type End = (usize, usize);

/// Adjacency matrix of axiom links over the atom occurrences of the
/// conclusion, read left to right.
pub fn mll_axiom_link_matrix(p: &Proof) -> Result<ComplexMatrix, MllError> {
    p.conclusion().map_err(MllError::Invalid)?;
    let mut leaves = 0;
    let occurrences = ends(p, &mut Vec::new(), &mut leaves)?;
    let order: Vec<End> = occurrences.into_iter().flatten().collect();
    let n = order.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, a) in order.iter().enumerate() {
        for (j, b) in order.iter().enumerate() {
            if a.0 == b.0 && a.1 != b.1 {
                m.set(i, j, 1.0.into());
            }
        }
    }
    Ok(m)
}

/// For each conclusion occurrence, the axiom ends of its atoms in order.
fn ends(p: &Proof, here: &mut Vec<usize>, leaves: &mut usize) -> Result<Vec<Vec<End>>, MllError> {
    let path = NodePath(here.clone());
    match p {
        Proof::Cut { .. } => return Err(MllError::Cut(path)),
        Proof::Quantum { .. } => return Err(MllError::Quantum(path)),
        Proof::Axiom(f) => {
            if !f.is_atomic() {
                return Err(MllError::NonAtomicAxiom(path));
            }
            let id = *leaves;
            *leaves += 1;
            return Ok(vec![vec![(id, 0)], vec![(id, 1)]]);
        }
        _ => {}
    }
    let mut premise_ends = Vec::new();
    let mut premise_seqs = Vec::new();
    for (k, c) in p.children().into_iter().enumerate() {
        here.push(k);
        premise_ends.push(ends(c, here, leaves)?);
        premise_seqs.push(c.conclusion().map_err(MllError::Invalid)?);
        here.pop();
    }
    let refs: Vec<_> = premise_seqs.iter().collect();
    let (_, sources) = p.infer(&refs).map_err(|kind| MllError::Invalid(Violation { path, kind }))?;
    let principal = match p {
        Proof::Par { first, second, .. } => {
            [premise_ends[0][*first].clone(), premise_ends[0][*second].clone()].concat()
        }
        Proof::Tensor { left_pos, right_pos, .. } => {
            [premise_ends[0][*left_pos].clone(), premise_ends[1][*right_pos].clone()].concat()
        }
        _ => Vec::new(),
    };
    Ok(sources
        .into_iter()
        .map(|s| match s {
            Source::Principal => principal.clone(),
            Source::Premise { child, position } => premise_ends[child][position].clone(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::parse_proof;

    fn ints(m: &ComplexMatrix) -> Vec<Vec<i32>> {
        m.row_vecs().iter().map(|r| r.iter().map(|z| z.re as i32).collect()).collect()
    }

    #[test]
    fn single_axiom() {
        let m = mll_axiom_link_matrix(&parse_proof("(ax a)").unwrap()).unwrap();
        assert_eq!(ints(&m), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn rejects_cuts_quantum_and_compound_axioms() {
        let cut = parse_proof("(cut 2 1 (ax a) (ax a))").unwrap();
        assert!(matches!(mll_axiom_link_matrix(&cut), Err(MllError::Cut(_))));
        let q = parse_proof("(q 1 H (ax a))").unwrap();
        assert!(matches!(mll_axiom_link_matrix(&q), Err(MllError::Quantum(_))));
        let ax = parse_proof("(ax (a * b))").unwrap();
        assert!(matches!(mll_axiom_link_matrix(&ax), Err(MllError::NonAtomicAxiom(_))));
    }
}
