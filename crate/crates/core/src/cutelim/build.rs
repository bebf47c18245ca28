//! Label-tracking proof assembly used by the rewrite schemas.
//!
//! Every conclusion occurrence of a piece carries a [`Label`]. Rules pick
//! their active occurrences by label, so a schema can describe both sides of
//! a rewrite without caring where formulas sit; [`finish`] then adds the
//! exchange that restores the original conclusion order.

use crate::matrix::Gate;
use crate::proof::Proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Label {
    /// Conclusion position `.1` of designated subproof `.0`.
    Sub(usize, usize),
    Fresh(usize),
}

/// A label lookup failed: the proof no longer matches the schema.
#[derive(Debug)]
pub(crate) struct Mismatch;

pub(crate) struct Piece {
    pub proof: Proof,
    pub labels: Vec<Label>,
}

impl Piece {
    pub fn sub(k: usize, proof: &Proof) -> Result<Piece, Mismatch> {
        let len = proof.conclusion().map_err(|_| Mismatch)?.len();
        Ok(Piece { proof: proof.clone(), labels: (0..len).map(|i| Label::Sub(k, i)).collect() })
    }

    pub fn label(&self, position: usize) -> Result<Label, Mismatch> {
        self.labels.get(position).copied().ok_or(Mismatch)
    }

    fn find(&self, l: Label) -> Result<usize, Mismatch> {
        self.labels.iter().position(|&m| m == l).ok_or(Mismatch)
    }

    fn without(&self, skip: &[usize]) -> Vec<Label> {
        self.labels.iter().enumerate().filter(|(k, _)| !skip.contains(k)).map(|(_, &l)| l).collect()
    }
}

pub(crate) fn axiom(proof: Proof, dual: Label, primal: Label) -> Piece {
    Piece { proof, labels: vec![dual, primal] }
}

pub(crate) fn cut(left: Piece, l: Label, right: Piece, r: Label) -> Result<Piece, Mismatch> {
    let (i, j) = (left.find(l)?, right.find(r)?);
    let mut labels = left.without(&[i]);
    labels.extend(right.without(&[j]));
    Ok(Piece { proof: Proof::cut(i, j, left.proof, right.proof), labels })
}

pub(crate) fn par(premise: Piece, a: Label, b: Label, out: Label) -> Result<Piece, Mismatch> {
    let (i, j) = (premise.find(a)?, premise.find(b)?);
    let mut labels = premise.without(&[i, j]);
    labels.push(out);
    Ok(Piece { proof: Proof::par(i, j, premise.proof), labels })
}

pub(crate) fn tensor(left: Piece, l: Label, right: Piece, r: Label, out: Label) -> Result<Piece, Mismatch> {
    let (i, j) = (left.find(l)?, right.find(r)?);
    let mut labels = left.without(&[i]);
    labels.extend(right.without(&[j]));
    labels.push(out);
    Ok(Piece { proof: Proof::tensor(i, j, left.proof, right.proof), labels })
}

/// Quantum rule whose premise formulas are `first` (gets the diamonds) and
/// `second`; the premise is exchanged when they are listed the other way.
pub(crate) fn quantum(
    arity: usize,
    gate: Gate,
    premise: Piece,
    first: Label,
    second: Label,
    outs: [Label; 2],
) -> Result<Piece, Mismatch> {
    if premise.labels.len() != 2 {
        return Err(Mismatch);
    }
    let p = match (premise.find(first)?, premise.find(second)?) {
        (0, 1) => premise.proof,
        (1, 0) => Proof::exchange(vec![1, 0], premise.proof),
        _ => return Err(Mismatch),
    };
    Ok(Piece { proof: Proof::quantum(arity, gate, p), labels: outs.to_vec() })
}

pub(crate) fn exchange(premise: Piece, order: &[usize]) -> Result<Piece, Mismatch> {
    let labels = order.iter().map(|&k| premise.label(k)).collect::<Result<_, _>>()?;
    Ok(Piece { proof: Proof::exchange(order.to_vec(), premise.proof), labels })
}

/// The reduct proof, exchanged so its labels read as `target`.
pub(crate) fn finish(reduct: Piece, target: &[Label]) -> Result<Proof, Mismatch> {
    if target.len() != reduct.labels.len() {
        return Err(Mismatch);
    }
    let order = target.iter().map(|&l| reduct.find(l)).collect::<Result<_, _>>()?;
    Ok(Proof::exchange(order, reduct.proof))
}
