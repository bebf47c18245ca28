//! Normalization strategies, traces and the termination weight.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{find_redexes, step, Redex, StepError};
use crate::proof::{Proof, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Always fire the first redex in post-order.
    LeftmostInnermost,
    /// Fire a uniformly chosen redex, from a seeded generator.
    Random(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub redex: Redex,
    pub size_before: usize,
    pub weight_before: u128,
    pub weight_after: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub normal: Proof,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NormalizeError {
    #[error("ill-formed proof {0}")]
    Invalid(Violation),
    #[error("step bound {0} exceeded")]
    BoundExceeded(u128),
    #[error("weight did not decrease at step {index} ({before} -> {after})")]
    WeightNotDecreasing { index: usize, before: u128, after: u128 },
    #[error(transparent)]
    Step(#[from] StepError),
}

fn base(p: &Proof) -> u128 {
    match p {
        Proof::Axiom(f) => 2 * f.modal_prefix_len() as u128 + 1,
        Proof::Exchange { .. } => 0,
        _ => 1,
    }
}

fn weighted_size(p: &Proof) -> u128 {
    p.children().into_iter().fold(base(p), |acc, c| acc.saturating_add(weighted_size(c)))
}

/// Termination measure: the weighted size of the proof plus, for every cut,
/// its subtree's weighted size scaled by two to the cut formula's size.
pub fn weight(p: &Proof) -> u128 {
    let own = match p {
        Proof::Cut { left_pos, left, .. } => {
            let size = left.conclusion().ok().and_then(|s| s.0.get(*left_pos).map(|f| f.size())).unwrap_or(0);
            let scale = u32::try_from(size).ok().and_then(|s| 1u128.checked_shl(s)).unwrap_or(u128::MAX);
            base(p).saturating_add(scale.saturating_mul(weighted_size(p)))
        }
        _ => base(p),
    };
    p.children().into_iter().fold(own, |acc, c| acc.saturating_add(weight(c)))
}

/// Steps allowed to [`normalize`]: the initial weight, since every step
/// lowers it by at least one.
pub fn step_bound(p: &Proof) -> u128 {
    weight(p)
}

/// Rewrites `p` until no redex is left, checking that the weight drops at
/// every step.
pub fn normalize(p: &Proof, strategy: Strategy) -> Result<ReductionTrace, NormalizeError> {
    p.conclusion().map_err(NormalizeError::Invalid)?;
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::LeftmostInnermost => None,
    };
    let bound = step_bound(p);
    let mut current = p.clone();
    let mut w = weight(p);
    let mut steps = Vec::new();
    loop {
        let redexes = find_redexes(&current);
        let chosen = match rng.as_mut() {
            Some(rng) => redexes.choose(rng),
            None => redexes.first(),
        };
        let Some(r) = chosen else { break };
        if steps.len() as u128 >= bound {
            return Err(NormalizeError::BoundExceeded(bound));
        }
        let next = step(&current, r)?;
        let after = weight(&next);
        if after >= w {
            return Err(NormalizeError::WeightNotDecreasing { index: steps.len(), before: w, after });
        }
        steps.push(TraceStep {
            redex: r.clone(),
            size_before: current.rule_count(),
            weight_before: w,
            weight_after: after,
        });
        current = next;
        w = after;
    }
    Ok(ReductionTrace { steps, normal: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::parse_proof;

    #[test]
    fn normal_proof_takes_no_step() {
        let p = parse_proof("(par 2 1 (par 1 2 (tensor 2 2 (ax a) (ax a))))").unwrap();
        let t = normalize(&p, Strategy::LeftmostInnermost).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.normal, p);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&parse_proof("(ax a)").unwrap()), 1);
        assert_eq!(weight(&parse_proof("(ax []<>a)").unwrap()), 5);
        // cut on a: 1 + 1 + 1 for the nodes, 2^1 * 3 for the cut
        assert_eq!(weight(&parse_proof("(cut 2 1 (ax a) (ax a))").unwrap()), 9);
    }

    #[test]
    fn nested_modal_axiom_needs_more_than_two_steps() {
        let p = parse_proof("(ax <>[]<>a)").unwrap();
        let t = normalize(&p, Strategy::LeftmostInnermost).unwrap();
        assert!(t.steps.len() > 2);
        assert!(crate::cutelim::find_redexes(&t.normal).is_empty());
    }
}
