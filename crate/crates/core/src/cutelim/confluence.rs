//! Bounded search for a common reduct of two proofs.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{find_redexes, net_signature, step, NetSignature};
use crate::matrix::EQUALITY_TOL;
use crate::proof::{print_proof, Proof};

/// Limits of the common-reduct search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinBudget {
    /// Steps allowed on each side. Commuting steps only move a cut upward
    /// and are not counted.
    pub steps: u32,
    /// Cap on the proofs explored from each side.
    pub max_states: usize,
}

impl Default for JoinBudget {
    fn default() -> Self {
        JoinBudget { steps: 2, max_states: 20_000 }
    }
}

/// Signatures of every proof reachable from `p` within the budget.
fn reachable(p: &Proof, budget: JoinBudget) -> Vec<NetSignature> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(print_proof(p));
    queue.push_back((p.clone(), 0u32));
    while let Some((q, cost)) = queue.pop_front() {
        out.push(net_signature(&q));
        for r in find_redexes(&q) {
            let c = cost + u32::from(!r.kind.is_commuting());
            if c > budget.steps || seen.len() >= budget.max_states {
                continue;
            }
            let Ok(next) = step(&q, &r) else { continue };
            if seen.insert(print_proof(&next)) {
                // zero-cost edges go first so costs stay minimal
                if c == cost {
                    queue.push_front((next, c));
                } else {
                    queue.push_back((next, c));
                }
            }
        }
    }
    out
}

/// Whether `a` and `b` reduce, within the budget, to proofs with the same
/// link structure and gates equal within tolerance.
pub fn joinable(a: &Proof, b: &Proof, budget: JoinBudget) -> bool {
    let left = reachable(a, budget);
    let mut by_shape: HashMap<String, Vec<&NetSignature>> = HashMap::new();
    for s in &left {
        by_shape.entry(s.shape()).or_default().push(s);
    }
    reachable(b, budget)
        .iter()
        .any(|s| by_shape.get(&s.shape()).is_some_and(|bucket| bucket.iter().any(|t| t.approx_eq(s, EQUALITY_TOL))))
}
