//! Seeded random generation of well-formed proofs with cuts worth
//! eliminating.
//!
//! Proofs are grown from a pool of small derivations. Cuts pair a formula of
//! one pool member with a freshly built proof of its dual, so principal and
//! commuting redexes both show up.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Modality};
use crate::matrix::{ComplexMatrix, Gate, GateName, UnitaryMatrix, C64};
use crate::proof::Proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Rule count, exchanges excluded.
    pub max_rules: usize,
    pub max_arity: usize,
    /// Modal nesting allowed in any formula of any sequent.
    pub max_depth: usize,
    /// Pool operations attempted per proof.
    pub rounds: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { max_rules: 12, max_arity: 3, max_depth: 5, rounds: 14 }
    }
}

struct Generator<'a> {
    rng: &'a mut ChaCha8Rng,
    cfg: GenConfig,
}

fn modal_depth(f: &Formula) -> usize {
    f.contexts().iter().map(|(c, _)| c.depth()).max().unwrap_or(0)
}

/// The conclusion when `p` is well-formed and within the depth limit.
fn admissible(p: &Proof, cfg: &GenConfig) -> Option<Vec<Formula>> {
    let s = p.conclusion().ok()?;
    (p.rule_count() <= cfg.max_rules && s.0.iter().all(|f| modal_depth(f) <= cfg.max_depth)).then_some(s.0)
}

impl Generator<'_> {
    fn formula(&mut self, size: usize) -> Formula {
        let atom = if self.rng.gen_bool(0.8) { "a" } else { "b" };
        if size == 0 {
            return if self.rng.gen_bool(0.5) { Formula::atom(atom) } else { Formula::co_atom(atom) };
        }
        match self.rng.gen_range(0..4) {
            0 => Formula::par(self.formula(size / 2), self.formula((size - 1) / 2)),
            1 => Formula::tensor(self.formula(size / 2), self.formula((size - 1) / 2)),
            2 => Formula::boxed(self.formula(size - 1)),
            _ => Formula::diamond(self.formula(size - 1)),
        }
    }

    fn gate(&mut self, arity: usize) -> Gate {
        let one = [GateName::H, GateName::X, GateName::Y, GateName::Z, GateName::S, GateName::T];
        match (arity, self.rng.gen_range(0..5)) {
            (_, 0) => Gate::identity(arity),
            (1, 1) => {
                let theta = self.rng.gen_range(0.0..std::f64::consts::TAU);
                let m = ComplexMatrix::from_rows(vec![
                    vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                    vec![C64::new(0.0, 0.0), C64::from_polar(1.0, theta)],
                ])
                .expect("square");
                Gate::raw(UnitaryMatrix::new(m).expect("phase gate is unitary"))
            }
            (1, _) => (*one.choose(self.rng).expect("non-empty")).into(),
            (2, 1) => GateName::Cnot.into(),
            (2, 2) => GateName::Swap.into(),
            _ => {
                let head = self.gate(1);
                let tail = self.gate(arity - 1);
                Gate::raw(head.unitary().tensor(tail.unitary()))
            }
        }
    }

    /// A proof whose conclusion holds `g`, with the position of `g`. Compound
    /// formulas are introduced by their own rule when the budget allows.
    fn prove(&mut self, g: &Formula, budget: usize) -> (Proof, usize) {
        let fallback = || (Proof::axiom(g.dual()), 1);
        if budget == 0 || self.rng.gen_bool(0.3) {
            return fallback();
        }
        match g {
            Formula::Tensor(a, b) => {
                let (pa, ia) = self.prove(a, budget / 2);
                let (pb, ib) = self.prove(b, budget / 2);
                let p = Proof::tensor(ia, ib, pa, pb);
                match p.conclusion() {
                    Ok(s) => (p, s.len() - 1),
                    Err(_) => fallback(),
                }
            }
            Formula::Par(a, b) => {
                let (pa, ia) = self.prove(a, budget / 2);
                let (pb, ib) = self.prove(b, budget / 2);
                let (na, nb) = (pa.conclusion().map(|s| s.len()), pb.conclusion().map(|s| s.len()));
                let (Ok(na), Ok(nb)) = (na, nb) else { return fallback() };
                // join the two proofs on some other formula of each
                let (xa, xb) = ((ia + 1) % na, (ib + 1) % nb);
                let joined = Proof::tensor(xa, xb, pa, pb);
                let ja = if ia > xa { ia - 1 } else { ia };
                let jb = na - 1 + if ib > xb { ib - 1 } else { ib };
                let p = Proof::par(ja, jb, joined);
                match p.conclusion() {
                    Ok(s) => (p, s.len() - 1),
                    Err(_) => fallback(),
                }
            }
            Formula::Modal(modality, _) => {
                let modality = *modality;
                let n = g.uniform_prefix_len(modality).min(self.cfg.max_arity);
                let n = self.rng.gen_range(1..=n);
                let inner = g.strip_prefix(modality, n).expect("prefix present").clone();
                // premise |- <>^n side, []^n side
                let premise = match modality {
                    Modality::Diamond => Proof::axiom(inner.dual()),
                    Modality::Box => Proof::axiom(inner.clone()),
                };
                let p = Proof::quantum(n, self.gate(n), premise);
                if p.conclusion().is_err() {
                    return fallback();
                }
                (p, if modality == Modality::Diamond { 0 } else { 1 })
            }
            Formula::Atom(_) => fallback(),
        }
    }

    fn random_proof(&mut self) -> Proof {
        let mut pool: Vec<Proof> = (0..self.rng.gen_range(2..=4))
            .map(|_| {
                let size = self.rng.gen_range(0..=2);
                Proof::axiom(self.formula(size))
            })
            .collect();
        for _ in 0..self.cfg.rounds {
            let k = self.rng.gen_range(0..pool.len());
            let Some(seq) = admissible(&pool[k], &self.cfg) else { continue };
            let candidate = match self.rng.gen_range(0..10) {
                0..=2 => self.try_quantum(&pool[k], &seq),
                3..=5 => {
                    let i = self.rng.gen_range(0..seq.len());
                    let budget = self.cfg.max_rules.saturating_sub(pool[k].rule_count() + 1);
                    let (partner, j) = self.prove(&seq[i].dual(), budget.min(4));
                    if self.rng.gen_bool(0.5) {
                        Some(Proof::cut(i, j, pool[k].clone(), partner))
                    } else {
                        Some(Proof::cut(j, i, partner, pool[k].clone()))
                    }
                }
                6 if seq.len() >= 2 => {
                    let mut idx: Vec<usize> = (0..seq.len()).collect();
                    idx.shuffle(self.rng);
                    Some(Proof::par(idx[0], idx[1], pool[k].clone()))
                }
                7 | 8 if pool.len() >= 2 => {
                    let m = (k + self.rng.gen_range(1..pool.len())) % pool.len();
                    let Some(other) = admissible(&pool[m], &self.cfg) else { continue };
                    let (i, j) = (self.rng.gen_range(0..seq.len()), self.rng.gen_range(0..other.len()));
                    let p = Proof::tensor(i, j, pool[k].clone(), pool[m].clone());
                    if admissible(&p, &self.cfg).is_some() {
                        pool[k] = p;
                        pool.remove(m);
                    }
                    continue;
                }
                _ => {
                    let mut order: Vec<usize> = (0..seq.len()).collect();
                    order.shuffle(self.rng);
                    Some(Proof::exchange(order, pool[k].clone()))
                }
            };
            if let Some(p) = candidate.filter(|p| admissible(p, &self.cfg).is_some()) {
                pool[k] = p;
            }
        }
        pool.into_iter().max_by_key(|p| (p.contains_cut(), p.rule_count())).expect("pool is never empty")
    }

    fn try_quantum(&mut self, p: &Proof, seq: &[Formula]) -> Option<Proof> {
        if seq.len() != 2 || seq[0].is_modal() != seq[1].is_modal() {
            return None;
        }
        let room = self.cfg.max_depth - seq.iter().map(modal_depth).max().unwrap_or(0);
        let n = self.rng.gen_range(1..=self.cfg.max_arity).min(room);
        if n == 0 {
            return None;
        }
        let premise = if self.rng.gen_bool(0.5) { Proof::exchange(vec![1, 0], p.clone()) } else { p.clone() };
        Some(Proof::quantum(n, self.gate(n), premise))
    }
}

/// One proof from a generator seeded with `seed`.
pub fn random_proof(seed: u64, cfg: GenConfig) -> Proof {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Generator { rng: &mut rng, cfg }.random_proof()
}

/// `count` proofs, the i-th drawn with seed `base + i`.
pub fn corpus(base: u64, count: usize, cfg: GenConfig) -> Vec<Proof> {
    (0..count as u64).map(|i| random_proof(base.wrapping_add(i), cfg)).collect()
}
