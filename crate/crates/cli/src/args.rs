//! Command-line grammar and entry-point resolution.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmll::formula::{Context, Formula, HoleStep, Polarity};
use qmll::qiam::unique_negative_context;

use crate::{domain, usage, Failure};

#[derive(Parser, Debug)]
#[command(
    name = "qmll",
    version,
    about = "Proofs with quantum modalities: checking, cut elimination, token machine, circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a proof and print its conclusion.
    Check {
        /// Proof file, or `-` for stdin.
        proof: String,
    },
    /// Eliminate cuts and print the normal form.
    Normalize {
        proof: String,
        /// Print one line per step to stderr: index, redex, node path, weight before and after.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "leftmost-innermost")]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the token machine from a conclusion occurrence on an input register.
    Run {
        proof: String,
        #[command(flatten)]
        entry: EntryArgs,
        /// Basis label such as `|01>`, or a JSON array of [re, im] amplitudes.
        #[arg(long)]
        input: String,
        /// Print every visited state to stderr.
        #[arg(long)]
        trace_machine: bool,
    },
    /// Print the unitary computed from an entry point, as JSON.
    Semantics {
        proof: String,
        #[command(flatten)]
        entry: EntryArgs,
    },
    /// Encode a circuit JSON file as a proof.
    Encode {
        /// Circuit file, or `-` for stdin.
        circuit: String,
    },
    /// Extract the circuit computed from an entry point, as circuit JSON.
    Extract {
        proof: String,
        #[command(flatten)]
        entry: EntryArgs,
        /// Drop identity gates.
        #[arg(long)]
        prune_identity: bool,
    },
    /// Print the axiom-link matrix of a cut-free proof with atomic axioms.
    MllMatrix { proof: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    LeftmostInnermost,
    Random,
}

#[derive(Args, Debug)]
pub struct EntryArgs {
    /// Conclusion formula to enter at, 1-based.
    #[arg(long)]
    pub entry: Option<usize>,
    /// `auto`, or a hole path such as `1.L.R`: formula index, then L/R through
    /// par and tensor. Modalities are crossed implicitly; an explicit M is
    /// also accepted.
    #[arg(long, default_value = "auto")]
    pub context: String,
}

/// Follows `steps` from the root of `f`, crossing modalities on the way.
fn hole_path(f: &Formula, steps: &[char]) -> Option<Vec<HoleStep>> {
    let mut out = Vec::new();
    let mut here = f;
    let mut rest = steps;
    loop {
        match here {
            Formula::Modal(_, a) => {
                out.push(HoleStep::Modal);
                if rest.first() == Some(&'M') {
                    rest = &rest[1..];
                }
                here = a;
            }
            Formula::Par(a, b) | Formula::Tensor(a, b) => {
                let (step, next) = match rest.first()? {
                    'L' => (HoleStep::Left, a),
                    'R' => (HoleStep::Right, b),
                    _ => return None,
                };
                out.push(step);
                rest = &rest[1..];
                here = next;
            }
            Formula::Atom(_) => return rest.is_empty().then_some(out),
        }
    }
}

/// The 0-based entry position and negative context selected by the flags.
pub fn resolve_entry(conclusion: &[Formula], args: &EntryArgs) -> Result<(usize, Context), Failure> {
    let pick = |i: usize| {
        i.checked_sub(1)
            .filter(|&p| p < conclusion.len())
            .ok_or_else(|| domain(format!("no conclusion formula {i} (there are {})", conclusion.len())))
    };
    let (pos, ctx) = if args.context == "auto" {
        match args.entry {
            Some(i) => {
                let pos = pick(i)?;
                let ctx = unique_negative_context(&conclusion[pos])
                    .ok_or_else(|| domain(format!("formula {i} has no unique negative context; pass --context")))?;
                (pos, ctx)
            }
            None => {
                let all: Vec<(usize, Context)> = conclusion
                    .iter()
                    .enumerate()
                    .flat_map(|(i, f)| {
                        f.contexts().into_iter().filter(|(_, p)| *p == Polarity::Negative).map(move |(c, _)| (i, c))
                    })
                    .collect();
                match <[_; 1]>::try_from(all) {
                    Ok([only]) => only,
                    Err(all) => {
                        return Err(domain(format!(
                            "the conclusion has {} negative contexts; pass --entry or --context",
                            all.len()
                        )))
                    }
                }
            }
        }
    } else {
        let mut parts = args.context.split('.');
        let index: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| usage(format!("bad context path `{}`", args.context)))?;
        let steps: Vec<char> = parts
            .map(|s| match s.trim() {
                "L" => Ok('L'),
                "R" => Ok('R'),
                "M" => Ok('M'),
                other => Err(usage(format!("bad path step `{other}`, expected L, R or M"))),
            })
            .collect::<Result<_, _>>()?;
        if args.entry.is_some_and(|e| e != index) {
            return Err(usage("--entry disagrees with the formula index of --context"));
        }
        let pos = pick(index)?;
        let f = &conclusion[pos];
        let ctx = hole_path(f, &steps)
            .and_then(|p| f.context_at(&p))
            .ok_or_else(|| domain(format!("path `{}` does not end on an atom of {f}", args.context)))?;
        if ctx.polarity_for(f) != Some(Polarity::Negative) {
            return Err(domain(format!("context {ctx} of {f} is not negative")));
        }
        (pos, ctx)
    };
    Ok((pos, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(conclusion: &[&str], entry: Option<usize>, context: &str) -> Result<(usize, String), String> {
        let fs: Vec<Formula> = conclusion.iter().map(|s| s.parse().unwrap()).collect();
        resolve_entry(&fs, &EntryArgs { entry, context: context.into() })
            .map(|(p, c)| (p, c.to_string()))
            .map_err(|f| format!("{f:?}"))
    }

    #[test]
    fn auto_picks_the_only_negative_context() {
        assert_eq!(resolve(&["<><>~a", "[][]a"], None, "auto").unwrap().0, 0);
        assert!(resolve(&["~a", "a", "~b", "b"], None, "auto").is_err());
        assert_eq!(resolve(&["~a", "a", "~b", "b"], Some(3), "auto").unwrap().0, 2);
    }

    #[test]
    fn paths_cross_modalities() {
        let (pos, ctx) = resolve(&["a", "<>(~a % []~b)"], None, "2.R").unwrap();
        assert_eq!(pos, 1);
        assert_eq!(ctx, resolve(&["a", "<>(~a % []~b)"], None, "2.M.R.M").unwrap().1);
        assert!(resolve(&["a", "<>(~a % []~b)"], None, "2.L.L").is_err());
        assert!(resolve(&["a"], None, "1").is_err(), "positive context");
        assert!(matches!(resolve(&["a"], None, "x.L"), Err(e) if e.starts_with("Usage")));
    }
}
