//! `qmll`: check, normalize, run and encode proofs from the command line.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage or parse errors.

mod args;

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use qmll::circuit::{encode, extract, Circuit, CircuitError};
use qmll::cutelim::{normalize, Strategy};
use qmll::formula::Context;
use qmll::matrix::{amplitudes_json, complex_from_json, matrix_json, StateVector};
use qmll::proof::{check, mll_axiom_link_matrix, parse_proof, parse_proof_unchecked, print_proof, CheckReport, Proof};
use qmll::qiam::{run, semantics_relative, MachineState, OccurrenceGraph};

use args::{resolve_entry, Cli, Command, EntryArgs, StrategyArg};

/// Why a command failed, and so which exit code it gets.
#[derive(Debug)]
pub(crate) enum Failure {
    /// Bad flags, unreadable files, unparsable input.
    Usage(String),
    /// Well-formed input the operation rejects.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

pub(crate) fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub(crate) fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    }
}

/// Parses a proof file; ill-formed proofs are domain errors.
fn load_proof(path: &str) -> Result<Proof, Failure> {
    use qmll::proof::ProofParseError;
    parse_proof(&read_input(path)?).map_err(|e| match e {
        ProofParseError::Invalid(_) => domain(e),
        _ => usage(e),
    })
}

fn max_qubits() -> Result<usize, Failure> {
    match std::env::var("QMLL_MAX_QUBITS") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("QMLL_MAX_QUBITS must be a number, got `{v}`"))),
        Err(_) => Ok(16),
    }
}

fn ensure_qubits(n: usize) -> Result<(), Failure> {
    let cap = max_qubits()?;
    if n > cap {
        return Err(domain(format!("register of {n} qubits exceeds QMLL_MAX_QUBITS={cap}")));
    }
    Ok(())
}

fn entry(p: &Proof, args: &EntryArgs) -> Result<(usize, Context), Failure> {
    let s = p.conclusion().map_err(domain)?;
    let (pos, ctx) = resolve_entry(&s.0, args)?;
    ensure_qubits(ctx.depth())?;
    Ok((pos, ctx))
}

fn parse_state(text: &str, qubits: usize) -> Result<StateVector, Failure> {
    let v = if text.trim_start().starts_with('[') {
        let json: serde_json::Value = serde_json::from_str(text).map_err(usage)?;
        let amps = json
            .as_array()
            .ok_or_else(|| usage("amplitudes must be a JSON array of [re, im] pairs"))?
            .iter()
            .map(|z| complex_from_json(z).ok_or_else(|| usage("amplitudes must be [re, im] pairs")))
            .collect::<Result<Vec<_>, _>>()?;
        StateVector::normalised(amps).map_err(domain)?
    } else {
        StateVector::from_label(text).ok_or_else(|| usage(format!("bad basis label `{text}`, expected e.g. |01>")))?
    };
    if v.qubits() != qubits {
        return Err(domain(format!("input has {} qubit(s), context needs {qubits}", v.qubits())));
    }
    Ok(v)
}

fn execute(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let io_err = |e: io::Error| usage(format!("output: {e}"));
    match cli.command {
        Command::Check { proof } => {
            let p = parse_proof_unchecked(&read_input(&proof)?).map_err(usage)?;
            match check(&p) {
                CheckReport::Valid(s) => writeln!(out, "ok {s}").map_err(io_err)?,
                CheckReport::Invalid(v) => return Err(domain(format!("invalid proof: {v}"))),
            }
        }
        Command::Normalize { proof, trace, strategy, seed } => {
            let p = load_proof(&proof)?;
            let strategy = match strategy {
                StrategyArg::LeftmostInnermost => Strategy::LeftmostInnermost,
                StrategyArg::Random => Strategy::Random(seed),
            };
            let t = normalize(&p, strategy).map_err(domain)?;
            if trace {
                for (i, s) in t.steps.iter().enumerate() {
                    eprintln!("{} {} {} {} {}", i + 1, s.redex.kind, s.redex.site, s.weight_before, s.weight_after);
                }
            }
            writeln!(out, "{}", print_proof(&t.normal)).map_err(io_err)?;
        }
        Command::Run { proof, entry: e, input, trace_machine } => {
            let p = load_proof(&proof)?;
            let (pos, ctx) = entry(&p, &e)?;
            let register = parse_state(&input, ctx.depth())?;
            let g = OccurrenceGraph::new(&p).map_err(domain)?;
            let initial = MachineState {
                occurrence: qmll::proof::OccurrenceId { node: qmll::proof::NodePath::root(), position: pos },
                context: ctx,
                stack: Default::default(),
                register,
            };
            let mut k = 0;
            let r = run(&g, initial, |s, event| {
                if trace_machine {
                    k += 1;
                    let gate = if event.is_some() { " gate" } else { "" };
                    eprintln!("{k} {} {} {}{gate}", s.occurrence, s.context, s.stack);
                }
            })
            .map_err(domain)?;
            let f = &r.final_state;
            writeln!(
                out,
                "{{\"exit\": \"{}\", \"context\": \"{}\", \"steps\": {}, \"amplitudes\": {}}}",
                f.occurrence,
                f.context,
                r.steps,
                amplitudes_json(&f.register)
            )
            .map_err(io_err)?;
        }
        Command::Semantics { proof, entry: e } => {
            let p = load_proof(&proof)?;
            let (pos, ctx) = entry(&p, &e)?;
            let s = semantics_relative(&p, pos, &ctx).map_err(domain)?;
            eprintln!("exit {} {}", s.exit, s.exit_context);
            writeln!(out, "{}", matrix_json(s.unitary.matrix())).map_err(io_err)?;
        }
        Command::Encode { circuit } => {
            let c = Circuit::from_json(&read_input(&circuit)?).map_err(|e| match e {
                CircuitError::Json(_) | CircuitError::UnknownGate(_) | CircuitError::Matrix(_) => usage(e),
                _ => domain(e),
            })?;
            ensure_qubits(c.qubits)?;
            writeln!(out, "{}", print_proof(&encode(&c).map_err(domain)?)).map_err(io_err)?;
        }
        Command::Extract { proof, entry: e, prune_identity } => {
            let p = load_proof(&proof)?;
            let (pos, ctx) = entry(&p, &e)?;
            let c = extract(&p, pos, &ctx, prune_identity).map_err(domain)?;
            writeln!(out, "{}", c.to_json()).map_err(io_err)?;
        }
        Command::MllMatrix { proof } => {
            let p = load_proof(&proof)?;
            let m = mll_axiom_link_matrix(&p).map_err(domain)?;
            writeln!(out, "{}", matrix_json(&m)).map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Domain(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
