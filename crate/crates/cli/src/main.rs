//! JSON-in, JSON-out command line for torsion root extraction.
//!
//! Exit codes: 0 on success, 2 when the instance is mathematically
//! unsolvable, 1 on malformed input or internal faults, so shell
//! pipelines can tell non-existence from errors.

mod selftest;

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use rootext::error::Error;
use rootext::params::{gen_params, ParamRequest, DEFAULT_F_MAX};
use rootext::solver::{solve_grep, solve_simultaneous, verify_solution, GrepCase, SimulBranch};
use rootext::wire::{ContextJson, InstanceJson, SimulInstanceJson, SolutionJson};
use rootext::{CurveTorsion, TorsionContext};

#[derive(Parser)]
#[command(
    name = "rootext",
    version,
    about = "Root extraction in l^e-torsion subgroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the smallest cofactor f with p = l^e * f - 1 prime and emit
    /// the torsion context.
    GenParams {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        e: u32,
        #[arg(long, default_value_t = DEFAULT_F_MAX)]
        f_max: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Solve one instance K = m*P + n*Q for a generating pair (P, Q).
    Solve {
        #[arg(long)]
        ctx: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<String>,
        /// Instance JSON file, or "-" for stdin.
        instance: String,
    },
    /// Solve two simultaneous equations for one pair (P, Q).
    Simul {
        #[arg(long)]
        ctx: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<String>,
        instance: String,
    },
    /// Check a claimed solution: membership, the linear equation, and
    /// independence.
    Verify {
        #[arg(long)]
        ctx: String,
        instance: String,
        solution: String,
    },
    /// Run the built-in consistency suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

/// A command outcome: the JSON document to emit plus the process exit
/// code.
struct Outcome {
    body: serde_json::Value,
    code: u8,
}

impl Outcome {
    fn ok(body: serde_json::Value) -> Self {
        Outcome { body, code: 0 }
    }

    fn no_solution(body: serde_json::Value) -> Self {
        Outcome { body, code: 2 }
    }

    fn error(kind: &str, message: String) -> Self {
        Outcome {
            body: json!({ "status": "error", "kind": kind, "message": message }),
            code: 1,
        }
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::NotPrime => "not_prime",
        Error::BadModulus => "bad_modulus",
        Error::DivisionByZero => "division_by_zero",
        Error::NotASquare => "not_a_square",
        Error::SingularCurve => "singular_curve",
        Error::OffCurve => "off_curve",
        Error::NotInTorsion => "not_in_torsion",
        Error::NotInSubgroup => "not_in_subgroup",
        Error::RetryLimitExceeded { .. } => "retry_limit_exceeded",
        Error::OrderError { .. } => "order_error",
        Error::PreconditionViolated(_) => "precondition_violated",
        Error::NoSolution { .. } => "no_solution",
        Error::NotAPower => "not_a_power",
        Error::VerificationFailed(_) => "internal",
        Error::DegenerateSystem => "degenerate_system",
        Error::NoGeneratingSolution => "no_generating_solution",
        Error::TooLarge { .. } => "too_large",
        Error::NotFound => "not_found",
        Error::BadParams(_) => "bad_params",
        Error::CoordMismatch => "coord_mismatch",
    }
}

fn lib_error(err: Error) -> Outcome {
    Outcome::error(error_kind(&err), err.to_string())
}

fn read_input(path: &str) -> Result<String, Outcome> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Outcome::error("io", e.to_string()))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Outcome::error("io", format!("{path}: {e}")))
    }
}

fn load_context(path: &str) -> Result<TorsionContext, Outcome> {
    let text = read_input(path)?;
    let json: ContextJson = serde_json::from_str(&text)
        .map_err(|e| Outcome::error("bad_json", format!("context: {e}")))?;
    json.to_context().map_err(lib_error)
}

fn make_rng(seed: Option<u64>) -> Box<dyn RngCore> {
    match seed {
        Some(seed) => Box::new(ChaCha12Rng::seed_from_u64(seed)),
        None => Box::new(StdRng::from_entropy()),
    }
}

fn cmd_gen_params(l: u64, e: u32, f_max: u64) -> Outcome {
    match gen_params(&ParamRequest { l, e, f_max }) {
        Ok(ctx) => Outcome::ok(
            serde_json::to_value(ContextJson::from_context(&ctx)).expect("context serializes"),
        ),
        Err(err) => lib_error(err),
    }
}

fn cmd_solve(ctx_path: &str, instance: &str, seed: Option<u64>) -> Outcome {
    let ctx = match load_context(ctx_path) {
        Ok(ctx) => ctx,
        Err(out) => return out,
    };
    let text = match read_input(instance) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let json: InstanceJson = match serde_json::from_str(&text) {
        Ok(j) => j,
        Err(e) => return Outcome::error("bad_json", format!("instance: {e}")),
    };
    let inst = match json.to_instance(&ctx) {
        Ok(i) => i,
        Err(err) => return lib_error(err),
    };
    let backend = CurveTorsion::new(&ctx);
    let mut rng = make_rng(seed);
    match solve_grep(&backend, &inst, rng.as_mut()) {
        Ok(out) => {
            let sol = SolutionJson::from_solution(&out.solution);
            let case = match out.case {
                GrepCase::Case1 => 1,
                GrepCase::Case2 => 2,
            };
            Outcome::ok(json!({
                "status": "ok",
                "P": sol.p,
                "Q": sol.q,
                "case": case,
                "u": out.u,
                "r": out.r,
            }))
        }
        Err(Error::NoSolution { u, r }) => {
            Outcome::no_solution(json!({ "status": "no_solution", "u": u, "r": r }))
        }
        Err(err) => lib_error(err),
    }
}

fn cmd_simul(ctx_path: &str, instance: &str, seed: Option<u64>) -> Outcome {
    let ctx = match load_context(ctx_path) {
        Ok(ctx) => ctx,
        Err(out) => return out,
    };
    let text = match read_input(instance) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let json: SimulInstanceJson = match serde_json::from_str(&text) {
        Ok(j) => j,
        Err(e) => return Outcome::error("bad_json", format!("instance: {e}")),
    };
    let inst = match json.to_instance(&ctx) {
        Ok(i) => i,
        Err(err) => return lib_error(err),
    };
    let backend = CurveTorsion::new(&ctx);
    let mut rng = make_rng(seed);
    match solve_simultaneous(&backend, &inst, rng.as_mut()) {
        Ok(out) => {
            let sol = SolutionJson::from_solution(&out.solution);
            let branch = match out.branch {
                SimulBranch::Unique => "unique",
                SimulBranch::Coset => "coset",
            };
            Outcome::ok(json!({
                "status": "ok",
                "P": sol.p,
                "Q": sol.q,
                "branch": branch,
                "r": out.r,
            }))
        }
        // these two are mathematical non-existence, not faults
        Err(err @ (Error::NotAPower | Error::NoGeneratingSolution)) => {
            Outcome::no_solution(json!({ "status": "no_solution", "reason": error_kind(&err) }))
        }
        Err(err) => lib_error(err),
    }
}

fn cmd_verify(ctx_path: &str, instance: &str, solution: &str) -> Outcome {
    let ctx = match load_context(ctx_path) {
        Ok(ctx) => ctx,
        Err(out) => return out,
    };
    let inst_text = match read_input(instance) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let inst_json: InstanceJson = match serde_json::from_str(&inst_text) {
        Ok(j) => j,
        Err(e) => return Outcome::error("bad_json", format!("instance: {e}")),
    };
    let inst = match inst_json.to_instance(&ctx) {
        Ok(i) => i,
        Err(err) => return lib_error(err),
    };
    let sol_text = match read_input(solution) {
        Ok(t) => t,
        Err(out) => return out,
    };
    // accepts either a bare {"P": ..., "Q": ...} document or a full solve
    // output envelope (extra fields are ignored)
    let sol_json: SolutionJson = match serde_json::from_str(&sol_text) {
        Ok(j) => j,
        Err(e) => return Outcome::error("bad_json", format!("solution: {e}")),
    };
    let sol = match sol_json.to_solution(&ctx) {
        Ok(s) => s,
        Err(err) => return lib_error(err),
    };
    let backend = CurveTorsion::new(&ctx);
    let report = verify_solution(&backend, &inst, &sol);
    let body = json!({
        "status": if report.all_ok() { "ok" } else { "fail" },
        "membership_p": report.membership_p,
        "membership_q": report.membership_q,
        "equation": report.equation,
        "independence": report.independence,
    });
    if report.all_ok() {
        Outcome::ok(body)
    } else {
        Outcome { body, code: 1 }
    }
}

fn emit(out: Option<&str>, body: &serde_json::Value) -> bool {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(body).expect("valid JSON")
    );
    match out {
        None => {
            print!("{text}");
            true
        }
        Some(path) => match fs::write(path, &text) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("failed to write {path}: {e}");
                false
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out_path) = match &cli.command {
        Command::GenParams { l, e, f_max, out } => (cmd_gen_params(*l, *e, *f_max), out.clone()),
        Command::Solve {
            ctx,
            seed,
            out,
            instance,
        } => (cmd_solve(ctx, instance, *seed), out.clone()),
        Command::Simul {
            ctx,
            seed,
            out,
            instance,
        } => (cmd_simul(ctx, instance, *seed), out.clone()),
        Command::Verify {
            ctx,
            instance,
            solution,
        } => (cmd_verify(ctx, instance, solution), None),
        Command::Selftest { level } => {
            let all_ok = selftest::run(matches!(level, Level::Full));
            return if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    if !emit(out_path.as_deref(), &outcome.body) {
        return ExitCode::FAILURE;
    }
    ExitCode::from(outcome.code)
}
