mod commands;
mod plot;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use cyclecones::error::ErrorKind;
use serde_json::{json, Value as Json};

const SCHEMA: &str = "cyclecones/1";

#[derive(Parser, Debug)]
#[command(name = "cyclecones", version, about = "Exact cones of cycle classes and their decompositions")]
struct Cli {
    /// Print the full result envelope as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Add version and timestamp outside the payload.
    #[arg(long, global = true)]
    meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polyhedral cone operations on a cone JSON file.
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Decompose a class over a geometry (movable and pseudo-effective cones).
    Decompose(DecomposeArgs),
    /// Decide whether the movable classes below a class have a maximum.
    Directed(DirectedArgs),
    /// Cones, constants and decompositions on a projective bundle over a curve.
    Projbundle(ProjbundleArgs),
    /// Decomposition against a Gram matrix.
    Bck(BckArgs),
    /// Intersection ring evaluation.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Show or verify an embedded fixture.
    Fixture(FixtureArgs),
}

#[derive(Subcommand, Debug)]
enum ConeCommand {
    /// Dual cone.
    Dual(ConeInput),
    /// Both representations in canonical form.
    Convert(ConeInput),
    /// Membership of a class, with certificate.
    Contains(ContainsArgs),
    /// Extremal rays and lineality space.
    Rays(ConeInput),
}

#[derive(Args, Debug)]
struct ConeInput {
    #[arg(long)]
    input: String,
}

#[derive(Args, Debug)]
struct ContainsArgs {
    #[arg(long)]
    input: String,
    /// Comma-separated rationals, e.g. "1,-1/2,0".
    #[arg(long, allow_hyphen_values = true)]
    class: String,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    geometry: String,
    #[arg(long, allow_hyphen_values = true)]
    class: String,
    #[arg(long, allow_hyphen_values = true)]
    objective: Option<String>,
    /// Write a cross-section of the cones and the decomposition as SVG.
    #[arg(long, value_name = "OUT.svg")]
    plot_section: Option<String>,
}

#[derive(Args, Debug)]
struct DirectedArgs {
    #[arg(long)]
    geometry: String,
    #[arg(long, allow_hyphen_values = true)]
    class: String,
}

#[derive(Args, Debug)]
struct ProjbundleArgs {
    /// Harder-Narasimhan data as "rank:degree,...", slopes increasing.
    #[arg(long, allow_hyphen_values = true)]
    hn: String,
    #[arg(long)]
    k: Option<usize>,
    /// Class "x,y" meaning x xi^(n-k) + y xi^(n-k-1) f.
    #[arg(long, allow_hyphen_values = true, requires = "k")]
    class: Option<String>,
}

#[derive(Args, Debug)]
struct BckArgs {
    #[arg(long)]
    gram: String,
    #[arg(long, allow_hyphen_values = true)]
    class: String,
    /// Use the exhaustive oracle instead of support growth.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Subcommand, Debug)]
enum RingCommand {
    /// Evaluate an expression.
    Eval(RingEvalArgs),
}

#[derive(Args, Debug)]
struct RingEvalArgs {
    /// Ring presentation JSON file.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    ring: Option<String>,
    /// Use the ring of an embedded fixture.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
    /// Also report coordinates in this named basis.
    #[arg(long)]
    basis: Option<String>,
    /// Also pair the value with this expression.
    #[arg(long, allow_hyphen_values = true)]
    pair: Option<String>,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    name: String,
    /// Run every claim check.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    InputError,
    DomainError,
    InternalError,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InputError => "input_error",
            Status::DomainError => "domain_error",
            Status::InternalError => "internal_error",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::InputError => 1,
            Status::DomainError => 2,
            Status::InternalError => 3,
        }
    }
}

/// What a command produced: a payload, plus a failure status when the
/// payload itself reports a failed check.
pub struct Output {
    pub payload: Json,
    pub diagnostics: Vec<String>,
    pub failure: Option<Failure>,
    pub human: Option<String>,
}

impl Output {
    pub fn new(payload: Json) -> Self {
        Self {
            payload,
            diagnostics: Vec::new(),
            failure: None,
            human: None,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Self {
            status: Status::InputError,
            code: code.into(),
            message: message.into(),
        }
    }
}

impl From<cyclecones::Error> for Failure {
    fn from(e: cyclecones::Error) -> Self {
        Self {
            status: match e.kind() {
                ErrorKind::Input => Status::InputError,
                ErrorKind::Domain => Status::DomainError,
            },
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

fn envelope(status: Status, payload: Json, diagnostics: &[String], reason: Option<&str>, meta: bool) -> Json {
    let mut out = json!({
        "schema": SCHEMA,
        "status": status.as_str(),
        "payload": payload,
        "diagnostics": diagnostics,
        "reason": reason,
    });
    if meta {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        out["meta"] = json!({ "version": env!("CARGO_PKG_VERSION"), "timestamp": secs });
    }
    out
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn pretty(v: &Json) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let wants_json = raw.iter().any(|a| a == "--json");
    let wants_meta = raw.iter().any(|a| a == "--meta");
    let cli = match Cli::try_parse_from(&raw) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                emit(&e.to_string());
                return ExitCode::SUCCESS;
            }
            let message = e.to_string();
            if wants_json {
                let env = envelope(Status::InputError, Json::Null, &[message.trim().to_string()], Some("usage"), wants_meta);
                emit(&format!("{}\n", pretty(&env)));
            } else {
                eprint!("{message}");
            }
            return ExitCode::from(Status::InputError.exit_code());
        }
    };

    let result = catch_unwind(AssertUnwindSafe(|| commands::run(&cli.command)));
    let (status, payload, diagnostics, reason, human) = match result {
        Ok(Ok(out)) => match out.failure {
            None => (Status::Ok, out.payload, out.diagnostics, None, out.human),
            Some(f) => {
                let mut d = out.diagnostics;
                d.push(f.message);
                (f.status, out.payload, d, Some(f.code), out.human)
            }
        },
        Ok(Err(f)) => (f.status, Json::Null, vec![f.message], Some(f.code), None),
        Err(_) => (
            Status::InternalError,
            Json::Null,
            vec!["internal error; please report the command line".into()],
            Some("internal".to_string()),
            None,
        ),
    };

    if cli.json {
        emit(&format!("{}\n", pretty(&envelope(status, payload, &diagnostics, reason.as_deref(), cli.meta))));
    } else {
        match (status, human) {
            (_, Some(text)) => emit(&text),
            (Status::Ok, None) => emit(&format!("{}\n", pretty(&payload))),
            _ => {}
        }
        if cli.meta {
            eprintln!("{}", pretty(&envelope(status, Json::Null, &[], None, true)["meta"]));
        }
        if status != Status::Ok {
            for d in &diagnostics {
                eprintln!("error [{}]: {d}", reason.as_deref().unwrap_or("unknown"));
            }
        }
    }
    ExitCode::from(status.exit_code())
}
