//! `mrqsim` — scenario-driven runner for the MR quantum-computing simulator.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when a numerical
//! invariant is violated. Errors also emit a machine-parsable JSON record on
//! stderr.

use clap::{Parser, Subcommand};
use mrqsim_core::commands::{run_command, trajectory_csv, CommandKind, RunResult};
use mrqsim_core::scenario::Scenario;
use mrqsim_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mrqsim", version, about = "MR quantum-computing desk simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, clap::Args)]
struct RunArgs {
    /// Scenario configuration file (JSON).
    #[arg(long)]
    scenario: PathBuf,

    /// Directory for result JSON and trajectory CSV files.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Overrides the scenario's ensemble seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for ensemble updates (0 = library default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Local fields, Larmor frequencies and per-site homogeneity.
    Field(RunArgs),
    /// Hadamard/CNOT gate algebra and entangled-state fidelities.
    Gate(RunArgs),
    /// Stimulated-echo purification with the pseudo-pure ledger.
    Purify(RunArgs),
    /// Compile and verify the two-qubit entanglement pulse program.
    Bell(RunArgs),
    /// T1-recovery superposition sequence.
    T1had(RunArgs),
}

impl Command {
    fn split(&self) -> (CommandKind, &RunArgs) {
        match self {
            Command::Field(args) => (CommandKind::Field, args),
            Command::Gate(args) => (CommandKind::Gate, args),
            Command::Purify(args) => (CommandKind::Purify, args),
            Command::Bell(args) => (CommandKind::Bell, args),
            Command::T1had(args) => (CommandKind::T1Had, args),
        }
    }
}

fn error_record(kind: &str, code: i32, message: &str) -> String {
    serde_json::json!({
        "error": { "kind": kind, "code": code, "message": message }
    })
    .to_string()
}

fn fail(kind: &str, code: u8, message: &str) -> ExitCode {
    eprintln!("{}", error_record(kind, code as i32, message));
    ExitCode::from(code)
}

fn write_outputs(result: &RunResult, out_dir: &std::path::Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let json_path = out_dir.join(format!("{}_result.json", result.command));
    std::fs::write(&json_path, result.to_json())?;
    written.push(json_path);
    if let Some(trajectory) = result.trajectory() {
        let csv_path = out_dir.join(format!("{}_trajectory.csv", result.command));
        std::fs::write(&csv_path, trajectory_csv(trajectory))?;
        written.push(csv_path);
    }
    Ok(written)
}

fn run(kind: CommandKind, args: &RunArgs) -> ExitCode {
    let (scenario, bytes) = match Scenario::load(&args.scenario) {
        Ok(loaded) => loaded,
        Err(err) => return fail("scenario", 2, &err.to_string()),
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.threads).build() {
        Ok(pool) => pool,
        Err(err) => return fail("threads", 2, &err.to_string()),
    };

    let result: Result<RunResult, Error> =
        pool.install(|| run_command(kind, &scenario, &bytes, args.seed));
    match result {
        Ok(result) => {
            println!("{}", result.to_json());
            if let Some(out_dir) = &args.out {
                if let Err(err) = write_outputs(&result, out_dir) {
                    return fail("io", 2, &format!("cannot write outputs: {err}"));
                }
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = err.exit_code() as u8;
            fail(err.kind(), code, &err.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    run(kind, args)
}
