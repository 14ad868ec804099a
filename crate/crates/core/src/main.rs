use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bimodconn::fixtures::{fixture, FIXTURES};
use bimodconn::model::parse_model;
use bimodconn::pipeline::{run, Command};
use bimodconn::Error;

/// Exact checks for connections on bimodules over finite-dimensional algebras.
#[derive(Parser)]
#[command(name = "bimodconn", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Override the truncation degree of the calculus.
    #[arg(long)]
    truncation: Option<usize>,
    /// Restrict per-connection checks to this connection.
    #[arg(long)]
    connection: Option<String>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Axioms of the algebra, modules, calculus and connections.
    Check(RunArgs),
    /// Induced calculus, κ and d_∇².
    Induce(RunArgs),
    /// Existence of σ, with a witness when absent.
    Sigma(RunArgs),
    /// Curvature linearity, J and Ω(M).
    Curvature(RunArgs),
    /// Tensor products of connections.
    Tensor(RunArgs),
    /// Compare the calculus with the induced one.
    Compare(RunArgs),
    /// Every section above.
    All(RunArgs),
    /// Write the shipped fixture models into a directory.
    Fixtures {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn write_fixtures(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    for name in FIXTURES {
        let path = dir.join(format!("{name}.model"));
        std::fs::write(&path, fixture(name)?.to_json())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn analyze(command: Command, args: &RunArgs) -> Result<i32, Error> {
    let model = parse_model(&args.model, args.truncation)?;
    let report = run(command, &model, args.connection.as_deref())?;
    match args.json.as_deref() {
        Some(p) if p == Path::new("-") => print!("{}", report.to_json()),
        Some(p) => {
            std::fs::write(p, report.to_json())?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Induce(a) => (Command::Induce, a),
        Cmd::Sigma(a) => (Command::Sigma, a),
        Cmd::Curvature(a) => (Command::Curvature, a),
        Cmd::Tensor(a) => (Command::Tensor, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::All(a) => (Command::All, a),
        Cmd::Fixtures { out } => {
            return match write_fixtures(&out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match analyze(command, &args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
