use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algpencil_cli::commands::{self, Report, EXIT_OK, EXIT_PARSE};
use algpencil_cli::run_batch;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "algpencil", version, about = "Exact pencil analysis of associative algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Associativity and unity of algebra documents
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Characteristic form, stabilizers, index and spectral decomposition
    Analyze {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Comma-separated rationals F(e_1),…,F(e_n)
        #[arg(long, allow_hyphen_values = true)]
        functional: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Shift for the pencil operator
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Canonical form in dimension 2, or 3 with unity
    Canon {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Split a unital index-1 algebra and check its identities
    Split {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        functional: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Assemble an algebra from ℌ, ℌ' and their pairing
    Build { h: PathBuf, hprime: PathBuf, pairing: PathBuf },
    /// Print the document of a named algebra
    Registry { name: String },
}

fn read(path: &Path) -> Result<String, Report> {
    fs::read_to_string(path).map_err(|e| Report {
        json: serde_json::json!({"error": {"kind": "ParseError", "message": format!("{}: {e}", path.display())}}),
        text: format!("parse error: {}: {e}\n", path.display()),
        code: EXIT_PARSE,
        document: None,
    })
}

fn per_file(paths: &[PathBuf], f: impl Fn(&str) -> Report + Sync + Send) -> Vec<Report> {
    run_batch(paths, |p| match read(p) {
        Ok(text) => f(&text),
        Err(r) => r,
    })
}

fn emit(paths: Option<&[PathBuf]>, reports: &[Report], json: bool) -> String {
    if reports.len() == 1 {
        return reports[0].render(json);
    }
    let paths = paths.unwrap_or_default();
    if json {
        let items: Vec<Value> = reports
            .iter()
            .zip(paths)
            .map(|(r, p)| serde_json::json!({"path": p.display().to_string(), "report": r.json}))
            .collect();
        let mut s = serde_json::to_string_pretty(&items).expect("serializable");
        s.push('\n');
        s
    } else {
        reports
            .iter()
            .zip(paths)
            .map(|(r, p)| format!("== {} ==\n{}", p.display(), r.render(false)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            return ExitCode::from(code as u8);
        }
    };
    let (paths, reports) = match &cli.command {
        Command::Check { paths } => (Some(paths.as_slice()), per_file(paths, commands::check)),
        Command::Analyze { paths, functional, seed, mu } => (
            Some(paths.as_slice()),
            per_file(paths, |t| commands::analyze(t, functional.as_deref(), *seed, mu.as_deref())),
        ),
        Command::Canon { paths } => (Some(paths.as_slice()), per_file(paths, commands::canon)),
        Command::Split { paths, functional, seed } => {
            (Some(paths.as_slice()), per_file(paths, |t| commands::split(t, functional.as_deref(), *seed)))
        }
        Command::Build { h, hprime, pairing } => {
            let r = match (read(h), read(hprime), read(pairing)) {
                (Ok(a), Ok(b), Ok(c)) => commands::build(&a, &b, &c),
                (Err(r), _, _) | (_, Err(r), _) | (_, _, Err(r)) => r,
            };
            (None, vec![r])
        }
        Command::Registry { name } => (None, vec![commands::registry(name)]),
    };
    let output = emit(paths, &reports, cli.json);
    let code = reports.iter().map(|r| r.code).max().unwrap_or(EXIT_OK);
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &output) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_PARSE as u8);
            }
        }
        None => print!("{output}"),
    }
    ExitCode::from(code as u8)
}
