use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use foliated_tori::Tolerances;
use foliated_tori_cli::commands::{run, Command};
use foliated_tori_cli::document::Document;

/// Period matrices, polarizations and moduli checks for complex foliated tori.
///
/// Reads a JSON document from `--in` or stdin and writes a JSON report to
/// `--out` or stdout. Exit status: 0 valid, 1 checked and invalid, 2 malformed.
#[derive(Debug, Parser)]
#[command(name = "ftori", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    #[arg(long = "out", global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_rank: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_eq: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_pos: f64,
}

fn malformed(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: malformed input: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances {
        eps_rank: cli.eps_rank,
        eps_eq: cli.eps_eq,
        eps_pos: cli.eps_pos,
        ..Tolerances::default()
    };

    let doc = if cli.command.reads_input() {
        let text = match &cli.input {
            Some(path) => fs::read_to_string(path),
            None => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map(|_| s)
            }
        };
        let text = match text {
            Ok(t) => t,
            Err(err) => return malformed(err),
        };
        match Document::parse(&text) {
            Ok(doc) => Some(doc),
            Err(err) => return malformed(err),
        }
    } else {
        None
    };

    let outcome = match run(&cli.command, doc.as_ref(), &tol) {
        Ok(o) => o,
        Err(err) => return malformed(err),
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.output),
        None => io::stdout().write_all(outcome.output.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("error: cannot write output: {err}");
        return ExitCode::from(2);
    }
    if outcome.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
