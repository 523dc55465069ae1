use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gspan_cli::commands::{
    cmd_check, cmd_compose, cmd_euler, cmd_example_stirling, cmd_matrix, cmd_validate, CommandError, Which,
};
use gspan_cli::document::{parse_document, Document};

/// Exact computations with groupoids and G-spans.
#[derive(Parser)]
#[command(name = "gspan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Euler characteristic of a groupoid or of the apex of a span.
    Euler {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Matrix of a span, optionally evaluated under a character.
    Matrix {
        file: PathBuf,
        #[arg(long)]
        span: String,
        #[arg(long)]
        character: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the composite of two spans as a document fragment.
    Compose {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "composite")]
        out: String,
    },
    /// Verify identities on a document and on seeded random instances.
    Check {
        file: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        which: Which,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Built-in examples.
    Example {
        #[command(subcommand)]
        example: Example,
    },
}

#[derive(Subcommand)]
enum Example {
    /// Stirling numbers of both kinds as span matrices.
    Stirling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        character: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &PathBuf) -> Result<Document, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_document(&text)?)
}

fn run(cli: Cli) -> Result<(String, bool), CommandError> {
    Ok(match cli.command {
        Command::Validate { file } => (cmd_validate(&load(&file)?), true),
        Command::Euler { file, name } => (cmd_euler(&load(&file)?, &name)?, true),
        Command::Matrix { file, span, character, json } => {
            (cmd_matrix(&load(&file)?, &span, character.as_deref(), json)?, true)
        }
        Command::Compose { file, left, right, out } => {
            (cmd_compose(&load(&file)?, &left, &right, &out)?.to_json(), true)
        }
        Command::Check { file, which, seed, trials } => {
            let doc = file.as_ref().map(load).transpose()?;
            let report = cmd_check(doc.as_ref(), which, seed, trials);
            (report.render().trim_end().to_string(), report.passed())
        }
        Command::Example {
            example: Example::Stirling { n, character, json },
        } => (cmd_example_stirling(n, character.as_deref(), json)?, true),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, passed)) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
