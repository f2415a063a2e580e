use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};

use trigauge_cli::{render, run, Command, OutputFormat, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Info,
    Polytope,
    Volume,
    SectionCheck,
    FlorentinoCheck,
    AbelianCheck,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Info => Command::Info,
            CommandArg::Polytope => Command::Polytope,
            CommandArg::Volume => Command::Volume,
            CommandArg::SectionCheck => Command::SectionCheck,
            CommandArg::FlorentinoCheck => Command::FlorentinoCheck,
            CommandArg::AbelianCheck => Command::AbelianCheck,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// SU(2) gauge theory on trivalent graphs: polytopes, sections and checks.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on
/// invalid input (with a JSON error record on stdout).
#[derive(Debug, Parser)]
#[command(name = "trigauge", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,

    /// Builtin graph (theta, gamma2, theta3, theta^k) or a JSON/TOML file.
    #[arg(value_name = "GRAPH")]
    graph_pos: Option<String>,

    #[arg(long, value_name = "PATH|BUILTIN")]
    graph: Option<String>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 10_000)]
    samples: usize,

    /// Defaults to 1e-9 (section), 1e-6 (florentino) or 1e-10 (abelian).
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,

    #[arg(long, value_enum, default_value = "json")]
    output: FormatArg,

    /// Comma-separated edge ids to twist.
    #[arg(long, value_delimiter = ',')]
    twist: Option<Vec<usize>>,

    /// Comma-separated coordinates of a point to test (repeatable).
    #[arg(long = "point", value_name = "X1,X2,...")]
    points: Vec<String>,
}

fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad coordinate {t:?}: {e}"))
        })
        .collect()
}

fn fail_input(kind: &'static str, message: String) -> ExitCode {
    println!(
        "{}",
        serde_json::json!({"error": {"kind": kind, "message": message}})
    );
    ExitCode::from(2)
}

fn main() -> Result<ExitCode> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.render().to_string();
            return Ok(fail_input("usage", message.trim_end().to_string()));
        }
    };
    let graph = match (cli.graph_pos, cli.graph) {
        (Some(a), Some(b)) if a != b => {
            return Ok(fail_input(
                "invalid-config",
                format!("two graphs given: {a:?} and {b:?}"),
            ));
        }
        (Some(g), _) | (None, Some(g)) => g,
        (None, None) => return Ok(fail_input("invalid-config", "no graph given".into())),
    };
    let points = match cli
        .points
        .iter()
        .map(|p| parse_point(p))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(p) => p,
        Err(message) => return Ok(fail_input("invalid-config", message)),
    };
    let command = Command::from(cli.command);
    let config = RunConfig {
        command,
        graph,
        seed: cli.seed,
        samples: cli.samples,
        tolerance: cli.tol.unwrap_or_else(|| command.default_tolerance()),
        output: match cli.output {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        },
        twist: cli.twist,
        points,
    };
    match run(&config) {
        Ok(outcome) => {
            std::io::stdout()
                .lock()
                .write_all(render(&outcome.report, config.output).as_bytes())
                .context("writing report")?;
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
        Err(e) => {
            println!("{}", e.to_json());
            Ok(ExitCode::from(2))
        }
    }
}
