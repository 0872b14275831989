use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ellid::cli::{self, Format, RunConfig};
use ellid::registry::Registry;
use ellid::Error;

/// Numerical audit of theta-function and elliptic-integral identities.
#[derive(Parser)]
#[command(name = "ellid", version)]
struct Cli {
    /// Series truncation tolerance.
    #[arg(long, global = true, default_value_t = 1e-14)]
    tol: f64,

    /// Maximum number of terms per series.
    #[arg(long, global = true, env = "ELLID_CAP", default_value_t = 10_000)]
    cap: usize,

    /// Report format: json, csv or pretty.
    #[arg(long, global = true, default_value = "pretty", value_parser = parse_format)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid evaluation (default: available cores).
    #[arg(long, global = true)]
    parallel: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered identities.
    List {
        /// Restrict to these ids.
        ids: Vec<String>,
    },
    /// Audit one identity over its grid, all variants.
    Check {
        id: String,
        /// Replace a parameter's grid: key=v1,v2,...
        #[arg(long = "grid")]
        grid: Vec<String>,
    },
    /// Audit every identity (or those named with --only).
    CheckAll {
        #[arg(long = "only")]
        only: Vec<String>,
        #[arg(long = "grid")]
        grid: Vec<String>,
    },
    /// Evaluate one function, e.g. `eval K --k 0.5`.
    #[command(after_help = eval_help())]
    Eval {
        function: String,
        /// Parameters as --name value.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
}

fn eval_help() -> String {
    format!("Functions:\n{}", cli::eval_listing())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn config(cli: &Cli, filter: Vec<String>) -> RunConfig {
    let mut c = RunConfig {
        tolerance: cli.tol,
        cap: cli.cap,
        output: cli.out.clone(),
        format: cli.format,
        filter,
        ..RunConfig::default()
    };
    if let Some(p) = cli.parallel {
        c.parallelism = p;
    }
    c
}

fn emit(text: &str, to_file: bool) {
    if !to_file {
        print!("{text}");
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let registry = Registry::standard();
    match &cli.command {
        Command::List { ids } => {
            print!("{}", cli::cmd_list(&registry, ids)?);
            Ok(0)
        }
        Command::Check { id, grid } => {
            let c = config(cli, vec![id.clone()]);
            let outcome = cli::cmd_check(&registry, id, &cli::collect_overrides(grid)?, &c)?;
            emit(&outcome.rendered, c.output.is_some());
            report_unmet(&outcome.unmet);
            Ok(outcome.exit_code as u8)
        }
        Command::CheckAll { only, grid } => {
            let c = config(cli, only.clone());
            let outcome = cli::cmd_check_all(&registry, &cli::collect_overrides(grid)?, &c)?;
            emit(&outcome.rendered, c.output.is_some());
            report_unmet(&outcome.unmet);
            Ok(outcome.exit_code as u8)
        }
        Command::Eval { function, params } => {
            let c = config(cli, Vec::new());
            c.validate()?;
            let params = cli::parse_eval_args(params)?;
            print!("{}", cli::cmd_eval(function, &params, &c.policy())?);
            Ok(0)
        }
    }
}

fn report_unmet(unmet: &[String]) {
    for id in unmet {
        eprintln!("expected PASS not met: {id}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ellid: {e}");
            ExitCode::from(2)
        }
    }
}
