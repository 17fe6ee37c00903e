mod args;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command, Format, RunArgs, SuiteArg};
use config::RunConfig;
use fracmat::verify::{self, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] fracmat::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot write output: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} checks failed")]
    Checks { failed: usize, total: usize },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Model(
                fracmat::Error::SingularMatrix { .. } | fracmat::Error::NonCausal { .. },
            )
            | Self::Checks { .. } => 2,
            _ => 1,
        }
    }
}

fn run_solver(cfg: &RunConfig, run: &RunArgs) -> Result<(), CliError> {
    let grid = cfg.grid()?;
    let sol = fracmat::solve_problem(&cfg.problem(), &grid, cfg.solver_path())?;
    let sink: Box<dyn Write> = match &run.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match run.format {
        Format::Csv => output::write_csv(&mut sink, &sol)?,
        Format::Json => output::write_json(&mut sink, cfg, &sol)?,
    }
    sink.flush()?;
    Ok(())
}

fn run_verify(suite: SuiteArg) -> Result<(), CliError> {
    let suite = match suite {
        SuiteArg::Coeffs => Suite::Coeffs,
        SuiteArg::Operators => Suite::Operators,
        SuiteArg::Oracle => Suite::Oracle,
        SuiteArg::Examples => Suite::Examples,
    };
    if suite == Suite::Oracle {
        println!("beta      m   max rel err (interior third)");
        for (beta, m, err) in verify::riesz_convergence_table()? {
            println!("{beta:<5} {m:>5}   {err:.3e}");
        }
    }
    let checks = verify::run_suite(suite);
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Checks {
            failed,
            total: checks.len(),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Example { number, run } => {
            let cfg = RunConfig::from_example(number, &run)?;
            run_solver(&cfg, &run)
        }
        Command::Solve {
            run,
            source,
            u0_scale,
        } => {
            let cfg = RunConfig::custom(&run, source, u0_scale)?;
            run_solver(&cfg, &run)
        }
        Command::Verify { suite } => run_verify(suite),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracmat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
