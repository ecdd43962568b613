use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plcrf_core::analytic::AnalyticConfig;
use plcrf_cli::figures::{emit_figure, parse_sweep_param};
use plcrf_cli::output::write_sweep_csv;
use plcrf_cli::scenario::Scenario;
use plcrf_cli::sweep::{run_sweep, SweepResult};
use plcrf_cli::validate::{run_validation, Mutation, ValidationOptions};
use plcrf_cli::CliError;

#[derive(Parser)]
#[command(name = "plcrf", version, about = "Outage, BER and capacity of dual-hop PLC/RF relay links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario file over its SNR grid and write a CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate the data and a gnuplot script for one result figure.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=9))]
        id: u8,
        #[arg(long)]
        out: PathBuf,
        /// Coarse grid and 1e5 Monte Carlo samples.
        #[arg(long)]
        quick: bool,
        /// Replace the curve family, e.g. `eta=1,5,10`.
        #[arg(long)]
        sweep_param: Option<String>,
    },
    /// Run the validation suite and write report.json, sweep.csv and trends.csv.
    Validate {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value = "validation")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo worker threads (results do not depend on this).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
    /// Print the default scenario as JSON.
    PrintDefaults,
}

fn report_failures(result: &SweepResult) -> Result<(), CliError> {
    let mut n = 0;
    for r in result.failures() {
        n += 1;
        eprintln!(
            "row failed: {} dB {} {} {}: {}",
            r.gamma_bar_db,
            r.protocol.as_str(),
            r.metric.as_str(),
            r.variant.as_str(),
            r.error.as_deref().unwrap_or("")
        );
    }
    if n > 0 {
        return Err(CliError::Numerical(format!("{n} of {} rows failed", result.rows.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = AnalyticConfig::default();
    match cli.command {
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", config.display())))?;
            let scenario = Scenario::from_json(&text)?;
            let result = run_sweep(&scenario, &cfg);
            write_sweep_csv(&result, fs::File::create(&out)?)?;
            report_failures(&result)
        }
        Command::Figure {
            id,
            out,
            quick,
            sweep_param,
        } => {
            let family = sweep_param.as_deref().map(parse_sweep_param).transpose()?;
            let fig = emit_figure(id, &out, quick, family, &cfg)?;
            println!("wrote {} and {}", fig.csv_path.display(), fig.script_path.display());
            report_failures(&fig.result)
        }
        Command::Validate {
            quick,
            out,
            seed,
            workers,
            mutate,
        } => {
            let mut opts = ValidationOptions {
                quick,
                ..ValidationOptions::default()
            };
            if let Some(s) = seed {
                opts.seed = s;
            }
            if let Some(w) = workers {
                if w == 0 {
                    return Err(CliError::Usage("--workers must be at least 1".into()));
                }
                opts.workers = w;
            }
            if let Some(m) = mutate {
                opts.mutation =
                    Some(Mutation::parse(&m).ok_or_else(|| CliError::Usage(format!("unknown mutation target {m:?}")))?);
            }
            let run = run_validation(&opts)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("report.json"), run.report.to_json())?;
            fs::write(out.join("sweep.csv"), &run.sweep_csv)?;
            fs::write(out.join("trends.csv"), &run.trends_csv)?;
            for c in &run.report.criteria {
                println!(
                    "{} criterion {}: {} ({} checks, {} failed)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.title,
                    c.checks,
                    c.failed
                );
            }
            for o in &run.report.observations {
                println!("note [{}]: {}", o.criterion, o.text);
            }
            println!("elapsed {:.1} s", run.report.elapsed_seconds);
            if run.report.passed {
                Ok(())
            } else {
                for c in run.report.checks.iter().filter(|c| !c.passed) {
                    eprintln!("failed [{}] {}: {:.3e} > {:.1e}", c.criterion, c.name, c.achieved, c.tolerance);
                }
                Err(CliError::Validation("see report.json".into()))
            }
        }
        Command::PrintDefaults => {
            println!("{}", Scenario::default().to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
