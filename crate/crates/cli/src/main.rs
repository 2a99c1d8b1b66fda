use std::io::Read;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pertinency_cli::config::{parse_config, ConfigError, ExperimentConfig, FieldSpec};
use pertinency_cli::emit::{emit, Format};
use pertinency_cli::run::{prepare_violations, run_experiment, Report, RunOptions};
use pertinency_cli::repro;

/// Pertinency workbench: smash-product Hilbert functions, trace and Molien
/// series, reflection numbers and homological determinants.
#[derive(Parser)]
#[command(name = "pertinency", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment configuration (`-` reads standard input).
    Run {
        config: String,
        #[command(flatten)]
        opts: RunFlags,
    },
    /// Check a configuration without running it.
    Validate { config: String },
    /// Run a bundled reproduction case; `repro list` shows them.
    Repro {
        case: String,
        #[command(flatten)]
        opts: RunFlags,
    },
}

#[derive(Args)]
struct RunFlags {
    /// Overrides max_degree.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Overrides the field: rational, cyclotomic:N or prime:P.
    #[arg(long, value_parser = FieldSpec::parse_flag)]
    field: Option<FieldSpec>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Seeds the certificate prime choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

/// Exit status for a configuration that cannot be run.
struct Invalid(String);

impl RunFlags {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(d) = self.max_degree {
            cfg.max_degree = Some(d);
        }
        if let Some(f) = self.field {
            cfg.field = f;
        }
    }

    fn options(&self) -> RunOptions {
        RunOptions { seed: self.seed, timings: self.timings }
    }
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn run_one(mut cfg: ExperimentConfig, flags: &RunFlags) -> Result<Report, Invalid> {
    flags.apply(&mut cfg);
    run_experiment(&cfg, &flags.options()).map_err(|e| Invalid(e.to_string()))
}

fn report_errors(report: &Report, label: Option<&str>) {
    for (task, message) in report.failures() {
        match label {
            Some(l) => eprintln!("{l}: task {task} failed: {message}"),
            None => eprintln!("task {task} failed: {message}"),
        }
    }
}

fn cmd_run(path: &str, flags: &RunFlags) -> Result<ExitCode> {
    let text = match read_source(path) {
        Ok(t) => t,
        Err(e) => return invalid(&format!("{e:#}")),
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return invalid(&e.to_string()),
    };
    let report = match run_one(cfg, flags) {
        Ok(r) => r,
        Err(Invalid(m)) => return invalid(&m),
    };
    print!("{}", emit(&report, flags.format));
    report_errors(&report, None);
    Ok(ExitCode::from(report.exit_code()))
}

fn cmd_validate(path: &str) -> Result<ExitCode> {
    let text = match read_source(path) {
        Ok(t) => t,
        Err(e) => return invalid(&format!("{e:#}")),
    };
    let checked = parse_config(&text).and_then(|cfg| {
        let v = prepare_violations(&cfg);
        if v.is_empty() {
            Ok(cfg)
        } else {
            Err(ConfigError::Invalid(v))
        }
    });
    match checked {
        Ok(cfg) => {
            let tasks: Vec<_> = cfg.ordered_tasks().iter().map(|t| t.name()).collect();
            println!("valid: n = {}, max_degree = {}, tasks = {}", cfg.ring.n, cfg.max_degree(), tasks.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => invalid(&e.to_string()),
    }
}

fn cmd_repro(id: &str, flags: &RunFlags) -> Result<ExitCode> {
    if id == "list" {
        let width = repro::CASES.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in repro::CASES {
            println!("{:width$}  {}", c.id, c.summary);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let Some(case) = repro::find(id) else {
        bail!("unknown case {id:?}; run `pertinency repro list`");
    };
    let configs = case.parsed().context("bundled configuration")?;
    let mut reports = Vec::new();
    for (name, cfg) in configs {
        match run_one(cfg, flags) {
            Ok(r) => reports.push((name, r)),
            Err(Invalid(m)) => return invalid(&format!("{name}: {m}")),
        }
    }
    match flags.format {
        Format::Json => {
            let entries: Vec<_> = reports
                .iter()
                .map(|(name, r)| serde_json::json!({ "name": name, "report": r }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&entries)?);
        }
        _ => {
            for (k, (name, r)) in reports.iter().enumerate() {
                if k > 0 {
                    println!();
                }
                println!("# {name}");
                print!("{}", emit(r, flags.format));
            }
        }
    }
    for (name, r) in &reports {
        report_errors(r, Some(name));
    }
    Ok(ExitCode::from(reports.iter().map(|(_, r)| r.exit_code()).max().unwrap_or(0)))
}

fn invalid(message: &str) -> Result<ExitCode> {
    eprintln!("{message}");
    Ok(ExitCode::from(2))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, opts } => cmd_run(config, opts),
        Command::Validate { config } => cmd_validate(config),
        Command::Repro { case, opts } => cmd_repro(case, opts),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

