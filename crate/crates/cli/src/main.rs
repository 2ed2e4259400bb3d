use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use wcolab::Exec;
use wcolab_cli::report::{classification_of, convergence_csv, full_report, run, sweep, verify, Envelope};
use wcolab_cli::scenario::{parse_scenario, Scenario};
use wcolab_cli::{presets, CliError};

#[derive(Parser)]
#[command(name = "wcolab", version, about = "Weighted composition operator laboratory")]
struct Cli {
    /// Override the scenario or preset seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a tolerance, e.g. --tol commutator=1e-8. Repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE", global = true)]
    tol: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the convergence table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Write the N x N section of the scenario's operator as CSV (i,j,re,im).
    #[arg(long, global = true)]
    export_matrix: Option<PathBuf>,
    /// Run every loop sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the symbol phi of a scenario.
    Classify { scenario: PathBuf },
    /// Run a scenario's checks and the full defect report.
    Diagnose { scenario: PathBuf },
    /// Run a built-in preset; exit code 0 iff every expectation holds.
    Verify { preset: String },
    /// Re-run section metrics over increasing orders.
    Sweep {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
        /// Append the Gelfand sequence up to this power on the largest section.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Full report for a scenario, with an optional sweep table.
    Report {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// List the built-in presets.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn exec_of(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn load(cli: &Cli, path: &Path) -> Result<Scenario, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut s = parse_scenario(&text)?;
    apply_overrides(cli, &mut s)?;
    Ok(s)
}

fn apply_overrides(cli: &Cli, s: &mut Scenario) -> Result<(), CliError> {
    if let Some(seed) = cli.seed {
        s.doc.seed = seed;
    }
    for kv in &cli.tol {
        let (key, value) =
            kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--tol expects key=value, got {kv:?}")))?;
        let value: f64 =
            value.trim().parse().map_err(|_| CliError::Usage(format!("--tol {key}: {value:?} is not a number")))?;
        s.tol.set(key.trim(), value)?;
        s.doc.tol.insert(key.trim().to_string(), value);
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit<T: Serialize>(cli: &Cli, body: T) -> Result<(), CliError> {
    let json = Envelope::new(body).to_json()?;
    match &cli.out {
        Some(p) => write_text(p, &(json + "\n")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn export_matrix(cli: &Cli, s: &Scenario, exec: Exec) -> Result<(), CliError> {
    let Some(path) = &cli.export_matrix else {
        return Ok(());
    };
    let t = s.op.truncate(s.n(), exec)?;
    let mut out = String::from("i,j,re,im\n");
    for j in 0..t.matrix.cols() {
        for i in 0..t.matrix.rows() {
            let z = t.matrix[(i, j)];
            out.push_str(&format!("{i},{j},{:e},{:e}\n", z.re, z.im));
        }
    }
    write_text(path, &out)
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let exec = exec_of(cli);
    match &cli.command {
        Command::Classify { scenario } => {
            let s = load(cli, scenario)?;
            export_matrix(cli, &s, exec)?;
            #[derive(Serialize)]
            struct Classified<'a> {
                scenario: &'a wcolab_cli::ScenarioDoc,
                classification: Option<wcolab::MapClassification>,
            }
            emit(cli, Classified { scenario: &s.doc, classification: classification_of(&s) })?;
            Ok(true)
        }
        Command::Diagnose { scenario } => {
            let s = load(cli, scenario)?;
            export_matrix(cli, &s, exec)?;
            let r = run(&s, true, exec);
            let ok = r.all_expectations_hold;
            report_failures(&r.checks);
            emit(cli, r)?;
            Ok(ok)
        }
        Command::Verify { preset } => {
            let p = presets::find(preset).ok_or_else(|| CliError::UnknownPreset(preset.clone()))?;
            if !cli.tol.is_empty() {
                return Err(CliError::Usage("presets fix their tolerances; --tol is not accepted by verify".into()));
            }
            let r = verify(p, cli.seed.unwrap_or(0), exec)?;
            let ok = r.all_expectations_hold;
            for run in &r.runs {
                report_failures(&run.checks);
            }
            emit(cli, r)?;
            Ok(ok)
        }
        Command::Sweep { scenario, orders, k_max } => {
            let s = load(cli, scenario)?;
            export_matrix(cli, &s, exec)?;
            let rows = sweep(&s, orders, *k_max, exec)?;
            if let Some(p) = &cli.csv {
                write_text(p, &convergence_csv(&rows))?;
            }
            #[derive(Serialize)]
            struct Swept<'a> {
                scenario: &'a wcolab_cli::ScenarioDoc,
                convergence: Vec<wcolab_cli::report::ConvergenceRow>,
            }
            emit(cli, Swept { scenario: &s.doc, convergence: rows })?;
            Ok(true)
        }
        Command::Report { scenario, orders, k_max } => {
            if cli.out.is_none() {
                return Err(CliError::Usage("report needs --out <path>".into()));
            }
            let s = load(cli, scenario)?;
            export_matrix(cli, &s, exec)?;
            let r = full_report(&s, orders.as_deref(), *k_max, exec)?;
            if let (Some(p), Some(rows)) = (&cli.csv, &r.convergence) {
                write_text(p, &convergence_csv(rows))?;
            }
            let ok = r.all_expectations_hold;
            report_failures(&r.checks);
            emit(cli, r)?;
            Ok(ok)
        }
        Command::Presets => {
            for p in presets::PRESETS {
                println!("{:<28} {}", p.id, p.expectation);
            }
            Ok(true)
        }
    }
}

fn report_failures(checks: &[wcolab_cli::CheckResult]) {
    for c in checks.iter().filter(|c| c.status == wcolab_cli::Status::Fail) {
        match &c.violated {
            Some(v) => eprintln!("FAIL {}: {} (lhs {:e}, rhs {:e})", c.name, v.statement, v.lhs, v.rhs),
            None => eprintln!("FAIL {}", c.name),
        }
    }
}
