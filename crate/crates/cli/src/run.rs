use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Parser;
use maglab_core::approximation::{
    divergence_experiment, inequality_suite, one_point_sweep, DivergenceOptions, SweepOptions, SweepTable,
};
use maglab_core::geometry::{convex_magnitude_l1_with, intrinsic_volumes_with, IvOptions, MonteCarloOptions, Polytope};
use maglab_core::io::{read_metric_input, read_polytope, IntrinsicVolumeOutput, MagnitudeOutput};
use maglab_core::metric::magnitude_finite;
use maglab_core::Error;

use crate::args::Cli;
use crate::config::{CommandName, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VIOLATIONS: i32 = 4;

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
    Violations(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(Error::NotPositiveDefinite { .. } | Error::DuplicatePoints { .. }) => EXIT_NUMERICAL,
            Self::Core(Error::CapExceeded { .. }) => EXIT_CAP,
            Self::Core(_) | Self::Io(_) => EXIT_INPUT,
            Self::Violations(_) => EXIT_VIOLATIONS,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Core(e) => write!(f, "{e}"),
            Self::Io(msg) | Self::Violations(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

type Outcome = Result<(), Failure>;

/// Parses arguments, runs the command and returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match cli.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return Failure::Core(e).exit_code();
        }
    };
    if cli.opts.print_config {
        println!("{}", cfg.to_json());
        return EXIT_OK;
    }
    match execute(&cfg) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

/// Runs the configured command inside a pool of `cfg.threads` workers.
pub fn execute(cfg: &RunConfig) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
    pool.install(|| match cfg.command {
        Some(CommandName::Mag) => cmd_mag(cfg),
        Some(CommandName::Ivol) => cmd_ivol(cfg),
        Some(CommandName::ConvexMag) => cmd_convex_mag(cfg),
        Some(CommandName::Sweep) => cmd_sweep(cfg),
        Some(CommandName::Diverge) => cmd_diverge(cfg),
        Some(CommandName::Check) => cmd_check(cfg),
        None => Err(Error::validation("no command given").into()),
    })
}

fn input(cfg: &RunConfig) -> Result<&Path, Failure> {
    cfg.input
        .as_deref()
        .ok_or_else(|| Error::validation("--input is required for this command").into())
}

fn polytope(cfg: &RunConfig) -> Result<Polytope, Failure> {
    Ok(read_polytope(input(cfg)?)?)
}

fn iv_options(cfg: &RunConfig) -> IvOptions {
    IvOptions {
        cap: cfg.cap,
        monte_carlo: (cfg.mc_samples > 0).then_some(MonteCarloOptions {
            samples_per_k: cfg.mc_samples,
            seed: cfg.seed,
        }),
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit_json(cfg: &RunConfig, value: &impl serde::Serialize) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    match &cfg.output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// CSV to the output path (or stdout) and, with a path, a `.json` twin.
fn emit_table(cfg: &RunConfig, csv: &str, json: &str) -> Outcome {
    let Some(path) = &cfg.output else {
        print!("{csv}");
        return Ok(());
    };
    let is_json = path.extension().is_some_and(|e| e == "json");
    let csv_path = if is_json { path.with_extension("csv") } else { path.clone() };
    write_file(&csv_path, csv)?;
    write_file(&json_twin(&csv_path), &format!("{json}\n"))
}

pub fn json_twin(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn cmd_mag(cfg: &RunConfig) -> Outcome {
    let metric_input = read_metric_input(input(cfg)?, cfg.metric, false)?;
    let space = metric_input.to_space()?;
    if cfg.check_triangle {
        space.check_triangle_inequality(cfg.tolerances.triangle)?;
    }
    let w = magnitude_finite(&space)?;
    if let Some(warning) = &w.warning {
        log::warn!("ill-conditioned solve: pivot ratio {:e}", warning.pivot_ratio);
    }
    emit_json(cfg, &MagnitudeOutput::from(&w))
}

fn cmd_ivol(cfg: &RunConfig) -> Outcome {
    let iv = intrinsic_volumes_with(&polytope(cfg)?, &iv_options(cfg))?;
    emit_json(cfg, &IntrinsicVolumeOutput::from(&iv))
}

fn cmd_convex_mag(cfg: &RunConfig) -> Outcome {
    let result = convex_magnitude_l1_with(&polytope(cfg)?, &iv_options(cfg))?;
    emit_json(cfg, &result)
}

fn table_failure(table: &SweepTable, bad: &[usize]) -> Outcome {
    if bad.is_empty() {
        return Ok(());
    }
    let params: Vec<String> = bad.iter().map(|&i| table.rows[i].param.to_string()).collect();
    Err(Failure::Violations(format!(
        "ordering violated in {} row(s) at param {}",
        bad.len(),
        params.join(", ")
    )))
}

fn cmd_sweep(cfg: &RunConfig) -> Outcome {
    let opts = SweepOptions {
        budget: cfg.budget,
        scheme: cfg.scheme,
        seed: cfg.seed,
        iv: iv_options(cfg),
    };
    let table = one_point_sweep(&polytope(cfg)?, &cfg.t_list, &opts)?;
    emit_table(cfg, &table.to_csv(), &table.to_json())?;
    table_failure(&table, &table.sandwich_violations(cfg.tolerances.table))
}

fn cmd_diverge(cfg: &RunConfig) -> Outcome {
    let opts = DivergenceOptions {
        interior_samples: cfg.interior_samples,
        seed: cfg.seed,
        ..DivergenceOptions::default()
    };
    let report = divergence_experiment(&cfg.spec, &cfg.n_list, &opts)?;
    for c in &report.crossings {
        match c.n {
            Some(n) => log::info!("half sum reaches {} at N = {n}", c.threshold),
            None => log::info!("half sum stays below {} within the search limit", c.threshold),
        }
    }
    emit_table(cfg, &report.to_csv(), &report.to_json())?;
    let tol = cfg.tolerances.table;
    let mut bad = report.table.sandwich_violations(tol);
    for (i, (row, half)) in report.table.rows.iter().zip(&report.half_sums).enumerate() {
        if row.formula_value < half - tol && !bad.contains(&i) {
            bad.push(i);
        }
    }
    bad.sort_unstable();
    table_failure(&report.table, &bad)
}

fn cmd_check(cfg: &RunConfig) -> Outcome {
    let report = inequality_suite(&cfg.suite())?;
    emit_json(cfg, &report)?;
    match report.total_violations() {
        0 => Ok(()),
        n => Err(Failure::Violations(format!(
            "{n} inequality violation(s) across {} polytopes",
            report.polytopes
        ))),
    }
}
