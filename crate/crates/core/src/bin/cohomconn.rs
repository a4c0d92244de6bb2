use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cohomconn::experiment::{
    emit, run_expect, run_hitting_experiment, run_shell_check, run_verify_suite, run_window_experiment,
    sample_gp, sample_report, ExperimentConfig,
};
use cohomconn::process::{sample_birth_times_with, scan_process, ScanOptions, TraceRow};
use cohomconn::thresholds::Thresholds;
use cohomconn::{Complex, Error, Model};

#[derive(Parser)]
#[command(name = "cohomconn", version, about = "Cohomological connectivity of random simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarise one complex, sampled or read from a fixture file.
    Sample(SampleArgs),
    /// Betti-number distribution inside the critical window.
    Window(Common),
    /// Hitting times from full process scans.
    Hitting(Common),
    /// Shell counts through random sets at the sparse probability.
    Shells(Common),
    /// Exhaustive small-case checks.
    Verify(Common),
    /// Analytic thresholds and first-moment estimates.
    Expect(Common),
}

#[derive(Args, Default)]
struct Common {
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    /// Window parameter.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    model: Option<Model>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Sets drawn per complex by `shells`.
    #[arg(long)]
    samples: Option<usize>,
    /// Output directory; the summary goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    /// Read the complex from a fixture file instead of sampling.
    #[arg(long)]
    complex_file: Option<PathBuf>,
    /// Scan a birth-time table and write the per-event trace to this CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_toml(&fs::read_to_string(path)?)?,
            None => ExperimentConfig::default(),
        };
        if let Some(n) = &self.n {
            cfg.n = n.clone();
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        take!(k, j, c, trials, seed, model, workers, samples);
        if self.p.is_some() {
            cfg.p = self.p;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_trace(path: &PathBuf, j: usize, rows: &[TraceRow]) -> Result<(), Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TraceRow::csv_header(j))?;
    for r in rows {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

fn sample(args: &SampleArgs) -> Result<(), Error> {
    let cfg = args.common.resolve()?;
    let n = cfg.n[0];
    let (complex, p) = match &args.complex_file {
        Some(path) => (Complex::parse_fixture(&fs::read_to_string(path)?)?, None),
        None => {
            let p = match cfg.p {
                Some(p) => p,
                None => Thresholds::new(n, cfg.k, cfg.j)?.window_p(cfg.c),
            };
            (sample_gp(n, cfg.k, p, cfg.model, &mut cfg.rng(n, 0))?, Some(p))
        }
    };
    let report = sample_report(&complex, cfg.j, p)?;
    if let Some(path) = &args.trace {
        let table = sample_birth_times_with(complex.n(), complex.k(), &mut cfg.rng(complex.n(), 1))?;
        let scan = scan_process(&table, cfg.j, complex.model(), ScanOptions { trace: true })?;
        write_trace(path, cfg.j, &scan.trace)?;
    }
    emit::<_, ()>(cfg.out.as_deref(), &report, None)
}

/// Returns whether every verification passed.
fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Sample(a) => sample(a)?,
        Command::Window(a) => {
            let r = run_window_experiment(&a.resolve()?)?;
            emit(r.config.out.as_deref(), &r, Some(&r.records))?;
        }
        Command::Hitting(a) => {
            let r = run_hitting_experiment(&a.resolve()?)?;
            emit(r.config.out.as_deref(), &r, Some(&r.records))?;
        }
        Command::Shells(a) => {
            let r = run_shell_check(&a.resolve()?)?;
            emit(r.config.out.as_deref(), &r, Some(&r.records))?;
        }
        Command::Verify(a) => {
            let cfg = a.resolve()?;
            let r = run_verify_suite();
            emit::<_, ()>(cfg.out.as_deref(), &r, None)?;
            return Ok(r.passed);
        }
        Command::Expect(a) => {
            let cfg = a.resolve()?;
            emit::<_, ()>(cfg.out.as_deref(), &run_expect(&cfg)?, None)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidConfig(_)
                | Error::EnvelopeExceeded(_)
                | Error::DimensionOutOfRange { .. }
                | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
