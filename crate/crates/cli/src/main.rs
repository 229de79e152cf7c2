use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oscsec::check::{self, CheckOptions};
use oscsec::fatpoints::{waring_dim, CaseStatus};
use oscsec::survey::{self, Agreement, DegreeRange, Format, IntRange, RunOptions, SweepConfig};
use oscsec::{Error, ParameterCell, PrimeField, DEFAULT_PRIME};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "oscsec", version, about = "Secant varieties of osculating varieties to Veronese embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one cell and print it as a table row.
    Dim(DimArgs),
    /// Sweep a grid of cells.
    Survey(SurveyArgs),
    /// Run the reproduction battery.
    CheckPaper(CheckArgs),
}

#[derive(Args)]
struct Common {
    /// Prime modulus; repeat to give the confirmation prime.
    #[arg(long = "prime", value_name = "P")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = survey::DEFAULT_TRIALS)]
    trials: usize,
}

impl Common {
    fn primes(&self) -> Vec<u64> {
        if self.primes.is_empty() {
            vec![DEFAULT_PRIME]
        } else {
            self.primes.clone()
        }
    }
}

#[derive(Args)]
struct DimArgs {
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'd')]
    d: usize,
    #[arg(short = 's')]
    s: usize,
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long = "k", default_value = "0..3", value_name = "A..B")]
    k: IntRange,
    #[arg(long = "n", default_value = "1..4", value_name = "A..B")]
    n: IntRange,
    #[arg(long = "d", default_value = "auto", value_name = "A..B|auto")]
    d: DegreeRange,
    #[arg(long = "s", default_value = "1..6", value_name = "A..B")]
    s: IntRange,
    #[command(flatten)]
    common: Common,
    #[arg(long, env = "OSCSEC_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Maximum matrix entries per cell.
    #[arg(long, default_value_t = survey::DEFAULT_BUDGET)]
    budget: usize,
    /// Record per-cell wall time (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    /// JSON-lines result cache.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = survey::DEFAULT_TRIALS)]
    trials: usize,
    /// Comma-separated criterion numbers.
    #[arg(long, value_delimiter = ',')]
    only: Vec<usize>,
    #[arg(long, env = "OSCSEC_JOBS", default_value_t = 2)]
    jobs: usize,
    /// Corrupt one expected value (harness self-test).
    #[arg(long, hide = true)]
    tamper: bool,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

fn run_dim(args: DimArgs) -> oscsec::Result<u8> {
    let cell = ParameterCell::new(args.k, args.n, args.d, args.s)?;
    let opts = RunOptions {
        primes: args.common.primes(),
        seed: args.common.seed,
        trials: args.common.trials,
        budget: usize::MAX,
        timing: false,
    };
    let outcome = survey::evaluate_cell(&cell, &opts)?;
    let mut out = io::stdout().lock();
    survey::write_rows(std::slice::from_ref(&outcome.row), args.format, &mut out)?;
    if let Some(sec) = &outcome.secant {
        writeln!(out, "# affine rank {} of {} columns", sec.affine_rank, cell.ambient_dim() + 1)?;
    }
    if let Some(cls) = &outcome.classifier {
        let status = |c: CaseStatus| match c {
            CaseStatus::Fires => "fires",
            CaseStatus::Silent => "silent",
            CaseStatus::NotApplicable => "n/a",
        };
        writeln!(
            out,
            "# fat points: h0(I_X)={} h1(I_X)={} h0(I_T)={} h1(I_T)={}; a {} b {} c {} d {}{}",
            cls.x.h0,
            cls.x.h1,
            cls.t.h0,
            cls.t.h1,
            status(cls.case_a),
            status(cls.case_b),
            cls.case_c,
            cls.case_d,
            cls.delta_bound().map(|b| format!("; defect >= {b}")).unwrap_or_default()
        )?;
    }
    if cell.k == 0 {
        let field = PrimeField::new(opts.primes[0])?;
        let w = waring_dim(cell.n, cell.d, cell.s, field, opts.seed, opts.trials)?;
        let agrees = outcome.row.computed_dim_proj == Some(w);
        writeln!(out, "# waring cross-check: double points give dim {w} ({})", if agrees { "agrees" } else { "DISAGREES" })?;
    }
    if let (Some(src), Some(delta)) = (outcome.prediction.formula_source, outcome.prediction.formula_delta) {
        writeln!(
            out,
            "# K1-EDGE: {src} formula gives defect {delta}, computed {}",
            outcome.row.defect.map(|d| d.to_string()).unwrap_or_default()
        )?;
    }
    Ok(0)
}

fn run_survey(args: SurveyArgs) -> oscsec::Result<u8> {
    let to_stdout = args.out.is_none();
    let config = SweepConfig {
        k: args.k,
        n: args.n,
        d: args.d,
        s: args.s,
        options: RunOptions {
            primes: args.common.primes(),
            seed: args.common.seed,
            trials: args.common.trials,
            budget: args.budget,
            timing: args.timing,
        },
        jobs: args.jobs.unwrap_or_else(default_jobs),
        out: args.out,
        format: args.format,
        cache: args.cache,
    };
    let report = survey::cmd_survey(&config)?;
    if to_stdout {
        survey::write_rows(&report.rows, config.format, io::stdout().lock())?;
        eprint!("{}", report.summary);
    } else {
        print!("{}", report.summary);
    }
    let surviving = report.rows.iter().any(|r| r.agreement == Some(Agreement::Mismatch));
    Ok(if surviving { EXIT_FAILED } else { 0 })
}

fn run_check(args: CheckArgs) -> oscsec::Result<u8> {
    let opts = CheckOptions {
        prime: args.prime,
        seed: args.seed,
        trials: args.trials,
        tamper: args.tamper,
        only: args.only,
        jobs: args.jobs,
    };
    PrimeField::new(opts.prime)?;
    if let Some(bad) = opts.only.iter().find(|&&i| i == 0 || i > check::CRITERIA) {
        return Err(Error::Usage(format!("no criterion {bad}")));
    }
    let outcomes = check::run_battery(&opts, |o| println!("{o}"));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    Ok(if failed == 0 { 0 } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Dim(a) => run_dim(a),
        Command::Survey(a) => run_survey(a),
        Command::CheckPaper(a) => run_check(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
