//! Grid sweeps over (k, n, d, s): each cell gets a rank computation, a
//! prediction, the fat-point classification, and an agreement verdict.
//! Cells run in parallel; output order is by cell regardless of completion
//! order, so output files depend only on the configuration.

pub mod cache;
pub mod row;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{usage, Error, Result};
use crate::fatpoints::{conjecture39_check, lemma31_classify, ConsistencyFlag, Classification};
use crate::field::{PrimeField, DEFAULT_PRIME, SECOND_PRIME};
use crate::monomial::dim_forms;
use crate::predictions::{self, PredictedVerdict, Prediction, Source};
use crate::seed::derive_seed;
use crate::tangent::{expected_dim, secant_dim, ParameterCell, SecantResult, Verdict};

pub use cache::{CacheKey, ResultCache};
pub use row::{render_rows, write_rows, Agreement, Format, SurveyRow, CSV_HEADER, SKIPPED_BUDGET};

pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_BUDGET: usize = 20_000_000;

/// Inclusive integer range written `a..b` (or a single `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Usage(format!("bad range bound '{t}' in '{s}'")))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                Ok(Self::new(parse(a)?, parse(b)?))
            }
            None => {
                let v = parse(s)?;
                Ok(Self::new(v, v))
            }
        }
    }
}

/// Degree range; `Auto` means k+1 ..= 2k+2 for each k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeRange {
    Auto,
    Fixed(IntRange),
}

impl FromStr for DegreeRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(DegreeRange::Auto)
        } else {
            s.parse().map(DegreeRange::Fixed)
        }
    }
}

/// Options shared by single-cell queries and sweeps.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Primary prime first; the second (if any) is used for confirmation reruns.
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: usize,
    pub budget: usize,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            primes: vec![DEFAULT_PRIME],
            seed: 0,
            trials: DEFAULT_TRIALS,
            budget: DEFAULT_BUDGET,
            timing: false,
        }
    }
}

impl RunOptions {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return usage("at least one prime is required");
        }
        for &p in &self.primes {
            PrimeField::new(p)?;
        }
        if self.trials < 1 {
            return usage("trials must be at least 1");
        }
        Ok(())
    }

    fn confirmation_prime(&self) -> u64 {
        match self.primes.get(1) {
            Some(&p) => p,
            None if self.primes[0] == SECOND_PRIME => DEFAULT_PRIME,
            None => SECOND_PRIME,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub k: IntRange,
    pub n: IntRange,
    pub d: DegreeRange,
    pub s: IntRange,
    pub options: RunOptions,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cache: Option<PathBuf>,
}

impl SweepConfig {
    /// All cells with d >= k + 1, n >= 1, s >= 1, sorted by (k, n, d, s).
    pub fn cells(&self) -> Vec<ParameterCell> {
        let mut cells = Vec::new();
        for k in self.k.iter() {
            let degrees = match self.d {
                DegreeRange::Auto => IntRange::new(k + 1, 2 * k + 2),
                DegreeRange::Fixed(r) => r,
            };
            for n in self.n.iter().filter(|&n| n >= 1) {
                for d in degrees.iter().filter(|&d| d >= k + 1) {
                    for s in self.s.iter().filter(|&s| s >= 1) {
                        cells.push(ParameterCell { k, n, d, s });
                    }
                }
            }
        }
        cells.sort();
        cells
    }
}

/// Everything computed for one cell.
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub row: SurveyRow,
    pub prediction: Prediction,
    pub secant: Option<SecantResult>,
    pub classifier: Option<Classification>,
}

/// Compares a prediction with a computed result.
pub fn agreement(prediction: &Prediction, secant: &SecantResult) -> Agreement {
    let delta = secant.defect as i64;
    match prediction.verdict {
        PredictedVerdict::Unknown => Agreement::Unpredicted,
        PredictedVerdict::Defective => {
            if secant.verdict != Verdict::Defective {
                Agreement::Mismatch
            } else if let Some(exact) = prediction.delta_exact {
                if exact == delta {
                    Agreement::Match
                } else {
                    Agreement::Mismatch
                }
            } else if let Some(bound) = prediction.delta_lower_bound {
                if delta >= bound {
                    Agreement::BoundOk
                } else {
                    Agreement::Mismatch
                }
            } else {
                Agreement::Match
            }
        }
        v => {
            if v.as_str() == secant.verdict.as_str() {
                Agreement::Match
            } else {
                Agreement::Mismatch
            }
        }
    }
}

/// Matrix entries needed for the secant rank and the (k+2)-fat point conditions.
pub fn cell_cost(cell: &ParameterCell) -> usize {
    let fat = cell.s * dim_forms(cell.n, cell.k + 1) * dim_forms(cell.n, cell.d);
    cell.matrix_entries().max(fat)
}

const CLASSIFIER_ROLE: u64 = 0xC1A5;

fn classify(cell: &ParameterCell, prime: u64, seed: u64, trials: usize) -> Result<Option<Classification>> {
    if cell.d <= cell.k {
        return Ok(None);
    }
    let field = PrimeField::new(prime)?;
    let cseed = derive_seed(seed, &[cell.k as u64, cell.n as u64, cell.d as u64, cell.s as u64, CLASSIFIER_ROLE]);
    lemma31_classify(cell, field, cseed, trials).map(Some)
}

/// Runs the rank computation, prediction, classification and consistency checks on one cell.
///
/// A MISMATCH or a conjecture violation candidate triggers a rerun with three
/// times the trials plus a second prime before the row is final.
pub fn evaluate_cell(cell: &ParameterCell, opts: &RunOptions) -> Result<CellOutcome> {
    opts.validate()?;
    let cell = ParameterCell::new(cell.k, cell.n, cell.d, cell.s)?;
    let start = Instant::now();
    let prediction = predictions::predict(&cell);
    let mut row = SurveyRow {
        k: cell.k,
        n: cell.n,
        d: cell.d,
        s: cell.s,
        ambient_dim: cell.ambient_dim(),
        exp_dim_proj: expected_dim(&cell),
        computed_dim_proj: None,
        defect: None,
        verdict: SKIPPED_BUDGET.to_string(),
        prediction_source: prediction.source.as_str().to_string(),
        predicted_verdict: prediction.verdict.as_str().to_string(),
        predicted_delta: prediction.delta_label(),
        agreement: None,
        conjecture39: "N/A".to_string(),
        prime: opts.primes[0].to_string(),
        seed: opts.seed,
        trials: opts.trials,
        elapsed_ms: None,
    };
    if cell_cost(&cell) > opts.budget {
        return Ok(CellOutcome {
            row,
            prediction,
            secant: None,
            classifier: None,
        });
    }

    let prime = opts.primes[0];
    let mut secant = secant_dim(&cell, prime, opts.seed, opts.trials)?;
    let mut classifier = classify(&cell, prime, opts.seed, opts.trials)?;
    let conj = |sec: &SecantResult, cls: &Option<Classification>| -> Result<Option<ConsistencyFlag>> {
        cls.as_ref().map(|c| conjecture39_check(&cell, sec, c)).transpose()
    };
    let mut agree = agreement(&prediction, &secant);
    let mut conjecture = conj(&secant, &classifier)?;

    if agree == Agreement::Mismatch || conjecture == Some(ConsistencyFlag::ViolationCandidate) {
        let more = opts.trials * 3;
        let again = secant_dim(&cell, prime, opts.seed, more)?;
        let second = secant_dim(&cell, opts.confirmation_prime(), opts.seed, more)?;
        secant = secant.merge(&again)?.merge(&second)?;
        classifier = classify(&cell, prime, opts.seed, more)?;
        agree = agreement(&prediction, &secant);
        conjecture = conj(&secant, &classifier)?;
    }

    row.computed_dim_proj = Some(secant.proj_dim);
    row.defect = Some(secant.defect);
    row.verdict = secant.verdict.as_str().to_string();
    row.agreement = Some(agree);
    row.conjecture39 = conjecture.map(|c| c.as_str().to_string()).unwrap_or_else(|| "N/A".into());
    row.prime = secant.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";");
    row.trials = secant.trials;
    if opts.timing {
        row.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(CellOutcome {
        row,
        prediction,
        secant: Some(secant),
        classifier,
    })
}

/// Result of a sweep: sorted rows plus the derived summary.
#[derive(Debug, Clone)]
pub struct SurveyReport {
    pub rows: Vec<SurveyRow>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub counts: BTreeMap<String, usize>,
    pub skipped: usize,
    /// (k, n, d) -> least s whose secant variety fills, if any in range.
    pub least_fill: BTreeMap<(usize, usize, usize), Option<usize>>,
    /// (k, n, d_low, d_high) where least-fill s decreases as d grows.
    pub monotonicity_violations: Vec<(usize, usize, usize, usize)>,
    pub mismatches: Vec<(usize, usize, usize, usize)>,
    pub violation_candidates: Vec<(usize, usize, usize, usize)>,
    pub k1_edge: Vec<(usize, usize, usize, usize)>,
    /// Cells where two applicable results disagree.
    pub contradictions: Vec<((usize, usize, usize, usize), Source, Source)>,
}

impl Summary {
    pub fn from_rows(rows: &[SurveyRow]) -> Self {
        let mut sum = Summary::default();
        for a in ["MATCH", "BOUND-OK", "MISMATCH", "UNPREDICTED"] {
            sum.counts.insert(a.to_string(), 0);
        }
        for r in rows {
            let key = r.cell_key();
            match r.agreement {
                Some(a) => *sum.counts.entry(a.as_str().to_string()).or_default() += 1,
                None => sum.skipped += 1,
            }
            if r.agreement == Some(Agreement::Mismatch) {
                sum.mismatches.push(key);
            }
            if r.conjecture39 == ConsistencyFlag::ViolationCandidate.as_str() {
                sum.violation_candidates.push(key);
            }
            if r.is_k1_edge() {
                sum.k1_edge.push(key);
            }
            let cell = ParameterCell { k: r.k, n: r.n, d: r.d, s: r.s };
            for (a, b) in predictions::contradictions(&cell) {
                sum.contradictions.push((key, a, b));
            }
            let slot = sum.least_fill.entry((r.k, r.n, r.d)).or_insert(None);
            if r.verdict == Verdict::RegularFills.as_str() && slot.map_or(true, |s| r.s < s) {
                *slot = Some(r.s);
            }
        }
        // least-fill s should not drop when d grows with (k, n) fixed
        let mut by_kn: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (&(k, n, d), s) in &sum.least_fill {
            if let Some(s) = s {
                by_kn.entry((k, n)).or_default().push((d, *s));
            }
        }
        for ((k, n), seq) in by_kn {
            for w in seq.windows(2) {
                if w[1].1 < w[0].1 {
                    sum.monotonicity_violations.push((k, n, w[0].0, w[1].0));
                }
            }
        }
        sum
    }

    pub fn surviving_mismatches(&self) -> usize {
        self.mismatches.len()
    }
}

fn tuple(t: &(usize, usize, usize, usize)) -> String {
    format!("(k={}, n={}, d={}, s={})", t.0, t.1, t.2, t.3)
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "agreement: {}", counts.join(" "))?;
        if self.skipped > 0 {
            writeln!(f, "skipped (budget): {}", self.skipped)?;
        }
        writeln!(f, "least s filling P^N:")?;
        for ((k, n, d), s) in &self.least_fill {
            let s = s.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            writeln!(f, "  k={k} n={n} d={d}: {s}")?;
        }
        for (k, n, d0, d1) in &self.monotonicity_violations {
            writeln!(f, "least-fill drops: k={k} n={n} from d={d0} to d={d1}")?;
        }
        for t in &self.mismatches {
            writeln!(f, "MISMATCH {}", tuple(t))?;
        }
        for t in &self.violation_candidates {
            writeln!(f, "VIOLATION-CANDIDATE {}", tuple(t))?;
        }
        for t in &self.k1_edge {
            writeln!(f, "K1-EDGE {}", tuple(t))?;
        }
        for (t, a, b) in &self.contradictions {
            writeln!(f, "overlap disagreement {}: {a} vs {b}", tuple(t))?;
        }
        Ok(())
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))
}

/// Evaluates every cell of the sweep; rows come back sorted by (k, n, d, s).
pub fn run_survey(config: &SweepConfig) -> Result<SurveyReport> {
    config.options.validate()?;
    let cells = config.cells();
    let opts = &config.options;
    let mut cache = match &config.cache {
        Some(path) => ResultCache::open(path)?,
        None => ResultCache::default(),
    };
    let key = |c: &ParameterCell| CacheKey::new(c, &opts.primes, opts.seed, opts.trials);

    let todo: Vec<ParameterCell> = cells.iter().copied().filter(|c| cache.get(&key(c)).is_none()).collect();
    let fresh: Vec<(CacheKey, SurveyRow)> = pool(config.jobs)?.install(|| {
        todo.par_iter()
            .map(|c| evaluate_cell(c, opts).map(|o| (key(c), o.row)))
            .collect::<Result<_>>()
    })?;
    if config.cache.is_some() {
        cache.extend(fresh.clone())?;
    }
    let mut fresh: BTreeMap<(usize, usize, usize, usize), SurveyRow> =
        fresh.into_iter().map(|(_, r)| (r.cell_key(), r)).collect();

    let mut rows: Vec<SurveyRow> = cells
        .iter()
        .map(|c| {
            fresh.remove(&(c.k, c.n, c.d, c.s)).unwrap_or_else(|| {
                let mut r = cache.get(&key(c)).cloned().expect("cached or fresh");
                if !opts.timing {
                    r.elapsed_ms = None;
                }
                r
            })
        })
        .collect();
    rows.sort_by_key(|r| r.cell_key());
    let summary = Summary::from_rows(&rows);
    Ok(SurveyReport { rows, summary })
}

/// Runs the sweep and writes the table to `config.out` (or returns it only).
pub fn cmd_survey(config: &SweepConfig) -> Result<SurveyReport> {
    let report = run_survey(config)?;
    if let Some(path) = &config.out {
        let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        write_rows(&report.rows, config.format, std::io::BufWriter::new(file))?;
    }
    Ok(report)
}
