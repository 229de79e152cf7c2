//! The reproduction battery: fourteen criteria, each a finite set of rank
//! computations with pinned expected values and a wall-clock limit.

use std::fmt;
use std::time::{Duration, Instant};

use crate::apolarity::{degree_stability_check, dual_codim, power_perp_identity, sandwich_check, scheme_length};
use crate::error::Result;
use crate::fatpoints::{lemma31_classify, waring_dim};
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::form::Form;
use crate::linalg::{self, BasisMatrix};
use crate::predictions::{self, delta_34a, Source};
use crate::seed::derive_seed;
use crate::survey::{self, DegreeRange, Format, IntRange, RunOptions, SweepConfig};
use crate::tangent::{draw_cones, secant_dim, stack_cones, tangent_cone, ParameterCell, SecantResult, Verdict};

pub const CRITERIA: usize = 14;

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    /// Replaces the first expected value by a wrong one; the battery must then fail.
    pub tamper: bool,
    /// Criteria to run (1-based); empty runs all.
    pub only: Vec<usize>,
    /// Worker count for the second pass of the reproducibility sweep.
    pub jobs: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            prime: DEFAULT_PRIME,
            seed: 0,
            trials: survey::DEFAULT_TRIALS,
            tamper: false,
            only: Vec::new(),
            jobs: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {}: {} [{:.2}s / {}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "tangential Veronese defect",
        2 => "surfaces with k = 2",
        3 => "alternating-sum defect, d = k+1",
        4 => "threshold defect, d = k+1",
        5 => "d = k+1 fills for s >= n",
        6 => "regularity for d >= 2k+1",
        7 => "defect bounds for s <= n",
        8 => "defect bound for s = n+1",
        9 => "defect bound for large d",
        10 => "fills below the degree threshold",
        11 => "d = k+2 planar family",
        12 => "Waring dimensions",
        13 => "apolarity and rank properties",
        14 => "survey reproducibility",
        _ => "unknown",
    }
}

/// Wall-clock limit; per-cell budgets are summed over the cells a criterion checks.
pub fn time_limit(id: usize) -> Duration {
    let secs = match id {
        5 => 1,
        1 | 4 | 6 | 10 => 2,
        2 | 3 | 9 => 5,
        11 => 10,
        12 => 30,
        7 | 8 => 60,
        13 => 300,
        14 => 600,
        _ => 60,
    };
    Duration::from_secs(secs)
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn finish(self) -> (bool, String) {
        if self.failures.is_empty() {
            (true, self.notes.join("; "))
        } else {
            (false, format!("failed: {}", self.failures.join("; ")))
        }
    }
}

struct Ctx<'a> {
    opts: &'a CheckOptions,
}

impl Ctx<'_> {
    fn secant(&self, k: usize, n: usize, d: usize, s: usize) -> Result<SecantResult> {
        secant_dim(&ParameterCell::new(k, n, d, s)?, self.opts.prime, self.opts.seed, self.opts.trials)
    }

    fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.opts.prime)
    }
}

fn cell_tag(k: usize, n: usize, d: usize, s: usize) -> String {
    format!("({k},{n},{d},{s})")
}

fn criterion_1(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let want_dim = if c.opts.tamper { 9 } else { 8 };
    let r = c.secant(1, 2, 3, 2)?;
    t.expect(
        r.proj_dim == want_dim && r.defect == 1,
        format!("(1,2,3,2) dim {} (want {want_dim}) delta {} (want 1)", r.proj_dim, r.defect),
    );
    let r = c.secant(1, 3, 3, 3)?;
    t.expect(r.verdict == Verdict::Defective, format!("(1,3,3,3) {} delta {}", r.verdict, r.defect));
    Ok(t.finish())
}

fn criterion_2(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let r = c.secant(2, 2, 4, 2)?;
    t.expect(r.proj_dim == 13 && r.defect == 1, format!("(2,2,4,2) dim {} delta {}", r.proj_dim, r.defect));
    for (s, d) in [(2, 5), (3, 4), (3, 5), (4, 4)] {
        let r = c.secant(2, 2, d, s)?;
        t.expect(r.defect == 0, format!("{} delta {}", cell_tag(2, 2, d, s), r.defect));
    }
    Ok(t.finish())
}

fn criterion_3(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let r = c.secant(2, 7, 3, 2)?;
    let formula = delta_34a(2, 7, 2);
    t.expect(
        r.affine_rank == 76 && r.defect == 10 && formula == 10,
        format!("(2,7,3,2) rank {} delta {} formula {formula}", r.affine_rank, r.defect),
    );
    Ok(t.finish())
}

fn criterion_4(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let r = c.secant(2, 4, 3, 2)?;
    t.expect(r.defect == 4, format!("(2,4,3,2) delta {}", r.defect));
    let r = c.secant(2, 4, 3, 3)?;
    t.expect(
        r.verdict == Verdict::RegularFills && r.proj_dim == 34,
        format!("(2,4,3,3) {} dim {}", r.verdict, r.proj_dim),
    );
    Ok(t.finish())
}

fn fills(c: &Ctx, t: &mut Tally, k: usize, n: usize, d: usize, s: usize, ambient: usize) -> Result<()> {
    let r = c.secant(k, n, d, s)?;
    t.expect(
        r.verdict == Verdict::RegularFills && r.proj_dim == ambient,
        format!("{} {} dim {}", cell_tag(k, n, d, s), r.verdict, r.proj_dim),
    );
    Ok(())
}

fn criterion_5(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    fills(c, &mut t, 2, 3, 3, 3, 19)?;
    Ok(t.finish())
}

fn criterion_6(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    fills(c, &mut t, 2, 2, 5, 3, 20)?;
    let r = c.secant(2, 3, 5, 2)?;
    t.expect(r.proj_dim == 25 && r.defect == 0, format!("(2,3,5,2) dim {} delta {}", r.proj_dim, r.defect));
    Ok(t.finish())
}

fn bound_check(c: &Ctx, t: &mut Tally, cell: (usize, usize, usize, usize), source: Source, bound: i64) -> Result<()> {
    let (k, n, d, s) = cell;
    let r = c.secant(k, n, d, s)?;
    let stated = predictions::applicable(&ParameterCell::new(k, n, d, s)?)
        .into_iter()
        .find(|p| p.source == source)
        .and_then(|p| p.delta_lower_bound);
    t.expect(
        stated == Some(bound) && r.defect as i64 >= bound,
        format!("{} delta {} >= {source} bound {bound}", cell_tag(k, n, d, s), r.defect),
    );
    Ok(())
}

fn criterion_7(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    bound_check(c, &mut t, (2, 2, 4, 2), Source::P3_6A, 1)?;
    let r = c.secant(2, 2, 4, 2)?;
    t.expect(r.defect == 1, format!("(2,2,4,2) delta exactly {}", r.defect));
    bound_check(c, &mut t, (2, 3, 4, 2), Source::P3_6B, 1)?;
    let r = c.secant(2, 3, 4, 2)?;
    t.expect(r.defect == 1, format!("(2,3,4,2) delta exactly {}", r.defect));
    Ok(t.finish())
}

fn criterion_8(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    bound_check(c, &mut t, (2, 8, 4, 9), Source::P3_7, 36)?;
    Ok(t.finish())
}

fn criterion_9(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let r = c.secant(8, 2, 15, 3)?;
    t.expect(r.expdim_proj == 135, format!("(8,2,15,3) expdim {}", r.expdim_proj));
    bound_check(c, &mut t, (8, 2, 15, 3), Source::P3_8, 1)?;
    Ok(t.finish())
}

fn criterion_10(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    fills(c, &mut t, 2, 2, 5, 4, 20)?;
    fills(c, &mut t, 2, 2, 4, 3, 14)?;
    Ok(t.finish())
}

fn criterion_11(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let field = c.field()?;
    for k in 1..=5 {
        let d = k + 2;
        let r = c.secant(k, 2, d, 2)?;
        let cls = lemma31_classify(&ParameterCell::new(k, 2, d, 2)?, field, c.opts.seed, c.opts.trials)?;
        t.expect(
            r.verdict == Verdict::Defective && r.defect >= 1 && cls.t.h0 == 1,
            format!("{} delta {} h0(I_T) {}", cell_tag(k, 2, d, 2), r.defect, cls.t.h0),
        );
        if k >= 2 {
            let r = c.secant(k, 2, d, 3)?;
            t.expect(r.verdict.is_regular(), format!("{} {}", cell_tag(k, 2, d, 3), r.verdict));
        }
    }
    Ok(t.finish())
}

fn criterion_12(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let field = c.field()?;
    let (seed, trials) = (c.opts.seed, c.opts.trials);
    for (n, d, s, want) in [(2, 2, 2, 3), (2, 4, 5, 13), (1, 3, 2, 3)] {
        let got = waring_dim(n, d, s, field, seed, trials)?;
        t.expect(got == want, format!("waring_dim({n},{d},{s}) = {got} (want {want})"));
    }
    let mut disagreements = Vec::new();
    let mut cells = 0;
    for n in 1..=3 {
        for d in 1..=6 {
            for s in 1..=6 {
                let sec = c.secant(0, n, d, s)?;
                let w = waring_dim(n, d, s, field, seed, trials)?;
                cells += 1;
                if sec.proj_dim != w {
                    disagreements.push(format!("{} {} vs {w}", cell_tag(0, n, d, s), sec.proj_dim));
                }
            }
        }
    }
    t.expect(
        disagreements.is_empty(),
        format!("secant vs double points on {cells} cells: {} disagree {:?}", disagreements.len(), disagreements),
    );
    Ok(t.finish())
}

fn random_matrix(field: PrimeField, rows: usize, cols: usize, seed: u64) -> Result<BasisMatrix> {
    let mut rng = crate::seed::rng_from_seed(seed);
    let data: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rand::Rng::gen_range(&mut rng, 0..field.modulus())).collect())
        .collect();
    BasisMatrix::from_rows(field, cols, &data)
}

fn criterion_13(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let field = c.field()?;
    let seed = c.opts.seed;

    // duality on every trial of a small grid
    let mut dual_trials = 0;
    let mut dual_bad = 0;
    for k in 0..=3 {
        for n in 1..=3 {
            for d in k + 1..=k + 3 {
                for s in 1..=4 {
                    let cell = ParameterCell::new(k, n, d, s)?;
                    for trial in 0..c.opts.trials {
                        let cones = draw_cones(&cell, field, seed, trial)?;
                        let stacked = stack_cones(&cones)?;
                        dual_trials += 1;
                        if linalg::rank(&stacked) + dual_codim(&cones)? != stacked.cols() {
                            dual_bad += 1;
                        }
                    }
                }
            }
        }
    }
    t.expect(dual_bad == 0, format!("duality {}/{dual_trials}", dual_trials - dual_bad));

    // sandwich, degree stability and power-perp identity
    let (mut sandwich, mut stability, mut draws) = (0, 0, 0);
    let mut identity_bad = 0;
    for k in 0..=3 {
        for n in 1..=3 {
            for d in k + 2..=k + 5 {
                for i in 0..20u64 {
                    let f = Form::random(field, n, k, derive_seed(seed, &[k as u64, n as u64, d as u64, i, 13]));
                    draws += 1;
                    sandwich += sandwich_check(k, n, d, &f)? as usize;
                    stability += degree_stability_check(k, n, d, &f)? as usize;
                }
                for tt in 0..=d {
                    if !power_perp_identity(n, d, tt)? {
                        identity_bad += 1;
                    }
                }
            }
        }
    }
    t.expect(sandwich == draws, format!("sandwich {sandwich}/{draws}"));
    t.expect(stability == draws, format!("degree stability {stability}/{draws}"));
    t.expect(identity_bad == 0, format!("power-perp identity failures {identity_bad}"));

    // single-cone length, 50 draws per (k, n, d)
    let (mut ok, mut total) = (0, 0);
    for k in 0..=4 {
        for n in 1..=4 {
            for d in k + 1..=2 * k + 2 {
                let want = crate::monomial::dim_forms(n, k) + n;
                for i in 0..50u64 {
                    let path = [k as u64, n as u64, d as u64, i];
                    let l = Form::random(field, n, 1, derive_seed(seed, &[&path[..], &[1]].concat()));
                    let f = Form::random(field, n, k, derive_seed(seed, &[&path[..], &[2]].concat()));
                    let cone = tangent_cone(&l, &f, k, d)?;
                    total += 1;
                    ok += (scheme_length(&cone) == want.min(cone.basis.cols())) as usize;
                }
            }
        }
    }
    t.expect(ok == total, format!("cone rank {ok}/{total}"));

    // rank-nullity on random and structured matrices
    let (mut ok, mut total) = (0, 0);
    for i in 0..200u64 {
        let rows = 1 + (i as usize * 7) % 23;
        let cols = 1 + (i as usize * 11) % 29;
        let mut m = random_matrix(field, rows, cols, derive_seed(seed, &[i, 0x5A]))?;
        if i % 3 == 0 && rows > 2 {
            // force dependencies
            let dup = m.row(0).to_vec();
            m.push_row(&dup)?;
        }
        total += 1;
        ok += (linalg::rank(&m) + linalg::kernel_basis(&m).rows() == cols) as usize;
    }
    t.expect(ok == total, format!("rank-nullity {ok}/{total}"));
    Ok(t.finish())
}

/// The reproducibility sweep of criterion 14, as a configuration.
pub fn reproducibility_sweep(opts: &CheckOptions, jobs: usize) -> SweepConfig {
    SweepConfig {
        k: IntRange::new(0, 3),
        n: IntRange::new(1, 4),
        d: DegreeRange::Auto,
        s: IntRange::new(1, 6),
        options: RunOptions {
            primes: vec![opts.prime],
            seed: opts.seed,
            trials: opts.trials,
            ..RunOptions::default()
        },
        jobs,
        out: None,
        format: Format::Csv,
        cache: None,
    }
}

fn criterion_14(c: &Ctx) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let first = survey::run_survey(&reproducibility_sweep(c.opts, 1))?;
    let second = survey::run_survey(&reproducibility_sweep(c.opts, c.opts.jobs.max(2)))?;
    let a = survey::render_rows(&first.rows, Format::Csv)?;
    let b = survey::render_rows(&second.rows, Format::Csv)?;
    t.expect(a == b, format!("{} rows, identical bytes across job counts", first.rows.len()));
    let skipped = first.rows.iter().filter(|r| r.agreement.is_none()).count();
    t.expect(skipped == 0, format!("{skipped} budget skips"));
    let surviving: Vec<String> = first
        .rows
        .iter()
        .filter(|r| r.agreement == Some(survey::Agreement::Mismatch) && !r.is_k1_edge())
        .map(|r| cell_tag(r.k, r.n, r.d, r.s))
        .collect();
    t.expect(surviving.is_empty(), format!("surviving mismatches {surviving:?}"));
    let edges = first.rows.iter().filter(|r| r.is_k1_edge()).count();
    t.expect(true, format!("{edges} K1-EDGE rows"));

    // the k = 1, d = 2 edge case outside the grid
    let edge = survey::evaluate_cell(&ParameterCell::new(1, 6, 2, 2)?, &reproducibility_sweep(c.opts, 1).options)?;
    let formula = edge.prediction.formula_delta;
    t.expect(
        formula == Some(3) && edge.row.defect == Some(4) && edge.row.predicted_delta.contains("=3"),
        format!(
            "(1,6,2,2) formula {:?} computed {:?} labelled '{}'",
            formula, edge.row.defect, edge.row.predicted_delta
        ),
    );
    Ok(t.finish())
}

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: usize, opts: &CheckOptions) -> CriterionOutcome {
    let ctx = Ctx { opts };
    let start = Instant::now();
    let result = match id {
        1 => criterion_1(&ctx),
        2 => criterion_2(&ctx),
        3 => criterion_3(&ctx),
        4 => criterion_4(&ctx),
        5 => criterion_5(&ctx),
        6 => criterion_6(&ctx),
        7 => criterion_7(&ctx),
        8 => criterion_8(&ctx),
        9 => criterion_9(&ctx),
        10 => criterion_10(&ctx),
        11 => criterion_11(&ctx),
        12 => criterion_12(&ctx),
        13 => criterion_13(&ctx),
        14 => criterion_14(&ctx),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let limit = time_limit(id);
    let (mut passed, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if elapsed > limit {
        passed = false;
        detail = format!("{detail}; over time limit");
    }
    CriterionOutcome {
        id,
        title: title(id),
        passed,
        detail,
        elapsed,
        limit,
    }
}

/// Runs the selected criteria in order, calling `report` after each.
pub fn run_battery(opts: &CheckOptions, mut report: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    let ids: Vec<usize> = if opts.only.is_empty() {
        (1..=CRITERIA).collect()
    } else {
        opts.only.clone()
    };
    ids.into_iter()
        .map(|id| {
            let out = run_criterion(id, opts);
            report(&out);
            out
        })
        .collect()
}
