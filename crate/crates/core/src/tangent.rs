//! Tangent cones W(L, F) = <L^{d-k} R_k, L^{d-k-1} F R_1> to the osculating
//! variety O_{k,n,d}, and the dimension of its s-secant variety as the rank
//! of s stacked generic cones (Terracini).

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apolarity;
use crate::error::{usage, Result};
use crate::field::PrimeField;
use crate::form::Form;
use crate::linalg::{self, BasisMatrix};
use crate::monomial::{dim_forms, enumerate, ExponentVector};
use crate::seed::{derive_seed, Role};

/// One problem instance: the s-th secant variety of O_{k,n,d}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParameterCell {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub s: usize,
}

impl ParameterCell {
    pub fn new(k: usize, n: usize, d: usize, s: usize) -> Result<Self> {
        if n < 1 {
            return usage("n must be at least 1");
        }
        if s < 1 {
            return usage("s must be at least 1");
        }
        if d < k {
            return usage(format!("d = {d} must be at least k = {k}"));
        }
        Ok(Self { k, n, d, s })
    }

    /// N = C(n+d, n) - 1, the dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        dim_forms(self.n, self.d) - 1
    }

    /// Affine dimension of one tangent cone, C(k+n, n) + n.
    pub fn cone_dim(&self) -> usize {
        dim_forms(self.n, self.k) + self.n
    }

    /// Size of the stacked Terracini matrix.
    pub fn matrix_entries(&self) -> usize {
        self.s * (dim_forms(self.n, self.k) + self.n + 1) * dim_forms(self.n, self.d)
    }

    fn seed_path(&self) -> [u64; 4] {
        [self.k as u64, self.n as u64, self.d as u64, self.s as u64]
    }
}

impl fmt::Display for ParameterCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, n={}, d={}, s={})", self.k, self.n, self.d, self.s)
    }
}

/// The rows L^{d-k} m (m a monomial of R_k) followed by L^{d-k-1} F x_j.
#[derive(Debug, Clone)]
pub struct TangentCone {
    pub linear: Form,
    pub osculating: Form,
    pub k: usize,
    pub d: usize,
    pub basis: BasisMatrix,
}

/// Spans the k-th osculating space at [L^d]: rows L^{d-k} m for m in R_k.
pub fn osculating_space_basis(linear: &Form, k: usize, d: usize) -> Result<BasisMatrix> {
    if d < k {
        return usage(format!("osculating order {k} exceeds degree {d}"));
    }
    if linear.degree() != 1 {
        return usage("L must be linear");
    }
    let power = linear.linear_power(d - k)?;
    let rows: Vec<Form> = enumerate(linear.n(), k).iter().map(|m| power.mul_monomial(m)).collect();
    BasisMatrix::from_forms(&rows)
}

pub fn tangent_cone(linear: &Form, osculating: &Form, k: usize, d: usize) -> Result<TangentCone> {
    if d <= k {
        return usage(format!("tangent cone needs d > k, got d = {d}, k = {k}"));
    }
    if osculating.degree() != k {
        return usage(format!("F must have degree {k}, got {}", osculating.degree()));
    }
    if linear.n() != osculating.n() || linear.field() != osculating.field() {
        return usage("L and F live in different rings");
    }
    let n = linear.n();
    let mut basis = osculating_space_basis(linear, k, d)?;
    let lf = linear.linear_power(d - k - 1)?.multiply(osculating)?;
    for j in 0..=n {
        basis.push_row(lf.mul_monomial(&ExponentVector::power(n, j, 1)).coeffs())?;
    }
    Ok(TangentCone {
        linear: linear.clone(),
        osculating: osculating.clone(),
        k,
        d,
        basis,
    })
}

/// min(N, s (C(k+n, n) + n) - 1), projective.
pub fn expected_dim(cell: &ParameterCell) -> usize {
    cell.ambient_dim().min(cell.s * cell.cone_dim() - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RegularFills,
    RegularNonfill,
    Defective,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::RegularFills => "regular-fills",
            Verdict::RegularNonfill => "regular-nonfill",
            Verdict::Defective => "defective",
        }
    }

    pub fn is_regular(&self) -> bool {
        !matches!(self, Verdict::Defective)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a randomized Terracini rank computation.
///
/// A regular verdict is a certificate; a defective one is evidence that
/// grows with the number of trials and primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantResult {
    pub cell: ParameterCell,
    pub affine_rank: usize,
    pub proj_dim: usize,
    pub expdim_proj: usize,
    pub defect: usize,
    pub verdict: Verdict,
    /// Primes used, primary first.
    pub primes: Vec<u64>,
    pub master_seed: u64,
    pub trials: usize,
    pub trial_ranks: Vec<usize>,
}

impl SecantResult {
    fn from_rank(cell: ParameterCell, affine_rank: usize, prime: u64, master_seed: u64, trial_ranks: Vec<usize>) -> Self {
        let expdim_proj = expected_dim(&cell);
        let proj_dim = affine_rank - 1;
        assert!(proj_dim <= expdim_proj, "rank {affine_rank} exceeds the expected dimension for {cell}");
        let defect = expdim_proj - proj_dim;
        let verdict = if defect > 0 {
            Verdict::Defective
        } else if proj_dim == cell.ambient_dim() {
            Verdict::RegularFills
        } else {
            Verdict::RegularNonfill
        };
        Self {
            cell,
            affine_rank,
            proj_dim,
            expdim_proj,
            defect,
            verdict,
            primes: vec![prime],
            master_seed,
            trials: trial_ranks.len(),
            trial_ranks,
        }
    }

    /// Combines evidence from another run of the same cell; the generic rank is
    /// at least every observed rank.
    pub fn merge(&self, other: &SecantResult) -> Result<SecantResult> {
        if self.cell != other.cell {
            return usage("cannot merge results of different cells");
        }
        let rank = self.affine_rank.max(other.affine_rank);
        let mut ranks = self.trial_ranks.clone();
        ranks.extend_from_slice(&other.trial_ranks);
        let mut merged = SecantResult::from_rank(self.cell, rank, self.primes[0], self.master_seed, ranks);
        merged.primes = self.primes.clone();
        for p in &other.primes {
            if !merged.primes.contains(p) {
                merged.primes.push(*p);
            }
        }
        Ok(merged)
    }
}

/// Draws the s generic pairs (L_i, F_i) of one trial and builds their cones.
pub fn draw_cones(cell: &ParameterCell, field: PrimeField, master_seed: u64, trial: usize) -> Result<Vec<TangentCone>> {
    let [k, n, d, s] = cell.seed_path();
    (0..cell.s)
        .map(|i| {
            let path = |role: Role| [k, n, d, s, trial as u64, i as u64, role as u64];
            let l = Form::random(field, cell.n, 1, derive_seed(master_seed, &path(Role::LinearForm)));
            let f = Form::random(field, cell.n, cell.k, derive_seed(master_seed, &path(Role::OsculatingForm)));
            tangent_cone(&l, &f, cell.k, cell.d)
        })
        .collect()
}

/// Stacks the cones W_1, ..., W_s.
pub fn stack_cones(cones: &[TangentCone]) -> Result<BasisMatrix> {
    let refs: Vec<&BasisMatrix> = cones.iter().map(|c| &c.basis).collect();
    linalg::stack(&refs)
}

// Cross-checking against the dual side doubles the work; limited to small ambients.
const DUAL_CHECK_MAX_COLS: usize = 300;

/// Rank of one trial's stacked cones.
pub fn trial_rank(cell: &ParameterCell, field: PrimeField, master_seed: u64, trial: usize) -> Result<usize> {
    let cones = draw_cones(cell, field, master_seed, trial)?;
    let stacked = stack_cones(&cones)?;
    let r = linalg::rank(&stacked);
    if cfg!(debug_assertions) && stacked.cols() <= DUAL_CHECK_MAX_COLS {
        let dual = apolarity::dual_codim(&cones)?;
        debug_assert_eq!(r + dual, stacked.cols(), "primal and dual ranks disagree for {cell}");
    }
    Ok(r)
}

/// dim O^s_{k,n,d} as max over `trials` random draws of rank(W_1 + ... + W_s) - 1.
pub fn secant_dim(cell: &ParameterCell, prime: u64, master_seed: u64, trials: usize) -> Result<SecantResult> {
    let cell = ParameterCell::new(cell.k, cell.n, cell.d, cell.s)?;
    if trials < 1 {
        return usage("at least one trial is required");
    }
    let field = PrimeField::new(prime)?;
    field.require_above(cell.d)?;
    if cell.d == cell.k {
        // L^0 F ranges over all of R_d.
        let full = cell.ambient_dim() + 1;
        return Ok(SecantResult::from_rank(cell, full, prime, master_seed, vec![full; trials]));
    }
    let ranks: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| trial_rank(&cell, field, master_seed, t))
        .collect::<Result<_>>()?;
    let best = *ranks.iter().max().expect("trials >= 1");
    Ok(SecantResult::from_rank(cell, best, prime, master_seed, ranks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::monomial::binomial;

    fn gf() -> PrimeField {
        PrimeField::default()
    }

    fn cell(k: usize, n: usize, d: usize, s: usize) -> ParameterCell {
        ParameterCell::new(k, n, d, s).unwrap()
    }

    #[test]
    fn cell_validation() {
        assert!(ParameterCell::new(3, 2, 2, 1).is_err());
        assert!(ParameterCell::new(1, 0, 2, 1).is_err());
        assert!(ParameterCell::new(1, 2, 2, 0).is_err());
    }

    #[test]
    fn osculating_space_examples() {
        let f = gf();
        let l = Form::random(f, 2, 1, 5);
        let k0 = osculating_space_basis(&l, 0, 4).unwrap();
        assert_eq!(k0.rows(), 1);
        assert_eq!(k0.row(0), l.linear_power(4).unwrap().coeffs());
        let full = osculating_space_basis(&l, 3, 3).unwrap();
        assert_eq!(linalg::rank(&full), dim_forms(2, 3));
        let x0 = Form::variable(f, 2, 0);
        let m = osculating_space_basis(&x0, 1, 3).unwrap();
        let expected: Vec<Vec<u64>> = [[3, 0, 0], [2, 1, 0], [2, 0, 1]]
            .iter()
            .map(|e| Form::monomial(f, &ExponentVector::new(e.to_vec()).unwrap()).into_coeffs())
            .collect();
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(m.row(i), row.as_slice());
        }
        assert_eq!(linalg::rank(&m), 3);
        assert!(osculating_space_basis(&x0, 4, 3).is_err());
    }

    #[test]
    fn tangent_cone_generic_rank() {
        let f = gf();
        let l = Form::random(f, 2, 1, 1);
        let g = Form::random(f, 2, 2, 2);
        let w = tangent_cone(&l, &g, 2, 5).unwrap();
        assert_eq!(w.basis.rows(), 6 + 3);
        assert_eq!(linalg::rank(&w.basis), 8);
        for n in 1..=4 {
            let l = Form::random(f, n, 1, 10 + n as u64);
            let one = Form::constant(f, n, 1);
            let w = tangent_cone(&l, &one, 0, 3).unwrap();
            assert_eq!(linalg::rank(&w.basis), n + 1);
        }
    }

    #[test]
    fn degenerate_osculating_form_drops_rank() {
        let f = gf();
        let l = Form::random(f, 2, 1, 3);
        let g = l.multiply(&Form::random(f, 2, 1, 4)).unwrap();
        let w = tangent_cone(&l, &g, 2, 5).unwrap();
        assert!(linalg::rank(&w.basis) < 8);
        assert!(tangent_cone(&l, &g, 2, 2).is_err());
        assert!(tangent_cone(&l, &l, 2, 5).is_err());
    }

    #[test]
    fn expected_dim_examples() {
        assert_eq!(expected_dim(&cell(1, 2, 3, 2)), 9);
        assert_eq!(expected_dim(&cell(2, 2, 4, 2)), 14);
        assert_eq!(expected_dim(&cell(2, 7, 3, 2)), 85);
        assert_eq!(binomial(10, 3).unwrap(), 120);
    }

    #[test]
    fn secant_examples() {
        let r = secant_dim(&cell(1, 2, 3, 2), DEFAULT_PRIME, 1, 3).unwrap();
        assert_eq!((r.proj_dim, r.expdim_proj, r.defect, r.verdict), (8, 9, 1, Verdict::Defective));
        let r = secant_dim(&cell(2, 2, 4, 2), DEFAULT_PRIME, 1, 3).unwrap();
        assert_eq!((r.proj_dim, r.expdim_proj, r.defect), (13, 14, 1));
        let r = secant_dim(&cell(2, 7, 3, 2), DEFAULT_PRIME, 1, 3).unwrap();
        assert_eq!((r.affine_rank, r.expdim_proj, r.defect), (76, 85, 10));
        let r = secant_dim(&cell(1, 2, 2, 2), DEFAULT_PRIME, 1, 3).unwrap();
        assert_eq!((r.proj_dim, r.verdict), (5, Verdict::RegularFills));
    }

    #[test]
    fn osculation_order_equal_to_degree_fills() {
        let r = secant_dim(&cell(3, 2, 3, 1), DEFAULT_PRIME, 9, 2).unwrap();
        assert_eq!(r.proj_dim, 9);
        assert_eq!(r.verdict, Verdict::RegularFills);
        assert_eq!(r.trials, 2);
    }

    #[test]
    fn secant_rejects_bad_arguments() {
        let c = ParameterCell { k: 3, n: 2, d: 2, s: 1 };
        assert!(secant_dim(&c, DEFAULT_PRIME, 0, 1).is_err());
        assert!(secant_dim(&cell(1, 2, 3, 2), DEFAULT_PRIME, 0, 0).is_err());
        assert!(secant_dim(&cell(1, 2, 3, 2), 5, 0, 1).is_ok());
        assert!(secant_dim(&cell(1, 2, 3, 2), 3, 0, 1).is_err());
    }

    #[test]
    fn merge_keeps_max_and_primes() {
        let a = secant_dim(&cell(1, 2, 3, 2), DEFAULT_PRIME, 1, 1).unwrap();
        let b = secant_dim(&cell(1, 2, 3, 2), crate::field::SECOND_PRIME, 1, 2).unwrap();
        let m = a.merge(&b).unwrap();
        assert_eq!(m.trials, 3);
        assert_eq!(m.primes, vec![DEFAULT_PRIME, crate::field::SECOND_PRIME]);
        assert_eq!(m.affine_rank, 9);
        let c = secant_dim(&cell(1, 2, 3, 3), DEFAULT_PRIME, 1, 1).unwrap();
        assert!(a.merge(&c).is_err());
    }
}
