//! Closed-form dimension counts and the catalogue of known verdicts for
//! O^s_{k,n,d}.
//!
//! [`predict`] walks the applicable results in a fixed order and returns the
//! first hit:
//!
//! 1. `L2.3`: s = 1 (or d = k); the osculating variety itself has the expected dimension.
//! 2. k = 0 falls outside every result below and is left unpredicted.
//! 3. `CGG` for k = 1. The relation counts behind `P3.4A`/`P3.4Bi` miss the
//!    products F_i F_j when k = 1, so those formulas are only attached as
//!    K1-EDGE annotations, and the monomial specialisation behind `P3.5`
//!    needs k >= 2.
//! 4. Exact and filling statements: `P3.4A`, `P3.4Bi`/`P3.4Bii`, `C3.3` (s >= 3),
//!    `P3.4C`, `L3.2`, `P3.5`.
//! 5. `BF` for (k, n) = (2, 2).
//! 6. Lower bounds: `C3.3` (s = 2), `P3.6A`/`P3.6B`, `P3.7`, `P3.8`.
//!
//! Binomials with an undersized upper argument count as zero throughout.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::monomial::choose;
use crate::tangent::{expected_dim, ParameterCell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "L2.3")]
    L2_3,
    #[serde(rename = "L3.2")]
    L3_2,
    #[serde(rename = "C3.3")]
    C3_3,
    #[serde(rename = "P3.4A")]
    P3_4A,
    #[serde(rename = "P3.4Bi")]
    P3_4Bi,
    #[serde(rename = "P3.4Bii")]
    P3_4Bii,
    #[serde(rename = "P3.4C")]
    P3_4C,
    #[serde(rename = "P3.5")]
    P3_5,
    #[serde(rename = "P3.6A")]
    P3_6A,
    #[serde(rename = "P3.6B")]
    P3_6B,
    #[serde(rename = "P3.7")]
    P3_7,
    #[serde(rename = "P3.8")]
    P3_8,
    #[serde(rename = "CGG")]
    Cgg,
    #[serde(rename = "BF")]
    Bf,
    #[serde(rename = "NONE")]
    None,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::L2_3 => "L2.3",
            Source::L3_2 => "L3.2",
            Source::C3_3 => "C3.3",
            Source::P3_4A => "P3.4A",
            Source::P3_4Bi => "P3.4Bi",
            Source::P3_4Bii => "P3.4Bii",
            Source::P3_4C => "P3.4C",
            Source::P3_5 => "P3.5",
            Source::P3_6A => "P3.6A",
            Source::P3_6B => "P3.6B",
            Source::P3_7 => "P3.7",
            Source::P3_8 => "P3.8",
            Source::Cgg => "CGG",
            Source::Bf => "BF",
            Source::None => "NONE",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictedVerdict {
    RegularFills,
    RegularNonfill,
    Defective,
    Unknown,
}

impl PredictedVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PredictedVerdict::RegularFills => "regular-fills",
            PredictedVerdict::RegularNonfill => "regular-nonfill",
            PredictedVerdict::Defective => "defective",
            PredictedVerdict::Unknown => "unknown",
        }
    }

    /// The regular verdict matching the cell's expected dimension.
    fn regular(cell: &ParameterCell) -> Self {
        if expected_dim(cell) == cell.ambient_dim() {
            PredictedVerdict::RegularFills
        } else {
            PredictedVerdict::RegularNonfill
        }
    }
}

impl fmt::Display for PredictedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Caveat {
    /// k = 1, d = 2: the `P3.4A`/`P3.4Bi` counts may disagree with the true rank.
    #[serde(rename = "K1-EDGE")]
    K1Edge,
    /// CGG verdict outside the range where the conjecture is proved.
    #[serde(rename = "CONJECTURAL")]
    Conjectural,
}

impl Caveat {
    pub fn as_str(&self) -> &'static str {
        match self {
            Caveat::K1Edge => "K1-EDGE",
            Caveat::Conjectural => "CONJECTURAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub cell: ParameterCell,
    pub source: Source,
    pub verdict: PredictedVerdict,
    pub delta_exact: Option<i64>,
    pub delta_lower_bound: Option<i64>,
    pub caveat: Option<Caveat>,
    /// On K1-EDGE cells, the result whose formula was set aside and its value.
    pub formula_source: Option<Source>,
    pub formula_delta: Option<i64>,
}

impl Prediction {
    fn new(cell: &ParameterCell, source: Source, verdict: PredictedVerdict) -> Self {
        Self {
            cell: *cell,
            source,
            verdict,
            delta_exact: None,
            delta_lower_bound: None,
            caveat: None,
            formula_source: None,
            formula_delta: None,
        }
    }

    pub fn none(cell: &ParameterCell) -> Self {
        Self::new(cell, Source::None, PredictedVerdict::Unknown)
    }

    fn regular(cell: &ParameterCell, source: Source) -> Self {
        let mut p = Self::new(cell, source, PredictedVerdict::regular(cell));
        p.delta_exact = Some(0);
        p
    }

    fn fills(cell: &ParameterCell, source: Source) -> Self {
        let mut p = Self::new(cell, source, PredictedVerdict::RegularFills);
        p.delta_exact = Some(0);
        p
    }

    fn defective_exact(cell: &ParameterCell, source: Source, delta: i64) -> Self {
        let mut p = Self::new(cell, source, PredictedVerdict::Defective);
        p.delta_exact = Some(delta);
        p
    }

    fn defective_bound(cell: &ParameterCell, source: Source, bound: i64) -> Self {
        let mut p = Self::new(cell, source, PredictedVerdict::Defective);
        p.delta_lower_bound = Some(bound);
        p
    }

    pub fn is_none(&self) -> bool {
        self.source == Source::None
    }

    /// "=4", ">=36", or "" when nothing numeric is predicted.
    pub fn delta_label(&self) -> String {
        let base = match (self.delta_exact, self.delta_lower_bound) {
            (Some(e), _) => format!("={e}"),
            (None, Some(b)) => format!(">={b}"),
            (None, None) => String::new(),
        };
        match (self.caveat, self.formula_source) {
            (Some(Caveat::K1Edge), Some(src)) => {
                let formula = self.formula_delta.map(|v| format!("={v}")).unwrap_or_default();
                let sep = if base.is_empty() { "" } else { " " };
                format!("{base}{sep}K1-EDGE:{src}{formula}")
            }
            (Some(c), _) => {
                let sep = if base.is_empty() { "" } else { " " };
                format!("{base}{sep}{}", c.as_str())
            }
            _ => base,
        }
    }
}

fn c(a: usize, b: usize) -> i64 {
    choose(a as i64, b as i64)
}

/// dim O_{k,n,d} = min(N, n + C(k+n, n) - 1), projective.
pub fn dim_osculating(k: usize, n: usize, d: usize) -> i64 {
    let big_n = c(n + d, n) - 1;
    big_n.min(n as i64 + c(k + n, n) - 1)
}

/// s^2 - s + sum_{h=2}^{s} (-1)^h C(s, h) C(k - (h - 1) + n, n).
pub fn delta_34a(k: usize, n: usize, s: usize) -> i64 {
    let (k, n, s) = (k as i64, n as i64, s as i64);
    let mut delta = s * s - s;
    for h in 2..=s {
        let sign = if h % 2 == 0 { 1 } else { -1 };
        delta += sign * choose(s, h) * choose(k - (h - 1) + n, n);
    }
    delta
}

fn raw_count(cell: &ParameterCell) -> i64 {
    (cell.s * cell.cone_dim()) as i64
}

fn ambient(cell: &ParameterCell) -> i64 {
    c(cell.n + cell.d, cell.n)
}

/// `P3.4Bi`/`P3.4Bii` on d = k + 1, s <= n - 1 with ambient expected dimension.
pub fn predict_34b(k: usize, n: usize, s: usize) -> Prediction {
    let d = k + 1;
    let cell = ParameterCell { k, n, d, s };
    if n < 1 || s < 2 || s + 1 > n || raw_count(&cell) < ambient(&cell) {
        return Prediction::none(&cell);
    }
    let mut p = if ((s * d) as i64) < c(n - s + d, d - 1) {
        Prediction::defective_exact(&cell, Source::P3_4Bi, c(n - s + d, d) - (s * (n - s + 1)) as i64)
    } else {
        Prediction::fills(&cell, Source::P3_4Bii)
    };
    if k == 1 {
        p.caveat = Some(Caveat::K1Edge);
    }
    p
}

fn predict_34a(cell: &ParameterCell) -> Option<Prediction> {
    let ParameterCell { k, n, d, s } = *cell;
    if d == k + 1 && s >= 2 && s + 1 <= n && raw_count(cell) <= ambient(cell) {
        let mut p = Prediction::defective_exact(cell, Source::P3_4A, delta_34a(k, n, s));
        if k == 1 {
            p.caveat = Some(Caveat::K1Edge);
        }
        Some(p)
    } else {
        None
    }
}

/// `P3.4A` or the threshold pair, whichever applies (`P3.4A` first on ties).
fn predict_34ab(cell: &ParameterCell) -> Option<Prediction> {
    predict_34a(cell).or_else(|| {
        if cell.d != cell.k + 1 {
            return None;
        }
        let p = predict_34b(cell.k, cell.n, cell.s);
        (!p.is_none()).then_some(p)
    })
}

/// Range in which the tangential-variety conjecture is a theorem.
pub fn cgg_proved(n: usize, d: usize, s: usize) -> bool {
    s <= 5
        || d == 2
        || (d >= 3 && n >= s + 1)
        || (d >= 4 && s == n)
        || 3 * s >= c(n + 2, 2) as usize + 3
        || n == 2
        || n == 3
}

fn predict_cgg(cell: &ParameterCell) -> Prediction {
    let ParameterCell { n, d, s, .. } = *cell;
    let defective = (d == 2 && n >= 2 * s) || (d == 3 && n == s && (2..=4).contains(&s));
    let mut p = if defective {
        Prediction::new(cell, Source::Cgg, PredictedVerdict::Defective)
    } else {
        Prediction::regular(cell, Source::Cgg)
    };
    if !cgg_proved(n, d, s) {
        p.caveat = Some(Caveat::Conjectural);
    }
    if let Some(edge) = predict_34ab(cell) {
        p.caveat = Some(Caveat::K1Edge);
        p.formula_source = Some(edge.source);
        p.formula_delta = edge.delta_exact.filter(|_| edge.verdict == PredictedVerdict::Defective);
    }
    p
}

fn predict_bf(cell: &ParameterCell) -> Prediction {
    if cell.s == 2 && cell.d == 4 {
        Prediction::new(cell, Source::Bf, PredictedVerdict::Defective)
    } else {
        Prediction::regular(cell, Source::Bf)
    }
}

/// Every applicable result, in priority order. K1-EDGE formulas are included, flagged.
pub fn applicable(cell: &ParameterCell) -> Vec<Prediction> {
    let ParameterCell { k, n, d, s } = *cell;
    let mut out = Vec::new();
    if s == 1 || d == k {
        out.push(Prediction::regular(cell, Source::L2_3));
    }
    if k == 0 || d < k {
        return out;
    }
    if d == k {
        return out;
    }
    let ambient = ambient(cell);
    let raw = raw_count(cell);

    // the list concerns secant varieties proper, s >= 2
    if k == 1 && s >= 2 {
        out.push(predict_cgg(cell));
    }

    // exact and filling statements
    if s >= 2 {
        if let Some(p) = predict_34ab(cell) {
            out.push(p);
        }
    }
    if n == 2 && d == k + 2 && s >= 3 {
        out.push(Prediction::regular(cell, Source::C3_3));
    }
    if d == k + 1 && s >= 2 && s >= n {
        out.push(Prediction::fills(cell, Source::P3_4C));
    }
    if s >= n + 1 {
        let j = if s >= n + 2 { 2 } else { 1 };
        if n * d < (k + 1) * (n + j) {
            out.push(Prediction::fills(cell, Source::L3_2));
        }
    }
    if s <= n + 1 && d >= 2 * k + 1 {
        out.push(Prediction::regular(cell, Source::P3_5));
    }

    if k == 2 && n == 2 {
        out.push(predict_bf(cell));
    }

    // lower bounds
    if n == 2 && d == k + 2 && s == 2 {
        out.push(Prediction::defective_bound(cell, Source::C3_3, 1));
    }
    if s >= 2 && s <= n && k + 2 <= d && d <= 2 * k {
        if raw >= ambient {
            out.push(Prediction::defective_bound(cell, Source::P3_6A, c(n - s + d, d)));
        }
        if raw < ambient {
            let bound = c(s, 2) * choose(2 * k as i64 - d as i64 + n as i64, n as i64);
            out.push(Prediction::defective_bound(cell, Source::P3_6B, bound));
        }
    }
    if s == n + 1 && k + 2 <= d && d <= 2 * k && raw <= ambient {
        let bound = c(n + 1, 2) * choose(2 * k as i64 - d as i64 + n as i64, n as i64);
        out.push(Prediction::defective_bound(cell, Source::P3_7, bound));
    }
    if s == n + 1 && k + 2 < d && d <= 2 * k && n * (d - k - 2) >= k + 2 && raw >= ambient {
        let top = ((n + 1) * (d - k - 1)) as i64 - (d + 1) as i64;
        out.push(Prediction::defective_bound(cell, Source::P3_8, choose(top, n as i64)));
    }
    out
}

/// The strongest applicable statement, or a NONE prediction.
pub fn predict(cell: &ParameterCell) -> Prediction {
    applicable(cell)
        .into_iter()
        .find(|p| !(p.caveat == Some(Caveat::K1Edge) && p.source != Source::Cgg))
        .unwrap_or_else(|| Prediction::none(cell))
}

/// Pairs of applicable results that disagree on regularity or on an exact defect.
pub fn contradictions(cell: &ParameterCell) -> Vec<(Source, Source)> {
    let all: Vec<Prediction> = applicable(cell)
        .into_iter()
        .filter(|p| !(p.caveat == Some(Caveat::K1Edge) && p.source != Source::Cgg))
        .collect();
    let mut out = Vec::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let regular = |p: &Prediction| p.verdict != PredictedVerdict::Defective;
            let clash = regular(a) != regular(b)
                || matches!((a.delta_exact, b.delta_exact), (Some(x), Some(y)) if x != y)
                || (regular(a) && regular(b) && a.verdict != b.verdict);
            if clash {
                out.push((a.source, b.source));
            }
        }
    }
    out
}
