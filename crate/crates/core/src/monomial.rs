//! Monomial indexing for the graded pieces R_d of k[x_0, ..., x_n].
//!
//! Monomials of a fixed degree are ordered graded-reverse-lexicographically
//! with x_0 > x_1 > ... > x_n, largest first, so index 0 is x_0^d and the
//! last index is x_n^d.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::error::{usage, Error, Result};

/// Exact binomial coefficient C(a, b); zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> Result<u128> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 1..=b as u128 {
        // i divides acc * x; split the division so no intermediate exceeds the result.
        let x = a as u128 - b as u128 + i;
        let g = gcd(acc, i);
        acc = (acc / g)
            .checked_mul(x / (i / g))
            .ok_or_else(|| Error::Overflow(format!("C({a}, {b})")))?;
    }
    Ok(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// C(a, b) with the convention that it vanishes for `a < b` or `a < 0`.
///
/// Panics on overflow; only used for desk-scale bookkeeping.
pub fn choose(a: i64, b: i64) -> i64 {
    if b < 0 || a < b {
        return 0;
    }
    let v = binomial(a as u64, b as u64).expect("binomial overflow");
    i64::try_from(v).expect("binomial does not fit i64")
}

/// dim R_d = C(n + d, n) for forms in n + 1 variables.
pub fn dim_forms(n: usize, d: usize) -> usize {
    let v = binomial((n + d) as u64, n as u64).expect("dimension overflow");
    usize::try_from(v).expect("dimension does not fit usize")
}

const PASCAL_ROWS: usize = 160;

fn pascal() -> &'static [[u64; PASCAL_ROWS]] {
    static TABLE: OnceLock<Vec<[u64; PASCAL_ROWS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![[0u64; PASCAL_ROWS]; PASCAL_ROWS];
        for a in 0..PASCAL_ROWS {
            t[a][0] = 1;
            for b in 1..=a {
                t[a][b] = t[a - 1][b - 1].saturating_add(t[a - 1][b]);
            }
        }
        t
    })
}

#[inline]
fn small_binomial(a: usize, b: usize) -> usize {
    if b > a {
        0
    } else if a < PASCAL_ROWS {
        pascal()[a][b] as usize
    } else {
        dim_forms(b, a - b)
    }
}

/// Exponents of a monomial x_0^{e_0} ... x_n^{e_n}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exponents: Vec<u32>,
}

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return usage("exponent vector needs at least one variable");
        }
        Ok(Self { exponents })
    }

    /// x_i^e in n + 1 variables.
    pub fn power(n: usize, i: usize, e: u32) -> Self {
        let mut exponents = vec![0; n + 1];
        exponents[i] = e;
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of variables minus one.
    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    /// Position in the canonical order of its graded piece.
    pub fn rank(&self) -> usize {
        rank_exponents(&self.exponents)
    }

    /// Inverse of [`ExponentVector::rank`].
    pub fn unrank(n: usize, d: usize, index: usize) -> Result<Self> {
        let len = dim_forms(n, d);
        if index >= len {
            return usage(format!("index {index} out of range for R_{d} with n = {n}"));
        }
        let mut exponents = vec![0u32; n + 1];
        let mut rem = index;
        let mut deg = d;
        for var in (1..=n).rev() {
            // Block of monomials with x_var exponent e has C(deg - e + var - 1, var - 1) members.
            let mut e = 0;
            loop {
                let block = small_binomial(deg - e + var - 1, var - 1);
                if rem < block {
                    break;
                }
                rem -= block;
                e += 1;
            }
            exponents[var] = e as u32;
            deg -= e;
        }
        exponents[0] = deg as u32;
        Ok(Self { exponents })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Graded reverse lexicographic comparison; `Greater` means earlier in the basis.
    pub fn grevlex_cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.exponents.iter().zip(&other.exponents).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

/// Canonical index of an exponent slice within its graded piece.
#[inline]
pub fn rank_exponents(exps: &[u32]) -> usize {
    let mut deg: usize = exps.iter().map(|&e| e as usize).sum();
    let mut index = 0;
    for var in (1..exps.len()).rev() {
        let e = exps[var] as usize;
        for j in 0..e {
            index += small_binomial(deg - j + var - 1, var - 1);
        }
        deg -= e;
    }
    index
}

/// All monomials of degree `d` in n + 1 variables, in canonical order.
pub fn monomial_basis(n: usize, d: usize) -> Result<Vec<ExponentVector>> {
    if n < 1 {
        return usage("monomial_basis needs n >= 1");
    }
    Ok(enumerate(n, d))
}

pub(crate) fn enumerate(n: usize, d: usize) -> Vec<ExponentVector> {
    let mut out = Vec::with_capacity(dim_forms(n, d));
    let mut current = vec![0u32; n + 1];
    fill(n, d, &mut current, &mut out);
    out
}

// Outer loop over x_n ascending, then x_{n-1}, ..., with x_0 absorbing the rest.
fn fill(var: usize, deg: usize, current: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
    if var == 0 {
        current[0] = deg as u32;
        out.push(ExponentVector {
            exponents: current.clone(),
        });
        return;
    }
    for e in 0..=deg {
        current[var] = e as u32;
        fill(var - 1, deg - e, current, out);
    }
    current[var] = 0;
}
