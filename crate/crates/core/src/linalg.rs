//! Exact linear algebra over GF(p): rank, kernels, and subspace sums and
//! intersections of row spaces.

use crate::error::{usage, Result};
use crate::field::PrimeField;
use crate::form::Form;

/// Dense row-major matrix over GF(p) whose rows span a subspace of some R_d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u64>,
}

impl BasisMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    /// Entries are reduced modulo p.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return usage(format!("row of length {} in a matrix with {cols} columns", r.len()));
            }
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            field,
            data,
        })
    }

    /// One row per form; all forms must share (n, degree, modulus).
    pub fn from_forms(forms: &[Form]) -> Result<Self> {
        let first = match forms.first() {
            Some(f) => f,
            None => return usage("from_forms needs at least one form"),
        };
        let cols = first.coeffs().len();
        let mut data = Vec::with_capacity(forms.len() * cols);
        for f in forms {
            if f.n() != first.n() || f.degree() != first.degree() || f.field() != first.field() {
                return usage("forms live in different graded pieces");
            }
            data.extend_from_slice(f.coeffs());
        }
        Ok(Self {
            rows: forms.len(),
            cols,
            field: first.field(),
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    pub fn push_row(&mut self, row: &[u64]) -> Result<()> {
        if row.len() != self.cols {
            return usage("row length does not match column count");
        }
        let f = self.field;
        self.data.extend(row.iter().map(|&x| f.reduce(x)));
        self.rows += 1;
        Ok(())
    }

    pub fn entries(&self) -> usize {
        self.rows * self.cols
    }

    /// M v for a column vector `v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Row permutation followed by nonzero row scalings; used by property tests.
    pub fn permuted_scaled(&self, order: &[usize], scales: &[u64]) -> Self {
        let f = self.field;
        let mut data = Vec::with_capacity(self.data.len());
        for (&i, &c) in order.iter().zip(scales) {
            data.extend(self.row(i).iter().map(|&x| f.mul(x, c)));
        }
        Self {
            rows: order.len(),
            cols: self.cols,
            field: f,
            data,
        }
    }
}

/// Gaussian elimination in place; returns pivot columns in row order.
/// With `reduced`, pivots are scaled to one and cleared above as well.
fn eliminate(m: &mut BasisMatrix, reduced: bool) -> Vec<usize> {
    let f = m.field;
    let p = f.modulus();
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.data[r * cols + c]);
        if reduced {
            for j in c..cols {
                m.data[r * cols + j] = f.mul(m.data[r * cols + j], inv);
            }
        }
        let (head, tail) = m.data.split_at_mut(r * cols);
        let (pivot_row, below) = tail.split_at_mut(cols);
        let pivot_val = pivot_row[c];
        let clear = |row: &mut [u64]| {
            let lead = row[c];
            if lead == 0 {
                return;
            }
            // row -= factor * pivot_row, where factor = lead / pivot_val
            let factor = if reduced { lead } else { f.mul(lead, inv) };
            let neg = p - factor;
            for j in c..cols {
                // p < 2^32 keeps neg * x + y below 2^64.
                row[j] = (row[j] + neg * pivot_row[j]) % p;
            }
        };
        for row in below.chunks_mut(cols) {
            clear(row);
        }
        if reduced {
            for row in head.chunks_mut(cols) {
                clear(row);
            }
        }
        debug_assert!(pivot_val != 0);
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank; the input is left untouched.
pub fn rank(m: &BasisMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut work = m.clone();
    eliminate(&mut work, false).len()
}

/// Basis of the right null space {v : M v = 0}, one vector per row.
pub fn kernel_basis(m: &BasisMatrix) -> BasisMatrix {
    let f = m.field;
    let cols = m.cols;
    let mut work = m.clone();
    let pivots = eliminate(&mut work, true);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = BasisMatrix::zeros(f, 0, cols);
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(work.data[r * cols + free]);
        }
        out.data.extend_from_slice(&v);
        out.rows += 1;
    }
    out
}

/// Vertical concatenation; the row space of the result is the sum of the inputs' row spaces.
pub fn stack(ms: &[&BasisMatrix]) -> Result<BasisMatrix> {
    let first = match ms.first() {
        Some(m) => *m,
        None => return usage("stack needs at least one matrix"),
    };
    let mut out = BasisMatrix::zeros(first.field, 0, first.cols);
    for m in ms {
        if m.cols != first.cols {
            return usage(format!("column mismatch: {} vs {}", m.cols, first.cols));
        }
        if m.field != first.field {
            return usage("modulus mismatch");
        }
        out.data.extend_from_slice(&m.data);
        out.rows += m.rows;
    }
    Ok(out)
}

/// dim of the intersection of the row spaces, via the perps of the inputs:
/// the intersection is the perp of the sum of the perps.
pub fn intersection_dim(ms: &[&BasisMatrix]) -> Result<usize> {
    // validate shapes before doing any work
    let first = stack(ms)?;
    let cols = first.cols;
    let kernels: Vec<BasisMatrix> = ms.iter().map(|m| kernel_basis(m)).collect();
    let refs: Vec<&BasisMatrix> = kernels.iter().collect();
    Ok(cols - rank(&stack(&refs)?))
}

/// Row space of `a` is contained in the row space of `b`.
pub fn contains(b: &BasisMatrix, a: &BasisMatrix) -> Result<bool> {
    Ok(rank(&stack(&[b, a])?) == rank(b))
}

/// Row spaces coincide.
pub fn same_span(a: &BasisMatrix, b: &BasisMatrix) -> Result<bool> {
    Ok(contains(a, b)? && contains(b, a)?)
}
