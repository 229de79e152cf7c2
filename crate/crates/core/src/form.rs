//! Dense homogeneous forms over a prime field.

use rand::Rng;

use crate::error::{usage, Result};
use crate::field::PrimeField;
use crate::monomial::{dim_forms, enumerate, rank_exponents, ExponentVector};
use crate::seed::rng_from_seed;

/// A form of fixed degree in n + 1 variables, stored as its coefficient
/// vector in the canonical monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    degree: usize,
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Form {
    pub fn zero(field: PrimeField, n: usize, degree: usize) -> Self {
        Self {
            n,
            degree,
            field,
            coeffs: vec![0; dim_forms(n, degree)],
        }
    }

    /// The constant form `c` (degree 0).
    pub fn constant(field: PrimeField, n: usize, c: u64) -> Self {
        Self {
            n,
            degree: 0,
            field,
            coeffs: vec![field.reduce(c)],
        }
    }

    pub fn from_coeffs(field: PrimeField, n: usize, degree: usize, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != dim_forms(n, degree) {
            return usage(format!(
                "expected {} coefficients for degree {degree} in {} variables, got {}",
                dim_forms(n, degree),
                n + 1,
                coeffs.len()
            ));
        }
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        Ok(Self {
            n,
            degree,
            field,
            coeffs,
        })
    }

    /// Builds a form from (coefficient, exponents) terms; repeated monomials add up.
    pub fn from_terms(field: PrimeField, n: usize, degree: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        let mut f = Self::zero(field, n, degree);
        for &(c, exps) in terms {
            if exps.len() != n + 1 {
                return usage("term has the wrong number of variables");
            }
            if exps.iter().map(|&e| e as usize).sum::<usize>() != degree {
                return usage("term has the wrong degree");
            }
            let i = rank_exponents(exps);
            f.coeffs[i] = field.add(f.coeffs[i], field.from_i64(c));
        }
        Ok(f)
    }

    pub fn monomial(field: PrimeField, m: &ExponentVector) -> Self {
        let mut f = Self::zero(field, m.n(), m.degree());
        f.coeffs[m.rank()] = 1;
        f
    }

    /// The linear form sum c_i x_i.
    pub fn linear(field: PrimeField, coeffs: &[u64]) -> Result<Self> {
        if coeffs.len() < 2 {
            return usage("a linear form needs at least two variables");
        }
        // Degree-1 order is x_0, x_1, ..., x_n.
        Self::from_coeffs(field, coeffs.len() - 1, 1, coeffs.to_vec())
    }

    /// The variable x_i.
    pub fn variable(field: PrimeField, n: usize, i: usize) -> Self {
        Self::monomial(field, &ExponentVector::power(n, i, 1))
    }

    /// Coefficients drawn uniformly from the field by a generator seeded with `seed`.
    pub fn random(field: PrimeField, n: usize, degree: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let p = field.modulus();
        let coeffs = (0..dim_forms(n, degree)).map(|_| rng.gen_range(0..p)).collect();
        Self {
            n,
            degree,
            field,
            coeffs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn coeff(&self, m: &ExponentVector) -> u64 {
        debug_assert_eq!(m.degree(), self.degree);
        self.coeffs[m.rank()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return usage(format!("variable count mismatch: {} vs {}", self.n + 1, other.n + 1));
        }
        if self.field != other.field {
            return usage("modulus mismatch");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return usage("cannot add forms of different degrees");
        }
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = f.reduce(c);
        Self {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    /// Exact product in degree `a + b`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let field = self.field;
        let degree = self.degree + other.degree;
        let mut out = vec![0u64; dim_forms(self.n, degree)];
        let left = enumerate(self.n, self.degree);
        let right = enumerate(self.n, other.degree);
        let mut scratch = vec![0u32; self.n + 1];
        for (a, ma) in self.coeffs.iter().zip(&left) {
            if *a == 0 {
                continue;
            }
            for (b, mb) in other.coeffs.iter().zip(&right) {
                if *b == 0 {
                    continue;
                }
                for (s, (x, y)) in scratch.iter_mut().zip(ma.exponents().iter().zip(mb.exponents())) {
                    *s = x + y;
                }
                let i = rank_exponents(&scratch);
                out[i] = field.add(out[i], field.mul(*a, *b));
            }
        }
        Ok(Self {
            n: self.n,
            degree,
            field,
            coeffs: out,
        })
    }

    /// Product with a single monomial; a re-indexing of the coefficients.
    pub fn mul_monomial(&self, m: &ExponentVector) -> Self {
        debug_assert_eq!(m.n(), self.n);
        let degree = self.degree + m.degree();
        let mut out = vec![0u64; dim_forms(self.n, degree)];
        let mut scratch = vec![0u32; self.n + 1];
        for (c, ma) in self.coeffs.iter().zip(enumerate(self.n, self.degree)) {
            if *c == 0 {
                continue;
            }
            for (s, (x, y)) in scratch.iter_mut().zip(ma.exponents().iter().zip(m.exponents())) {
                *s = x + y;
            }
            out[rank_exponents(&scratch)] = *c;
        }
        Self {
            n: self.n,
            degree,
            field: self.field,
            coeffs: out,
        }
    }

    /// L^e by multinomial expansion; `self` must be linear and the modulus must exceed `e`.
    pub fn linear_power(&self, e: usize) -> Result<Self> {
        if self.degree != 1 {
            return usage("linear_power needs a form of degree 1");
        }
        let field = self.field;
        field.require_above(e)?;
        let mut fact = vec![1u64; e + 1];
        for i in 1..=e {
            fact[i] = field.mul(fact[i - 1], i as u64);
        }
        let inv_fact: Vec<u64> = fact.iter().map(|&f| field.inv(f)).collect();
        // powers[i][j] = c_i^j
        let powers: Vec<Vec<u64>> = self
            .coeffs
            .iter()
            .map(|&c| {
                let mut row = vec![1u64; e + 1];
                for j in 1..=e {
                    row[j] = field.mul(row[j - 1], c);
                }
                row
            })
            .collect();
        let coeffs = enumerate(self.n, e)
            .iter()
            .map(|m| {
                let mut acc = fact[e];
                for (i, &ex) in m.exponents().iter().enumerate() {
                    acc = field.mul(acc, inv_fact[ex as usize]);
                    acc = field.mul(acc, powers[i][ex as usize]);
                }
                acc
            })
            .collect();
        Ok(Self {
            n: self.n,
            degree: e,
            field,
            coeffs,
        })
    }

    /// Iterated formal partial derivative d^alpha f.
    pub fn partial_derivative(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.n + 1 {
            return usage("direction has the wrong number of variables");
        }
        let order: usize = alpha.iter().map(|&a| a as usize).sum();
        if order > self.degree {
            return usage(format!("derivative of order {order} exceeds degree {}", self.degree));
        }
        let field = self.field;
        let degree = self.degree - order;
        let mut out = vec![0u64; dim_forms(self.n, degree)];
        let mut scratch = vec![0u32; self.n + 1];
        'terms: for (c, m) in self.coeffs.iter().zip(enumerate(self.n, self.degree)) {
            if *c == 0 {
                continue;
            }
            let mut factor = *c;
            for (i, (&e, &a)) in m.exponents().iter().zip(alpha).enumerate() {
                if e < a {
                    continue 'terms;
                }
                for t in 0..a {
                    factor = field.mul(factor, (e - t) as u64);
                }
                scratch[i] = e - a;
            }
            let idx = rank_exponents(&scratch);
            out[idx] = field.add(out[idx], factor);
        }
        Ok(Self {
            n: self.n,
            degree,
            field,
            coeffs: out,
        })
    }
}
