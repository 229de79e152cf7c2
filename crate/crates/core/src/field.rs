//! Prime-field arithmetic.
//!
//! Elements are stored as plain `u64` residues next to a [`PrimeField`]
//! descriptor; [`FieldElement`] bundles the two for values that cross API
//! boundaries.

use std::fmt;

use crate::error::{usage, Result};

/// 2^31 - 1, the default modulus.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Modulus used for confirmation reruns.
pub const SECOND_PRIME: u64 = 1_000_000_007;

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Validates that `p` is a prime below [`MAX_PRIME`].
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return usage(format!("modulus {p} exceeds {MAX_PRIME}"));
        }
        if !is_prime(p) {
            return usage(format!("modulus {p} is not prime"));
        }
        Ok(Self { p })
    }

    /// Checks that multinomial and derivative factors up to degree `d` stay nonzero.
    pub fn require_above(&self, d: usize) -> Result<()> {
        if (d as u64) >= self.p {
            return usage(format!("modulus {} must exceed degree {d}", self.p));
        }
        Ok(())
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Embeds a signed integer.
    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            modulus: self.p,
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

/// A residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub value: u64,
    pub modulus: u64,
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Deterministic trial division; moduli here fit in 32 bits.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut q = 3u64;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 2;
    }
    true
}
