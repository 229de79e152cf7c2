//! Inverse systems: the coefficient pairing on R_d, perpendicular spaces,
//! and executable checks of the fat-point sandwich, the length count and the
//! degree stability of the schemes cut out by W(L, F)^perp.
//!
//! The pairing is the plain dot product of coefficient vectors in the
//! monomial basis, so W^perp is the right kernel of a basis matrix of W.

use crate::error::{usage, Result};
use crate::field::FieldElement;
use crate::form::Form;
use crate::linalg::{self, BasisMatrix};
use crate::monomial::{dim_forms, enumerate};
use crate::tangent::{tangent_cone, TangentCone};

/// W^perp inside R_d.
#[derive(Debug, Clone)]
pub struct PerpSpace {
    pub n: usize,
    pub d: usize,
    pub basis: BasisMatrix,
}

impl PerpSpace {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

/// phi(f, g) = sum over monomials I of f_I g_I.
pub fn pairing(f: &Form, g: &Form) -> Result<FieldElement> {
    if f.n() != g.n() || f.degree() != g.degree() || f.field() != g.field() {
        return usage("pairing needs forms of the same shape");
    }
    let field = f.field();
    let v = f
        .coeffs()
        .iter()
        .zip(g.coeffs())
        .fold(0u64, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
    Ok(field.element(v))
}

pub fn perp(w: &BasisMatrix, n: usize, d: usize) -> Result<PerpSpace> {
    if w.cols() != dim_forms(n, d) {
        return usage(format!("matrix with {} columns does not live in R_{d} for n = {n}", w.cols()));
    }
    Ok(PerpSpace {
        n,
        d,
        basis: linalg::kernel_basis(w),
    })
}

/// Rows spanning the monomials x^I of degree d with i_0 in `allowed`.
fn monomials_with_x0(w: &Form, n: usize, d: usize, allowed: impl Fn(u32) -> bool) -> BasisMatrix {
    let field = w.field();
    let cols = dim_forms(n, d);
    let mut out = BasisMatrix::zeros(field, 0, cols);
    for (i, m) in enumerate(n, d).iter().enumerate() {
        if allowed(m.exponents()[0]) {
            let mut row = vec![0u64; cols];
            row[i] = 1;
            out.push_row(&row).expect("row length matches");
        }
    }
    out
}

/// (p^m)_d for p = (x_1, ..., x_n): monomials of degree d with i_0 <= d - m.
pub fn prime_power_space(like: &Form, n: usize, d: usize, m: usize) -> BasisMatrix {
    monomials_with_x0(like, n, d, |e0| (e0 as usize) + m <= d)
}

/// Compares perp(x_0^{d-t} R_t) with the monomial span of x^I, i_0 <= d - t - 1.
pub fn power_perp_identity(n: usize, d: usize, t: usize) -> Result<bool> {
    if t > d {
        return usage(format!("t = {t} exceeds d = {d}"));
    }
    let field = crate::field::PrimeField::default();
    let x0 = Form::variable(field, n, 0);
    let left_w = crate::tangent::osculating_space_basis(&x0, t, d)?;
    let left = perp(&left_w, n, d)?;
    let right = prime_power_space(&x0, n, d, t + 1);
    if left.dim() != right.rows() {
        return Ok(false);
    }
    if left.dim() == 0 {
        return Ok(true);
    }
    linalg::same_span(&left.basis, &right)
}

/// (p^{k+2})_d ⊆ W(x_0, F)^perp ⊆ (p^{k+1})_d.
pub fn sandwich_check(k: usize, n: usize, d: usize, osculating: &Form) -> Result<bool> {
    if d < k + 2 {
        return usage(format!("sandwich needs d >= k + 2, got d = {d}, k = {k}"));
    }
    let x0 = Form::variable(osculating.field(), n, 0);
    let w = tangent_cone(&x0, osculating, k, d)?;
    let wp = perp(&w.basis, n, d)?;
    let inner = prime_power_space(&x0, n, d, k + 2);
    let outer = prime_power_space(&x0, n, d, k + 1);
    let lower = inner.rows() == 0 || wp.dim() > 0 && linalg::contains(&wp.basis, &inner)?;
    let upper = wp.dim() == 0 || outer.rows() > 0 && linalg::contains(&outer, &wp.basis)?;
    Ok(lower && upper)
}

/// Length of the scheme cut out by one cone: dim W = C(k+n, n) + n for generic data.
pub fn scheme_length(cone: &TangentCone) -> usize {
    linalg::rank(&cone.basis)
}

/// Every (monomial of degree d-k-2) * (element of W_{k+2}^perp) lies in W_d^perp.
pub fn degree_stability_check(k: usize, n: usize, d: usize, osculating: &Form) -> Result<bool> {
    if d < k + 2 {
        return usage(format!("degree stability needs d >= k + 2, got d = {d}, k = {k}"));
    }
    let field = osculating.field();
    let x0 = Form::variable(field, n, 0);
    let low = tangent_cone(&x0, osculating, k, k + 2)?;
    let low_perp = perp(&low.basis, n, k + 2)?;
    let high = tangent_cone(&x0, osculating, k, d)?;
    let shifts = enumerate(n, d - k - 2);
    for i in 0..low_perp.dim() {
        let g = Form::from_coeffs(field, n, k + 2, low_perp.basis.row(i).to_vec())?;
        for h in &shifts {
            let product = g.mul_monomial(h);
            if high.basis.apply(product.coeffs()).iter().any(|&v| v != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// dim of the intersection of the W_i^perp, i.e. h^0 of the ideal sheaf of Y twisted by d.
pub fn dual_codim(cones: &[TangentCone]) -> Result<usize> {
    let first = match cones.first() {
        Some(c) => c,
        None => return usage("dual_codim needs at least one cone"),
    };
    let (n, d) = (first.linear.n(), first.d);
    let perps: Vec<PerpSpace> = cones
        .iter()
        .map(|c| {
            if c.basis.cols() != first.basis.cols() || c.basis.field() != first.basis.field() {
                return usage("cones live in different ambients");
            }
            perp(&c.basis, n, d)
        })
        .collect::<Result<_>>()?;
    if perps.iter().any(|p| p.dim() == 0) {
        return Ok(0);
    }
    let refs: Vec<&BasisMatrix> = perps.iter().map(|p| &p.basis).collect();
    linalg::intersection_dim(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::monomial::ExponentVector;
    use crate::tangent::{draw_cones, stack_cones, ParameterCell};

    fn gf() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn pairing_examples() {
        let f = gf();
        let x0sq = Form::from_terms(f, 1, 2, &[(1, &[2, 0])]).unwrap();
        let x0x1 = Form::from_terms(f, 1, 2, &[(1, &[1, 1])]).unwrap();
        assert_eq!(pairing(&x0sq, &x0sq).unwrap().value, 1);
        assert_eq!(pairing(&x0sq, &x0x1).unwrap().value, 0);
        let a = Form::from_terms(f, 1, 2, &[(1, &[2, 0]), (2, &[1, 1])]).unwrap();
        let b = Form::from_terms(f, 1, 2, &[(3, &[2, 0]), (1, &[1, 1])]).unwrap();
        assert_eq!(pairing(&a, &b).unwrap().value, 5);
        assert_eq!(pairing(&a, &b).unwrap(), pairing(&b, &a).unwrap());
        assert!(pairing(&a, &Form::variable(f, 1, 0)).is_err());
    }

    #[test]
    fn perp_examples() {
        let f = gf();
        assert_eq!(perp(&BasisMatrix::identity(f, 6), 2, 2).unwrap().dim(), 0);
        assert_eq!(perp(&BasisMatrix::zeros(f, 1, 6), 2, 2).unwrap().dim(), 6);
        let x0 = Form::variable(f, 2, 0);
        let rows: Vec<Form> = (0..3).map(|j| x0.mul_monomial(&ExponentVector::power(2, j, 1))).collect();
        let w = BasisMatrix::from_forms(&rows).unwrap();
        let wp = perp(&w, 2, 2).unwrap();
        assert_eq!(wp.dim(), 3);
        let expected: Vec<Vec<u64>> = [[0, 2, 0], [0, 1, 1], [0, 0, 2]]
            .iter()
            .map(|e| Form::monomial(f, &ExponentVector::new(e.to_vec()).unwrap()).into_coeffs())
            .collect();
        let expected = BasisMatrix::from_rows(f, 6, &expected).unwrap();
        assert!(linalg::same_span(&wp.basis, &expected).unwrap());
        assert!(perp(&w, 2, 3).is_err());
    }

    #[test]
    fn power_perp_examples() {
        assert!(power_perp_identity(2, 4, 2).unwrap());
        let x0 = Form::variable(gf(), 2, 0);
        assert_eq!(prime_power_space(&x0, 2, 4, 3).rows(), 15 - 6);
        assert!(power_perp_identity(1, 3, 0).unwrap());
        assert_eq!(prime_power_space(&Form::variable(gf(), 1, 0), 1, 3, 1).rows(), 3);
        assert!(power_perp_identity(3, 4, 4).unwrap());
        assert!(power_perp_identity(3, 4, 5).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let f = gf();
        assert!(sandwich_check(1, 2, 4, &Form::random(f, 2, 1, 7)).unwrap());
        assert!(sandwich_check(2, 2, 4, &Form::random(f, 2, 2, 8)).unwrap());
        assert!(sandwich_check(0, 1, 2, &Form::constant(f, 1, 1)).unwrap());
        assert!(sandwich_check(2, 2, 3, &Form::random(f, 2, 2, 8)).is_err());
    }

    #[test]
    fn small_sandwich_is_explicit() {
        // W = <x0^2, x0 x1>, so W^perp = <x1^2> = (p^2)_2 ⊂ (p^1)_2 = <x0x1, x1^2>.
        let f = gf();
        let x0 = Form::variable(f, 1, 0);
        let w = tangent_cone(&x0, &Form::constant(f, 1, 1), 0, 2).unwrap();
        let wp = perp(&w.basis, 1, 2).unwrap();
        assert_eq!(wp.dim(), 1);
        assert!(linalg::same_span(&wp.basis, &prime_power_space(&x0, 1, 2, 2)).unwrap());
        assert_eq!(prime_power_space(&x0, 1, 2, 1).rows(), 2);
    }

    #[test]
    fn degree_stability_examples() {
        let f = gf();
        assert!(degree_stability_check(1, 2, 5, &Form::random(f, 2, 1, 1)).unwrap());
        assert!(degree_stability_check(2, 3, 4, &Form::random(f, 3, 2, 2)).unwrap());
        assert!(degree_stability_check(0, 1, 3, &Form::constant(f, 1, 1)).unwrap());
        assert!(degree_stability_check(2, 3, 3, &Form::random(f, 3, 2, 2)).is_err());
    }

    #[test]
    fn dual_codim_examples() {
        let f = gf();
        let c = ParameterCell::new(2, 2, 5, 1).unwrap();
        let cones = draw_cones(&c, f, 3, 0).unwrap();
        assert_eq!(dual_codim(&cones).unwrap(), 21 - 8);
        let c = ParameterCell::new(1, 2, 3, 2).unwrap();
        let cones = draw_cones(&c, f, 3, 0).unwrap();
        assert_eq!(dual_codim(&cones).unwrap(), 1);
        assert_eq!(linalg::rank(&stack_cones(&cones).unwrap()), 9);
        let c = ParameterCell::new(1, 2, 2, 3).unwrap();
        let cones = draw_cones(&c, f, 3, 0).unwrap();
        assert_eq!(dual_codim(&cones).unwrap(), 0);
        assert!(dual_codim(&[]).is_err());
    }

    #[test]
    fn dual_codim_rejects_mixed_ambients() {
        let f = gf();
        let a = draw_cones(&ParameterCell::new(1, 2, 3, 1).unwrap(), f, 3, 0).unwrap();
        let b = draw_cones(&ParameterCell::new(1, 2, 4, 1).unwrap(), f, 3, 0).unwrap();
        assert!(dual_codim(&[a[0].clone(), b[0].clone()]).is_err());
    }
}
