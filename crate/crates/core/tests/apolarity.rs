use oscsec::apolarity::{
    degree_stability_check, pairing, perp, power_perp_identity, sandwich_check, scheme_length,
};
use oscsec::linalg::{rank, stack};
use oscsec::monomial::dim_forms;
use oscsec::seed::derive_seed;
use oscsec::tangent::tangent_cone;
use oscsec::{BasisMatrix, Form, PrimeField};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perp_is_an_involution(n in 1usize..=3, d in 1usize..=5, rows in 1usize..12, seed: u64) {
        let f = PrimeField::default();
        let forms: Vec<Form> = (0..rows).map(|i| Form::random(f, n, d, derive_seed(seed, &[i as u64]))).collect();
        let w = BasisMatrix::from_forms(&forms).unwrap();
        let p = perp(&w, n, d).unwrap();
        let back = perp(&p.basis, n, d).unwrap();
        let r = rank(&w);
        prop_assert_eq!(back.dim(), r);
        prop_assert_eq!(rank(&stack(&[&w, &back.basis]).unwrap()), r);
    }
}

#[test]
fn power_perp_identity_exhaustive() {
    for n in 1..=4 {
        for d in 0..=8 {
            for t in 0..=d {
                assert!(power_perp_identity(n, d, t).unwrap(), "n={n} d={d} t={t}");
            }
        }
    }
}

#[test]
fn sandwich_and_stability_on_random_forms() {
    let f = PrimeField::default();
    for k in 0..=3 {
        for n in 1..=3 {
            for d in k + 2..=k + 5 {
                for i in 0..20u64 {
                    let g = Form::random(f, n, k, derive_seed(3, &[k as u64, n as u64, d as u64, i]));
                    assert!(sandwich_check(k, n, d, &g).unwrap(), "sandwich k={k} n={n} d={d}");
                    assert!(degree_stability_check(k, n, d, &g).unwrap(), "stability k={k} n={n} d={d}");
                }
            }
        }
    }
}

#[test]
fn worked_examples() {
    let f = PrimeField::default();
    // <x0^2, x0 x1>^perp = <x1^2>
    let w = BasisMatrix::from_rows(f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
    let p = perp(&w, 1, 2).unwrap();
    assert_eq!(p.dim(), 1);
    assert_eq!(p.basis.row(0), &[0, 0, 1]);

    let one = Form::constant(f, 1, 1);
    assert!(sandwich_check(0, 1, 2, &one).unwrap());
    assert!(degree_stability_check(0, 1, 3, &one).unwrap());

    let x0 = Form::variable(f, 2, 0);
    let g = Form::random(f, 2, 2, 9);
    let cone = tangent_cone(&x0, &g, 2, 5).unwrap();
    assert_eq!(scheme_length(&cone), 8);
    assert_eq!(perp(&cone.basis, 2, 5).unwrap().dim(), dim_forms(2, 5) - 8);

    let a = Form::linear(f, &[1, 2]).unwrap();
    let b = Form::linear(f, &[3, 4]).unwrap();
    assert_eq!(pairing(&a, &b).unwrap().value, 11);
    assert!(sandwich_check(2, 2, 3, &g).is_err());
    assert!(power_perp_identity(2, 2, 3).is_err());
}
