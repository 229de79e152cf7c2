use oscsec::apolarity::dual_codim;
use oscsec::fatpoints::waring_dim;
use oscsec::form::Form;
use oscsec::linalg::rank;
use oscsec::monomial::dim_forms;
use oscsec::seed::derive_seed;
use oscsec::tangent::{draw_cones, stack_cones, tangent_cone, trial_rank};
use oscsec::{secant_dim, ParameterCell, PrimeField, Verdict, DEFAULT_PRIME, SECOND_PRIME};

fn cell(k: usize, n: usize, d: usize, s: usize) -> ParameterCell {
    ParameterCell::new(k, n, d, s).unwrap()
}

#[test]
fn cone_rank_is_generic_dimension() {
    let f = PrimeField::default();
    for k in 0..=4 {
        for n in 1..=4 {
            for d in k + 1..=k + 4 {
                let want = dim_forms(n, k) + n;
                for i in 0..50u64 {
                    let l = Form::random(f, n, 1, derive_seed(7, &[k as u64, n as u64, d as u64, i, 1]));
                    let g = Form::random(f, n, k, derive_seed(7, &[k as u64, n as u64, d as u64, i, 2]));
                    let w = tangent_cone(&l, &g, k, d).unwrap();
                    assert_eq!(rank(&w.basis), want.min(dim_forms(n, d)), "k={k} n={n} d={d}");
                }
            }
        }
    }
}

#[test]
fn trial_ranks_bounded_and_max_monotone() {
    let f = PrimeField::default();
    for &(k, n, d, s) in &[(1, 2, 3, 2), (2, 2, 4, 2), (2, 3, 4, 3), (0, 2, 4, 5), (3, 2, 6, 2)] {
        let c = cell(k, n, d, s);
        let cap = dim_forms(n, d).min(s * (dim_forms(n, k) + n + 1));
        let mut best = 0;
        for t in 0..5 {
            let r = trial_rank(&c, f, 11, t).unwrap();
            assert!(r <= cap);
            let prev = best;
            best = best.max(r);
            assert!(best >= prev);
        }
        let short = secant_dim(&c, DEFAULT_PRIME, 11, 2).unwrap();
        let long = secant_dim(&c, DEFAULT_PRIME, 11, 5).unwrap();
        assert!(long.affine_rank >= short.affine_rank);
        assert_eq!(long.affine_rank, best);
    }
}

#[test]
fn primal_and_dual_agree_on_every_trial() {
    let f = PrimeField::default();
    for k in 0..=2 {
        for n in 1..=3 {
            for d in k + 1..=k + 3 {
                for s in 1..=4 {
                    let c = cell(k, n, d, s);
                    for t in 0..3 {
                        let cones = draw_cones(&c, f, 5, t).unwrap();
                        let stacked = stack_cones(&cones).unwrap();
                        assert_eq!(rank(&stacked) + dual_codim(&cones).unwrap(), dim_forms(n, d), "{c}");
                    }
                }
            }
        }
    }
}

#[test]
fn waring_cross_validation() {
    let f = PrimeField::default();
    for n in 1..=3 {
        for d in 1..=6 {
            for s in 1..=6 {
                let sec = secant_dim(&cell(0, n, d, s), DEFAULT_PRIME, 0, 3).unwrap();
                assert_eq!(sec.proj_dim, waring_dim(n, d, s, f, 0, 3).unwrap(), "n={n} d={d} s={s}");
            }
        }
    }
}

#[test]
fn deterministic_results() {
    let c = cell(2, 3, 4, 2);
    let a = secant_dim(&c, DEFAULT_PRIME, 42, 3).unwrap();
    let b = secant_dim(&c, DEFAULT_PRIME, 42, 3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn worked_cells() {
    let r = secant_dim(&cell(1, 2, 3, 2), DEFAULT_PRIME, 0, 3).unwrap();
    assert_eq!((r.proj_dim, r.expdim_proj, r.defect, r.verdict), (8, 9, 1, Verdict::Defective));
    let r = secant_dim(&cell(2, 2, 4, 2), SECOND_PRIME, 0, 3).unwrap();
    assert_eq!((r.proj_dim, r.expdim_proj, r.defect), (13, 14, 1));
    let r = secant_dim(&cell(2, 7, 3, 2), DEFAULT_PRIME, 0, 3).unwrap();
    assert_eq!((r.affine_rank, r.defect), (76, 10));
    let r = secant_dim(&cell(2, 2, 5, 1), DEFAULT_PRIME, 0, 3).unwrap();
    assert_eq!((r.proj_dim, r.verdict), (7, Verdict::RegularNonfill));
    let r = secant_dim(&cell(3, 2, 3, 1), DEFAULT_PRIME, 0, 1).unwrap();
    assert_eq!(r.verdict, Verdict::RegularFills);
}

#[test]
fn small_prime_agrees_on_regular_cells() {
    let c = cell(8, 2, 15, 3);
    let big = secant_dim(&c, DEFAULT_PRIME, 0, 3).unwrap();
    let small = secant_dim(&c, 101, 0, 3).unwrap();
    assert_eq!(big.verdict, small.verdict);
}

#[test]
fn invalid_input_is_rejected() {
    assert!(ParameterCell::new(1, 0, 3, 2).is_err());
    assert!(ParameterCell::new(3, 2, 2, 2).is_err());
    assert!(ParameterCell::new(1, 2, 3, 0).is_err());
    assert!(secant_dim(&ParameterCell { k: 1, n: 2, d: 3, s: 2 }, 4, 0, 3).is_err());
    assert!(secant_dim(&ParameterCell { k: 1, n: 2, d: 7, s: 2 }, 5, 0, 3).is_err());
    assert!(secant_dim(&ParameterCell { k: 1, n: 2, d: 3, s: 2 }, DEFAULT_PRIME, 0, 0).is_err());
}
