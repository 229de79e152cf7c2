use oscsec::predictions::{delta_34a, dim_osculating, predict, predict_34b, PredictedVerdict, Source};
use oscsec::monomial::choose;
use oscsec::{secant_dim, ParameterCell, Verdict, DEFAULT_PRIME};

fn cell(k: usize, n: usize, d: usize, s: usize) -> ParameterCell {
    ParameterCell::new(k, n, d, s).unwrap()
}

#[test]
fn alternating_sum_collapses_for_two_points() {
    for k in 1..=10 {
        for n in 1..=10 {
            assert_eq!(delta_34a(k, n, 2), 2 + choose((k + n - 1) as i64, n as i64), "k={k} n={n}");
        }
    }
}

#[test]
fn formula_examples() {
    assert_eq!(dim_osculating(2, 2, 5), 7);
    assert_eq!(dim_osculating(1, 2, 3), 4);
    assert_eq!(dim_osculating(3, 2, 3), 9);
    assert_eq!(delta_34a(2, 7, 2), 10);
    assert_eq!(delta_34a(2, 3, 2), 6);
    assert_eq!(delta_34a(1, 6, 2), 3);

    let p = predict_34b(2, 4, 2);
    assert_eq!((p.source, p.verdict, p.delta_exact), (Source::P3_4Bi, PredictedVerdict::Defective, Some(4)));
    assert_eq!(predict_34b(2, 4, 3).verdict, PredictedVerdict::RegularFills);
    assert_eq!(predict_34b(1, 3, 2).verdict, PredictedVerdict::RegularFills);
}

#[test]
fn priority_examples() {
    let p = predict(&cell(8, 2, 15, 3));
    assert_eq!((p.source, p.delta_lower_bound), (Source::P3_8, Some(1)));
    let p = predict(&cell(2, 8, 4, 9));
    assert_eq!((p.source, p.delta_lower_bound), (Source::P3_7, Some(36)));
    let p = predict(&cell(2, 2, 5, 4));
    assert_eq!((p.source, p.verdict), (Source::L3_2, PredictedVerdict::RegularFills));
    let p = predict(&cell(2, 2, 4, 2));
    assert_eq!((p.source, p.verdict), (Source::Bf, PredictedVerdict::Defective));
    assert_eq!(predict(&cell(0, 2, 4, 5)).source, Source::None);
}

#[test]
fn none_iff_unknown() {
    for k in 0..=5 {
        for n in 1..=5 {
            for d in k + 1..=2 * k + 3 {
                for s in 1..=7 {
                    let p = predict(&cell(k, n, d, s));
                    assert_eq!(p.source == Source::None, p.verdict == PredictedVerdict::Unknown);
                    assert!(p.delta_exact.is_none() || p.delta_lower_bound.is_none());
                    assert_eq!(p, predict(&cell(k, n, d, s)));
                }
            }
        }
    }
}

#[test]
fn predictions_hold_on_desk_sweep() {
    let mut checked = 0;
    for k in 1..=4 {
        for n in 1..=4 {
            for d in k + 1..=2 * k + 2 {
                for s in 1..=n + 2 {
                    let c = cell(k, n, d, s);
                    let p = predict(&c);
                    if p.is_none() || p.delta_label().contains("K1-EDGE") {
                        continue;
                    }
                    let r = secant_dim(&c, DEFAULT_PRIME, 0, 3).unwrap();
                    match p.verdict {
                        PredictedVerdict::Defective => {
                            assert_eq!(r.verdict, Verdict::Defective, "{c} {:?}", p.source);
                            if let Some(e) = p.delta_exact {
                                assert_eq!(r.defect as i64, e, "{c} {:?}", p.source);
                            }
                            if let Some(b) = p.delta_lower_bound {
                                assert!(r.defect as i64 >= b, "{c} {:?}", p.source);
                            }
                        }
                        v => {
                            assert_eq!(r.defect, 0, "{c} {:?}", p.source);
                            assert_eq!(v.as_str(), r.verdict.as_str(), "{c} {:?}", p.source);
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 200, "only {checked} cells predicted");
}

#[test]
fn k1_edge_cell_reports_both_values() {
    let c = cell(1, 6, 2, 2);
    let p = predict(&c);
    assert_eq!(p.source, Source::Cgg);
    assert_eq!(p.formula_delta, Some(3));
    assert_eq!(secant_dim(&c, DEFAULT_PRIME, 0, 3).unwrap().defect, 4);
}
