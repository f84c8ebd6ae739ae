use tracemine::agreement::{gwet_ac1, kendalls_w, scores_to_ranks};

#[test]
fn ac1_fixtures() {
    let a = ["hec", "hep", "p", "w", "r"];
    assert_eq!(gwet_ac1(&a, &a, None).unwrap().statistic, 1.0);
    let r = gwet_ac1(&["x", "x", "y", "y"], &["x", "y", "y", "y"], None).unwrap();
    assert!((r.statistic - 0.5294).abs() < 1e-4, "{}", r.statistic);
}

#[test]
fn kendall_extremes_and_tie_correction() {
    let identical = vec![vec![1.0, 2.0, 3.0, 4.0]; 4];
    assert!((kendalls_w(&identical, true).unwrap().statistic - 1.0).abs() < 1e-12);
    let reversed = vec![vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0]];
    assert_eq!(kendalls_w(&reversed, true).unwrap().statistic, 0.0);
    let tie_free = scores_to_ranks(&[
        vec![2.0, 9.0, 4.0, 1.0],
        vec![3.0, 8.0, 1.0, 2.0],
        vec![1.0, 7.0, 6.0, 5.0],
    ])
    .unwrap();
    let on = kendalls_w(&tie_free, true).unwrap().statistic;
    let off = kendalls_w(&tie_free, false).unwrap().statistic;
    assert_eq!(on, off);
}
