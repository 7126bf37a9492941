use hyperglass::ensembles::ErVariant;
use hyperglass::experiments::{
    beta_schedule, combined_bound, concentration_scan, er_vs_regular, interpolation_gap, sqrt_d_coefficient, Problem,
};
use hyperglass::objectives::{gen_xorsat, Kernel};
use hyperglass::rng::stream;
use hyperglass::solvers::{ConstraintSet, Schedule, SolverChoice};
use hyperglass::stats::{line_fit, mean_sem};

#[test]
fn gap_grows_at_most_quadratically_in_beta() {
    let k = Kernel::cut(2, 2).unwrap();
    let betas = [0.5, 1.0, 2.0];
    let gaps: Vec<f64> = betas
        .iter()
        .map(|&b| interpolation_gap(10, 2, 64.0, b, &k, 64, &mut stream(40, 0)).unwrap().mean_abs_gap_over_beta)
        .collect();
    let x: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
    let y: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let fit = line_fit(&x, &y, None).unwrap();
    assert!(fit.slope <= 2.5, "{gaps:?}");
}

#[test]
fn xorsat_clause_count_matches_expectation() {
    let (n, p, d) = (200usize, 3usize, 10.0);
    let ratios: Vec<f64> =
        (0..100).map(|s| gen_xorsat(n, p, d, &mut stream(s, 3)).unwrap().m() as f64 / (2.0 * n as f64)).collect();
    let m = mean_sem(&ratios);
    // E m = C(n,p) d (p-1)! / n^(p-1)
    let nf = n as f64;
    let expected = nf * (nf - 1.0) * (nf - 2.0) / 6.0 * d * 2.0 / (nf * nf) / (2.0 * nf);
    assert!((m.mean - expected).abs() < 3.0 * m.sem, "{m:?} vs {expected}");
    // the large-n leading term d/(2p) differs by O(1/n)
    assert!((expected - d / (2.0 * p as f64)).abs() < 3.0 * d / (2.0 * p as f64) / nf);
}

#[test]
fn sbm_bisection_sits_below_quarter_degree() {
    let solver = SolverChoice::Anneal(Schedule::with_budget(1000, 2));
    let rows = sqrt_d_coefficient(Problem::SbmBisection { xi: 1.0 }, 100, &[16.0, 32.0], ErVariant::default(), &solver, 8, &mut stream(9, 0))
        .unwrap();
    for r in rows {
        assert!(r.value - r.leading < 0.0, "{r:?}");
        assert!(r.coefficient > 0.0);
    }
}

#[test]
fn complete_graph_has_zero_variance() {
    let scan = concentration_scan(
        Problem::Qcut { q: 2 },
        &[6, 8],
        100.0,
        ErVariant::Bernoulli,
        &SolverChoice::Exact,
        4,
        &mut stream(1, 0),
    )
    .unwrap();
    assert!(scan.rows.iter().all(|r| r.var == 0.0));
}

#[test]
fn empty_graphs_give_zero_on_both_sides() {
    let e = er_vs_regular(&Kernel::cut(2, 2).unwrap(), &ConstraintSet::All, 12, 0, ErVariant::default(), &SolverChoice::Exact, 3, &mut stream(2, 0))
        .unwrap();
    assert_eq!((e.v_er, e.v_reg), (0.0, 0.0));
}

#[test]
fn label_indicator_kernel_is_exploratory() {
    let k = Kernel::indicator(2, 2, 0).unwrap();
    let e = er_vs_regular(&k, &ConstraintSet::All, 12, 4, ErVariant::default(), &SolverChoice::Exact, 3, &mut stream(2, 0)).unwrap();
    assert!(e.exploratory);
    let cut = er_vs_regular(&Kernel::cut(2, 2).unwrap(), &ConstraintSet::All, 12, 4, ErVariant::default(), &SolverChoice::Exact, 3, &mut stream(2, 0))
        .unwrap();
    assert!(!cut.exploratory);
}

#[test]
fn schedule_bound_decreases_in_degree() {
    let vals: Vec<f64> =
        [16.0, 256.0, 4096.0].iter().map(|&d| combined_bound(1.0, beta_schedule(d, 0.125).unwrap(), d, 2)).collect();
    assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
    assert_eq!(beta_schedule(1.0, 0.2).unwrap(), 1.0);
}
