//! Acceptance suite. Prints one PASS/FAIL line per criterion (plus INFO lines
//! for diagnostics) and exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use hyperglass::ensembles::{gen_configuration_regular, gen_er_hypergraph, two_stage_partition, ErVariant, PUniformHypergraph};
use hyperglass::experiments::{concentration_scan, er_vs_regular, interpolation_gap, sqrt_d_coefficient, Problem};
use hyperglass::gaussian::{extrapolate, gen_standard_symmetric_tensor, pspin_ground_state, GroundStateEstimate};
use hyperglass::objectives::{gen_xorsat, hamiltonian, Kernel, SpinConfig, WeightTensor};
use hyperglass::rng::stream;
use hyperglass::solvers::{
    exact_max, log_partition, third_derivative_bound_check, ConstraintSet, Schedule, SolverChoice,
};
use hyperglass::stats::{chi_square_uniform, line_fit, mean_sem};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn info(msg: impl AsRef<str>) {
    println!("INFO {}", msg.as_ref());
}

// ---------------------------------------------------------------- exactness

#[derive(Clone, Copy)]
enum NaiveKernel {
    Cut,
    Xor,
}

/// Kernel value written out directly rather than read from a table.
fn naive_f(kind: NaiveKernel, args: &[u8]) -> f64 {
    match kind {
        NaiveKernel::Cut => {
            if args.iter().all(|&a| a == args[0]) {
                0.0
            } else {
                1.0
            }
        }
        NaiveKernel::Xor => {
            if args.iter().filter(|&&a| a == 1).count() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
    }
}

/// Walks all q^n labelings in lexicographic order and keeps the first best.
fn naive_max(w: &WeightTensor, kind: NaiveKernel, q: usize) -> (f64, Vec<u8>) {
    let (n, p) = (w.n(), w.p());
    let pf: f64 = (1..=p).map(|k| k as f64).product();
    let mut labels = vec![0u8; n];
    let mut best = (f64::NEG_INFINITY, labels.clone());
    let mut args = vec![0u8; p];
    loop {
        let mut h = 0.0;
        for (t, x) in w.iter() {
            for (a, &v) in args.iter_mut().zip(t) {
                *a = labels[v as usize];
            }
            h += pf * x * naive_f(kind, &args);
        }
        if h > best.0 {
            best = (h, labels.clone());
        }
        // increment with the last site as the least significant digit
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if (labels[i] as usize) + 1 < q {
                labels[i] += 1;
                break;
            }
            labels[i] = 0;
        }
    }
}

fn exactness() -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for i in 0..120u64 {
        let mut rng = stream(1000 + i, 0);
        let (w, kernel, kind, q) = match i % 4 {
            0 | 1 => {
                let (p, q) = ([2usize, 3][(i / 4 % 2) as usize], [2usize, 3][(i / 8 % 2) as usize]);
                let n = rng.random_range(if q == 3 { 6..=9 } else { 6..=12 });
                let g = gen_er_hypergraph(n, p, 3.0, &mut rng).unwrap();
                (WeightTensor::adjacency(&g).unwrap(), Kernel::cut(p, q).unwrap(), NaiveKernel::Cut, q)
            }
            2 => {
                let p = [2usize, 3][(i / 4 % 2) as usize];
                let inst = gen_xorsat(rng.random_range(6..=12), p, 4.0, &mut rng).unwrap();
                (inst.weights().unwrap(), Kernel::xor(p).unwrap(), NaiveKernel::Xor, 2)
            }
            _ => {
                // dyadic weights keep every partial sum exact
                let (p, q) = ([2usize, 3][(i / 4 % 2) as usize], [2usize, 3][(i / 8 % 2) as usize]);
                let n = rng.random_range(if q == 3 { 5..=8 } else { 6..=11 });
                let mut w = WeightTensor::new(n, p).unwrap();
                hyperglass::combinatorics::for_each_subset(n, p, |t| {
                    if rng.random::<f64>() < 0.4 {
                        w.set(t, rng.random_range(-16i32..=16) as f64 / 8.0).unwrap();
                    }
                });
                (w, Kernel::cut(p, q).unwrap(), NaiveKernel::Cut, q)
            }
        };
        let fast = exact_max(&w, &kernel, &ConstraintSet::All).unwrap();
        let (value, labels) = naive_max(&w, kind, q);
        checked += 1;
        if fast.value.to_bits() != value.to_bits() || fast.config.labels() != labels.as_slice() {
            mismatches.push(i);
        }
    }
    outcome(mismatches.is_empty(), format!("{checked} instances (n <= 12, q in {{2,3}}, p in {{2,3}}), mismatches {mismatches:?}"))
}

// ---------------------------------------------------------------- sandwich

fn sandwich() -> Outcome {
    let betas = [0.1, 0.5, 1.0, 3.0, 10.0];
    let (mut cells, mut bad) = (0, 0);
    for i in 0..110u64 {
        let mut rng = stream(2000 + i, 0);
        let (p, q) = ([2usize, 3][(i % 2) as usize], [2usize, 3][(i / 2 % 2) as usize]);
        let n = rng.random_range(if q == 3 { 5..=8 } else { 5..=12 });
        let g = gen_er_hypergraph(n, p, rng.random_range(1.0..6.0), &mut rng).unwrap();
        let w = WeightTensor::adjacency(&g).unwrap();
        let k = Kernel::cut(p, q).unwrap();
        let max = exact_max(&w, &k, &ConstraintSet::All).unwrap().value / n as f64;
        for &b in &betas {
            let f = log_partition(&w, &k, &ConstraintSet::All, b).unwrap().phi_over_beta();
            cells += 1;
            let upper = max + (q as f64).ln() / b;
            // both sides are computed in floating point, so equality cases
            // (e.g. an empty graph) may differ by a few ulps
            let ulps = 4.0 * f64::EPSILON * upper.abs().max(1.0);
            if !(max <= f && f <= upper + ulps) {
                bad += 1;
            }
        }
    }
    outcome(cells >= 500 && bad == 0, format!("{cells} cells, {bad} violations"))
}

// ---------------------------------------------------------------- third derivative

fn third_derivative() -> Outcome {
    let (mut over, mut worst) = (0, 0.0f64);
    for i in 0..100u64 {
        let mut rng = stream(3000 + i, 0);
        let (p, q) = ([2usize, 3][(i % 2) as usize], [2usize, 3][(i / 2 % 2) as usize]);
        let n = if q == 3 { 6 } else { 8 };
        let mut w = WeightTensor::new(n, p).unwrap();
        hyperglass::combinatorics::for_each_subset(n, p, |t| {
            if rng.random::<f64>() < 0.5 {
                w.set(t, rng.random_range(-1.0..1.0)).unwrap();
            }
        });
        let mut tuple: Vec<u32> = (0..n as u32).collect();
        tuple.shuffle(&mut rng);
        tuple.truncate(p);
        let beta = rng.random_range(0.2..2.0);
        let c = third_derivative_bound_check(&w, &Kernel::cut(p, q).unwrap(), beta, &tuple).unwrap();
        if c.fd3.abs() > c.bound {
            over += 1;
        }
        worst = worst.max((c.fd3 - c.analytic).abs() / c.analytic.abs());
    }
    outcome(over == 0 && worst <= 1e-4, format!("100 cells, bound violations {over}, worst relative error {worst:.2e}"))
}

// ---------------------------------------------------------------- matching

fn matching() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (m_red, n_blue, p, classes) in [(4usize, 2usize, 2usize, 3usize), (6, 3, 3, 10)] {
        let mut seen: HashMap<Vec<Vec<usize>>, u64> = HashMap::new();
        for t in 0..30_000u64 {
            let part = two_stage_partition(m_red, n_blue, p, &mut stream(4000 + p as u64, t)).unwrap();
            *seen.entry(part).or_default() += 1;
        }
        let counts: Vec<u64> = seen.values().copied().collect();
        let (stat, pval) = chi_square_uniform(&counts).unwrap();
        pass &= counts.len() == classes && pval > 0.01;
        parts.push(format!("({m_red},{n_blue},{p}): {} classes, chi2 {stat:.2}, p {pval:.3}", counts.len()));
    }
    outcome(pass, parts.join("; "))
}

// ---------------------------------------------------------------- regularity

fn regularity() -> Outcome {
    let grid = [(10usize, 2usize, 3usize), (12, 3, 2), (20, 2, 5), (9, 3, 4), (16, 4, 3)];
    let (mut samples, mut bad) = (0, 0);
    for (gi, &(n, p, d)) in grid.iter().enumerate() {
        for s in 0..200u64 {
            let g = gen_configuration_regular(n, p, d, &mut stream(5000 + gi as u64, s)).unwrap();
            samples += 1;
            if g.degrees().iter().any(|&x| x != d) || g.edge_count() != n * d / p {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{samples} samples over {} (n,p,d) cells, {bad} irregular", grid.len()))
}

// ---------------------------------------------------------------- tensor law

fn tensor_law() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [2usize, 3, 4] {
        let expected = 1.0 / (1..p).product::<usize>() as f64;
        let mut xs = Vec::with_capacity(100_000);
        let mut s = 0;
        while xs.len() < 100_000 {
            gen_standard_symmetric_tensor(14, p, &mut stream(6000 + p as u64, s)).unwrap().for_each_entry(|_, v| xs.push(v));
            s += 1;
        }
        xs.truncate(100_000);
        let var = mean_sem(&xs).var;
        let sd = expected * (2.0 / xs.len() as f64).sqrt();
        let z = (var - expected) / sd;
        pass &= z.abs() < 3.0;
        parts.push(format!("p={p}: var {var:.5} vs {expected:.5} (z {z:+.2})"));
    }
    outcome(pass, parts.join("; "))
}

// ---------------------------------------------------------------- interpolation

fn interpolation() -> Outcome {
    let k = Kernel::cut(2, 2).unwrap();
    let ds = [16.0f64, 64.0, 256.0];
    let est: Vec<_> = ds.iter().map(|&d| interpolation_gap(10, 2, d, 1.0, &k, 64, &mut stream(7000, d as u64)).unwrap()).collect();
    let gaps: Vec<f64> = est.iter().map(|e| e.mean_abs_gap_over_beta).collect();
    for (d, e) in ds.iter().zip(&est) {
        info(format!(
            "interpolation d={d}: mean|phi1-phi2|/beta {:.4} +- {:.4}, |mean(phi1-phi2)|/beta {:.4} +- {:.4}",
            e.mean_abs_gap_over_beta, e.mean_abs_gap_sem, e.gap_over_beta, e.gap_sem
        ));
    }
    let x: Vec<f64> = ds.iter().map(|d| d.ln()).collect();
    let y: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let slope = line_fit(&x, &y, None).unwrap().slope;
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    outcome(decreasing && slope <= -0.3, format!("gaps {gaps:.4?}, log-log slope {slope:.3}"))
}

// ---------------------------------------------------------------- concentration

fn concentration() -> Outcome {
    let solver = SolverChoice::Anneal(Schedule::with_budget(1000, 2));
    let scan = concentration_scan(Problem::Qcut { q: 2 }, &[32, 64, 128, 256], 16.0, ErVariant::default(), &solver, 64, &mut stream(8000, 0))
        .unwrap();
    let vars: Vec<f64> = scan.rows.iter().map(|r| r.var * r.n as f64).collect();
    let slope = scan.slope.unwrap_or(f64::NAN);
    let f = scan.f_test.map(|t| format!(", F {:.2} p {:.1e}", t.f, t.p_value)).unwrap_or_default();
    outcome(slope <= -0.5, format!("n*var {vars:.3?}, slope {slope:.3} +- {:.3}{f}", scan.slope_se.unwrap_or(f64::NAN)))
}

// ---------------------------------------------------------------- balanced identity

fn balanced_identity() -> Outcome {
    let mut bad = 0;
    let mut checked = 0;
    for n in (4..=20).step_by(2) {
        let mut complete = PUniformHypergraph::new(n, 2, false).unwrap();
        hyperglass::combinatorics::for_each_subset(n, 2, |t| complete.add_edge(t).unwrap());
        let w = WeightTensor::adjacency(&complete).unwrap();
        let k = Kernel::cut(2, 2).unwrap();
        let mut rng = stream(9000, n as u64);
        for _ in 0..100 {
            let mut spins: Vec<i8> = (0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect();
            spins.shuffle(&mut rng);
            let pairs = spins.iter().flat_map(|a| spins.iter().map(move |b| (a != b) as usize)).sum::<usize>();
            let h = hamiltonian(&w, &k, &SpinConfig::from_pm1(&spins)).unwrap();
            checked += 1;
            if pairs != n * n / 2 || h != (n * n / 2) as f64 {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{checked} balanced configurations, n = 4..20, {bad} violations"))
}

// ---------------------------------------------------------------- XORSAT floor

fn xorsat_floor() -> Outcome {
    let (mut bad, mut total) = (0, 0);
    for s in 0..1000u64 {
        let mut rng = stream(10_000, s);
        let p = if s % 2 == 0 { 3 } else { 2 };
        let n = rng.random_range(p + 2..=12);
        let inst = gen_xorsat(n, p, rng.random_range(1.0..12.0), &mut rng).unwrap();
        let r = exact_max(&inst.weights().unwrap(), &Kernel::xor(p).unwrap(), &ConstraintSet::All).unwrap();
        total += 1;
        if 2 * inst.satisfied(&r.config).unwrap() < inst.m() {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{total} instances, {bad} below m/2"))
}

// ---------------------------------------------------------------- sqrt(d) coefficient

fn ground_state(p: usize, schedule: Schedule, replicas: usize, seed: u64) -> (f64, f64) {
    let points: Vec<GroundStateEstimate> = [64usize, 128, 256]
        .iter()
        .map(|&n| pspin_ground_state(n, p, &SolverChoice::Anneal(schedule), replicas, &mut stream(seed, n as u64)).unwrap())
        .collect();
    for e in &points {
        info(format!("p-spin p={p} n={}: {:.4} +- {:.4}", e.n, e.mean, e.sem));
    }
    let ex = extrapolate(&points).unwrap();
    (ex.limit, ex.limit_sem)
}

fn coefficient_rows(problem: Problem, schedule: Schedule, replicas: usize, seed: u64) -> Vec<hyperglass::experiments::CoefficientRow> {
    sqrt_d_coefficient(problem, 200, &[32.0, 64.0], ErVariant::default(), &SolverChoice::Anneal(schedule), replicas, &mut stream(seed, 0))
        .unwrap()
}

fn cross_consistency() -> Outcome {
    // Max-Cut against SK. Our p-spin sums over ordered pairs, so its density is
    // sqrt(2) times the usual SK ground-state energy.
    let (sk_raw, sk_raw_sem) = ground_state(2, Schedule::with_budget(1000, 2), 16, 11_000);
    let (sk, sk_sem) = (sk_raw / 2f64.sqrt(), sk_raw_sem / 2f64.sqrt());
    let cut = coefficient_rows(Problem::Qcut { q: 2 }, Schedule::with_budget(1000, 2), 16, 11_001);

    let p3_schedule = Schedule { beta_start: 0.3, ..Schedule::with_budget(2000, 2) };
    let (p3, p3_sem) = ground_state(3, p3_schedule, 8, 11_002);
    let xor = coefficient_rows(Problem::Xorsat { p: 3 }, Schedule::with_budget(4000, 4), 8, 11_003);

    let mut pass = true;
    let mut parts = vec![format!("SK {sk:.4} +- {sk_sem:.4}, p=3 {p3:.4} +- {p3_sem:.4}")];
    for (label, rows, reference, ref_sem, tol) in [("max-cut", &cut, sk, sk_sem, 0.15), ("xorsat", &xor, p3, p3_sem, 0.20)] {
        for r in rows.iter() {
            let rel = (r.coefficient - reference).abs() / reference;
            pass &= rel <= tol;
            parts.push(format!("{label} d={}: {:.4} +- {:.4} (rel {rel:.3})", r.d, r.coefficient, r.sem));
            let z = (r.coefficient - reference).abs() / (r.sem.powi(2) + ref_sem.powi(2)).sqrt();
            info(format!("{label} d={} vs reference: {z:.2} combined SEMs (two-SEM diagnostic {})", r.d, if z <= 2.0 { "met" } else { "not met" }));
        }
        let (a, b) = (rows[0].coefficient, rows[1].coefficient);
        info(format!("{label} coefficient change across d = 32, 64: {:.1}%", 100.0 * (b - a).abs() / a.abs()));
    }
    outcome(pass, parts.join("; "))
}

// ---------------------------------------------------------------- ER vs regular

fn er_regular() -> Outcome {
    let k = Kernel::cut(2, 2).unwrap();
    let solver = SolverChoice::Anneal(Schedule::with_budget(1000, 2));
    let est: Vec<_> = [4usize, 16, 64]
        .iter()
        .map(|&d| er_vs_regular(&k, &ConstraintSet::All, 64, d, ErVariant::default(), &solver, 32, &mut stream(12_000, d as u64)).unwrap())
        .collect();
    let sqrt_d = |d: usize| (d as f64).sqrt();
    let mut parts = Vec::new();
    for e in &est {
        info(format!(
            "er-vs-regular d={}: raw diff/sqrt(d) {:+.4} +- {:.4}, controlled {:+.4} +- {:.4}, exploratory {}",
            e.d,
            e.diff_over_sqrt_d,
            e.diff_over_sqrt_d_sem,
            e.diff_cv / sqrt_d(e.d),
            e.diff_cv_sem / sqrt_d(e.d),
            e.exploratory
        ));
        parts.push(format!("d={}: {:.4} +- {:.4}", e.d, e.diff_cv.abs() / sqrt_d(e.d), e.diff_cv_sem / sqrt_d(e.d)));
    }
    let (lo, hi) = (&est[0], &est[2]);
    let (a, sa) = (lo.diff_cv.abs() / sqrt_d(lo.d), lo.diff_cv_sem / sqrt_d(lo.d));
    let (b, sb) = (hi.diff_cv.abs() / sqrt_d(hi.d), hi.diff_cv_sem / sqrt_d(hi.d));
    let pass = b - a <= 2.0 * (sa * sa + sb * sb).sqrt() && est.iter().all(|e| !e.exploratory);
    outcome(pass, format!("|V_er - V_reg|/sqrt(d): {}", parts.join(", ")))
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("exactness", exactness),
        ("finite-temperature sandwich", sandwich),
        ("third-derivative bound", third_derivative),
        ("matching uniformity", matching),
        ("regularity", regularity),
        ("tensor law", tensor_law),
        ("interpolation-gap shape", interpolation),
        ("concentration", concentration),
        ("balanced identity", balanced_identity),
        ("xorsat floor", xorsat_floor),
        ("sqrt(d) cross-consistency", cross_consistency),
        ("er vs regular", er_regular),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        println!("{} {name}: {} [{secs:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
