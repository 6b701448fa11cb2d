//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use rangewalk::estimators::{
    self as est, combined_stderr, EngineConfig, RateCurve, SummaryStats,
};
use rangewalk::lattice::{generate_walk, LatticePoint, SeedSpec, StepDistribution, WalkPath};
use rangewalk::oracle::{self, AvoidFrom, Event, Statistic, DEFAULT_ENUMERATION_BUDGET};
use rangewalk::tracker::{recompute_from_scratch, RangeState, DEFAULT_P_MAX};

type Verdict = (bool, String);

fn cfg(seed: u64) -> EngineConfig {
    EngineConfig::new(seed, 0)
}

/// Snapshot against recomputation, and invariants, at every node of the
/// planar enumeration tree up to depth 10.
struct EnumerationAudit {
    nodes: u64,
    mismatches: u64,
    invariant_failures: u64,
}

fn audit_enumeration() -> EnumerationAudit {
    let dist = StepDistribution::simple(2);
    let (nodes, mismatches, invariant_failures) = oracle::fold_paths(
        &dist,
        10,
        DEFAULT_ENUMERATION_BUDGET,
        || (0u64, 0u64, 0u64),
        |acc, node| {
            let mut path = WalkPath::from_origin(2);
            for &a in node.atoms {
                path.push(dist.atom(a));
            }
            let snap = node.state.snapshot(DEFAULT_P_MAX);
            acc.0 += 1;
            if snap != recompute_from_scratch(&path, DEFAULT_P_MAX) {
                acc.1 += 1;
            }
            if snap.check_invariants().is_err() {
                acc.2 += 1;
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    )
    .expect("enumeration within budget");
    EnumerationAudit {
        nodes,
        mismatches,
        invariant_failures,
    }
}

/// Random paths, `n <= 64`, `d` in 1..=3, checked at every prefix.
fn audit_random_paths() -> (u64, u64, u64) {
    let mut mismatches = 0;
    let mut invariant_failures = 0;
    let mut prefixes = 0;
    for i in 0..10_000u64 {
        let d = 1 + (i % 3) as usize;
        let n = (i * 7919 % 65) as usize;
        let path = generate_walk(&StepDistribution::simple(d), n, SeedSpec::new(2024, i));
        let mut state = RangeState::new(d);
        for k in 0..=n {
            if k > 0 {
                state.push_step(path.step(k - 1));
            }
            let snap = state.snapshot(DEFAULT_P_MAX);
            prefixes += 1;
            if snap != recompute_from_scratch(&path.prefix(k), DEFAULT_P_MAX) {
                mismatches += 1;
            }
            if snap.check_invariants().is_err() {
                invariant_failures += 1;
            }
        }
    }
    (prefixes, mismatches, invariant_failures)
}

fn c1_c2() -> (Verdict, Verdict) {
    let e = audit_enumeration();
    let (prefixes, mism, inv) = audit_random_paths();
    let c1 = (
        e.mismatches == 0 && mism == 0 && e.nodes == (0..=10).map(|k| 4u64.pow(k)).sum::<u64>(),
        format!(
            "{} enumerated planar prefixes (n <= 10), {} mismatches; {} random prefixes, {} mismatches",
            e.nodes, e.mismatches, prefixes, mism
        ),
    );
    // Sampled paths of the Monte Carlo runs are also checked inside the estimators.
    let sampled = est::simulate_ln_over_n(&StepDistribution::simple(2), 2000, 200, 4, &cfg(3));
    let c2 = (
        e.invariant_failures == 0 && inv == 0 && sampled.is_ok(),
        format!(
            "invariant failures: {} enumerated, {} random; 200 simulated n=2000 paths {}",
            e.invariant_failures,
            inv,
            if sampled.is_ok() { "ok" } else { "FAILED" }
        ),
    );
    (c1, c2)
}

fn c3() -> Verdict {
    let d1 = StepDistribution::simple(1);
    let pmfs = oracle::exact_distributions_by_depth(&d1, 16, &Statistic::Boundary, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let exact_ok = pmfs.iter().skip(1).all(|p| p.weights.len() == 1 && p.count(2) > 0);
    let mut steps_bad = 0u64;
    for r in 0..3 {
        let mut state = RangeState::new(1);
        for inc in rangewalk::lattice::WalkIncrements::new(&d1, 1_000_000, SeedSpec::new(31, r), 0) {
            state.push_step(inc);
            if state.boundary_len() != 2 {
                steps_bad += 1;
            }
        }
    }
    (
        exact_ok && steps_bad == 0,
        format!("enumeration n=1..16 L=2 surely: {exact_ok}; 3 walks of 10^6 steps, prefixes with L != 2: {steps_bad}"),
    )
}

fn c4() -> Verdict {
    let b = LatticePoint::new(vec![1, 0]);
    let exact = oracle::last_exit_residuals_exact(&b, 8, 2000).unwrap();
    let exact_ok = exact.iter().all(|r| r.is_zero());
    let float = oracle::last_exit_residuals(&b, 50, 2000).unwrap();
    let worst = float.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    (
        exact_ok && worst < 1e-12,
        format!("exact residuals n<=8 all zero: {exact_ok}; max |double residual| n<=50 = {worst:.2e}"),
    )
}

fn c5() -> Verdict {
    let mut total = 0;
    let mut detail = Vec::new();
    for d in [1, 2] {
        let r = oracle::note2_check(&StepDistribution::simple(d), 7, 3, DEFAULT_ENUMERATION_BUDGET).unwrap();
        total += r.violations.len();
        detail.push(format!(
            "d={d}: {} triples, {} violations, {} plain-monotonicity witnesses",
            r.checked,
            r.violations.len(),
            r.monotonicity_witnesses.len()
        ));
    }
    (total == 0, detail.join("; "))
}

fn c6() -> Verdict {
    let a = oracle::avoidance_series::<BigUint>(AvoidFrom::Origin, (1, 0), 200);
    let b = oracle::avoidance_series::<BigUint>(AvoidFrom::Neighbor, (1, 0), 200);
    let diff = (0..=200).filter(|&n| a[n] != b[n]).count();
    (diff == 0, format!("n=0..200 exact path counts from 0 and from b: {diff} differences"))
}

fn c7() -> Verdict {
    let n = 1_000_000u64;
    let res = est::estimate_gamma(&[n], 1_000_000, &cfg(7)).unwrap();
    let (_, s, _) = &res[0];
    let ratio = s.mean * (n as f64).ln() / (PI / 2.0);
    (
        (0.75..=1.25).contains(&ratio),
        format!(
            "avoidance at n=10^6 = {:.5} +- {:.5} (10^6 reps); estimate*log n / (pi/2) = {ratio:.4}",
            s.mean,
            s.stderr()
        ),
    )
}

fn c8(d3_companion: &SummaryStats) -> Verdict {
    let d3 = StepDistribution::simple(3);
    let q = est::estimate_q(&d3, &[100, 1000, 10_000], 10_000, None, &cfg(8)).unwrap();
    let ups: Vec<SummaryStats> = q.iter().map(|b| b.upper.unwrap()).collect();
    let decreasing = ups.windows(2).all(|w| w[1].mean < w[0].mean);
    let top = ups[2];
    let slack = 3.0 * combined_stderr(&top, d3_companion);
    let below = d3_companion.mean <= top.mean + slack;
    (
        decreasing && below,
        format!(
            "P(A_k) k=10^2,10^3,10^4: {:.4}, {:.4}, {:.4}; mean L_n/n (n=10^5, 200 reps) = {:.4} <= {:.4} + {:.4}",
            ups[0].mean, ups[1].mean, ups[2].mean, d3_companion.mean, top.mean, slack
        ),
    )
}

fn c9() -> Verdict {
    let d1 = StepDistribution::simple(1);
    let exact = oracle::exact_event_probability(&d1, Event::A, 1, 1000).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    let mc = est::estimate_q(&d1, &[10_000], 10_000, None, &cfg(9)).unwrap()[0].upper.unwrap();
    (
        exact == half && mc.mean < 0.05,
        format!("exact P(A_1) = {exact}; d=1 estimate at k=10^4 = {:.4} +- {:.4}", mc.mean, mc.stderr()),
    )
}

fn c10() -> (Verdict, f64) {
    let h: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&r| est::harmonic_ctilde(r, 1e-12, 1_000_000).unwrap().value)
        .collect();
    let spread = h.iter().cloned().fold(f64::MIN, f64::max) - h.iter().cloned().fold(f64::MAX, f64::min);
    let br = est::estimate_ctilde(1_000_000, 100_000, &cfg(10)).unwrap();
    let (lo, up) = (br.lower.unwrap().mean, br.upper.unwrap().mean);
    let contains = h.iter().all(|&v| lo <= v && v <= up);
    (
        (
            spread <= 0.01 && contains,
            format!(
                "harmonic R=128,256,512: {:.6}, {:.6}, {:.6} (spread {spread:.1e}); MC bracket M=10^6: [{lo:.4}, {up:.4}]",
                h[0], h[1], h[2]
            ),
        ),
        h[2],
    )
}

fn c11_c13b(ctilde: f64) -> (Verdict, Verdict) {
    let p_max = 4;
    let (curves, refs) = est::scaling_2d(&[1_000_000], 100, p_max, ctilde, &cfg(11)).unwrap();
    let c = &curves[0];
    let get = |name: &str| c.channel(&format!("{name}*log^2(n)/n")).1;
    let l = get("L");
    let mut ok = (3.45..=25.66).contains(&l.mean) && get("J_atleast(1)").mean == l.mean;
    let mut lines = vec![format!("EL (log n)^2/n = {:.3} +- {:.3}", l.mean, l.stderr())];
    let mut prev = f64::INFINITY;
    for p in 1..=p_max {
        let je = get(&format!("J_exact({p})")).mean;
        let ja = get(&format!("J_atleast({p})")).mean;
        let (elo, ehi) = refs.j_exact_band[p - 1];
        let (alo, ahi) = refs.j_atleast_band[p - 1];
        let in_bands = (0.7 * elo..=1.3 * ehi).contains(&je) && (0.7 * alo..=1.3 * ahi).contains(&ja);
        let ordered = je <= ja && ja <= prev;
        ok &= in_bands && ordered;
        lines.push(format!(
            "p={p}: J^(p) {je:.3} in [{:.3},{:.3}], J^p {ja:.3} in [{:.3},{:.3}], ordered {ordered}",
            0.7 * elo,
            1.3 * ehi,
            0.7 * alo,
            1.3 * ahi
        ));
        prev = ja;
    }
    let q1 = get("Q(1)");
    let flatto = q1.mean / refs.pi_sq;
    (
        (ok, lines.join("; ")),
        (
            (0.6..=1.4).contains(&flatto),
            format!("d=2 n=10^6: EQ^(1) (log n)^2/n = {:.3}, ratio to pi^2 = {flatto:.3}", q1.mean),
        ),
    )
}

fn c12() -> Verdict {
    let d2 = StepDistribution::simple(2);
    let grid: Vec<f64> = (0..=12).map(|i| i as f64 / 10.0).chain([1.15]).collect();
    let pmf = oracle::exact_distribution(&d2, 10, &Statistic::Boundary, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let exact = RateCurve::from_exact(&pmf, &grid);
    let mc = est::ld_curve(&d2, 10, &grid, 1_000_000, &cfg(12)).unwrap();
    let mut agree = true;
    let mut compared = 0;
    for (e, m) in exact.points.iter().zip(&mc.points) {
        if e.tail > 0.0 {
            compared += 1;
            agree &= m.psi_lo <= e.psi && e.psi <= m.psi_hi;
        }
    }
    let beyond_inf = exact
        .points
        .iter()
        .zip(&mc.points)
        .filter(|(e, _)| e.x > 1.1 + 1e-12)
        .all(|(e, m)| e.psi.is_infinite() && m.psi.is_infinite());
    let straight = pmf.tail(10) >= BigRational::new(4.into(), BigUint::from(4u8).pow(10).into());
    let monotone = exact.is_monotone() && mc.is_monotone();
    (
        agree && beyond_inf && straight && monotone,
        format!(
            "{compared} grid points with nonzero exact tail inside MC intervals: {agree}; monotone: {monotone}; +inf beyond (n+1)/n: {beyond_inf}; P(L_10>=10) = {:.3e} >= 4/4^10: {straight}",
            pmf.tail(10).to_f64().unwrap()
        ),
    )
}

fn c13a(q1: &SummaryStats) -> Verdict {
    let d3 = StepDistribution::simple(3);
    let n = 100_000;
    let curve = est::no_return_curve(&d3, n, 20_000, &cfg(13)).unwrap();
    let v = curve.summary(n);
    let v_sq = v.mean * v.mean;
    let se = q1.stderr().hypot(2.0 * v.mean * v.stderr());
    let matched = est::pitt_finite_horizon(&curve, n);
    (
        (q1.mean - v_sq).abs() <= 3.0 * se,
        format!(
            "d=3 n=10^5: Q^(1)/n = {:.4}, v^2 = {:.4} (v = {:.4}), |diff| = {:.4} <= 3 se = {:.4}; finite-horizon convolution {:.4}",
            q1.mean,
            v_sq,
            v.mean,
            (q1.mean - v_sq).abs(),
            3.0 * se,
            matched
        ),
    )
}

fn c14() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["simulate", "--d", "2", "--preset", "simple", "--n", "1000", "--reps", "10", "--seed", "7"],
        &["estimate", "q", "--d", "3", "--k", "10,100,1000", "--reps", "2000", "--seed", "7"],
        &["estimate", "gamma", "--n", "1,200,5000", "--reps", "3000", "--seed", "7"],
        &["estimate", "theorem2", "--d", "3", "--p", "2", "--k", "300", "--reps", "1000", "--seed", "7"],
        &["estimate", "v", "--d", "2", "--k", "10,1000", "--reps", "1000", "--seed", "7"],
        &["ld-curve", "--d", "2", "--n", "10", "--reps", "5000", "--seed", "7"],
        &["scaling-2d", "--n", "100,1000", "--reps", "20", "--r", "16", "--seed", "7"],
    ];
    let mut identical = 0;
    let mut failures = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let mut files = Vec::new();
        for workers in ["1", "4"] {
            let stamp = format!("run{i}-w{workers}");
            let status = Command::new(env!("CARGO_BIN_EXE_rangewalk"))
                .args(*args)
                .args(["--workers", workers, "--stamp", &stamp, "--out"])
                .arg(dir.path())
                .output()
                .expect("binary runs");
            assert!(status.status.success(), "{args:?}");
            let name = format!("{}-{stamp}.csv", args[0]);
            files.push(std::fs::read(dir.path().join(name)).unwrap());
        }
        if files[0] == files[1] {
            identical += 1;
        } else {
            failures.push(args[0]);
        }
    }
    (
        failures.is_empty(),
        format!("{identical}/{} experiments byte-identical across 1 and 4 workers {failures:?}", runs.len()),
    )
}

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    }
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut record = |id: u32, title: &'static str, v: Verdict| {
        println!(
            "criterion {id:>2} [{}] {title}: {} ({:.0}s)",
            if v.0 { "PASS" } else { "FAIL" },
            v.1,
            start.elapsed().as_secs_f64()
        );
        results.push((id, title, v));
    };

    let (v1, v2) = match catch_unwind(c1_c2) {
        Ok(v) => v,
        Err(_) => ((false, "panicked".into()), (false, "panicked".into())),
    };
    record(1, "snapshot equals recomputation", v1);
    record(2, "combinatorial invariants", v2);
    record(3, "one-dimensional law L_n = 2", guarded(c3));
    record(4, "last-exit identity", guarded(c4));
    record(5, "shifted tail inequality", guarded(c5));
    record(6, "avoidance symmetry", guarded(c6));
    record(7, "avoidance asymptote", guarded(c7));

    let d3_sim = est::simulate_ln_over_n(&StepDistribution::simple(3), 100_000, 200, 1, &cfg(81));
    let (companion, q1) = match &d3_sim {
        Ok(s) => (s.channel("L/n").1, s.channel("Q(1)/n").1),
        Err(_) => (SummaryStats::new(), SummaryStats::new()),
    };
    record(8, "q bracket self-consistency (d=3)", guarded(|| c8(&companion)));
    record(9, "one-dimensional q", guarded(c9));

    let mut ctilde = f64::NAN;
    record(
        10,
        "c~ cross-method",
        guarded(|| {
            let (v, h) = c10();
            ctilde = h;
            v
        }),
    );
    let (v11, v13b) = match catch_unwind(AssertUnwindSafe(|| c11_c13b(if ctilde.is_nan() { 0.5 } else { ctilde }))) {
        Ok(v) => v,
        Err(_) => ((false, "panicked".into()), (false, "panicked".into())),
    };
    record(11, "planar scaling bands", v11);
    record(12, "rate function at desk scale", guarded(c12));
    let v13a = guarded(|| c13a(&q1));
    record(13, "escape-constant cross-checks", (v13a.0 && v13b.0, format!("{}; {}", v13a.1, v13b.1)));
    record(14, "determinism across worker counts", guarded(c14));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2 .0).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.0}s",
        results.len() - failed.len(),
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
