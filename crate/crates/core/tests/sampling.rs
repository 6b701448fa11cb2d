use rangewalk::estimators::{self as est, EngineConfig};
use rangewalk::lattice::{SeedSpec, StepDistribution, StepSampler};

fn atom_counts(dist: &StepDistribution, draws: u64, seed: SeedSpec) -> Vec<u64> {
    let mut stream = seed.steps(0, &StepSampler::for_distribution(dist));
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..draws {
        counts[stream.next_atom()] += 1;
    }
    counts
}

fn within_four_sd(counts: &[u64], probs: &[f64], draws: u64) {
    for (&c, &p) in counts.iter().zip(probs) {
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((c as f64 - mean).abs() <= 4.0 * sd, "count {c}, expected {mean} +- {sd}");
    }
}

#[test]
fn simple_walk_atom_frequencies() {
    let dist = StepDistribution::simple(2);
    within_four_sd(&atom_counts(&dist, 1_000_000, SeedSpec::new(5, 0)), &[0.25; 4], 1_000_000);
}

#[test]
fn weighted_atom_frequencies() {
    let dist = StepDistribution::parse("1 1/6\n-1 1/3\n2 1/2\n").unwrap();
    within_four_sd(&atom_counts(&dist, 1_000_000, SeedSpec::new(6, 0)), &[1.0 / 6.0, 1.0 / 3.0, 0.5], 1_000_000);
}

#[test]
fn avoidance_estimates_match_the_lattice_dp() {
    let res = est::estimate_gamma(&[1, 10, 200], 40_000, &EngineConfig::new(21, 0)).unwrap();
    for (n, s, meta) in res {
        let exact = meta["oracle"].as_f64().unwrap();
        assert!((s.mean - exact).abs() <= 4.0 * s.stderr().max(1e-9), "n={n}: {} vs {exact}", s.mean);
    }
}

#[test]
fn composite_estimates_are_ordered() {
    let t = est::estimate_theorem2_limit(&StepDistribution::simple(3), 2, 200, 2000, &EngineConfig::new(4, 0)).unwrap();
    for b in [&t.exact, &t.at_least] {
        assert!(b.is_ordered());
        assert!(b.meta["cap_bias"].as_f64().unwrap() >= 0.0);
    }
    assert!(t.exact.upper.unwrap().mean <= t.at_least.upper.unwrap().mean);
}
