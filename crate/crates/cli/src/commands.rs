use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use rangewalk::estimators::{
    self as est, rate_json, CsvRow, EngineConfig, RateCurve,
};
use rangewalk::lattice::{validate_support, StepDistribution};
use rangewalk::oracle::{self, AvoidFrom, Event, Statistic};
use rangewalk::{Error, Result};

use crate::args::{Command, DistArgs, EstimateKind, EventKind, IdentityKind, StatKind};

/// What a subcommand produced.
pub struct Outcome {
    pub csv: String,
    pub summary: Value,
    /// Set when an identity or inequality check failed.
    pub failure: Option<String>,
}

impl Outcome {
    fn rows(rows: &[CsvRow], summary: Value) -> Self {
        Outcome {
            csv: rows_csv(rows),
            summary,
            failure: None,
        }
    }
}

fn rows_csv(rows: &[CsvRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory CSV");
    }
    if rows.is_empty() {
        w.write_record(["name", "d", "n_or_k", "reps", "mean", "stderr", "ci_lo", "ci_hi", "extra"])
            .expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8")
}

pub fn load_dist(args: &DistArgs) -> Result<StepDistribution> {
    if let Some(path) = &args.dist_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        return StepDistribution::parse(&text);
    }
    if args.preset.contains("d=") {
        StepDistribution::preset(&args.preset)
    } else {
        StepDistribution::preset(&format!("{} d={}", args.preset, args.d))
    }
}

fn statistic(kind: StatKind, p: usize) -> Statistic {
    match kind {
        StatKind::L => Statistic::Boundary,
        StatKind::R => Statistic::Range,
        StatKind::Q => Statistic::Q(p),
        StatKind::JExact => Statistic::JExact(p),
        StatKind::JAtleast => Statistic::JAtLeast(p),
    }
}

fn ratio_json(r: &BigRational) -> Value {
    json!({ "numerator": r.numer().to_string(), "denominator": r.denom().to_string(), "value": r.to_f64() })
}

pub fn execute(cmd: &Command, cfg: &EngineConfig) -> Result<Outcome> {
    match cmd {
        Command::Simulate { dist, n, reps, p_max } => {
            let law = load_dist(dist)?;
            let s = est::simulate_ln_over_n(&law, *n, *reps, *p_max, cfg)?;
            let rows: Vec<CsvRow> = s
                .channels
                .iter()
                .map(|(name, st)| CsvRow::from_summary(name.as_str(), law.dim(), *n, st, json!({})))
                .collect();
            Ok(Outcome::rows(&rows, est::channel_json(&s)))
        }
        Command::Enumerate { dist, n, stat, p, budget } => {
            let law = load_dist(dist)?;
            let pmf = oracle::exact_distribution(&law, *n, &statistic(*stat, *p), *budget)?;
            Ok(Outcome {
                csv: pmf.to_csv(),
                summary: pmf.summary_json(),
                failure: None,
            })
        }
        Command::Identity { which } => identity(which),
        Command::Estimate { which } => estimate(which, cfg),
        Command::LdCurve { dist, n, x, reps, exact, budget } => {
            let law = load_dist(dist)?;
            let mc = est::ld_curve(&law, *n, x, *reps, cfg)?;
            let mut rows = rate_rows("psi_mc", law.dim(), &mc);
            let mut summary = json!({ "monotone": mc.is_monotone() });
            if *exact {
                let pmf = oracle::exact_distribution(&law, *n as usize, &Statistic::Boundary, *budget)?;
                let ex = RateCurve::from_exact(&pmf, x);
                rows.extend(rate_rows("psi_exact", law.dim(), &ex));
                summary["exact_monotone"] = json!(ex.is_monotone());
            }
            Ok(Outcome::rows(&rows, summary))
        }
        Command::Scaling2d { n, reps, p_max, r } => {
            let h = est::harmonic_ctilde(*r, 1e-12, 1_000_000)?;
            let (curves, refs) = est::scaling_2d(n, *reps, *p_max, h.value, cfg)?;
            let mut rows = Vec::new();
            for c in &curves {
                for (name, st) in &c.channels {
                    rows.push(CsvRow::from_summary(name.as_str(), 2, c.n, st, json!({})));
                }
            }
            let mut reference = |name: &str, v: f64| rows.push(CsvRow::exact(name, 2, 0, v, json!({ "reference": true })));
            reference("pi^2/2", refs.half_pi_sq);
            reference("pi^2", refs.pi_sq);
            reference("2pi^2", refs.two_pi_sq);
            reference("ctilde_harmonic", refs.ctilde);
            for (i, (&(a, b), &(c, d))) in refs.j_exact_band.iter().zip(&refs.j_atleast_band).enumerate() {
                let p = i + 1;
                reference(&format!("J_exact({p})_band_lo"), a);
                reference(&format!("J_exact({p})_band_hi"), b);
                reference(&format!("J_atleast({p})_band_lo"), c);
                reference(&format!("J_atleast({p})_band_hi"), d);
            }
            Ok(Outcome::rows(&rows, json!({ "references": refs, "harmonic": h })))
        }
        Command::ValidateSupport { dist } => {
            let law = load_dist(dist)?;
            let ok = validate_support(&law)?;
            let row = CsvRow::exact("validate_support", law.dim(), law.len() as u64, f64::from(u8::from(ok)), json!({ "generates": ok }));
            Ok(Outcome::rows(&[row], json!({ "generates": ok })))
        }
    }
}

fn rate_rows(name: &str, d: usize, c: &RateCurve) -> Vec<CsvRow> {
    c.points
        .iter()
        .map(|pt| {
            let reps = c.reps.unwrap_or(0);
            let stderr = match c.reps {
                Some(r) if pt.tail > 0.0 => (pt.tail * (1.0 - pt.tail) / r as f64).sqrt() / (c.n as f64 * pt.tail),
                Some(_) => f64::INFINITY,
                None => 0.0,
            };
            CsvRow {
                name: name.into(),
                d,
                n_or_k: c.n,
                reps,
                mean: pt.psi,
                stderr,
                ci_lo: pt.psi_lo,
                ci_hi: pt.psi_hi,
                extra: json!({
                    "x": pt.x,
                    "threshold": pt.threshold,
                    "count": pt.count,
                    "tail": pt.tail,
                    "psi": rate_json(pt.psi),
                })
                .to_string(),
            }
        })
        .collect()
}

fn identity(which: &IdentityKind) -> Result<Outcome> {
    let b = rangewalk::lattice::LatticePoint::new(vec![1, 0]);
    match which {
        IdentityKind::LastExit { n, float, budget } => {
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            if *float {
                for (m, r) in oracle::last_exit_residuals(&b, *n, *budget)?.into_iter().enumerate() {
                    if r.abs() >= 1e-12 {
                        bad.push(m);
                    }
                    rows.push(CsvRow::exact("last_exit_residual", 2, m as u64, r, json!({ "mode": "double" })));
                }
            } else {
                for (m, r) in oracle::last_exit_residuals_exact(&b, *n, *budget)?.into_iter().enumerate() {
                    if !r.is_zero() {
                        bad.push(m);
                    }
                    let v = r.to_f64().unwrap_or(f64::NAN);
                    rows.push(CsvRow::exact("last_exit_residual", 2, m as u64, v, json!({ "mode": "exact", "residual": ratio_json(&r) })));
                }
            }
            let failure = (!bad.is_empty()).then(|| format!("nonzero residual at n in {bad:?}"));
            Ok(Outcome {
                csv: rows_csv(&rows),
                summary: json!({ "n_max": n, "failures": bad }),
                failure,
            })
        }
        IdentityKind::Note2 { dist, n_max, v_max, budget } => {
            let law = load_dist(dist)?;
            let rep = oracle::note2_check(&law, *n_max, *v_max, *budget)?;
            let mut rows = Vec::new();
            for (tag, list) in [("violation", &rep.violations), ("monotonicity_witness", &rep.monotonicity_witnesses)] {
                for c in list.iter() {
                    rows.push(CsvRow::exact(
                        tag,
                        law.dim(),
                        c.n as u64,
                        c.later.to_f64().unwrap_or(f64::NAN) - c.earlier.to_f64().unwrap_or(f64::NAN),
                        json!({ "v": c.v, "y": c.y, "shifted_y": c.shifted_y, "later": ratio_json(&c.later), "earlier": ratio_json(&c.earlier) }),
                    ));
                }
            }
            let failure = (!rep.violations.is_empty()).then(|| format!("{} violations", rep.violations.len()));
            Ok(Outcome {
                csv: rows_csv(&rows),
                summary: json!({
                    "checked": rep.checked,
                    "violations": rep.violations.len(),
                    "monotonicity_witnesses": rep.monotonicity_witnesses.len(),
                }),
                failure,
            })
        }
        IdentityKind::Event { dist, k, event, budget } => {
            let law = load_dist(dist)?;
            let ev = match event {
                EventKind::A => Event::A,
                EventKind::TwoSided => Event::ATwoSided,
                EventKind::NoReturn => Event::NoReturn,
            };
            let probs = oracle::exact_event_probabilities(&law, ev, *k, *budget)?;
            let rows: Vec<CsvRow> = probs
                .iter()
                .enumerate()
                .map(|(i, p)| CsvRow::exact(format!("{ev:?}"), law.dim(), i as u64, p.to_f64().unwrap_or(f64::NAN), ratio_json(p)))
                .collect();
            let monotone = probs.windows(2).all(|w| w[1] <= w[0]);
            Ok(Outcome {
                csv: rows_csv(&rows),
                summary: json!({ "monotone": monotone }),
                failure: (!monotone).then(|| "event probabilities increase with k".to_string()),
            })
        }
        IdentityKind::Avoidance { n, budget } => {
            if *n > *budget {
                return Err(Error::Budget { what: "lattice DP steps".into(), required: *n as u128, budget: *budget as u128 });
            }
            let from0 = oracle::avoidance_series::<BigUint>(AvoidFrom::Origin, (1, 0), *n);
            let fromb = oracle::avoidance_series::<BigUint>(AvoidFrom::Neighbor, (1, 0), *n);
            let mismatches: Vec<usize> = (0..=*n).filter(|&m| from0[m] != fromb[m]).collect();
            let f = oracle::avoidance_series::<f64>(AvoidFrom::Origin, (1, 0), *n);
            let rows: Vec<CsvRow> = (0..=*n)
                .map(|m| CsvRow::exact("avoidance", 2, m as u64, f[m], json!({ "equal_from_b": from0[m] == fromb[m], "count": from0[m].to_string() })))
                .collect();
            Ok(Outcome {
                csv: rows_csv(&rows),
                summary: json!({ "mismatches": mismatches }),
                failure: (!mismatches.is_empty()).then(|| format!("asymmetric at {mismatches:?}")),
            })
        }
    }
}

fn estimate(which: &EstimateKind, cfg: &EngineConfig) -> Result<Outcome> {
    match which {
        EstimateKind::Q { dist, k, reps, companion_n, companion_reps } => {
            let law = load_dist(dist)?;
            let companion = companion_n.map(|n| (n, *companion_reps));
            let br = est::estimate_q(&law, k, *reps, companion, cfg)?;
            let rows: Vec<CsvRow> = br.iter().flat_map(|b| CsvRow::from_bracket(b, law.dim())).collect();
            Ok(Outcome::rows(&rows, json!({ "brackets": br })))
        }
        EstimateKind::V { dist, k, reps } => {
            let law = load_dist(dist)?;
            let br = est::estimate_v(&law, k, *reps, cfg)?;
            let rows: Vec<CsvRow> = br.iter().flat_map(|b| CsvRow::from_bracket(b, law.dim())).collect();
            Ok(Outcome::rows(&rows, json!({ "brackets": br })))
        }
        EstimateKind::Ctilde { m, reps, r } => {
            let br = est::estimate_ctilde(*m, *reps, cfg)?;
            let mut rows = CsvRow::from_bracket(&br, 2);
            let mut harmonic = Vec::new();
            for &radius in r {
                let h = est::harmonic_ctilde(radius, 1e-12, 1_000_000)?;
                rows.push(CsvRow::exact("ctilde_harmonic", 2, radius as u64, h.value, json!({ "sweeps": h.sweeps, "last_change": h.last_change })));
                harmonic.push(h);
            }
            Ok(Outcome::rows(&rows, json!({ "bracket": br, "harmonic": harmonic })))
        }
        EstimateKind::Gamma { n, reps } => {
            let res = est::estimate_gamma(n, *reps, cfg)?;
            let rows: Vec<CsvRow> = res.iter().map(|(n, s, meta)| CsvRow::from_summary("avoidance", 2, *n, s, meta.clone())).collect();
            Ok(Outcome::rows(&rows, json!({ "points": res.len() })))
        }
        EstimateKind::Theorem2 { dist, p, k, reps } => {
            let law = load_dist(dist)?;
            let t = est::estimate_theorem2_limit(&law, *p, *k, *reps, cfg)?;
            let mut rows = CsvRow::from_bracket(&t.exact, law.dim());
            rows.extend(CsvRow::from_bracket(&t.at_least, law.dim()));
            Ok(Outcome::rows(&rows, json!({ "exact": t.exact, "at_least": t.at_least })))
        }
    }
}
