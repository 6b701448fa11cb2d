use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{neighbors, LatticePoint};
use crate::error::{invalid, Error, Result};

/// Allowed deviation of the probability sum from one in floating mode.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// A finitely supported law on `Z^d`.
///
/// Probabilities are kept as exact rationals when the distribution was built
/// from rationals; decimal input switches the distribution to floating mode.
#[derive(Clone, Debug)]
pub struct StepDistribution {
    d: usize,
    atoms: Vec<LatticePoint>,
    probs: Vec<f64>,
    exact: Option<Vec<BigRational>>,
    flat: Vec<i64>,
    uniform: bool,
}

impl StepDistribution {
    /// Simple random walk: each of the `2d` unit vectors with probability `1/(2d)`.
    pub fn simple(d: usize) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        let atoms = neighbors(&LatticePoint::origin(d));
        let p = BigRational::new(BigInt::one(), BigInt::from(2 * d));
        Self::exact(atoms.into_iter().map(|a| (a, p.clone())).collect())
            .expect("simple walk is well formed")
    }

    /// Uniform law over the given distinct atoms, in exact mode.
    pub fn uniform(atoms: Vec<LatticePoint>) -> Result<Self> {
        let k = atoms.len();
        if k == 0 {
            return invalid("distribution has no atoms");
        }
        let p = BigRational::new(BigInt::one(), BigInt::from(k));
        Self::exact(atoms.into_iter().map(|a| (a, p.clone())).collect())
    }

    pub fn exact(atoms: Vec<(LatticePoint, BigRational)>) -> Result<Self> {
        let (points, weights): (Vec<_>, Vec<_>) = atoms.into_iter().unzip();
        check_points(&points)?;
        let mut sum = BigRational::zero();
        for w in &weights {
            if !w.is_positive() {
                return invalid(format!("probability {w} is not strictly positive"));
            }
            sum += w;
        }
        if !sum.is_one() {
            return invalid(format!("probabilities sum to {sum}, not 1"));
        }
        let probs = weights.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect();
        let uniform = weights.iter().all(|w| *w == weights[0]);
        Ok(Self::assemble(points, probs, Some(weights), uniform))
    }

    pub fn float(atoms: Vec<(LatticePoint, f64)>) -> Result<Self> {
        let (points, probs): (Vec<_>, Vec<f64>) = atoms.into_iter().unzip();
        check_points(&points)?;
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return invalid(format!("probability {p} is not strictly positive"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return invalid(format!("probabilities sum to {sum}, not 1"));
        }
        let uniform = probs.iter().all(|p| (p - probs[0]).abs() <= FLOAT_SUM_TOLERANCE);
        Ok(Self::assemble(points, probs, None, uniform))
    }

    fn assemble(
        atoms: Vec<LatticePoint>,
        probs: Vec<f64>,
        exact: Option<Vec<BigRational>>,
        uniform: bool,
    ) -> Self {
        let d = atoms[0].dim();
        let flat = atoms.iter().flat_map(|a| a.coords().iter().copied()).collect();
        StepDistribution {
            d,
            atoms,
            probs,
            exact,
            flat,
            uniform,
        }
    }

    /// Built-in presets. Currently `simple d=<k>`.
    pub fn preset(name: &str) -> Result<Self> {
        let mut words = name.split_whitespace();
        match words.next() {
            Some("simple") => {
                let arg = words
                    .next()
                    .ok_or_else(|| Error::InvalidInput("preset `simple` needs d=<k>".into()))?;
                let k = arg.strip_prefix("d=").unwrap_or(arg);
                let d: usize = k
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad dimension `{k}`")))?;
                if d == 0 || words.next().is_some() {
                    return invalid(format!("bad preset `{name}`"));
                }
                Ok(Self::simple(d))
            }
            _ => invalid(format!("unknown preset `{name}`")),
        }
    }

    /// Parses the plain-text format: one atom per line as
    /// `dx dy ... p` where `p` is `num/den` or a decimal, or a single preset
    /// line such as `simple d=2`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut exact_atoms = Vec::new();
        let mut float_atoms = Vec::new();
        let mut all_exact = true;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with("simple") {
                if !exact_atoms.is_empty() {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "preset mixed with explicit atoms".into(),
                    });
                }
                return Self::preset(line);
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "expected coordinates followed by a probability".into(),
                });
            }
            let (coord_toks, prob_tok) = toks.split_at(toks.len() - 1);
            let coords = coord_toks
                .iter()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad coordinate `{t}`"),
                    })
                })
                .collect::<Result<Vec<i64>>>()?;
            let point = LatticePoint::new(coords);
            let prob_tok = prob_tok[0];
            let parse_err = || Error::Parse {
                line: lineno + 1,
                msg: format!("bad probability `{prob_tok}`"),
            };
            if prob_tok.contains('/') {
                let r = BigRational::from_str(prob_tok).map_err(|_| parse_err())?;
                float_atoms.push((point.clone(), r.to_f64().ok_or_else(parse_err)?));
                exact_atoms.push((point, r));
            } else {
                all_exact = false;
                let f: f64 = prob_tok.parse().map_err(|_| parse_err())?;
                float_atoms.push((point, f));
            }
        }
        if float_atoms.is_empty() {
            return invalid("distribution has no atoms");
        }
        if all_exact {
            Self::exact(exact_atoms)
        } else {
            Self::float(float_atoms)
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[LatticePoint] {
        &self.atoms
    }

    /// Coordinates of atom `i` as a slice of length `d`.
    #[inline]
    pub fn atom(&self, i: usize) -> &[i64] {
        &self.flat[i * self.d..(i + 1) * self.d]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Exact probabilities, if the distribution is in rational mode.
    pub fn exact_probs(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// All atoms carry the same probability.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Every atom is a unit vector, so coordinates after `n` steps are bounded by `n`.
    pub fn is_unit_step(&self) -> bool {
        self.atoms.iter().all(|a| a.l1_norm() == 1)
    }

    /// Largest absolute coordinate over all atoms.
    pub fn max_coordinate(&self) -> i64 {
        self.atoms.iter().map(LatticePoint::max_abs).max().unwrap_or(0)
    }

    /// The law of `-X`: same probabilities, negated atoms.
    pub fn negated(&self) -> Self {
        let atoms: Vec<LatticePoint> = self.atoms.iter().map(|a| -a).collect();
        Self::assemble(atoms, self.probs.clone(), self.exact.clone(), self.uniform)
    }

    /// Renders the distribution in the config-file format.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.atoms.iter().enumerate() {
            for c in a.coords() {
                out.push_str(&c.to_string());
                out.push(' ');
            }
            match &self.exact {
                Some(w) => out.push_str(&w[i].to_string()),
                None => out.push_str(&self.probs[i].to_string()),
            }
            out.push('\n');
        }
        out
    }
}

fn check_points(points: &[LatticePoint]) -> Result<()> {
    let Some(first) = points.first() else {
        return invalid("distribution has no atoms");
    };
    let d = first.dim();
    if d == 0 {
        return invalid("dimension must be at least 1");
    }
    let mut seen = BTreeSet::new();
    for p in points {
        if p.dim() != d {
            return invalid(format!("atom {p} has dimension {}, expected {d}", p.dim()));
        }
        if !seen.insert(p.clone()) {
            return invalid(format!("duplicate atom {p}"));
        }
    }
    Ok(())
}
