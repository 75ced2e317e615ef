//! Index (aggregation operator) catalog and monotonicity classification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::utility_model::{check_dims, pareto_below, UtilityPoint};

/// A scalar score of a utility vector.
///
/// `Arithmetic` and `Geometric` are the plain sum and product; mean
/// normalization only happens in `QuasiArithmetic`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSpec {
    Arithmetic,
    Min,
    Max,
    Geometric,
    Harmonic,
    #[serde(rename = "quasi")]
    QuasiArithmetic {
        #[serde(with = "extended_real")]
        delta: f64,
    },
    Jain,
    Owa {
        weights: Vec<f64>,
    },
}

/// JSON has no infinities; accept `"inf"`, `"+inf"` and `"-inf"` as strings.
mod extended_real {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() {
            s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!(
                    "field `delta`: expected a number or \"inf\"/\"-inf\", got {other:?}"
                ))),
            },
        }
    }
}

impl IndexSpec {
    pub fn label(&self) -> String {
        match self {
            IndexSpec::Arithmetic => "arithmetic".into(),
            IndexSpec::Min => "min".into(),
            IndexSpec::Max => "max".into(),
            IndexSpec::Geometric => "geometric".into(),
            IndexSpec::Harmonic => "harmonic".into(),
            IndexSpec::QuasiArithmetic { delta } => format!("quasi({delta})"),
            IndexSpec::Jain => "jain".into(),
            IndexSpec::Owa { weights } => format!("owa({weights:?})"),
        }
    }

    /// Parses a short name (`sum`, `jain`, ...) or a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let spec: IndexSpec = serde_json::from_str(t)
                .map_err(|e| Error::param("index", e.to_string()))?;
            spec.validate()?;
            return Ok(spec);
        }
        Ok(match t {
            "arithmetic" | "sum" => IndexSpec::Arithmetic,
            "min" => IndexSpec::Min,
            "max" => IndexSpec::Max,
            "geometric" | "product" | "nbs" => IndexSpec::Geometric,
            "harmonic" => IndexSpec::Harmonic,
            "jain" => IndexSpec::Jain,
            other => return Err(Error::param("index", format!("unknown index {other:?}"))),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IndexSpec::QuasiArithmetic { delta } if delta.is_nan() => {
                Err(Error::param("delta", "must not be NaN"))
            }
            IndexSpec::Owa { weights } => {
                if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::param("weights", "must be finite and nonnegative"));
                }
                if weights.iter().all(|&w| w == 0.0) {
                    return Err(Error::param("weights", "must not all be zero"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Evaluates `f` at `u`.
///
/// Jain of the all-zero point is taken as `1/n`, its lower bound.
pub fn eval_index(f: &IndexSpec, u: &UtilityPoint) -> Result<f64> {
    f.validate()?;
    let x = u.coords();
    let n = x.len() as f64;
    let v = match f {
        IndexSpec::Arithmetic => x.iter().sum(),
        IndexSpec::Min => x.iter().copied().fold(f64::INFINITY, f64::min),
        IndexSpec::Max => x.iter().copied().fold(0.0, f64::max),
        IndexSpec::Geometric => x.iter().product(),
        IndexSpec::Harmonic => {
            require_positive(u, "the harmonic index")?;
            1.0 / x.iter().map(|c| 1.0 / c).sum::<f64>()
        }
        IndexSpec::QuasiArithmetic { delta } => quasi_arithmetic(*delta, u)?,
        IndexSpec::Jain => {
            let s: f64 = x.iter().sum();
            let sq: f64 = x.iter().map(|c| c * c).sum();
            if sq == 0.0 {
                1.0 / n
            } else {
                s * s / (n * sq)
            }
        }
        IndexSpec::Owa { weights } => {
            check_dims(weights.len(), x.len())?;
            let mut sorted = x.to_vec();
            sorted.sort_by(f64::total_cmp);
            weights.iter().zip(&sorted).map(|(w, c)| w * c).sum()
        }
    };
    Ok(v)
}

/// True when `eval_index(Jain, u)` fell back to the `1/n` convention.
pub fn is_degenerate_jain(u: &UtilityPoint) -> bool {
    u.coords().iter().all(|&c| c == 0.0)
}

fn require_positive(u: &UtilityPoint, what: &str) -> Result<()> {
    if u.is_strictly_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} needs strictly positive coordinates, got {u:?}"
        )))
    }
}

fn quasi_arithmetic(delta: f64, u: &UtilityPoint) -> Result<f64> {
    let x = u.coords();
    let n = x.len() as f64;
    if delta == f64::NEG_INFINITY {
        return eval_index(&IndexSpec::Min, u);
    }
    if delta == f64::INFINITY {
        return eval_index(&IndexSpec::Max, u);
    }
    if delta == 0.0 {
        return Ok(x.iter().product::<f64>().powf(1.0 / n));
    }
    if delta < 0.0 {
        require_positive(u, "a quasi-arithmetic mean with negative exponent")?;
    }
    if x.contains(&0.0) {
        let mean = x.iter().map(|c| c.powf(delta)).sum::<f64>() / n;
        return Ok(mean.powf(1.0 / delta));
    }
    // expm1/ln_1p keep small |delta| accurate near the geometric limit
    let m = x.iter().map(|c| (delta * c.ln()).exp_m1()).sum::<f64>() / n;
    Ok((m.ln_1p() / delta).exp())
}

/// Fair point `u_f = Σu_i² / Σu_i` of the Jain interpretation.
pub fn jain_fair_point(u: &UtilityPoint) -> Result<f64> {
    let s: f64 = u.coords().iter().sum();
    if s <= 0.0 {
        return Err(Error::Domain("the fair point of the all-zero vector is undefined".into()));
    }
    Ok(u.coords().iter().map(|c| c * c).sum::<f64>() / s)
}

/// Jain index of `z_i = u_i / v_i`, fairness relative to the reference `v`.
pub fn jain_relative(u: &UtilityPoint, v: &UtilityPoint) -> Result<f64> {
    check_dims(u.dim(), v.dim())?;
    require_positive(v, "the reference point of relative Jain")?;
    let z = u
        .coords()
        .iter()
        .zip(v.coords())
        .map(|(a, b)| a / b)
        .collect();
    eval_index(&IndexSpec::Jain, &UtilityPoint::new(z)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StrictlyMonotone,
    MonotoneNotStrict,
    NonMonotone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub verdict: Verdict,
    /// `(u, v)` with `u ≺ v` violating the stronger property.
    pub witness: Option<(UtilityPoint, UtilityPoint)>,
}

/// Verdicts the randomized search is expected to reach for the catalog.
pub fn expected_verdict(f: &IndexSpec) -> Verdict {
    match f {
        IndexSpec::Arithmetic | IndexSpec::Geometric | IndexSpec::Harmonic => {
            Verdict::StrictlyMonotone
        }
        IndexSpec::Min | IndexSpec::Max => Verdict::MonotoneNotStrict,
        IndexSpec::QuasiArithmetic { delta } if delta.is_infinite() => Verdict::MonotoneNotStrict,
        IndexSpec::QuasiArithmetic { .. } => Verdict::StrictlyMonotone,
        IndexSpec::Jain => Verdict::NonMonotone,
        IndexSpec::Owa { weights } if weights.iter().all(|&w| w > 0.0) => {
            Verdict::StrictlyMonotone
        }
        IndexSpec::Owa { .. } => Verdict::MonotoneNotStrict,
    }
}

/// Randomized search for pairs `u ≺ v` on which `f` fails to increase.
///
/// `u` is drawn uniformly from `(0, 10]^n`; `v` raises a random nonempty
/// subset of its coordinates. Returns the weakest property any trial
/// exhibited, with its witness. Deterministic for a given seed.
pub fn classify_monotonicity(
    f: &IndexSpec,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityVerdict> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    f.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = None;
    for _ in 0..trials {
        let u: Vec<f64> = (0..n).map(|_| 10.0 - rng.gen_range(0.0..10.0)).collect();
        let mut v = u.clone();
        let forced = rng.gen_range(0..n);
        for (k, c) in v.iter_mut().enumerate() {
            if k == forced || rng.gen_bool(0.5) {
                let scale = if rng.gen_bool(0.5) { 0.1 } else { 5.0 };
                *c += scale * (1.0 - rng.gen_range(0.0..1.0));
            }
        }
        if !pareto_below(&u, &v) {
            continue;
        }
        let (u, v) = (UtilityPoint::new(u)?, UtilityPoint::new(v)?);
        let (fu, fv) = (eval_index(f, &u)?, eval_index(f, &v)?);
        if fu > fv {
            return Ok(MonotonicityVerdict {
                verdict: Verdict::NonMonotone,
                witness: Some((u, v)),
            });
        }
        if fu == fv && flat.is_none() {
            flat = Some((u, v));
        }
    }
    Ok(match flat {
        Some(w) => MonotonicityVerdict {
            verdict: Verdict::MonotoneNotStrict,
            witness: Some(w),
        },
        None => MonotonicityVerdict {
            verdict: Verdict::StrictlyMonotone,
            witness: None,
        },
    })
}
