//! Inefficiency measures of a chosen point `β` in a utility set `U`:
//!
//! * the per-index ratio `max_{u∈U} f(u) / f(β)` (price-of-anarchy style),
//! * the selfishness degradation factor `max_{u∈U} min_k u_k / β_k`,
//! * the topological measure `exp(d∞(log β, log front(U)))`,
//!
//! together with the log-space characterizations of the last two and
//! sweeps over the `S_{M,N}` family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexes::{eval_index, IndexSpec};
use crate::pareto::{expand_contains, pareto_filter, Expansion};
use crate::policies::{apply_policy, smn_closed_form, PolicySpec, SmnAllocation};
use crate::utility_model::{
    check_dims, discretize, smn_halfspaces, FiniteUtilitySet, MetricChoice, SmnFamily,
    UtilityPoint, TOLERANCE,
};

fn member<'a>(beta: &UtilityPoint, u: &'a FiniteUtilitySet) -> Result<&'a UtilityPoint> {
    check_dims(u.dim(), beta.dim())?;
    u.find(beta)
        .ok_or_else(|| Error::NotMember(beta.coords().to_vec()))
}

fn require_positive(p: &UtilityPoint, role: &str) -> Result<()> {
    if p.is_strictly_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{role} needs strictly positive coordinates, got {p:?}"
        )))
    }
}

/// `max_{u∈U} f(u) / f(β)` together with the maximizing `u`.
pub fn poa_with_witness(
    f: &IndexSpec,
    beta: &UtilityPoint,
    u: &FiniteUtilitySet,
) -> Result<(f64, UtilityPoint)> {
    let beta = member(beta, u)?;
    let denom = eval_index(f, beta)?;
    if denom <= 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let mut best = (1.0, beta.clone());
    for x in u.iter() {
        // points outside f's domain cannot be the optimum
        if let Ok(v) = eval_index(f, x) {
            if v / denom > best.0 {
                best = (v / denom, x.clone());
            }
        }
    }
    Ok(best)
}

/// Inefficiency of `β` for index `f`; at least 1 because `β ∈ U`.
pub fn poa_instance(f: &IndexSpec, beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<f64> {
    poa_with_witness(f, beta, u).map(|(v, _)| v)
}

/// Same ratio computed as `f(α_f(U)) / f(β)` through the optimizing policy.
pub fn poa_via_optimizer(f: &IndexSpec, beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<f64> {
    let beta = member(beta, u)?;
    let denom = eval_index(f, beta)?;
    if denom <= 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let best = apply_policy(&PolicySpec::index_opt(f.clone()), u)?;
    Ok(eval_index(f, &best)? / denom)
}

/// Σ-inefficiency of the proportionally fair point of `S_{M,N}`: `MN/(M+N−1)`.
pub fn poa_smn_nbs(f: SmnFamily) -> f64 {
    let (m, n) = (f.m(), f.n() as f64);
    m * n / (m + n - 1.0)
}

/// Σ-inefficiency of the max-min fair point of `S_{M,N}`: `(M(N−1)+1)/N`.
pub fn poa_smn_maxmin(f: SmnFamily) -> f64 {
    let (m, n) = (f.m(), f.n() as f64);
    (m * (n - 1.0) + 1.0) / n
}

/// `max_{u∈U} min_k u_k/β_k` and the maximizing `u`.
pub fn sdf_with_witness(beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<(f64, UtilityPoint)> {
    check_dims(u.dim(), beta.dim())?;
    require_positive(beta, "the reference point of the degradation factor")?;
    let rho = |x: &UtilityPoint| {
        x.coords()
            .iter()
            .zip(beta.coords())
            .map(|(a, b)| a / b)
            .fold(f64::INFINITY, f64::min)
    };
    let mut best: Option<(f64, &UtilityPoint)> = None;
    for x in u.iter() {
        let r = rho(x);
        if best.is_none_or(|(b, _)| r > b) {
            best = Some((r, x));
        }
    }
    let (v, x) = best.expect("sets are nonempty");
    Ok((v, x.clone()))
}

/// Selfishness degradation factor; `> 1` exactly when some point is
/// strictly better than `β` for every player.
pub fn sdf_instance(beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<f64> {
    sdf_with_witness(beta, u).map(|(v, _)| v)
}

/// Both sides of `ln SDF ≤ ε ⟺ log U ⊆ (log β + ε) ⊞ lower-area`, evaluated
/// independently. A zero coordinate of a candidate maps to `−∞`, which is
/// always inside the lower area.
pub fn sdf_lemma_check(beta: &UtilityPoint, u: &FiniteUtilitySet, eps: f64) -> Result<(bool, bool)> {
    if !eps.is_finite() {
        return Err(Error::param("eps", "must be finite"));
    }
    let left = sdf_instance(beta, u)?.ln() <= eps + TOLERANCE;
    let shifted: Vec<f64> = beta.coords().iter().map(|b| b.ln() + eps).collect();
    let right = u.iter().all(|x| {
        x.coords()
            .iter()
            .zip(&shifted)
            .any(|(c, a)| c.ln() <= a + TOLERANCE)
    });
    Ok((left, right))
}

fn log_gap(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        f64::INFINITY
    } else {
        (a.ln() - b.ln()).abs()
    }
}

fn topo_inputs(beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<(UtilityPoint, FiniteUtilitySet)> {
    let beta = member(beta, u)?.clone();
    require_positive(&beta, "the topological measure")?;
    Ok((beta, pareto_filter(u).points))
}

/// `exp(min_{p∈front} max_k |ln β_k − ln p_k|)` with the nearest front point.
/// Front points with a zero coordinate are infinitely far in log space.
pub fn topo_with_witness(beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<(f64, UtilityPoint)> {
    let (beta, front) = topo_inputs(beta, u)?;
    let mut best: Option<(f64, &UtilityPoint)> = None;
    for p in front.iter() {
        let d = beta
            .coords()
            .iter()
            .zip(p.coords())
            .map(|(a, b)| log_gap(*a, *b))
            .fold(0.0, f64::max);
        if best.is_none_or(|(b, _)| d < b) {
            best = Some((d, p));
        }
    }
    let (d, p) = best.expect("fronts are nonempty");
    let value = d.exp();
    let ratio = topo_ratio_form(&beta, u)?;
    if (value - ratio).abs() > TOLERANCE * value.max(1.0) {
        return Err(Error::Inconsistent(format!(
            "log-distance form {value} and ratio form {ratio} disagree"
        )));
    }
    Ok((value, p.clone()))
}

/// Topological inefficiency; 1 exactly when `β` is on the front.
pub fn topo_instance(beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<f64> {
    topo_with_witness(beta, u).map(|(v, _)| v)
}

/// `min_{p∈front} max_k max(β_k/p_k, p_k/β_k)`, the ratio form of the
/// topological measure, computed without logarithms.
pub fn topo_ratio_form(beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<f64> {
    let (beta, front) = topo_inputs(beta, u)?;
    Ok(front
        .iter()
        .map(|p| {
            beta.coords()
                .iter()
                .zip(p.coords())
                .map(|(b, q)| if *q == 0.0 { f64::INFINITY } else { (b / q).max(q / b) })
                .fold(1.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min))
}

/// Whether `β ∈ front(U) ⊗ exp(ε)` under the log-space L∞ metric.
pub fn topo_expansion_check(beta: &UtilityPoint, u: &FiniteUtilitySet, eps: f64) -> Result<bool> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::param("eps", "must be a finite nonnegative real"));
    }
    let (beta, front) = topo_inputs(beta, u)?;
    let positive: Vec<UtilityPoint> = front
        .into_points()
        .into_iter()
        .filter(UtilityPoint::is_strictly_positive)
        .collect();
    if positive.is_empty() {
        return Ok(false);
    }
    let expansion = Expansion::multiplicative(
        FiniteUtilitySet::new(positive)?,
        eps.exp(),
        MetricChoice::LInfinity,
    )?;
    expand_contains(&expansion, &beta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub poa: Option<UtilityPoint>,
    pub sdf: UtilityPoint,
    pub topo: UtilityPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InefficiencyReport {
    pub poa: Option<f64>,
    pub sdf: f64,
    pub topo: f64,
    pub witnesses: Witnesses,
    pub beta_point: UtilityPoint,
    pub f_used: Option<IndexSpec>,
}

/// All three measures for `β ∈ U`.
pub fn inefficiency_report(
    beta: &UtilityPoint,
    u: &FiniteUtilitySet,
    f: Option<&IndexSpec>,
) -> Result<InefficiencyReport> {
    let (poa, poa_w) = match f {
        Some(f) => {
            let (v, w) = poa_with_witness(f, beta, u)?;
            (Some(v), Some(w))
        }
        None => (None, None),
    };
    let (sdf, sdf_w) = sdf_with_witness(beta, u)?;
    let (topo, topo_w) = topo_with_witness(beta, u)?;
    Ok(InefficiencyReport {
        poa,
        sdf,
        topo,
        witnesses: Witnesses {
            poa: poa_w,
            sdf: sdf_w,
            topo: topo_w,
        },
        beta_point: member(beta, u)?.clone(),
        f_used: f.cloned(),
    })
}

/// How the point of `S_{M,N}` is chosen in a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepPolicy {
    ClosedForm(SmnAllocation),
    Policy(PolicySpec),
}

impl SweepPolicy {
    pub fn label(&self) -> String {
        match self {
            SweepPolicy::ClosedForm(a) => a.label().to_string(),
            SweepPolicy::Policy(p) => p.label(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Poa(IndexSpec),
    Sdf,
    Topo,
}

impl Measure {
    pub fn label(&self) -> String {
        match self {
            Measure::Poa(IndexSpec::Arithmetic) => "poa-sum".into(),
            Measure::Poa(f) => format!("poa-{}", f.label()),
            Measure::Sdf => "sdf".into(),
            Measure::Topo => "topo".into(),
        }
    }

    /// `poa-<index>`, `sdf` or `topo`.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "sdf" => Ok(Measure::Sdf),
            "topo" => Ok(Measure::Topo),
            t => match t.strip_prefix("poa-") {
                Some(idx) => Ok(Measure::Poa(IndexSpec::parse(idx)?)),
                None => Err(Error::param("measure", format!("unknown measure {t:?}"))),
            },
        }
    }

    pub fn evaluate(&self, beta: &UtilityPoint, u: &FiniteUtilitySet) -> Result<f64> {
        match self {
            Measure::Poa(f) => poa_instance(f, beta, u),
            Measure::Sdf => sdf_instance(beta, u),
            Measure::Topo => topo_instance(beta, u),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub policy: String,
    pub measure: String,
    pub value: f64,
}

/// `S_{M,N}` as a finite set: the three closed forms plus, when
/// `resolution ≥ 2`, a `resolution`-per-axis grid.
pub fn smn_point_set(f: SmnFamily, resolution: usize) -> Result<FiniteUtilitySet> {
    let closed = FiniteUtilitySet::new(
        SmnAllocation::all()
            .into_iter()
            .map(|a| smn_closed_form(a, f))
            .collect(),
    )?;
    if resolution < 2 {
        return Ok(closed);
    }
    discretize(&smn_halfspaces(f), resolution)?.union(&closed)
}

/// One row per `M` (sorted ascending): the measure of the point the policy
/// selects in `S_{M,N}`.
pub fn sweep_family(
    policy: &SweepPolicy,
    measure: &Measure,
    ms: &[f64],
    n: usize,
    resolution: usize,
) -> Result<Vec<SweepRow>> {
    if ms.is_empty() {
        return Err(Error::param("Ms", "at least one value is required"));
    }
    let mut ms = ms.to_vec();
    ms.sort_by(f64::total_cmp);
    ms.iter()
        .map(|&m| {
            let fam = SmnFamily::new(m, n)?;
            let u = smn_point_set(fam, resolution)?;
            let beta = match policy {
                SweepPolicy::ClosedForm(a) => smn_closed_form(*a, fam),
                SweepPolicy::Policy(p) => apply_policy(p, &u)?,
            };
            Ok(SweepRow {
                m,
                n,
                policy: policy.label(),
                measure: measure.label(),
                value: measure.evaluate(&beta, &u)?,
            })
        })
        .collect()
}
