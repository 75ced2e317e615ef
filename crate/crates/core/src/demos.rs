//! Counterexample gallery: each demo builds a concrete instance, runs the
//! library operations on it and records whether the expected phenomenon
//! actually occurred. Nothing in a report's `passed` flag is hard-coded.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexes::{eval_index, IndexSpec};
use crate::pareto::is_pareto_optimal;
use crate::policies::{apply_policy, braess_detect, policy_catalog, PolicySpec, TieBreak};
use crate::utility_model::{
    discretize, hausdorff, weakly_below, FiniteUtilitySet, Halfspace, HalfspaceSet, MetricChoice,
    UtilityPoint,
};

/// A named numeric table, written out as CSV for plotting.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a header row; values use the shortest exact representation.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::param("csv", e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| v.to_string())).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::param("csv", e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::param("csv", e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let io = |e: csv::Error| Error::param("csv", e.to_string());
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r.headers().map_err(io)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(io)?;
            let row = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::param("csv", format!("{f:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub name: String,
    pub passed: bool,
    pub narrative: String,
    pub artifacts: BTreeMap<String, Table>,
}

fn halfspace(weights: &[f64], bound: f64) -> Halfspace {
    Halfspace {
        weights: weights.to_vec(),
        bound,
    }
}

/// Lowercase alphanumerics joined by `_`, usable in a file name.
fn slug(text: &str) -> String {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_ascii_lowercase)
        .collect::<Vec<_>>()
        .join("_")
}

fn linf(a: &UtilityPoint, b: &UtilityPoint) -> f64 {
    MetricChoice::LInfinity.distance(a.coords(), b.coords())
}

/// Measured quantities of the tilted-triangle discontinuity.
#[derive(Clone, Debug, PartialEq)]
pub struct SumDiscontinuity {
    pub set_distance: f64,
    pub allocation_jump: f64,
    pub choice_minus: UtilityPoint,
    pub choice_plus: UtilityPoint,
}

/// Σ-optimizing choices on `{x + (1∓θ)y ≤ 1}`: the sets are `O(θ)` apart
/// while the choices sit at opposite vertices.
pub fn sum_discontinuity(theta: f64, resolution: usize) -> Result<SumDiscontinuity> {
    if theta == 0.0 || theta.is_nan() || theta.abs() > 0.1 {
        return Err(Error::param("theta", format!("need 0 < |theta| <= 0.1, got {theta}")));
    }
    let tilted = |t: f64| -> Result<FiniteUtilitySet> {
        let h = HalfspaceSet::new(2, vec![halfspace(&[1.0, 1.0 + t], 1.0)])?;
        discretize(&h, resolution)
    };
    let minus = tilted(-theta)?;
    let plus = tilted(theta)?;
    let sum = PolicySpec::index_opt(IndexSpec::Arithmetic);
    let choice_minus = apply_policy(&sum, &minus)?;
    let choice_plus = apply_policy(&sum, &plus)?;
    Ok(SumDiscontinuity {
        set_distance: hausdorff(&minus, &plus, MetricChoice::LInfinity)?,
        allocation_jump: linf(&choice_minus, &choice_plus),
        choice_minus,
        choice_plus,
    })
}

pub fn demo_sum_discontinuity(theta: f64, resolution: usize) -> Result<DemoReport> {
    let r = sum_discontinuity(theta, resolution)?;
    let passed = r.set_distance <= 3.0 * theta.abs() && r.allocation_jump >= 0.9;
    let mut table = Table::new(["theta", "set_distance", "allocation_jump", "x_minus", "y_minus", "x_plus", "y_plus"]);
    let (a, b) = (r.choice_minus.coords(), r.choice_plus.coords());
    table.push(vec![theta, r.set_distance, r.allocation_jump, a[0], a[1], b[0], b[1]]);
    Ok(DemoReport {
        name: "sum_discontinuity".into(),
        passed,
        narrative: format!(
            "Tilted triangles x+(1-θ)y<=1 and x+(1+θ)y<=1 at θ={theta} on a {resolution}-point grid are \
             {:.4} apart (Hausdorff, L∞) but the sum-optimizing choice moves from {:?} to {:?}, a jump of {:.4}.",
            r.set_distance, r.choice_minus, r.choice_plus, r.allocation_jump
        ),
        artifacts: BTreeMap::from([("summary".to_string(), table)]),
    })
}

/// Outcome of sweeping the two-point path `{(1, t), (0.5, 1.5)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyJump {
    /// First `t` (descending from 1.4) at which the choice switches between A and B.
    pub crossing: Option<f64>,
    /// Largest L∞ move of the choice across a switch.
    pub jump: f64,
    pub step: f64,
    pub pareto_violation: Option<f64>,
    pub path: Table,
}

pub const JUMP_FIXED_POINT: [f64; 2] = [0.5, 1.5];

pub fn pareto_policy_jump(p: &PolicySpec, steps: usize) -> Result<PolicyJump> {
    if steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    let step = 0.8 / steps as f64;
    let b = UtilityPoint::new(JUMP_FIXED_POINT.to_vec())?;
    let mut path = Table::new(["t", "x", "y"]);
    let mut prev: Option<(UtilityPoint, bool)> = None;
    let mut crossing = None;
    let mut jump = 0.0_f64;
    let mut pareto_violation = None;
    for i in 0..=steps {
        let t = 1.4 - i as f64 * step;
        let a = UtilityPoint::new(vec![1.0, t])?;
        let u = FiniteUtilitySet::new(vec![a, b.clone()])?;
        let choice = apply_policy(p, &u)?;
        if pareto_violation.is_none() && !is_pareto_optimal(&choice, &u)? {
            pareto_violation = Some(t);
        }
        let picked_b = choice == b;
        if let Some((prev_choice, prev_b)) = &prev {
            if *prev_b != picked_b {
                jump = jump.max(linf(prev_choice, &choice));
                crossing.get_or_insert(t);
            }
        }
        path.push(vec![t, choice.coords()[0], choice.coords()[1]]);
        prev = Some((choice, picked_b));
    }
    Ok(PolicyJump {
        crossing,
        jump,
        step,
        pareto_violation,
        path,
    })
}

pub fn demo_pareto_policy_jump(p: &PolicySpec, steps: usize) -> Result<DemoReport> {
    let r = pareto_policy_jump(p, steps)?;
    let passed = r.pareto_violation.is_none() && r.crossing.is_some() && r.jump >= 0.4;
    let narrative = match (r.pareto_violation, r.crossing) {
        (Some(t), _) => format!("{} picked a dominated point at t={t}.", p.label()),
        (None, Some(t)) => format!(
            "{} switches between A_t=(1,t) and B=(0.5,1.5) at t≈{t:.4}: consecutive sets are {:.4} apart \
             (Hausdorff) but the choice jumps by {:.4}. The path coordinates are one instance of the construction.",
            p.label(),
            r.step,
            r.jump
        ),
        (None, None) => format!("{} never switches along the path; no discontinuity exhibited.", p.label()),
    };
    Ok(DemoReport {
        name: "pareto_policy_jump".into(),
        passed,
        narrative,
        artifacts: BTreeMap::from([(format!("path_{}", slug(&p.label())), r.path)]),
    })
}

pub fn demo_convex_nonmonotone() -> Result<DemoReport> {
    let left = UtilityPoint::new(vec![0.0, 1.0])?;
    let right = UtilityPoint::new(vec![1.0, 0.0])?;
    let segment = FiniteUtilitySet::from_rows((0..=100).map(|i| {
        let x = i as f64 / 100.0;
        vec![x, 1.0 - x]
    }))?;
    let mut table = Table::new(["policy", "x", "y", "dominates_both"]);
    let mut passed = true;
    let mut offenders = Vec::new();
    for (i, p) in policy_catalog(2).iter().enumerate() {
        let a = apply_policy(p, &segment)?;
        let both = weakly_below(left.coords(), a.coords()) && weakly_below(right.coords(), a.coords());
        if both || !segment.contains(&a) {
            passed = false;
            offenders.push(p.label());
        }
        table.push(vec![i as f64, a.coords()[0], a.coords()[1], f64::from(u8::from(both))]);
    }
    let narrative = if passed {
        "On {(0,1)} and {(1,0)} every policy must return the only point; on the 101-point segment \
         joining them no catalog policy returns a point dominating both, so none is monotone under inclusion."
            .to_string()
    } else {
        format!("policies violating the segment bound: {offenders:?}")
    };
    Ok(DemoReport {
        name: "convex_nonmonotone".into(),
        passed,
        narrative,
        artifacts: BTreeMap::from([("choices".to_string(), table)]),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JainFlaw {
    pub maxmin_point: UtilityPoint,
    pub maxmin_jain: f64,
    pub best_jain: f64,
    pub flawed: bool,
}

/// Max-min fair point of `{y ≤ cap, x + y ≤ 2}` against the best Jain value.
pub fn jain_maxmin_flaw(cap: f64, resolution: usize) -> Result<JainFlaw> {
    let h = HalfspaceSet::new(2, vec![halfspace(&[0.0, 1.0], cap), halfspace(&[1.0, 1.0], 2.0)])?;
    let u = discretize(&h, resolution)?;
    let m = apply_policy(&PolicySpec::max_min_fair(), &u)?;
    let maxmin_jain = eval_index(&IndexSpec::Jain, &m)?;
    let best = apply_policy(&PolicySpec::index_opt(IndexSpec::Jain), &u)?;
    let best_jain = eval_index(&IndexSpec::Jain, &best)?;
    Ok(JainFlaw {
        flawed: maxmin_jain < best_jain - 1e-9,
        maxmin_point: m,
        maxmin_jain,
        best_jain,
    })
}

pub fn demo_jain_maxmin_flaw() -> Result<DemoReport> {
    let mut table = Table::new(["cap", "maxmin_x", "maxmin_y", "maxmin_jain", "best_jain", "flawed"]);
    let mut outcomes = Vec::new();
    for cap in [0.5, 1.0, 0.1] {
        let r = jain_maxmin_flaw(cap, 41)?;
        let c = r.maxmin_point.coords();
        table.push(vec![cap, c[0], c[1], r.maxmin_jain, r.best_jain, f64::from(u8::from(r.flawed))]);
        outcomes.push(r);
    }
    let main = &outcomes[0];
    let passed = main.flawed && !outcomes[1].flawed && outcomes[2].flawed;
    Ok(DemoReport {
        name: "jain_maxmin_flaw".into(),
        passed,
        narrative: format!(
            "With y<=0.5 and x+y<=2 the max-min fair point {:?} has Jain {:.4} while equal points reach {:.4}. \
             Control cap y<=1 gives Jain {:.4} at {:?}; cap y<=0.1 gives {:.4}.",
            main.maxmin_point,
            main.maxmin_jain,
            main.best_jain,
            outcomes[1].maxmin_jain,
            outcomes[1].maxmin_point,
            outcomes[2].maxmin_jain
        ),
        artifacts: BTreeMap::from([("caps".to_string(), table)]),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexChoice {
    pub choice: UtilityPoint,
    pub pareto_optimal: bool,
}

/// The choice of `IndexOpt(index)` on `{(1,1), (2,1)}` scaled by `scale`.
pub fn index_choice_on_pair(index: IndexSpec, scale: f64) -> Result<IndexChoice> {
    let u = FiniteUtilitySet::from_rows([vec![scale, scale], vec![2.0 * scale, scale]])?;
    let choice = apply_policy(&PolicySpec::index_opt(index), &u)?;
    Ok(IndexChoice {
        pareto_optimal: is_pareto_optimal(&choice, &u)?,
        choice,
    })
}

pub fn demo_jain_nonpareto() -> Result<DemoReport> {
    let jain = index_choice_on_pair(IndexSpec::Jain, 1.0)?;
    let scaled = index_choice_on_pair(IndexSpec::Jain, 10.0)?;
    let control = index_choice_on_pair(IndexSpec::Arithmetic, 1.0)?;
    let passed = jain.choice.coords() == [1.0, 1.0]
        && !jain.pareto_optimal
        && scaled.choice.coords() == [10.0, 10.0]
        && !scaled.pareto_optimal
        && control.choice.coords() == [2.0, 1.0]
        && control.pareto_optimal;
    let mut table = Table::new(["scale", "jain_choice_x", "jain_choice_y", "jain_11", "jain_21"]);
    for (s, r) in [(1.0, &jain), (10.0, &scaled)] {
        let c = r.choice.coords();
        let j = |x: f64, y: f64| eval_index(&IndexSpec::Jain, &UtilityPoint::new(vec![x * s, y * s])?);
        table.push(vec![s, c[0], c[1], j(1.0, 1.0)?, j(2.0, 1.0)?]);
    }
    Ok(DemoReport {
        name: "jain_nonpareto".into(),
        passed,
        narrative: format!(
            "On {{(1,1),(2,1)}} Jain-optimizing picks {:?} (Jain 1 vs 0.9) although (2,1) dominates it; \
             scaled by 10 it picks {:?}; the sum-optimizer picks {:?}.",
            jain.choice, scaled.choice, control.choice
        ),
        artifacts: BTreeMap::from([("values".to_string(), table)]),
    })
}

/// Braess check of a policy on `{(2,2)} ⊂ {(1,1), (2,2)}`.
pub fn braess_on_pair(p: &PolicySpec) -> Result<Option<crate::policies::BraessWitness>> {
    let u1 = FiniteUtilitySet::from_rows([vec![2.0, 2.0]])?;
    let u2 = FiniteUtilitySet::from_rows([vec![1.0, 1.0], vec![2.0, 2.0]])?;
    braess_detect(p, &u1, &u2)
}

pub fn demo_braess_jain() -> Result<DemoReport> {
    let jain = |tiebreak| PolicySpec::IndexOpt {
        index: IndexSpec::Jain,
        tiebreak,
    };
    let lexmin = braess_on_pair(&jain(TieBreak::LexMin))?;
    let lexmax = braess_on_pair(&jain(TieBreak::LexMax))?;
    let sum = braess_on_pair(&PolicySpec::index_opt(IndexSpec::Arithmetic))?;
    let passed = lexmin.is_some() && lexmax.is_none() && sum.is_none();
    let mut table = Table::new(["variant", "witness"]);
    for (i, w) in [&lexmin, &lexmax, &sum].iter().enumerate() {
        table.push(vec![i as f64, f64::from(u8::from(w.is_some()))]);
    }
    let narrative = match &lexmin {
        Some(w) => format!(
            "Jain ties at 1 on (1,1) and (2,2); breaking ties toward the smallest point chooses {:?} on \
             {{(2,2)}} but {:?} on the larger set, strictly worse for everyone. Largest-point tie-break and \
             the sum-optimizer show no paradox.",
            w.a1, w.a2
        ),
        None => "no Braess paradox found for Jain with smallest-point tie-break".into(),
    };
    Ok(DemoReport {
        name: "braess_jain".into(),
        passed,
        narrative,
        artifacts: BTreeMap::from([("variants".to_string(), table)]),
    })
}

pub const DEMO_NAMES: [&str; 6] = [
    "sum_discontinuity",
    "pareto_policy_jump",
    "convex_nonmonotone",
    "jain_maxmin_flaw",
    "jain_nonpareto",
    "braess_jain",
];

/// Runs one demo (or several, for `pareto_policy_jump`) with default parameters.
pub fn run_demo(name: &str) -> Result<Vec<DemoReport>> {
    Ok(match name {
        "sum_discontinuity" => vec![demo_sum_discontinuity(0.01, 201)?],
        "pareto_policy_jump" => vec![
            demo_pareto_policy_jump(&PolicySpec::index_opt(IndexSpec::Geometric), 100)?,
            demo_pareto_policy_jump(&PolicySpec::index_opt(IndexSpec::Arithmetic), 100)?,
        ],
        "convex_nonmonotone" => vec![demo_convex_nonmonotone()?],
        "jain_maxmin_flaw" => vec![demo_jain_maxmin_flaw()?],
        "jain_nonpareto" => vec![demo_jain_nonpareto()?],
        "braess_jain" => vec![demo_braess_jain()?],
        other => return Err(Error::param("demo", format!("unknown demo {other:?}"))),
    })
}

pub fn run_all_demos() -> Result<Vec<DemoReport>> {
    let mut out = Vec::new();
    for name in DEMO_NAMES {
        out.extend(run_demo(name)?);
    }
    Ok(out)
}
