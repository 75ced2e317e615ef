//! Policy functions: index-optimizing, max-min fair (leximin) and fixed
//! choices, the closed-form allocations of `S_{M,N}`, and the checks built
//! on them (Braess paradoxes, f-increasing chains, cross-index violations).

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexes::{eval_index, IndexSpec};
use crate::utility_model::{lex_cmp, strictly_below, FiniteUtilitySet, SmnFamily, UtilityPoint};

/// Relative width of the band treated as a tie when maximizing an index.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    LexMin,
    #[default]
    LexMax,
}

impl TieBreak {
    fn prefer(self, a: &UtilityPoint, b: &UtilityPoint) -> bool {
        match self {
            TieBreak::LexMin => lex_cmp(a.coords(), b.coords()).is_lt(),
            TieBreak::LexMax => lex_cmp(a.coords(), b.coords()).is_gt(),
        }
    }
}

/// A deterministic rule choosing one point of every utility set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicySpec {
    IndexOpt {
        index: IndexSpec,
        #[serde(default)]
        tiebreak: TieBreak,
    },
    #[serde(rename = "maxmin")]
    MaxMinFair {
        #[serde(default)]
        tiebreak: TieBreak,
    },
    Fixed {
        point: UtilityPoint,
    },
}

impl PolicySpec {
    pub fn index_opt(index: IndexSpec) -> Self {
        PolicySpec::IndexOpt {
            index,
            tiebreak: TieBreak::LexMax,
        }
    }

    pub fn max_min_fair() -> Self {
        PolicySpec::MaxMinFair {
            tiebreak: TieBreak::LexMax,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PolicySpec::IndexOpt { index, tiebreak } => {
                format!("{}-opt/{}", index.label(), tiebreak_label(*tiebreak))
            }
            PolicySpec::MaxMinFair { tiebreak } => format!("maxmin/{}", tiebreak_label(*tiebreak)),
            PolicySpec::Fixed { point } => format!("fixed{:?}", point.coords()),
        }
    }

    /// Parses a short name (`maxmin`, `sum`, `jain`, ...) or a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let spec: PolicySpec =
                serde_json::from_str(t).map_err(|e| Error::param("policy", e.to_string()))?;
            if let PolicySpec::IndexOpt { index, .. } = &spec {
                index.validate()?;
            }
            return Ok(spec);
        }
        if t == "maxmin" {
            return Ok(PolicySpec::max_min_fair());
        }
        IndexSpec::parse(t)
            .map(PolicySpec::index_opt)
            .map_err(|_| Error::param("policy", format!("unknown policy {t:?}")))
    }
}

fn tiebreak_label(t: TieBreak) -> &'static str {
    match t {
        TieBreak::LexMin => "lex_min",
        TieBreak::LexMax => "lex_max",
    }
}

/// Index-optimizing policies for every catalog index under both
/// tie-breaks, plus max-min fairness, for `n`-player sets.
pub fn policy_catalog(n: usize) -> Vec<PolicySpec> {
    let total = (n * (n + 1) / 2) as f64;
    let owa: Vec<f64> = (0..n).map(|i| (n - i) as f64 / total).collect();
    let indexes = [
        IndexSpec::Arithmetic,
        IndexSpec::Min,
        IndexSpec::Max,
        IndexSpec::Geometric,
        IndexSpec::Harmonic,
        IndexSpec::QuasiArithmetic { delta: 2.0 },
        IndexSpec::QuasiArithmetic { delta: -2.0 },
        IndexSpec::Jain,
        IndexSpec::Owa { weights: owa },
    ];
    let mut out = Vec::new();
    for index in indexes {
        for tiebreak in [TieBreak::LexMin, TieBreak::LexMax] {
            out.push(PolicySpec::IndexOpt {
                index: index.clone(),
                tiebreak,
            });
        }
    }
    out.push(PolicySpec::MaxMinFair {
        tiebreak: TieBreak::LexMin,
    });
    out.push(PolicySpec::max_min_fair());
    out
}

fn leximin_key(p: &UtilityPoint) -> Vec<f64> {
    let mut k = p.coords().to_vec();
    k.sort_by(f64::total_cmp);
    k
}

/// The point `p` selects in `u`; always a member of `u`.
///
/// Points outside the index's domain are skipped; the call fails only when
/// no point remains.
pub fn apply_policy(p: &PolicySpec, u: &FiniteUtilitySet) -> Result<UtilityPoint> {
    match p {
        PolicySpec::IndexOpt { index, tiebreak } => {
            let scored: Vec<(f64, &UtilityPoint)> = u
                .iter()
                .filter_map(|x| eval_index(index, x).ok().map(|v| (v, x)))
                .collect();
            let best = scored
                .iter()
                .map(|(v, _)| *v)
                .fold(f64::NEG_INFINITY, f64::max);
            if scored.is_empty() {
                // surface configuration errors (bad OWA weights, dimension) first
                if let Err(e) = eval_index(index, &u.points()[0]) {
                    if !matches!(e, Error::Domain(_)) {
                        return Err(e);
                    }
                }
                return Err(Error::EmptyDomain(index.label()));
            }
            let band = TIE_TOLERANCE * best.abs().max(1.0);
            let mut chosen: Option<&UtilityPoint> = None;
            for (v, x) in &scored {
                if best - v <= band && chosen.is_none_or(|c| tiebreak.prefer(x, c)) {
                    chosen = Some(x);
                }
            }
            Ok(chosen.expect("nonempty").clone())
        }
        PolicySpec::MaxMinFair { tiebreak } => {
            let mut chosen = &u.points()[0];
            let mut key = leximin_key(chosen);
            for x in u.iter().skip(1) {
                let k = leximin_key(x);
                match lex_cmp(&k, &key) {
                    Ordering::Greater => {
                        chosen = x;
                        key = k;
                    }
                    Ordering::Equal if tiebreak.prefer(x, chosen) => chosen = x,
                    _ => {}
                }
            }
            Ok(chosen.clone())
        }
        PolicySpec::Fixed { point } => u
            .find(point)
            .cloned()
            .ok_or_else(|| Error::NotMember(point.coords().to_vec())),
    }
}

/// Closed-form optimizers on `S_{M,N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmnAllocation {
    Sum,
    Min,
    Product,
}

impl SmnAllocation {
    pub fn label(self) -> &'static str {
        match self {
            SmnAllocation::Sum => "sum",
            SmnAllocation::Min => "min",
            SmnAllocation::Product => "product",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "sum" | "arithmetic" => Some(SmnAllocation::Sum),
            "min" | "maxmin" => Some(SmnAllocation::Min),
            "product" | "geometric" | "nbs" => Some(SmnAllocation::Product),
            _ => None,
        }
    }

    pub fn all() -> [SmnAllocation; 3] {
        [SmnAllocation::Sum, SmnAllocation::Min, SmnAllocation::Product]
    }
}

/// `(M, 0, …, 0)`, `(1/(N−1+1/M))·𝟙` or `(M/N, 1/N, …, 1/N)`.
pub fn smn_closed_form(which: SmnAllocation, f: SmnFamily) -> UtilityPoint {
    let (m, n) = (f.m(), f.n());
    let coords = match which {
        SmnAllocation::Sum => {
            let mut c = vec![0.0; n];
            c[0] = m;
            c
        }
        SmnAllocation::Min => vec![1.0 / (n as f64 - 1.0 + 1.0 / m); n],
        SmnAllocation::Product => {
            let mut c = vec![1.0 / n as f64; n];
            c[0] = m / n as f64;
            c
        }
    };
    UtilityPoint::new(coords).expect("closed forms are nonnegative")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraessWitness {
    pub smaller: FiniteUtilitySet,
    pub larger: FiniteUtilitySet,
    /// Choice on the smaller set.
    pub a1: UtilityPoint,
    /// Choice on the larger set; strictly worse than `a1` for everyone.
    pub a2: UtilityPoint,
}

fn require_subset(a: &FiniteUtilitySet, b: &FiniteUtilitySet) -> Result<()> {
    crate::utility_model::check_dims(a.dim(), b.dim())?;
    match a.first_missing_from(b) {
        Some(p) => Err(Error::NotSubset(p.coords().to_vec())),
        None => Ok(()),
    }
}

/// A witness when growing `u1` to `u2` makes every player strictly worse off.
pub fn braess_detect(
    p: &PolicySpec,
    u1: &FiniteUtilitySet,
    u2: &FiniteUtilitySet,
) -> Result<Option<BraessWitness>> {
    require_subset(u1, u2)?;
    let a1 = apply_policy(p, u1)?;
    let a2 = apply_policy(p, u2)?;
    Ok(strictly_below(a2.coords(), a1.coords()).then(|| BraessWitness {
        smaller: u1.clone(),
        larger: u2.clone(),
        a1,
        a2,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FIncreasingViolation {
    pub index: usize,
    pub before: f64,
    pub after: f64,
}

/// First step of a nested chain along which `f ∘ p` decreases.
pub fn check_f_increasing(
    p: &PolicySpec,
    f: &IndexSpec,
    chain: &[FiniteUtilitySet],
) -> Result<Option<FIncreasingViolation>> {
    for (i, w) in chain.windows(2).enumerate() {
        if !w[0].is_subset_of(&w[1]) {
            return Err(Error::NotNested { index: i });
        }
    }
    let values = chain
        .iter()
        .map(|u| eval_index(f, &apply_policy(p, u)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.windows(2).enumerate().find_map(|(i, v)| {
        (v[0] > v[1] + 1e-9).then(|| FIncreasingViolation {
            index: i,
            before: v[0],
            after: v[1],
        })
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossIndexViolation {
    pub x1: UtilityPoint,
    pub x2: UtilityPoint,
    /// `[{x2}, {x1, x2}]`: optimizing `g` along it lowers `f`.
    pub chain: Vec<FiniteUtilitySet>,
}

/// Searches for `x1, x2` with `f(x1) < f(x2)` and `g(x2) < g(x1)`, both by a
/// margin of `1e-6`. Coordinates are log-uniform in `[0.1, 10]`.
pub fn find_cross_index_violation(
    f: &IndexSpec,
    g: &IndexSpec,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<CrossIndexViolation>> {
    const MARGIN: f64 = 1e-6;
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        UtilityPoint::new((0..n).map(|_| rng.gen_range(lo..=hi).exp()).collect())
            .expect("positive coordinates")
    };
    for _ in 0..trials {
        let (x1, x2) = (draw(), draw());
        let (f1, f2) = (eval_index(f, &x1)?, eval_index(f, &x2)?);
        let (g1, g2) = (eval_index(g, &x1)?, eval_index(g, &x2)?);
        if f1 + MARGIN < f2 && g2 + MARGIN < g1 {
            let chain = vec![
                FiniteUtilitySet::new(vec![x2.clone()])?,
                FiniteUtilitySet::new(vec![x1.clone(), x2.clone()])?,
            ];
            return Ok(Some(CrossIndexViolation { x1, x2, chain }));
        }
    }
    Ok(None)
}
