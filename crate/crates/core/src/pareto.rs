//! Pareto fronts of finite sets, expansions and ε-approximate Pareto sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::utility_model::{
    check_dims, lex_cmp, log_point, pareto_below, strictly_below, FiniteUtilitySet, MetricChoice,
    UtilityPoint, TOLERANCE,
};

/// Maximal elements of a finite set under the componentwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoFront {
    pub points: FiniteUtilitySet,
    pub source_size: usize,
}

#[derive(Serialize, Deserialize)]
struct RawFront {
    front: Vec<UtilityPoint>,
    source_size: usize,
}

impl Serialize for ParetoFront {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawFront {
            front: self.points.points().to_vec(),
            source_size: self.source_size,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParetoFront {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawFront::deserialize(d)?;
        let points = FiniteUtilitySet::new(raw.front).map_err(serde::de::Error::custom)?;
        Ok(ParetoFront {
            points,
            source_size: raw.source_size,
        })
    }
}

/// Points of `u` not dominated by any other point, duplicates collapsed.
///
/// Sort-filter skyline: after a lexicographically descending sort any
/// dominator of a point precedes it, so each point is only tested against
/// the front built so far. Output is in that descending order.
pub fn pareto_filter(u: &FiniteUtilitySet) -> ParetoFront {
    let mut sorted: Vec<&UtilityPoint> = u.iter().collect();
    sorted.sort_by(|a, b| lex_cmp(b.coords(), a.coords()));
    sorted.dedup_by(|a, b| a.coords() == b.coords());

    let mut front: Vec<UtilityPoint> = Vec::new();
    for p in sorted {
        if !front.iter().any(|q| pareto_below(p.coords(), q.coords())) {
            front.push(p.clone());
        }
    }
    ParetoFront {
        points: FiniteUtilitySet::new(front).expect("front of a nonempty set is nonempty"),
        source_size: u.len(),
    }
}

/// Whether the member of `set` matching `u` is on the front.
pub fn is_pareto_optimal(u: &UtilityPoint, set: &FiniteUtilitySet) -> Result<bool> {
    check_dims(set.dim(), u.dim())?;
    let member = set
        .find(u)
        .ok_or_else(|| Error::NotMember(u.coords().to_vec()))?;
    Ok(!set
        .iter()
        .any(|v| pareto_below(member.coords(), v.coords())))
}

/// Whether some point of `set` is strictly better than `u` in every coordinate.
pub fn is_strictly_dominated(u: &UtilityPoint, set: &FiniteUtilitySet) -> Result<bool> {
    check_dims(set.dim(), u.dim())?;
    Ok(set.iter().any(|v| strictly_below(u.coords(), v.coords())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionKind {
    /// `X ⊕ a = {y | d(x, y) ≤ a for some x ∈ X}`.
    Additive { radius: f64 },
    /// `X ⊗ a = exp(log X ⊕ log a)`.
    Multiplicative { factor: f64 },
}

/// A set fattened additively or multiplicatively.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub base: FiniteUtilitySet,
    pub kind: ExpansionKind,
    #[serde(default)]
    pub metric: MetricChoice,
}

impl Expansion {
    pub fn additive(base: FiniteUtilitySet, radius: f64, metric: MetricChoice) -> Result<Self> {
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::param("radius", format!("must be nonnegative, got {radius}")));
        }
        Ok(Expansion {
            base,
            kind: ExpansionKind::Additive { radius },
            metric,
        })
    }

    pub fn multiplicative(base: FiniteUtilitySet, factor: f64, metric: MetricChoice) -> Result<Self> {
        if factor.is_nan() || factor < 1.0 {
            return Err(Error::param("factor", format!("must be at least 1, got {factor}")));
        }
        Ok(Expansion {
            base,
            kind: ExpansionKind::Multiplicative { factor },
            metric,
        })
    }
}

/// Membership of `p` in the expansion.
pub fn expand_contains(e: &Expansion, p: &UtilityPoint) -> Result<bool> {
    check_dims(e.base.dim(), p.dim())?;
    match e.kind {
        ExpansionKind::Additive { radius } => Ok(e
            .base
            .iter()
            .any(|x| e.metric.distance(x.coords(), p.coords()) <= radius + TOLERANCE)),
        ExpansionKind::Multiplicative { factor } => {
            let lp = log_point(p)?;
            let reach = factor.ln();
            for x in e.base.iter() {
                if e.metric.distance(&log_point(x)?, &lp) <= reach + TOLERANCE {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsApproxCheck {
    pub holds: bool,
    pub uncovered: Option<UtilityPoint>,
}

fn check_subset(s: &FiniteUtilitySet, u: &FiniteUtilitySet) -> Result<()> {
    check_dims(u.dim(), s.dim())?;
    match s.first_missing_from(u) {
        Some(p) => Err(Error::NotSubset(p.coords().to_vec())),
        None => Ok(()),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("eps", format!("must be a finite nonnegative real, got {eps}")))
    }
}

/// Whether every `u ∈ U` has some `s ∈ S` with `u_k ≤ (1+ε)s_k` for all `k`.
pub fn verify_eps_approx(s: &FiniteUtilitySet, u: &FiniteUtilitySet, eps: f64) -> Result<EpsApproxCheck> {
    check_eps(eps)?;
    check_subset(s, u)?;
    let covered = |p: &UtilityPoint| {
        s.iter().any(|q| {
            p.coords()
                .iter()
                .zip(q.coords())
                .all(|(a, b)| *a <= (1.0 + eps) * b + TOLERANCE)
        })
    };
    let uncovered = u.iter().find(|p| !covered(p)).cloned();
    Ok(EpsApproxCheck {
        holds: uncovered.is_none(),
        uncovered,
    })
}

/// An ε-approximate Pareto set of `u` drawn from `u` itself.
///
/// Front points are bucketed into log-space cells of side `ln(1+ε)`; each
/// occupied cell keeps its largest-sum member. Two points sharing a cell
/// are within a factor `1+ε` on every coordinate. `ε = 0` returns the
/// whole front.
pub fn eps_approx_construct(u: &FiniteUtilitySet, eps: f64) -> Result<FiniteUtilitySet> {
    check_eps(eps)?;
    if let Some(p) = u.iter().find(|p| !p.is_strictly_positive()) {
        return Err(Error::Domain(format!(
            "ε-approximation needs strictly positive coordinates, got {p:?}"
        )));
    }
    let front = pareto_filter(u).points;
    if eps == 0.0 {
        return Ok(front);
    }
    let side = eps.ln_1p();
    let mut cells: BTreeMap<Vec<i64>, &UtilityPoint> = BTreeMap::new();
    for p in front.iter() {
        let key: Vec<i64> = p
            .coords()
            .iter()
            .map(|c| (c.ln() / side).floor() as i64)
            .collect();
        cells
            .entry(key)
            .and_modify(|best| {
                let (a, b): (f64, f64) = (p.coords().iter().sum(), best.coords().iter().sum());
                if a > b || (a == b && lex_cmp(p.coords(), best.coords()).is_gt()) {
                    *best = p;
                }
            })
            .or_insert(p);
    }
    FiniteUtilitySet::new(cells.into_values().cloned().collect())
}

/// Both sides of the ε-approximation/expansion equivalence for `S ⊆ U`:
/// the `(1+ε)` covering of `U`, and `front(U) ⊆ S ⊗ exp(ε)` under the
/// log-space L∞ metric. The two differ when a point falls between `1+ε`
/// and `exp(ε)`.
pub fn check_eps_expansion_theorem(
    s: &FiniteUtilitySet,
    u: &FiniteUtilitySet,
    eps: f64,
) -> Result<(bool, bool)> {
    let definitional = verify_eps_approx(s, u, eps)?.holds;
    let expansion = Expansion::multiplicative(s.clone(), eps.exp(), MetricChoice::LInfinity)?;
    let mut expansion_form = true;
    for p in pareto_filter(u).points.iter() {
        if !expand_contains(&expansion, p)? {
            expansion_form = false;
            break;
        }
    }
    Ok((definitional, expansion_form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility_model::weakly_below;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(c: &[f64]) -> UtilityPoint {
        UtilityPoint::new(c.to_vec()).unwrap()
    }

    fn set(rows: &[&[f64]]) -> FiniteUtilitySet {
        FiniteUtilitySet::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    /// Quadratic definition: keep points no other point dominates.
    fn brute_front(u: &FiniteUtilitySet) -> FiniteUtilitySet {
        let keep: Vec<UtilityPoint> = u
            .iter()
            .filter(|p| !u.iter().any(|q| pareto_below(p.coords(), q.coords())))
            .cloned()
            .collect();
        FiniteUtilitySet::new(keep).unwrap()
    }

    fn random_set(rng: &mut ChaCha8Rng, n: usize, len: usize) -> FiniteUtilitySet {
        FiniteUtilitySet::from_rows(
            (0..len).map(|_| (0..n).map(|_| rng.gen_range(0.05..10.0)).collect::<Vec<f64>>()),
        )
        .unwrap()
    }

    #[test]
    fn filter_examples() {
        let f = pareto_filter(&set(&[&[1., 2.], &[2., 1.], &[1., 1.]]));
        assert!(f.points.set_eq(&set(&[&[1., 2.], &[2., 1.]])));
        assert_eq!(f.source_size, 3);
        assert!(pareto_filter(&set(&[&[1., 1.]])).points.set_eq(&set(&[&[1., 1.]])));
        let chain = pareto_filter(&set(&[&[1., 1.], &[2., 2.], &[3., 3.]]));
        assert_eq!(chain.points.points(), &[pt(&[3., 3.])]);
        let dup = pareto_filter(&set(&[&[1., 2.], &[1., 2.], &[0., 0.]]));
        assert_eq!(dup.points.len(), 1);
    }

    #[test]
    fn optimality_examples() {
        let s = set(&[&[1., 1.], &[2., 2.]]);
        assert!(!is_pareto_optimal(&pt(&[1., 1.]), &s).unwrap());
        assert!(is_pareto_optimal(&pt(&[2., 2.]), &s).unwrap());
        assert!(is_pareto_optimal(&pt(&[1., 2.]), &set(&[&[1., 2.], &[2., 1.]])).unwrap());
        assert!(matches!(
            is_pareto_optimal(&pt(&[5., 5.]), &s),
            Err(Error::NotMember(_))
        ));

        assert!(is_strictly_dominated(&pt(&[1., 1.]), &set(&[&[2., 2.]])).unwrap());
        assert!(!is_strictly_dominated(&pt(&[1., 2.]), &set(&[&[2., 2.]])).unwrap());
        assert!(!is_strictly_dominated(&pt(&[0., 0.]), &set(&[&[0., 0.]])).unwrap());
    }

    #[test]
    fn expansion_examples() {
        let base = set(&[&[1., 1.]]);
        let add = Expansion::additive(base.clone(), 0.5, MetricChoice::LInfinity).unwrap();
        assert!(expand_contains(&add, &pt(&[1.5, 1.0])).unwrap());
        assert!(!expand_contains(&add, &pt(&[1.6, 1.0])).unwrap());
        let mul = Expansion::multiplicative(base, 2.0, MetricChoice::LInfinity).unwrap();
        assert!(expand_contains(&mul, &pt(&[2., 2.])).unwrap());
        assert!(expand_contains(&mul, &pt(&[0.5, 1.])).unwrap());
        assert!(!expand_contains(&mul, &pt(&[4., 1.])).unwrap());
        assert!(expand_contains(&mul, &pt(&[0., 1.])).is_err());
        assert!(Expansion::multiplicative(set(&[&[1.]]), 0.5, MetricChoice::L2).is_err());
        assert!(Expansion::additive(set(&[&[1.]]), -0.5, MetricChoice::L2).is_err());
    }

    #[test]
    fn verify_examples() {
        let u = set(&[&[1., 1.], &[1.05, 1.05]]);
        assert!(verify_eps_approx(&set(&[&[1., 1.]]), &u, 0.05).unwrap().holds);
        let u = set(&[&[1., 1.], &[1.2, 1.2]]);
        let check = verify_eps_approx(&set(&[&[1., 1.]]), &u, 0.05).unwrap();
        assert!(!check.holds);
        assert_eq!(check.uncovered, Some(pt(&[1.2, 1.2])));
        assert!(matches!(
            verify_eps_approx(&set(&[&[3., 3.]]), &u, 0.05),
            Err(Error::NotSubset(_))
        ));
    }

    #[test]
    fn construct_examples() {
        let single = set(&[&[1., 1.]]);
        assert_eq!(eps_approx_construct(&single, 0.1).unwrap(), single);
        let u = set(&[&[1., 1.], &[1.05, 1.05]]);
        assert_eq!(eps_approx_construct(&u, 0.1).unwrap().points(), &[pt(&[1.05, 1.05])]);
        assert!(eps_approx_construct(&set(&[&[1., 0.]]), 0.1).is_err());
        assert!(eps_approx_construct(&u, -0.1).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_set(&mut rng, 2, 200);
        let s = eps_approx_construct(&u, 0.25).unwrap();
        assert!(s.len() <= pareto_filter(&u).points.len());
        assert!(verify_eps_approx(&s, &u, 0.25).unwrap().holds);
        let all = eps_approx_construct(&u, 0.0).unwrap();
        assert!(all.set_eq(&pareto_filter(&u).points));
    }

    #[test]
    fn expansion_theorem_examples() {
        let u = set(&[&[1., 1.], &[1.5, 1.5]]);
        let front = pareto_filter(&u).points;
        assert_eq!(check_eps_expansion_theorem(&front, &u, 0.3).unwrap(), (true, true));
        let s = set(&[&[1., 1.]]);
        assert_eq!(check_eps_expansion_theorem(&s, &u, 1.0).unwrap(), (true, true));
        // between 1+ε = 2 and e^ε ≈ 2.718
        let e = std::f64::consts::E - 0.01;
        let u = set(&[&[1., 1.], &[e, e]]);
        assert_eq!(check_eps_expansion_theorem(&s, &u, 1.0).unwrap(), (false, true));
    }

    #[test]
    fn construction_always_verifies() {
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=3);
            let len = rng.gen_range(1..=200);
            let u = random_set(&mut rng, n, len);
            for eps in [0.1, 0.25, 1.0] {
                let s = eps_approx_construct(&u, eps).unwrap();
                let check = verify_eps_approx(&s, &u, eps).unwrap();
                assert!(check.holds, "seed {seed} eps {eps}: {:?}", check.uncovered);
            }
        }
    }

    #[test]
    fn strictly_monotone_argmax_is_on_front() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let u = random_set(&mut rng, 3, 30);
            let front = pareto_filter(&u).points;
            for score in [
                |p: &UtilityPoint| p.coords().iter().sum::<f64>(),
                |p: &UtilityPoint| p.coords().iter().product::<f64>(),
            ] {
                let best = u
                    .iter()
                    .max_by(|a, b| score(a).total_cmp(&score(b)))
                    .unwrap();
                assert!(front.contains(best));
            }
        }
    }

    fn rows() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..=3).prop_flat_map(|n| {
            prop::collection::vec(
                prop::collection::vec((0u8..6).prop_map(f64::from), n),
                1..40,
            )
        })
    }

    proptest! {
        #[test]
        fn filter_matches_brute_force(r in rows()) {
            let u = FiniteUtilitySet::from_rows(r).unwrap();
            let front = pareto_filter(&u);
            prop_assert!(front.points.set_eq(&brute_front(&u)));
            // idempotent
            prop_assert_eq!(&pareto_filter(&front.points).points, &front.points);
            // coverage
            for p in u.iter() {
                prop_assert!(front.points.iter().any(|q| weakly_below(p.coords(), q.coords())));
            }
            // antichain
            for a in front.points.iter() {
                for b in front.points.iter() {
                    prop_assert!(!pareto_below(a.coords(), b.coords()));
                }
            }
        }

        #[test]
        fn chain_front_is_its_maximum(base in prop::collection::vec(0.0..5.0f64, 1..4), steps in prop::collection::vec(0.01..1.0f64, 1..10)) {
            let mut rows = vec![base.clone()];
            let mut cur = base;
            for s in steps {
                cur = cur.iter().map(|x| x + s).collect();
                rows.push(cur.clone());
            }
            let u = FiniteUtilitySet::from_rows(rows).unwrap();
            let front = pareto_filter(&u).points;
            prop_assert_eq!(front.points(), &[UtilityPoint::new(cur).unwrap()]);
        }

        #[test]
        fn coverage_is_monotone_in_eps(r in rows(), e1 in 0.0..1.0f64, extra in 0.0..1.0f64) {
            let r: Vec<Vec<f64>> = r.into_iter().map(|p| p.into_iter().map(|x| x + 1.0).collect()).collect();
            let u = FiniteUtilitySet::from_rows(r).unwrap();
            let s = FiniteUtilitySet::new(u.points()[..1].to_vec()).unwrap();
            if verify_eps_approx(&s, &u, e1).unwrap().holds {
                prop_assert!(verify_eps_approx(&s, &u, e1 + extra).unwrap().holds);
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = pareto_filter(&set(&[&[1., 2.], &[2., 1.], &[0., 0.]]));
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["source_size"], 3);
        assert_eq!(v["front"].as_array().unwrap().len(), 2);
        let back: ParetoFront = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
