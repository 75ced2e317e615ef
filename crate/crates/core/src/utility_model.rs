//! Utility points and sets, the componentwise orders, the Hausdorff metric
//! and grid discretization of polytopes given by linear constraints.
//!
//! Utility vectors live in the nonnegative orthant. A finite point cloud
//! ([`FiniteUtilitySet`]) is the working representation of a compact utility
//! set; convex sets ([`HalfspaceSet`]) are handled by sampling them on a
//! uniform grid with [`discretize`].

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used for membership and feasibility tests.
pub const TOLERANCE: f64 = 1e-9;

/// A utility vector with one nonnegative coordinate per player.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UtilityPoint(Vec<f64>);

impl UtilityPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("a point needs at least one coordinate".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidPoint(format!(
                "coordinate {bad} of {coords:?} is negative or not finite"
            )));
        }
        Ok(UtilityPoint(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&c| c > 0.0)
    }

    /// `c * u` for a nonnegative scalar.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        UtilityPoint::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Coordinatewise equality within [`TOLERANCE`].
    pub fn approx_eq(&self, other: &UtilityPoint) -> bool {
        self.dim() == other.dim()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| (a - b).abs() <= TOLERANCE)
    }

    /// Lexicographic comparison of the coordinate vectors.
    pub fn lex_cmp(&self, other: &UtilityPoint) -> Ordering {
        lex_cmp(&self.0, &other.0)
    }
}

impl fmt::Debug for UtilityPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<Vec<f64>> for UtilityPoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        UtilityPoint::new(coords)
    }
}

impl From<UtilityPoint> for Vec<f64> {
    fn from(p: UtilityPoint) -> Self {
        p.0
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

/// A nonempty finite set of utility points of uniform dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub struct FiniteUtilitySet {
    points: Vec<UtilityPoint>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    points: Vec<UtilityPoint>,
}

impl TryFrom<RawSet> for FiniteUtilitySet {
    type Error = Error;

    fn try_from(raw: RawSet) -> Result<Self> {
        FiniteUtilitySet::new(raw.points)
    }
}

impl From<FiniteUtilitySet> for RawSet {
    fn from(set: FiniteUtilitySet) -> Self {
        RawSet { points: set.points }
    }
}

impl FiniteUtilitySet {
    pub fn new(points: Vec<UtilityPoint>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySet)?;
        let n = first.dim();
        for p in &points {
            check_dims(n, p.dim())?;
        }
        Ok(FiniteUtilitySet { points })
    }

    /// Builds a set from raw coordinate rows.
    pub fn from_rows<I, R>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: Into<Vec<f64>>,
    {
        let points = rows
            .into_iter()
            .map(|r| UtilityPoint::new(r.into()))
            .collect::<Result<Vec<_>>>()?;
        FiniteUtilitySet::new(points)
    }

    pub fn points(&self) -> &[UtilityPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<UtilityPoint> {
        self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, UtilityPoint> {
        self.points.iter()
    }

    /// The member matching `p` within [`TOLERANCE`], if any.
    pub fn find(&self, p: &UtilityPoint) -> Option<&UtilityPoint> {
        self.points.iter().find(|q| q.approx_eq(p))
    }

    pub fn contains(&self, p: &UtilityPoint) -> bool {
        self.find(p).is_some()
    }

    /// First point of `self` missing from `other`, if any.
    pub fn first_missing_from(&self, other: &FiniteUtilitySet) -> Option<&UtilityPoint> {
        self.points.iter().find(|p| !other.contains(p))
    }

    pub fn is_subset_of(&self, other: &FiniteUtilitySet) -> bool {
        self.dim() == other.dim() && self.first_missing_from(other).is_none()
    }

    /// Equality as point sets (order and multiplicity ignored).
    pub fn set_eq(&self, other: &FiniteUtilitySet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Union as a list, dropping points of `other` already present.
    pub fn union(&self, other: &FiniteUtilitySet) -> Result<FiniteUtilitySet> {
        check_dims(self.dim(), other.dim())?;
        let mut points = self.points.clone();
        for p in &other.points {
            if !self.contains(p) {
                points.push(p.clone());
            }
        }
        FiniteUtilitySet::new(points)
    }

    pub fn with_point(&self, p: UtilityPoint) -> Result<FiniteUtilitySet> {
        self.union(&FiniteUtilitySet::new(vec![p])?)
    }
}

impl<'a> IntoIterator for &'a FiniteUtilitySet {
    type Item = &'a UtilityPoint;
    type IntoIter = std::slice::Iter<'a, UtilityPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Metric used on coordinate vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricChoice {
    #[default]
    LInfinity,
    L2,
    L1,
}

impl MetricChoice {
    /// Distance between two raw vectors of equal length. Infinite
    /// coordinates (from `ln 0`) give an infinite distance unless both agree.
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| {
            if x == y {
                0.0
            } else {
                (x - y).abs()
            }
        });
        match self {
            MetricChoice::LInfinity => diffs.fold(0.0, f64::max),
            MetricChoice::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            MetricChoice::L1 => diffs.sum(),
        }
    }
}

/// `u ≼ v`: every coordinate of `u` is at most the matching one of `v`.
pub fn dominates(u: &UtilityPoint, v: &UtilityPoint) -> Result<bool> {
    check_dims(u.dim(), v.dim())?;
    Ok(weakly_below(u.coords(), v.coords()))
}

/// `u ≪ v`: every coordinate of `v` strictly exceeds that of `u`.
pub fn strictly_dominated_by_all_coords(u: &UtilityPoint, v: &UtilityPoint) -> Result<bool> {
    check_dims(u.dim(), v.dim())?;
    Ok(strictly_below(u.coords(), v.coords()))
}

pub(crate) fn weakly_below(u: &[f64], v: &[f64]) -> bool {
    u.iter().zip(v).all(|(a, b)| a <= b)
}

pub(crate) fn strictly_below(u: &[f64], v: &[f64]) -> bool {
    u.iter().zip(v).all(|(a, b)| a < b)
}

/// `u ≺ v`: weakly below with at least one strict coordinate.
pub(crate) fn pareto_below(u: &[f64], v: &[f64]) -> bool {
    weakly_below(u, v) && u.iter().zip(v).any(|(a, b)| a < b)
}

/// Directed distance `max_{a∈A} min_{b∈B} d(a, b)` over raw vectors.
///
/// `b` is sorted on its first coordinate so the inner search can stop once
/// the gap on that axis alone exceeds the best distance found; every
/// supported metric bounds the single-axis gap from above.
pub(crate) fn directed_distance(a: &[Vec<f64>], b: &[Vec<f64>], metric: MetricChoice) -> f64 {
    let mut sorted: Vec<&[f64]> = b.iter().map(Vec::as_slice).collect();
    sorted.sort_by(|x, y| x[0].total_cmp(&y[0]));
    let keys: Vec<f64> = sorted.iter().map(|p| p[0]).collect();

    let mut worst = 0.0_f64;
    for p in a {
        let start = keys.partition_point(|&k| k < p[0]);
        let mut best = f64::INFINITY;
        for q in sorted[start..].iter() {
            if (q[0] - p[0]).abs() > best {
                break;
            }
            best = best.min(metric.distance(p, q));
        }
        for q in sorted[..start].iter().rev() {
            if (p[0] - q[0]).abs() > best {
                break;
            }
            best = best.min(metric.distance(p, q));
        }
        worst = worst.max(best);
    }
    worst
}

/// Hausdorff distance `max(d(A,B), d(B,A))` under the chosen metric.
pub fn hausdorff(a: &FiniteUtilitySet, b: &FiniteUtilitySet, metric: MetricChoice) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let ra: Vec<Vec<f64>> = a.iter().map(|p| p.coords().to_vec()).collect();
    let rb: Vec<Vec<f64>> = b.iter().map(|p| p.coords().to_vec()).collect();
    Ok(directed_distance(&ra, &rb, metric).max(directed_distance(&rb, &ra, metric)))
}

/// One linear constraint `weights · u ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub weights: Vec<f64>,
    pub bound: f64,
}

impl Halfspace {
    pub fn slack(&self, u: &[f64]) -> f64 {
        self.bound - self.weights.iter().zip(u).map(|(w, x)| w * x).sum::<f64>()
    }
}

/// `{u ≥ 0 | every constraint holds}`, required to be bounded and nonempty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHalfspaceSet", into = "RawHalfspaceSet")]
pub struct HalfspaceSet {
    n: usize,
    constraints: Vec<Halfspace>,
    upper: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawHalfspaceSet {
    n: usize,
    constraints: Vec<Halfspace>,
}

impl TryFrom<RawHalfspaceSet> for HalfspaceSet {
    type Error = Error;

    fn try_from(raw: RawHalfspaceSet) -> Result<Self> {
        HalfspaceSet::new(raw.n, raw.constraints)
    }
}

impl From<HalfspaceSet> for RawHalfspaceSet {
    fn from(h: HalfspaceSet) -> Self {
        RawHalfspaceSet {
            n: h.n,
            constraints: h.constraints,
        }
    }
}

impl HalfspaceSet {
    /// Validates the constraints and probes the bounding box.
    ///
    /// An axis is bounded when some constraint with all-nonnegative weights
    /// puts a positive weight on it; mixed-sign constraints only cut the box.
    /// Nonemptiness is probed on a coarse grid over the box.
    pub fn new(n: usize, constraints: Vec<Halfspace>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "dimension must be at least 1"));
        }
        for c in &constraints {
            check_dims(n, c.weights.len())?;
            if !c.bound.is_finite() || c.weights.iter().any(|w| !w.is_finite()) {
                return Err(Error::param("constraints", "weights and bounds must be finite"));
            }
        }
        let mut upper = vec![f64::INFINITY; n];
        for c in constraints.iter().filter(|c| c.weights.iter().all(|&w| w >= 0.0)) {
            for (axis, &w) in c.weights.iter().enumerate() {
                if w > 0.0 {
                    upper[axis] = upper[axis].min(c.bound / w);
                }
            }
        }
        if let Some(axis) = upper.iter().position(|u| !u.is_finite()) {
            return Err(Error::Unbounded { axis });
        }
        if upper.iter().any(|&u| u < -TOLERANCE) {
            return Err(Error::param("constraints", "the feasible set is empty"));
        }
        let upper: Vec<f64> = upper.into_iter().map(|u| u.max(0.0)).collect();
        let set = HalfspaceSet {
            n,
            constraints,
            upper,
        };
        let probe = (4096f64.powf(1.0 / n as f64).floor() as usize).clamp(2, 11);
        if set.grid(probe).next().is_none() {
            return Err(Error::param("constraints", "the feasible set is empty"));
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    /// Upper corner of the bounding box (the lower corner is the origin).
    pub fn bounding_box(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.n
            && u.iter().all(|&x| x >= -TOLERANCE)
            && self.constraints.iter().all(|c| c.slack(u) >= -TOLERANCE)
    }

    /// Feasible grid points, `resolution` per axis, in odometer order.
    fn grid(&self, resolution: usize) -> impl Iterator<Item = Vec<f64>> + '_ {
        let n = self.n;
        let total = resolution.checked_pow(n as u32).unwrap_or(usize::MAX);
        let steps = (resolution - 1) as f64;
        (0..total)
            .map(move |mut idx| {
                let mut u = vec![0.0; n];
                for axis in (0..n).rev() {
                    let i = idx % resolution;
                    idx /= resolution;
                    u[axis] = self.upper[axis] * (i as f64) / steps;
                }
                u
            })
            .filter(move |u| self.contains(u))
    }
}

/// All points of a uniform `resolution`-per-axis grid over the bounding box
/// of `h` that satisfy every constraint.
pub fn discretize(h: &HalfspaceSet, resolution: usize) -> Result<FiniteUtilitySet> {
    if resolution < 2 {
        return Err(Error::param("resolution", "must be at least 2"));
    }
    let points: Vec<UtilityPoint> = h
        .grid(resolution)
        .map(|u| UtilityPoint(u.into_iter().map(|x| x.max(0.0)).collect()))
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyDiscretization { resolution });
    }
    FiniteUtilitySet::new(points)
}

/// The utility simplex with one fast player of capacity `m` and `n - 1`
/// symmetric players.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSmn", into = "RawSmn")]
pub struct SmnFamily {
    m: f64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct RawSmn {
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "N")]
    n: usize,
}

impl TryFrom<RawSmn> for SmnFamily {
    type Error = Error;

    fn try_from(raw: RawSmn) -> Result<Self> {
        SmnFamily::new(raw.m, raw.n)
    }
}

impl From<SmnFamily> for RawSmn {
    fn from(f: SmnFamily) -> Self {
        RawSmn { m: f.m, n: f.n }
    }
}

impl SmnFamily {
    pub fn new(m: f64, n: usize) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::param("M", format!("must be a positive real, got {m}")));
        }
        if n < 2 {
            return Err(Error::param("N", format!("must be at least 2, got {n}")));
        }
        Ok(SmnFamily { m, n })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Slack of `u₁/M + Σ_{k≥2} u_k ≤ 1` at `u`.
    pub fn slack(&self, u: &UtilityPoint) -> Result<f64> {
        check_dims(self.n, u.dim())?;
        Ok(smn_constraint(*self).slack(u.coords()))
    }
}

fn smn_constraint(f: SmnFamily) -> Halfspace {
    let mut weights = vec![1.0; f.n];
    weights[0] = 1.0 / f.m;
    Halfspace { weights, bound: 1.0 }
}

/// `S_{M,N} = {u ≥ 0 | u₁/M + u₂ + … + u_N ≤ 1}`.
pub fn smn_halfspaces(f: SmnFamily) -> HalfspaceSet {
    HalfspaceSet::new(f.n, vec![smn_constraint(f)]).expect("S_{M,N} is bounded and nonempty")
}

/// Coordinatewise natural logarithm of every point.
pub fn log_map(a: &FiniteUtilitySet) -> Result<Vec<Vec<f64>>> {
    a.iter().map(log_point).collect()
}

pub(crate) fn log_point(p: &UtilityPoint) -> Result<Vec<f64>> {
    if !p.is_strictly_positive() {
        return Err(Error::Domain(format!(
            "logarithm needs strictly positive coordinates, got {p:?}"
        )));
    }
    Ok(p.coords().iter().map(|x| x.ln()).collect())
}
