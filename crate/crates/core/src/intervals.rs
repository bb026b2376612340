//! Finite unions of half-open intervals in `[0, 1)` and their largest
//! symmetric subsets.
//!
//! For `E = ∪ [a_i, b_i)` the measure of `E ∩ (t - E)` is
//! `Σ_i Σ_j max(0, min(t - a_i, b_j) - max(t - b_i, a_j))`, piecewise linear
//! in `t` with breakpoints at sums of two endpoints. So the largest symmetric
//! subset is found by evaluating at those sums only. On the circle the
//! reflection `x -> t - x` is taken mod 1, which adds the shift `t + 1`.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::sets::IntSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("invalid interval set: {0}")]
    Invalid(String),
    #[error("geometry mismatch")]
    GeometryMismatch,
    #[error("bad parameters: {0}")]
    BadParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Line,
    Circle,
}

impl Geometry {
    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::Line => "line",
            Geometry::Circle => "circle",
        }
    }
}

/// Number type for endpoints. Implemented for `f64` and [`BigRational`].
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn zero() -> Self;
    fn one() -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn max_of<T: Scalar>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

fn min_of<T: Scalar>(a: T, b: T) -> T {
    if a <= b {
        a
    } else {
        b
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<T> {
    geometry: Geometry,
    intervals: Vec<(T, T)>,
}

pub type ExactIntervalSet = IntervalSet<BigRational>;
pub type FloatIntervalSet = IntervalSet<f64>;

impl<T: Scalar> IntervalSet<T> {
    /// Intervals must be sorted, nonempty, pairwise disjoint and inside
    /// `[0, 1]`. Touching intervals are merged.
    pub fn new(geometry: Geometry, intervals: Vec<(T, T)>) -> Result<Self, IntervalError> {
        let mut merged: Vec<(T, T)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            if !(a >= T::zero() && a < b && b <= T::one()) {
                return Err(IntervalError::Invalid(format!(
                    "need 0 <= a < b <= 1, got [{a:?}, {b:?})"
                )));
            }
            if let Some(last) = merged.last_mut() {
                if a < last.1 {
                    return Err(IntervalError::Invalid(
                        "intervals must be sorted and disjoint".into(),
                    ));
                }
                if a == last.1 {
                    last.1 = b;
                    continue;
                }
            }
            merged.push((a, b));
        }
        Ok(IntervalSet {
            geometry,
            intervals: merged,
        })
    }

    /// Sorts and unions arbitrary (possibly overlapping) intervals.
    pub fn from_unsorted(
        geometry: Geometry,
        mut intervals: Vec<(T, T)>,
    ) -> Result<Self, IntervalError> {
        intervals.retain(|(a, b)| a < b);
        intervals.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("endpoints are comparable"));
        let mut out: Vec<(T, T)> = Vec::new();
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        Self::new(geometry, out)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, (a, b)| acc + (b.clone() - a.clone()))
    }

    /// `{t x : x in E}` for `0 < t <= 1`.
    pub fn scale(&self, t: &T) -> Result<Self, IntervalError> {
        if !(*t > T::zero() && *t <= T::one()) {
            return Err(IntervalError::BadParams("scale must lie in (0, 1]".into()));
        }
        Self::new(
            self.geometry,
            self.intervals
                .iter()
                .map(|(a, b)| (a.clone() * t.clone(), b.clone() * t.clone()))
                .collect(),
        )
    }

    fn endpoints(&self) -> Vec<T> {
        self.intervals
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    fn overlap_at(&self, t: &T) -> T {
        let mut total = T::zero();
        for (ai, bi) in &self.intervals {
            let lo_shift = t.clone() - bi.clone();
            let hi_shift = t.clone() - ai.clone();
            for (aj, bj) in &self.intervals {
                let hi = min_of(hi_shift.clone(), bj.clone());
                let lo = max_of(lo_shift.clone(), aj.clone());
                if hi > lo {
                    total = total + (hi - lo);
                }
            }
        }
        total
    }

    /// Measure of the part of `E` symmetric under `x -> t - x` (taken mod 1
    /// on the circle). The center of symmetry is `t / 2`.
    pub fn symmetric_measure_at(&self, t: &T) -> T {
        match self.geometry {
            Geometry::Line => self.overlap_at(t),
            Geometry::Circle => {
                let one = T::one();
                let mut s = t.clone();
                while s >= one {
                    s = s - one.clone();
                }
                while s < T::zero() {
                    s = s + one.clone();
                }
                self.overlap_at(&s) + self.overlap_at(&(s + one))
            }
        }
    }

    /// Measure of `E ∩ (2c - E)`.
    pub fn symmetric_measure_about(&self, c: &T) -> T {
        self.symmetric_measure_at(&(c.clone() + c.clone()))
    }

    /// Sorted, deduplicated reflection parameters where the profile can bend.
    fn candidate_shifts(&self) -> Vec<T> {
        let ends = self.endpoints();
        let one = T::one();
        let mut out = Vec::with_capacity(ends.len() * (ends.len() + 1) / 2);
        for i in 0..ends.len() {
            for j in i..ends.len() {
                let mut t = ends[i].clone() + ends[j].clone();
                if self.geometry == Geometry::Circle && t >= one {
                    t = t - one.clone();
                }
                out.push(t);
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).expect("endpoints are comparable"));
        out.dedup_by(|x, y| x == y);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSubsetResult<T> {
    pub d_value: T,
    pub center: T,
    /// `(c, λ(E ∩ (2c - E)))` at every breakpoint, sorted by `c`; linear in
    /// between.
    pub per_center_function: Option<Vec<(T, T)>>,
}

fn best_of<T: Scalar>(set: &IntervalSet<T>, profile: bool) -> SymmetricSubsetResult<T> {
    let two = T::ratio(2, 1);
    let mut best: Option<(T, T)> = None;
    let mut points = Vec::new();
    for t in set.candidate_shifts() {
        let v = set.symmetric_measure_at(&t);
        let c = t / two.clone();
        // candidates come in increasing order, so strict > keeps the smaller center
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v.clone(), c.clone()));
        }
        if profile {
            points.push((c, v));
        }
    }
    let (d_value, center) = best.unwrap_or((T::zero(), T::zero()));
    SymmetricSubsetResult {
        d_value,
        center,
        per_center_function: profile.then_some(points),
    }
}

/// Largest symmetric subset of `E`, evaluated at all endpoint midpoints.
pub fn largest_symmetric_subset<T: Scalar>(set: &IntervalSet<T>) -> SymmetricSubsetResult<T> {
    best_of(set, false)
}

/// As [`largest_symmetric_subset`], also returning the breakpoints of
/// `c -> λ(E ∩ (2c - E))`.
pub fn symmetric_profile<T: Scalar>(set: &IntervalSet<T>) -> SymmetricSubsetResult<T> {
    best_of(set, true)
}

/// `c,value` rows of the symmetric-measure profile at its breakpoints.
pub fn profile_csv<T: Scalar>(set: &IntervalSet<T>) -> String {
    let res = symmetric_profile(set);
    let mut out = String::from("c,value\n");
    for (c, v) in res.per_center_function.unwrap_or_default() {
        out.push_str(&format!("{},{}\n", c.to_f64(), v.to_f64()));
    }
    out
}

/// Maximum of the symmetric measure over the centers `i / grid` on the line
/// (or the reflections `2i / grid mod 1` on the circle), `i = 0..=grid`.
pub fn grid_symmetric_max(set: &IntervalSet<f64>, grid: u32) -> f64 {
    (0..=grid)
        .map(|i| set.symmetric_measure_about(&(i as f64 / grid as f64)))
        .fold(0.0, f64::max)
}

/// `A(S) = ∪_{s in S} [(s-1)/n, s/n)`.
pub fn a_of_s(set: &IntSet, n: u64) -> Result<ExactIntervalSet, IntervalError> {
    if set.modulus().is_some() {
        return Err(IntervalError::BadParams("S must be an integer set".into()));
    }
    if n == 0 || set.min().is_some_and(|m| m == 0) || set.max().is_some_and(|m| m > n) {
        return Err(IntervalError::BadParams(format!("S must lie in 1..={n}")));
    }
    let n = n as i64;
    let blocks = set
        .elements()
        .iter()
        .map(|&s| (BigRational::ratio(s as i64 - 1, n), BigRational::ratio(s as i64, n)))
        .collect();
    IntervalSet::new(Geometry::Line, blocks)
}

/// `λ((S \ T) ∪ (T \ S))` by a sweep over the merged endpoints.
pub fn symmetric_difference_measure<T: Scalar>(
    s: &IntervalSet<T>,
    t: &IntervalSet<T>,
) -> Result<T, IntervalError> {
    if s.geometry != t.geometry {
        return Err(IntervalError::GeometryMismatch);
    }
    // (position, +1/-1 for S, +1/-1 for T)
    let mut events: Vec<(T, i32, i32)> = Vec::new();
    for (a, b) in &s.intervals {
        events.push((a.clone(), 1, 0));
        events.push((b.clone(), -1, 0));
    }
    for (a, b) in &t.intervals {
        events.push((a.clone(), 0, 1));
        events.push((b.clone(), 0, -1));
    }
    events.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("endpoints are comparable"));
    let (mut in_s, mut in_t) = (0, 0);
    let mut total = T::zero();
    let mut prev: Option<T> = None;
    for (x, ds, dt) in events {
        if let Some(p) = prev {
            if (in_s > 0) != (in_t > 0) {
                total = total + (x.clone() - p);
            }
        }
        in_s += ds;
        in_t += dt;
        prev = Some(x);
    }
    Ok(total)
}

impl IntervalSet<f64> {
    pub fn to_exact(&self) -> Option<ExactIntervalSet> {
        let conv = |x: f64| BigRational::from_float(x);
        let intervals = self
            .intervals
            .iter()
            .map(|(a, b)| Some((conv(*a)?, conv(*b)?)))
            .collect::<Option<Vec<_>>>()?;
        IntervalSet::new(self.geometry, intervals).ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "geometry": self.geometry.as_str(),
            "intervals": self.intervals.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        })
    }
}

impl ExactIntervalSet {
    pub fn to_float(&self) -> FloatIntervalSet {
        IntervalSet {
            geometry: self.geometry,
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| (Scalar::to_f64(a), Scalar::to_f64(b)))
                .collect(),
        }
    }

    /// `{"geometry": ..., "intervals": [[num, den, num, den], ...]}`.
    pub fn to_json(&self) -> Value {
        let part = |x: &BigRational| -> Value {
            match (x.numer().to_i64(), x.denom().to_i64()) {
                (Some(n), Some(d)) => json!([n, d]),
                _ => json!([x.numer().to_string(), x.denom().to_string()]),
            }
        };
        let rows: Vec<Value> = self
            .intervals
            .iter()
            .map(|(a, b)| {
                let (pa, pb) = (part(a), part(b));
                json!([pa[0], pa[1], pb[0], pb[1]])
            })
            .collect();
        json!({ "geometry": self.geometry.as_str(), "intervals": rows })
    }
}

fn parse_geometry(v: &Value) -> Result<Geometry, IntervalError> {
    match v.get("geometry").and_then(Value::as_str) {
        Some("line") | None => Ok(Geometry::Line),
        Some("circle") => Ok(Geometry::Circle),
        Some(other) => Err(IntervalError::Invalid(format!("unknown geometry '{other}'"))),
    }
}

fn parse_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn parse_endpoint(v: &Value) -> Option<BigRational> {
    match v {
        Value::String(s) => s.trim().parse().ok(),
        _ => v.as_f64().and_then(BigRational::from_float),
    }
}

/// Reads either the rational form `[num, den, num, den]` or `[a, b]` for each
/// interval, where endpoints are numbers (converted exactly) or strings `"p/q"`.
pub fn interval_set_from_json(v: &Value) -> Result<ExactIntervalSet, IntervalError> {
    let geometry = parse_geometry(v)?;
    let rows = v
        .get("intervals")
        .and_then(Value::as_array)
        .ok_or_else(|| IntervalError::Invalid("missing 'intervals' array".into()))?;
    let mut intervals = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| IntervalError::Invalid("interval rows must be arrays".into()))?;
        let bad = || IntervalError::Invalid(format!("bad interval row {row:?}"));
        let pair = match row.len() {
            4 => {
                let nums: Vec<BigInt> = row.iter().map(parse_bigint).collect::<Option<_>>().ok_or_else(bad)?;
                if nums[1].is_zero() || nums[3].is_zero() {
                    return Err(bad());
                }
                (
                    BigRational::new(nums[0].clone(), nums[1].clone()),
                    BigRational::new(nums[2].clone(), nums[3].clone()),
                )
            }
            2 => {
                let a = parse_endpoint(&row[0]).ok_or_else(bad)?;
                let b = parse_endpoint(&row[1]).ok_or_else(bad)?;
                (a, b)
            }
            _ => return Err(bad()),
        };
        intervals.push(pair);
    }
    IntervalSet::new(geometry, intervals)
}

/// Trivial lower bounds on the largest symmetric subset.
pub fn trivial_lower_bounds<T: Scalar>(set: &IntervalSet<T>) -> (T, T) {
    let m = set.measure();
    let lin = m.clone() + m.clone() - T::one();
    let quad = match set.geometry {
        Geometry::Line => m.clone() * m / T::ratio(2, 1),
        Geometry::Circle => m.clone() * m,
    };
    (lin, quad)
}

#[derive(Clone, Debug)]
pub struct DeltaKResult {
    pub value: f64,
    pub witness: FloatIntervalSet,
    pub restarts: usize,
}

/// Options for [`delta_k_upper`].
#[derive(Clone, Copy, Debug)]
pub struct DeltaKOptions {
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for DeltaKOptions {
    fn default() -> Self {
        DeltaKOptions {
            restarts: 200,
            seed: 0,
            initial_step: 0.25,
            min_step: 1e-7,
        }
    }
}

/// `k` lengths followed by `k + 1` gaps, rescaled to total `eps` and `1 - eps`.
fn layout(params: &[f64], k: usize, eps: f64) -> Option<FloatIntervalSet> {
    let (lens, gaps) = params.split_at(k);
    let ls: f64 = lens.iter().sum();
    let gs: f64 = gaps.iter().sum();
    if ls <= 0.0 || lens.iter().any(|&l| l <= 0.0) {
        return None;
    }
    let mut x = 0.0;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        x += if gs > 0.0 { gaps[i] / gs * (1.0 - eps) } else { 0.0 };
        let len = lens[i] / ls * eps;
        out.push((x, (x + len).min(1.0)));
        x += len;
    }
    // rounding can leave touching or reversed neighbours; union them
    IntervalSet::from_unsorted(Geometry::Line, out).ok()
}

fn objective(params: &[f64], k: usize, eps: f64) -> f64 {
    match layout(params, k, eps) {
        Some(set) => largest_symmetric_subset(&set).d_value,
        None => f64::INFINITY,
    }
}

fn pattern_search(start: Vec<f64>, k: usize, eps: f64, opts: &DeltaKOptions) -> (f64, Vec<f64>) {
    let mut x = start;
    let mut fx = objective(&x, k, eps);
    let mut step = opts.initial_step;
    while step > opts.min_step {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] = (y[i] + dir * step).max(if i < k { 1e-12 } else { 0.0 });
                let fy = objective(&y, k, eps);
                if fy < fx - 1e-15 {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (fx, x)
}

/// Upper bound on the smallest largest-symmetric-subset measure among unions
/// of `k` intervals of total measure `eps`, by multi-start pattern search.
pub fn delta_k_upper(k: usize, eps: f64, opts: &DeltaKOptions) -> Result<DeltaKResult, IntervalError> {
    if k == 0 || !(eps > 0.0 && eps <= 1.0) {
        return Err(IntervalError::BadParams(format!(
            "need k >= 1 and eps in (0, 1], got k={k}, eps={eps}"
        )));
    }
    let restarts = opts.restarts.max(1);
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let start: Vec<f64> = (0..2 * k + 1).map(|_| rng.gen_range(0.05..1.0)).collect();
            pattern_search(start, k, eps, opts)
        })
        .collect();
    let (value, params) = runs
        .into_iter()
        .fold(None, |best: Option<(f64, Vec<f64>)>, run| match best {
            Some(b) if b.0 <= run.0 => Some(b),
            _ => Some(run),
        })
        .expect("at least one restart");
    let witness = layout(&params, k, eps).expect("finite objective has a layout");
    Ok(DeltaKResult {
        value,
        witness,
        restarts,
    })
}

/// Exact check that two rationals agree; helper for callers that compare
/// [`ExactIntervalSet`] results.
pub fn exact_eq(a: &BigRational, b: &BigRational) -> bool {
    (a - b).abs().is_zero()
}
