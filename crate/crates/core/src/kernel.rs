//! Fourier tails of even piecewise-linear kernels and the lower bounds on
//! autoconvolutions built from them.
//!
//! A kernel is 1 on `[-1/4, 1/4]` and linear between the breakpoints
//! `x_t = 1/4 + t/(4T)`, `t = 0..=T`, with `y_0 = 1`. Its Fourier
//! coefficients are `K̂(j) = 2T C(j) / (π² j²)` with
//! `C(j) = Σ_t (y_t - y_{t-1}) (cos 2πj x_t - cos 2πj x_{t-1})`, which has
//! period `4T` in `j`. Tails of `|K̂|^p` then reduce to one period weighted by
//! Hurwitz zeta values.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid kernel: {0}")]
    Invalid(String),
}

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const ZETA_DIRECT_TERMS: usize = 50;

/// `ζ(s, a) = Σ_{k >= 0} (k + a)^{-s}` for `s > 1`, `a > 0`, by
/// Euler-Maclaurin summation after 50 direct terms.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64, KernelError> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(KernelError::Domain(format!("need s > 1, got {s}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(KernelError::Domain(format!("need a > 0, got {a}")));
    }
    let mut direct = 0.0;
    for k in (0..ZETA_DIRECT_TERMS).rev() {
        direct += (k as f64 + a).powf(-s);
    }
    let x = ZETA_DIRECT_TERMS as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // term i: B_{2i}/(2i)! * s(s+1)...(s+2i-2) * x^{-s-2i+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut xpow = x.powf(-s - 1.0);
    let x2 = x * x;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let term = b / fact * rising * xpow;
        tail += term;
        let m = 2.0 * i as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        fact *= (m + 3.0) * (m + 4.0);
        xpow /= x2;
    }
    Ok(direct + tail)
}

/// Pairwise summation; the result does not depend on thread scheduling.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Debug)]
pub struct PiecewiseLinearKernel {
    t: usize,
    y: Vec<f64>,
    c_profile: OnceLock<Vec<f64>>,
}

impl Clone for PiecewiseLinearKernel {
    fn clone(&self) -> Self {
        PiecewiseLinearKernel {
            t: self.t,
            y: self.y.clone(),
            c_profile: OnceLock::new(),
        }
    }
}

impl PartialEq for PiecewiseLinearKernel {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t && self.y == other.y
    }
}

/// `K(x)` on `(1/4, 1/2]` for the arctangent family used with `p = 4/3`.
pub fn arctan_profile(x: f64) -> f64 {
    if x <= 0.25 {
        return 1.0;
    }
    let inner = (1.0 - 2.0 * x) / (4.0 * x - 1.0).sqrt();
    0.6644 + 0.3356 * (2.0 / PI * inner.atan()).powf(1.2015)
}

/// `K(x)` on `(1/4, 1/2]` for the power family used in the two-term bound.
pub fn power_profile(x: f64) -> f64 {
    if x <= 0.25 {
        return 1.0;
    }
    1.0 - (1.0 - (4.0 * (0.5 - x)).powf(1.61707)).powf(0.546335)
}

/// Height of the two-level step kernel that minimizes its `4/3`-norm.
pub fn step_kernel_level() -> f64 {
    let z = hurwitz_zeta(4.0 / 3.0, 1.0).expect("valid zeta arguments");
    let p43 = 2f64.powf(4.0 / 3.0);
    let p83 = 2f64.powf(8.0 / 3.0);
    1.0 - 2.0 * PI.powi(4) / (PI.powi(4) + 24.0 * z.powi(3) * (5.0 + p43 - p83))
}

/// `‖K̂₁‖_{4/3}^{-4}` for the step kernel, in closed form.
pub fn k1_closed_form() -> f64 {
    let z = hurwitz_zeta(4.0 / 3.0, 1.0).expect("valid zeta arguments");
    1.0 + PI.powi(4) / (8.0 * (2f64.powf(4.0 / 3.0) - 1.0).powi(3) * z.powi(3))
}

impl PiecewiseLinearKernel {
    /// `y` holds `y_0..=y_T`; `y_0` must be 1.
    pub fn new(y: Vec<f64>) -> Result<Self, KernelError> {
        if y.len() < 2 {
            return Err(KernelError::Invalid("need T >= 1".into()));
        }
        if y[0] != 1.0 {
            return Err(KernelError::Invalid(format!("y_0 must be 1, got {}", y[0])));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(KernelError::Invalid("values must be finite".into()));
        }
        Ok(PiecewiseLinearKernel {
            t: y.len() - 1,
            y,
            c_profile: OnceLock::new(),
        })
    }

    /// Samples `profile` at the breakpoints.
    pub fn from_fn(t: usize, profile: impl Fn(f64) -> f64) -> Result<Self, KernelError> {
        if t == 0 {
            return Err(KernelError::Invalid("need T >= 1".into()));
        }
        let mut y: Vec<f64> = (0..=t).map(|i| profile(Self::breakpoint_of(t, i))).collect();
        y[0] = 1.0;
        Self::new(y)
    }

    pub fn arctan_family(t: usize) -> Result<Self, KernelError> {
        Self::from_fn(t, arctan_profile)
    }

    pub fn power_family(t: usize) -> Result<Self, KernelError> {
        Self::from_fn(t, power_profile)
    }

    /// Step kernel with a linear drop over the first cell.
    pub fn step_kernel(t: usize) -> Result<Self, KernelError> {
        let c = step_kernel_level();
        Self::from_fn(t, |x| if x <= 0.25 { 1.0 } else { c })
    }

    /// Rows `t,y_t` (an optional header line is skipped); rows must cover
    /// `t = 0..=T` in order.
    pub fn from_csv(text: &str) -> Result<Self, KernelError> {
        let mut y = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (Some(ts), Some(ys)) = (parts.next(), parts.next()) else {
                return Err(KernelError::Invalid(format!("line {}: expected t,y", lineno + 1)));
            };
            let Ok(t) = ts.parse::<usize>() else {
                if y.is_empty() && lineno == 0 {
                    continue;
                }
                return Err(KernelError::Invalid(format!("line {}: bad index '{ts}'", lineno + 1)));
            };
            if t != y.len() {
                return Err(KernelError::Invalid(format!(
                    "line {}: expected t={}, got {t}",
                    lineno + 1,
                    y.len()
                )));
            }
            let v: f64 = ys
                .parse()
                .map_err(|_| KernelError::Invalid(format!("line {}: bad value '{ys}'", lineno + 1)))?;
            y.push(v);
        }
        Self::new(y)
    }

    fn breakpoint_of(t: usize, i: usize) -> f64 {
        0.25 + i as f64 / (4.0 * t as f64)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn breakpoint(&self, i: usize) -> f64 {
        Self::breakpoint_of(self.t, i)
    }

    /// Kernel value at `x`, extended evenly with period 1.
    pub fn eval(&self, x: f64) -> f64 {
        let mut x = x.rem_euclid(1.0);
        if x > 0.5 {
            x = 1.0 - x;
        }
        if x <= 0.25 {
            return 1.0;
        }
        let pos = (x - 0.25) * 4.0 * self.t as f64;
        let i = (pos.floor() as usize).min(self.t - 1);
        let frac = pos - i as f64;
        self.y[i] + (self.y[i + 1] - self.y[i]) * frac
    }

    /// `∫ K` over one period, by the trapezoid areas.
    pub fn khat0(&self) -> f64 {
        let t = self.t as f64;
        let areas: Vec<f64> = self.y.windows(2).map(|w| (w[0] + w[1]) / (8.0 * t)).collect();
        2.0 * (0.25 + pairwise_sum(&areas))
    }

    fn compute_c(&self, j: usize, cos: &[f64], slopes: &[(usize, f64)]) -> f64 {
        let period = 4 * self.t;
        let step = j % period;
        // x_t = (T + t) / (4T), so 2πj x_t indexes the table at j (T + t) mod 4T
        slopes
            .iter()
            .map(|&(t, dy)| {
                let hi = (step * (self.t + t)) % period;
                let lo = (step * (self.t + t - 1)) % period;
                dy * (cos[hi] - cos[lo])
            })
            .sum()
    }

    /// Nonzero `(t, y_t - y_{t-1})`.
    fn slopes(&self) -> Vec<(usize, f64)> {
        (1..=self.t)
            .map(|t| (t, self.y[t] - self.y[t - 1]))
            .filter(|&(_, d)| d != 0.0)
            .collect()
    }

    /// `C(j)` for `j = 0..4T`.
    pub fn c_profile(&self) -> &[f64] {
        self.c_profile.get_or_init(|| {
            let period = 4 * self.t;
            let cos: Vec<f64> = (0..period)
                .map(|m| (2.0 * PI * m as f64 / period as f64).cos())
                .collect();
            let slopes = self.slopes();
            (0..period)
                .into_par_iter()
                .map(|j| self.compute_c(j, &cos, &slopes))
                .collect()
        })
    }

    pub fn c_coeff(&self, j: usize) -> f64 {
        let c = self.c_profile();
        c[j % c.len()]
    }

    pub fn khat(&self, j: i64) -> f64 {
        if j == 0 {
            return self.khat0();
        }
        let j = j.unsigned_abs() as usize;
        2.0 * self.t as f64 * self.c_coeff(j) / (PI * PI * (j as f64).powi(2))
    }

    /// `Σ_{|j| >= n} |K̂(j)|^p`.
    pub fn tail_pow(&self, n: usize, p: f64) -> Result<f64, KernelError> {
        if !(p > 1.0) {
            return Err(KernelError::Domain(format!("need p > 1, got {p}")));
        }
        if n == 0 {
            return Ok(self.khat0().abs().powf(p) + self.tail_pow(1, p)?);
        }
        let period = 4 * self.t;
        let c = self.c_profile();
        let terms: Vec<f64> = (n..n + period)
            .into_par_iter()
            .map(|j| {
                let cj = c[j % period].abs();
                if cj == 0.0 {
                    0.0
                } else {
                    let z = hurwitz_zeta(2.0 * p, j as f64 / period as f64).expect("valid zeta arguments");
                    cj.powf(p) * z
                }
            })
            .collect();
        let scale = 2.0 * self.t as f64 / ((period as f64).powi(2) * PI * PI);
        Ok(2.0 * scale.powf(p) * pairwise_sum(&terms))
    }

    pub fn tail_norm(&self, n: usize, p: f64) -> Result<SpectralTail, KernelError> {
        let value = self.tail_pow(n, p)?.powf(1.0 / p);
        Ok(SpectralTail {
            n,
            p,
            value,
            period: 4 * self.t,
        })
    }
}

/// `(Σ_{|j| >= n} |K̂(j)|^p)^{1/p}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralTail {
    pub n: usize,
    pub p: f64,
    pub value: f64,
    /// Period of the normalized coefficients `C(j)`.
    pub period: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaMix {
    pub alpha: f64,
    /// `‖K̂‖_p^p` of the mixed kernel.
    pub norm_pow: f64,
    /// Resulting lower bound `‖K̂‖_p^{-q}` on `‖f*f‖₂²`.
    pub bound: f64,
}

/// Mixes a kernel with the constant 1 to minimize `‖K̂‖_p`, given
/// `K̂(0)` and the tail `(Σ_{|j|>=1} |K̂(j)|^p)^{1/p}`.
pub fn alpha_mix_optimum(khat0: f64, tail1: f64, p: f64) -> Result<AlphaMix, KernelError> {
    if !(khat0 > 0.0 && khat0 <= 1.0) {
        return Err(KernelError::Domain(format!("need 0 < K̂(0) <= 1, got {khat0}")));
    }
    if !(tail1 > 0.0) {
        return Err(KernelError::Domain(format!("need a positive tail, got {tail1}")));
    }
    if !(p > 1.0 && p < 2.0) {
        return Err(KernelError::Domain(format!("need 1 < p < 2, got {p}")));
    }
    let q = p / (p - 1.0);
    let m = 1.0 - khat0;
    let n = tail1.powf(p);
    let denom = m.powf(q) + n.powf(q / p);
    let alpha = 1.0 - m.powf(q / p) / denom;
    let norm_pow = n * denom.powf(1.0 - p);
    Ok(AlphaMix {
        alpha,
        norm_pow,
        bound: norm_pow.powf(-q / p),
    })
}

/// Inputs of the two-coefficient bound
/// `‖f*f‖₂² >= 1 + 2x⁴ + ((1 - K̂(0) - 2K̂(1)x) / tail₂)⁴`, `x = Re f̂(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub khat0: f64,
    pub khat1: f64,
    /// `(Σ_{|j|>=2} |K̂(j)|^{4/3})^{3/4}`.
    pub tail_m: f64,
    /// `1 - K̂(0)`, the constant part of `M`.
    pub m_const: f64,
    /// `2 K̂(1)`, the slope of `M` in `x`.
    pub m_slope: f64,
    /// Lower bound on `‖f*f‖₂²` from the one-coefficient mix.
    pub phi: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
}

pub const THETA: [f64; 3] = [21.922911, -33.711941, 13.676987];
/// Upper end of the range where the quadratic bound in `‖f*f‖∞` is claimed.
pub const THETA_RANGE_END: f64 = 1.229837;

impl BoundCertificate {
    pub fn from_constants(khat0: f64, khat1: f64, tail_m: f64, phi: f64) -> Self {
        BoundCertificate {
            khat0,
            khat1,
            tail_m,
            m_const: 1.0 - khat0,
            m_slope: 2.0 * khat1,
            phi,
            theta0: THETA[0],
            theta1: THETA[1],
            theta2: THETA[2],
        }
    }

    /// Two-coefficient data from `kernel`; `phi` from the one-coefficient mix
    /// of `mix_kernel`.
    pub fn from_kernels(
        kernel: &PiecewiseLinearKernel,
        mix_kernel: &PiecewiseLinearKernel,
    ) -> Result<Self, KernelError> {
        let p = 4.0 / 3.0;
        let mix = alpha_mix_optimum(mix_kernel.khat0(), mix_kernel.tail_norm(1, p)?.value, p)?;
        Ok(Self::from_constants(
            kernel.khat0(),
            kernel.khat(1),
            kernel.tail_norm(2, p)?.value,
            mix.bound,
        ))
    }

    pub fn m_at(&self, x1: f64) -> f64 {
        self.m_const - self.m_slope * x1
    }

    /// Minimizer of [`quartic_main_bound`] over all real `x1`.
    pub fn quartic_argmin(&self) -> f64 {
        // 2x³ = (b/t)((a - b x)/t)³  =>  x = c (a - b x)
        let (a, b, t) = (self.m_const, self.m_slope, self.tail_m);
        let c = (b / t).cbrt() / (t * 2f64.cbrt());
        c * a / (1.0 + c * b)
    }

    /// `max(1, ...)`-free evaluation of the `‖f*f‖∞` quadratic.
    pub fn theta_quadratic(&self, x: f64) -> f64 {
        self.theta0 + self.theta1 * x + self.theta2 * x * x
    }
}

pub fn quartic_main_bound(cert: &BoundCertificate, x1: f64) -> f64 {
    1.0 + 2.0 * x1.powi(4) + (cert.m_at(x1) / cert.tail_m).powi(4)
}

/// Bound on `|B'|` over `[a, b]`, using that `|x|` and `|M(x)|` peak at an endpoint.
fn quartic_slope_bound(cert: &BoundCertificate, a: f64, b: f64) -> f64 {
    let xmax = a.abs().max(b.abs());
    let mmax = cert.m_at(a).abs().max(cert.m_at(b).abs());
    8.0 * xmax.powi(3) + 4.0 * (cert.m_slope / cert.tail_m) * (mmax / cert.tail_m).powi(3)
}

/// `(x/π) sin(π/x)`, the bound on `|f̂(j)|²` given `‖f*f‖∞ = x`.
pub fn green_coefficient_bound(ffinorm: f64) -> Result<f64, KernelError> {
    if !(ffinorm >= 1.0) || !ffinorm.is_finite() {
        return Err(KernelError::Domain(format!("need ‖f*f‖∞ >= 1, got {ffinorm}")));
    }
    Ok((ffinorm / PI * (PI / ffinorm).sin()).max(0.0))
}

/// Smallest `x >= 1` with `green_coefficient_bound(x) >= target` (the map is
/// increasing on `[1, ∞)` with limit 1).
pub fn green_inverse(target: f64) -> Result<f64, KernelError> {
    if !(0.0..1.0).contains(&target) {
        return Err(KernelError::Domain(format!("need 0 <= target < 1, got {target}")));
    }
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while green_coefficient_bound(hi)? < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if green_coefficient_bound(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub threshold: f64,
    /// Largest admissible `Re f̂(1)` when `‖f*f‖∞ < threshold`.
    pub x1_bound: f64,
    /// Grid minimum of the quartic minus the per-cell slope allowance.
    pub guarded_min: f64,
    pub cells: usize,
    pub certified: bool,
}

/// Checks that `‖f*f‖∞ < threshold` is contradictory: every admissible
/// `x1 ∈ [0, √green(threshold)]` forces `‖f*f‖∞ >= quartic(x1) >= threshold`.
pub fn check_threshold(cert: &BoundCertificate, threshold: f64, grid: f64) -> Result<ThresholdCheck, KernelError> {
    if !(grid > 0.0) {
        return Err(KernelError::Domain(format!("grid step must be positive, got {grid}")));
    }
    let x1_bound = green_coefficient_bound(threshold)?.sqrt();
    let cells = ((x1_bound / grid).ceil() as usize).max(1);
    let h = x1_bound / cells as f64;
    let guarded_min = (0..cells)
        .into_par_iter()
        .map(|i| {
            let a = i as f64 * h;
            let b = if i + 1 == cells { x1_bound } else { (i + 1) as f64 * h };
            let lo = quartic_main_bound(cert, a).min(quartic_main_bound(cert, b));
            lo - quartic_slope_bound(cert, a, b) * (b - a) / 2.0
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(ThresholdCheck {
        threshold,
        x1_bound,
        guarded_min,
        cells,
        certified: guarded_min >= threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub target: f64,
    pub target_check: ThresholdCheck,
    /// Largest threshold certified by bisection (within 1e-9).
    pub best_threshold: f64,
    /// `best_threshold / 2`: the constant in `Δ(ε) >= c ε²`.
    pub delta_constant: f64,
}

pub fn delta_lower_certificate(
    cert: &BoundCertificate,
    grid: f64,
    target: f64,
) -> Result<DeltaCertificate, KernelError> {
    let target_check = check_threshold(cert, target, grid)?;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    if !check_threshold(cert, lo, grid)?.certified {
        lo = 0.0;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if check_threshold(cert, mid.max(1.0), grid)?.certified {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(DeltaCertificate {
        target,
        target_check,
        best_threshold: lo,
        delta_constant: lo / 2.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCheck {
    pub from: f64,
    pub to: f64,
    /// `min (quartic(√green(x)) - θ(x))` over the grid.
    pub min_margin: f64,
    pub holds: bool,
}

/// Grid check that `quartic(√green(x)) > θ₀ + θ₁x + θ₂x²` on `[from, to]`.
pub fn theta_quadratic_check(cert: &BoundCertificate, from: f64, to: f64, steps: usize) -> Result<QuadraticCheck, KernelError> {
    let steps = steps.max(1);
    let mut min_margin = f64::INFINITY;
    for i in 0..=steps {
        let x = from + (to - from) * i as f64 / steps as f64;
        let x1 = green_coefficient_bound(x)?.sqrt();
        min_margin = min_margin.min(quartic_main_bound(cert, x1) - cert.theta_quadratic(x));
    }
    Ok(QuadraticCheck {
        from,
        to,
        min_margin,
        holds: min_margin > 0.0,
    })
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `3 / (2 + cos 2πa)`.
pub fn zeta_ratio_integrand(a: f64) -> f64 {
    3.0 / (2.0 + (2.0 * PI * a).cos())
}

/// `∫₀^{1/2} 3/(2 + cos 2πa) da`, which equals `√3/2`.
pub fn zeta_integral_check() -> f64 {
    adaptive_simpson(&zeta_ratio_integrand, 0.0, 0.5, 1e-13)
}

/// `(ζ(2,a) + ζ(2,1-a))² / (ζ(4,a) + ζ(4,1-a))`, equal to the integrand above.
pub fn zeta_ratio(a: f64) -> Result<f64, KernelError> {
    let s2 = hurwitz_zeta(2.0, a)? + hurwitz_zeta(2.0, 1.0 - a)?;
    let s4 = hurwitz_zeta(4.0, a)? + hurwitz_zeta(4.0, 1.0 - a)?;
    Ok(s2 * s2 / s4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_spot_values() {
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((hurwitz_zeta(2.0, 0.5).unwrap() - PI * PI / 2.0).abs() < 1e-12);
        assert!((hurwitz_zeta(4.0, 1.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!(hurwitz_zeta(1.0, 0.5).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
    }

    #[test]
    fn zeta_shift_identity() {
        for &(s, a) in &[(2.5, 0.3), (8.0 / 3.0, 0.01), (3.7, 0.9)] {
            let lhs = hurwitz_zeta(s, a).unwrap();
            let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0).unwrap();
            assert!(((lhs - rhs) / lhs).abs() < 1e-13, "s={s} a={a}");
        }
    }

    #[test]
    fn c_is_periodic() {
        let k = PiecewiseLinearKernel::power_family(50).unwrap();
        let cos: Vec<f64> = (0..200).map(|m| (2.0 * PI * m as f64 / 200.0).cos()).collect();
        let slopes = k.slopes();
        for j in 0..200 {
            let a = k.compute_c(j, &cos, &slopes);
            let b = k.compute_c(j + 200, &cos, &slopes);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn khat_matches_quadrature() {
        let k = PiecewiseLinearKernel::arctan_family(40).unwrap();
        for j in 0..6i64 {
            let f = |x: f64| k.eval(x) * (2.0 * PI * j as f64 * x).cos();
            // integrate over each linear piece to keep Simpson exact-ish
            let mut direct = adaptive_simpson(&f, -0.25, 0.25, 1e-12);
            for t in 1..=k.t() {
                let (a, b) = (k.breakpoint(t - 1), k.breakpoint(t));
                direct += 2.0 * adaptive_simpson(&f, a, b, 1e-13);
            }
            assert!((direct - k.khat(j)).abs() < 1e-9, "j={j}: {direct} vs {}", k.khat(j));
        }
    }

    #[test]
    fn alpha_mix_identities() {
        let r = alpha_mix_optimum(0.870250799, 0.208784534, 4.0 / 3.0).unwrap();
        let direct = 1.0 + ((1.0 - 0.870250799) / 0.208784534f64).powi(4);
        assert!((r.bound - direct).abs() < 1e-12);
        let d = alpha_mix_optimum(1.0, 0.3, 4.0 / 3.0).unwrap();
        assert!((d.bound - 1.0).abs() < 1e-12);
        assert!(alpha_mix_optimum(0.0, 0.3, 4.0 / 3.0).is_err());
        assert!(alpha_mix_optimum(0.5, 0.3, 2.5).is_err());
    }

    #[test]
    fn green_examples() {
        assert!(green_coefficient_bound(1.0).unwrap().abs() < 1e-15);
        assert!((green_coefficient_bound(2.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(green_coefficient_bound(0.9).is_err());
        let x = green_inverse(0.5).unwrap();
        assert!((green_coefficient_bound(x).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quartic_examples() {
        let cert = BoundCertificate::from_constants(0.631932628, 0.270776892, 0.239175395, 1.14915);
        let at0 = quartic_main_bound(&cert, 0.0);
        assert!((at0 - (1.0 + (0.368067372f64 / 0.239175395).powi(4))).abs() < 1e-12);
        assert!((at0 - 6.609).abs() < 1e-3);
        assert!((quartic_main_bound(&cert, 0.4191447) - 1.1828).abs() < 1e-4);
        assert!((cert.m_at(0.3) - (0.368067372 - 0.541553784 * 0.3)).abs() < 1e-9);
    }

    #[test]
    fn quartic_minimum_is_the_one_coefficient_bound() {
        let cert = BoundCertificate::from_constants(0.631932628, 0.270776892, 0.239175395, 1.14915);
        let x = cert.quartic_argmin();
        let tail1 = (2.0 * cert.khat1.powf(4.0 / 3.0) + cert.tail_m.powf(4.0 / 3.0)).powf(0.75);
        let mix = 1.0 + (cert.m_const / tail1).powi(4);
        assert!((quartic_main_bound(&cert, x) - mix).abs() < 1e-9);
        for dx in [-1e-4, 1e-4] {
            assert!(quartic_main_bound(&cert, x + dx) >= quartic_main_bound(&cert, x));
        }
    }

    #[test]
    fn loose_threshold_is_certified() {
        let cert = BoundCertificate::from_constants(0.631932628, 0.270776892, 0.239175395, 1.14915);
        assert!(check_threshold(&cert, 1.0, 1e-3).unwrap().certified);
        assert!(!check_threshold(&cert, 1.3, 1e-3).unwrap().certified);
    }

    #[test]
    fn zeta_ratio_matches_integrand() {
        for a in [0.1, 0.25, 0.37, 0.5] {
            assert!((zeta_ratio(a).unwrap() - zeta_ratio_integrand(a)).abs() < 1e-11);
        }
        assert!((zeta_ratio_integrand(0.0) - 1.0).abs() < 1e-15);
        assert!((zeta_ratio_integrand(0.25) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn csv_loading() {
        let k = PiecewiseLinearKernel::from_csv("t,y\n0,1\n1,0.8\n2,0.7\n").unwrap();
        assert_eq!(k.t(), 2);
        assert!(PiecewiseLinearKernel::from_csv("0,0.5\n1,0.2\n").is_err());
        assert!(PiecewiseLinearKernel::from_csv("0,1\n2,0.2\n").is_err());
    }
}
