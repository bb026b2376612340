//! Closed-form bound evaluations: `ρ` upper and lower constants, the
//! medium-`ε` autoconvolution bound, and the ubiquity constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kernel::{green_coefficient_bound, green_inverse, KernelError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoBounds {
    pub g: u64,
    /// Upper bound on `limsup R(g,n)² / (gn)`, after taking the max with a known exact value.
    pub upper_sq: Option<f64>,
    /// The four-case formula before any adjustment.
    pub upper_sq_formula: Option<f64>,
    /// `(7/4)(1 - 1/g)`, the older upper bound on the same quantity.
    pub green_upper_sq: Option<f64>,
    /// Exact value of the squared constant, where known.
    pub known_sq: Option<f64>,
    /// The formula undercuts a known exact value.
    pub below_known: bool,
    /// Lower bound on `liminf R(g,n) / √(gn)`.
    pub lower: Option<f64>,
}

impl RhoBounds {
    fn empty(g: u64) -> Self {
        RhoBounds {
            g,
            upper_sq: None,
            upper_sq_formula: None,
            green_upper_sq: None,
            known_sq: None,
            below_known: false,
            lower: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("invalid parameter: {0}")]
    BadParams(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn rho_upper_formula(g: u64) -> f64 {
    let x = g as f64;
    match (g.is_multiple_of(2), g) {
        (true, g) if g <= 8 => 1.74043 - 1.00483 / x,
        (true, _) => 1.58337 - 0.026335 / x + (0.011572 - 0.083397 / x + 0.00069356 / (x * x)).sqrt(),
        (false, g) if g <= 23 => 1.74043 - 4.75492 / x,
        (false, _) => 1.58337 - 0.071949 / x + (0.011572 - 0.22784 / x + 0.0051768 / (x * x)).sqrt(),
    }
}

fn known_rho_sq(g: u64) -> Option<f64> {
    match g {
        2 => Some(0.5),
        3 => Some(1.0 / 3.0),
        _ => None,
    }
}

pub fn rho_upper(g: u64) -> Result<RhoBounds, BoundsError> {
    if g < 2 {
        return Err(BoundsError::BadParams(format!("need g >= 2, got {g}")));
    }
    let formula = rho_upper_formula(g);
    let known = known_rho_sq(g);
    let below_known = known.is_some_and(|k| formula < k);
    let upper = known.map_or(formula, |k| formula.max(k));
    Ok(RhoBounds {
        upper_sq: Some(upper),
        upper_sq_formula: Some(formula),
        green_upper_sq: Some(1.75 * (1.0 - 1.0 / g as f64)),
        known_sq: known,
        below_known,
        ..RhoBounds::empty(g)
    })
}

fn rho_lower_value(g: u64) -> f64 {
    let s = f64::sqrt;
    match g {
        4 | 8 => 2.0 / s(7.0),
        6 => 2.0 * s(2.0) / s(15.0),
        10 => 7.0 / (3.0 * s(10.0)),
        12 => s(3.0) / s(5.0),
        14 => 11.0 / s(210.0),
        16 => 17.0 / (4.0 * s(30.0)),
        18 => 4.0 / (3.0 * s(3.0)),
        20 => 2.0 * s(5.0) / s(33.0),
        22 => 18.0 / (5.0 * s(22.0)),
        _ => {
            let h = g / 2;
            let (a, b) = (h / 3, h / 6);
            let num = (h + 2 * a + b) as f64;
            let den = (6 * h * h - 2 * h * a + 2 * h) as f64;
            num / den.sqrt()
        }
    }
}

/// Lower bound for even `g >= 4`.
pub fn rho_lower(g: u64) -> Result<RhoBounds, BoundsError> {
    if g < 4 || !g.is_multiple_of(2) {
        return Err(BoundsError::BadParams(format!("need even g >= 4, got {g}")));
    }
    Ok(RhoBounds {
        lower: Some(rho_lower_value(g)),
        ..RhoBounds::empty(g)
    })
}

/// Both bounds where they apply.
pub fn rho_bounds(g: u64) -> Result<RhoBounds, BoundsError> {
    let mut b = rho_upper(g)?;
    if g >= 4 && g.is_multiple_of(2) {
        b.lower = rho_lower(g)?.lower;
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaHalf {
    pub epsilon: f64,
    /// Lower bound on `max(Re f̂(1), -Re f̂(2))`.
    pub coefficient_lower: f64,
    /// Resulting lower bound on `‖f*f‖∞`.
    pub ffi_lower: f64,
    /// `1.1092 + 0.176158ε`.
    pub linear_form: f64,
    /// `ffi_lower · ε² / 2`.
    pub delta_lower: f64,
}

/// Lower bounds on `‖f*f‖∞` and `Δ(ε)` for `3/8 < ε < 5/8`.
pub fn delta_half_lower(epsilon: f64) -> Result<DeltaHalf, BoundsError> {
    if !(epsilon > 0.375 && epsilon < 0.625) {
        return Err(BoundsError::Kernel(KernelError::Domain(format!(
            "need 3/8 < ε < 5/8, got {epsilon}"
        ))));
    }
    let q = PI * epsilon / 4.0;
    let root = (3.0 + 4.0 * (2.0 * q).cos() + 2.0 * (4.0 * q).cos() - (2.0 * q).sin()).sqrt();
    let f = (3.0 * q.cos() + q.sin() - root) / (PI * epsilon * (q.cos() + q.sin()));
    let ffi = green_inverse(f * f)?;
    debug_assert!(green_coefficient_bound(ffi)? >= f * f - 1e-12);
    Ok(DeltaHalf {
        epsilon,
        coefficient_lower: f,
        ffi_lower: ffi,
        linear_form: 1.1092 + 0.176158 * epsilon,
        delta_lower: ffi * epsilon * epsilon / 2.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UbiquityBound {
    pub kappa_complicated: f64,
    pub kappa_simple: f64,
}

/// Lower bound on `‖f*f‖₂²` from the one-coefficient kernel bound `‖K̂‖_{4/3} < 0.9658413`.
pub fn autoconvolution_two_norm_constant() -> f64 {
    0.9658413f64.powi(-4)
}

/// Both lower bounds on the density constant; callers take the max with 0.
pub fn ubiquity_bound(gamma_ratio: f64, alpha: f64) -> Result<UbiquityBound, BoundsError> {
    ubiquity_bound_with(autoconvolution_two_norm_constant(), gamma_ratio, alpha)
}

/// As [`ubiquity_bound`], with `two_norm` any valid lower bound on `‖f*f‖₂²`.
pub fn ubiquity_bound_with(two_norm: f64, gamma_ratio: f64, alpha: f64) -> Result<UbiquityBound, BoundsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BoundsError::BadParams(format!("need 0 < α < 1, got {alpha}")));
    }
    if !(gamma_ratio > 0.0) {
        return Err(BoundsError::BadParams(format!("need γ > 0, got {gamma_ratio}")));
    }
    let g2 = gamma_ratio * gamma_ratio;
    Ok(UbiquityBound {
        kappa_complicated: g2 * (two_norm / 2.0 * g2 - alpha) / ((1.0 - alpha) * (1.0 + 2.0 * alpha)),
        kappa_simple: (g2 - 2.0 * alpha) / (2.0 - 2.0 * alpha),
    })
}
