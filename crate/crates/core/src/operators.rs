//! Discrete fractional derivative matrices.
//!
//! All matrices act on node values listed in descending order
//! (`v_n, v_{n-1}, ..., v_0`). Under that ordering the left-sided
//! (backward-difference) operator is an upper strip matrix and the
//! right-sided one is lower.

use crate::coeffs::{gl_coeffs, riesz_centered_coeffs};
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;
use crate::stripmat::{Orientation, StripMatrix};
use crate::structured::{place_diagonals, shift_ne, shift_sw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RieszVariant {
    /// Half-sum of the one-step-shifted left and right Grünwald–Letnikov
    /// patterns.
    HalfSum,
    /// Centred fractional differences (symmetric Toeplitz).
    #[default]
    Centered,
}

impl RieszVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::HalfSum => "halfsum",
            Self::Centered => "centered",
        }
    }
}

/// Fractional derivative in time over `n + 1` layers.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeOperator {
    pub order: f64,
    pub steps: usize,
    pub tau: f64,
    pub delay_steps: usize,
    pub matrix: SparseOperator,
}

/// Symmetric Riesz derivative in space over `m + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceOperator {
    pub order: f64,
    pub intervals: usize,
    pub h: f64,
    pub variant: RieszVariant,
    pub matrix: SparseOperator,
}

fn check_time_grid(n: usize, tau: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "need at least one time step".into(),
        ));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "time step {tau} must be positive"
        )));
    }
    Ok(())
}

fn check_space(beta: f64, m: usize, h: f64) -> Result<()> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(Error::InvalidOrder {
            name: "beta",
            value: beta,
            range: "(1, 2]",
        });
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 spatial intervals, got {m}"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "spatial step {h} must be positive"
        )));
    }
    Ok(())
}

fn backward_strip(alpha: f64, n: usize, tau: f64) -> StripMatrix {
    StripMatrix::new(Orientation::Upper, gl_coeffs(alpha, n), tau.powf(-alpha))
}

/// Left-sided (backward difference) derivative of order `alpha`: the upper
/// strip matrix `τ^{-α} U(ω_0 .. ω_n)`.
pub fn ban(alpha: f64, n: usize, tau: f64) -> Result<TimeOperator> {
    check_time_grid(n, tau)?;
    Ok(TimeOperator {
        order: alpha,
        steps: n,
        tau,
        delay_steps: 0,
        matrix: backward_strip(alpha, n, tau).to_sparse(),
    })
}

/// Right-sided (forward difference) derivative: the transpose of [`ban`].
pub fn fan(alpha: f64, n: usize, tau: f64) -> Result<TimeOperator> {
    check_time_grid(n, tau)?;
    Ok(TimeOperator {
        order: alpha,
        steps: n,
        tau,
        delay_steps: 0,
        matrix: backward_strip(alpha, n, tau).transpose().to_sparse(),
    })
}

/// Backward-difference operator evaluated `k` steps in the past: `ω_j τ^{-γ}`
/// on superdiagonal `j + k`.
///
/// The top `k` rows (layers `t_j` with `j < k`, whose delayed argument falls
/// before `t = 0`) are zero, and stencils that reach past `t = 0` are cut
/// off, which is the zero prehistory.
pub fn delayed_ban(gamma: f64, n: usize, k: usize, tau: f64) -> Result<TimeOperator> {
    check_time_grid(n, tau)?;
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "delay of {k} steps exceeds the {n} available"
        )));
    }
    let w = gl_coeffs(gamma, n - k);
    Ok(TimeOperator {
        order: gamma,
        steps: n,
        tau,
        delay_steps: k,
        matrix: place_diagonals(
            w.values(),
            n + 1,
            k as isize,
            Orientation::Upper,
            tau.powf(-gamma),
        ),
    })
}

/// Symmetric Riesz derivative as the half-sum of the left-sided pattern
/// shifted south-west and the right-sided pattern shifted north-east,
/// scaled by `h^{-β} / 2`.
pub fn ransym(beta: f64, m: usize, h: f64) -> Result<SpaceOperator> {
    check_space(beta, m, h)?;
    let w = gl_coeffs(beta, m + 1);
    let scale = 0.5 * h.powf(-beta);
    let left = shift_sw(&w, m, scale)?;
    let right = shift_ne(&w, m, scale, Orientation::Lower)?;
    Ok(SpaceOperator {
        order: beta,
        intervals: m,
        h,
        variant: RieszVariant::HalfSum,
        matrix: left.add(&right)?,
    })
}

/// Symmetric Riesz derivative from centred fractional differences: the
/// symmetric Toeplitz matrix with first row `h^{-β} (ω_0 .. ω_m)`.
pub fn ranort(beta: f64, m: usize, h: f64) -> Result<SpaceOperator> {
    check_space(beta, m, h)?;
    let w = riesz_centered_coeffs(beta, m)?;
    let scale = h.powf(-beta);
    let upper = place_diagonals(w.values(), m + 1, 0, Orientation::Upper, scale);
    let lower = place_diagonals(&w.values()[1..], m + 1, -1, Orientation::Lower, scale);
    Ok(SpaceOperator {
        order: beta,
        intervals: m,
        h,
        variant: RieszVariant::Centered,
        matrix: upper.add(&lower)?,
    })
}

pub fn riesz(variant: RieszVariant, beta: f64, m: usize, h: f64) -> Result<SpaceOperator> {
    match variant {
        RieszVariant::HalfSum => ransym(beta, m, h),
        RieszVariant::Centered => ranort(beta, m, h),
    }
}
