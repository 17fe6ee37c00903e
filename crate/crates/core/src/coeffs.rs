//! Coefficient sequences of fractional differences.
//!
//! Two families are provided: the Grünwald–Letnikov weights
//! `ω_j = (-1)^j C(α, j)`, which define the one-sided backward and forward
//! difference matrices, and the centred weights used for the symmetric Riesz
//! derivative.

use std::f64::consts::PI;
use std::ops::Index;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// A finite coefficient sequence `ω_0 .. ω_N`.
///
/// `order` is the fractional order the sequence was generated for; sequences
/// produced by strip-matrix algebra carry no order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    order: Option<f64>,
    values: Vec<f64>,
}

impl CoeffVector {
    pub fn new(order: f64, values: Vec<f64>) -> Self {
        Self {
            order: Some(order),
            values,
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            order: None,
            values,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_values(vec![0.0; len])
    }

    /// `[1, 0, 0, ...]`, the generating series of the identity.
    pub fn unit(len: usize) -> Self {
        let mut values = vec![0.0; len];
        if let Some(first) = values.first_mut() {
            *first = 1.0;
        }
        Self::from_values(values)
    }

    pub fn order(&self) -> Option<f64> {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficient `ω_j`, or zero past the end of the sequence.
    pub fn get(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or(0.0)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl Index<usize> for CoeffVector {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.values[j]
    }
}

/// Grünwald–Letnikov coefficients `ω_0 .. ω_n` of order `alpha`.
///
/// Uses the recurrence `ω_j = ω_{j-1} (1 - (alpha + 1) / j)`, which stays
/// finite for any `n` and yields exact zeros past `j = alpha` when `alpha`
/// is a non-negative integer.
pub fn gl_coeffs(alpha: f64, n: usize) -> CoeffVector {
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);
    for j in 1..=n {
        let prev = values[j - 1];
        values.push(prev * (1.0 - (alpha + 1.0) / j as f64));
    }
    CoeffVector::new(alpha, values)
}

/// Centred fractional-difference coefficients of the symmetric Riesz derivative,
///
/// `ω_k = (-1)^k Γ(β+1) cos(βπ/2) / (Γ(β/2 - k + 1) Γ(β/2 + k + 1))`, `k = 0 .. n`.
///
/// `ω_0` is evaluated from the gamma function; the rest follow from the ratio
/// `ω_{k+1} / ω_k = (k - β/2) / (k + 1 + β/2)`. The numerator vanishes exactly
/// where `1/Γ(β/2 - k)` has a zero, so pole terms come out as exact zeros and
/// large `k` never overflows.
pub fn riesz_centered_coeffs(beta: f64, n: usize) -> Result<CoeffVector> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(Error::InvalidOrder {
            name: "beta",
            value: beta,
            range: "(1, 2]",
        });
    }
    let half = beta / 2.0;
    let mut values = Vec::with_capacity(n + 1);
    let lead = if beta == 2.0 {
        // Γ(3) cos(π) / Γ(2)², kept exact so the classical stencil is reproduced bit for bit
        -2.0
    } else {
        let g = gamma(half + 1.0);
        gamma(beta + 1.0) * (beta * PI / 2.0).cos() / (g * g)
    };
    values.push(lead);
    for k in 0..n {
        let k = k as f64;
        let prev = values[values.len() - 1];
        values.push(prev * (k - half) / (k + 1.0 + half));
    }
    Ok(CoeffVector::new(beta, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn integer_orders() {
        assert_eq!(gl_coeffs(1.0, 3).values(), &[1.0, -1.0, 0.0, 0.0]);
        assert_eq!(gl_coeffs(2.0, 4).values(), &[1.0, -2.0, 1.0, 0.0, 0.0]);
        assert_eq!(gl_coeffs(0.0, 2).values(), &[1.0, 0.0, 0.0]);
        assert_eq!(gl_coeffs(0.7, 0).values(), &[1.0]);
    }

    #[test]
    fn half_order() {
        assert_close(
            gl_coeffs(0.5, 3).values(),
            &[1.0, -0.5, -0.125, -0.0625],
            1e-15,
        );
    }

    #[test]
    fn centered_second_order_is_classic_stencil() {
        let w = riesz_centered_coeffs(2.0, 6).unwrap();
        assert_close(w.values(), &[-2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-12);
        // pole terms are exact zeros
        assert!(w.values()[2..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn centered_leading_coefficient() {
        // Γ(2.5) cos(3π/4) / Γ(1.75)²
        let w = riesz_centered_coeffs(1.5, 0).unwrap();
        assert_eq!(w.len(), 1);
        let direct = statrs::function::gamma::gamma(2.5) * (0.75 * std::f64::consts::PI).cos()
            / statrs::function::gamma::gamma(1.75).powi(2);
        assert!((w[0] - direct).abs() < 1e-14, "{}", w[0]);
        assert!((w[0] - (-1.1129)).abs() < 1e-4);
    }

    #[test]
    fn centered_rejects_orders_outside_range() {
        for beta in [1.0, 0.5, 2.0001, f64::NAN] {
            assert!(matches!(
                riesz_centered_coeffs(beta, 3),
                Err(Error::InvalidOrder { .. })
            ));
        }
    }

    #[test]
    fn centered_large_index_stays_finite() {
        let w = riesz_centered_coeffs(1.3, 2000).unwrap();
        assert!(w.values().iter().all(|v| v.is_finite()));
        // symmetric-stable kernel: all off-centre weights share one sign
        assert!(w.values()[1..].iter().all(|&v| v > 0.0));
        assert!(w[0] < 0.0);
    }
}
