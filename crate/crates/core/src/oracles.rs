//! Closed-form references for checking the discrete operators and solvers.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::assembly::StackedField;
use crate::error::{Error, Result};

/// A reference value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEval {
    pub x: f64,
    pub t: Option<f64>,
    pub value: f64,
    /// Number of series terms summed, when the value is a truncated series.
    pub series_terms: Option<usize>,
    /// Upper bound on the magnitude of the discarded tail.
    pub tail_bound: f64,
}

/// Symmetric Riesz derivative of order `beta` of `x (1 - x)` on `[0, 1]`,
/// the half-sum of the left and right Riemann–Liouville derivatives
///
/// `[x^{1-β} + (1-x)^{1-β}] / (2Γ(2-β)) - [x^{2-β} + (1-x)^{2-β}] / Γ(3-β)`.
pub fn riesz_closed_form(x: f64, beta: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfDomain { x });
    }
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::InvalidOrder {
            name: "beta",
            value: beta,
            range: "(1, 2)",
        });
    }
    let y = 1.0 - x;
    let singular = (x.powf(1.0 - beta) + y.powf(1.0 - beta)) / (2.0 * gamma(2.0 - beta));
    let regular = (x.powf(2.0 - beta) + y.powf(2.0 - beta)) / gamma(3.0 - beta);
    Ok(singular - regular)
}

/// Separation-of-variables solution of `u_t = u_xx` on `[0, 1]` with zero
/// boundary values and `u(x, 0) = 4x(1-x)`:
///
/// `Σ_{k odd} 32 / (k³π³) sin(kπx) exp(-k²π²t)`, summed over the first
/// `terms` odd wavenumbers.
pub fn heat_series(x: f64, t: f64, terms: usize) -> f64 {
    heat_series_eval(x, t, terms).value
}

pub fn heat_series_eval(x: f64, t: f64, terms: usize) -> OracleEval {
    let pi3 = PI * PI * PI;
    let value = (0..terms)
        .map(|i| {
            let k = (2 * i + 1) as f64;
            32.0 / (k * k * k * pi3) * (k * PI * x).sin() * (-k * k * PI * PI * t).exp()
        })
        .sum();
    // first dropped odd wavenumber K; Σ_{k>=K, odd} 1/k³ <= 1/K³ + 1/(4K²)
    let big_k = (2 * terms + 1) as f64;
    let tail_bound = 32.0 / pi3
        * (-big_k * big_k * PI * PI * t.max(0.0)).exp()
        * (1.0 / big_k.powi(3) + 1.0 / (4.0 * big_k * big_k));
    OracleEval {
        x,
        t: Some(t),
        value,
        series_terms: Some(terms),
        tail_bound,
    }
}

/// Largest deviation of the final time layer of `field` from `4x(1-x)`
/// over the interior spatial nodes.
pub fn steady_state_check(field: &StackedField) -> f64 {
    let grid = field.grid();
    let n = grid.n();
    (1..grid.m())
        .map(|i| {
            let x = grid.x(i);
            (field.value(i, n) - 4.0 * x * (1.0 - x)).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{Grid, StackedField};

    #[test]
    fn riesz_closed_form_midpoint() {
        let v = riesz_closed_form(0.5, 1.5).unwrap();
        // 2^{1/2}/Γ(1/2) - 2^{1/2}/Γ(3/2) = -√(2/π)
        assert!((v + (2.0 / PI).sqrt()).abs() < 1e-12, "{v}");
        assert!((v + 0.797885).abs() < 1e-6);
    }

    #[test]
    fn riesz_closed_form_symmetry_and_limit() {
        for &x in &[0.05, 0.2, 0.37, 0.61] {
            for &b in &[1.1, 1.5, 1.9] {
                let l = riesz_closed_form(x, b).unwrap();
                let r = riesz_closed_form(1.0 - x, b).unwrap();
                assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
            }
        }
        for &x in &[0.2, 0.37, 0.5, 0.61] {
            assert!((riesz_closed_form(x, 1.999).unwrap() + 2.0).abs() < 0.01);
        }
    }

    #[test]
    fn riesz_closed_form_domain() {
        assert_eq!(
            riesz_closed_form(0.0, 1.5),
            Err(Error::OutOfDomain { x: 0.0 })
        );
        assert!(riesz_closed_form(1.0, 1.5).is_err());
        assert!(riesz_closed_form(0.5, 2.0).is_err());
        assert!(riesz_closed_form(0.5, 1.0).is_err());
    }

    #[test]
    fn heat_series_initial_and_boundary() {
        assert!((heat_series(0.5, 0.0, 200) - 1.0).abs() < 1e-6);
        for t in [0.0, 0.01, 0.3] {
            assert!(heat_series(0.0, t, 200).abs() < 1e-15);
            assert!(heat_series(1.0, t, 200).abs() < 1e-12);
        }
        let t = 37.0 * 0.01 / 6.0;
        assert!((heat_series(0.5, t, 200) - 0.561).abs() < 1e-3);
    }

    #[test]
    fn heat_series_tail_bound() {
        let e = heat_series_eval(0.3, 1e-4, 200);
        assert_eq!(e.series_terms, Some(200));
        assert!(e.tail_bound < 1e-12);
        let e0 = heat_series_eval(0.3, 0.0, 200);
        assert!(e0.tail_bound < 2e-6);
    }

    #[test]
    fn heat_series_satisfies_heat_equation() {
        // centred differences of the series in x and t
        let (x, t) = (0.3, 0.05);
        for d in [1e-2, 5e-3] {
            let u = |x: f64, t: f64| heat_series(x, t, 200);
            let uxx = (u(x + d, t) - 2.0 * u(x, t) + u(x - d, t)) / (d * d);
            let ut = (u(x, t + d) - u(x, t - d)) / (2.0 * d);
            assert!((uxx - ut).abs() < 200.0 * d * d, "d={d}: {uxx} vs {ut}");
        }
    }

    #[test]
    fn steady_state_extremes() {
        let g = Grid::new(0.0, 1.0, 1.0, 10, 4).unwrap();
        let exact = StackedField::sample(&g, |x, _| 4.0 * x * (1.0 - x));
        assert!(steady_state_check(&exact) < 1e-15);
        let zero = StackedField::sample(&g, |_, _| 0.0);
        assert!((steady_state_check(&zero) - 1.0).abs() < 1e-15);
    }
}
