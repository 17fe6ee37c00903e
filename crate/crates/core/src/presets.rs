//! Parameter sets of the five diffusion examples.
//!
//! Examples 1 and 2 are posed for `u` with `u(x,0) = 4x(1-x)`; examples 3-5
//! are posed directly for `y` with zero data and source `f ≡ 8`. All use
//! `[0, 1]`, `χ = 1` and `τ = h²/6`.

use crate::assembly::{DelayTerm, Grid, InitialProfile, ProblemSpec, Source};
use crate::error::{Error, Result};
use crate::operators::RieszVariant;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleConfig {
    pub example: u8,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delay_steps: usize,
    pub h: f64,
    pub tau: f64,
    pub n: usize,
    pub riesz: RieszVariant,
}

/// `τ = h²/6`.
pub fn tau_h2_over_6(h: f64) -> f64 {
    h * h / 6.0
}

impl ExampleConfig {
    pub fn preset(example: u8) -> Result<Self> {
        let fine = 0.05;
        let base = Self {
            example,
            alpha: 1.0,
            beta: 2.0,
            gamma: 1.0,
            delay_steps: 0,
            h: fine,
            tau: tau_h2_over_6(fine),
            n: 48,
            riesz: RieszVariant::Centered,
        };
        let cfg = match example {
            1 => Self {
                h: 0.1,
                tau: tau_h2_over_6(0.1),
                n: 37,
                ..base
            },
            2 => Self { alpha: 0.7, ..base },
            3 => Self { beta: 1.7, ..base },
            4 => Self {
                alpha: 0.7,
                beta: 1.4,
                ..base
            },
            5 => Self {
                alpha: 0.9,
                gamma: 0.8,
                beta: 1.9,
                delay_steps: 6,
                ..base
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "no example {other}; expected 1 to 5"
                )))
            }
        };
        Ok(cfg)
    }

    /// Whether the example is posed for `u` with a nonzero initial profile.
    pub fn has_initial_profile(&self) -> bool {
        self.example <= 2
    }

    pub fn problem(&self) -> ProblemSpec {
        let mut p = ProblemSpec::new(self.alpha, self.beta).with_riesz(self.riesz);
        if self.has_initial_profile() {
            p = p.with_initial(InitialProfile::bump(4.0, 0.0, 1.0));
        } else {
            p = p.with_source(Source::Constant(8.0));
        }
        if self.example == 5 {
            p = p.with_delay(DelayTerm::new(self.gamma, self.delay_steps));
        }
        p
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::from_steps(0.0, 1.0, self.h, self.tau, self.n)
    }
}
