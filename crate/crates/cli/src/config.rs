use fracmat::{
    DelayTerm, ExampleConfig, Grid, InitialProfile, ProblemSpec, RieszVariant, SolverPath, Source,
};
use serde::Serialize;

use crate::args::{RieszArg, RunArgs, SolverArg, TauRule};
use crate::CliError;

/// Fully resolved run parameters, echoed into JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Preset number, or `None` for a custom problem.
    pub example: Option<u8>,
    pub alpha: f64,
    pub beta: f64,
    pub chi: f64,
    /// Delayed derivative order and delay in steps.
    pub gamma: Option<f64>,
    pub k: Option<usize>,
    pub h: f64,
    pub m: usize,
    pub tau: f64,
    pub tau_rule: Option<&'static str>,
    pub n: usize,
    pub riesz: &'static str,
    pub solver: &'static str,
    pub source: f64,
    pub u0_scale: f64,
}

fn riesz_variant(arg: RieszArg) -> RieszVariant {
    match arg {
        RieszArg::Centered => RieszVariant::Centered,
        RieszArg::Halfsum => RieszVariant::HalfSum,
    }
}

fn solver_path(arg: SolverArg) -> SolverPath {
    match arg {
        SolverArg::Global => SolverPath::Global,
        SolverArg::Marching => SolverPath::Marching,
    }
}

fn spatial_step(args: &RunArgs, default: Option<f64>) -> Result<(f64, usize), CliError> {
    let h = match (args.h, args.m) {
        (Some(h), None) => h,
        (None, Some(m)) => {
            if m == 0 {
                return Err(CliError::Usage("--m must be positive".into()));
            }
            1.0 / m as f64
        }
        (None, None) => {
            default.ok_or_else(|| CliError::Usage("one of --h or --m is required".into()))?
        }
        (Some(_), Some(_)) => return Err(CliError::Usage("give only one of --h and --m".into())),
    };
    if !(h > 0.0 && h <= 1.0) {
        return Err(CliError::Usage(format!("spatial step {h} outside (0, 1]")));
    }
    let ratio = 1.0 / h;
    let m = ratio.round();
    if (ratio - m).abs() > 1e-9 * ratio {
        return Err(CliError::Usage(format!(
            "spatial step {h} does not divide [0, 1]"
        )));
    }
    Ok((h, m as usize))
}

fn time_step(
    args: &RunArgs,
    h: f64,
    preset_rule: bool,
) -> Result<(f64, Option<&'static str>), CliError> {
    match (args.tau, args.tau_rule) {
        (Some(tau), None) => {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(CliError::Usage(format!("time step {tau} must be positive")));
            }
            Ok((tau, None))
        }
        (None, Some(TauRule::H2Over6)) => Ok((fracmat::tau_h2_over_6(h), Some("h2over6"))),
        (None, None) if preset_rule => Ok((fracmat::tau_h2_over_6(h), Some("h2over6"))),
        (None, None) => Err(CliError::Usage(
            "one of --tau or --tau-rule is required".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give only one of --tau and --tau-rule".into(),
        )),
    }
}

impl RunConfig {
    /// Preset values with command-line overrides.
    pub fn from_example(number: u8, args: &RunArgs) -> Result<Self, CliError> {
        let preset = ExampleConfig::preset(number)?;
        if number != 5 && (args.gamma.is_some() || args.k.is_some()) {
            return Err(CliError::Usage(
                "--gamma and --k only apply to example 5 and to solve".into(),
            ));
        }
        let (h, m) = spatial_step(args, Some(preset.h))?;
        let (tau, tau_rule) = time_step(args, h, true)?;
        let (source, u0_scale) = if preset.has_initial_profile() {
            (0.0, 4.0)
        } else {
            (8.0, 0.0)
        };
        let delayed = number == 5;
        Ok(Self {
            example: Some(number),
            alpha: args.alpha.unwrap_or(preset.alpha),
            beta: args.beta.unwrap_or(preset.beta),
            chi: 1.0,
            gamma: delayed.then(|| args.gamma.unwrap_or(preset.gamma)),
            k: delayed.then(|| args.k.unwrap_or(preset.delay_steps)),
            h,
            m,
            tau,
            tau_rule,
            n: args.n.unwrap_or(preset.n),
            riesz: riesz_variant(args.riesz.unwrap_or(RieszArg::Centered)).name(),
            solver: solver_path(args.solver).name(),
            source,
            u0_scale,
        })
    }

    pub fn custom(args: &RunArgs, source: f64, u0_scale: f64) -> Result<Self, CliError> {
        let required = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for solve")))
        };
        let alpha = required(args.alpha, "alpha")?;
        let beta = required(args.beta, "beta")?;
        let n = args
            .n
            .ok_or_else(|| CliError::Usage("--n is required for solve".into()))?;
        let (h, m) = spatial_step(args, None)?;
        let (tau, tau_rule) = time_step(args, h, false)?;
        let delayed = args.gamma.is_some() || args.k.is_some();
        Ok(Self {
            example: None,
            alpha,
            beta,
            chi: 1.0,
            gamma: delayed.then(|| args.gamma.unwrap_or(alpha)),
            k: delayed.then(|| args.k.unwrap_or(0)),
            h,
            m,
            tau,
            tau_rule,
            n,
            riesz: riesz_variant(args.riesz.unwrap_or(RieszArg::Centered)).name(),
            solver: solver_path(args.solver).name(),
            source,
            u0_scale,
        })
    }

    pub fn riesz_variant(&self) -> RieszVariant {
        if self.riesz == RieszVariant::HalfSum.name() {
            RieszVariant::HalfSum
        } else {
            RieszVariant::Centered
        }
    }

    pub fn solver_path(&self) -> SolverPath {
        if self.solver == SolverPath::Marching.name() {
            SolverPath::Marching
        } else {
            SolverPath::Global
        }
    }

    pub fn problem(&self) -> ProblemSpec {
        let mut p = ProblemSpec::new(self.alpha, self.beta)
            .with_chi(self.chi)
            .with_riesz(self.riesz_variant())
            .with_source(Source::Constant(self.source));
        if self.u0_scale != 0.0 {
            p = p.with_initial(InitialProfile::bump(self.u0_scale, 0.0, 1.0));
        }
        if let (Some(gamma), Some(k)) = (self.gamma, self.k) {
            p = p.with_delay(DelayTerm::new(gamma, k));
        }
        p
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        Ok(Grid::new(
            0.0,
            1.0,
            self.tau * self.n as f64,
            self.m,
            self.n,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_preset() {
        let c = RunConfig::from_example(1, &RunArgs::default()).unwrap();
        assert_eq!((c.m, c.n, c.tau_rule), (10, 37, Some("h2over6")));
        assert!((c.tau - 0.01 / 6.0).abs() < 1e-16);
        assert_eq!(c.u0_scale, 4.0);
        assert!(c.gamma.is_none());
        let g = c.grid().unwrap();
        assert!((g.t_final() - 37.0 * 0.01 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn overrides_keep_the_tau_rule() {
        let args = RunArgs {
            m: Some(40),
            ..RunArgs::default()
        };
        let c = RunConfig::from_example(3, &args).unwrap();
        assert_eq!(c.m, 40);
        assert!((c.tau - 0.025f64.powi(2) / 6.0).abs() < 1e-16);
        let args = RunArgs {
            k: Some(12),
            ..RunArgs::default()
        };
        let c = RunConfig::from_example(5, &args).unwrap();
        assert_eq!((c.gamma, c.k), (Some(0.8), Some(12)));
        assert!(RunConfig::from_example(2, &args).is_err());
    }

    #[test]
    fn custom_requires_grid_choices() {
        let base = RunArgs {
            alpha: Some(0.5),
            beta: Some(1.5),
            n: Some(5),
            ..RunArgs::default()
        };
        assert!(RunConfig::custom(&base, 8.0, 0.0).is_err());
        let with_h = RunArgs {
            h: Some(0.1),
            ..base.clone()
        };
        assert!(RunConfig::custom(&with_h, 8.0, 0.0).is_err());
        let full = RunArgs {
            tau: Some(0.01),
            ..with_h
        };
        let c = RunConfig::custom(&full, 8.0, 0.0).unwrap();
        assert_eq!((c.m, c.tau_rule, c.k), (10, None, None));
        let bad_h = RunArgs {
            h: Some(0.3),
            ..full
        };
        assert!(RunConfig::custom(&bad_h, 8.0, 0.0).is_err());
    }

    #[test]
    fn problem_mapping() {
        let c = RunConfig::from_example(5, &RunArgs::default()).unwrap();
        let p = c.problem();
        assert_eq!(p.delay.unwrap().steps, 6);
        assert_eq!(p.source.eval(0.5, 0.0), 8.0);
        let preset = ExampleConfig::preset(5).unwrap();
        let a = fracmat::assemble(&p, &c.grid().unwrap()).unwrap();
        let b = fracmat::assemble(&preset.problem(), &preset.grid().unwrap()).unwrap();
        assert_eq!(
            a.reduced_matrix.max_abs_diff(&b.reduced_matrix).unwrap(),
            0.0
        );
    }
}
