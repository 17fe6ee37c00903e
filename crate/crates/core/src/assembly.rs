//! Space-time grid, stacked node ordering, and assembly of the full
//! Kronecker-structured system
//!
//! `{ B_n^(α) ⊗ E_{m+1} - χ E_{n+1} ⊗ R_m^(β) } y = f`
//!
//! followed by elimination of the known boundary and initial nodes.
//!
//! Nodes are stacked with the last time layer first and, inside each layer,
//! the spatial index descending: node `(i, j)` sits at
//! `(n - j)(m + 1) + (m - i)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linsolve::{self, SolveReport};
use crate::operators::{ban, delayed_ban, riesz, RieszVariant};
use crate::oracles::riesz_closed_form;
use crate::sparse::SparseOperator;
use crate::structured::{eliminate_cols, eliminate_rows, kron, Eliminator};

/// Uniform grid on `[a, b] x [0, T]` with `m` spatial intervals and `n`
/// time steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    t_final: f64,
    m: usize,
    n: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, t_final: f64, m: usize, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidParameter(format!(
                "empty interval [{a}, {b}]"
            )));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "final time {t_final} must be positive"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 spatial intervals, got {m}"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidParameter(
                "need at least one time step".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            t_final,
            m,
            n,
        })
    }

    /// Grid from step sizes; `(b - a) / h` must be a whole number.
    pub fn from_steps(a: f64, b: f64, h: f64, tau: f64, n: usize) -> Result<Self> {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "spatial step {h} must be positive"
            )));
        }
        let ratio = (b - a) / h;
        let m = ratio.round();
        if (ratio - m).abs() > 1e-9 * ratio.max(1.0) || m < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "step {h} does not divide [{a}, {b}] evenly"
            )));
        }
        Self::new(a, b, tau * n as f64, m as usize, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.m as f64
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.m {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        if j == self.n {
            self.t_final
        } else {
            j as f64 * self.tau()
        }
    }

    /// Total number of nodes, `(n + 1)(m + 1)`.
    pub fn len(&self) -> usize {
        (self.n + 1) * (self.m + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of node `(i, j)` in the stacked vector (0-based).
    pub fn stack_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.m && j <= self.n);
        (self.n - j) * (self.m + 1) + (self.m - i)
    }

    /// Inverse of [`Grid::stack_index`].
    pub fn node(&self, pos: usize) -> (usize, usize) {
        let w = self.m + 1;
        (self.m - pos % w, self.n - pos / w)
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i > 0 && i < self.m && j > 0
    }
}

/// Node values in stacked order.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedField {
    grid: Grid,
    values: Vec<f64>,
}

impl StackedField {
    pub fn sample(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|pos| {
                let (i, j) = grid.node(pos);
                f(grid.x(i), grid.t(j))
            })
            .collect();
        Self {
            grid: *grid,
            values,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: *grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                context: "stacked field",
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            grid: *grid,
            values,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.stack_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let p = self.grid.stack_index(i, j);
        self.values[p] = v;
    }

    /// Node values as `[j][i]`: time layer ascending, then space ascending.
    pub fn unstack(&self) -> Vec<Vec<f64>> {
        (0..=self.grid.n)
            .map(|j| (0..=self.grid.m).map(|i| self.value(i, j)).collect())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Right-hand side `f(x, t)`.
#[derive(Clone)]
pub enum Source {
    Constant(f64),
    Function(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl Source {
    pub fn function(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Function(f) => f(x, t),
        }
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Initial profile `u(x, 0) = c0 + c1 x + c2 x²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InitialProfile {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl InitialProfile {
    pub const ZERO: Self = Self {
        c0: 0.0,
        c1: 0.0,
        c2: 0.0,
    };

    /// `scale · (x - a)(b - x)`.
    pub fn bump(scale: f64, a: f64, b: f64) -> Self {
        Self {
            c0: -scale * a * b,
            c1: scale * (a + b),
            c2: -scale,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + x * (self.c1 + x * self.c2)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

/// Time-independent boundary values `u(a, t)` and `u(b, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryValues {
    pub left: f64,
    pub right: f64,
}

/// Delayed time-derivative term: the time part becomes
/// `w0 D^α y(t) + w1 D^γ y(t - kτ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayTerm {
    pub gamma: f64,
    pub steps: usize,
    pub weights: (f64, f64),
}

impl DelayTerm {
    pub fn new(gamma: f64, steps: usize) -> Self {
        Self {
            gamma,
            steps,
            weights: (0.5, 0.5),
        }
    }
}

/// `D_t^α u - χ ∂^β u / ∂|x|^β = f(x, t)` with initial and boundary data.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub beta: f64,
    pub chi: f64,
    pub riesz: RieszVariant,
    pub source: Source,
    pub initial: InitialProfile,
    pub boundary: BoundaryValues,
    pub delay: Option<DelayTerm>,
}

impl ProblemSpec {
    /// Homogeneous problem with `χ = 1`, zero source, centred Riesz matrix.
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            chi: 1.0,
            riesz: RieszVariant::default(),
            source: Source::Constant(0.0),
            initial: InitialProfile::ZERO,
            boundary: BoundaryValues::default(),
            delay: None,
        }
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn with_initial(mut self, initial: InitialProfile) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_boundary(mut self, left: f64, right: f64) -> Self {
        self.boundary = BoundaryValues { left, right };
        self
    }

    pub fn with_delay(mut self, delay: DelayTerm) -> Self {
        self.delay = Some(delay);
        self
    }

    pub fn with_riesz(mut self, variant: RieszVariant) -> Self {
        self.riesz = variant;
        self
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidOrder {
                name: "alpha",
                value: self.alpha,
                range: "(0, 1]",
            });
        }
        if !(self.beta > 1.0 && self.beta <= 2.0) {
            return Err(Error::InvalidOrder {
                name: "beta",
                value: self.beta,
                range: "(1, 2]",
            });
        }
        if !(self.chi > 0.0 && self.chi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "diffusion coefficient {} must be positive",
                self.chi
            )));
        }
        if let Some(d) = &self.delay {
            if !(d.gamma > 0.0 && d.gamma <= 1.0) {
                return Err(Error::InvalidOrder {
                    name: "gamma",
                    value: d.gamma,
                    range: "(0, 1]",
                });
            }
        }
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.initial.is_zero() && self.boundary.left == 0.0 && self.boundary.right == 0.0
    }
}

/// Maps the solution of the homogenized problem back to the original unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reconstruction {
    Identity,
    /// `u = u(x, 0) - y`.
    FromInitial(InitialProfile),
}

impl Reconstruction {
    pub fn apply(&self, y: &StackedField) -> StackedField {
        match self {
            Self::Identity => y.clone(),
            Self::FromInitial(u0) => {
                let grid = *y.grid();
                let values = y
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(pos, v)| {
                        let (i, _) = grid.node(pos);
                        u0.eval(grid.x(i)) - v
                    })
                    .collect();
                StackedField { grid, values }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Homogenized {
    pub problem: ProblemSpec,
    pub reconstruction: Reconstruction,
}

/// Rewrites the problem for `y = u(x, 0) - u`, which has zero initial and
/// boundary values.
///
/// The Caputo derivative of the time-constant `u(x, 0)` vanishes, so `y`
/// solves the same equation with source `-f - χ ∂^β u(x,0) / ∂|x|^β`. The
/// spatial term is exact for a quadratic profile: `2 c2` when `β = 2`, and
/// the closed-form Riesz derivative of the scaled bump `(x-a)(b-x)` when
/// `β < 2` (which requires zero boundary values).
pub fn homogenize(p: &ProblemSpec, domain: (f64, f64)) -> Result<Homogenized> {
    p.validate()?;
    let (a, b) = domain;
    if p.is_homogeneous() {
        return Ok(Homogenized {
            problem: p.clone(),
            reconstruction: Reconstruction::Identity,
        });
    }
    let u0 = p.initial;
    let tol = |v: f64| 1e-12 * v.abs().max(1.0);
    let (ua, ub) = (u0.eval(a), u0.eval(b));
    if (ua - p.boundary.left).abs() > tol(ua) || (ub - p.boundary.right).abs() > tol(ub) {
        return Err(Error::IncompatibleData(format!(
            "u(x,0) gives {ua}, {ub} at the ends but boundary values are {}, {}",
            p.boundary.left, p.boundary.right
        )));
    }
    let chi = p.chi;
    let beta = p.beta;
    let source = if beta == 2.0 {
        let lifted = chi * 2.0 * u0.c2;
        match &p.source {
            Source::Constant(c) => Source::Constant(-c - lifted),
            Source::Function(f) => {
                let f = Arc::clone(f);
                Source::function(move |x, t| -f(x, t) - lifted)
            }
        }
    } else {
        if p.boundary.left != 0.0 || p.boundary.right != 0.0 {
            return Err(Error::UnsupportedBoundary { beta });
        }
        let len = b - a;
        let scale = -u0.c2 * len.powf(2.0 - beta);
        let f = p.source.clone();
        Source::function(move |x, t| {
            let s = (x - a) / len;
            let riesz_u0 = riesz_closed_form(s, beta).map_or(f64::NAN, |v| scale * v);
            -f.eval(x, t) - chi * riesz_u0
        })
    };
    let mut problem = p.clone();
    problem.source = source;
    problem.initial = InitialProfile::ZERO;
    problem.boundary = BoundaryValues::default();
    Ok(Homogenized {
        problem,
        reconstruction: Reconstruction::FromInitial(u0),
    })
}

#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub grid: Grid,
    /// Operator over all `(n+1)(m+1)` nodes in stacked order.
    pub full_matrix: SparseOperator,
    pub eliminator: Eliminator,
    /// Rows and columns of the unknown nodes only.
    pub reduced_matrix: SparseOperator,
    pub reduced_rhs: Vec<f64>,
    /// `(i, j)` of each unknown, in stacked order.
    pub kept_nodes: Vec<(usize, usize)>,
}

impl AssembledSystem {
    pub fn unknowns(&self) -> usize {
        self.kept_nodes.len()
    }

    /// Spreads a reduced solution over the whole grid; eliminated nodes get
    /// zero.
    pub fn expand(&self, reduced: &[f64]) -> Result<StackedField> {
        let values = self.eliminator.extend(reduced)?;
        StackedField::from_values(&self.grid, values)
    }
}

/// The time-derivative part over `n + 1` layers, delay included.
pub fn time_matrix(p: &ProblemSpec, grid: &Grid) -> Result<SparseOperator> {
    let (n, tau) = (grid.n(), grid.tau());
    let plain = ban(p.alpha, n, tau)?.matrix;
    match &p.delay {
        None => Ok(plain),
        Some(d) => {
            if d.steps >= n {
                return Err(Error::InvalidParameter(format!(
                    "delay of {} steps needs more than {n} time steps",
                    d.steps
                )));
            }
            let delayed = delayed_ban(d.gamma, n, d.steps, tau)?.matrix;
            plain.linear_combination(d.weights.0, &delayed, d.weights.1)
        }
    }
}

/// Assembles the full system for a homogeneous problem and strikes the
/// rows and columns of the boundary nodes and the initial layer.
pub fn assemble(p: &ProblemSpec, grid: &Grid) -> Result<AssembledSystem> {
    p.validate()?;
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let (m, n) = (grid.m(), grid.n());
    let time = time_matrix(p, grid)?;
    let space = riesz(p.riesz, p.beta, m, grid.h())?.matrix;
    let full = kron(&time, &SparseOperator::identity(m + 1)).linear_combination(
        1.0,
        &kron(&SparseOperator::identity(n + 1), &space),
        -p.chi,
    )?;

    let omitted = (0..grid.len()).filter_map(|pos| {
        let (i, j) = grid.node(pos);
        (!grid.is_interior(i, j)).then_some(pos + 1)
    });
    let eliminator = Eliminator::new(grid.len(), omitted)?;
    let reduced = eliminate_cols(&eliminator, &eliminate_rows(&eliminator, &full)?)?;
    let kept_nodes: Vec<(usize, usize)> = eliminator
        .kept()
        .into_iter()
        .map(|pos| grid.node(pos - 1))
        .collect();
    let reduced_rhs = kept_nodes
        .iter()
        .map(|&(i, j)| p.source.eval(grid.x(i), grid.t(j)))
        .collect();

    Ok(AssembledSystem {
        grid: *grid,
        full_matrix: full,
        eliminator,
        reduced_matrix: reduced,
        reduced_rhs,
        kept_nodes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverPath {
    #[default]
    Global,
    Marching,
}

impl SolverPath {
    pub fn name(self) -> &'static str {
        match self {
            Self::Global => "global",
            Self::Marching => "marching",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Solution of the homogenized problem.
    pub y: StackedField,
    /// Reconstructed original unknown, when homogenization changed it.
    pub u: Option<StackedField>,
    pub report: SolveReport,
    pub unknowns: usize,
}

impl Solution {
    /// `u` when available, otherwise `y`.
    pub fn primary(&self) -> &StackedField {
        self.u.as_ref().unwrap_or(&self.y)
    }
}

pub fn solve_problem(p: &ProblemSpec, grid: &Grid, path: SolverPath) -> Result<Solution> {
    let hom = homogenize(p, (grid.a(), grid.b()))?;
    let system = assemble(&hom.problem, grid)?;
    let report = match path {
        SolverPath::Global => linsolve::solve(&system.reduced_matrix, &system.reduced_rhs)?,
        SolverPath::Marching => linsolve::solve_time_marching(&system)?,
    };
    let y = system.expand(&report.solution)?;
    let u = match hom.reconstruction {
        Reconstruction::Identity => None,
        r => Some(r.apply(&y)),
    };
    Ok(Solution {
        y,
        u,
        report,
        unknowns: system.unknowns(),
    })
}
