//! Matrix approach to discrete fractional calculus.
//!
//! Fractional derivatives on a uniform grid become triangular strip
//! matrices; space-time problems are assembled from Kronecker products of
//! those matrices and reduced with eliminators before a sparse direct solve.

pub mod assembly;
pub mod coeffs;
pub mod error;
pub mod linsolve;
pub mod operators;
pub mod oracles;
pub mod presets;
pub mod sparse;
pub mod stripmat;
pub mod structured;
pub mod verify;

pub use assembly::{
    assemble, homogenize, solve_problem, AssembledSystem, BoundaryValues, DelayTerm, Grid,
    Homogenized, InitialProfile, ProblemSpec, Reconstruction, Solution, SolverPath, Source,
    StackedField,
};
pub use coeffs::{gl_coeffs, riesz_centered_coeffs, CoeffVector};
pub use error::{Error, Result};
pub use linsolve::{residual_inf_norm, solve, solve_time_marching, SolveReport, SparseLu};
pub use operators::{
    ban, delayed_ban, fan, ranort, ransym, riesz, RieszVariant, SpaceOperator, TimeOperator,
};
pub use oracles::{
    heat_series, heat_series_eval, riesz_closed_form, steady_state_check, OracleEval,
};
pub use presets::{tau_h2_over_6, ExampleConfig};
pub use sparse::{SparseOperator, TripletBuilder};
pub use stripmat::{Orientation, StripMatrix};
pub use structured::{
    eliminate_cols, eliminate_rows, kron, shift_ne, shift_sw, Eliminator, ShiftDirection, Shifter,
};
