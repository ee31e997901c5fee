//! Effective conductivity of two-dimensional doubly periodic composites with
//! one circular inclusion per cell.
//!
//! Four routes to the same quantity are provided and can be checked against
//! each other:
//!
//! * [`rayleigh`]: the truncated ℝ-linear Rayleigh system built from the
//!   lattice sums of [`sums`], solved directly or by successive
//!   approximations;
//! * [`series`]: the exact expansion of `σ11 - iσ12` in the contrast `ϱ` and
//!   the concentration `f`;
//! * [`closed_forms`]: Clausius–Mossotti and the hexagonal-array formulas
//!   (Perrins–McPhedran fit, Keller-type percolation law, matched
//!   asymptotics);
//! * [`sweep`]: parameter sweeps that tabulate any of the above.

pub mod binomial;
pub mod cli;
pub mod closed_forms;
pub mod composite;
pub mod error;
pub mod lattice;
pub mod rayleigh;
pub mod series;
pub mod sums;
pub mod sweep;

pub use error::{Error, Result};
pub use lattice::{make_lattice, Lattice, LatticeKind};
pub use sums::{build_sum_table, eisenstein_s2, lattice_sum, parse_fixture, shell_sum, LatticeSumTable, SumEstimate};
pub use composite::{contrast_from_ratio, CompositeParams};
pub use rayleigh::{
    convergence_study, effective_tensor, solve_direct, solve_iterative, solve_tensor, EffectiveTensor,
    FluxCoefficients, SolveMethod, TruncatedSystem,
};
pub use series::{
    chain_weight, expand_effective_series, hexagonal_coefficients, sigma22_series, BiPolynomial,
};
pub use closed_forms::{
    clausius_mossotti, keller_hex, matched_contrast_hex, matched_perfect_hex, perrins_mcphedran_hex, FormulaId,
};
pub use sweep::{
    render_csv, run_sweep, write_csv, Contrast, Method, ResultRow, RowOutcome, RowStatus, RowValues, SweepConfig,
};
