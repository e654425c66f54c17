//! Multi-point quasi-rational approximants
//! `E_app(λ) = Σ_j (1 + μλ)^{e_j} P_j(λ) / Q(λ)` with a common denominator.

mod bank;
mod constraint;
mod defect;
mod jet;
mod linalg;
mod model;
mod recipe;
mod sweep;
mod system;

pub use bank::SeriesBank;
pub use constraint::{check_distinct, Constraint, Recipe};
pub use defect::{check_defect_free, DefectReport};
pub use jet::Jet;
pub use linalg::{solve_coefficients, Precision, Solution, SolveReport, CONDITION_WARNING};
pub use model::{build_approximant, Approximant, Piece};
pub use recipe::standard_recipe;
pub use sweep::{
    audit_grid, error_sweep, linear_grid, log_grid, scan_mu, summarize, ScanEntry, ScanReport, SweepRow, SweepSummary,
    MU_TIE_FRACTION,
};
pub use system::{assemble_system, LinearSystem};
