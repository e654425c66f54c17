//! Bound-state machinery on the half line: Numerov integration, eigenvalue
//! shooting, chain solves and quadrature.

mod chain;
mod eigen;
mod grid;
mod integrate;
mod quadrature;

pub use chain::{ChainSolution, ChainState};
pub use eigen::{solve_eigen, solve_on_grid, turning_point, Eigenpair, ShootingConfig};
pub use grid::{Grid, GridFunction};
pub use integrate::{integrate_ivp, IvpSolution, BLOWUP};
pub use quadrature::{inner, quadrature, simpson};
