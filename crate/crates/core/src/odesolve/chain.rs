//! Order-by-order solution of the perturbation chain
//!
//! ```text
//! -ψ_n'' + (W - E_0) ψ_n = Σ_{k<n} E_{n-k} ψ_k - x^p ψ_{n-1}
//! ```
//!
//! with `E_n` from the projection onto `ψ_0` and `ψ_n` orthogonal to `ψ_0`.

use crate::error::{Error, Result};
use crate::problem::{Parity, PowerPotential};

use super::eigen::{solve_eigen, stitch, ShootingConfig};
use super::grid::{Grid, GridFunction};
use super::integrate::{numerov_weights, Numerov};
use super::quadrature::inner;

/// Threshold on `∫ψ_0²` below which projections are refused.
const MIN_NORM: f64 = 1e-200;

/// Required tail fall-off of the deepest chain function.
const TAIL_DROP: f64 = 1e-15;

/// `ln` of `x^p |ψ|` at 90% of the box relative to its maximum.
fn tail_drop(psi: &GridFunction, power: f64) -> f64 {
    let grid = psi.grid();
    let log_t = |i: usize| power * grid.x(i).ln() + psi.values()[i].abs().ln();
    let probe = grid.intervals() * 9 / 10;
    let peak = (1..grid.len()).map(log_t).fold(f64::NEG_INFINITY, f64::max);
    log_t(probe) - peak
}

/// Chain functions and energies accumulated so far.
#[derive(Debug, Clone)]
pub struct ChainState {
    potential: PowerPotential,
    perturbation: u32,
    level: usize,
    config: ShootingConfig,
    weights: Vec<f64>,
    matching: usize,
    outward_next: f64,
    norm: f64,
    functions: Vec<GridFunction>,
    energies: Vec<f64>,
}

/// A chain function before the mismatch check.
#[derive(Debug, Clone)]
pub struct ChainSolution {
    pub function: GridFunction,
    /// Signed derivative jump at the matching point relative to
    /// `max|ψ_n| / h`. Vanishes when `E_n` satisfies the solvability
    /// condition.
    pub mismatch: f64,
}

impl ChainState {
    /// Solves the base eigenproblem for `W` and starts a chain with
    /// perturbation `x^p`, sized for one term.
    pub fn new(potential: PowerPotential, perturbation: u32, level: usize, config: ShootingConfig) -> Result<Self> {
        ChainState::with_terms(potential, perturbation, level, 1, config)
    }

    /// Like [`ChainState::new`], with a box wide enough for `n_terms`
    /// energies.
    ///
    /// `ψ_n` behaves like `x^{pn} ψ_0` in the tail, so unless `x_max` is
    /// fixed the box grows until `x^{p(n_terms-1)} |ψ_0|` has fallen by
    /// `TAIL_DROP` at 90% of `x_max`.
    pub fn with_terms(
        potential: PowerPotential,
        perturbation: u32,
        level: usize,
        n_terms: usize,
        config: ShootingConfig,
    ) -> Result<Self> {
        let mut pair = solve_eigen(&potential, level, &config)?;
        if config.x_max.is_none() {
            let power = (perturbation as usize * n_terms.saturating_sub(1)) as f64;
            let mut x_max = pair.psi.grid().x_max();
            let limit = config.stability_limit(&potential);
            for _ in 0..12 {
                if tail_drop(&pair.psi, power) <= TAIL_DROP.ln() || x_max >= limit {
                    break;
                }
                x_max = (x_max * 1.25).min(limit);
                let fixed = ShootingConfig { x_max: Some(x_max), ..config.clone() };
                pair = solve_eigen(&potential, level, &fixed)?;
            }
        }
        let grid = pair.psi.grid();
        let wv = grid.sample(|x| crate::problem::Potential::value(&potential, x));
        let weights = numerov_weights(&wv, pair.energy, grid.h());
        let stitched = stitch(&weights, grid.h(), Parity::of_level(level))?;
        let norm = inner(&pair.psi, &pair.psi)?;
        if !(norm > MIN_NORM) {
            return Err(Error::NormTooSmall { norm });
        }
        Ok(ChainState {
            potential,
            perturbation,
            level,
            config,
            weights,
            matching: stitched.matching,
            outward_next: stitched.outward_next,
            norm,
            functions: vec![pair.psi],
            energies: vec![pair.energy],
        })
    }

    pub fn potential(&self) -> &PowerPotential {
        &self.potential
    }

    pub fn perturbation(&self) -> u32 {
        self.perturbation
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn config(&self) -> &ShootingConfig {
        &self.config
    }

    pub fn grid(&self) -> Grid {
        self.functions[0].grid()
    }

    pub fn base_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn functions(&self) -> &[GridFunction] {
        &self.functions
    }

    /// `ψ_k → ψ_k + c ψ_0`. `E_{k+1}` is invariant under this; later orders
    /// stay invariant only if the later functions are re-gauged too.
    pub fn shift_gauge(&mut self, k: usize, c: f64) -> Result<()> {
        if k == 0 || k >= self.functions.len() {
            return Err(Error::InvalidArgument(format!("no chain function {k} to shift")));
        }
        let psi0 = self.functions[0].clone();
        self.functions[k].add_scaled(c, &psi0)
    }

    fn require(&self, n: usize) -> Result<()> {
        if n == 0 || self.functions.len() < n || self.energies.len() < n {
            return Err(Error::InvalidArgument(format!(
                "order {n} needs ψ_0..ψ_{} and E_0..E_{}; have {} functions, {} energies",
                n.saturating_sub(1),
                n.saturating_sub(1),
                self.functions.len(),
                self.energies.len()
            )));
        }
        Ok(())
    }

    /// `E_n` by projecting the `n`-th chain equation onto `ψ_0`.
    pub fn chain_energy(&self, n: usize) -> Result<f64> {
        self.require(n)?;
        let psi0 = &self.functions[0];
        let mut num = inner(psi0, &self.functions[n - 1].times_power(self.perturbation))?;
        for k in 1..n {
            num -= self.energies[n - k] * inner(psi0, &self.functions[k])?;
        }
        Ok(num / self.norm)
    }

    /// `ψ_n` for a given `E_n`; fails when the matching mismatch exceeds
    /// `match_tol`, i.e. when `E_n` is not the solvability value.
    pub fn chain_function(&self, n: usize, e_n: f64) -> Result<GridFunction> {
        let sol = self.solve_chain_function(n, e_n)?;
        if !(sol.mismatch.abs() <= self.config.match_tol) {
            return Err(Error::BoundaryMismatch {
                order: n,
                mismatch: sol.mismatch.abs(),
                tolerance: self.config.match_tol,
            });
        }
        Ok(sol.function)
    }

    /// Two-sided linear shooting for `ψ_n` without the mismatch check.
    pub fn solve_chain_function(&self, n: usize, e_n: f64) -> Result<ChainSolution> {
        self.require(n)?;
        let grid = self.grid();
        let h = grid.h();
        let psi0 = &self.functions[0];
        let mut source = self.functions[n - 1].times_power(self.perturbation);
        for v in source.values_mut() {
            *v = -*v;
        }
        source.add_scaled(e_n, psi0)?;
        for k in 1..n {
            source.add_scaled(self.energies[n - k], &self.functions[k])?;
        }
        let g: Vec<f64> = source.values().iter().map(|v| -v).collect();
        let m = self.matching;
        let stepper = Numerov { c: &self.weights, g: Some(&g), h };
        let parity = psi0.parity();
        let p0 = psi0.values();
        let (outward, _) = stepper.outward(parity, (0.0, 0.0), m + 1);
        let inward = stepper.decaying_particular(p0, m);
        let d = -outward[m] / p0[m];
        let jump = inward[m + 1] - outward[m + 1] - d * self.outward_next;

        let mut values = inward;
        for i in 0..=m {
            values[i] = outward[i] + d * p0[i];
        }
        let mut function = GridFunction::new(grid, values, parity)?;
        let overlap = inner(psi0, &function)? / self.norm;
        function.add_scaled(-overlap, psi0)?;
        let scale = function.max_abs().max(f64::MIN_POSITIVE);
        Ok(ChainSolution { function, mismatch: jump / (h * scale) })
    }

    /// `E_n` as the root of the matching mismatch, which is affine in
    /// `E_n`. An independent check on [`ChainState::chain_energy`].
    pub fn shooting_energy(&self, n: usize) -> Result<f64> {
        let guess = self.chain_energy(n)?;
        let step = guess.abs().max(1.0);
        let raw = |e: f64| -> Result<f64> {
            let s = self.solve_chain_function(n, e)?;
            Ok(s.mismatch * s.function.max_abs())
        };
        let (d0, d1) = (raw(guess)?, raw(guess + step)?);
        Ok(guess - d0 * step / (d1 - d0))
    }

    /// Computes and appends `(E_n, ψ_n)` for the next order.
    pub fn advance(&mut self) -> Result<f64> {
        let n = self.energies.len();
        let e = self.chain_energy(n)?;
        let f = self.chain_function(n, e)?;
        self.energies.push(e);
        self.functions.push(f);
        Ok(e)
    }

    /// Extends the chain until it holds `n_terms` energies.
    pub fn extend_to(&mut self, n_terms: usize) -> Result<&[f64]> {
        while self.energies.len() < n_terms {
            self.advance()?;
        }
        Ok(&self.energies[..n_terms])
    }
}
