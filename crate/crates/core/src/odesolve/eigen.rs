use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Parity, Potential};

use super::grid::{Grid, GridFunction};
use super::integrate::{count_nodes, numerov_weights, Numerov};

/// Settings for eigenvalue shooting and chain solves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Fixed box size; `None` picks `max(min_x_max, 2.5 × turning point)`.
    pub x_max: Option<f64>,
    pub min_x_max: f64,
    pub h: f64,
    /// Starting bracket; the upper end is widened until it holds the level.
    pub e_bracket: (f64, f64),
    /// Relative eigenvalue tolerance.
    pub tol_e: f64,
    /// Bound on `|ψ(x_max - h)| / max|ψ|` for an accepted eigenfunction.
    pub decay_tol: f64,
    /// Bound on the relative derivative jump of a chain function at the
    /// matching point.
    pub match_tol: f64,
    pub max_iter: usize,
    /// Chain length beyond which series carry a precision warning.
    pub term_budget: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            x_max: None,
            min_x_max: 8.0,
            h: 1e-3,
            e_bracket: (0.0, 16.0),
            tol_e: 1e-12,
            decay_tol: 1e-6,
            match_tol: 1e-9,
            max_iter: 200,
            term_budget: 6,
        }
    }
}

impl ShootingConfig {
    /// Defaults for the scaled frame with `W = y^b`, which confines harder.
    pub fn scaled_frame(b: u32) -> Self {
        let min_x_max = match b {
            4 => 6.0,
            _ => 5.0,
        };
        ShootingConfig { min_x_max, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.h > 0.0
            && self.tol_e > 0.0
            && self.decay_tol > 0.0
            && self.match_tol > 0.0
            && self.min_x_max > 0.0
            && self.e_bracket.0 < self.e_bracket.1
            && self.x_max.is_none_or(|x| x > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid shooting config {self:?}")))
        }
    }

    /// Box size needed for energy `e` under this config.
    pub fn x_max_for<W: Potential + ?Sized>(&self, w: &W, e: f64) -> f64 {
        match self.x_max {
            Some(x) => x,
            None => self.min_x_max.max(2.5 * turning_point(w, e)).min(self.stability_limit(w)),
        }
    }

    /// Largest `x` with `h² W(x) / 12 <= 0.05`. Beyond it Numerov loses
    /// stability, and any bound state is negligible there anyway.
    pub fn stability_limit<W: Potential + ?Sized>(&self, w: &W) -> f64 {
        turning_point(w, 0.6 / (self.h * self.h))
    }
}

/// Outer classical turning point: smallest `x > 0` with `W(x) >= e`, for `W`
/// increasing on the half line.
pub fn turning_point<W: Potential + ?Sized>(w: &W, e: f64) -> f64 {
    if w.value(0.0) >= e {
        return 0.0;
    }
    let mut hi = 1.0;
    while w.value(hi) < e && hi < 1e8 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if w.value(mid) < e {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// An eigenvalue and its eigenfunction, normalized by the parity initial
/// condition (`ψ(0) = 1` or `ψ'(0) = 1`).
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub energy: f64,
    pub psi: GridFunction,
}

/// Finds the `level`-th eigenvalue of `-ψ'' + W ψ = E ψ` with `ψ → 0`.
///
/// The level fixes the parity sector and the node count `level / 2` on
/// `(0, ∞)`. Node counting brackets the eigenvalue and bisection refines it
/// to `tol_e`; the returned eigenfunction is stitched from an outward and an
/// inward sweep at the outer turning point.
pub fn solve_eigen<W: Potential + ?Sized>(w: &W, level: usize, config: &ShootingConfig) -> Result<Eigenpair> {
    config.validate()?;
    let start = config.x_max.unwrap_or_else(|| config.min_x_max.min(config.stability_limit(w)));
    let mut grid = Grid::covering(start, config.h)?;
    loop {
        let pair = solve_on_grid(w, level, grid, config)?;
        let need = config.x_max_for(w, pair.energy);
        if config.x_max.is_some() || need <= grid.x_max() * (1.0 + 1e-12) {
            return Ok(pair);
        }
        grid = Grid::covering(need, config.h)?;
    }
}

/// [`solve_eigen`] on a caller-chosen grid.
pub fn solve_on_grid<W: Potential + ?Sized>(
    w: &W,
    level: usize,
    grid: Grid,
    config: &ShootingConfig,
) -> Result<Eigenpair> {
    let wv = grid.sample(|x| w.value(x));
    let h = grid.h();
    let parity = Parity::of_level(level);
    let target = level / 2;
    let nodes = |e: f64| count_nodes(&numerov_weights(&wv, e, h), h, parity);

    let (mut lo, mut hi) = config.e_bracket;
    if nodes(lo) > target {
        lo = wv.iter().copied().fold(f64::INFINITY, f64::min);
    }
    let mut widenings = 0;
    while nodes(hi) <= target {
        if widenings == 64 {
            return Err(Error::Bracket {
                level,
                detail: format!("no bracket up to E={hi:e} on x_max={}", grid.x_max()),
            });
        }
        hi = lo + 2.0 * (hi - lo);
        widenings += 1;
    }

    let mut iterations = 0;
    while hi - lo > config.tol_e * hi.abs().max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if iterations == config.max_iter {
            return Err(Error::NoConvergence {
                iterations,
                detail: format!("eigenvalue bracket [{lo}, {hi}] for level {level}"),
            });
        }
        if nodes(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let energy = 0.5 * (lo + hi);
    let stitched = stitch(&numerov_weights(&wv, energy, h), h, parity)?;
    let psi = GridFunction::new(grid, stitched.values, parity)?;
    let n = psi.values().len();
    let ratio = psi.values()[n - 2].abs() / psi.max_abs();
    if !(ratio <= config.decay_tol) {
        return Err(Error::NotDecayed { x_max: grid.x_max(), ratio });
    }
    Ok(Eigenpair { energy, psi })
}

/// Homogeneous solution glued from both ends.
pub(crate) struct Stitched {
    pub values: Vec<f64>,
    /// Matching index; values up to here are the outward solution.
    pub matching: usize,
    /// Outward solution one step past the matching index.
    pub outward_next: f64,
}

pub(crate) fn stitch(c: &[f64], h: f64, parity: Parity) -> Result<Stitched> {
    let n = c.len();
    if n < 6 {
        return Err(Error::InvalidArgument(format!("grid of {n} points is too coarse")));
    }
    let turn = (0..n).rev().find(|&i| c[i] < 0.0).unwrap_or(0);
    if turn + 4 >= n {
        return Err(Error::InvalidArgument(format!("turning point at x={} lies at the box edge", turn as f64 * h)));
    }
    let mut m = turn.max(2);
    let stepper = Numerov { c, g: None, h };
    let (outward, _) = stepper.outward(parity, parity.initial_condition(), n - 1);
    let peak = outward[..=m].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    while outward[m].abs() < 1e-6 * peak && m + 4 < n {
        m += 1;
    }
    let inward = stepper.inward(m);
    let scale = outward[m] / inward[m];
    let mut values = outward.clone();
    for i in m + 1..n {
        values[i] = scale * inward[i];
    }
    Ok(Stitched { values, matching: m, outward_next: outward[m + 1] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::PowerPotential;

    #[test]
    fn harmonic_levels() {
        let cfg = ShootingConfig::default();
        let w = PowerPotential::monomial(2);
        for (level, exact) in [(0, 1.0), (1, 3.0), (2, 5.0), (3, 7.0), (4, 9.0)] {
            let pair = solve_eigen(&w, level, &cfg).unwrap();
            assert!((pair.energy - exact).abs() < 1e-9, "level {level}: {}", pair.energy);
            assert_eq!(pair.psi.node_count(), level / 2);
            assert!(pair.psi.is_decayed(1e-6));
        }
    }

    #[test]
    fn ground_state_matches_gaussian() {
        let pair = solve_eigen(&PowerPotential::monomial(2), 0, &ShootingConfig::default()).unwrap();
        for (i, x) in pair.psi.grid().points().enumerate().step_by(250) {
            assert!((pair.psi.values()[i] - (-x * x / 2.0).exp()).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn pure_quartic_ground() {
        let pair = solve_eigen(&PowerPotential::monomial(4), 0, &ShootingConfig::scaled_frame(4)).unwrap();
        assert!((pair.energy - 1.060361944892).abs() / 1.060361944892 < 5e-7, "{}", pair.energy);
    }

    #[test]
    fn narrow_bracket_is_widened() {
        let cfg = ShootingConfig { e_bracket: (0.0, 0.5), ..Default::default() };
        let pair = solve_eigen(&PowerPotential::monomial(2), 2, &cfg).unwrap();
        assert!((pair.energy - 5.0).abs() < 1e-9);
    }

    #[test]
    fn too_small_box_is_rejected() {
        let cfg = ShootingConfig { x_max: Some(2.0), ..Default::default() };
        assert!(solve_eigen(&PowerPotential::monomial(2), 0, &cfg).is_err());
    }

    #[test]
    fn turning_point_of_monomials() {
        assert!((turning_point(&PowerPotential::monomial(2), 4.0) - 2.0).abs() < 1e-12);
        assert!((turning_point(&PowerPotential::monomial(4), 16.0) - 2.0).abs() < 1e-12);
    }
}
