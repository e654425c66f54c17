use crate::error::{Error, Result};
use crate::problem::Parity;

/// Uniform half-line grid `0, h, 2h, …, x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    h: f64,
    intervals: usize,
}

impl Grid {
    /// `x_max / h` must be an integer up to 1e-12 relative.
    pub fn new(x_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(x_max > 0.0) || !h.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidArgument(format!("bad grid x_max={x_max}, h={h}")));
        }
        let ratio = x_max / h;
        let intervals = ratio.round();
        if (ratio - intervals).abs() > 1e-12 * intervals.max(1.0) {
            return Err(Error::InvalidArgument(format!("x_max={x_max} is not a multiple of h={h}")));
        }
        Grid::with_intervals(h, intervals as usize)
    }

    pub fn with_intervals(h: f64, intervals: usize) -> Result<Self> {
        if intervals < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 3 points, got {}", intervals + 1)));
        }
        Ok(Grid { h, intervals })
    }

    /// Smallest grid with step `h` reaching at least `x_max`.
    pub fn covering(x_max: f64, h: f64) -> Result<Self> {
        let ratio = x_max / h;
        let n = if (ratio - ratio.round()).abs() <= 1e-9 * ratio { ratio.round() } else { ratio.ceil() };
        Grid::with_intervals(h, n as usize)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_max(&self) -> f64 {
        self.h * self.intervals as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.h * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.x(i))
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points().map(f).collect()
    }
}

/// A function sampled on a [`Grid`], even or odd about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
    parity: Parity,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>, parity: Parity) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        Ok(GridFunction { grid, values, parity })
    }

    pub fn from_fn(grid: Grid, parity: Parity, f: impl Fn(f64) -> f64) -> Self {
        GridFunction { grid, values: grid.sample(f), parity }
    }

    pub fn zeros(grid: Grid, parity: Parity) -> Self {
        GridFunction { grid, values: vec![0.0; grid.len()], parity }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `|ψ(x_max)| <= tol · max |ψ|`.
    pub fn is_decayed(&self, tol: f64) -> bool {
        let last = self.values.last().copied().unwrap_or(0.0);
        last.is_finite() && last.abs() <= tol * self.max_abs()
    }

    /// Interior sign changes on `(0, x_max)`; exact zeros are skipped.
    pub fn node_count(&self) -> usize {
        let start = usize::from(self.parity == Parity::Odd);
        let mut prev = 0.0f64;
        let mut nodes = 0;
        for &v in &self.values[start..] {
            if v != 0.0 {
                if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                    nodes += 1;
                }
                prev = v;
            }
        }
        nodes
    }

    pub fn check_compatible(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// `self + c · other`, in place.
    pub fn add_scaled(&mut self, c: f64, other: &GridFunction) -> Result<()> {
        self.check_compatible(other)?;
        for (v, o) in self.values.iter_mut().zip(&other.values) {
            *v += c * o;
        }
        Ok(())
    }

    /// Pointwise product; the parity multiplies.
    pub fn product(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_compatible(other)?;
        let parity = if self.parity == other.parity { Parity::Even } else { Parity::Odd };
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(GridFunction { grid: self.grid, values, parity })
    }

    /// `x^p · self`.
    pub fn times_power(&self, p: u32) -> GridFunction {
        let parity = match (self.parity, p % 2) {
            (par, 0) => par,
            (Parity::Even, _) => Parity::Odd,
            (Parity::Odd, _) => Parity::Even,
        };
        let values = self.values.iter().enumerate().map(|(i, v)| v * self.grid.x(i).powi(p as i32)).collect();
        GridFunction { grid: self.grid, values, parity }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size_and_commensurability() {
        let g = Grid::new(8.0, 1e-3).unwrap();
        assert_eq!(g.len(), 8001);
        assert!((g.x_max() - 8.0).abs() < 1e-12);
        assert!(Grid::new(1.0, 0.3).is_err());
        assert!(Grid::new(0.1, 0.1).is_err());
        assert_eq!(Grid::covering(1.0, 0.3).unwrap().intervals(), 4);
    }

    #[test]
    fn nodes_and_decay() {
        let g = Grid::new(6.0, 0.01).unwrap();
        let f = GridFunction::from_fn(g, Parity::Even, |x| (1.0 - 2.0 * x * x) * (-x * x / 2.0).exp());
        assert_eq!(f.node_count(), 1);
        assert!(f.is_decayed(1e-6));
        let o = GridFunction::from_fn(g, Parity::Odd, |x| x * (-x * x / 2.0).exp());
        assert_eq!(o.node_count(), 0);
        assert!(GridFunction::new(g, vec![0.0; 3], Parity::Even).is_err());
    }
}
