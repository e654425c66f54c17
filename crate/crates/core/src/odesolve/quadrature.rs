use crate::error::{Error, Result};

use super::grid::GridFunction;

/// Composite Simpson over `[0, x_max]`.
///
/// An odd number of intervals closes with Simpson's 3/8 rule on the last
/// three. Callers apply the parity factor for full-line integrals.
pub fn quadrature(f: &GridFunction) -> Result<f64> {
    simpson(f.values(), f.grid().h())
}

pub fn simpson(y: &[f64], h: f64) -> Result<f64> {
    let n = y.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("Simpson quadrature needs at least 3 points, got {n}")));
    }
    let intervals = n - 1;
    let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    let mut sum = 0.0;
    if simpson_end >= 2 {
        let mut odd = 0.0;
        let mut even = 0.0;
        for i in (1..simpson_end).step_by(2) {
            odd += y[i];
        }
        for i in (2..simpson_end).step_by(2) {
            even += y[i];
        }
        sum += h / 3.0 * (y[0] + 4.0 * odd + 2.0 * even + y[simpson_end]);
    }
    if simpson_end < intervals {
        let k = simpson_end;
        sum += 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
    }
    Ok(sum)
}

/// `∫_0^{x_max} f g dx` for two grid functions.
pub fn inner(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.check_compatible(g)?;
    let prod: Vec<f64> = f.values().iter().zip(g.values()).map(|(a, b)| a * b).collect();
    simpson(&prod, f.grid().h())
}
