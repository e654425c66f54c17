//! Dense square solves for the matching system.

use std::env;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition estimates above this are reported as warnings.
pub const CONDITION_WARNING: f64 = 1e12;
const REFINEMENT_STEPS: usize = 3;

/// Arithmetic used by [`solve_coefficients`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    /// Exact rational elimination of the (exactly representable) f64 system.
    Extended,
}

impl Precision {
    pub const ENV: &'static str = "MQRA_PRECISION";

    /// Reads `MQRA_PRECISION`, defaulting to double when unset.
    pub fn from_env() -> Result<Self> {
        match env::var(Self::ENV) {
            Ok(v) => v.parse(),
            Err(env::VarError::NotPresent) => Ok(Precision::Double),
            Err(e) => Err(Error::InvalidArgument(format!("{}: {e}", Self::ENV))),
        }
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::InvalidArgument(format!("precision must be double or extended, got {other:?}"))),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        })
    }
}

/// Accuracy diagnostics of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub precision: Precision,
    /// `‖Ax - b‖∞ / ‖b‖∞` on the unscaled system.
    pub residual: f64,
    /// `‖Ax - b‖∞ / (‖A‖∞ ‖x‖∞ + ‖b‖∞)`.
    pub backward_error: f64,
    /// `κ∞` of the row-equilibrated matrix.
    pub condition: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub report: SolveReport,
}

/// `P A Q = L U` with complete pivoting.
struct Lu {
    n: usize,
    lu: Vec<Vec<f64>>,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Lu {
    fn factor(a: &[Vec<f64>]) -> Result<Lu> {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        let mut first = 0.0;
        for k in 0..n {
            let (mut pi, mut pj, mut best) = (k, k, 0.0);
            for (i, row) in lu.iter().enumerate().skip(k) {
                for (j, v) in row.iter().enumerate().skip(k) {
                    if v.abs() > best {
                        (pi, pj, best) = (i, j, v.abs());
                    }
                }
            }
            if k == 0 {
                first = best;
            }
            if !(best > 0.0) || !best.is_finite() || best <= first * n as f64 * f64::EPSILON * 1e-3 {
                return Err(Error::Singular { pivot: k });
            }
            lu.swap(k, pi);
            rows.swap(k, pi);
            for row in lu.iter_mut() {
                row.swap(k, pj);
            }
            cols.swap(k, pj);
            let (top, bottom) = lu.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in bottom.iter_mut() {
                let f = row[k] / pivot_row[k];
                row[k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        row[j] -= f * pivot_row[j];
                    }
                }
            }
        }
        Ok(Lu { n, lu, rows, cols })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.rows.iter().map(|&r| b[r]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i][j] * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i][j] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[i][i];
        }
        let mut x = vec![0.0; n];
        for (k, &c) in self.cols.iter().enumerate() {
            x[c] = y[k];
        }
        x
    }

    fn inverse_norm(&self) -> f64 {
        let n = self.n;
        let mut row_sums = vec![0.0; n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            for (i, v) in self.solve(&e).iter().enumerate() {
                row_sums[i] += v.abs();
            }
        }
        row_sums.into_iter().fold(0.0, f64::max)
    }
}

/// `b - A x` with each dot product accumulated via fused multiply-add
/// error terms.
fn residual_vector(a: &[Vec<f64>], x: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(row, bi)| {
            let (mut s, mut c) = (-bi, 0.0);
            for (aij, xj) in row.iter().zip(x) {
                let p = aij * xj;
                let pe = aij.mul_add(*xj, -p);
                let t = s + p;
                let se = if s.abs() >= p.abs() { (s - t) + p } else { (p - t) + s };
                s = t;
                c += se + pe;
            }
            -(s + c)
        })
        .collect()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn matrix_norm_inf(a: &[Vec<f64>]) -> f64 {
    a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn validate(a: &[Vec<f64>], b: &[f64]) -> Result<()> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!("system must be square and non-empty, got {n} rows")));
    }
    if a.iter().flatten().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("system has non-finite entries".into()));
    }
    Ok(())
}

/// Solves `A x = b`. Rows are equilibrated first; the double path uses
/// complete pivoting plus iterative refinement, the extended path exact
/// rational elimination.
pub fn solve_coefficients(a: &[Vec<f64>], b: &[f64], precision: Precision) -> Result<Solution> {
    validate(a, b)?;
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    for (row, bi) in sa.iter_mut().zip(sb.iter_mut()) {
        let scale = norm_inf(row);
        if scale == 0.0 {
            continue;
        }
        row.iter_mut().for_each(|v| *v /= scale);
        *bi /= scale;
    }

    let lu = Lu::factor(&sa);
    let condition = lu.as_ref().ok().map(|lu| matrix_norm_inf(&sa) * lu.inverse_norm());
    let x = match precision {
        Precision::Double => {
            let lu = lu?;
            let mut x = lu.solve(&sb);
            for _ in 0..REFINEMENT_STEPS {
                let r = residual_vector(&sa, &x, &sb);
                let dx = lu.solve(&r);
                x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
                if norm_inf(&dx) <= f64::EPSILON * norm_inf(&x) {
                    break;
                }
            }
            x
        }
        Precision::Extended => exact_solve(&sa, &sb)?,
    };

    let r = norm_inf(&residual_vector(a, &x, b));
    let bn = norm_inf(b);
    let residual = if bn > 0.0 { r / bn } else { r };
    let backward_error = r / (matrix_norm_inf(a) * norm_inf(&x) + bn).max(f64::MIN_POSITIVE);
    let mut warnings = Vec::new();
    match condition {
        Some(c) if c > CONDITION_WARNING => warnings.push(format!(
            "condition estimate {c:.3e} exceeds {CONDITION_WARNING:e}; coefficients may carry few digits"
        )),
        None => warnings.push("condition estimate unavailable: double factorization is singular".into()),
        _ => {}
    }
    Ok(Solution { x, report: SolveReport { precision, residual, backward_error, condition, warnings } })
}

fn exact_solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    let q = |v: f64| BigRational::from_float(v).expect("finite entries were validated");
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().map(|v| q(*v)).chain(std::iter::once(q(*bi))).collect()).collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::Singular { pivot: k })?;
        m.swap(k, p);
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &pivot_row[k];
            for j in k..=n {
                let d = &f * &pivot_row[j];
                row[j] -= d;
            }
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut s = m[i][n].clone();
        for j in i + 1..n {
            s -= &m[i][j] * &x[j];
        }
        x[i] = s / &m[i][i];
    }
    Ok(x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let s = solve_coefficients(&[vec![1.0]], &[3.5], Precision::Double).unwrap();
        assert_eq!(s.x, [3.5]);
        assert_eq!(s.report.residual, 0.0);
    }

    #[test]
    fn needs_pivoting() {
        let a = vec![vec![0.0, 2.0, 1.0], vec![1.0, 0.0, 0.0], vec![3.0, 1.0, 4.0]];
        let b = [5.0, 1.0, 9.0];
        for p in [Precision::Double, Precision::Extended] {
            let s = solve_coefficients(&a, &b, p).unwrap();
            for (x, e) in s.x.iter().zip([1.0, 2.0, 1.0]) {
                assert!((x - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hilbert_backward_stable() {
        let n = 10;
        let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect()).collect();
        let b: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
        let s = solve_coefficients(&a, &b, Precision::Double).unwrap();
        assert!(s.report.backward_error <= 1e-15, "{}", s.report.backward_error);
        assert!(s.report.condition.unwrap() > 1e12);
        assert_eq!(s.report.warnings.len(), 1);
        let e = solve_coefficients(&a, &b, Precision::Extended).unwrap();
        assert!(e.report.residual <= 1e-15);
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(solve_coefficients(&a, &[1.0, 2.0], Precision::Double), Err(Error::Singular { .. })));
        assert!(matches!(solve_coefficients(&a, &[1.0, 2.0], Precision::Extended), Err(Error::Singular { .. })));
    }

    #[test]
    fn precision_parsing() {
        assert_eq!("Extended".parse::<Precision>().unwrap(), Precision::Extended);
        assert!("quad".parse::<Precision>().is_err());
    }
}
