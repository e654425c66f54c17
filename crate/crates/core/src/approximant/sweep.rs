use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odesolve::ShootingConfig;
use crate::perturb::eigenvalue;
use crate::problem::ProblemFamily;

use super::bank::SeriesBank;
use super::constraint::Constraint;
use super::linalg::Precision;
use super::model::{build_approximant, Approximant};

/// Relative width within which `scan_mu` prefers the smaller μ.
pub const MU_TIE_FRACTION: f64 = 0.05;

/// `n` points spaced evenly in `ln λ` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || n == 0 {
        return Err(Error::InvalidArgument(format!("bad log grid {lo}..{hi} with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect())
}

/// `n` evenly spaced points over `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo >= 0.0 && hi >= lo) || n == 0 {
        return Err(Error::InvalidArgument(format!("bad linear grid {lo}..{hi} with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// Grid used to rank μ candidates.
pub fn audit_grid() -> Vec<f64> {
    log_grid(0.01, 100.0, 41).expect("static grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub e_app: f64,
    pub e_shoot: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub max_rel_err: f64,
    pub argmax: f64,
}

pub fn summarize(rows: &[SweepRow]) -> Option<SweepSummary> {
    rows.iter()
        .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
        .map(|r| SweepSummary { max_rel_err: r.rel_err, argmax: r.lambda })
}

/// Compares the approximant with shooting eigenvalues at every grid point.
pub fn error_sweep(approx: &Approximant, grid: &[f64], config: &ShootingConfig) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .map(|&lambda| {
            let e_app = approx.evaluate(lambda)?;
            let e_shoot = eigenvalue(approx.family, approx.level, lambda, config)?;
            Ok(SweepRow { lambda, e_app, e_shoot, rel_err: ((e_app - e_shoot) / e_shoot).abs() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub mu: f64,
    pub defect_free: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub positive_roots: Vec<f64>,
    /// Over the audit grid; absent for defective or failed builds.
    pub max_rel_err: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub best_mu: f64,
    pub audit_grid: Vec<f64>,
    pub entries: Vec<ScanEntry>,
}

/// Builds one approximant per μ, drops defective ones and ranks the rest by
/// maximum relative error on `audit`. Ties within [`MU_TIE_FRACTION`] go to
/// the smallest μ.
#[allow(clippy::too_many_arguments)]
pub fn scan_mu(
    family: ProblemFamily,
    level: usize,
    degree: usize,
    constraints: &[Constraint],
    bank: &SeriesBank,
    mu_grid: &[f64],
    audit: &[f64],
    config: &ShootingConfig,
    precision: Precision,
) -> Result<(Approximant, ScanReport)> {
    if mu_grid.is_empty() {
        return Err(Error::InvalidArgument("mu grid is empty".into()));
    }
    if let Some(bad) = mu_grid.iter().find(|m| !(**m > 0.0) || !m.is_finite()) {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {bad}")));
    }
    let targets: Vec<f64> = audit.par_iter().map(|&l| eigenvalue(family, level, l, config)).collect::<Result<_>>()?;

    let built: Vec<(ScanEntry, Option<Approximant>)> = mu_grid
        .par_iter()
        .map(|&mu| match build_approximant(family, level, degree, mu, constraints, bank, precision) {
            Err(e @ (Error::ConstraintCount { .. } | Error::DuplicateConstraint(_) | Error::MissingSeries(_))) => {
                Err(e)
            }
            Err(e) => Ok((
                ScanEntry {
                    mu,
                    defect_free: false,
                    positive_roots: Vec::new(),
                    max_rel_err: None,
                    error: Some(e.to_string()),
                },
                None,
            )),
            Ok(a) if !a.is_defect_free() => Ok((
                ScanEntry {
                    mu,
                    defect_free: false,
                    positive_roots: a.defect.positive_roots.clone(),
                    max_rel_err: None,
                    error: None,
                },
                None,
            )),
            Ok(a) => {
                let err = audit
                    .iter()
                    .zip(&targets)
                    .map(|(&l, &t)| a.evaluate(l).map(|v| ((v - t) / t).abs()))
                    .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)));
                Ok(match err {
                    Ok(e) => (
                        ScanEntry {
                            mu,
                            defect_free: true,
                            positive_roots: Vec::new(),
                            max_rel_err: Some(e),
                            error: None,
                        },
                        Some(a),
                    ),
                    Err(e) => (
                        ScanEntry {
                            mu,
                            defect_free: true,
                            positive_roots: Vec::new(),
                            max_rel_err: None,
                            error: Some(e.to_string()),
                        },
                        None,
                    ),
                })
            }
        })
        .collect::<Result<_>>()?;

    let best = built.iter().filter_map(|(e, _)| e.max_rel_err).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        let detail = built
            .iter()
            .map(|(e, _)| match &e.error {
                Some(msg) => format!("mu={}: {msg}", e.mu),
                None => format!("mu={}: roots {:?}", e.mu, e.positive_roots),
            })
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::AllDefective(detail));
    }
    let (entry, approx) = built
        .iter()
        .filter(|(e, _)| e.max_rel_err.is_some_and(|v| v <= best * (1.0 + MU_TIE_FRACTION)))
        .min_by(|a, b| a.0.mu.total_cmp(&b.0.mu))
        .expect("best candidate exists");
    let approx = approx.clone().expect("ranked candidates carry an approximant");
    let report = ScanReport {
        best_mu: entry.mu,
        audit_grid: audit.to_vec(),
        entries: built.into_iter().map(|(e, _)| e).collect(),
    };
    Ok((approx, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = log_grid(0.01, 100.0, 5).unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[2] - 1.0).abs() < 1e-12);
        assert!((g[4] - 100.0).abs() < 1e-10);
        assert_eq!(linear_grid(0.0, 1.0, 3).unwrap(), [0.0, 0.5, 1.0]);
        assert!(log_grid(0.0, 1.0, 3).is_err());
        assert_eq!(audit_grid().len(), 41);
    }

    #[test]
    fn summary_picks_worst_point() {
        let rows = [
            SweepRow { lambda: 0.1, e_app: 1.0, e_shoot: 1.0, rel_err: 1e-7 },
            SweepRow { lambda: 0.2, e_app: 1.0, e_shoot: 1.0, rel_err: 3e-6 },
        ];
        assert_eq!(summarize(&rows).unwrap(), SweepSummary { max_rel_err: 3e-6, argmax: 0.2 });
        assert!(summarize(&[]).is_none());
    }

    #[test]
    fn rejects_nonpositive_mu() {
        let bank = SeriesBank::new();
        let err = scan_mu(
            ProblemFamily::quartic(),
            0,
            3,
            &[],
            &bank,
            &[-1.0],
            &[1.0],
            &ShootingConfig::default(),
            Precision::Double,
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }
}
