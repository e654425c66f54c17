use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::asymptotic_series;
use crate::error::{Error, Result};
use crate::odesolve::ShootingConfig;
use crate::perturb::{exact_harmonic_series, numeric_series, SeriesData, SeriesPoint};
use crate::problem::ProblemFamily;

use super::constraint::{same_alpha, Constraint};

/// Expansion data referenced by a constraint set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesBank {
    finite: Vec<(f64, Vec<f64>)>,
    asymptotic: Vec<f64>,
}

impl SeriesBank {
    pub fn new() -> Self {
        SeriesBank::default()
    }

    pub fn insert_finite(&mut self, alpha: f64, coefficients: Vec<f64>) {
        match self.finite.iter_mut().find(|(a, _)| same_alpha(*a, alpha)) {
            Some(slot) => slot.1 = coefficients,
            None => self.finite.push((alpha, coefficients)),
        }
    }

    pub fn set_asymptotic(&mut self, coefficients: Vec<f64>) {
        self.asymptotic = coefficients;
    }

    pub fn insert(&mut self, series: &SeriesData) {
        match series.point {
            SeriesPoint::Finite { alpha } => self.insert_finite(alpha, series.coefficients.clone()),
            SeriesPoint::Asymptotic => self.set_asymptotic(series.coefficients.clone()),
        }
    }

    pub fn finite(&self, alpha: f64) -> Option<&[f64]> {
        self.finite.iter().find(|(a, _)| same_alpha(*a, alpha)).map(|(_, c)| c.as_slice())
    }

    pub fn asymptotic(&self) -> &[f64] {
        &self.asymptotic
    }

    /// `E^α_k`.
    pub fn coefficient(&self, alpha: f64, k: usize) -> Result<f64> {
        self.finite(alpha).and_then(|c| c.get(k).copied()).ok_or_else(|| Error::MissingSeries(format!("E^{alpha}_{k}")))
    }

    /// `Ẽ_i`.
    pub fn asymptotic_coefficient(&self, i: usize) -> Result<f64> {
        self.asymptotic.get(i).copied().ok_or_else(|| Error::MissingSeries(format!("asymptotic coefficient {i}")))
    }

    /// Computes every series a constraint set needs: exact rationals at
    /// `λ = 0` when `a = 2`, chains elsewhere, in parallel over points.
    pub fn compute(
        family: ProblemFamily,
        level: usize,
        constraints: &[Constraint],
        config: &ShootingConfig,
    ) -> Result<SeriesBank> {
        let mut bank = SeriesBank::new();
        bank.fill(family, level, constraints, config)?;
        Ok(bank)
    }

    /// Computes only the series that are absent or too short.
    pub fn fill(
        &mut self,
        family: ProblemFamily,
        level: usize,
        constraints: &[Constraint],
        config: &ShootingConfig,
    ) -> Result<()> {
        let mut needs: Vec<(f64, usize)> = Vec::new();
        let mut asy_terms = 0;
        for c in constraints {
            match *c {
                Constraint::FiniteMatch { alpha, order } => {
                    match needs.iter_mut().find(|(a, _)| same_alpha(*a, alpha)) {
                        Some(slot) => slot.1 = slot.1.max(order + 1),
                        None => needs.push((alpha, order + 1)),
                    }
                }
                Constraint::AsymptoticMatch { term_index } => asy_terms = asy_terms.max(term_index + 1),
            }
        }
        needs.retain(|&(alpha, n)| self.finite(alpha).is_none_or(|c| c.len() < n));
        let asy_needed = family
            .asymptotic_structure()
            .terms(asy_terms)
            .iter()
            .filter_map(|t| t.coefficient)
            .max()
            .map_or(0, |i| i + 1);

        let finite: Vec<(f64, Vec<f64>)> = needs
            .par_iter()
            .map(|&(alpha, n)| {
                let coeffs = if alpha == 0.0 && family.a() == 2 {
                    exact_harmonic_series(family.b(), level, n)?.to_f64()
                } else {
                    numeric_series(family, level, alpha, n, config)?.coefficients
                };
                Ok((alpha, coeffs))
            })
            .collect::<Result<_>>()?;
        for (alpha, coeffs) in finite {
            self.insert_finite(alpha, coeffs);
        }
        if asy_needed > self.asymptotic.len() {
            let scaled =
                ShootingConfig { min_x_max: ShootingConfig::scaled_frame(family.b()).min_x_max, ..config.clone() };
            self.asymptotic = asymptotic_series(family, level, asy_needed, &scaled)?.0.coefficients;
        }
        Ok(())
    }
}
