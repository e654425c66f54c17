//! Large-coupling coefficients `Ẽ_k`.
//!
//! In the scaled frame `x = λ^{-1/(b+2)} y` the problem reads
//! `-ψ'' + (y^b + λ̃ y^a) ψ = Ẽ ψ` with `λ̃ = λ^{-(a+2)/(b+2)}`, so the same
//! chain as at `λ = 0` applies with the roles of the exponents swapped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odesolve::{ChainState, ShootingConfig};
use crate::perturb::{SeriesData, SeriesMeta, SeriesPoint};
use crate::problem::{PowerPotential, ProblemFamily};

/// `Ẽ_0 .. Ẽ_{K-1}` with their grouping into pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    pub family: ProblemFamily,
    pub level: usize,
    pub coefficients: Vec<f64>,
    /// Piece `j` holds `Ẽ_j, Ẽ_{m+j}, Ẽ_{2m+j}, …`.
    pub pieces: Vec<Vec<f64>>,
}

impl AsymptoticSeries {
    pub fn from_coefficients(family: ProblemFamily, level: usize, coefficients: Vec<f64>) -> Self {
        let m = family.piece_count();
        let mut pieces = vec![Vec::new(); m];
        for (i, c) in coefficients.iter().enumerate() {
            pieces[i % m].push(*c);
        }
        AsymptoticSeries { family, level, coefficients, pieces }
    }

    /// Interleaves the pieces back into global index order.
    pub fn flatten(&self) -> Vec<f64> {
        let m = self.pieces.len();
        let total: usize = self.pieces.iter().map(Vec::len).sum();
        (0..total).map(|i| self.pieces[i % m][i / m]).collect()
    }
}

/// Runs the scaled-frame chain with base `y^b` and perturbation `y^a`.
pub fn asymptotic_series(
    family: ProblemFamily,
    level: usize,
    n_terms: usize,
    config: &ShootingConfig,
) -> Result<(AsymptoticSeries, SeriesData)> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("at least one term is required".into()));
    }
    let base = PowerPotential::monomial(family.b());
    let mut chain = ChainState::with_terms(base, family.a(), level, n_terms, config.clone())?;
    let coefficients = chain.extend_to(n_terms)?.to_vec();
    let data = SeriesData {
        family,
        level,
        point: SeriesPoint::Asymptotic,
        coefficients: coefficients.clone(),
        meta: SeriesMeta::for_chain("scaled-frame chain", &chain, n_terms),
    };
    Ok((AsymptoticSeries::from_coefficients(family, level, coefficients), data))
}

/// `Σ_{i<K} Ẽ_i λ^{(2 - i(a+2))/(b+2)}`, the first `K` terms in global
/// index order.
pub fn eval_asymptotic(series: &AsymptoticSeries, lambda: f64, terms: usize) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    if terms > series.coefficients.len() {
        return Err(Error::InvalidArgument(format!(
            "{terms} terms requested, {} available",
            series.coefficients.len()
        )));
    }
    let a2 = f64::from(series.family.a() + 2);
    let b2 = f64::from(series.family.b() + 2);
    Ok(series.coefficients[..terms].iter().enumerate().map(|(i, c)| c * lambda.powf((2.0 - i as f64 * a2) / b2)).sum())
}
