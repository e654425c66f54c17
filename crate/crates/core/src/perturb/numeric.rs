use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odesolve::{solve_eigen, ChainState, ShootingConfig};
use crate::problem::{PowerPotential, ProblemFamily};

/// Expansion point of a [`SeriesData`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SeriesPoint {
    /// Taylor data `E^α_k` at `λ = α`.
    Finite { alpha: f64 },
    /// Large-coupling data `Ẽ_k`.
    Asymptotic,
}

/// Solver settings a series was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub method: String,
    pub config: ShootingConfig,
    pub x_max: f64,
    pub n_terms: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SeriesMeta {
    pub fn for_chain(method: &str, chain: &ChainState, n_terms: usize) -> Self {
        let config = chain.config().clone();
        let mut warnings = Vec::new();
        if n_terms > config.term_budget {
            warnings.push(format!(
                "{n_terms} terms exceed the budget of {}; late coefficients lose precision",
                config.term_budget
            ));
        }
        SeriesMeta { method: method.into(), x_max: chain.grid().x_max(), config, n_terms, warnings }
    }
}

/// Expansion coefficients of one eigenvalue about one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesData {
    pub family: ProblemFamily,
    pub level: usize,
    pub point: SeriesPoint,
    pub coefficients: Vec<f64>,
    pub meta: SeriesMeta,
}

impl SeriesData {
    pub fn alpha(&self) -> Option<f64> {
        match self.point {
            SeriesPoint::Finite { alpha } => Some(alpha),
            SeriesPoint::Asymptotic => None,
        }
    }

    /// Truncated Taylor sum `Σ_{k<K} E^α_k (λ - α)^k`.
    pub fn taylor(&self, lambda: f64, terms: usize) -> Option<f64> {
        let alpha = self.alpha()?;
        let t = lambda - alpha;
        Some(self.coefficients[..terms.min(self.coefficients.len())].iter().rev().fold(0.0, |acc, c| acc * t + c))
    }
}

/// Taylor coefficients of `E(λ)` at `λ = α` from the chain with
/// `L_α = -d²/dx² + x^a + α x^b` and perturbation `x^b`.
pub fn numeric_series(
    family: ProblemFamily,
    level: usize,
    alpha: f64,
    n_terms: usize,
    config: &ShootingConfig,
) -> Result<SeriesData> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be finite and nonnegative, got {alpha}")));
    }
    if n_terms == 0 {
        return Err(Error::InvalidArgument("at least one term is required".into()));
    }
    let mut chain = ChainState::with_terms(family.potential(alpha), family.b(), level, n_terms, config.clone())?;
    let coefficients = chain.extend_to(n_terms)?.to_vec();
    Ok(SeriesData {
        family,
        level,
        point: SeriesPoint::Finite { alpha },
        coefficients,
        meta: SeriesMeta::for_chain("chain", &chain, n_terms),
    })
}

/// Eigenvalue of `x^a + λ x^b` by shooting.
pub fn eigenvalue(family: ProblemFamily, level: usize, lambda: f64, config: &ShootingConfig) -> Result<f64> {
    Ok(solve_eigen(&family.potential(lambda), level, config)?.energy)
}

/// Centered difference `(E(α+ε) - E(α-ε)) / 2ε`, an independent check on
/// `E^α_1`. Both solves share the box chosen at `α`.
pub fn fd_derivative_oracle(
    family: ProblemFamily,
    level: usize,
    alpha: f64,
    eps: f64,
    config: &ShootingConfig,
) -> Result<f64> {
    if !(eps > 0.0) || !(alpha - eps > 0.0) {
        return Err(Error::InvalidArgument(format!("need 0 < eps < alpha, got eps={eps}, alpha={alpha}")));
    }
    let center = solve_eigen(&family.potential(alpha), level, config)?;
    let fixed = ShootingConfig { x_max: Some(center.psi.grid().x_max()), ..config.clone() };
    let up = eigenvalue(family, level, alpha + eps, &fixed)?;
    let down = eigenvalue(family, level, alpha - eps, &fixed)?;
    Ok((up - down) / (2.0 * eps))
}

/// `E_1` as the expectation value `∫ x^p ψ_0² / ∫ ψ_0²`, evaluated directly.
pub fn rayleigh_first_order(
    potential: &PowerPotential,
    perturbation: u32,
    level: usize,
    config: &ShootingConfig,
) -> Result<f64> {
    let pair = solve_eigen(potential, level, config)?;
    let psi = &pair.psi;
    let num: Vec<f64> =
        psi.values().iter().enumerate().map(|(i, v)| psi.grid().x(i).powi(perturbation as i32) * v * v).collect();
    let den: Vec<f64> = psi.values().iter().map(|v| v * v).collect();
    let h = psi.grid().h();
    Ok(crate::odesolve::simpson(&num, h)? / crate::odesolve::simpson(&den, h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturb::exact_harmonic_series;

    fn quartic() -> ProblemFamily {
        ProblemFamily::quartic()
    }

    #[test]
    fn zero_point_matches_exact() {
        let cfg = ShootingConfig::default();
        for (b, level) in [(4, 0), (4, 1), (6, 0), (6, 1)] {
            let fam = ProblemFamily::new(2, b).unwrap();
            let num = numeric_series(fam, level, 0.0, 5, &cfg).unwrap();
            let exact = exact_harmonic_series(b, level, 5).unwrap().to_f64();
            for (k, (x, y)) in num.coefficients.iter().zip(&exact).enumerate() {
                assert!((x - y).abs() <= 1e-8 * y.abs(), "b={b} level={level} k={k}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn unit_coupling_ground() {
        let s = numeric_series(quartic(), 0, 1.0, 1, &ShootingConfig::default()).unwrap();
        assert!((s.coefficients[0] / 1.392351580103 - 1.0).abs() < 5e-7);
    }

    #[test]
    fn first_excited_at_twenty() {
        let s = numeric_series(quartic(), 1, 20.0, 1, &ShootingConfig::default()).unwrap();
        assert!((s.coefficients[0] / 10.643215959124 - 1.0).abs() < 5e-7, "{}", s.coefficients[0]);
    }

    #[test]
    fn derivative_oracle_agrees_with_chain() {
        let cfg = ShootingConfig::default();
        for (fam, alpha) in [(quartic(), 1.0), (ProblemFamily::sextic(), 0.5)] {
            let chain = numeric_series(fam, 0, alpha, 2, &cfg).unwrap().coefficients[1];
            let fd = fd_derivative_oracle(fam, 0, alpha, 1e-4, &cfg).unwrap();
            assert!((fd - chain).abs() <= 1e-5 * chain.abs(), "{fam}: {fd} vs {chain}");
        }
    }

    #[test]
    fn derivative_oracle_is_second_order() {
        let cfg = ShootingConfig::default();
        let chain = numeric_series(quartic(), 0, 1.0, 2, &cfg).unwrap().coefficients[1];
        let e1 = (fd_derivative_oracle(quartic(), 0, 1.0, 0.04, &cfg).unwrap() - chain).abs();
        let e2 = (fd_derivative_oracle(quartic(), 0, 1.0, 0.02, &cfg).unwrap() - chain).abs();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rayleigh_quotient_equals_chain_energy() {
        let cfg = ShootingConfig::default();
        let w = quartic().potential(0.7);
        let direct = rayleigh_first_order(&w, 4, 0, &cfg).unwrap();
        let chain = numeric_series(quartic(), 0, 0.7, 2, &cfg).unwrap().coefficients[1];
        assert!((direct - chain).abs() <= 1e-10 * chain.abs(), "{direct} {chain}");
    }

    #[test]
    fn truncated_series_approach_small_coupling() {
        let cfg = ShootingConfig::default();
        let s = numeric_series(quartic(), 0, 0.0, 4, &cfg).unwrap();
        let lambda = 0.02;
        let target = eigenvalue(quartic(), 0, lambda, &cfg).unwrap();
        let errs: Vec<f64> = (1..=4).map(|k| (s.taylor(lambda, k).unwrap() - target).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn json_shape() {
        let s = numeric_series(quartic(), 0, 1.0, 1, &ShootingConfig::default()).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["family"], serde_json::json!({"a": 2, "b": 4}));
        assert_eq!(v["point"], serde_json::json!({"type": "finite", "alpha": 1.0}));
        let back: SeriesData = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn budget_warning() {
        let cfg = ShootingConfig { term_budget: 2, ..Default::default() };
        let s = numeric_series(quartic(), 0, 0.0, 3, &cfg).unwrap();
        assert_eq!(s.meta.warnings.len(), 1);
    }
}
