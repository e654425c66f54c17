use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{format_ratio, ProblemFamily};

use super::bank::SeriesBank;
use super::constraint::Constraint;
use super::defect::{check_defect_free, DefectReport};
use super::jet::Jet;
use super::linalg::{solve_coefficients, Precision, SolveReport};
use super::system::assemble_system;

/// One rational piece `(1 + μλ)^{e_j} P_j(λ) / Q(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    /// `e_j` as an exact rational string.
    pub exponent: String,
    /// `P_j` from degree 0 up.
    pub coeffs: Vec<f64>,
}

/// `E_app(λ) = Σ_j (1 + μλ)^{e_j} P_j(λ) / Q(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Approximant {
    pub family: ProblemFamily,
    pub level: usize,
    #[serde(rename = "N")]
    pub degree: usize,
    pub mu: f64,
    pub pieces: Vec<Piece>,
    /// `q_1..=q_N`; `q_0 = 1`.
    pub q: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// `‖Ax - b‖∞ / ‖b‖∞` of the solve that produced the coefficients.
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveReport>,
    pub defect: DefectReport,
}

impl Approximant {
    /// Wraps given coefficients, e.g. published ones. Runs the defect check.
    pub fn from_coefficients(
        family: ProblemFamily,
        level: usize,
        mu: f64,
        pieces: Vec<Vec<f64>>,
        q: Vec<f64>,
    ) -> Result<Self> {
        let structure = family.asymptotic_structure();
        let degree = q.len();
        if pieces.len() != structure.m || pieces.iter().any(|p| p.len() != degree + 1) {
            return Err(Error::InvalidArgument(format!(
                "expected {} pieces of {} coefficients",
                structure.m,
                degree + 1
            )));
        }
        if !(mu > 0.0) {
            return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
        }
        let pieces = pieces
            .into_iter()
            .zip(&structure.exponents)
            .map(|(coeffs, e)| Piece { exponent: format_ratio(e), coeffs })
            .collect();
        let defect = check_defect_free(&q);
        Ok(Approximant {
            family,
            level,
            degree,
            mu,
            pieces,
            q,
            constraints: Vec::new(),
            residual: None,
            solve: None,
            defect,
        })
    }

    fn exponents(&self) -> Vec<f64> {
        let structure = self.family.asymptotic_structure();
        (0..structure.m).map(|j| structure.exponent_f64(j)).collect()
    }

    pub fn exponent(&self, piece: usize) -> Rational64 {
        self.family.asymptotic_structure().exponents[piece]
    }

    /// `1, q_1, …, q_N`.
    pub fn denominator(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.q.iter().copied()).collect()
    }

    pub fn is_defect_free(&self) -> bool {
        self.defect.defect_free
    }

    /// `E_app(λ)` for `λ ≥ 0`.
    pub fn evaluate(&self, lambda: f64) -> Result<f64> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be finite and nonnegative, got {lambda}")));
        }
        let horner = |p: &[f64]| p.iter().rev().fold(0.0, |acc, c| acc * lambda + c);
        let den = self.denominator();
        let q = horner(&den);
        // Q(0) = 1, so Q ≤ 0 means a root was crossed
        let scale: f64 = den.iter().enumerate().map(|(k, c)| (c * lambda.powi(k as i32)).abs()).sum();
        if q <= 64.0 * f64::EPSILON * scale {
            return Err(Error::Pole { lambda });
        }
        let aux = 1.0 + self.mu * lambda;
        Ok(self.pieces.iter().zip(self.exponents()).map(|(p, e)| aux.powf(e) * horner(&p.coeffs)).sum::<f64>() / q)
    }

    /// Taylor coefficients `E_app^{(k)}(λ0)/k!` for `k ≤ order`.
    pub fn taylor(&self, lambda0: f64, order: usize) -> Result<Vec<f64>> {
        if !(lambda0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("lambda must be nonnegative, got {lambda0}")));
        }
        let x = Jet::variable(lambda0, order);
        let aux = x.scale(self.mu).add_scalar(1.0);
        let mut num = Jet::constant(0.0, order);
        for (p, e) in self.pieces.iter().zip(self.exponents()) {
            num = &num + &(&aux.powf(e) * &x.polynomial(&p.coeffs));
        }
        let q = x.polynomial(&self.denominator());
        if q.c[0] <= 0.0 {
            return Err(Error::Pole { lambda: lambda0 });
        }
        Ok((&num / &q).c)
    }

    /// `μ^{e_j} p_{j,N} / q_N`, the coefficient of `λ^{e_j}` as `λ → ∞`.
    pub fn leading_ratio(&self, piece: usize) -> f64 {
        let e = self.exponents()[piece];
        let lead = self.pieces[piece].coeffs[self.degree];
        let qn = if self.degree == 0 { 1.0 } else { self.q[self.degree - 1] };
        self.mu.powf(e) * lead / qn
    }

    /// Coefficients in solver order: pieces, then `q`.
    pub fn unknowns(&self) -> Vec<f64> {
        self.pieces.iter().flat_map(|p| p.coeffs.iter().copied()).chain(self.q.iter().copied()).collect()
    }
}

/// Assembles and solves the matching system for the given constraints.
/// The result carries its defect report; it is not rejected here.
pub fn build_approximant(
    family: ProblemFamily,
    level: usize,
    degree: usize,
    mu: f64,
    constraints: &[Constraint],
    bank: &SeriesBank,
    precision: Precision,
) -> Result<Approximant> {
    let system = assemble_system(family, degree, mu, constraints, bank)?;
    let solution = solve_coefficients(&system.matrix, &system.rhs, precision)?;
    let m = family.piece_count();
    let x = &solution.x;
    let pieces = (0..m).map(|j| x[j * (degree + 1)..(j + 1) * (degree + 1)].to_vec()).collect();
    let q = x[m * (degree + 1)..].to_vec();
    let mut approx = Approximant::from_coefficients(family, level, mu, pieces, q)?;
    approx.constraints = constraints.to_vec();
    approx.residual = Some(solution.report.residual);
    approx.solve = Some(solution.report);
    Ok(approx)
}
