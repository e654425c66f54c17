//! Rows of the matching system.
//!
//! Unknowns are ordered piece by piece, `p_{j,0..=N}` for `j = 0..m`, then
//! `q_1..=q_N`; `q_0 = 1` is fixed.

use crate::error::{Error, Result};
use crate::problem::ProblemFamily;

use super::bank::SeriesBank;
use super::constraint::{check_distinct, Constraint};

/// Generalized binomial coefficient `C(e, k)`.
pub(crate) fn binom(e: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (e - i as f64) / (i + 1) as f64)
}

/// Dense system `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

/// Builds one row per constraint.
pub fn assemble_system(
    family: ProblemFamily,
    degree: usize,
    mu: f64,
    constraints: &[Constraint],
    bank: &SeriesBank,
) -> Result<LinearSystem> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    let unknowns = family.unknown_count(degree);
    if constraints.len() != unknowns {
        return Err(Error::ConstraintCount { constraints: constraints.len(), unknowns });
    }
    check_distinct(constraints)?;

    let structure = family.asymptotic_structure();
    let m = structure.m;
    let n = degree;
    let piece = |j: usize, k: usize| j * (n + 1) + k;
    let q = |k: usize| m * (n + 1) + k - 1;
    let asy_count = constraints
        .iter()
        .filter_map(|c| match c {
            Constraint::AsymptoticMatch { term_index } => Some(term_index + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let terms = structure.terms(asy_count);

    let mut matrix = Vec::with_capacity(unknowns);
    let mut rhs = Vec::with_capacity(unknowns);
    for c in constraints {
        let mut row = vec![0.0; unknowns];
        let value = match *c {
            Constraint::FiniteMatch { alpha, order } => {
                // [t^K] of Σ_j (1+μα+μt)^{e_j} P_j(α+t) - Σ_{k≥1} q_k (α+t)^k E(α+t) = E^α_K
                let base = 1.0 + mu * alpha;
                for j in 0..m {
                    let e = structure.exponent_f64(j);
                    for u in 0..=order {
                        let aux = binom(e, order - u) * mu.powi((order - u) as i32) * base.powf(e - (order - u) as f64);
                        for k in u..=n {
                            row[piece(j, k)] += aux * binom(k as f64, u) * alpha.powi((k - u) as i32);
                        }
                    }
                }
                for k in 1..=n {
                    for u in 0..=k.min(order) {
                        row[q(k)] -=
                            binom(k as f64, u) * alpha.powi((k - u) as i32) * bank.coefficient(alpha, order - u)?;
                    }
                }
                bank.coefficient(alpha, order)?
            }
            Constraint::AsymptoticMatch { term_index } => {
                // [λ'^r] of (λ'+μ)^{e_j} λ'^N P_j(1/λ') = λ'^N Q(1/λ') S_j(λ')
                let t = terms[term_index];
                let (j, r) = (t.piece, t.order);
                let e = structure.exponent_f64(j);
                let series = |u: usize| -> Result<f64> {
                    if !u.is_multiple_of(structure.s) {
                        return Ok(0.0);
                    }
                    bank.asymptotic_coefficient(m * (u / structure.s) + j)
                };
                for s in 0..=r.min(n) {
                    row[piece(j, n - s)] += binom(e, r - s) * mu.powf(e - (r - s) as f64);
                }
                for s in (0..n).take_while(|&s| s <= r) {
                    row[q(n - s)] -= series(r - s)?;
                }
                if r >= n {
                    series(r - n)?
                } else {
                    0.0
                }
            }
        };
        matrix.push(row);
        rhs.push(value);
    }
    Ok(LinearSystem { matrix, rhs })
}
