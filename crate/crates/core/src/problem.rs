//! Problem normalization and the combinatorics of the large-coupling expansion.
//!
//! Every potential `A x^a + B x^b` is reduced to the one-parameter form
//! `x^a + λ x^b`. The large-λ expansion of an eigenvalue splits into `m`
//! pieces, each a series in `λ^{-s}` multiplied by a fractional power
//! `λ^{e_j}`. All exponent bookkeeping is exact.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent pair `(a, b)` of `x^a + λ x^b`; both even with `b > a >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct ProblemFamily {
    a: u32,
    b: u32,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    a: u32,
    b: u32,
}

impl TryFrom<RawFamily> for ProblemFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        ProblemFamily::new(raw.a, raw.b)
    }
}

impl From<ProblemFamily> for RawFamily {
    fn from(f: ProblemFamily) -> Self {
        RawFamily { a: f.a, b: f.b }
    }
}

impl ProblemFamily {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        let reason = if a < 2 {
            Some("a must be at least 2")
        } else if b <= a {
            Some("b must exceed a")
        } else if !a.is_multiple_of(2) || !b.is_multiple_of(2) {
            Some("only even exponents are supported")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidFamily { a, b, reason }),
            None => Ok(ProblemFamily { a, b }),
        }
    }

    /// `x^2 + λ x^4`.
    pub fn quartic() -> Self {
        ProblemFamily { a: 2, b: 4 }
    }

    /// `x^2 + λ x^6`.
    pub fn sextic() -> Self {
        ProblemFamily { a: 2, b: 6 }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// `gcd(a + 2, b + 2)`.
    pub fn gcd(&self) -> u32 {
        (self.a + 2).gcd(&(self.b + 2))
    }

    pub fn piece_count(&self) -> usize {
        ((self.b + 2) / self.gcd()) as usize
    }

    pub fn lambda_step(&self) -> usize {
        ((self.a + 2) / self.gcd()) as usize
    }

    pub fn asymptotic_structure(&self) -> AsymptoticStructure {
        asymptotic_structure(*self)
    }

    /// Number of unknowns of a degree-`n` approximant: `m (N + 1) + N`.
    pub fn unknown_count(&self, degree: usize) -> usize {
        self.piece_count() * (degree + 1) + degree
    }

    /// `x^a + λ x^b`.
    pub fn potential(&self, lambda: f64) -> PowerPotential {
        PowerPotential::new(vec![(1.0, self.a), (lambda, self.b)])
    }

    /// `y^b + λ̃ y^a`, the operator of the scaled large-coupling frame.
    pub fn scaled_potential(&self, lambda_tilde: f64) -> PowerPotential {
        PowerPotential::new(vec![(1.0, self.b), (lambda_tilde, self.a)])
    }
}

impl fmt::Display for ProblemFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} + λ x^{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_level(level: usize) -> Self {
        if level.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Initial `(value, slope)` at the origin used for homogeneous solutions.
    pub fn initial_condition(self) -> (f64, f64) {
        match self {
            Parity::Even => (1.0, 0.0),
            Parity::Odd => (0.0, 1.0),
        }
    }
}

/// A concrete eigenvalue problem `-ψ'' + (x^a + λ x^b) ψ = E ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedProblem {
    pub family: ProblemFamily,
    pub lambda: f64,
    pub level: usize,
}

impl ReducedProblem {
    pub fn new(family: ProblemFamily, lambda: f64, level: usize) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("coupling must be finite and nonnegative, got {lambda}")));
        }
        Ok(ReducedProblem { family, lambda, level })
    }

    pub fn parity(&self) -> Parity {
        Parity::of_level(self.level)
    }

    pub fn potential(&self) -> PowerPotential {
        self.family.potential(self.lambda)
    }
}

/// Confining potential evaluated pointwise.
pub trait Potential: Sync {
    fn value(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> Potential for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Sum of monomials `Σ c_i x^{p_i}` with nonnegative coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPotential {
    terms: Vec<(f64, u32)>,
}

impl PowerPotential {
    pub fn new(terms: Vec<(f64, u32)>) -> Self {
        let terms = terms.into_iter().filter(|&(c, _)| c != 0.0).collect();
        PowerPotential { terms }
    }

    pub fn monomial(power: u32) -> Self {
        PowerPotential::new(vec![(1.0, power)])
    }

    pub fn terms(&self) -> &[(f64, u32)] {
        &self.terms
    }
}

impl Potential for PowerPotential {
    fn value(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(c, p)| c * x.powi(p as i32)).sum()
    }
}

/// Scaling data from [`reduce_potential`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    pub lambda: f64,
    /// Physical `x` equals `x_scale` times the reduced coordinate.
    pub x_scale: f64,
    /// Physical `E` equals `e_scale` times the reduced eigenvalue.
    pub e_scale: f64,
}

/// Reduce `-ψ'' + (A x^a + B x^b) ψ = E ψ` to the one-parameter form.
pub fn reduce_potential(a_coeff: f64, b_coeff: f64, a: u32, b: u32) -> Result<Reduction> {
    ProblemFamily::new(a, b)?;
    if !(a_coeff > 0.0) || !a_coeff.is_finite() {
        return Err(Error::InvalidArgument(format!("coefficient of x^{a} must be positive, got {a_coeff}")));
    }
    if !(b_coeff >= 0.0) || !b_coeff.is_finite() {
        return Err(Error::InvalidArgument(format!("coefficient of x^{b} must be nonnegative, got {b_coeff}")));
    }
    let a2 = f64::from(a + 2);
    let b2 = f64::from(b + 2);
    Ok(Reduction {
        lambda: a_coeff.powf(-b2 / a2) * b_coeff,
        x_scale: a_coeff.powf(-1.0 / a2),
        e_scale: a_coeff.powf(2.0 / a2),
    })
}

/// Scaling into the large-coupling frame `x = λ^{-1/(b+2)} y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticScaling {
    pub lambda_tilde: f64,
    pub y_scale: f64,
    /// `E = e_tilde_scale · Ẽ`.
    pub e_tilde_scale: f64,
}

pub fn scale_to_asymptotic(lambda: f64, family: ProblemFamily) -> Result<AsymptoticScaling> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("the large-coupling frame needs lambda > 0, got {lambda}")));
    }
    let a2 = f64::from(family.a + 2);
    let b2 = f64::from(family.b + 2);
    Ok(AsymptoticScaling {
        lambda_tilde: lambda.powf(-a2 / b2),
        y_scale: lambda.powf(-1.0 / b2),
        e_tilde_scale: lambda.powf(2.0 / b2),
    })
}

/// Exact piece structure of the large-coupling expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticStructure {
    pub m: usize,
    pub s: usize,
    pub exponents: Vec<Rational64>,
}

/// One power `λ^{e_j - r}` reachable by piece `j` at order `r` in `λ' = 1/λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsymptoticTerm {
    pub piece: usize,
    pub order: usize,
    /// Index `i` of the coefficient `Ẽ_i` sitting at this power, if any.
    pub coefficient: Option<usize>,
}

impl AsymptoticStructure {
    pub fn exponent_f64(&self, piece: usize) -> f64 {
        let e = self.exponents[piece];
        *e.numer() as f64 / *e.denom() as f64
    }

    /// Piece and order in `λ'` of the coefficient `Ẽ_i`.
    pub fn locate(&self, index: usize) -> (usize, usize) {
        (index % self.m, self.s * (index / self.m))
    }

    /// The first `count` powers of λ reachable by the approximant pieces,
    /// in decreasing order. Powers with no `Ẽ` coefficient have a zero
    /// expansion coefficient but still count as matched terms.
    pub fn terms(&self, count: usize) -> Vec<AsymptoticTerm> {
        let mut out = Vec::with_capacity(count);
        let mut next_order = vec![0usize; self.m];
        while out.len() < count {
            // pieces have distinct exponents mod 1, so the maximum is unique
            let (piece, _) = (0..self.m)
                .map(|j| (j, self.exponents[j] - Rational64::from_integer(next_order[j] as i64)))
                .max_by(|x, y| x.1.cmp(&y.1).then(Ordering::Equal))
                .expect("at least one piece");
            let order = next_order[piece];
            let coefficient = order.is_multiple_of(self.s).then(|| self.m * (order / self.s) + piece);
            out.push(AsymptoticTerm { piece, order, coefficient });
            next_order[piece] += 1;
        }
        out
    }
}

pub fn asymptotic_structure(family: ProblemFamily) -> AsymptoticStructure {
    let m = family.piece_count();
    let s = family.lambda_step();
    let b2 = i64::from(family.b + 2);
    let a2 = i64::from(family.a + 2);
    let exponents = (0..m as i64).map(|j| Rational64::new(2 - j * a2, b2)).collect();
    AsymptoticStructure { m, s, exponents }
}

/// Formats an exact rational as `"n"` or `"n/d"`.
pub fn format_ratio(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn quartic_and_sextic_structure() {
        let q = asymptotic_structure(ProblemFamily::quartic());
        assert_eq!((q.m, q.s), (3, 2));
        assert_eq!(q.exponents, vec![r(1, 3), r(-1, 3), r(-1, 1)]);
        let s = asymptotic_structure(ProblemFamily::sextic());
        assert_eq!((s.m, s.s), (2, 1));
        assert_eq!(s.exponents, vec![r(1, 4), r(-1, 4)]);
    }

    #[test]
    fn general_structure_by_regrouping() {
        // Regroup λ^{2/(b+2)} Σ Ẽ_k λ^{-k(a+2)/(b+2)} by exponent mod 1 and read
        // off the distinct leading exponents and the in-piece step.
        let fam = ProblemFamily::new(4, 6).unwrap();
        let st = fam.asymptotic_structure();
        let lead = r(2, 8);
        let step = r(6, 8);
        let mut seen: Vec<Rational64> = Vec::new();
        let mut first_repeat = None;
        for k in 0..20i64 {
            let e = lead - step * k;
            let frac = e - e.floor();
            if seen.iter().any(|x| *x - x.floor() == frac) {
                first_repeat.get_or_insert(k);
                continue;
            }
            seen.push(e);
        }
        assert_eq!(st.m, 4);
        assert_eq!(first_repeat, Some(4));
        assert_eq!(st.exponents, seen);
        assert_eq!(st.exponents, vec![r(1, 4), r(-1, 2), r(-5, 4), r(-2, 1)]);
        assert_eq!(st.s, 3);
        // piece 0 restarts after m terms, displaced by exactly s integer powers
        assert_eq!(lead - step * 4, lead - Rational64::from_integer(3));
    }

    #[test]
    fn family_validation() {
        assert!(ProblemFamily::new(2, 3).is_err());
        assert!(ProblemFamily::new(3, 6).is_err());
        assert!(ProblemFamily::new(4, 4).is_err());
        assert!(ProblemFamily::new(0, 4).is_err());
        assert!(ProblemFamily::new(6, 4).is_err());
        assert!(ProblemFamily::new(2, 8).is_ok());
    }

    #[test]
    fn reduce_identity_and_harmonic() {
        let red = reduce_potential(1.0, 0.5, 2, 4).unwrap();
        assert_eq!((red.lambda, red.x_scale, red.e_scale), (0.5, 1.0, 1.0));
        let red = reduce_potential(4.0, 0.0, 2, 4).unwrap();
        assert_eq!(red.lambda, 0.0);
        assert!((red.e_scale - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reduce_sextic_example() {
        let red = reduce_potential(2.0, 3.0, 2, 6).unwrap();
        assert!((red.lambda - 0.75).abs() < 1e-15);
        assert!((red.e_scale - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert!(reduce_potential(0.0, 1.0, 2, 4).is_err());
        assert!(reduce_potential(-1.0, 1.0, 2, 4).is_err());
        assert!(reduce_potential(1.0, -1.0, 2, 4).is_err());
        assert!(reduce_potential(1.0, 1.0, 3, 4).is_err());
        assert!(reduce_potential(1.0, 1.0, 4, 2).is_err());
    }

    #[test]
    fn asymptotic_scaling_examples() {
        let s = scale_to_asymptotic(1.0, ProblemFamily::quartic()).unwrap();
        assert_eq!((s.lambda_tilde, s.e_tilde_scale), (1.0, 1.0));
        let s = scale_to_asymptotic(8.0, ProblemFamily::sextic()).unwrap();
        assert!((s.lambda_tilde - 0.353553390593).abs() < 1e-11);
        assert!((s.e_tilde_scale - 8f64.powf(0.25)).abs() < 1e-15);
        assert!(scale_to_asymptotic(0.0, ProblemFamily::sextic()).is_err());
    }

    #[test]
    fn quartic_terms_follow_decreasing_powers() {
        let st = ProblemFamily::quartic().asymptotic_structure();
        let t = st.terms(8);
        let pairs: Vec<_> = t.iter().map(|t| (t.piece, t.order, t.coefficient)).collect();
        assert_eq!(
            pairs,
            vec![
                (0, 0, Some(0)),
                (1, 0, Some(1)),
                (0, 1, None),
                (2, 0, Some(2)),
                (1, 1, None),
                (0, 2, Some(3)),
                (2, 1, None),
                (1, 2, Some(4)),
            ]
        );
    }

    #[test]
    fn sextic_terms_are_consecutive() {
        let st = ProblemFamily::sextic().asymptotic_structure();
        let idx: Vec<_> = st.terms(6).iter().map(|t| t.coefficient).collect();
        assert_eq!(idx, (0..6).map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn ratio_format() {
        assert_eq!(format_ratio(&r(1, 3)), "1/3");
        assert_eq!(format_ratio(&r(-1, 1)), "-1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn piece_exponent_identities(ha in 1u32..6, db in 1u32..6) {
                let fam = ProblemFamily::new(2 * ha, 2 * ha + 2 * db).unwrap();
                let st = fam.asymptotic_structure();
                let ratio = Rational64::new(i64::from(fam.a() + 2), i64::from(fam.b() + 2));
                for j in 0..st.m - 1 {
                    prop_assert_eq!(st.exponents[j] - st.exponents[j + 1], ratio);
                }
                prop_assert_eq!(ratio * st.m as i64, Rational64::from_integer(st.s as i64));
                prop_assert!(st.exponents[0] > Rational64::from_integer(0));
                prop_assert!(st.m >= 2);
            }

            #[test]
            fn lambda_tilde_is_decreasing(l1 in 1e-3f64..1e3, f in 1.0001f64..10.0) {
                let fam = ProblemFamily::quartic();
                let lo = scale_to_asymptotic(l1, fam).unwrap().lambda_tilde;
                let hi = scale_to_asymptotic(l1 * f, fam).unwrap().lambda_tilde;
                prop_assert!(hi < lo);
            }
        }
    }
}
