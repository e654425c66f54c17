//! Exact Rayleigh–Schrödinger series about the harmonic oscillator.
//!
//! With `ψ_n = P_n(x) e^{-x²/2}` and `E_0 = 2ℓ + 1` the chain becomes the
//! polynomial recurrence `-P_n'' + 2x P_n' - 2ℓ P_n = R_n`, i.e.
//!
//! ```text
//! (2k - 2ℓ) c_k - (k + 2)(k + 1) c_{k+2} = r_k
//! ```
//!
//! solved from the top degree down. At `k = ℓ` the left side loses `c_ℓ`,
//! which yields `E_n`; `c_ℓ` itself is the gauge and is set to zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact energies `E_k` and polynomial parts of `ψ_k` for `x² + λ x^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeries {
    pub level: usize,
    pub b: u32,
    pub coefficients: Vec<BigRational>,
    /// `polys[n][k]` is the coefficient of `x^k` in `P_n`.
    pub polys: Vec<Vec<BigRational>>,
}

impl RationalSeries {
    pub fn to_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Coefficients as `"num/den"` strings, or `"num"` for integers.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for RationalSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let polys: Vec<Vec<String>> = self.polys.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect();
        let mut st = s.serialize_struct("RationalSeries", 4)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("coefficients", &self.coefficient_strings())?;
        st.serialize_field("polys", &polys)?;
        st.end()
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact `E_0 .. E_{n_terms-1}` for `x² + λ x^b` at the given level.
pub fn exact_harmonic_series(b: u32, level: usize, n_terms: usize) -> Result<RationalSeries> {
    if b < 4 || !b.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("perturbation exponent must be even and >= 4, got {b}")));
    }
    if n_terms == 0 {
        return Err(Error::InvalidArgument("at least one term is required".into()));
    }
    let l = level;
    let b = b as usize;

    // Hermite polynomial with unit leading coefficient
    let mut p0 = vec![BigRational::zero(); l + 1];
    p0[l] = int(1);
    let mut k = l;
    while k >= 2 {
        let kk = k - 2;
        p0[kk] = &p0[k] * int((k * (k - 1)) as i64) / int(2 * kk as i64 - 2 * l as i64);
        k -= 2;
    }

    let mut energies = vec![int(2 * l as i64 + 1)];
    let mut polys = vec![p0];
    for n in 1..n_terms {
        let deg = l + b * n;
        // r without the E_n P_0 term
        let mut r = vec![BigRational::zero(); deg + 1];
        for (k, pk) in polys.iter().enumerate().skip(1) {
            let e = &energies[n - k];
            for (i, c) in pk.iter().enumerate() {
                if !c.is_zero() {
                    r[i] += e * c;
                }
            }
        }
        for (i, c) in polys[n - 1].iter().enumerate() {
            if !c.is_zero() {
                r[i + b] -= c;
            }
        }

        let mut c = vec![BigRational::zero(); deg + 3];
        let mut e_n = BigRational::zero();
        let mut k = deg as i64;
        while k >= 0 {
            let ku = k as usize;
            let up = int(((ku + 2) * (ku + 1)) as i64) * &c[ku + 2];
            if ku == l {
                // 0 = r_ℓ + E_n p0_ℓ + (ℓ+2)(ℓ+1) c_{ℓ+2}
                e_n = -(&r[ku] + &up) / &polys[0][l];
            } else {
                let mut rk = r[ku].clone();
                if ku < l {
                    rk += &e_n * &polys[0][ku];
                }
                c[ku] = (rk + up) / int(2 * ku as i64 - 2 * l as i64);
            }
            k -= 2;
        }
        c.truncate(deg + 1);
        energies.push(e_n);
        polys.push(c);
    }
    Ok(RationalSeries { level, b: b as u32, coefficients: energies, polys })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(b: u32, level: usize, n: usize) -> Vec<String> {
        exact_harmonic_series(b, level, n).unwrap().coefficient_strings()
    }

    #[test]
    fn quartic_ground() {
        assert_eq!(strings(4, 0, 6), ["1", "3/4", "-21/16", "333/64", "-30885/1024", "916731/4096"]);
    }

    #[test]
    fn quartic_second_excited() {
        assert_eq!(strings(4, 2, 4), ["5", "39/4", "-615/16", "20079/64"]);
    }

    #[test]
    fn sextic_first_excited() {
        assert_eq!(strings(6, 1, 5), ["3", "105/8", "-47145/128", "27817125/1024", "-110913018405/32768"]);
    }

    #[test]
    fn first_correction_polynomial() {
        let s = exact_harmonic_series(4, 0, 2).unwrap();
        let p1: Vec<String> = s.polys[1].iter().map(|c| c.to_string()).collect();
        assert_eq!(p1, ["0", "0", "-3/8", "0", "-1/8"]);
    }

    #[test]
    fn degrees_and_parity() {
        let s = exact_harmonic_series(4, 3, 4).unwrap();
        for (n, p) in s.polys.iter().enumerate() {
            assert_eq!(p.len(), 3 + 4 * n + 1);
            for (k, c) in p.iter().enumerate() {
                if k % 2 == 0 {
                    assert!(c.is_zero(), "even power {k} in odd level");
                }
            }
        }
    }

    #[test]
    fn first_order_is_expectation_of_perturbation() {
        // E_1 = <x^b> in the harmonic state; for b=4, level n:
        // (3/4)(2n² + 2n + 1)
        for n in 0..6usize {
            let s = exact_harmonic_series(4, n, 2).unwrap();
            let expect = BigRational::new(BigInt::from(3 * (2 * n * n + 2 * n + 1)), BigInt::from(4));
            assert_eq!(s.coefficients[1], expect, "level {n}");
        }
    }

    #[test]
    fn json_uses_fraction_strings() {
        let s = exact_harmonic_series(4, 0, 3).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["coefficients"], serde_json::json!(["1", "3/4", "-21/16"]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(exact_harmonic_series(3, 0, 2).is_err());
        assert!(exact_harmonic_series(4, 0, 0).is_err());
    }
}
