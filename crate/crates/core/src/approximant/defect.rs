//! Positive real roots of the denominator `Q(λ) = 1 + Σ q_k λ^k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Result of the defect check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub defect_free: bool,
    /// Positive roots of `Q`, ascending.
    pub positive_roots: Vec<f64>,
    /// `"positive-coefficients"` when the sign screen settled it,
    /// `"sturm"` otherwise.
    pub method: String,
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[BigRational]) -> Poly {
    p.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect()
}

/// Remainder of `a / b`.
fn rem(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db && !r.is_empty() {
        let f = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            let d = &f * bi;
            r[shift + i] -= d;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn sturm_sequence(p: &[BigRational]) -> Vec<Poly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<bool> = seq.iter().map(|p| eval(p, x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(lo, hi]`.
fn count(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

fn isolate(seq: &[Poly], lo: BigRational, hi: BigRational, out: &mut Vec<(BigRational, BigRational)>) {
    match count(seq, &lo, &hi) {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            isolate(seq, lo, mid.clone(), out);
            isolate(seq, mid, hi, out);
        }
    }
}

/// Screens `Q` by coefficient signs, falling back to exact Sturm
/// isolation on `(0, Cauchy bound]`. Roots are refined to f64 precision.
pub fn check_defect_free(q: &[f64]) -> DefectReport {
    if q.iter().all(|v| *v >= 0.0) {
        return DefectReport { defect_free: true, positive_roots: Vec::new(), method: "positive-coefficients".into() };
    }
    let mut coeffs = vec![BigRational::one()];
    coeffs.extend(q.iter().map(|v| BigRational::from_float(*v).unwrap_or_else(BigRational::zero)));
    let p = trim(coeffs);
    let lead = p.last().unwrap().abs();
    let bound = BigRational::one()
        + p[..p.len() - 1].iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |m, v| if v > m { v } else { m });

    // Work with the square-free part so every root is a sign change.
    let seq = sturm_sequence(&p);
    let mut intervals = Vec::new();
    isolate(&seq, BigRational::zero(), bound, &mut intervals);
    let square_free = {
        let g = seq.last().unwrap();
        if g.len() > 1 {
            divide(&p, g)
        } else {
            p.clone()
        }
    };

    let mut roots = Vec::new();
    for (mut lo, mut hi) in intervals {
        if eval(&square_free, &hi).is_zero() {
            roots.push(hi.to_f64().unwrap_or(f64::NAN));
            continue;
        }
        let lo_positive = eval(&square_free, &lo).is_positive();
        for _ in 0..200 {
            let (l, h) = (lo.to_f64().unwrap_or(0.0), hi.to_f64().unwrap_or(0.0));
            if h - l <= f64::EPSILON * h.abs() {
                break;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            // round the midpoint to an f64 to keep the rationals small
            let mid = BigRational::from_float(mid.to_f64().unwrap_or(0.0)).unwrap_or(mid);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = eval(&square_free, &mid);
            if v.is_zero() {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if v.is_positive() == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(((&lo + &hi) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN));
    }
    DefectReport { defect_free: roots.is_empty(), positive_roots: roots, method: "sturm".into() }
}

/// Exact quotient `a / b`, assuming `b` divides `a`.
fn divide(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let f = &r[k + db] / &b[db];
        for (i, bi) in b.iter().enumerate() {
            let d = &f * bi;
            r[k + i] -= d;
        }
        q[k] = f;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_coefficients_screen() {
        let r = check_defect_free(&[0.0, 0.0, 1.0]);
        assert!(r.defect_free);
        assert_eq!(r.method, "positive-coefficients");
    }

    #[test]
    fn golden_ratio_quadratic() {
        let r = check_defect_free(&[-3.0, 1.0]);
        assert!(!r.defect_free);
        let expect = [(3.0 - 5f64.sqrt()) / 2.0, (3.0 + 5f64.sqrt()) / 2.0];
        assert_eq!(r.positive_roots.len(), 2);
        for (a, b) in r.positive_roots.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn complex_pair_is_not_a_defect() {
        // 1 - 0.1λ + λ² has a complex pair
        let r = check_defect_free(&[-0.1, 1.0]);
        assert!(r.defect_free, "{r:?}");
        assert_eq!(r.method, "sturm");
    }

    #[test]
    fn double_root() {
        // (1 - λ)² = 1 - 2λ + λ²
        let r = check_defect_free(&[-2.0, 1.0]);
        assert_eq!(r.positive_roots, [1.0]);
    }

    #[test]
    fn high_degree_mixed() {
        // (1 - λ/2)(1 - λ/3)(1 + λ)
        let q = [1.0 / 6.0, -2.0 / 3.0, 1.0 / 6.0];
        let r = check_defect_free(&q);
        assert_eq!(r.positive_roots.len(), 2);
        assert!((r.positive_roots[0] - 2.0).abs() < 1e-12);
        assert!((r.positive_roots[1] - 3.0).abs() < 1e-12);
    }
}
