//! Truncated Taylor arithmetic, used to read off derivatives of the closed
//! form without finite differences.

use std::ops::{Add, Div, Mul, Sub};

/// `Σ_{k≤K} c_k t^k` about a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<f64>,
}

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable `x0 + t`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Jet::constant(x0, order);
        if order > 0 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet { c: self.c.iter().map(|v| v * s).collect() }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut j = self.clone();
        j.c[0] += s;
        j
    }

    /// `f^e` from `f g' = e f' g`; requires `f_0 > 0`.
    pub fn powf(&self, e: f64) -> Self {
        let f = &self.c;
        let mut g = vec![0.0; f.len()];
        g[0] = f[0].powf(e);
        for k in 1..f.len() {
            let s: f64 = (1..=k).map(|j| ((e + 1.0) * j as f64 - k as f64) * f[j] * g[k - j]).sum();
            g[k] = s / (k as f64 * f[0]);
        }
        Jet { c: g }
    }

    /// Horner evaluation of `Σ p_k x^k` with `x` this jet.
    pub fn polynomial(&self, p: &[f64]) -> Self {
        p.iter().rev().fold(Jet::constant(0.0, self.order()), |acc, &pk| (&acc * self).add_scalar(pk))
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|k| (0..=k).map(|j| self.c[j] * o.c[k - j]).sum()).collect() }
    }
}

impl Div for &Jet {
    type Output = Jet;
    fn div(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let mut q = vec![0.0; n];
        for k in 0..n {
            let s: f64 = (1..=k).map(|j| o.c[j] * q[k - j]).sum();
            q[k] = (self.c[k] - s) / o.c[0];
        }
        Jet { c: q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cube_root_series() {
        // (1 + t)^{1/3} = 1 + t/3 - t²/9 + 5t³/81
        let j = Jet::variable(1.0, 3).powf(1.0 / 3.0);
        for (a, b) in j.c.iter().zip([1.0, 1.0 / 3.0, -1.0 / 9.0, 5.0 / 81.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn geometric_series() {
        let one = Jet::constant(1.0, 4);
        let q = &one / &Jet::variable(0.0, 4).add_scalar(1.0);
        assert_eq!(q.c, [1.0, -1.0, 1.0, -1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn division_inverts_multiplication(a in prop::collection::vec(-3.0f64..3.0, 5), b in prop::collection::vec(-3.0f64..3.0, 4), b0 in 0.5f64..4.0) {
            let x = Jet { c: a };
            let mut bc = vec![b0];
            bc.extend(b);
            let y = Jet { c: bc };
            let back = &(&x * &y) / &y;
            for (u, v) in back.c.iter().zip(&x.c) {
                prop_assert!((u - v).abs() <= 1e-9 * (1.0 + v.abs()));
            }
        }

        #[test]
        fn polynomial_matches_horner(p in prop::collection::vec(-2.0f64..2.0, 1..6), x in -2.0f64..2.0) {
            let j = Jet::variable(x, 2).polynomial(&p);
            let direct: f64 = p.iter().rev().fold(0.0, |acc, c| acc * x + c);
            prop_assert!((j.c[0] - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
    }
}
