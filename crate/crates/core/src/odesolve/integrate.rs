//! Fixed-step Numerov integration of `-u'' + (W - E) u = S`.
//!
//! Written as `u'' = f u + g` with `f = W - E`, `g = -S`, `c_i = h² f_i / 12`
//! and `y_i = (1 - c_i) u_i`, the scheme is
//!
//! ```text
//! y_{i+1} - 2 y_i + y_{i-1} = 12 c_i u_i + h²/12 (g_{i+1} + 10 g_i + g_{i-1})
//! ```
//!
//! with global error `O(h⁴)`. It is advanced in summed form: the increment
//! `y_{i+1} - y_i` and `y` itself are carried with compensated sums, so a
//! rounding error perturbs the value without kicking the slope by `ε/h`.
//! That keeps the growing solution dormant for much longer.

use crate::error::{Error, Result};
use crate::problem::{Parity, Potential};

use super::grid::{Grid, GridFunction};

/// Magnitude at which an outward solution counts as blown up.
pub const BLOWUP: f64 = 1e150;

/// Inward homogeneous sweeps are rescaled past this magnitude.
const RESCALE: f64 = 1e100;

/// Result of [`integrate_ivp`].
#[derive(Debug, Clone)]
pub struct IvpSolution {
    /// Samples; after a blowup the remaining entries hold `±∞` with the sign
    /// of the divergence.
    pub function: GridFunction,
    /// Grid index where `|u|` first exceeded [`BLOWUP`].
    pub blowup: Option<usize>,
}

/// Integrates `-u'' + W u - E u = source` outward from the origin.
///
/// `init` is `(u(0), u'(0))`; on the half line it must be parity
/// consistent (`u'(0) = 0` for even, `u(0) = 0` for odd solutions), and a
/// source must share that parity.
pub fn integrate_ivp<W: Potential + ?Sized>(
    w: &W,
    energy: f64,
    source: Option<&GridFunction>,
    init: (f64, f64),
    grid: Grid,
) -> Result<IvpSolution> {
    let parity = init_parity(init)?;
    let g = match source {
        Some(s) => {
            if s.grid() != grid {
                return Err(Error::GridMismatch("source lives on a different grid".into()));
            }
            if s.parity() != parity {
                return Err(Error::InvalidArgument(format!(
                    "source parity {:?} differs from the solution parity {parity:?}",
                    s.parity()
                )));
            }
            Some(s.values().iter().map(|v| -v).collect::<Vec<_>>())
        }
        None => None,
    };
    let wv = grid.sample(|x| w.value(x));
    let c = numerov_weights(&wv, energy, grid.h());
    let stepper = Numerov { c: &c, g: g.as_deref(), h: grid.h() };
    let (values, blowup) = stepper.outward(parity, init, grid.intervals());
    Ok(IvpSolution { function: GridFunction::new(grid, values, parity)?, blowup })
}

fn init_parity(init: (f64, f64)) -> Result<Parity> {
    if init.1 == 0.0 {
        Ok(Parity::Even)
    } else if init.0 == 0.0 {
        Ok(Parity::Odd)
    } else {
        Err(Error::InvalidArgument(format!("initial condition {init:?} has no definite parity")))
    }
}

/// `c_i = h² (W_i - E) / 12`.
pub(crate) fn numerov_weights(wv: &[f64], energy: f64, h: f64) -> Vec<f64> {
    let k = h * h / 12.0;
    wv.iter().map(|w| k * (w - energy)).collect()
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
struct Compensated {
    hi: f64,
    lo: f64,
}

impl Compensated {
    fn new(v: f64) -> Self {
        Compensated { hi: v, lo: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let err = if self.hi.abs() >= x.abs() { (self.hi - s) + x } else { (x - s) + self.hi };
        self.hi = s;
        self.lo += err;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }

    fn scale(&mut self, k: f64) {
        self.hi *= k;
        self.lo *= k;
    }
}

/// Numerov stepper over precomputed weights and an optional inhomogeneity.
pub(crate) struct Numerov<'a> {
    pub c: &'a [f64],
    pub g: Option<&'a [f64]>,
    pub h: f64,
}

impl Numerov<'_> {
    fn rhs(&self, i: usize) -> f64 {
        match self.g {
            Some(g) => self.h * self.h / 12.0 * (g[i + 1] + 10.0 * g[i] + g[i - 1]),
            None => 0.0,
        }
    }

    fn g_at(&self, i: usize) -> f64 {
        self.g.map_or(0.0, |g| g[i])
    }

    /// `u_0`, `u_1` and the first increment `y_1 - y_0`, from the
    /// parity-symmetric extension (even) or a fifth-order Taylor start (odd).
    fn start(&self, parity: Parity, init: (f64, f64)) -> (f64, f64, f64) {
        let h = self.h;
        let c = self.c;
        match parity {
            Parity::Even => {
                let u0 = init.0;
                let d0 = 6.0 * c[0] * u0 + h * h / 12.0 * (self.g_at(1) + 5.0 * self.g_at(0));
                let u1 = ((1.0 - c[0]) * u0 + d0) / (1.0 - c[1]);
                (u0, u1, d0)
            }
            Parity::Odd => {
                let s = init.1;
                let f0 = 12.0 * c[0] / (h * h);
                let f2 = 12.0 * (c[1] - c[0]) / (h * h * h * h);
                let (g1h, g2h) = (self.g_at(1), self.g_at(2));
                let g3 = (g2h / (2.0 * h) - g1h / h) / (3.0 * h * h);
                let g1 = g1h / h - g3 * h * h;
                let c3 = (f0 * s + g1) / 6.0;
                let c5 = (f0 * c3 + f2 * s + g3) / 20.0;
                let u1 = s * h + c3 * h.powi(3) + c5 * h.powi(5);
                (0.0, u1, (1.0 - c[1]) * u1)
            }
        }
    }

    /// Outward sweep through index `stop`; entries past a blowup are `±∞`.
    pub fn outward(&self, parity: Parity, init: (f64, f64), stop: usize) -> (Vec<f64>, Option<usize>) {
        let n = self.c.len();
        let mut u = vec![0.0; n];
        let (u0, u1, d0) = self.start(parity, init);
        u[0] = u0;
        u[1] = u1;
        let mut y = Compensated::new((1.0 - self.c[0]) * u0);
        y.add(d0);
        let mut d = Compensated::new(d0);
        for i in 1..stop.min(n - 1) {
            d.add(12.0 * self.c[i] * u[i] + self.rhs(i));
            y.add(d.value());
            let next = y.value() / (1.0 - self.c[i + 1]);
            u[i + 1] = next;
            if !(next.abs() < BLOWUP) {
                let inf = if next < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
                for v in &mut u[i + 1..] {
                    *v = inf;
                }
                return (u, Some(i + 1));
            }
        }
        (u, None)
    }

    /// Homogeneous inward sweep from `u(x_max) = 0`, `u(x_max - h) = 1`
    /// down to index `stop`, rescaled to stay finite. Entries below `stop`
    /// are zero.
    pub fn inward(&self, stop: usize) -> Vec<f64> {
        let n = self.c.len();
        let mut u = vec![0.0; n];
        u[n - 2] = 1.0;
        let mut y = Compensated::new(1.0 - self.c[n - 2]);
        let mut d = Compensated::new(-y.value());
        for i in (stop.max(1) + 1..n - 1).rev() {
            d.add(-12.0 * self.c[i] * u[i]);
            let dv = d.value();
            y.add(-dv);
            let prev = y.value() / (1.0 - self.c[i - 1]);
            u[i - 1] = prev;
            if prev.abs() > RESCALE {
                y.scale(1.0 / RESCALE);
                d.scale(1.0 / RESCALE);
                for v in &mut u[i - 1..] {
                    *v /= RESCALE;
                }
            }
        }
        u
    }

    /// Particular solution on `[stop, x_max]` vanishing at `stop` and at
    /// `x_max`, by discrete reduction of order against the homogeneous
    /// solution `z` (nonzero on `(stop, x_max)`).
    ///
    /// With `Z = (1 - c) z` and `y = Z v`, the scheme becomes
    /// `K_i - K_{i-1} = r_i Z_i` with `K_i = Z_i Z_{i+1} (v_{i+1} - v_i)`;
    /// `K` is summed in from the tail and `v` out from `stop`, so nothing
    /// cancels. The free multiple of `z` is the one that zeroes the value at
    /// `stop`.
    pub fn decaying_particular(&self, z: &[f64], stop: usize) -> Vec<f64> {
        let n = self.c.len();
        let zz: Vec<f64> = (0..n).map(|i| (1.0 - self.c[i]) * z[i]).collect();
        let mut k = vec![0.0; n];
        let mut acc = Compensated::new(0.0);
        for i in (stop + 1..n - 1).rev() {
            acc.add(-self.rhs(i) * zz[i]);
            k[i - 1] = acc.value();
        }
        let mut out = vec![0.0; n];
        let mut v = Compensated::new(0.0);
        for i in stop..n - 2 {
            let den = zz[i] * zz[i + 1];
            if den.abs() > 1e-290 {
                v.add(k[i] / den);
            }
            out[i + 1] = v.value() * z[i + 1];
        }
        out
    }
}

/// Interior sign changes of the outward homogeneous solution on the whole
/// grid; the cheap inner loop of the eigenvalue search.
pub(crate) fn count_nodes(c: &[f64], h: f64, parity: Parity) -> usize {
    let stepper = Numerov { c, g: None, h };
    let (u0, u1, d0) = stepper.start(parity, parity.initial_condition());
    let mut y = (1.0 - c[0]) * u0 + d0;
    let mut d = d0;
    let mut u = u1;
    let mut nodes = 0;
    let mut positive = u1 > 0.0 || (u1 == 0.0 && u0 > 0.0);
    for i in 1..c.len() - 1 {
        d += 12.0 * c[i] * u;
        y += d;
        u = y / (1.0 - c[i + 1]);
        if u != 0.0 && (u > 0.0) != positive {
            nodes += 1;
            positive = u > 0.0;
        }
        if u.abs() > RESCALE {
            y /= RESCALE;
            d /= RESCALE;
            u /= RESCALE;
        }
    }
    nodes
}
