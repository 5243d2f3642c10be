//! Generalized trigonometric functions `sin_p`, `cos_p` and the half-period
//! constant `pi_p`, built by one-time inversion of the defining integral and
//! cached as a monotone spline over a quarter period.

use crate::error::{Error, Result};
use crate::interp::Pchip;

/// `pi_p = 2 pi / (p sin(pi/p))`.
pub fn pi_p(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p = {p} must lie in (1, inf)")));
    }
    let x = std::f64::consts::PI / p;
    Ok(2.0 * std::f64::consts::PI / (p * x.sin()))
}

/// `1 - s^p` evaluated without cancellation near `s = 1`.
fn one_minus_pow(s: f64, p: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else {
        -(p * s.ln()).exp_m1()
    }
}

/// `1 - (1 - u)^p` for small `u >= 0`, stable down to the underflow range.
fn one_minus_pow_compl(u: f64, p: f64) -> f64 {
    if u >= 1.0 {
        1.0
    } else {
        -(p * (-u).ln_1p()).exp_m1()
    }
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let noise = 1e-16 * whole.abs().max(left.abs() + right.abs());
        if depth > 28 || (left + right - whole).abs() <= (15.0 * tol).max(noise) {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)
}

/// Quarter-period table size.
const NODES: usize = 2001;

/// Cached `sin_p`/`cos_p` evaluator for one exponent `p`; immutable after
/// construction and shareable across threads.
#[derive(Debug, Clone)]
pub struct PTrig {
    p: f64,
    pi_p: f64,
    quarter: Pchip,
}

impl PTrig {
    pub fn new(p: f64) -> Result<Self> {
        let pip = pi_p(p)?;
        let quarter_period = pip / 2.0;
        let integrand = move |s: f64| one_minus_pow(s, p).powf(-1.0 / p);
        // Node amplitudes clustered toward 1 so the spline resolves the cap,
        // where x(y) loses smoothness.
        let mut ys = Vec::with_capacity(NODES);
        let mut xs = Vec::with_capacity(NODES);
        ys.push(0.0);
        xs.push(0.0);
        let mut x_acc = 0.0;
        for j in 1..NODES {
            let theta = std::f64::consts::FRAC_PI_2 * j as f64 / (NODES - 1) as f64;
            let y = theta.sin();
            if j == NODES - 1 {
                xs.push(quarter_period);
                ys.push(1.0);
                break;
            }
            if y < 0.97 {
                x_acc += adaptive_simpson(&integrand, ys[j - 1], y, 1e-13);
                xs.push(x_acc);
            } else {
                // near the cap integrate the regularized tail instead
                let qe = p / (p - 1.0);
                let tail_integrand = move |v: f64| {
                    if v <= 0.0 {
                        qe * p.powf(-1.0 / p)
                    } else {
                        let u = v.powf(qe);
                        qe * v.powf(qe - 1.0) * one_minus_pow_compl(u, p).powf(-1.0 / p)
                    }
                };
                let v_max = (1.0 - y).powf(1.0 / qe);
                let tail = adaptive_simpson(&tail_integrand, 0.0, v_max, 1e-13);
                xs.push(quarter_period - tail);
                x_acc = quarter_period - tail;
            }
            ys.push(y);
        }
        Ok(Self { p, pi_p: pip, quarter: Pchip::new(xs, ys)? })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    /// Reduce to the fundamental quarter: returns `(u, cos_sign)` with
    /// `sin_p(x) = sin_p(u)` for `u in [-pi_p/2, pi_p/2]` and
    /// `cos_p(x) = cos_sign * cos_p(u)`.
    fn reduce(&self, x: f64) -> (f64, f64) {
        let q = self.pi_p / 2.0;
        let period = 2.0 * self.pi_p;
        let mut u = (x + q) % period;
        if u < 0.0 {
            u += period;
        }
        if u <= self.pi_p {
            (u - q, 1.0)
        } else {
            (self.pi_p - (u - q), -1.0)
        }
    }

    fn quarter_sin(&self, u: f64) -> f64 {
        debug_assert!((-self.pi_p / 2.0 - 1e-9..=self.pi_p / 2.0 + 1e-9).contains(&u));
        let a = u.abs().min(self.pi_p / 2.0);
        let v = self.quarter.value(a).clamp(0.0, 1.0);
        if u < 0.0 {
            -v
        } else {
            v
        }
    }

    pub fn sin_p(&self, x: f64) -> f64 {
        let (u, _) = self.reduce(x);
        self.quarter_sin(u)
    }

    pub fn cos_p(&self, x: f64) -> f64 {
        let (u, sign) = self.reduce(x);
        let s = self.quarter_sin(u).abs();
        sign * one_minus_pow(s, self.p).powf(1.0 / self.p)
    }

    /// `Theta(phi) = |cos_p|^{p-2} cos_p sin_p / (p-1)`.
    pub fn theta(&self, phi: f64) -> f64 {
        let s = self.sin_p(phi);
        let c = self.cos_p(phi);
        if c == 0.0 {
            return 0.0;
        }
        c.abs().powf(self.p - 1.0) * c.signum() * s / (self.p - 1.0)
    }

    /// `|cos_p|^p / (p-1)`.
    pub fn radial_factor(&self, phi: f64) -> f64 {
        self.cos_p(phi).abs().powf(self.p) / (self.p - 1.0)
    }
}
