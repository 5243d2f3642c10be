//! Shared helpers for the integration suites.

use cdd_spectral::{model_density_value, model_support, CurvatureDimension, ModelMeasure};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson quadrature; the independent oracle for integral checks.
#[allow(dead_code)]
pub fn quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
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
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let noise = 1e-16 * (left.abs() + right.abs());
        if depth > 30 || (left + right - whole).abs() <= (15.0 * tol).max(noise) {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    // `tol` is relative to the integral's rough scale
    rec(f, a, b, fa, fm, fb, whole, tol * whole.abs().max(1e-300), 0)
}

/// Independent eigenvalue oracle: 3-point finite-difference discretization
/// of `(J f')' = -lambda J f` with Neumann conditions, symmetrized to a
/// tridiagonal problem and solved for the second-smallest eigenvalue by
/// Sturm-sequence bisection. Second-order accurate in the grid step.
#[allow(dead_code)]
pub fn fd_first_eigenvalue(weight: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (n - 1) as f64;
    let j_mid: Vec<f64> = (0..n - 1).map(|i| weight(a + h * (i as f64 + 0.5))).collect();
    let j_node: Vec<f64> = (0..n).map(|i| weight(a + h * i as f64)).collect();
    // row i of A: (J_{i-1/2} f_{i-1} - (J_{i-1/2}+J_{i+1/2}) f_i + J_{i+1/2} f_{i+1}) / h^2
    // Neumann: reflecting ghosts. Generalized problem A f = -lambda D f with
    // D = diag(J_i m_i), m_i the lumped cell mass (h/2 at the ends, h inside);
    // symmetrize with S = D^{1/2}.
    let mass: Vec<f64> = (0..n)
        .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
        .collect();
    let d: Vec<f64> = (0..n).map(|i| (j_node[i] * mass[i]).sqrt()).collect();
    // tridiagonal T = -S^{-1} A S^{-1} (positive semidefinite)
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    for i in 0..n {
        let left = if i > 0 { j_mid[i - 1] } else { 0.0 };
        let right = if i < n - 1 { j_mid[i] } else { 0.0 };
        diag[i] = (left + right) / (h * d[i] * d[i].max(f64::MIN_POSITIVE));
    }
    for i in 0..n - 1 {
        off[i] = -j_mid[i] / (h * d[i] * d[i + 1]);
    }
    // count of eigenvalues of T below x, by the Sturm sequence
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let denom = if q.abs() < 1e-300 { 1e-300f64.copysign(q) } else { q };
            q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    // second-smallest eigenvalue (the smallest is ~0)
    let mut lo = 0.0;
    let mut hi = 4.0 * diag.iter().cloned().fold(0.0f64, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= 2 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Draw a random model measure whose interval sits strictly inside the
/// support with a bounded log-density range (a "regular" measure any
/// solver and estimator can digest).
pub fn random_regular_measure(rng: &mut ChaCha8Rng) -> ModelMeasure {
    loop {
        let k: f64 = rng.random_range(-2.0..2.0);
        let n: f64 = match rng.random_range(0..3) {
            0 => rng.random_range(2.0..8.0),
            1 => rng.random_range(-5.0..0.0),
            _ => f64::INFINITY,
        };
        let h: f64 = rng.random_range(-1.5..1.5);
        let cd = match CurvatureDimension::new(k, n) {
            Ok(cd) => cd,
            Err(_) => continue,
        };
        let (sa, sb) = model_support(&cd, h);
        let lo = sa.max(-5.0);
        let hi = sb.min(5.0);
        if !(hi - lo > 0.4) {
            continue;
        }
        let margin = 0.08 * (hi - lo);
        let (mut a, mut b) = (lo + margin, hi - margin);
        // shrink toward the center until the log-density range is moderate
        for _ in 0..40 {
            let vals = [
                model_density_value(&cd, h, a),
                model_density_value(&cd, h, 0.5 * (a + b)),
                model_density_value(&cd, h, b),
            ];
            let (mut lo_v, mut hi_v) = (f64::INFINITY, 0.0f64);
            for v in vals {
                lo_v = lo_v.min(v);
                hi_v = hi_v.max(v);
            }
            if hi_v.is_finite() && lo_v > 0.0 && hi_v / lo_v < 1e5 {
                break;
            }
            let c = 0.5 * (a + b);
            a = c + (a - c) * 0.8;
            b = c + (b - c) * 0.8;
        }
        if b - a < 0.2 {
            continue;
        }
        if let Ok(m) = ModelMeasure::new(cd, h, a, b) {
            return m;
        }
    }
}
