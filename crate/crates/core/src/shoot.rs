//! Phase-plane shooting for weighted Neumann eigenproblems on an interval.
//!
//! The second-order problem is reduced to the first-order phase equation
//! `phi' = alpha - T(x) * Theta(phi)` with `T = -(log J)'`; the Neumann
//! conditions pin the phase to a quarter period at both endpoints and the
//! first nonzero eigenvalue corresponds to a phase advance of exactly one
//! half period. `phi(b)` is strictly increasing in `alpha`, so bracketing
//! plus bisection is rigorous.

use crate::error::{Error, Result};
use crate::ode::integrate;

/// Trigonometric kernel of the phase equation.
pub(crate) trait PhaseKernel {
    /// Quarter period (`pi_p / 2`).
    fn quarter(&self) -> f64;
    /// `Theta(phi)`.
    fn theta(&self, phi: f64) -> f64;
    /// `|cos_p(phi)|^p / (p - 1)`, the radial log-growth factor.
    fn radial_factor(&self, phi: f64) -> f64;
    /// `sin_p(phi)`, for eigenfunction reconstruction.
    fn sin(&self, phi: f64) -> f64;
    /// Map the shooting parameter to the eigenvalue.
    fn lambda(&self, alpha: f64) -> f64;
}

/// The weight (density) of the eigenproblem.
pub(crate) trait ShootWeight {
    /// `(log J)'(x)` on the open interval.
    fn log_deriv(&self, x: f64) -> f64;
    /// `J(x)`.
    fn value(&self, x: f64) -> f64;
}

pub(crate) struct ShootOutcome {
    pub alpha: f64,
    pub residual: f64,
    pub iterations: u32,
}

fn phase_at_b<K: PhaseKernel, W: ShootWeight + ?Sized>(
    kernel: &K,
    weight: &W,
    a: f64,
    b: f64,
    alpha: f64,
    atol: f64,
) -> Result<f64> {
    let y = integrate(
        &mut |x, y: &[f64; 1]| [alpha + weight.log_deriv(x) * kernel.theta(y[0])],
        a,
        b,
        [-kernel.quarter()],
        atol,
        atol,
        |_, _| {},
    )?;
    Ok(y[0])
}

/// Find the shooting parameter for the first nonzero Neumann eigenvalue.
pub(crate) fn shoot_first<K: PhaseKernel, W: ShootWeight + ?Sized>(
    kernel: &K,
    weight: &W,
    a: f64,
    b: f64,
    rel_tol: f64,
    atol: f64,
) -> Result<ShootOutcome> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    let target = kernel.quarter();
    let mut iterations = 0u32;
    // G(0) = -2 * quarter < 0 identically, so 0 is always a lower bracket.
    let mut lo = 0.0f64;
    let mut hi = 2.0 * target / (b - a);
    let mut g_hi = phase_at_b(kernel, weight, a, b, hi, atol)? - target;
    iterations += 1;
    let mut doublings = 0;
    while g_hi <= 0.0 {
        doublings += 1;
        if doublings > 80 {
            return Err(Error::Solver(
                "failed to bracket the first eigenvalue (phase never overshoots)".into(),
            ));
        }
        lo = hi;
        hi *= 2.0;
        g_hi = phase_at_b(kernel, weight, a, b, hi, atol)? - target;
        iterations += 1;
    }
    let mut g_mid = g_hi;
    while hi - lo > 0.25 * rel_tol * (lo + hi).max(f64::MIN_POSITIVE) {
        if iterations > 500 {
            return Err(Error::Solver("bisection budget exhausted".into()));
        }
        let mid = 0.5 * (lo + hi);
        g_mid = phase_at_b(kernel, weight, a, b, mid, atol)? - target;
        iterations += 1;
        if g_mid > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    Ok(ShootOutcome { alpha, residual: g_mid, iterations })
}

/// Integrate the phase/radial pair at the converged `alpha` and sample the
/// (unnormalized) eigenfunction on a uniform grid of `n_out` points.
///
/// Each half is integrated from its own Neumann endpoint toward the middle
/// (the stable direction through endpoint boundary layers, where a forward
/// pass would amplify the residual `alpha` error without bound) and the two
/// halves are matched through the radial magnitude at the meeting point.
pub(crate) fn reconstruct<K: PhaseKernel, W: ShootWeight + ?Sized>(
    kernel: &K,
    weight: &W,
    a: f64,
    b: f64,
    alpha: f64,
    atol: f64,
    n_out: usize,
) -> Result<Vec<f64>> {
    let dx = (b - a) / (n_out - 1) as f64;
    let grid_x = |i: usize| if i == n_out - 1 { b } else { a + dx * i as f64 };
    let mid = n_out / 2;
    // state: (phi, log e)
    let mut states = vec![[0.0f64; 2]; n_out];

    // left half, forward from a
    let mut rhs_fwd = |x: f64, y: &[f64; 2]| {
        let t = -weight.log_deriv(x);
        [alpha - t * kernel.theta(y[0]), t * kernel.radial_factor(y[0])]
    };
    let mut state = [-kernel.quarter(), 0.0];
    states[0] = state;
    for i in 1..=mid {
        state = integrate(&mut rhs_fwd, grid_x(i - 1), grid_x(i), state, atol, atol, |_, _| {})?;
        states[i] = state;
    }
    let left_log_e = states[mid][1];

    // right half, backward from b via the reflected coordinate
    let reflect = a + b;
    let mut rhs_bwd = |u: f64, y: &[f64; 2]| {
        let x = reflect - u;
        let t = -weight.log_deriv(x);
        [-(alpha - t * kernel.theta(y[0])), -t * kernel.radial_factor(y[0])]
    };
    let mut state = [kernel.quarter(), 0.0];
    states[n_out - 1] = state;
    for i in (mid..n_out - 1).rev() {
        let u_prev = reflect - grid_x(i + 1);
        let u_next = reflect - grid_x(i);
        state = integrate(&mut rhs_bwd, u_prev, u_next, state, atol, atol, |_, _| {})?;
        states[i] = state;
    }
    // match the radial magnitudes where the halves meet
    let shift = left_log_e - states[mid][1];
    for s in states.iter_mut().take(n_out).skip(mid + 1) {
        s[1] += shift;
    }
    states[mid][1] = left_log_e;

    Ok(states
        .iter()
        .map(|s| alpha.recip() * s[1].exp() * kernel.sin(s[0]))
        .collect())
}
