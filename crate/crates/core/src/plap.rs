//! First nonzero Neumann eigenvalue of the weighted p-Laplacian
//! `(J f'^{(p-1)})' + lambda J f^{(p-1)} = 0` via the p-trigonometric
//! Pruefer transformation: shoot on `alpha`, recover
//! `lambda = (p-1) alpha^p`.

use serde::Serialize;

use crate::density::{GridDensity, ModelMeasure, Profile};
use crate::error::{Error, Result};
use crate::ptrig::PTrig;
use crate::shoot::{reconstruct, shoot_first, PhaseKernel, ShootWeight};
use crate::sl::{GridWeight, ModelWeight, ProfileWeight};

struct PKernel<'a> {
    trig: &'a PTrig,
}

impl PhaseKernel for PKernel<'_> {
    fn quarter(&self) -> f64 {
        self.trig.pi_p() / 2.0
    }
    fn theta(&self, phi: f64) -> f64 {
        self.trig.theta(phi)
    }
    fn radial_factor(&self, phi: f64) -> f64 {
        self.trig.radial_factor(phi)
    }
    fn sin(&self, phi: f64) -> f64 {
        self.trig.sin_p(phi)
    }
    fn lambda(&self, alpha: f64) -> f64 {
        (self.trig.p() - 1.0) * alpha.powf(self.trig.p())
    }
}

/// [`crate::sl::EigenResult`] payload plus the exponent `p`.
#[derive(Debug, Clone, Serialize)]
pub struct PlapResult {
    pub p: f64,
    pub lambda: f64,
    #[serde(rename = "residual")]
    pub phase_residual: f64,
    pub iterations: u32,
    pub eigenfunction: GridDensity,
}

fn solve_plap<W: ShootWeight + ?Sized>(
    weight: &W,
    trig: &PTrig,
    a: f64,
    b: f64,
    tol: f64,
    n_out: usize,
) -> Result<PlapResult> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    for x in [a, b, 0.5 * (a + b)] {
        let v = weight.value(x);
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "weight must be positive and finite on [{a}, {b}]; found {v} at x = {x}"
            )));
        }
    }
    let kernel = PKernel { trig };
    let atol = (tol / 10.0).min(1e-8).max(1e-13);
    let out = shoot_first(&kernel, weight, a, b, tol, atol)?;
    // The phase may sag between the Neumann levels for sign-changing
    // log-derivatives, but crossings of +-pi_p/2 are one-way (phi' = alpha
    // there), so a small terminal residual pins the eigenvalue count.
    let samples = reconstruct(&kernel, weight, a, b, out.alpha, atol, n_out)?;
    Ok(PlapResult {
        p: trig.p(),
        lambda: kernel.lambda(out.alpha),
        phase_residual: out.residual,
        iterations: out.iterations,
        eigenfunction: GridDensity {
            x0: a,
            dx: (b - a) / (n_out - 1) as f64,
            values: samples,
        },
    })
}

const EIGENFUNCTION_SAMPLES: usize = 1001;

/// First nonzero Neumann p-Laplacian eigenvalue of a regular model measure.
pub fn plap_first_eigenvalue(measure: &ModelMeasure, p: f64, tol: f64) -> Result<PlapResult> {
    let (a, b) = measure.interval();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("interval must be compact".into()));
    }
    let trig = PTrig::new(p)?;
    let weight = ModelWeight { cd: &measure.cd, h: measure.h };
    solve_plap(&weight, &trig, a, b, tol, EIGENFUNCTION_SAMPLES)
}

/// Same solve for a sampled density.
pub fn plap_first_eigenvalue_grid(grid: &GridDensity, p: f64, tol: f64) -> Result<PlapResult> {
    let trig = PTrig::new(p)?;
    let weight = GridWeight::new(grid)?;
    solve_plap(&weight, &trig, grid.x0, grid.x_last(), tol, EIGENFUNCTION_SAMPLES)
}

/// Same solve for a canonical profile on `[a, b]`; a pre-built [`PTrig`]
/// is reused across calls.
pub fn plap_first_eigenvalue_profile(
    profile: &Profile,
    trig: &PTrig,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<PlapResult> {
    let weight = ProfileWeight(profile);
    solve_plap(&weight, trig, a, b, tol, EIGENFUNCTION_SAMPLES)
}

/// p-Rayleigh quotient `int |f'|^p dxi / int |f - c|^p dxi` minimized over
/// the additive constant by ternary search.
pub fn rayleigh_quotient_p(f: &GridDensity, weight: &GridDensity, p: f64) -> Result<f64> {
    if !f.same_grid(weight) {
        return Err(Error::GridMismatch("function and weight must share one grid".into()));
    }
    if !(p > 1.0) {
        return Err(Error::Domain("p must exceed 1".into()));
    }
    let n = f.len();
    let h = f.dx;
    let trapz = |g: &dyn Fn(usize) -> f64| -> f64 {
        let mut acc = 0.5 * (g(0) + g(n - 1));
        for i in 1..n - 1 {
            acc += g(i);
        }
        acc * h
    };
    let num = trapz(&|i| {
        let d = if i == 0 {
            (f.values[1] - f.values[0]) / h
        } else if i == n - 1 {
            (f.values[n - 1] - f.values[n - 2]) / h
        } else {
            (f.values[i + 1] - f.values[i - 1]) / (2.0 * h)
        };
        d.abs().powf(p) * weight.values[i]
    });
    let den_at = |c: f64| trapz(&|i| (f.values[i] - c).abs().powf(p) * weight.values[i]);
    let (mut lo, mut hi) = f
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if den_at(m1) < den_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let den = den_at(0.5 * (lo + hi));
    if den <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureDimension;
    use crate::sl::{sign_changes, sl_first_eigenvalue};
    use approx::assert_relative_eq;

    fn uniform_on(d: f64) -> ModelMeasure {
        let cd = CurvatureDimension::new(0.0, 2.0).unwrap();
        ModelMeasure::new(cd, 0.0, -d / 2.0, d / 2.0).unwrap()
    }

    #[test]
    fn uniform_weight_closed_form() {
        // lambda = (p-1) (pi_p / D)^p
        for (p, d) in [(3.0, crate::ptrig::pi_p(3.0).unwrap()), (1.5, 1.0), (4.0, 2.0)] {
            let m = uniform_on(d);
            let res = plap_first_eigenvalue(&m, p, 1e-9).unwrap();
            let expect = (p - 1.0) * (crate::ptrig::pi_p(p).unwrap() / d).powf(p);
            assert_relative_eq!(res.lambda, expect, max_relative = 1e-8);
            assert_eq!(sign_changes(&res.eigenfunction.values), 1);
        }
    }

    #[test]
    fn p3_uniform_is_two() {
        let d = crate::ptrig::pi_p(3.0).unwrap();
        assert_relative_eq!(d, 2.418399, max_relative = 1e-6);
        let res = plap_first_eigenvalue(&uniform_on(d), 3.0, 1e-9).unwrap();
        assert_relative_eq!(res.lambda, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn p_two_matches_linear_solver() {
        let cd = CurvatureDimension::new(1.0, 4.0).unwrap();
        let m = ModelMeasure::new(cd, 0.4, -0.6, 0.8).unwrap();
        let linear = sl_first_eigenvalue(&m, 1e-9).unwrap();
        let half = plap_first_eigenvalue(&m, 2.0, 1e-9).unwrap();
        assert_relative_eq!(half.lambda, linear.lambda, max_relative = 1e-6);
    }

    #[test]
    fn dilation_scaling() {
        // coordinate dilation by c multiplies lambda by c^{-p}
        let p = 2.5;
        let l1 = plap_first_eigenvalue(&uniform_on(1.0), p, 1e-9).unwrap().lambda;
        let l2 = plap_first_eigenvalue(&uniform_on(3.0), p, 1e-9).unwrap().lambda;
        assert_relative_eq!(l2, l1 / 3f64.powf(p), max_relative = 1e-7);
    }

    #[test]
    fn rayleigh_upper_bound_consistency() {
        // cosine-like ansatz on the uniform weight gives an upper bound close
        // to the solved eigenvalue
        let p = 1.5;
        let d = 1.0;
        let res = plap_first_eigenvalue(&uniform_on(d), p, 1e-9).unwrap();
        let ef = &res.eigenfunction;
        let w = GridDensity::new(ef.x0, ef.dx, vec![1.0; ef.len()]).unwrap();
        let rq = rayleigh_quotient_p(ef, &w, p).unwrap();
        assert!(rq >= res.lambda * (1.0 - 1e-3));
        assert_relative_eq!(rq, res.lambda, max_relative = 1e-2);
        assert_relative_eq!(res.lambda, 0.5 * crate::ptrig::pi_p(1.5).unwrap().powf(1.5), max_relative = 1e-8);
    }
}
