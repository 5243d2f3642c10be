//! First nonzero Neumann eigenvalue of `(J f')' = -lambda J f` on an
//! interval: regular solves by Pruefer phase shooting, singular-endpoint
//! and infinite-interval problems by monotone exhaustion, and the
//! eigenvalue boundary-derivative identity.

use serde::Serialize;

use crate::curvature::CurvatureDimension;
use crate::density::{model_density_value, model_log_deriv, model_support, GridDensity, ModelMeasure, Profile};
use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::shoot::{reconstruct, shoot_first, PhaseKernel, ShootWeight};

/// Relative drop below the first exhaustion level that is reported as a
/// vanishing eigenvalue.
const ZERO_FLOOR: f64 = 1e-10;
const MAX_LEVELS: usize = 26;

/// Classical (p = 2) phase kernel, evaluated with library trigonometry.
struct LinearKernel;

impl PhaseKernel for LinearKernel {
    fn quarter(&self) -> f64 {
        std::f64::consts::FRAC_PI_2
    }
    fn theta(&self, phi: f64) -> f64 {
        phi.sin() * phi.cos()
    }
    fn radial_factor(&self, phi: f64) -> f64 {
        let c = phi.cos();
        c * c
    }
    fn sin(&self, phi: f64) -> f64 {
        phi.sin()
    }
    fn lambda(&self, alpha: f64) -> f64 {
        alpha * alpha
    }
}

pub(crate) struct ModelWeight<'a> {
    pub cd: &'a CurvatureDimension,
    pub h: f64,
}

impl ShootWeight for ModelWeight<'_> {
    fn log_deriv(&self, x: f64) -> f64 {
        model_log_deriv(self.cd, self.h, x)
    }
    fn value(&self, x: f64) -> f64 {
        model_density_value(self.cd, self.h, x)
    }
}

pub(crate) struct ProfileWeight<'a>(pub &'a Profile);

impl ShootWeight for ProfileWeight<'_> {
    fn log_deriv(&self, x: f64) -> f64 {
        self.0.log_deriv(x)
    }
    fn value(&self, x: f64) -> f64 {
        self.0.value(x)
    }
}

/// Grid weight: monotone cubic interpolation of `log J`.
pub(crate) struct GridWeight {
    pchip: Pchip,
}

impl GridWeight {
    pub fn new(grid: &GridDensity) -> Result<Self> {
        if grid.values.iter().any(|v| *v <= 0.0) {
            return Err(Error::Domain(
                "eigenvalue solve requires a strictly positive weight".into(),
            ));
        }
        let xs: Vec<f64> = grid.xs().collect();
        let ys: Vec<f64> = grid.values.iter().map(|v| v.ln()).collect();
        Ok(Self { pchip: Pchip::new(xs, ys)? })
    }
}

impl ShootWeight for GridWeight {
    fn log_deriv(&self, x: f64) -> f64 {
        self.pchip.deriv(x)
    }
    fn value(&self, x: f64) -> f64 {
        self.pchip.value(x).exp()
    }
}

/// First nonzero Neumann eigenvalue with diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    pub lambda: f64,
    #[serde(rename = "residual")]
    pub phase_residual: f64,
    pub iterations: u32,
    pub eigenfunction: GridDensity,
}

const EIGENFUNCTION_SAMPLES: usize = 1001;

pub(crate) fn solve_weight<W: ShootWeight + ?Sized>(
    weight: &W,
    a: f64,
    b: f64,
    tol: f64,
    n_out: usize,
) -> Result<EigenResult> {
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
    let kernel = LinearKernel;
    let atol = (tol / 10.0).min(1e-8).max(1e-14);
    let out = shoot_first(&kernel, weight, a, b, tol, atol)?;
    let samples = reconstruct(&kernel, weight, a, b, out.alpha, atol, n_out)?;
    let dx = (b - a) / (n_out - 1) as f64;
    let eigenfunction = GridDensity {
        x0: a,
        dx,
        values: samples,
    };
    Ok(EigenResult {
        lambda: kernel.lambda(out.alpha),
        phase_residual: out.residual,
        iterations: out.iterations,
        eigenfunction,
    })
}

/// First nonzero Neumann eigenvalue of a regular model-measure problem.
pub fn sl_first_eigenvalue(measure: &ModelMeasure, tol: f64) -> Result<EigenResult> {
    let (a, b) = measure.interval();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("interval must be compact; use the exhaustion solver".into()));
    }
    let weight = ModelWeight { cd: &measure.cd, h: measure.h };
    solve_weight(&weight, a, b, tol, EIGENFUNCTION_SAMPLES)
}

/// Same solve for a sampled density (monotone cubic interpolation in between).
pub fn sl_first_eigenvalue_grid(grid: &GridDensity, tol: f64) -> Result<EigenResult> {
    let weight = GridWeight::new(grid)?;
    solve_weight(&weight, grid.x0, grid.x_last(), tol, EIGENFUNCTION_SAMPLES)
}

/// Same solve for a canonical profile restricted to `[a, b]`.
pub fn sl_first_eigenvalue_profile(profile: &Profile, a: f64, b: f64, tol: f64) -> Result<EigenResult> {
    let weight = ProfileWeight(profile);
    solve_weight(&weight, a, b, tol, EIGENFUNCTION_SAMPLES)
}

/// Outcome of a monotone-exhaustion eigenvalue computation.
#[derive(Debug, Clone, Serialize)]
pub struct Exhaustion {
    pub value: f64,
    /// Set when the level values collapsed below the zero floor.
    pub zero_flag: bool,
    /// Levels `(a_n, b_n, lambda_n)` actually solved.
    pub levels: Vec<(f64, f64, f64)>,
}

enum EndpointPlan {
    Fixed(f64),
    /// Retreat geometrically from the singular point: `x_n = point ± eps0 * 2^-n`.
    Retreat { point: f64, eps0: f64 },
    /// Grow geometrically outward: `x_n = ± start * 2^n`.
    Grow { start: f64 },
}

impl EndpointPlan {
    fn left_at(&self, level: usize) -> f64 {
        match self {
            EndpointPlan::Fixed(x) => *x,
            EndpointPlan::Retreat { point, eps0 } => point + eps0 * 0.5f64.powi(level as i32),
            EndpointPlan::Grow { start } => -start * 2f64.powi(level as i32),
        }
    }
    fn right_at(&self, level: usize) -> f64 {
        match self {
            EndpointPlan::Fixed(x) => *x,
            EndpointPlan::Retreat { point, eps0 } => point - eps0 * 0.5f64.powi(level as i32),
            EndpointPlan::Grow { start } => start * 2f64.powi(level as i32),
        }
    }
    fn is_fixed(&self) -> bool {
        matches!(self, EndpointPlan::Fixed(_))
    }
}

fn aitken(l0: f64, l1: f64, l2: f64) -> f64 {
    let d1 = l1 - l0;
    let d2 = l2 - l1;
    let den = d2 - d1;
    if den.abs() < 1e-14 * (l2.abs() + 1e-300) {
        l2
    } else {
        let acc = l2 - d2 * d2 / den;
        // Reject wild extrapolations outside the trend.
        if acc.is_finite() && acc >= 0.0 && (acc - l2).abs() <= 4.0 * d2.abs() {
            acc
        } else {
            l2
        }
    }
}

fn classify_endpoint(value_at: &dyn Fn(f64) -> f64, x: f64, boundary: f64, other: f64) -> EndpointPlan {
    if !x.is_finite() {
        let start = other.abs().max(1.0) * 2.0;
        return EndpointPlan::Grow { start };
    }
    let near_boundary = boundary.is_finite() && (x - boundary).abs() <= 1e-12 * (1.0 + boundary.abs());
    let v = value_at(x);
    if near_boundary || !v.is_finite() || v <= 0.0 {
        let span = (other - x).abs();
        let eps0 = (0.1f64).min(span / 4.0);
        let point = if near_boundary { boundary } else { x };
        EndpointPlan::Retreat { point, eps0 }
    } else {
        EndpointPlan::Fixed(x)
    }
}

/// Run a level sequence of eigenvalue solves until successive values (or
/// their Aitken extrapolants) agree to `tol` relatively, the zero floor
/// triggers, or the level budget runs out.
pub(crate) fn run_levels(
    solve: &mut dyn FnMut(f64, f64) -> Result<f64>,
    intervals: &mut dyn Iterator<Item = (f64, f64)>,
    tol: f64,
) -> Result<Exhaustion> {
    let mut levels: Vec<(f64, f64, f64)> = Vec::new();
    let mut lambdas: Vec<f64> = Vec::new();
    let mut extrapolants: Vec<f64> = Vec::new();
    for (an, bn) in intervals {
        if !(an < bn) {
            continue;
        }
        let lambda = solve(an, bn)?;
        levels.push((an, bn, lambda));
        lambdas.push(lambda);
        let m = lambdas.len();
        if lambdas[0] > 0.0 && lambdas[m - 1] < ZERO_FLOOR * lambdas[0] {
            return Ok(Exhaustion { value: 0.0, zero_flag: true, levels });
        }
        if m >= 3 {
            extrapolants.push(aitken(lambdas[m - 3], lambdas[m - 2], lambdas[m - 1]));
        }
        if m >= 2 {
            let raw_close = (lambdas[m - 1] - lambdas[m - 2]).abs()
                <= tol * lambdas[m - 1].abs().max(1e-300);
            let acc_close = extrapolants.len() >= 2 && {
                let e = extrapolants.len();
                (extrapolants[e - 1] - extrapolants[e - 2]).abs()
                    <= tol * extrapolants[e - 1].abs().max(1e-300)
            };
            if raw_close || acc_close {
                let value = extrapolants.last().copied().unwrap_or(lambdas[m - 1]);
                return Ok(Exhaustion { value, zero_flag: false, levels });
            }
        }
    }
    Err(Error::Solver(format!(
        "exhaustion did not converge after {} levels; last values {:?}",
        levels.len(),
        &lambdas[lambdas.len().saturating_sub(3)..]
    )))
}

/// Exhaustion over a monotone sequence of compact subintervals of `[a, b]`,
/// retreating from singular endpoints and growing toward infinite ones.
pub(crate) fn exhaust_generic(
    value_at: &dyn Fn(f64) -> f64,
    solve: &mut dyn FnMut(f64, f64) -> Result<f64>,
    support: (f64, f64),
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Exhaustion> {
    if !(a < b) {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    let ref_right = if b.is_finite() { b } else { 1.0 };
    let ref_left = if a.is_finite() { a } else { -1.0 };
    let left = classify_endpoint(value_at, a, support.0, ref_right);
    let right = classify_endpoint(value_at, b, support.1, ref_left);
    if left.is_fixed() && right.is_fixed() {
        let lambda = solve(a, b)?;
        return Ok(Exhaustion { value: lambda, zero_flag: false, levels: vec![(a, b, lambda)] });
    }
    let mut seq = (0..MAX_LEVELS).map(|n| (left.left_at(n), right.right_at(n)));
    run_levels(solve, &mut seq, tol)
}

pub(crate) fn exhaust_weight<W: ShootWeight + ?Sized>(
    weight: &W,
    support: (f64, f64),
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Exhaustion> {
    let solver_tol = (tol / 10.0).max(1e-11);
    let mut solve =
        |an: f64, bn: f64| solve_weight(weight, an, bn, solver_tol, 65).map(|r| r.lambda);
    exhaust_generic(&|x| weight.value(x), &mut solve, support, a, b, tol)
}

/// Eigenvalue on a possibly singular or unbounded interval, as the limit of
/// regular solves over a monotone exhausting sequence of compact intervals.
pub fn sl_eigenvalue_exhaustion(
    cd: &CurvatureDimension,
    h: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Exhaustion> {
    let weight = ModelWeight { cd, h };
    let support = model_support(cd, h);
    exhaust_weight(&weight, support, a, b, tol)
}

/// Exhaustion solve for a canonical profile on `[a, b]`.
pub fn sl_exhaustion_profile(profile: &Profile, a: f64, b: f64, tol: f64) -> Result<Exhaustion> {
    let weight = ProfileWeight(profile);
    exhaust_weight(&weight, profile.support(), a, b, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `d lambda_1 / d(endpoint)`, signed for moving the named endpoint outward:
/// `-u(endpoint)^2 * lambda_1 * J(endpoint)` with `u` normalized in
/// `L^2(J dm)`.
pub fn eigenvalue_boundary_derivative(measure: &ModelMeasure, side: Side, tol: f64) -> Result<f64> {
    let (a, b) = measure.interval();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("boundary derivative needs a compact interval".into()));
    }
    let weight = ModelWeight { cd: &measure.cd, h: measure.h };
    let res = solve_weight(&weight, a, b, tol, 4001)?;
    let u = &res.eigenfunction;
    // normalization: integral of u^2 J dm by the trapezoid rule
    let mut norm = 0.0;
    for i in 0..u.len() - 1 {
        let x0 = u.x(i);
        let x1 = u.x(i + 1);
        let f0 = u.values[i] * u.values[i] * weight.value(x0);
        let f1 = u.values[i + 1] * u.values[i + 1] * weight.value(x1);
        norm += 0.5 * (f0 + f1) * (x1 - x0);
    }
    let (x_end, u_end) = match side {
        Side::Left => (a, u.values[0]),
        Side::Right => (b, *u.values.last().unwrap()),
    };
    let u_sq = u_end * u_end / norm;
    Ok(-u_sq * res.lambda * weight.value(x_end))
}

/// Classical Rayleigh quotient of `f` against the weight, after mean
/// centering; `+inf` when the centered denominator vanishes.
pub fn rayleigh_quotient(f: &GridDensity, weight: &GridDensity) -> Result<f64> {
    if !f.same_grid(weight) {
        return Err(Error::GridMismatch("function and weight must share one grid".into()));
    }
    let n = f.len();
    let h = f.dx;
    let trapz = |vals: &dyn Fn(usize) -> f64| -> f64 {
        let mut acc = 0.5 * (vals(0) + vals(n - 1));
        for i in 1..n - 1 {
            acc += vals(i);
        }
        acc * h
    };
    let mass = trapz(&|i| weight.values[i]);
    if mass <= 0.0 {
        return Err(Error::Domain("weight has zero mass".into()));
    }
    let mean = trapz(&|i| f.values[i] * weight.values[i]) / mass;
    let den = trapz(&|i| {
        let g = f.values[i] - mean;
        g * g * weight.values[i]
    });
    let deriv = |i: usize| -> f64 {
        if i == 0 {
            (f.values[1] - f.values[0]) / h
        } else if i == n - 1 {
            (f.values[n - 1] - f.values[n - 2]) / h
        } else {
            (f.values[i + 1] - f.values[i - 1]) / (2.0 * h)
        }
    };
    let num = trapz(&|i| {
        let d = deriv(i);
        d * d * weight.values[i]
    });
    if den <= f64::MIN_POSITIVE * num.max(1.0) {
        return Ok(f64::INFINITY);
    }
    Ok(num / den)
}

/// Count sign changes of the sampled eigenfunction (ignoring zeros).
pub fn sign_changes(values: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}
