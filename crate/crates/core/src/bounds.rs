//! Dispatch of the sharp-bound case tables for the Poincare, p-Poincare and
//! log-Sobolev inequalities, plus monotonicity verification sweeps over the
//! regular parameter domain.

use serde::Serialize;

use crate::curvature::{l_delta, CurvatureDimension};
use crate::density::{model_support, sample_density, ModelMeasure, Profile};
use crate::error::{Error, Result};
use crate::hardy::{
    bobkov_gotze_estimate, build_distribution, ls_bound_closed, Exactness, TwoSidedEstimate,
    DEFAULT_BG_BRACKET,
};
use crate::plap::plap_first_eigenvalue_profile;
use crate::ptrig::PTrig;
use crate::sl::{
    exhaust_generic, run_levels, sl_first_eigenvalue, sl_first_eigenvalue_profile, Exhaustion,
};

pub const DEFAULT_TOL: f64 = 1e-8;
/// Relative stop for limit sequences (the case-4 epsilon limits).
pub const DEFAULT_LIMIT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    Poincare,
    PPoincare,
    LogSobolev,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRequest {
    pub inequality: Inequality,
    pub k: f64,
    /// Effective dimension; `f64::INFINITY` for N = inf.
    pub n: f64,
    /// Diameter bound; `f64::INFINITY` allowed.
    pub d: f64,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    SlExhaustion,
    PlapSolve,
    BgClosed,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u32>,
    /// Exhaustion levels `(a, b, lambda)` when a limit was taken.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<(f64, f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bg_bracket: Option<TwoSidedEstimate>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    pub value: f64,
    pub case_label: String,
    pub method: Method,
    pub exactness: Exactness,
    pub diagnostics: Diagnostics,
}

impl BoundResult {
    fn closed(value: f64, case: &str) -> Self {
        Self {
            value,
            case_label: case.into(),
            method: Method::ClosedForm,
            exactness: Exactness::Exact,
            diagnostics: Diagnostics::default(),
        }
    }
}

/// Dimension admissibility for each inequality; errors distinguish the
/// out-of-theory gap (0, 1] from the method-restricted band (1, 2).
pub fn validate_dimension(inequality: Inequality, n: f64) -> Result<()> {
    if n.is_nan() || n == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("N must be a real number or +inf, got {n}")));
    }
    if n.is_finite() && n > 0.0 && n <= 1.0 {
        return Err(Error::Domain(format!(
            "N = {n} lies in (0, 1], outside the theory's admissible dimensions"
        )));
    }
    if n.is_finite() && n > 1.0 && n < 2.0 {
        return Err(Error::UnsupportedRange(format!(
            "N = {n} lies in (1, 2): the derivation implemented here covers N in (-inf, 0] and [2, inf]"
        )));
    }
    match inequality {
        Inequality::Poincare => Ok(()),
        Inequality::PPoincare | Inequality::LogSobolev => {
            if n <= 0.0 {
                Err(Error::UnsupportedRange(format!(
                    "N = {n} <= 0 is not covered for this inequality; use N in [2, inf]"
                )))
            } else {
                Ok(())
            }
        }
    }
}

fn check_proviso(k: f64, n: f64, d: f64) -> Result<()> {
    if k < 0.0 && n <= 0.0 {
        let l = l_delta(k, n);
        if d >= l {
            return Err(Error::Proviso { d, l_delta: l });
        }
    }
    Ok(())
}

fn from_solve(res: crate::sl::EigenResult, case: &str, tol: f64) -> BoundResult {
    BoundResult {
        value: res.lambda,
        case_label: case.into(),
        method: Method::SlExhaustion,
        exactness: Exactness::Exact,
        diagnostics: Diagnostics {
            solver_tol: Some(tol),
            residual: Some(res.phase_residual),
            iterations: Some(res.iterations),
            ..Default::default()
        },
    }
}

fn from_exhaustion(ex: Exhaustion, case: &str, tol: f64, notes: Vec<String>) -> BoundResult {
    BoundResult {
        value: ex.value,
        case_label: case.into(),
        method: Method::SlExhaustion,
        exactness: Exactness::Exact,
        diagnostics: Diagnostics {
            solver_tol: Some(tol),
            levels: Some(ex.levels),
            notes: if ex.zero_flag {
                let mut n = notes;
                n.push("level values collapsed below the zero floor".into());
                n
            } else {
                notes
            },
            ..Default::default()
        },
    }
}

/// Limit of `solve([eps_m, eps_m + d])` along `eps_m = 0.1 * 2^-m` with
/// Aitken acceleration (the one-sided profile limits of case family 4).
fn epsilon_limit(
    solve: &mut dyn FnMut(f64, f64) -> Result<f64>,
    d: f64,
    tol: f64,
) -> Result<Exhaustion> {
    let mut seq = (0..26).map(move |m| {
        let eps = 0.1 * 0.5f64.powi(m);
        (eps, eps + d)
    });
    run_levels(solve, &mut seq, tol)
}

pub fn poincare_bound(req: &BoundRequest) -> Result<BoundResult> {
    poincare_bound_with(req, DEFAULT_TOL, DEFAULT_LIMIT_TOL)
}

pub fn poincare_bound_with(req: &BoundRequest, tol: f64, limit_tol: f64) -> Result<BoundResult> {
    let (k, n, d) = (req.k, req.n, req.d);
    validate_dimension(Inequality::Poincare, n)?;
    if !(d > 0.0) || d.is_nan() {
        return Err(Error::Domain(format!("D = {d} must be positive")));
    }
    check_proviso(k, n, d)?;
    let pi2 = std::f64::consts::PI.powi(2);
    let solver_tol = (tol / 10.0).max(1e-11);

    // family 2: N = inf
    if n.is_infinite() {
        return Ok(if k > 0.0 {
            if d.is_finite() {
                let prof = Profile::Gauss { k };
                from_solve(sl_first_eigenvalue_profile(&prof, -d / 2.0, d / 2.0, solver_tol)?, "2a", solver_tol)
            } else {
                BoundResult::closed(k, "2a")
            }
        } else if k < 0.0 {
            if d.is_finite() {
                let prof = Profile::Gauss { k };
                from_solve(sl_first_eigenvalue_profile(&prof, -d / 2.0, d / 2.0, solver_tol)?, "2b", solver_tol)
            } else {
                BoundResult::closed(0.0, "2b")
            }
        } else if d.is_finite() {
            BoundResult::closed(pi2 / (d * d), "2c")
        } else {
            BoundResult::closed(0.0, "2c")
        });
    }

    let delta = k / (n - 1.0);
    let e = n - 1.0;

    // family 1: N in [2, inf)
    if n >= 2.0 {
        return Ok(if k > 0.0 {
            let l = l_delta(k, n);
            if d < l {
                let prof = Profile::CosPow { sd: delta.sqrt(), e };
                from_solve(sl_first_eigenvalue_profile(&prof, -d / 2.0, d / 2.0, solver_tol)?, "1a", solver_tol)
            } else {
                BoundResult::closed(k * n / (n - 1.0), "1a")
            }
        } else if k < 0.0 {
            if d.is_finite() {
                let prof = Profile::CoshPow { sd: (-delta).sqrt(), e };
                from_solve(sl_first_eigenvalue_profile(&prof, -d / 2.0, d / 2.0, solver_tol)?, "1b", solver_tol)
            } else {
                BoundResult::closed(0.0, "1b")
            }
        } else if d.is_finite() {
            BoundResult::closed(pi2 / (d * d), "1c")
        } else {
            BoundResult::closed(0.0, "1c")
        });
    }

    // family 3: N in (-inf, -1]
    if n <= -1.0 {
        return Ok(if k < 0.0 {
            // delta > 0; the proviso already guarantees d < l_delta
            let prof = Profile::CosPow { sd: delta.sqrt(), e };
            from_solve(sl_first_eigenvalue_profile(&prof, -d / 2.0, d / 2.0, solver_tol)?, "3a", solver_tol)
        } else if k > 0.0 {
            if d.is_finite() {
                let prof = Profile::CoshPow { sd: (-delta).sqrt(), e };
                from_solve(sl_first_eigenvalue_profile(&prof, -d / 2.0, d / 2.0, solver_tol)?, "3b", solver_tol)
            } else {
                BoundResult::closed(k * n / (n - 1.0), "3b")
            }
        } else if d.is_finite() {
            BoundResult::closed(pi2 / (d * d), "3c")
        } else {
            BoundResult::closed(0.0, "3c")
        });
    }

    // family 4 (anomalous): N in (-1, 0], one-sided profile limits
    let notes = vec!["one-sided profile limit, epsilon -> 0+".to_string()];
    let solve =
        |prof: Profile| move |an: f64, bn: f64| sl_first_eigenvalue_profile(&prof, an, bn, solver_tol).map(|r| r.lambda);
    Ok(if k < 0.0 {
        let prof = Profile::SinPow { sd: delta.sqrt(), e };
        let ex = epsilon_limit(&mut solve(prof), d, limit_tol)?;
        from_exhaustion(ex, "4a", solver_tol, notes)
    } else if k > 0.0 {
        let prof = Profile::SinhPow { sd: (-delta).sqrt(), e };
        if d.is_finite() {
            let ex = epsilon_limit(&mut solve(prof), d, limit_tol)?;
            from_exhaustion(ex, "4b", solver_tol, notes)
        } else {
            // nested double limit: inner right endpoint -> inf at fixed eps,
            // then eps -> 0 (inner D, outer eps)
            let mut outer = |an: f64, _bn: f64| -> Result<f64> {
                let mut inner =
                    |x0: f64, x1: f64| sl_first_eigenvalue_profile(&prof, x0, x1, solver_tol).map(|r| r.lambda);
                let ex = exhaust_generic(
                    &|x| prof.value(x),
                    &mut inner,
                    prof.support(),
                    an,
                    f64::INFINITY,
                    limit_tol / 4.0,
                )?;
                Ok(ex.value)
            };
            let ex = epsilon_limit(&mut outer, 1.0, limit_tol)?;
            let mut notes = notes;
            notes.push("nested limit: inner right endpoint to infinity, outer epsilon to 0".into());
            from_exhaustion(ex, "4b", solver_tol, notes)
        }
    } else if d.is_finite() {
        let prof = Profile::PowerLaw { e };
        let ex = epsilon_limit(&mut solve(prof), d, limit_tol)?;
        from_exhaustion(ex, "4c", solver_tol, notes)
    } else {
        BoundResult::closed(0.0, "4c")
    })
}

pub fn p_poincare_bound(req: &BoundRequest) -> Result<BoundResult> {
    p_poincare_bound_with(req, DEFAULT_TOL, DEFAULT_LIMIT_TOL)
}

pub fn p_poincare_bound_with(req: &BoundRequest, tol: f64, limit_tol: f64) -> Result<BoundResult> {
    let (k, n, d) = (req.k, req.n, req.d);
    validate_dimension(Inequality::PPoincare, n)?;
    let p = req.p.ok_or_else(|| Error::Domain("p-Poincare request needs p".into()))?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p = {p} must lie in (1, inf)")));
    }
    if !(d > 0.0) || d.is_nan() {
        return Err(Error::Domain(format!("D = {d} must be positive")));
    }
    let solver_tol = (tol / 10.0).max(1e-11);
    let trig = PTrig::new(p)?;
    let l = l_delta(k, n);
    let d_eff = d.min(l);

    // symmetric (h = 0) model profile
    let prof = if n.is_infinite() {
        if k == 0.0 { Profile::Uniform } else { Profile::Gauss { k } }
    } else if k > 0.0 {
        Profile::CosPow { sd: (k / (n - 1.0)).sqrt(), e: n - 1.0 }
    } else if k < 0.0 {
        Profile::CoshPow { sd: (-k / (n - 1.0)).sqrt(), e: n - 1.0 }
    } else {
        Profile::Uniform
    };

    let mut solve = |an: f64, bn: f64| {
        plap_first_eigenvalue_profile(&prof, &trig, an, bn, solver_tol).map(|r| r.lambda)
    };

    if d_eff.is_finite() {
        if d < l {
            let res = plap_first_eigenvalue_profile(&prof, &trig, -d_eff / 2.0, d_eff / 2.0, solver_tol)?;
            return Ok(BoundResult {
                value: res.lambda,
                case_label: "p".into(),
                method: Method::PlapSolve,
                exactness: Exactness::Exact,
                diagnostics: Diagnostics {
                    solver_tol: Some(solver_tol),
                    residual: Some(res.phase_residual),
                    iterations: Some(res.iterations),
                    ..Default::default()
                },
            });
        }
        // K > 0 with D >= l_delta: the profile vanishes at +-l_delta/2;
        // exhaust the endpoints symmetrically.
        let ex = exhaust_generic(
            &|x| prof.value(x),
            &mut solve,
            prof.support(),
            -d_eff / 2.0,
            d_eff / 2.0,
            limit_tol,
        )?;
        return Ok(BoundResult {
            value: ex.value,
            case_label: "p".into(),
            method: Method::PlapSolve,
            exactness: Exactness::Exact,
            diagnostics: Diagnostics {
                solver_tol: Some(solver_tol),
                levels: Some(ex.levels),
                notes: vec!["endpoint exhaustion toward the full model support".into()],
                ..Default::default()
            },
        });
    }

    // d_eff infinite: only N = inf (or K <= 0) reach here
    if k > 0.0 {
        let ex = exhaust_generic(
            &|x| prof.value(x),
            &mut solve,
            prof.support(),
            f64::NEG_INFINITY,
            f64::INFINITY,
            limit_tol,
        )?;
        return Ok(BoundResult {
            value: ex.value,
            case_label: "p".into(),
            method: Method::PlapSolve,
            exactness: Exactness::Exact,
            diagnostics: Diagnostics {
                solver_tol: Some(solver_tol),
                levels: Some(ex.levels),
                notes: vec!["interval exhaustion to the full line".into()],
                ..Default::default()
            },
        });
    }
    Ok(BoundResult {
        value: 0.0,
        case_label: "p".into(),
        method: Method::ClosedForm,
        exactness: Exactness::Exact,
        diagnostics: Diagnostics {
            notes: vec!["no positive bound for K <= 0 with unbounded diameter".into()],
            ..Default::default()
        },
    })
}

pub fn log_sobolev_bound(req: &BoundRequest) -> Result<BoundResult> {
    log_sobolev_bound_with(req, 20_001)
}

pub fn log_sobolev_bound_with(req: &BoundRequest, diag_grid_points: usize) -> Result<BoundResult> {
    let (k, n, d) = (req.k, req.n, req.d);
    validate_dimension(Inequality::LogSobolev, n)?;
    if !(d > 0.0) || d.is_nan() {
        return Err(Error::Domain(format!("D = {d} must be positive")));
    }
    let (value, exactness) = ls_bound_closed(k, d)?;
    let mut diagnostics = Diagnostics::default();
    if !n.is_infinite() {
        diagnostics
            .notes
            .push(format!("bound computed at N = inf (valid for all finite N = {n} >= 2)"));
    }
    if d.is_finite() {
        // numeric Bobkov-Goetze bracket for the extremal measure
        let cd = CurvatureDimension::new(k, f64::INFINITY)?;
        let measure = ModelMeasure::new(cd, 0.0, -d / 2.0, d / 2.0)?;
        let grid = sample_density(&measure, diag_grid_points.max(1001))?;
        let dist = build_distribution(&grid)?;
        diagnostics.bg_bracket = Some(bobkov_gotze_estimate(&dist, DEFAULT_BG_BRACKET));
    } else {
        diagnostics.notes.push("no numeric bracket attached for unbounded diameter".into());
    }
    if value == 0.0 {
        diagnostics
            .notes
            .push("no log-Sobolev inequality holds for K <= 0 with unbounded diameter".into());
    }
    Ok(BoundResult {
        value,
        case_label: if k > 0.0 { "ls+" } else if k == 0.0 { "ls0" } else { "ls-" }.into(),
        method: Method::BgClosed,
        exactness,
        diagnostics,
    })
}

/// Dispatch on the request's inequality.
pub fn compute_bound(req: &BoundRequest) -> Result<BoundResult> {
    match req.inequality {
        Inequality::Poincare => poincare_bound(req),
        Inequality::PPoincare => p_poincare_bound(req),
        Inequality::LogSobolev => log_sobolev_bound(req),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub lambda: f64,
    pub residual: f64,
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVerdict {
    Pass,
    Fail(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub verdict: SweepVerdict,
    pub skipped: usize,
    pub regime: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    NonDecreasing,
    NonIncreasing,
    Constant,
}

fn expected_h_regime(n: f64) -> Direction {
    if n == -1.0 {
        Direction::Constant
    } else if n > -1.0 && n <= 0.0 {
        Direction::NonIncreasing
    } else {
        Direction::NonDecreasing
    }
}

fn check_direction(rows: &[(f64, f64)], dir: Direction, tol: f64) -> SweepVerdict {
    match dir {
        Direction::Constant => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (_, l) in rows {
                lo = lo.min(*l);
                hi = hi.max(*l);
            }
            if hi - lo <= 1e-6 * hi.abs().max(1e-300) {
                SweepVerdict::Pass
            } else {
                SweepVerdict::Fail(format!(
                    "expected a constant row; relative spread {:.3e}",
                    (hi - lo) / hi.abs().max(1e-300)
                ))
            }
        }
        Direction::NonDecreasing | Direction::NonIncreasing => {
            for w in rows.windows(2) {
                let slack = tol * w[1].1.abs().max(w[0].1.abs()).max(1e-300);
                let bad = match dir {
                    Direction::NonDecreasing => w[1].1 < w[0].1 - slack,
                    _ => w[1].1 > w[0].1 + slack,
                };
                if bad {
                    return SweepVerdict::Fail(format!(
                        "monotonicity broken between parameters {} ({:.9e}) and {} ({:.9e})",
                        w[0].0, w[0].1, w[1].0, w[1].1
                    ));
                }
            }
            SweepVerdict::Pass
        }
    }
}

/// Eigenvalues along an `h` sweep at fixed `d`, with the regime-correct
/// monotonicity verdict in `|h|`.
pub fn monotonicity_sweep(
    k: f64,
    n: f64,
    d: f64,
    h_values: &[f64],
    tol: f64,
) -> Result<SweepTable> {
    let cd = CurvatureDimension::new(k, n)?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!("d = {d} must be positive and finite")));
    }
    let mut rows = Vec::with_capacity(h_values.len());
    let mut usable: Vec<(f64, f64)> = Vec::new();
    let mut skipped = 0usize;
    for &h in h_values {
        let (sa, sb) = model_support(&cd, h);
        let margin = 1e-9 * (1.0 + d);
        if !(sa + margin < -d / 2.0 && d / 2.0 < sb - margin) {
            rows.push(SweepRow {
                param: h,
                lambda: f64::NAN,
                residual: f64::NAN,
                flag: "skipped: outside the regular domain".into(),
            });
            skipped += 1;
            continue;
        }
        let measure = ModelMeasure::new(cd, h, -d / 2.0, d / 2.0)?;
        let res = sl_first_eigenvalue(&measure, tol)?;
        rows.push(SweepRow {
            param: h,
            lambda: res.lambda,
            residual: res.phase_residual,
            flag: "ok".into(),
        });
        usable.push((h, res.lambda));
    }
    if usable.len() < 2 {
        return Err(Error::Domain("fewer than two sweep points lie in the regular domain".into()));
    }
    usable.sort_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap());
    let dir = expected_h_regime(n);
    let verdict = check_direction(&usable, dir, 20.0 * tol);
    Ok(SweepTable {
        rows,
        verdict,
        skipped,
        regime: match dir {
            Direction::NonDecreasing => "non-decreasing in |h|".into(),
            Direction::NonIncreasing => "non-increasing in |h|".into(),
            Direction::Constant => "independent of h".into(),
        },
    })
}

/// Eigenvalues along a diameter sweep at fixed `h`; verdict checks
/// non-increase in `d`.
pub fn diameter_sweep(k: f64, n: f64, h: f64, d_values: &[f64], tol: f64) -> Result<SweepTable> {
    let cd = CurvatureDimension::new(k, n)?;
    let mut rows = Vec::with_capacity(d_values.len());
    let mut usable: Vec<(f64, f64)> = Vec::new();
    let mut skipped = 0usize;
    let (sa, sb) = model_support(&cd, h);
    for &d in d_values {
        let margin = 1e-9 * (1.0 + d.abs());
        if !(d > 0.0) || !d.is_finite() || !(sa + margin < -d / 2.0 && d / 2.0 < sb - margin) {
            rows.push(SweepRow {
                param: d,
                lambda: f64::NAN,
                residual: f64::NAN,
                flag: "skipped: outside the regular domain".into(),
            });
            skipped += 1;
            continue;
        }
        let measure = ModelMeasure::new(cd, h, -d / 2.0, d / 2.0)?;
        let res = sl_first_eigenvalue(&measure, tol)?;
        rows.push(SweepRow {
            param: d,
            lambda: res.lambda,
            residual: res.phase_residual,
            flag: "ok".into(),
        });
        usable.push((d, res.lambda));
    }
    if usable.len() < 2 {
        return Err(Error::Domain("fewer than two sweep points lie in the regular domain".into()));
    }
    usable.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let verdict = check_direction(&usable, Direction::NonIncreasing, 20.0 * tol);
    Ok(SweepTable { rows, verdict, skipped, regime: "non-increasing in d".into() })
}
