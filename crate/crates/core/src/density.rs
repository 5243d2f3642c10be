//! Model densities `J_{K,N,h}`, their supports and canonical shift/scale
//! form, the sampled-grid density carrier, and numeric curvature-dimension
//! checkers for grid densities.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureDimension;
use crate::error::{Error, Result};
use crate::means::distorted_mean_m;

/// `si_delta(x)`: sin(sqrt(d)x)/sqrt(d), x, or sinh(sqrt(-d)x)/sqrt(-d).
pub(crate) fn si_delta(delta: f64, x: f64) -> f64 {
    if delta > 0.0 {
        let s = delta.sqrt();
        (s * x).sin() / s
    } else if delta == 0.0 {
        x
    } else {
        let s = (-delta).sqrt();
        (s * x).sinh() / s
    }
}

/// `co_delta(x)`: cos(sqrt(d)x), 1, or cosh(sqrt(-d)x).
pub(crate) fn co_delta(delta: f64, x: f64) -> f64 {
    if delta > 0.0 {
        (delta.sqrt() * x).cos()
    } else if delta == 0.0 {
        1.0
    } else {
        ((-delta).sqrt() * x).cosh()
    }
}

/// Value of the model density `J_{K,N,h}` at `x` (extended: may be `+inf`
/// outside-the-positive-part points when `N < 1`).
pub fn model_density_value(cd: &CurvatureDimension, h: f64, x: f64) -> f64 {
    let n = cd.n();
    if n.is_infinite() {
        return (h * x - cd.k() / 2.0 * x * x).exp();
    }
    let delta = cd.delta();
    let inner = co_delta(delta, x) + h / (n - 1.0) * si_delta(delta, x);
    if inner > 0.0 {
        inner.powf(n - 1.0)
    } else if n > 1.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Derivative of `log J_{K,N,h}` where defined.
pub(crate) fn model_log_deriv(cd: &CurvatureDimension, h: f64, x: f64) -> f64 {
    let n = cd.n();
    if n.is_infinite() {
        return h - cd.k() * x;
    }
    let delta = cd.delta();
    let inner = co_delta(delta, x) + h / (n - 1.0) * si_delta(delta, x);
    // inner' = -delta * si + (h/(N-1)) * co
    let inner_d = -delta * si_delta(delta, x) + h / (n - 1.0) * co_delta(delta, x);
    (n - 1.0) * inner_d / inner
}

/// The maximal open interval on which `J_{K,N,h}` is positive and finite.
pub fn model_support(cd: &CurvatureDimension, h: f64) -> (f64, f64) {
    let n = cd.n();
    if n.is_infinite() || n == 1.0 {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let delta = cd.delta();
    if delta > 0.0 {
        let sq = delta.sqrt();
        let w = h / ((n - 1.0) * sq);
        let s = -w.atan() / sq;
        let half = std::f64::consts::FRAC_PI_2 / sq;
        (-half - s, half - s)
    } else if delta == 0.0 {
        if h == 0.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            let c = h / (n - 1.0);
            if c > 0.0 {
                (-1.0 / c, f64::INFINITY)
            } else {
                (f64::NEG_INFINITY, -1.0 / c)
            }
        }
    } else {
        let sq = (-delta).sqrt();
        let w = h / ((n - 1.0) * sq);
        if w.abs() <= 1.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            // cosh + w sinh = sign(w) sqrt(w^2-1) sinh(sq (x + s))
            let s = (1.0 / w).atanh() / sq;
            if w > 0.0 {
                (-s, f64::INFINITY)
            } else {
                (f64::NEG_INFINITY, -s)
            }
        }
    }
}

/// The eight canonical profile shapes `Y` of the model family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// `cos(sd * x)_+^e`
    CosPow { sd: f64, e: f64 },
    /// `sin(sd * x)_+^e`
    SinPow { sd: f64, e: f64 },
    /// `x_+^e`
    PowerLaw { e: f64 },
    /// `cosh(sd * x)^e`
    CoshPow { sd: f64, e: f64 },
    /// `sinh(sd * x)_+^e`
    SinhPow { sd: f64, e: f64 },
    /// `exp(r * x)`
    ExpLin { r: f64 },
    /// `exp(-k x^2 / 2)`
    Gauss { k: f64 },
    /// constant 1
    Uniform,
}

impl Profile {
    pub fn value(&self, x: f64) -> f64 {
        fn pos_pow(base: f64, e: f64) -> f64 {
            if base > 0.0 {
                base.powf(e)
            } else if e > 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }
        match *self {
            Profile::CosPow { sd, e } => pos_pow((sd * x).cos(), e),
            Profile::SinPow { sd, e } => pos_pow((sd * x).sin(), e),
            Profile::PowerLaw { e } => pos_pow(x, e),
            Profile::CoshPow { sd, e } => (sd * x).cosh().powf(e),
            Profile::SinhPow { sd, e } => pos_pow((sd * x).sinh(), e),
            Profile::ExpLin { r } => (r * x).exp(),
            Profile::Gauss { k } => (-k * x * x / 2.0).exp(),
            Profile::Uniform => 1.0,
        }
    }

    /// `(log Y)'` on the interior of the support.
    pub fn log_deriv(&self, x: f64) -> f64 {
        match *self {
            Profile::CosPow { sd, e } => -e * sd * (sd * x).tan(),
            Profile::SinPow { sd, e } => e * sd / (sd * x).tan(),
            Profile::PowerLaw { e } => e / x,
            Profile::CoshPow { sd, e } => e * sd * (sd * x).tanh(),
            Profile::SinhPow { sd, e } => e * sd / (sd * x).tanh(),
            Profile::ExpLin { r } => r,
            Profile::Gauss { k } => -k * x,
            Profile::Uniform => 0.0,
        }
    }

    /// Maximal open interval of positivity and finiteness.
    pub fn support(&self) -> (f64, f64) {
        use std::f64::consts::{FRAC_PI_2, PI};
        match *self {
            Profile::CosPow { sd, .. } => (-FRAC_PI_2 / sd, FRAC_PI_2 / sd),
            Profile::SinPow { sd, .. } => (0.0, PI / sd),
            Profile::PowerLaw { .. } | Profile::SinhPow { .. } => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// Canonical-form case label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    A,
    B1,
    B2,
    C1,
    C2,
    C3,
    D1,
    D2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::A => "a",
            CaseTag::B1 => "b1",
            CaseTag::B2 => "b2",
            CaseTag::C1 => "c1",
            CaseTag::C2 => "c2",
            CaseTag::C3 => "c3",
            CaseTag::D1 => "d1",
            CaseTag::D2 => "d2",
        };
        f.write_str(s)
    }
}

/// Shift/scale representation `J_{K,N,h}(x) = g * Y(x + s)` (or
/// `g * Y(-(x + s))` when `reflected`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub case: CaseTag,
    pub shift: f64,
    pub scale: f64,
    pub reflected: bool,
    pub profile: Profile,
}

impl CanonicalForm {
    pub fn value(&self, x: f64) -> f64 {
        let arg = if self.reflected { -(x + self.shift) } else { x + self.shift };
        self.scale * self.profile.value(arg)
    }
}

/// Decompose `J_{K,N,h}` into its canonical case, shift and scale.
pub fn canonical_form(cd: &CurvatureDimension, h: f64) -> CanonicalForm {
    let k = cd.k();
    let n = cd.n();
    if n.is_infinite() {
        if k != 0.0 {
            return CanonicalForm {
                case: CaseTag::D1,
                shift: -h / k,
                scale: (h * h / (2.0 * k)).exp(),
                reflected: false,
                profile: Profile::Gauss { k },
            };
        }
        return CanonicalForm {
            case: CaseTag::D2,
            shift: 0.0,
            scale: 1.0,
            reflected: false,
            profile: Profile::ExpLin { r: h },
        };
    }
    let delta = cd.delta();
    let e = n - 1.0;
    if delta > 0.0 {
        let sd = delta.sqrt();
        let w = h / (e * sd);
        let s = -w.atan() / sd;
        CanonicalForm {
            case: CaseTag::A,
            shift: s,
            scale: (sd * s).cos().powf(-e),
            reflected: false,
            profile: Profile::CosPow { sd, e },
        }
    } else if delta == 0.0 {
        if h == 0.0 {
            CanonicalForm {
                case: CaseTag::B2,
                shift: 0.0,
                scale: 1.0,
                reflected: false,
                profile: Profile::Uniform,
            }
        } else {
            let c = h / e;
            CanonicalForm {
                case: CaseTag::B1,
                shift: e / h,
                scale: c.abs().powf(e),
                reflected: c < 0.0,
                profile: Profile::PowerLaw { e },
            }
        }
    } else {
        let sd = (-delta).sqrt();
        let w = h / (e * sd);
        if w.abs() < 1.0 {
            let s = w.atanh() / sd;
            CanonicalForm {
                case: CaseTag::C1,
                shift: s,
                scale: (sd * s).cosh().powf(-e),
                reflected: false,
                profile: Profile::CoshPow { sd, e },
            }
        } else if w.abs() == 1.0 {
            CanonicalForm {
                case: CaseTag::C3,
                shift: 0.0,
                scale: 1.0,
                reflected: w < 0.0,
                profile: Profile::ExpLin { r: sd * e },
            }
        } else {
            let s = (1.0 / w).atanh() / sd;
            CanonicalForm {
                case: CaseTag::C2,
                shift: s,
                scale: (sd * s.abs()).sinh().powf(-e),
                reflected: w < 0.0,
                profile: Profile::SinhPow { sd, e },
            }
        }
    }
}

/// A model density restricted to an interval: the atom every solver consumes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelMeasure {
    pub cd: CurvatureDimension,
    pub h: f64,
    interval: (f64, f64),
}

impl ModelMeasure {
    /// Interval endpoints may be infinite (matching an unbounded support).
    pub fn new(cd: CurvatureDimension, h: f64, a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || b.is_nan() || !(a < b) {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        let (sa, sb) = model_support(&cd, h);
        let tol = 1e-12 * (1.0 + a.abs().min(f64::MAX) + b.abs().min(f64::MAX));
        if a < sa - tol || b > sb + tol {
            return Err(Error::Domain(format!(
                "[{a}, {b}] is not contained in the support closure [{sa}, {sb}]"
            )));
        }
        let n = cd.n();
        if cd.k() < 0.0 && n <= 0.0 {
            let l = cd.l_delta();
            if b - a >= l {
                return Err(Error::Proviso { d: b - a, l_delta: l });
            }
        }
        // Finite mass: endpoints may touch the support boundary only where
        // the density stays integrable (exponent > -1 at a simple zero).
        if n.is_finite() && n != 1.0 && n - 1.0 <= -1.0 && (a <= sa || b >= sb) {
            return Err(Error::Domain(
                "density is not integrable at the support boundary; take a strictly interior interval".into(),
            ));
        }
        Ok(Self { cd, h, interval: (a, b) })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn density(&self, x: f64) -> f64 {
        let (a, b) = self.interval;
        if x < a || x > b {
            0.0
        } else {
            model_density_value(&self.cd, self.h, x)
        }
    }
}

/// A sampled non-negative density on a uniform grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDensity {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| *v < 0.0) {
            return Err(Error::Domain("grid values must be finite and non-negative".into()));
        }
        Self::signed(x0, dx, values)
    }

    /// Grid carrier for signed sample data (eigenfunctions, test functions).
    pub fn signed(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !x0.is_finite() || !dx.is_finite() || dx <= 0.0 {
            return Err(Error::Domain(format!("bad grid origin/step ({x0}, {dx})")));
        }
        if values.len() < 3 {
            return Err(Error::Domain("a grid density needs at least 3 samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid values must be finite".into()));
        }
        Ok(Self { x0, dx, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn x_last(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.x(i))
    }

    pub fn same_grid(&self, other: &GridDensity) -> bool {
        self.values.len() == other.values.len()
            && (self.x0 - other.x0).abs() <= 1e-12 * (1.0 + self.x0.abs())
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
    }

    /// Two-column CSV (`x,value`), `#`-prefixed comments allowed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# x,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{:.17e},{:.17e}\n", self.x(i), v));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',');
            let bad = || Error::InvalidInput(format!("line {}: expected `x,value`", ln + 1));
            let x: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let v: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            xs.push(x);
            vs.push(v);
        }
        if xs.len() < 3 {
            return Err(Error::InvalidInput("need at least 3 rows".into()));
        }
        let dx = xs[1] - xs[0];
        for i in 1..xs.len() {
            if ((xs[i] - xs[i - 1]) - dx).abs() > 1e-9 * dx.abs().max(1e-300) {
                return Err(Error::InvalidInput("grid must be uniform".into()));
            }
        }
        GridDensity::new(xs[0], dx, vs)
    }
}

/// Sample a model measure on a uniform grid of `n_points` over its interval.
pub fn sample_density(measure: &ModelMeasure, n_points: usize) -> Result<GridDensity> {
    let (a, b) = measure.interval();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(
            "interval is unbounded; sample a compact sub-interval (exhaustion)".into(),
        ));
    }
    if n_points < 3 {
        return Err(Error::Domain("need at least 3 sample points".into()));
    }
    let (sa, sb) = model_support(&measure.cd, measure.h);
    let n = measure.cd.n();
    if n.is_finite() && n < 1.0 {
        // Endpoints this close to the support boundary put non-integrable
        // values on the grid.
        if a - sa < 1e-9 || sb - b < 1e-9 {
            return Err(Error::Domain(
                "interval endpoint within 1e-9 of the support boundary; retreat the endpoint".into(),
            ));
        }
    }
    let dx = (b - a) / (n_points - 1) as f64;
    let values: Vec<f64> = (0..n_points)
        .map(|i| model_density_value(&measure.cd, measure.h, a + dx * i as f64))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("density is infinite on the requested grid".into()));
    }
    GridDensity::new(a, dx, values)
}

/// Outcome of a pointwise differential curvature-dimension check.
#[derive(Debug, Clone, Serialize)]
pub struct CdCheckReport {
    /// Largest amount by which `K - (-LogHess J)` exceeds 0 (0 when clean).
    pub max_violation: f64,
    /// Grid locations (x values) where the violation exceeds the tolerance.
    pub violation_locations: Vec<f64>,
    pub checked_points: usize,
    pub tolerance: f64,
}

impl CdCheckReport {
    pub fn passed(&self) -> bool {
        self.violation_locations.is_empty()
    }
}

/// Check `-(log J)'' - ((log J)')^2/(N-1) >= K` by second-order central
/// differences at the interior grid points.
pub fn cd_differential_check(
    density: &GridDensity,
    k: f64,
    n: f64,
    tol: f64,
) -> Result<CdCheckReport> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if density.values.iter().any(|v| *v <= 0.0) {
        return Err(Error::Domain("differential check requires strictly positive samples".into()));
    }
    let g: Vec<f64> = density.values.iter().map(|v| v.ln()).collect();
    let h = density.dx;
    let inv_n1 = if n.is_infinite() { 0.0 } else { 1.0 / (n - 1.0) };
    let mut max_violation = f64::NEG_INFINITY;
    let mut locations = Vec::new();
    for i in 1..g.len() - 1 {
        let d1 = (g[i + 1] - g[i - 1]) / (2.0 * h);
        let d2 = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h);
        let lhs = -d2 - inv_n1 * d1 * d1;
        let violation = k - lhs;
        if violation > max_violation {
            max_violation = violation;
        }
        if violation > tol {
            locations.push(density.x(i));
        }
    }
    Ok(CdCheckReport {
        max_violation: max_violation.max(0.0),
        violation_locations: locations,
        checked_points: g.len() - 2,
        tolerance: tol,
    })
}

/// Outcome of the randomized midpoint-inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct MidpointCheckReport {
    pub checked_triples: usize,
    /// Largest `M - J(x_t)` over the sampled triples (0 when clean).
    pub max_violation: f64,
    /// Largest `|J(x_t) - M|` over triples with finite mean (equality gap).
    pub max_gap: f64,
    pub violation_locations: Vec<(f64, f64, f64)>,
    pub tolerance: f64,
}

impl MidpointCheckReport {
    pub fn passed(&self) -> bool {
        self.violation_locations.is_empty()
    }
}

/// Check `J(x_t) >= M^{(t)}_{K,N-1}[|x1-x0|](J(x0), J(x1))` on random
/// grid-aligned triples.
pub fn cd_midpoint_check(
    density: &GridDensity,
    k: f64,
    n: f64,
    n_triples: usize,
    seed: u64,
    tol: f64,
) -> Result<MidpointCheckReport> {
    if n_triples == 0 {
        return Err(Error::Domain("need at least one triple".into()));
    }
    let m = density.values.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation: f64 = 0.0;
    let mut max_gap: f64 = 0.0;
    let mut locations = Vec::new();
    let mut checked = 0usize;
    while checked < n_triples {
        let i0 = rng.random_range(0..m - 2);
        let i1 = rng.random_range(i0 + 2..m);
        let it = rng.random_range(i0 + 1..i1);
        let t = (it - i0) as f64 / (i1 - i0) as f64;
        let x0 = density.x(i0);
        let x1 = density.x(i1);
        let rhs = distorted_mean_m(t, k, n - 1.0, x1 - x0, density.values[i0], density.values[i1])?;
        let lhs = density.values[it];
        checked += 1;
        if rhs.is_finite() {
            max_gap = max_gap.max((lhs - rhs).abs());
        }
        let violation = rhs - lhs;
        if violation > max_violation {
            max_violation = violation;
        }
        if violation > tol * (1.0 + rhs.abs().min(f64::MAX)) {
            locations.push((x0, x1, density.x(it)));
        }
    }
    Ok(MidpointCheckReport {
        checked_triples: checked,
        max_violation,
        max_gap,
        violation_locations: locations,
        tolerance: tol,
    })
}
