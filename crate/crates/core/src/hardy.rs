//! Two-sided Muckenhoupt (Poincare) and Bobkov-Goetze (log-Sobolev)
//! estimators, the closed-form log-Sobolev quantity `Upsilon_0`, and
//! isoperimetric-profile based Cheeger/Ledoux constants, all for sampled
//! one-dimensional densities.

use serde::Serialize;

use crate::density::GridDensity;
use crate::error::{Error, Result};

/// Default multiplicative bracket factor for the Bobkov-Goetze criterion.
/// The underlying equivalence holds up to unspecified universal constants;
/// this is an implementation constant, configurable at every call site.
pub const DEFAULT_BG_BRACKET: f64 = 16.0;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Cumulative data derived from a sampled density.
#[derive(Debug, Clone)]
pub struct DistributionCache {
    grid: GridDensity,
    /// Normalized cumulative distribution at the grid points (0 to 1).
    cdf: Vec<f64>,
    /// Normalized upper-tail mass, accumulated from the right so tiny tails
    /// keep full relative precision.
    tail: Vec<f64>,
    /// Signed Hardy integral `int_median^x 1/p_bar`, accumulated outward
    /// from the median; anchoring anywhere else loses the integral to
    /// cancellation when the endpoints carry astronomically large `1/p_bar`.
    inv_from_median: Vec<f64>,
    total_mass: f64,
    median: f64,
}

impl DistributionCache {
    pub fn median(&self) -> f64 {
        self.median
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn grid(&self) -> &GridDensity {
        &self.grid
    }

    pub fn cdf_at(&self, x: f64) -> f64 {
        interp_at(&self.grid, &self.cdf, x)
    }

    /// Upper-tail mass `1 - F(x)` at full relative precision.
    pub fn tail_at(&self, x: f64) -> f64 {
        interp_at(&self.grid, &self.tail, x)
    }

    /// Signed `int_median^x 1/p_bar`.
    fn hardy_from_median(&self, x: f64) -> f64 {
        interp_at(&self.grid, &self.inv_from_median, x)
    }

    /// `| int_from^to 1/p_bar |` along the grid (the Hardy weight integral).
    pub fn inv_cum_between(&self, from: f64, to: f64) -> f64 {
        (self.hardy_from_median(to) - self.hardy_from_median(from)).abs()
    }

    /// Normalized density at `x` by linear interpolation.
    pub fn density_at(&self, x: f64) -> f64 {
        let vals: Vec<f64> = self.grid.values.iter().map(|v| v / self.total_mass).collect();
        interp_at(&self.grid, &vals, x)
    }

    /// `F^{-1}(t)` by inverse linear interpolation.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("quantile level {t} outside [0, 1]")));
        }
        Ok(inverse_interp(&self.grid, &self.cdf, t))
    }
}

fn interp_at(grid: &GridDensity, vals: &[f64], x: f64) -> f64 {
    let n = vals.len();
    if x <= grid.x0 {
        return vals[0];
    }
    if x >= grid.x_last() {
        return vals[n - 1];
    }
    let u = (x - grid.x0) / grid.dx;
    let i = (u.floor() as usize).min(n - 2);
    let t = u - i as f64;
    vals[i] * (1.0 - t) + vals[i + 1] * t
}

fn inverse_interp(grid: &GridDensity, monotone_vals: &[f64], target: f64) -> f64 {
    let n = monotone_vals.len();
    if target <= monotone_vals[0] {
        return grid.x0;
    }
    if target >= monotone_vals[n - 1] {
        return grid.x_last();
    }
    let i = match monotone_vals.binary_search_by(|v| v.partial_cmp(&target).unwrap()) {
        Ok(i) => return grid.x(i),
        Err(i) => i - 1,
    };
    let lo = monotone_vals[i];
    let hi = monotone_vals[i + 1];
    if hi <= lo {
        return grid.x(i);
    }
    grid.x(i) + grid.dx * (target - lo) / (hi - lo)
}

/// Build the cumulative distribution, total mass and median of a sampled
/// density (trapezoidal integration, inverse-interpolated median).
pub fn build_distribution(density: &GridDensity) -> Result<DistributionCache> {
    let n = density.len();
    let mut cum = vec![0.0; n];
    for i in 1..n {
        cum[i] = cum[i - 1] + 0.5 * (density.values[i - 1] + density.values[i]) * density.dx;
    }
    let total = cum[n - 1];
    if total <= 0.0 {
        return Err(Error::Domain("density has zero total mass".into()));
    }
    let cdf: Vec<f64> = cum.iter().map(|c| c / total).collect();
    let mut tail = vec![0.0; n];
    for i in (0..n - 1).rev() {
        tail[i] =
            tail[i + 1] + 0.5 * (density.values[i] + density.values[i + 1]) * density.dx / total;
    }
    let median = inverse_interp(density, &cdf, 0.5);
    let inv_bar = |i: usize| -> f64 {
        let v = density.values[i] / total;
        if v <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / v
        }
    };
    // p_bar at the median by linear interpolation
    let u = ((median - density.x0) / density.dx).clamp(0.0, (n - 1) as f64);
    let mi = (u.floor() as usize).min(n - 2);
    let frac = u - mi as f64;
    let p_med = (density.values[mi] * (1.0 - frac) + density.values[mi + 1] * frac) / total;
    let inv_med = if p_med <= 0.0 { f64::INFINITY } else { 1.0 / p_med };
    let mut inv_from_median = vec![0.0; n];
    // rightward from the median: partial first cell, then whole cells
    inv_from_median[mi + 1] = 0.5 * (inv_med + inv_bar(mi + 1)) * (density.dx * (1.0 - frac));
    for i in mi + 2..n {
        inv_from_median[i] = inv_from_median[i - 1] + 0.5 * (inv_bar(i - 1) + inv_bar(i)) * density.dx;
    }
    // leftward (signed negative)
    inv_from_median[mi] = -0.5 * (inv_med + inv_bar(mi)) * (density.dx * frac);
    for i in (0..mi).rev() {
        inv_from_median[i] = inv_from_median[i + 1] - 0.5 * (inv_bar(i) + inv_bar(i + 1)) * density.dx;
    }
    Ok(DistributionCache {
        grid: density.clone(),
        cdf,
        tail,
        inv_from_median,
        total_mass: total,
        median,
    })
}

/// A two-sided bracket for a functional constant.
#[derive(Debug, Clone, Serialize)]
pub struct TwoSidedEstimate {
    pub b_minus: f64,
    pub b_plus: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: String,
    pub constants_used: serde_json::Value,
}

impl TwoSidedEstimate {
    /// Geometric midpoint of the bracket; equals `1/B` for both criteria.
    pub fn midpoint(&self) -> f64 {
        (self.lower * self.upper).sqrt()
    }
}

/// Maximize `s(x)` over `[lo, hi]` by golden-section (for the unimodal
/// refinement step around a grid argmax).
fn golden_max(s: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = s(x1);
    let mut f2 = s(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = s(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = s(x1);
        }
    }
    f1.max(f2)
}

/// Supremum over the grid of `factor(tail) * hardy_integral`, refined by
/// golden-section around the best grid point. `side > 0` scans x > median.
fn one_sided_sup(dist: &DistributionCache, side: i8, factor: &impl Fn(f64) -> f64) -> f64 {
    let g = &dist.grid;
    let n = g.len();
    let supremand = |x: f64| -> f64 {
        let tail = if side > 0 { dist.tail_at(x) } else { dist.cdf_at(x) };
        if tail <= 0.0 {
            return 0.0;
        }
        let h = dist.hardy_from_median(x).abs();
        if h.is_infinite() {
            return f64::INFINITY;
        }
        factor(tail) * h
    };
    let mut best = 0.0f64;
    let mut best_x = dist.median;
    for i in 0..n {
        let x = g.x(i);
        if (side > 0 && x <= dist.median) || (side < 0 && x >= dist.median) {
            continue;
        }
        let v = supremand(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    if best.is_infinite() {
        return f64::INFINITY;
    }
    let (floor, ceil) = if side > 0 {
        (dist.median, g.x_last())
    } else {
        (g.x0, dist.median)
    };
    let lo = (best_x - g.dx).max(floor);
    let hi = (best_x + g.dx).min(ceil);
    if lo < hi {
        best = best.max(golden_max(&supremand, lo, hi));
    }
    best
}

/// Muckenhoupt two-sided estimate: `B = B- + B+` brackets the Poincare
/// constant via `1/(4B) <= Lambda <= 4/B`.
pub fn muckenhoupt_estimate(dist: &DistributionCache) -> TwoSidedEstimate {
    let b_plus = one_sided_sup(dist, 1, &|tail| tail);
    let b_minus = one_sided_sup(dist, -1, &|tail| tail);
    let b = b_minus + b_plus;
    let (lower, upper) = if b.is_infinite() {
        (0.0, f64::INFINITY)
    } else if b <= 0.0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        (1.0 / (4.0 * b), 4.0 / b)
    };
    TwoSidedEstimate {
        b_minus,
        b_plus,
        lower,
        upper,
        method: "muckenhoupt".into(),
        constants_used: serde_json::json!({ "bracket_factor": 4.0 }),
    }
}

/// Bobkov-Goetze two-sided estimate for the log-Sobolev constant, with the
/// declared bracket factor (`1/(cB) <= Lambda_LS <= c/B`).
pub fn bobkov_gotze_estimate(dist: &DistributionCache, bracket_factor: f64) -> TwoSidedEstimate {
    let log_factor = |tail: f64| tail * (1.0 / tail).ln();
    let b_plus = one_sided_sup(dist, 1, &log_factor);
    let b_minus = one_sided_sup(dist, -1, &log_factor);
    let b = b_minus + b_plus;
    let (lower, upper) = if b.is_infinite() {
        (0.0, f64::INFINITY)
    } else if b <= 0.0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        (1.0 / (bracket_factor * b), bracket_factor / b)
    };
    TwoSidedEstimate {
        b_minus,
        b_plus,
        lower,
        upper,
        method: "bobkov-gotze".into(),
        constants_used: serde_json::json!({ "bracket_factor": bracket_factor }),
    }
}

/// `Upsilon_0(k, D) = { min(1/sqrt(k), D) * (e^{kD^2/8} - 1)/(kD) }^{-1}`,
/// equivalent (up to universal constants) to the log-Sobolev constant of
/// `e^{kx^2/2}` on `[-D/2, D/2]`.
pub fn ls_upsilon0(k: f64, d: f64) -> Result<f64> {
    if !(k > 0.0) || !(d > 0.0) || !k.is_finite() || !d.is_finite() {
        return Err(Error::Domain(format!("need finite k > 0 and D > 0, got ({k}, {d})")));
    }
    let p_half = (k * d * d / 8.0).exp_m1(); // e^{k (D/2)^2 / 2} - 1
    Ok(1.0 / ((1.0 / k.sqrt()).min(d) * p_half / (k * d)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    UpToConstants,
}

/// Closed-form log-Sobolev lower bound for `CDD(K, inf, D)`:
/// `max(K, 1/D^2)` for `K > 0`, `pi^2/D^2` (exact) for `K = 0`, and
/// `max(sqrt|K|, 1/D) * |K| D / (e^{|K|D^2/8} - 1)` for `K < 0`.
/// Returns 0 when `K <= 0` and `D = inf` (no inequality holds).
pub fn ls_bound_closed(k: f64, d: f64) -> Result<(f64, Exactness)> {
    if !(d > 0.0) || d.is_nan() {
        return Err(Error::Domain(format!("need D > 0, got {d}")));
    }
    if k > 0.0 {
        let inv_d2 = if d.is_finite() { 1.0 / (d * d) } else { 0.0 };
        return Ok((k.max(inv_d2), Exactness::UpToConstants));
    }
    if !d.is_finite() {
        return Ok((0.0, Exactness::UpToConstants));
    }
    if k == 0.0 {
        return Ok((std::f64::consts::PI.powi(2) / (d * d), Exactness::Exact));
    }
    Ok((ls_upsilon0(-k, d)?, Exactness::UpToConstants))
}

/// `I_flat(t)`: the normalized density at the t-quantile.
pub fn isoperimetric_profile_flat(dist: &DistributionCache, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1)")));
    }
    let x = dist.quantile(t)?;
    Ok(dist.density_at(x))
}

/// Infimum of `ratio(I_flat(t), t)` over a refined t-grid in (0, 1/2].
fn ray_infimum(dist: &DistributionCache, ratio: impl Fn(f64, f64) -> f64) -> f64 {
    // linear sweep of (0, 1/2] plus a geometric tail toward t = 0, floored
    // by the grid's mass resolution
    let t_floor = (dist.cdf[1].max(1e-9)).min(0.4);
    let mut best = f64::INFINITY;
    for i in 1..=1000 {
        let t = 0.5 * i as f64 / 1000.0;
        if t < t_floor {
            continue;
        }
        best = best.min(ratio(isoperimetric_profile_flat(dist, t).unwrap(), t));
    }
    let mut t = 0.5;
    while t > t_floor {
        best = best.min(ratio(isoperimetric_profile_flat(dist, t).unwrap(), t));
        t *= 0.8;
    }
    best
}

/// Cheeger constant `inf_{t in (0,1/2]} I(t)/t`, computed through the ray
/// profile (valid for log-concave densities where `I = I_flat`).
pub fn cheeger_constant(dist: &DistributionCache) -> f64 {
    ray_infimum(dist, |i_flat, t| i_flat / t)
}

/// Ledoux constant `inf_{t in (0,1/2]} I(t)/(t sqrt(log(1/t)))`.
pub fn ledoux_constant(dist: &DistributionCache) -> f64 {
    ray_infimum(dist, |i_flat, t| i_flat / (t * (1.0 / t).ln().sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn uniform01(n: usize) -> DistributionCache {
        let dx = 1.0 / (n - 1) as f64;
        build_distribution(&GridDensity::new(0.0, dx, vec![1.0; n]).unwrap()).unwrap()
    }

    fn sampled(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> DistributionCache {
        let dx = (b - a) / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| f(a + dx * i as f64)).collect();
        build_distribution(&GridDensity::new(a, dx, vals).unwrap()).unwrap()
    }

    #[test]
    fn distribution_basics() {
        let d = uniform01(101);
        assert_relative_eq!(d.median(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(d.total_mass(), 1.0, max_relative = 1e-12);

        // truncated exponential: median at ln 2
        let d = sampled(|x| (-x).exp(), 0.0, 40.0, 120_001);
        assert_abs_diff_eq!(d.median(), 2f64.ln(), epsilon = 1e-6);

        // symmetric density: median at the midpoint
        let d = sampled(|x| (-x * x).exp(), -3.0, 3.0, 10_001);
        assert_abs_diff_eq!(d.median(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn zero_mass_rejected() {
        let g = GridDensity::new(0.0, 0.5, vec![0.0, 0.0, 0.0]).unwrap();
        assert!(build_distribution(&g).is_err());
    }

    #[test]
    fn muckenhoupt_uniform_closed_form() {
        // sup_{x > 1/2} (1-x)(x - 1/2) = 1/16 at x = 3/4
        let d = uniform01(4001);
        let est = muckenhoupt_estimate(&d);
        assert_relative_eq!(est.b_plus, 1.0 / 16.0, max_relative = 1e-6);
        assert_relative_eq!(est.b_minus, 1.0 / 16.0, max_relative = 1e-6);
        let lambda = std::f64::consts::PI.powi(2);
        assert!(est.lower <= lambda && lambda <= est.upper);
    }

    #[test]
    fn muckenhoupt_exponential_and_gaussian() {
        // Lambda = 1/4 for e^{-x} on the half line
        let d = sampled(|x| (-x).exp(), 0.0, 40.0, 120_001);
        let est = muckenhoupt_estimate(&d);
        assert!(est.lower <= 0.25 && 0.25 <= est.upper, "bracket [{}, {}]", est.lower, est.upper);

        // Lambda = 1 for the standard Gaussian
        let d = sampled(|x| (-x * x / 2.0).exp(), -8.0, 8.0, 60_001);
        let est = muckenhoupt_estimate(&d);
        assert!(est.lower <= 1.0 && 1.0 <= est.upper, "bracket [{}, {}]", est.lower, est.upper);
    }

    #[test]
    fn interior_zero_gives_infinite_b() {
        let mut vals = vec![1.0; 101];
        for v in vals.iter_mut().take(61).skip(40) {
            *v = 0.0;
        }
        let g = GridDensity::new(0.0, 0.01, vals).unwrap();
        let d = build_distribution(&g).unwrap();
        let est = muckenhoupt_estimate(&d);
        assert_eq!(est.lower, 0.0);
        assert_eq!(est.upper, f64::INFINITY);
    }

    #[test]
    fn bobkov_gotze_brackets() {
        // standard Gaussian satisfies LS(1)
        let d = sampled(|x| (-x * x / 2.0).exp(), -8.0, 8.0, 60_001);
        let est = bobkov_gotze_estimate(&d, DEFAULT_BG_BRACKET);
        assert!(est.lower <= 1.0 && 1.0 <= est.upper, "bracket [{}, {}]", est.lower, est.upper);

        // uniform: Lambda_LS = Lambda_Poi = pi^2/D^2
        for dlen in [1.0, 2.0] {
            let d = sampled(|_| 1.0, -dlen / 2.0, dlen / 2.0, 4001);
            let est = bobkov_gotze_estimate(&d, DEFAULT_BG_BRACKET);
            let target = std::f64::consts::PI.powi(2) / (dlen * dlen);
            assert!(
                est.lower <= target && target <= est.upper,
                "D = {dlen}: bracket [{}, {}] vs {target}",
                est.lower,
                est.upper
            );
        }
    }

    #[test]
    fn exponential_bg_supremand_grows_with_radius() {
        // the exponential measure admits no log-Sobolev inequality: its BG
        // supremand grows ~ x, so b_plus tracks the truncation radius
        let b40 = bobkov_gotze_estimate(&sampled(|x| (-x).exp(), 0.0, 40.0, 120_001), 16.0).b_plus;
        let b80 = bobkov_gotze_estimate(&sampled(|x| (-x).exp(), 0.0, 80.0, 240_001), 16.0).b_plus;
        assert!(b40 > 30.0, "b_plus(40) = {b40}");
        assert!(b80 > b40 + 30.0, "divergence signal missing: {b40} -> {b80}");
    }

    #[test]
    fn upsilon0_values() {
        // k = 1, D = 2 -> 1/(min(1,2) (e^{1/2}-1)/2)
        let expect = 1.0 / ((0.5f64).exp_m1() / 2.0);
        assert_relative_eq!(ls_upsilon0(1.0, 2.0).unwrap(), expect, max_relative = 1e-14);
        assert_relative_eq!(ls_upsilon0(1.0, 2.0).unwrap(), 3.0830, max_relative = 1e-4);
        // k -> 0 limit: 8/D^2
        assert_relative_eq!(ls_upsilon0(1e-6, 3.0).unwrap(), 8.0 / 9.0, max_relative = 1e-5);
        // scaling: Upsilon_0(k, D) = k Upsilon_0(1, sqrt(k) D)
        for (k, d) in [(2.0, 1.0), (0.5, 3.0), (7.3, 0.4)] {
            assert_relative_eq!(
                ls_upsilon0(k, d).unwrap(),
                k * ls_upsilon0(1.0, k.sqrt() * d).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn ls_closed_form_cases() {
        let (v, e) = ls_bound_closed(0.0, 2.0).unwrap();
        assert_relative_eq!(v, std::f64::consts::PI.powi(2) / 4.0);
        assert_eq!(e, Exactness::Exact);

        let (v, e) = ls_bound_closed(3.0, 10.0).unwrap();
        assert_relative_eq!(v, 3.0);
        assert_eq!(e, Exactness::UpToConstants);

        let (v, _) = ls_bound_closed(-1.0, 2.0).unwrap();
        assert_relative_eq!(v, ls_upsilon0(1.0, 2.0).unwrap(), max_relative = 1e-14);

        let (v, _) = ls_bound_closed(4.0, f64::INFINITY).unwrap();
        assert_relative_eq!(v, 4.0);

        let (v, _) = ls_bound_closed(-1.0, f64::INFINITY).unwrap();
        assert_eq!(v, 0.0);
        let (v, _) = ls_bound_closed(0.0, f64::INFINITY).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn isoperimetric_profile() {
        let d = uniform01(1001);
        assert_relative_eq!(isoperimetric_profile_flat(&d, 0.25).unwrap(), 1.0, max_relative = 1e-9);
        assert!(isoperimetric_profile_flat(&d, 0.0).is_err());

        // Gaussian at the median: 1/sqrt(2 pi)
        let g = sampled(|x| (-x * x / 2.0).exp(), -8.0, 8.0, 40_001);
        assert_relative_eq!(
            isoperimetric_profile_flat(&g, 0.5).unwrap(),
            1.0 / (2.0 * std::f64::consts::PI).sqrt(),
            max_relative = 1e-5
        );

        // symmetry
        for t in [0.1, 0.3, 0.45] {
            assert_relative_eq!(
                isoperimetric_profile_flat(&g, t).unwrap(),
                isoperimetric_profile_flat(&g, 1.0 - t).unwrap(),
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn cheeger_and_ledoux() {
        let d = uniform01(2001);
        let che = cheeger_constant(&d);
        assert_relative_eq!(che, 2.0, max_relative = 1e-6);
        // Cheeger inequality sanity: h/2 <= sqrt(Lambda)
        assert!(0.5 * che <= std::f64::consts::PI + 1e-9);
        // pointwise comparison gives l_Led <= h_Che / sqrt(log 2)
        let led = ledoux_constant(&d);
        assert!(led <= che / 2f64.ln().sqrt() + 1e-9);
    }
}
