//! Distortion coefficients sigma/tau, the distorted means M and M-tilde,
//! and the classical weighted means, with extended-value conventions.
//!
//! All branch guards run before any arithmetic so that `0 * inf` and
//! `inf - inf` never arise; `+inf` is an ordinary return value.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const PI2: f64 = PI * PI;
/// Width of the limit band around `pi^2` for the trigonometric guard.
const SINGULAR_BAND: f64 = 1e-12;

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} must lie in [0, 1]")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_nan() || theta < 0.0 {
        return Err(Error::Domain(format!("theta = {theta} must be non-negative")));
    }
    Ok(())
}

/// `sinh(t*s)/sinh(s)` for `s > 0`, stable for large `s`.
fn sinh_ratio(t: f64, s: f64) -> f64 {
    if s > 30.0 {
        // e^{(t-1)s} (1 - e^{-2ts}) / (1 - e^{-2s})
        ((t - 1.0) * s).exp() * (1.0 - (-2.0 * t * s).exp()) / (1.0 - (-2.0 * s).exp())
    } else {
        (t * s).sinh() / s.sinh()
    }
}

/// The distortion coefficient `sigma^{(t)}_{K,NN}(theta)`.
///
/// `nn` is the coefficient dimension (one less than the effective dimension
/// in the `tau`/`M~` compositions); admissible values satisfy
/// `nn + 1 in (-inf, 0] ∪ [1, inf]`, i.e. `nn in (-inf, -1] ∪ [0, inf]`.
pub fn sigma(t: f64, k: f64, nn: f64, theta: f64) -> Result<f64> {
    check_t(t)?;
    check_theta(theta)?;
    if !k.is_finite() {
        return Err(Error::Domain(format!("K must be finite, got {k}")));
    }
    if nn.is_nan() || (nn > -1.0 && nn < 0.0) {
        return Err(Error::Domain(format!(
            "coefficient dimension {nn} outside (-inf, -1] ∪ [0, inf]"
        )));
    }
    if nn == 0.0 {
        return Ok(t);
    }
    // K/nn is 0 for nn = +-inf by IEEE; the zero branch below then applies.
    let x = k / nn * theta * theta;
    if x >= PI2 {
        Ok(f64::INFINITY)
    } else if x >= PI2 - SINGULAR_BAND {
        // inside the limit band the sine denominator underflows; return the
        // limit value instead
        Ok(if t == 1.0 {
            1.0
        } else if t == 0.0 {
            0.0
        } else {
            f64::INFINITY
        })
    } else if x == 0.0 {
        Ok(t)
    } else if x > 0.0 {
        let s = x.sqrt();
        Ok((t * s).sin() / s.sin())
    } else {
        let s = (-x).sqrt();
        Ok(sinh_ratio(t, s))
    }
}

/// `tau^{(t)}_{K,N}(theta) = t^{1/N} * sigma^{(t)}_{K,N-1}(theta)^{1-1/N}`.
///
/// For `N = inf` the exponents `1/N` are 0; for `N = 0` the value is the
/// one-sided limit `N -> 0-` (the `N = 0` branch of the distorted mean
/// does not route through this function).
pub fn tau(t: f64, k: f64, n: f64, theta: f64) -> Result<f64> {
    check_t(t)?;
    check_theta(theta)?;
    if n.is_nan() || (n > 0.0 && n < 1.0 && n.is_finite()) {
        return Err(Error::Domain(format!("N = {n} lies in (0, 1)")));
    }
    if n.is_infinite() {
        return sigma(t, k, f64::INFINITY, theta);
    }
    let s = sigma(t, k, n - 1.0, theta)?;
    if n == 0.0 {
        // lim_{N->0-} exp((1/N) ln t + (1 - 1/N) ln s)
        return Ok(if t < s {
            f64::INFINITY
        } else if t > s {
            0.0
        } else {
            s
        });
    }
    if s.is_infinite() {
        // 1 - 1/N > 0 throughout the admissible range, so inf^{1-1/N} = inf.
        return Ok(f64::INFINITY);
    }
    Ok(t.powf(1.0 / n) * s.powf(1.0 - 1.0 / n))
}

/// The distorted mean `M^{(t)}_{K,NN}[d](a, b)`.
///
/// Admissible coefficient dimensions: `nn in (-inf, -1] ∪ {0} ∪ (0, inf]`.
pub fn distorted_mean_m(t: f64, k: f64, nn: f64, d: f64, a: f64, b: f64) -> Result<f64> {
    check_t(t)?;
    check_theta(d)?;
    if a < 0.0 || b < 0.0 || a.is_nan() || b.is_nan() {
        return Err(Error::Domain("arguments a, b must be non-negative".into()));
    }
    if nn.is_nan() || (nn > -1.0 && nn < 0.0) {
        return Err(Error::Domain(format!(
            "coefficient dimension {nn} outside (-inf, -1] ∪ [0, inf]"
        )));
    }
    if a * b == 0.0 {
        return Ok(0.0);
    }
    if nn == 0.0 {
        return Ok(a.max(b));
    }
    let x = k / nn * d * d;
    if x >= PI2 - SINGULAR_BAND {
        // Only reachable when K and nn share a sign.
        return Ok(if k > 0.0 && nn > 0.0 { f64::INFINITY } else { 0.0 });
    }
    if nn.is_infinite() {
        return Ok(a.powf(1.0 - t) * b.powf(t) * (k * t * (1.0 - t) * d * d / 2.0).exp());
    }
    let s1 = sigma(1.0 - t, k, nn, d)?;
    let s2 = sigma(t, k, nn, d)?;
    Ok((s1 * a.powf(1.0 / nn) + s2 * b.powf(1.0 / nn)).powf(nn))
}

/// The distorted mean `M~^{(t)}_{K,N}[d](a, b)`.
///
/// Admissible dimensions: `N in (-inf, 0] ∪ [1, inf]`.
pub fn distorted_mean_mtilde(t: f64, k: f64, n: f64, d: f64, a: f64, b: f64) -> Result<f64> {
    check_t(t)?;
    check_theta(d)?;
    if a < 0.0 || b < 0.0 || a.is_nan() || b.is_nan() {
        return Err(Error::Domain("arguments a, b must be non-negative".into()));
    }
    if n.is_nan() || (n > 0.0 && n < 1.0 && n.is_finite()) {
        return Err(Error::Domain(format!("N = {n} lies in (0, 1)")));
    }
    if a * b == 0.0 {
        return Ok(0.0);
    }
    if n == 0.0 {
        let s1 = sigma(1.0 - t, k, -1.0, d)?;
        let s2 = sigma(t, k, -1.0, d)?;
        return Ok(((1.0 - t) / s1 * a).min(t / s2 * b));
    }
    let delta = if n.is_infinite() || n == 1.0 { 0.0 } else { k / (n - 1.0) };
    let x = delta * d * d;
    if x >= PI2 - SINGULAR_BAND {
        return Ok(if k > 0.0 && n >= 1.0 { f64::INFINITY } else { 0.0 });
    }
    if n.is_infinite() {
        return Ok(a.powf(1.0 - t) * b.powf(t) * (k * t * (1.0 - t) * d * d / 2.0).exp());
    }
    let t1 = tau(1.0 - t, k, n, d)?;
    let t2 = tau(t, k, n, d)?;
    Ok((t1 * a.powf(1.0 / n) + t2 * b.powf(1.0 / n)).powf(n))
}

/// The classical weighted mean `M_p^{(t)}(a, b)` with limit branches at
/// `p in {0, +inf, -inf}` and the vanishing-argument convention.
pub fn classical_mean(p: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    check_t(t)?;
    if a < 0.0 || b < 0.0 || a.is_nan() || b.is_nan() {
        return Err(Error::Domain("arguments a, b must be non-negative".into()));
    }
    if a * b == 0.0 {
        return Ok(0.0);
    }
    Ok(if p == 0.0 {
        a.powf(1.0 - t) * b.powf(t)
    } else if p == f64::INFINITY {
        a.max(b)
    } else if p == f64::NEG_INFINITY {
        a.min(b)
    } else {
        ((1.0 - t) * a.powf(p) + t * b.powf(p)).powf(1.0 / p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sigma_branches() {
        // flat branch
        assert_relative_eq!(sigma(0.3, 0.0, 2.0, 1.0).unwrap(), 0.3);
        // trigonometric at t = 1
        assert_relative_eq!(sigma(1.0, 1.0, 2.0, 1.0).unwrap(), 1.0);
        // past the conjugate point
        assert_eq!(sigma(0.5, 10.0, 1.0, 1.0).unwrap(), f64::INFINITY);
        // inside the limit band the endpoint values survive
        let k_band = PI2 * (1.0 - 1e-14);
        assert_eq!(sigma(0.5, k_band, 1.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(sigma(1.0, k_band, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(sigma(0.0, k_band, 1.0, 1.0).unwrap(), 0.0);
        // hyperbolic: sinh(1)/sinh(2)
        assert_relative_eq!(
            sigma(0.5, -1.0, 1.0, 2.0).unwrap(),
            1f64.sinh() / 2f64.sinh(),
            max_relative = 1e-14
        );
        assert_relative_eq!(sigma(0.5, -1.0, 1.0, 2.0).unwrap(), 0.324027, max_relative = 1e-5);
        // theta = 0 collapses to t for every admissible dimension
        for nn in [-3.0, -1.0, 0.0, 0.5, 2.0, f64::INFINITY] {
            assert_relative_eq!(sigma(0.7, 5.0, nn, 0.0).unwrap(), 0.7);
        }
        // dedicated zero-dimension branch
        assert_relative_eq!(sigma(0.25, 3.0, 0.0, 2.0).unwrap(), 0.25);
        assert!(sigma(0.5, 1.0, -0.5, 1.0).is_err());
        assert!(sigma(1.5, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn sinh_ratio_large_arguments() {
        let exact = |t: f64, s: f64| ((t - 1.0) * s).exp() * (1.0 - (-2.0 * t * s).exp());
        for s in [40.0, 200.0, 700.0] {
            let r = sinh_ratio(0.25, s);
            assert!(r.is_finite());
            assert_relative_eq!(r, exact(0.25, s), max_relative = 1e-13);
        }
    }

    #[test]
    fn tau_values() {
        // K = 0 makes sigma = t
        assert_relative_eq!(tau(0.25, 0.0, 2.0, 5.0).unwrap(), 0.25, max_relative = 1e-14);
        assert_relative_eq!(tau(0.0, 3.0, 4.0, 1.0).unwrap(), 0.0);
        // composition against sigma evaluated directly
        let s = sigma(0.5, -1.0, -3.0, 1.0).unwrap();
        let expect = 0.5f64.powf(-0.5) * s.powf(1.5);
        assert_relative_eq!(tau(0.5, -1.0, -2.0, 1.0).unwrap(), expect, max_relative = 1e-14);
        // N = inf: tau = sigma_{K,inf} = t
        assert_relative_eq!(tau(0.3, 2.0, f64::INFINITY, 1.0).unwrap(), 0.3);
        assert!(tau(0.5, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn mean_m_branches() {
        // arithmetic mean at K = 0, nn = 1
        assert_relative_eq!(distorted_mean_m(0.5, 0.0, 1.0, 2.0, 1.0, 3.0).unwrap(), 2.0);
        // vanishing argument convention
        assert_eq!(distorted_mean_m(0.3, 5.0, 2.0, 1.0, 0.0, 7.0).unwrap(), 0.0);
        // Gaussian branch
        assert_relative_eq!(
            distorted_mean_m(0.5, 1.0, f64::INFINITY, 1.0, 1.0, 1.0).unwrap(),
            (1.0f64 / 8.0).exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            distorted_mean_m(0.5, 1.0, f64::INFINITY, 1.0, 1.0, 1.0).unwrap(),
            1.133148,
            max_relative = 1e-6
        );
        // max branch at nn = 0
        assert_relative_eq!(distorted_mean_m(0.5, 3.0, 0.0, 1.0, 2.0, 5.0).unwrap(), 5.0);
    }

    #[test]
    fn mean_mtilde_branches() {
        // power-mean branch: ((1-t) a^{1/N} + t b^{1/N})^N at K = 0
        assert_relative_eq!(
            distorted_mean_mtilde(0.5, 0.0, 2.0, 1.0, 4.0, 16.0).unwrap(),
            9.0,
            max_relative = 1e-14
        );
        assert_eq!(distorted_mean_mtilde(0.5, 1.0, 2.0, 1.0, 0.0, 1.0).unwrap(), 0.0);
        // past the conjugate point, positive curvature
        assert_eq!(
            distorted_mean_mtilde(0.5, 4.0, 2.0, PI, 1.0, 1.0).unwrap(),
            f64::INFINITY
        );
        // past the conjugate point, negative curvature with N < 0
        assert_eq!(
            distorted_mean_mtilde(0.5, -4.0, -1.0, 2.0 * PI, 1.0, 1.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn mtilde_zero_dim_branch_is_min_of_scaled() {
        // K = 0: sigma^{(r)} = r, so the branch is min((1-t)/(1-t) a, t/t b) = min(a, b).
        let v = distorted_mean_mtilde(0.3, 0.0, 0.0, 2.0, 5.0, 2.0).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-14);
    }

    proptest::proptest! {
        /// Branch ordering keeps every admissible evaluation NaN-free, and
        /// theta = 0 always collapses sigma to t.
        #[test]
        fn no_nan_on_admissible_domain(
            t in 0.0f64..=1.0,
            k in -50.0f64..50.0,
            raw_n in -20.0f64..20.0,
            theta in 0.0f64..20.0,
            a in 0.0f64..100.0,
            b in 0.0f64..100.0,
        ) {
            let n = if raw_n > 0.0 && raw_n <= 1.0 { raw_n + 1.0 } else { raw_n };
            let nn = if n.is_infinite() { n } else { n - 1.0 };
            for v in [
                sigma(t, k, nn, theta).unwrap(),
                tau(t, k, n, theta).unwrap(),
                distorted_mean_m(t, k, nn, theta, a, b).unwrap(),
                distorted_mean_mtilde(t, k, n, theta, a, b).unwrap(),
                classical_mean(1.0, t, a, b).unwrap(),
            ] {
                proptest::prop_assert!(!v.is_nan());
            }
            proptest::prop_assert_eq!(sigma(t, k, nn, 0.0).unwrap(), t);
        }
    }

    #[test]
    fn classical_mean_branches() {
        assert_relative_eq!(classical_mean(1.0, 0.5, 2.0, 4.0).unwrap(), 3.0);
        assert_relative_eq!(classical_mean(0.0, 0.5, 1.0, 4.0).unwrap(), 2.0);
        assert_relative_eq!(classical_mean(f64::NEG_INFINITY, 0.3, 5.0, 2.0).unwrap(), 2.0);
        assert_relative_eq!(classical_mean(f64::INFINITY, 0.3, 5.0, 2.0).unwrap(), 5.0);
        assert_eq!(classical_mean(2.0, 0.5, 0.0, 3.0).unwrap(), 0.0);
    }
}
