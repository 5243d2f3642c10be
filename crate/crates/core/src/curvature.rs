//! The curvature-dimension pair (K, N) and the derived quantities
//! `delta = K/(N-1)` and `l_delta = pi/sqrt(delta)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A curvature lower bound `K` together with an effective dimension `N`.
///
/// `N` is an extended real: any finite value outside `(0, 1]`, or
/// `f64::INFINITY`. The admissible range is `(-inf, 0] ∪ (1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureDimension {
    k: f64,
    n: f64,
}

impl CurvatureDimension {
    pub fn new(k: f64, n: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain(format!("K must be finite, got {k}")));
        }
        if n.is_nan() || n == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("N must be a real number or +inf, got {n}")));
        }
        if n.is_finite() && n > 0.0 && n <= 1.0 {
            return Err(Error::Domain(format!(
                "N = {n} lies in (0, 1]; admissible dimensions are (-inf, 0] or (1, inf]"
            )));
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Effective dimension; `f64::INFINITY` encodes N = inf.
    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn n_is_infinite(&self) -> bool {
        self.n.is_infinite()
    }

    /// `delta = K/(N-1)` for finite N (N != 1 by construction), 0 for N = inf.
    pub fn delta(&self) -> f64 {
        if self.n.is_infinite() {
            0.0
        } else {
            self.k / (self.n - 1.0)
        }
    }

    /// `l_delta = pi/sqrt(delta)` when `delta > 0`, `+inf` otherwise.
    pub fn l_delta(&self) -> f64 {
        let delta = self.delta();
        if delta > 0.0 {
            std::f64::consts::PI / delta.sqrt()
        } else {
            f64::INFINITY
        }
    }
}

/// `l_delta` as a function of raw (K, N); same conventions as
/// [`CurvatureDimension::l_delta`] with `delta = 0` at `N = 1`.
pub fn l_delta(k: f64, n: f64) -> f64 {
    let delta = if n.is_infinite() || n == 1.0 { 0.0 } else { k / (n - 1.0) };
    if delta > 0.0 {
        std::f64::consts::PI / delta.sqrt()
    } else {
        f64::INFINITY
    }
}
