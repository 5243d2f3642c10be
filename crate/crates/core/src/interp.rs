//! Monotone cubic (Fritsch-Carlson) interpolation.

use crate::error::{Error, Result};

/// Piecewise-cubic Hermite interpolant with Fritsch-Carlson slopes; preserves
/// monotonicity of the data and never rings.
#[derive(Debug, Clone)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Domain("pchip needs >= 2 matching nodes".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("pchip nodes must be strictly increasing".into()));
        }
        let n = xs.len();
        let mut d = vec![0.0; n - 1]; // secants
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // clamp endpoint slopes (Fritsch-Carlson condition)
        for (i, mi) in [(0usize, 0usize), (n - 1, n - 2)] {
            if m[i] * d[mi] <= 0.0 {
                m[i] = 0.0;
            } else if m[i].abs() > 3.0 * d[mi].abs() {
                m[i] = 3.0 * d[mi];
            }
        }
        Ok(Self { xs, ys, slopes: m })
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.xs.len() - 2),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let dh00 = (6.0 * t2 - 6.0 * t) / h;
        let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
        let dh01 = (-6.0 * t2 + 6.0 * t) / h;
        let dh11 = 3.0 * t2 - 2.0 * t;
        dh00 * self.ys[i] + dh10 * self.slopes[i] + dh01 * self.ys[i + 1] + dh11 * self.slopes[i + 1]
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_smooth_values() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let p = Pchip::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_abs_diff_eq!(p.value(*x), *y, epsilon = 1e-14);
        }
        for i in 0..200 {
            let x = 2.0 * (i as f64 + 0.5) / 200.0;
            assert_abs_diff_eq!(p.value(x), x.sin(), epsilon = 1e-3);
            // slope clamping costs O(h) accuracy right at extrema; check the
            // derivative away from the crest only
            if (0.1..1.9).contains(&x) && x.cos().abs() > 0.15 {
                assert_abs_diff_eq!(p.deriv(x), x.cos(), epsilon = 2e-2);
            }
        }
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(raw in proptest::collection::vec(0.01f64..2.0, 4..20)) {
            let mut acc = 0.0;
            let ys: Vec<f64> = raw.iter().map(|d| { acc += d; acc }).collect();
            let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
            let p = Pchip::new(xs, ys).unwrap();
            let mut prev = p.value(0.0);
            for i in 1..=300 {
                let x = (raw.len() - 1) as f64 * i as f64 / 300.0;
                let v = p.value(x);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
