//! Run configuration: every numeric default in one place, overridable from a
//! `key = value` file.

use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Relative tolerance for eigenvalue solves.
    pub solver_tol: f64,
    /// Relative stop for exhaustion/limit sequences.
    pub limit_tol: f64,
    /// Tolerance for the differential CD checker (scaled by dx^2 internally).
    pub checker_tol: f64,
    /// Grid points for sampled densities and estimators.
    pub grid_points: usize,
    /// Points in emitted profile tables.
    pub profile_points: usize,
    /// Random triples for the midpoint CD checker.
    pub midpoint_triples: usize,
    /// Truncation radius for Gaussian-type measures, in units of 1/sqrt(K).
    pub gaussian_truncation_sigmas: f64,
    /// Bobkov-Goetze bracket constant.
    pub bg_bracket: f64,
    /// Seed for randomized checkers.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            solver_tol: 1e-8,
            limit_tol: 1e-5,
            checker_tol: 1e-6,
            grid_points: 20_001,
            profile_points: 1001,
            midpoint_triples: 2000,
            gaussian_truncation_sigmas: 8.0,
            bg_bracket: 16.0,
            seed: 12345,
        }
    }
}

impl RunConfig {
    /// Apply overrides from a `key = value` file (`#` comments allowed).
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{path:?} line {}: expected `key = value`", ln + 1))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |e: &dyn std::fmt::Display| format!("{path:?} line {}: {key}: {e}", ln + 1);
            match key {
                "solver_tol" => self.solver_tol = value.parse().map_err(|e| bad(&e))?,
                "limit_tol" => self.limit_tol = value.parse().map_err(|e| bad(&e))?,
                "checker_tol" => self.checker_tol = value.parse().map_err(|e| bad(&e))?,
                "grid_points" => self.grid_points = value.parse().map_err(|e| bad(&e))?,
                "profile_points" => self.profile_points = value.parse().map_err(|e| bad(&e))?,
                "midpoint_triples" => self.midpoint_triples = value.parse().map_err(|e| bad(&e))?,
                "gaussian_truncation_sigmas" => {
                    self.gaussian_truncation_sigmas = value.parse().map_err(|e| bad(&e))?
                }
                "bg_bracket" => self.bg_bracket = value.parse().map_err(|e| bad(&e))?,
                "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
                other => return Err(format!("{path:?} line {}: unknown key `{other}`", ln + 1)),
            }
        }
        if !(self.solver_tol > 0.0 && self.limit_tol > 0.0 && self.checker_tol > 0.0) {
            return Err("tolerances must be positive".into());
        }
        Ok(())
    }
}
