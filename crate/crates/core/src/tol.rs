use serde::{Deserialize, Serialize};
use std::fmt;

/// Numerical thresholds shared by every check. One instance is captured per
/// run and echoed into reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values at or above `rank * max(1, sigma_max)` count toward rank.
    pub rank: f64,
    /// Residual bar for explicitly given (exact) points.
    pub lagrangian: f64,
    /// Residual bar for optimizer-produced points.
    pub lagrangian_search: f64,
    /// Bracket closure residual, relative to the product of generator norms.
    pub closure: f64,
    /// Skew-hermitian residual per basis matrix.
    pub skew: f64,
    /// Commutator bound for circle-centralizes-group checks.
    pub centralizer: f64,
    /// Level-set membership bar for lifts.
    pub level: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-8,
            lagrangian: 1e-8,
            lagrangian_search: 1e-6,
            closure: 1e-10,
            skew: 1e-12,
            centralizer: 1e-12,
            level: 1e-9,
        }
    }
}

impl Tolerances {
    /// Apply a comma-separated `key=value` override list such as
    /// `rank=1e-9,lagrangian=1e-7`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, String> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("override `{item}` is not key=value"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| format!("override `{item}` has a non-numeric value"))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(format!("override `{item}` must be positive"));
            }
            let slot = match key.trim() {
                "rank" => &mut self.rank,
                "lagrangian" => &mut self.lagrangian,
                "lagrangian_search" => &mut self.lagrangian_search,
                "closure" => &mut self.closure,
                "skew" => &mut self.skew,
                "centralizer" => &mut self.centralizer,
                "level" => &mut self.level,
                other => return Err(format!("unknown tolerance `{other}`")),
            };
            *slot = value;
        }
        Ok(self)
    }
}

impl fmt::Display for Tolerances {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank={:e},lagrangian={:e},lagrangian_search={:e},closure={:e},skew={:e},centralizer={:e},level={:e}",
            self.rank,
            self.lagrangian,
            self.lagrangian_search,
            self.closure,
            self.skew,
            self.centralizer,
            self.level
        )
    }
}
