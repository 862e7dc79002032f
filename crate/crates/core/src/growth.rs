//! Closed-form Mittag-Leffler growth x(t) = x0 · E_α(b t^α) for a single
//! factor, and its inversion back to time.

use serde::{Deserialize, Serialize};

use crate::caputo::{TimeGrid, Trajectory};
use crate::error::{domain, Result};
use crate::mittag_leffler::{ml_eval, ml_inverse, FracOrder};

/// t^α with t = 0 mapped to 0.
pub(crate) fn time_power(t: f64, alpha: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        (alpha * t.ln()).exp()
    }
}

/// Dynamics of one production factor: ᶜD^α x = b·x with x(0) = x0.
///
/// `b` carries units of time^{−α} so that b·t^α is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFactor {
    x0: f64,
    b: f64,
    alpha: FracOrder,
}

impl GrowthFactor {
    pub fn new(x0: f64, b: f64, alpha: FracOrder) -> Result<Self> {
        if !(x0 > 0.0) || !x0.is_finite() {
            return domain(format!("initial level x0 must be positive, got {x0}"));
        }
        if !(b > 0.0) || !b.is_finite() {
            return domain(format!("growth rate b must be positive, got {b}"));
        }
        Ok(GrowthFactor { x0, b, alpha })
    }

    /// Convenience constructor taking α as a raw number.
    pub fn from_parts(x0: f64, b: f64, alpha: f64) -> Result<Self> {
        GrowthFactor::new(x0, b, FracOrder::new(alpha)?)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    /// Same dynamics with a different order.
    pub fn with_alpha(&self, alpha: FracOrder) -> Self {
        GrowthFactor { alpha, ..*self }
    }

    /// Time-free "clock" reading b·t^α of a level: E_α^{-1}(x/x0).
    pub(crate) fn clock(&self, x: f64) -> Result<f64> {
        if !(x >= self.x0) {
            return domain(format!("level {x} below initial value {}", self.x0));
        }
        ml_inverse(self.alpha, x / self.x0)
    }
}

/// Serialisable (x0, b, α) triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorParams {
    pub x0: f64,
    pub b: f64,
    pub alpha: f64,
}

impl From<GrowthFactor> for FactorParams {
    fn from(f: GrowthFactor) -> Self {
        FactorParams {
            x0: f.x0,
            b: f.b,
            alpha: f.alpha.value(),
        }
    }
}

impl TryFrom<FactorParams> for GrowthFactor {
    type Error = crate::Error;

    fn try_from(p: FactorParams) -> Result<Self> {
        GrowthFactor::from_parts(p.x0, p.b, p.alpha)
    }
}

/// x0 · E_α(b t^α).
pub fn level_at(factor: &GrowthFactor, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("time must be non-negative, got {t}"));
    }
    if t == 0.0 {
        return Ok(factor.x0);
    }
    let a = factor.alpha.value();
    Ok(factor.x0 * ml_eval(factor.alpha, factor.b * time_power(t, a))?)
}

/// [`level_at`] on every node of `grid`.
pub fn sample_trajectory(factor: &GrowthFactor, grid: &TimeGrid) -> Result<Trajectory> {
    let values = grid
        .points()
        .into_iter()
        .map(|t| level_at(factor, t))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(grid.clone(), values)
}

/// t = [E_α^{-1}(x/x0) / b]^{1/α}, the time at which the factor reaches `x`.
pub fn time_from_level(factor: &GrowthFactor, x: f64) -> Result<f64> {
    let clock = factor.clock(x)?;
    if clock == 0.0 {
        return Ok(0.0);
    }
    Ok((clock / factor.b).powf(1.0 / factor.alpha.value()))
}

/// E_α(b(t+s)^α) − E_α(b t^α)·E_α(b s^α).
///
/// Identically zero for α = 1; for α < 1 the Mittag-Leffler flow has no
/// semigroup law and the defect is nonzero away from t = 0 or s = 0.
pub fn semigroup_defect(alpha: FracOrder, b: f64, t: f64, s: f64) -> Result<f64> {
    if !(t >= 0.0) || !(s >= 0.0) {
        return domain(format!(
            "semigroup times must be non-negative, got t={t}, s={s}"
        ));
    }
    let unit = GrowthFactor::new(1.0, b, alpha)?;
    let joint = level_at(&unit, t + s)?;
    let split = level_at(&unit, t)? * level_at(&unit, s)?;
    Ok(joint - split)
}
