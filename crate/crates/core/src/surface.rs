//! Time-independent invariants linking labor L, capital K and output Y.
//!
//! Every factor trajectory x(t) = x0·E_α(b t^α) can be read backwards as a
//! clock: t = [E_α^{-1}(x/x0)/b]^{1/α}. Equating the three clocks eliminates t
//! and leaves a surface in (L, K, Y) space. Solving for Y through the labor
//! clock, the capital clock, or a θ-weighted blend of both gives the
//! production relations implemented here. With every α = 1 the blend is the
//! Cobb-Douglas function Y = A·L^{θ b3/b1}·K^{(1−θ) b3/b2}.

use crate::caputo::TimeGrid;
use crate::error::{domain, Error, Result};
use crate::growth::{level_at, time_from_level, GrowthFactor};
use crate::mittag_leffler::{ml_eval, FracOrder};

/// Labor, capital and output dynamics plus the blend weight θ ∈ (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomySpec {
    pub labor: GrowthFactor,
    pub capital: GrowthFactor,
    pub output: GrowthFactor,
    theta: f64,
}

impl EconomySpec {
    pub fn new(
        labor: GrowthFactor,
        capital: GrowthFactor,
        output: GrowthFactor,
        theta: f64,
    ) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return domain(format!("theta must lie in (0, 1), got {theta}"));
        }
        Ok(EconomySpec {
            labor,
            capital,
            output,
            theta,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        EconomySpec::new(self.labor, self.capital, self.output, theta)
    }

    /// All three factors moved to the same order α.
    pub fn with_common_alpha(&self, alpha: FracOrder) -> Self {
        EconomySpec {
            labor: self.labor.with_alpha(alpha),
            capital: self.capital.with_alpha(alpha),
            output: self.output.with_alpha(alpha),
            theta: self.theta,
        }
    }
}

/// One (L, K, Y) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub l: f64,
    pub k: f64,
    pub y: f64,
}

/// b_out·[E_{α_in}^{-1}(x/x0)/b_in]^{α_out/α_in}: the output clock implied by
/// an input level. Equals b_out·t^{α_out} when x = x_in(t).
fn output_clock(input: &GrowthFactor, output: &GrowthFactor, x: f64) -> Result<f64> {
    let clock = input.clock(x)?;
    if clock == 0.0 {
        return Ok(0.0);
    }
    let ratio = output.alpha().value() / input.alpha().value();
    Ok(output.b() * (clock / input.b()).powf(ratio))
}

fn output_level(econ: &EconomySpec, clock: f64) -> Result<f64> {
    Ok(econ.output.x0() * ml_eval(econ.output.alpha(), clock)?)
}

fn labor_clock(econ: &EconomySpec, l: f64) -> Result<f64> {
    output_clock(&econ.labor, &econ.output, l).map_err(|e| relabel(e, "labor", l, econ.labor.x0()))
}

fn capital_clock(econ: &EconomySpec, k: f64) -> Result<f64> {
    output_clock(&econ.capital, &econ.output, k)
        .map_err(|e| relabel(e, "capital", k, econ.capital.x0()))
}

fn relabel(e: Error, name: &str, x: f64, x0: f64) -> Error {
    match e {
        Error::Domain(_) if !(x >= x0) => {
            Error::Domain(format!("{name} level {x} below initial value {x0}"))
        }
        other => other,
    }
}

/// Output as a function of labor alone: Y0·E_{α3}{b3 [E_{α1}^{-1}(L/L0)/b1]^{α3/α1}}.
pub fn y_from_labor(econ: &EconomySpec, l: f64) -> Result<f64> {
    output_level(econ, labor_clock(econ, l)?)
}

/// Output as a function of capital alone.
pub fn y_from_capital(econ: &EconomySpec, k: f64) -> Result<f64> {
    output_level(econ, capital_clock(econ, k)?)
}

/// Generalised production function: the output Mittag-Leffler function
/// applied to θ·(labor clock) + (1−θ)·(capital clock).
///
/// Defined for any L ≥ L0, K ≥ K0; on a trajectory both clocks coincide and
/// the result is Y(t) for every θ.
pub fn y_composite(econ: &EconomySpec, l: f64, k: f64) -> Result<f64> {
    let theta = econ.theta();
    let blended = theta * labor_clock(econ, l)? + (1.0 - theta) * capital_clock(econ, k)?;
    output_level(econ, blended)
}

/// Differences (labor − capital, labor − output) between the times recovered
/// from L(t), K(t) and Y(t). Both vanish on the invariant surface.
pub fn invariant_residuals(econ: &EconomySpec, t: f64) -> Result<(f64, f64)> {
    let tl = time_from_level(&econ.labor, level_at(&econ.labor, t)?)?;
    let tk = time_from_level(&econ.capital, level_at(&econ.capital, t)?)?;
    let ty = time_from_level(&econ.output, level_at(&econ.output, t)?)?;
    Ok((tl - tk, tl - ty))
}

/// A·L^{βL}·K^{βK}.
pub fn classical_cd(a: f64, beta_l: f64, beta_k: f64, l: f64, k: f64) -> Result<f64> {
    if !(a > 0.0 && l > 0.0 && k > 0.0) {
        return domain(format!(
            "Cobb-Douglas needs positive A, L, K; got A={a}, L={l}, K={k}"
        ));
    }
    Ok(a * l.powf(beta_l) * k.powf(beta_k))
}

/// Scale and exponents of the Cobb-Douglas function reached as every α → 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalParams {
    pub a: f64,
    pub beta_l: f64,
    pub beta_k: f64,
}

impl ClassicalParams {
    pub fn eval(&self, l: f64, k: f64) -> Result<f64> {
        classical_cd(self.a, self.beta_l, self.beta_k, l, k)
    }
}

pub fn classical_limit_params(econ: &EconomySpec) -> ClassicalParams {
    let theta = econ.theta();
    let b3 = econ.output.b();
    let beta_l = theta * b3 / econ.labor.b();
    let beta_k = (1.0 - theta) * b3 / econ.capital.b();
    let a = econ.output.x0() / (econ.labor.x0().powf(beta_l) * econ.capital.x0().powf(beta_k));
    ClassicalParams { a, beta_l, beta_k }
}

/// The constant-returns weight θ* and whether it is a usable blend weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrsTheta {
    pub theta: f64,
    /// False when θ* falls outside the open interval (0, 1).
    pub in_open_interval: bool,
}

/// θ* = b1(b2 − b3) / (b3(b2 − b1)), the weight for which the classical-limit
/// exponents sum to one.
pub fn crs_theta(b1: f64, b2: f64, b3: f64) -> Result<CrsTheta> {
    for (name, b) in [("b1", b1), ("b2", b2), ("b3", b3)] {
        if !(b > 0.0) || !b.is_finite() {
            return domain(format!("{name} must be positive, got {b}"));
        }
    }
    if b1 == b2 {
        return Err(Error::DegenerateRates(format!(
            "b1 = b2 = {b1}: the constant-returns weight is undefined"
        )));
    }
    let theta = b1 * (b2 - b3) / (b3 * (b2 - b1));
    Ok(CrsTheta {
        theta,
        in_open_interval: theta > 0.0 && theta < 1.0,
    })
}

/// Largest ε accepted by [`limit_convergence_probe`].
pub const MAX_PROBE_EPS: f64 = 0.5;

/// Relative gap between the composite function with every α = 1 − ε and
/// the classical Cobb-Douglas limit, one entry per ε.
pub fn limit_convergence_probe(
    econ_base: &EconomySpec,
    l: f64,
    k: f64,
    eps_list: &[f64],
) -> Result<Vec<f64>> {
    if eps_list.is_empty() {
        return domain("epsilon list is empty");
    }
    for &eps in eps_list {
        if !(0.0..MAX_PROBE_EPS).contains(&eps) {
            return domain(format!(
                "epsilon must lie in [0, {MAX_PROBE_EPS}), got {eps}"
            ));
        }
    }
    if let Some(w) = eps_list.windows(2).find(|w| w[1] >= w[0]) {
        return domain(format!(
            "epsilon list must be strictly decreasing ({} then {})",
            w[0], w[1]
        ));
    }
    let classical = classical_limit_params(econ_base).eval(l, k)?;
    eps_list
        .iter()
        .map(|&eps| {
            let econ = econ_base.with_common_alpha(FracOrder::new(1.0 - eps)?);
            let y = y_composite(&econ, l, k)?;
            Ok(((y - classical) / classical).abs())
        })
        .collect()
}

/// (L(t), K(t), Y(t)) on every grid node.
pub fn surface_sample(econ: &EconomySpec, grid: &TimeGrid) -> Result<Vec<SurfacePoint>> {
    grid.points()
        .into_iter()
        .map(|t| {
            Ok(SurfacePoint {
                l: level_at(&econ.labor, t)?,
                k: level_at(&econ.capital, t)?,
                y: level_at(&econ.output, t)?,
            })
        })
        .collect()
}

/// |y_composite(L, K) − Y| / Y for a sampled point.
pub fn surface_residual(econ: &EconomySpec, p: &SurfacePoint) -> Result<f64> {
    Ok(((y_composite(econ, p.l, p.k)? - p.y) / p.y).abs())
}
