//! Least-squares estimation of (α, b) for a single factor.
//!
//! The initial level x0 is pinned to the first observation. The objective is
//! the sum of squared relative residuals
//!
//! sse(α, b) = Σ_j [(x0·E_α(b t_j^α) − v_j) / v_j]²
//!
//! minimised over a box: first a coarse grid scan, then Nelder–Mead from the
//! best node. Search runs in scaled coordinates on [0, 1]², linear in α and
//! logarithmic in b. Everything is deterministic.

use crate::caputo::Trajectory;
use crate::error::{domain, Result};
use crate::growth::{level_at, GrowthFactor};
use crate::mittag_leffler::FracOrder;
use crate::surface::{crs_theta, EconomySpec};

/// Nodes per axis in the coarse scan.
pub const GRID_NODES: usize = 25;
/// Simplex diameter (scaled coordinates) below which a fit counts as converged.
pub const SIMPLEX_TOL: f64 = 1e-6;
const MAX_EVALS: usize = 4000;
const MAX_RESTARTS: usize = 4;
const MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub factor: GrowthFactor,
    /// Sum of squared relative residuals at the estimate.
    pub sse: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Closed search interval for one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Self {
        Bounds { lo, hi }
    }
}

impl From<(f64, f64)> for Bounds {
    fn from((lo, hi): (f64, f64)) -> Self {
        Bounds { lo, hi }
    }
}

/// Maps [0, 1]² onto the (α, b) box.
#[derive(Debug, Clone, Copy)]
struct Box2 {
    alpha: Bounds,
    ln_b: Bounds,
}

impl Box2 {
    fn new(alpha: Bounds, b: Bounds) -> Result<Self> {
        if !(alpha.lo > 0.0 && alpha.hi <= 1.0 && alpha.lo <= alpha.hi) {
            return domain(format!(
                "alpha bounds must satisfy 0 < lo <= hi <= 1, got ({}, {})",
                alpha.lo, alpha.hi
            ));
        }
        if !(b.lo > 0.0 && b.lo <= b.hi && b.hi.is_finite()) {
            return domain(format!(
                "b bounds must satisfy 0 < lo <= hi < inf, got ({}, {})",
                b.lo, b.hi
            ));
        }
        Ok(Box2 {
            alpha,
            ln_b: Bounds::new(b.lo.ln(), b.hi.ln()),
        })
    }

    fn params(&self, p: [f64; 2]) -> (f64, f64) {
        let u = p[0].clamp(0.0, 1.0);
        let v = p[1].clamp(0.0, 1.0);
        let alpha = (self.alpha.lo + u * (self.alpha.hi - self.alpha.lo)).min(self.alpha.hi);
        let b = (self.ln_b.lo + v * (self.ln_b.hi - self.ln_b.lo)).exp();
        (alpha, b)
    }
}

struct Objective<'a> {
    times: Vec<f64>,
    values: &'a [f64],
    x0: f64,
    evals: usize,
}

impl Objective<'_> {
    fn sse(&mut self, alpha: f64, b: f64) -> f64 {
        self.evals += 1;
        let factor = match GrowthFactor::from_parts(self.x0, b, alpha) {
            Ok(f) => f,
            Err(_) => return f64::INFINITY,
        };
        let mut total = 0.0;
        for (&t, &v) in self.times.iter().zip(self.values) {
            match level_at(&factor, t) {
                Ok(model) => {
                    let r = (model - v) / v;
                    total += r * r;
                }
                Err(_) => return f64::INFINITY,
            }
        }
        total
    }
}

type Vertex = ([f64; 2], f64);

fn diameter(simplex: &[Vertex; 3]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            let dx = simplex[i].0[0] - simplex[j].0[0];
            let dy = simplex[i].0[1] - simplex[j].0[1];
            d = d.max((dx * dx + dy * dy).sqrt());
        }
    }
    d
}

fn project(p: [f64; 2]) -> [f64; 2] {
    [p[0].clamp(0.0, 1.0), p[1].clamp(0.0, 1.0)]
}

/// Nelder–Mead on the unit square with projection onto the box.
/// Returns the best vertex and whether the simplex collapsed below tolerance.
fn nelder_mead(
    start: [f64; 2],
    step: f64,
    eval: &mut dyn FnMut([f64; 2]) -> f64,
    budget: &mut usize,
) -> (Vertex, bool) {
    let mut spend = |p: [f64; 2], budget: &mut usize| -> Vertex {
        *budget = budget.saturating_sub(1);
        let p = project(p);
        (p, eval(p))
    };
    // initial edges point into the box
    let dir = |x: f64| if x + step <= 1.0 { step } else { -step };
    let mut s: [Vertex; 3] = [
        spend(start, budget),
        spend([start[0] + dir(start[0]), start[1]], budget),
        spend([start[0], start[1] + dir(start[1])], budget),
    ];
    loop {
        s.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&s) < SIMPLEX_TOL {
            return (s[0], true);
        }
        if *budget == 0 {
            return (s[0], false);
        }
        let centroid = [(s[0].0[0] + s[1].0[0]) / 2.0, (s[0].0[1] + s[1].0[1]) / 2.0];
        let along = |c: f64| -> [f64; 2] {
            [
                centroid[0] + c * (s[2].0[0] - centroid[0]),
                centroid[1] + c * (s[2].0[1] - centroid[1]),
            ]
        };
        let reflected = spend(along(-1.0), budget);
        if reflected.1 < s[0].1 {
            let expanded = spend(along(-2.0), budget);
            s[2] = if expanded.1 < reflected.1 {
                expanded
            } else {
                reflected
            };
            continue;
        }
        if reflected.1 < s[1].1 {
            s[2] = reflected;
            continue;
        }
        let contracted = if reflected.1 < s[2].1 {
            spend(along(-0.5), budget)
        } else {
            spend(along(0.5), budget)
        };
        if contracted.1 < s[2].1.min(reflected.1) {
            s[2] = contracted;
            continue;
        }
        // shrink toward the best vertex
        let best = s[0].0;
        for v in s.iter_mut().skip(1) {
            let p = [(best[0] + v.0[0]) / 2.0, (best[1] + v.0[1]) / 2.0];
            *v = spend(p, budget);
        }
    }
}

fn validate_series(series: &Trajectory) -> Result<()> {
    let n = series.values().len();
    if n < MIN_POINTS {
        return domain(format!("need at least {MIN_POINTS} observations, got {n}"));
    }
    if let Some(j) = series.values().iter().position(|&v| !(v > 0.0)) {
        return domain(format!(
            "observation {j} is not positive ({})",
            series.values()[j]
        ));
    }
    if series.grid().t0() != 0.0 {
        return domain(format!(
            "series must start at t = 0, got {}",
            series.grid().t0()
        ));
    }
    Ok(())
}

/// Fits (α, b) of a single factor to `series`, with x0 = first observation.
pub fn fit_factor(
    series: &Trajectory,
    alpha_bounds: impl Into<Bounds>,
    b_bounds: impl Into<Bounds>,
) -> Result<FitResult> {
    validate_series(series)?;
    let bx = Box2::new(alpha_bounds.into(), b_bounds.into())?;
    let mut obj = Objective {
        times: series.times(),
        values: series.values(),
        x0: series.values()[0],
        evals: 0,
    };

    let cell = 1.0 / (GRID_NODES - 1) as f64;
    let mut best: Vertex = ([0.0, 0.0], f64::INFINITY);
    for i in 0..GRID_NODES {
        for j in 0..GRID_NODES {
            let p = [i as f64 * cell, j as f64 * cell];
            let (a, b) = bx.params(p);
            let f = obj.sse(a, b);
            if f < best.1 {
                best = (p, f);
            }
        }
    }

    let mut budget = MAX_EVALS;
    let mut converged = false;
    let mut step = cell;
    for _ in 0..MAX_RESTARTS {
        let mut eval = |p: [f64; 2]| {
            let (a, b) = bx.params(p);
            obj.sse(a, b)
        };
        let (candidate, done) = nelder_mead(best.0, step, &mut eval, &mut budget);
        let improved = candidate.1 < best.1;
        if candidate.1 <= best.1 {
            best = candidate;
        }
        converged = done;
        // restart from the optimum until a restart no longer helps
        if !done || !improved {
            break;
        }
        step = (step * 0.1).max(10.0 * SIMPLEX_TOL);
    }

    let (alpha, b) = bx.params(best.0);
    Ok(FitResult {
        factor: GrowthFactor::new(obj.x0, b, FracOrder::new(alpha)?)?,
        sse: best.1,
        n_evals: obj.evals,
        converged,
    })
}

/// How θ was chosen for a fitted economy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaChoice {
    /// The constant-returns weight θ*.
    ConstantReturns,
    /// b̂1 = b̂2, θ* undefined; θ = 0.5.
    DegenerateRates,
    /// θ* outside (0, 1); θ = 0.5.
    OutOfRange,
}

pub const FALLBACK_THETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomyFit {
    pub spec: EconomySpec,
    pub labor: FitResult,
    pub capital: FitResult,
    pub output: FitResult,
    pub theta_choice: ThetaChoice,
}

/// Three independent [`fit_factor`] calls; θ from the constant-returns
/// formula when it is defined and lies in (0, 1), else 0.5 with a flag.
pub fn fit_economy(
    labor: &Trajectory,
    capital: &Trajectory,
    output: &Trajectory,
    alpha_bounds: impl Into<Bounds>,
    b_bounds: impl Into<Bounds>,
) -> Result<EconomyFit> {
    let (ab, bb) = (alpha_bounds.into(), b_bounds.into());
    let labor = fit_factor(labor, ab, bb)?;
    let capital = fit_factor(capital, ab, bb)?;
    let output = fit_factor(output, ab, bb)?;
    let (theta, theta_choice) =
        match crs_theta(labor.factor.b(), capital.factor.b(), output.factor.b()) {
            Ok(c) if c.in_open_interval => (c.theta, ThetaChoice::ConstantReturns),
            Ok(_) => (FALLBACK_THETA, ThetaChoice::OutOfRange),
            Err(crate::Error::DegenerateRates(_)) => (FALLBACK_THETA, ThetaChoice::DegenerateRates),
            Err(e) => return Err(e),
        };
    Ok(EconomyFit {
        spec: EconomySpec::new(labor.factor, capital.factor, output.factor, theta)?,
        labor,
        capital,
        output,
        theta_choice,
    })
}
