//! Numerical Caputo machinery, kept independent of the Mittag-Leffler code
//! so it can serve as a cross-check of the closed-form trajectories.
//!
//! * [`caputo_l1`]: L1 discretisation of the Caputo derivative of order
//!   0 < α ≤ 1 on a uniform grid.
//! * [`solve_fode_abm`]: fractional Adams–Bashforth–Moulton predictor-corrector
//!   for ᶜD^α x = b·x, x(0) = x0.

use crate::error::{domain, Error, Result};
use crate::gamma::gamma;
use crate::growth::time_power;
use crate::mittag_leffler::{ml_eval, FracOrder};

/// Discretisation of a time interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    kind: GridKind,
}

#[derive(Debug, Clone, PartialEq)]
enum GridKind {
    Uniform { t0: f64, t_end: f64, n_steps: usize },
    Explicit(Vec<f64>),
}

impl TimeGrid {
    /// `n_steps` equal intervals covering `[t0, t_end]`.
    pub fn uniform(t0: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !t0.is_finite() || !t_end.is_finite() {
            return domain(format!("grid bounds must be finite, got [{t0}, {t_end}]"));
        }
        if t_end <= t0 {
            return domain(format!("grid needs t_end > t0, got [{t0}, {t_end}]"));
        }
        if n_steps == 0 {
            return domain("grid needs at least one step");
        }
        Ok(TimeGrid {
            kind: GridKind::Uniform { t0, t_end, n_steps },
        })
    }

    /// Arbitrary strictly increasing sample times (at least two).
    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return domain(format!(
                "grid needs at least 2 points, got {}",
                points.len()
            ));
        }
        if let Some(bad) = points.iter().find(|t| !t.is_finite()) {
            return domain(format!("grid point {bad} is not finite"));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return domain(format!(
                "grid points must be strictly increasing ({} then {})",
                w[0], w[1]
            ));
        }
        Ok(TimeGrid {
            kind: GridKind::Explicit(points),
        })
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, GridKind::Uniform { .. })
    }

    /// Number of intervals.
    pub fn n_steps(&self) -> usize {
        match &self.kind {
            GridKind::Uniform { n_steps, .. } => *n_steps,
            GridKind::Explicit(p) => p.len() - 1,
        }
    }

    pub fn len(&self) -> usize {
        self.n_steps() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t0(&self) -> f64 {
        match &self.kind {
            GridKind::Uniform { t0, .. } => *t0,
            GridKind::Explicit(p) => p[0],
        }
    }

    pub fn t_end(&self) -> f64 {
        match &self.kind {
            GridKind::Uniform { t_end, .. } => *t_end,
            GridKind::Explicit(p) => p[p.len() - 1],
        }
    }

    /// Spacing of a uniform grid.
    pub fn step(&self) -> Option<f64> {
        match &self.kind {
            GridKind::Uniform { t0, t_end, n_steps } => Some((t_end - t0) / *n_steps as f64),
            GridKind::Explicit(_) => None,
        }
    }

    pub fn point(&self, j: usize) -> f64 {
        match &self.kind {
            GridKind::Uniform { t0, t_end, n_steps } => {
                if j == *n_steps {
                    *t_end
                } else {
                    t0 + (t_end - t0) * (j as f64 / *n_steps as f64)
                }
            }
            GridKind::Explicit(p) => p[j],
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.point(j)).collect()
    }

    /// Same interval with half the spacing.
    pub fn refined(&self) -> Result<Self> {
        match &self.kind {
            GridKind::Uniform { t0, t_end, n_steps } => TimeGrid::uniform(*t0, *t_end, 2 * n_steps),
            GridKind::Explicit(_) => {
                Err(Error::Unsupported("refinement of an explicit grid".into()))
            }
        }
    }
}

/// Sampled levels of one quantity on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!(
                "trajectory has {} values for {} grid points",
                values.len(),
                grid.len()
            ));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return domain(format!("trajectory value at index {j} is not finite"));
        }
        Ok(Trajectory { grid, values })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Positive everywhere and never decreasing.
    pub fn is_growth_shaped(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0) && self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

fn uniform_step(grid: &TimeGrid) -> Result<f64> {
    grid.step()
        .ok_or_else(|| Error::Unsupported("Caputo schemes need a uniform grid".into()))
}

/// L1 weights (k+1)^{1−α} − k^{1−α} for k < n, taking 0^{1−α} = 0 also at α = 1.
fn l1_weights(n: usize, alpha: f64) -> Vec<f64> {
    let p = 1.0 - alpha;
    let mut prev = 0.0;
    (0..n)
        .map(|k| {
            let next = ((k + 1) as f64).powf(p);
            let w = next - prev;
            prev = next;
            w
        })
        .collect()
}

fn l1_sum(f: &[f64], weights: &[f64], index: usize) -> f64 {
    (0..index)
        .map(|j| weights[index - j - 1] * (f[j + 1] - f[j]))
        .sum()
}

/// L1 approximation of (ᶜD^α f)(t_index) from the grid start.
///
/// Σ_{j<index} w_{index−j−1} (f_{j+1} − f_j) · h^{−α} / Γ(2 − α), exact for
/// piecewise-linear f. At α = 1 it reduces to the backward difference.
pub fn caputo_l1(traj: &Trajectory, alpha: FracOrder, index: usize) -> Result<f64> {
    let h = uniform_step(traj.grid())?;
    let n = traj.grid().n_steps();
    if index == 0 || index > n {
        return domain(format!("L1 index must lie in 1..={n}, got {index}"));
    }
    let a = alpha.value();
    let weights = l1_weights(index, a);
    Ok(l1_sum(traj.values(), &weights, index) * h.powf(-a) / gamma(2.0 - a))
}

fn check_growth_rate(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        domain(format!("growth rate b must be positive, got {b}"))
    }
}

/// Fractional Adams–Bashforth–Moulton solution of ᶜD^α x = b·x, x(t0) = x0.
///
/// Predictor: fractional rectangle rule. Corrector: fractional trapezoid rule
/// (one correction per step). Cost is O(N²) in the number of steps.
pub fn solve_fode_abm(b: f64, alpha: FracOrder, x0: f64, grid: &TimeGrid) -> Result<Trajectory> {
    check_growth_rate(b)?;
    if !(x0 > 0.0) || !x0.is_finite() {
        return domain(format!("initial level x0 must be positive, got {x0}"));
    }
    let h = uniform_step(grid)?;
    let n = grid.n_steps();
    let a = alpha.value();

    // power tables indexed by k = 0..=n+1
    let pow_a: Vec<f64> = (0..=n + 1).map(|k| (k as f64).powf(a)).collect();
    let pow_a1: Vec<f64> = (0..=n + 1).map(|k| (k as f64).powf(a + 1.0)).collect();
    let rect: Vec<f64> = (0..=n).map(|m| pow_a[m + 1] - pow_a[m]).collect();
    let trap: Vec<f64> = (0..n)
        .map(|m| pow_a1[m + 2] + pow_a1[m] - 2.0 * pow_a1[m + 1])
        .collect();

    let ha = h.powf(a);
    let pred_scale = ha / gamma(a + 1.0);
    let corr_scale = ha / gamma(a + 2.0);

    let mut x = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    x.push(x0);
    rhs.push(b * x0);
    for step in 0..n {
        let nf = step as f64;
        let predictor: f64 = (0..=step).map(|j| rect[step - j] * rhs[j]).sum();
        let x_pred = x0 + pred_scale * predictor;

        let first = pow_a1[step] - (nf - a) * pow_a[step + 1];
        let history: f64 = (1..=step).map(|j| trap[step - j] * rhs[j]).sum();
        let next = x0 + corr_scale * (b * x_pred + first * rhs[0] + history);
        x.push(next);
        rhs.push(b * next);
    }
    Trajectory::new(grid.clone(), x)
}

/// Max relative deviation of the ABM solution from x0·E_α(b t^α) over the grid.
pub fn abm_max_rel_error(b: f64, alpha: FracOrder, x0: f64, grid: &TimeGrid) -> Result<f64> {
    let sol = solve_fode_abm(b, alpha, x0, grid)?;
    let t0 = grid.t0();
    let mut worst = 0.0f64;
    for (j, &v) in sol.values().iter().enumerate() {
        let t = grid.point(j) - t0;
        let exact = x0 * ml_eval(alpha, b * time_power(t, alpha.value()))?;
        worst = worst.max(((v - exact) / exact).abs());
    }
    Ok(worst)
}

/// Fraction of the grid interval skipped at the start when measuring the
/// eigen-defect; the L1 scheme resolves the kernel singularity at t0 slowly.
pub const EIGEN_WINDOW_START: f64 = 0.1;

/// Checks that x(t) = E_α(b t^α) satisfies ᶜD^α x = b·x by applying the L1
/// scheme to the sampled closed form. Returns the max relative defect over
/// nodes with t ≥ 0.1·t_end.
pub fn verify_eigenproperty(b: f64, alpha: FracOrder, grid: &TimeGrid) -> Result<f64> {
    check_growth_rate(b)?;
    let h = uniform_step(grid)?;
    let a = alpha.value();
    let t0 = grid.t0();
    let values = grid
        .points()
        .iter()
        .map(|&t| ml_eval(alpha, b * time_power(t - t0, a)))
        .collect::<Result<Vec<_>>>()?;
    let traj = Trajectory::new(grid.clone(), values)?;
    let cutoff = t0 + EIGEN_WINDOW_START * (grid.t_end() - t0);
    let n = grid.n_steps();
    let weights = l1_weights(n, a);
    let scale = h.powf(-a) / gamma(2.0 - a);
    let mut worst = 0.0f64;
    for idx in 1..=n {
        if grid.point(idx) < cutoff {
            continue;
        }
        let d = l1_sum(traj.values(), &weights, idx) * scale;
        let target = b * traj.values()[idx];
        worst = worst.max(((d - target) / target).abs());
    }
    Ok(worst)
}
