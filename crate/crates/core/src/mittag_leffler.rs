//! Mittag-Leffler functions on the real line.
//!
//! E_{α,β}(x) = Σ_{k≥0} x^k / Γ(αk + β), with E_α = E_{α,1}.
//!
//! For 0 ≤ x with x^{1/α} below [`ASYMPTOTIC_EXPONENT`] the series is summed
//! directly (terms are positive, so there is no cancellation). Above it the
//! exponential asymptote
//!
//! E_{α,β}(x) ≈ x^{(1−β)/α} exp(x^{1/α}) / α − Σ_{k≥1} x^{−k} / Γ(β − αk)
//!
//! is used; by then the algebraic tail is below 1e-17 of the value. The
//! pair (α, β) = (1, 1) is evaluated as `exp` directly.

use crate::error::{domain, Error, Result};
use crate::gamma::{ln_gamma, recip_gamma};

/// x^{1/α} at which evaluation switches from the series to the asymptote.
pub const ASYMPTOTIC_EXPONENT: f64 = 40.0;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 500;
const SERIES_RTOL: f64 = 1e-16;
const MAX_CORRECTION_TERMS: usize = 30;
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// A fractional order in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub const ONE: FracOrder = FracOrder(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(FracOrder(value))
        } else {
            domain(format!("fractional order must lie in (0, 1], got {value}"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        FracOrder::new(value)
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Series,
    Asymptotic,
    ExactExp,
}

/// Value of an evaluation together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLEvalReport {
    pub value: f64,
    pub terms_used: usize,
    pub branch: Branch,
    pub est_abs_error: f64,
}

/// value = mantissa · exp(log_scale), kept apart so huge values can be
/// handled in log space without overflowing.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    log_scale: f64,
    terms: usize,
    branch: Branch,
    rel_err: f64,
}

impl Scaled {
    fn ln(&self) -> f64 {
        self.mantissa.ln() + self.log_scale
    }

    fn to_report(self, alpha: f64, beta: f64, x: f64) -> Result<MLEvalReport> {
        let value = if self.log_scale == 0.0 {
            self.mantissa
        } else if self.mantissa > 0.0 && self.ln() > LN_F64_MAX {
            f64::INFINITY
        } else {
            self.mantissa * self.log_scale.exp()
        };
        if !value.is_finite() {
            return Err(Error::Overflow(format!(
                "E_{{{alpha},{beta}}}({x}) exceeds the f64 range (ln value ≈ {:.6e})",
                self.ln()
            )));
        }
        Ok(MLEvalReport {
            value,
            terms_used: self.terms,
            branch: self.branch,
            est_abs_error: value.abs() * self.rel_err,
        })
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Direct summation. `None` when the term cap is reached first.
fn series(alpha: f64, beta: f64, x: f64) -> Option<Scaled> {
    if x == 0.0 {
        return Some(Scaled {
            mantissa: recip_gamma(beta),
            log_scale: 0.0,
            terms: 1,
            branch: Branch::Series,
            rel_err: f64::EPSILON,
        });
    }
    let ln_abs_x = x.abs().ln();
    let negative = x < 0.0;
    let mut acc = CompensatedSum::default();
    let mut prev_abs = f64::INFINITY;
    let mut max_abs = 0.0f64;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let magnitude = (kf * ln_abs_x - ln_gamma(alpha * kf + beta)).exp();
        let term = if negative && k % 2 == 1 {
            -magnitude
        } else {
            magnitude
        };
        acc.add(term);
        max_abs = max_abs.max(magnitude);
        let sum = acc.value();
        if k > 0 && magnitude <= SERIES_RTOL * sum.abs() && magnitude <= prev_abs {
            // each term carries a few ulps from exp/ln_gamma; for
            // alternating sums the largest term sets the error scale
            let scale = if negative { max_abs / sum.abs() } else { 1.0 };
            let per_term = (kf * ln_abs_x.abs() + 1.0) * f64::EPSILON;
            return Some(Scaled {
                mantissa: sum,
                log_scale: 0.0,
                terms: k + 1,
                branch: Branch::Series,
                rel_err: scale * per_term + magnitude / sum.abs(),
            });
        }
        prev_abs = magnitude;
    }
    None
}

/// Exponential asymptote for x > 0.
fn asymptotic(alpha: f64, beta: f64, x: f64) -> Scaled {
    let ln_x = x.ln();
    let big = (ln_x / alpha).exp();
    let lead = ((1.0 - beta) / alpha * ln_x).exp() / alpha;

    let mut correction = 0.0;
    let mut last_nonzero = f64::INFINITY;
    let mut omitted = 0.0;
    let mut terms = 1;
    for k in 1..=MAX_CORRECTION_TERMS {
        let kf = k as f64;
        let t = (-kf * ln_x).exp() * recip_gamma(beta - alpha * kf);
        if t == 0.0 {
            continue;
        }
        if t.abs() > last_nonzero {
            // divergent part of the asymptotic series
            omitted = t.abs();
            break;
        }
        correction += t;
        last_nonzero = t.abs();
        terms += 1;
    }
    let damp = (-big).exp();
    let mantissa = lead - correction * damp;
    Scaled {
        mantissa,
        log_scale: big,
        terms,
        branch: Branch::Asymptotic,
        rel_err: (big + 8.0) * f64::EPSILON + omitted * damp / lead.abs(),
    }
}

fn exact_exp(x: f64) -> Scaled {
    Scaled {
        mantissa: 1.0,
        log_scale: x,
        terms: 1,
        branch: Branch::ExactExp,
        rel_err: f64::EPSILON,
    }
}

fn evaluate(alpha: f64, beta: f64, x: f64) -> Result<Scaled> {
    if !x.is_finite() {
        return domain(format!("Mittag-Leffler argument must be finite, got {x}"));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    if alpha == 1.0 && beta == 1.0 {
        return Ok(exact_exp(x));
    }
    if x > 0.0 && (x.ln() / alpha) >= ASYMPTOTIC_EXPONENT.ln() {
        return Ok(asymptotic(alpha, beta, x));
    }
    match series(alpha, beta, x) {
        Some(s) => Ok(s),
        None if x > 0.0 => Ok(asymptotic(alpha, beta, x)),
        None => Err(Error::NoConvergence(format!(
            "series for E_{{{alpha},{beta}}}({x}) did not settle within {MAX_SERIES_TERMS} terms"
        ))),
    }
}

/// ln E_{α,β}(x) for x ≥ 0, finite even where the value itself overflows.
pub(crate) fn ml_ln(alpha: FracOrder, beta: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return domain(format!("log-domain evaluation needs x >= 0, got {x}"));
    }
    let s = evaluate(alpha.value(), beta, x)?;
    if s.branch == Branch::ExactExp {
        return Ok(x);
    }
    Ok(s.ln())
}

/// E_α(x) with diagnostics.
pub fn ml_eval_report(alpha: FracOrder, x: f64) -> Result<MLEvalReport> {
    evaluate(alpha.value(), 1.0, x)?.to_report(alpha.value(), 1.0, x)
}

/// One-parameter Mittag-Leffler function E_α(x).
///
/// Relative accuracy is about 1e-13 for x ≥ 0. Negative arguments are
/// summed by the series alone and lose accuracy to cancellation as |x| grows.
pub fn ml_eval(alpha: FracOrder, x: f64) -> Result<f64> {
    ml_eval_report(alpha, x).map(|r| r.value)
}

/// Two-parameter Mittag-Leffler function E_{α,β}(x), β > 0.
pub fn ml_eval2(alpha: FracOrder, beta: f64, x: f64) -> Result<f64> {
    evaluate(alpha.value(), beta, x)?
        .to_report(alpha.value(), beta, x)
        .map(|r| r.value)
}

/// d/dx E_α(x) = E_{α,α}(x) / α.
pub fn ml_derivative(alpha: FracOrder, x: f64) -> Result<f64> {
    Ok(ml_eval2(alpha, alpha.value(), x)? / alpha.value())
}

const INVERSE_MAX_ITER: usize = 200;

/// Inverse of E_α on its growth branch: the unique x ≥ 0 with E_α(x) = y.
///
/// Works on g(x) = ln E_α(x) − ln y so that brackets reaching into the
/// overflow range stay finite. Newton steps use
/// g'(x) = E_{α,α}(x) / (α E_α(x)); any step leaving the current bracket is
/// replaced by bisection.
pub fn ml_inverse(alpha: FracOrder, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return domain(format!(
            "inverse Mittag-Leffler needs a finite level, got {y}"
        ));
    }
    if y < 1.0 {
        return domain(format!(
            "{y} is below growth branch (E_α(x) >= 1 for x >= 0)"
        ));
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    if alpha.is_one() {
        return Ok(y.ln());
    }
    let a = alpha.value();
    let ln_y = y.ln();
    let g = |x: f64| -> Result<f64> { Ok(ml_ln(alpha, 1.0, x)? - ln_y) };

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while g(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence(format!(
                "could not bracket E_α^-1({y})"
            )));
        }
    }

    // leading-order guess from E_α(x) ≈ exp(x^{1/α}) / α, else bracket midpoint
    let guess = (a * y).ln().max(0.0).powf(a);
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };

    for _ in 0..INVERSE_MAX_ITER {
        let gx = g(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = (ml_ln(alpha, a, x)? - ml_ln(alpha, 1.0, x)?).exp() / a;
        let mut next = x - gx / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 1e-15 * x.max(f64::MIN_POSITIVE) || hi - lo <= 1e-15 * hi {
            return Ok(x);
        }
    }
    if hi - lo <= 1e-12 * hi.max(1.0) {
        Ok(x)
    } else {
        Err(Error::NoConvergence(format!(
            "E_α^-1({y}) bracket [{lo}, {hi}] did not close"
        )))
    }
}
