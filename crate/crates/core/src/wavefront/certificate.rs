use serde::{Deserialize, Serialize};

use super::StepProfile;
use crate::error::{Error, Result};

/// Relative gap below which `c̄` counts as touching a sandwich bound rather
/// than crossing it: asymptotic tails of smooth media reach the bounds in
/// floating point.
const TOUCH: f64 = 1e-12;

/// One sandwich sample `d(x) < c̄(x) < A d(a x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichSample {
    pub x: f64,
    pub lower: f64,
    pub cbar: f64,
    pub upper: f64,
}

/// Sufficient conditions for a jump of the front in medium `c̄`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpCertificate {
    pub step: StepProfile,
    /// `d₂ > 2d₁` and `d₂ > 2√(d₁(d₂ − d₁))`.
    pub in_delta: (bool, bool),
    pub big_a: f64,
    pub a: f64,
    /// `½ [1 + d₂ / (2√(d₁(d₂ − d₁)))]`.
    pub bound: f64,
    /// `a √A < bound`.
    pub scaling_ok: bool,
    pub samples: usize,
    /// Samples where `c̄` leaves `[d(x), A d(a x)]`.
    pub violations: Vec<SandwichSample>,
    /// Samples where `c̄` equals a bound to within rounding.
    pub touching: usize,
    pub verdict: bool,
    pub reasons: Vec<String>,
}

/// Checks `(d₁, d₂) ∈ Δ`, `a √A < ½[1 + d₂/(2√(d₁(d₂−d₁)))]` and the sandwich
/// `d(x) < c̄(x) < A d(a x)` on `sample_xs`.
pub fn jump_certificate<C: Fn(f64) -> f64>(
    cbar: C,
    step: &StepProfile,
    big_a: f64,
    a: f64,
    sample_xs: &[f64],
) -> Result<JumpCertificate> {
    step.validate()?;
    if !(big_a > 1.0 && a > 1.0) {
        return Err(Error::Parameter(format!("need A > 1 and a > 1, got A = {big_a}, a = {a}")));
    }
    let (d1, d2) = (step.d1, step.d2);
    let root = (d1 * (d2 - d1)).max(0.0).sqrt();
    let in_delta = (d2 > 2.0 * d1, d2 > 2.0 * root);
    let bound = 0.5 * (1.0 + d2 / (2.0 * root));
    let scaling_ok = a * big_a.sqrt() < bound;
    let mut violations = Vec::new();
    let mut touching = 0;
    for &x in sample_xs {
        let s = SandwichSample {
            x,
            lower: step.d(x),
            cbar: cbar(x),
            upper: big_a * step.d(a * x),
        };
        let touch_lo = (s.cbar - s.lower).abs() <= TOUCH * s.lower.abs();
        let touch_hi = (s.cbar - s.upper).abs() <= TOUCH * s.upper.abs();
        if touch_lo || touch_hi {
            touching += 1;
        } else if !(s.cbar > s.lower && s.cbar < s.upper) {
            violations.push(s);
        }
    }
    let mut reasons = Vec::new();
    if !in_delta.0 {
        reasons.push(format!("d2 = {d2} is not above 2 d1 = {}", 2.0 * d1));
    }
    if !in_delta.1 {
        reasons.push(format!("d2 = {d2} is not above 2 sqrt(d1 (d2 - d1)) = {}", 2.0 * root));
    }
    if !scaling_ok {
        reasons.push(format!("a sqrt(A) = {} is not below {bound}", a * big_a.sqrt()));
    }
    if !violations.is_empty() {
        reasons.push(format!(
            "sandwich fails at {} of {} samples (first at x = {})",
            violations.len(),
            sample_xs.len(),
            violations[0].x
        ));
    }
    Ok(JumpCertificate {
        step: *step,
        in_delta,
        big_a,
        a,
        bound,
        scaling_ok,
        samples: sample_xs.len(),
        violations,
        touching,
        verdict: reasons.is_empty(),
        reasons,
    })
}

/// `c̄(x) = (A d₂ μ + d₁ e^{−λ(x−k)}) / (μ + e^{−λ(x−k)})`, increasing from
/// `d₁` to `A d₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleCbar {
    pub d1: f64,
    pub d2: f64,
    pub big_a: f64,
    pub mu: f64,
    pub lambda: f64,
    pub k: f64,
}

impl ExampleCbar {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let top = self.big_a * self.d2;
        let z = -self.lambda * (x - self.k);
        // Weight of the d₁ state, computed without overflow.
        let w = if z > 0.0 {
            1.0 / (1.0 + self.mu * (-z).exp())
        } else {
            let e = z.exp();
            e / (self.mu + e)
        };
        top + (self.d1 - top) * w
    }
}

/// Builds the example medium and checks `c̄(x₂/a) < A d₁` and `c̄(x₂) > d₂`.
pub fn example_cbar(step: &StepProfile, big_a: f64, a: f64, mu: f64, lambda: f64, k: f64) -> Result<ExampleCbar> {
    step.validate()?;
    if !(mu > 0.0 && lambda > 0.0) {
        return Err(Error::Parameter(format!("need mu > 0 and lambda > 0, got {mu}, {lambda}")));
    }
    let x2 = step.x2;
    if !(k > x2 / a && k < x2) {
        return Err(Error::Parameter(format!("k = {k} must lie in (x2/a, x2) = ({}, {x2})", x2 / a)));
    }
    let c = ExampleCbar {
        d1: step.d1,
        d2: step.d2,
        big_a,
        mu,
        lambda,
        k,
    };
    let (left, right) = (c.eval(x2 / a), c.eval(x2));
    if !(left < big_a * step.d1 && right > step.d2) {
        return Err(Error::Parameter(format!(
            "example medium rejected: c̄(x2/a) = {left} must be below A d1 = {} and c̄(x2) = {right} above d2 = {}",
            big_a * step.d1,
            step.d2
        )));
    }
    Ok(c)
}
