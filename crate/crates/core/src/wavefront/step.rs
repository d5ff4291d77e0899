use serde::{Deserialize, Serialize};

use super::golden_max;
use crate::error::{Error, Result};

/// Step medium `d(x) = d₁` for `x < x₂`, `d₂` for `x ≥ x₂`, with initial
/// support `F₀ = (−∞, 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    pub d1: f64,
    pub d2: f64,
    pub x2: f64,
}

impl StepProfile {
    pub fn new(d1: f64, d2: f64, x2: f64) -> Result<Self> {
        let s = StepProfile { d1, d2, x2 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d1 > 0.0 && self.d2 > 0.0 && self.x2 > 0.0 && self.x2.is_finite()) {
            return Err(Error::Parameter(format!(
                "step medium needs d1, d2 > 0 and x2 > 0, got {self:?}"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn d(&self, x: f64) -> f64 {
        if x < self.x2 {
            self.d1
        } else {
            self.d2
        }
    }

    fn require_jump_regime(&self) -> Result<()> {
        self.validate()?;
        if self.d2 <= 2.0 * self.d1 {
            return Err(Error::Parameter(format!(
                "closed forms need d2 > 2 d1 (d1 = {}, d2 = {})",
                self.d1, self.d2
            )));
        }
        Ok(())
    }

    /// Ignition time of the interface: `t₀ = x₂ √(2(d₂ − d₁)) / d₂`.
    pub fn t0(&self) -> Result<f64> {
        self.require_jump_regime()?;
        Ok(self.x2 * (2.0 * (self.d2 - self.d1)).sqrt() / self.d2)
    }

    /// Merge time `t₁ = (x₂ + √(2d₁) t₀) / (2√(2d₁))`.
    pub fn t1(&self) -> Result<f64> {
        let r = (2.0 * self.d1).sqrt();
        Ok((self.x2 + r * self.t0()?) / (2.0 * r))
    }

    /// Merge point `x₁ = √(2d₁) t₁`.
    pub fn x1(&self) -> Result<f64> {
        Ok((2.0 * self.d1).sqrt() * self.t1()?)
    }

    /// `sup_s { d₂(t − s) + d₁ s − (x − x₂)²/(2(t − s)) − x₂²/(2s) }` over
    /// `s ∈ (0, t)`: best action through the interface point.
    fn through_interface(&self, t: f64, x: f64) -> f64 {
        let dx = x - self.x2;
        let f = |s: f64| {
            self.d2 * (t - s) + self.d1 * s - dx * dx / (2.0 * (t - s)) - self.x2 * self.x2 / (2.0 * s)
        };
        golden_max(f, 0.0, t, 1e-13 * t.max(1.0)).1
    }

    /// First arrival time `t*(x)`.
    ///
    /// For `x > x₂` this is the root of the interface action above (golden
    /// section inside, bisection outside). For `x ≤ x₂` the arrival curve is
    /// `x/√(2d₁)` up to `x₁` and the segment joining `(x₁, t₁)` to `(x₂, t₀)`.
    pub fn t_star(&self, x: f64) -> Result<f64> {
        self.require_jump_regime()?;
        if x <= 0.0 {
            return Ok(0.0);
        }
        let (t0, t1, x1) = (self.t0()?, self.t1()?, self.x1()?);
        if x <= x1 {
            return Ok(x / (2.0 * self.d1).sqrt());
        }
        if x <= self.x2 {
            return Ok(t1 + (t0 - t1) * (x - x1) / (self.x2 - x1));
        }
        let g = |t: f64| self.through_interface(t, x);
        let mut lo = 1e-9;
        let mut hi = t0.max(1e-3);
        let mut tries = 0;
        while g(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            tries += 1;
            if tries > 60 {
                return Err(Error::NoRoot {
                    lo,
                    hi,
                    f_lo: g(lo),
                    f_hi: g(hi),
                });
            }
        }
        let (f_lo, f_hi) = (g(lo), g(hi));
        if !(f_lo < 0.0 && f_hi >= 0.0) {
            return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium() -> StepProfile {
        StepProfile::new(1.0, 4.0, 1.0).unwrap()
    }

    #[test]
    fn characteristic_times() {
        let s = medium();
        assert!((s.t0().unwrap() - 6f64.sqrt() / 4.0).abs() < 1e-15);
        let t1 = (1.0 + 2f64.sqrt() * 6f64.sqrt() / 4.0) / (2.0 * 2f64.sqrt());
        assert!((s.t1().unwrap() - t1).abs() < 1e-15);
        assert!((s.t1().unwrap() - 0.6598).abs() < 1e-4);
    }

    #[test]
    fn right_branch_is_continuous_at_interface() {
        let s = medium();
        let t = s.t_star(1.0 + 1e-4).unwrap();
        assert!((t - s.t0().unwrap()).abs() < 1e-3, "{t}");
        assert!(s.t_star(1.5).unwrap() > t);
    }

    #[test]
    fn far_field_speed_is_that_of_d2() {
        // Far from the interface the optimal path spends the time in d₂.
        let s = medium();
        let (a, b) = (s.t_star(4.0).unwrap(), s.t_star(5.0).unwrap());
        assert!(((b - a) - 1.0 / 8f64.sqrt()).abs() < 0.01, "{}", b - a);
    }

    #[test]
    fn rejects_weak_contrast() {
        let s = StepProfile::new(1.0, 1.5, 1.0).unwrap();
        assert!(matches!(s.t0(), Err(Error::Parameter(_))));
        assert!(StepProfile::new(0.0, 1.0, 1.0).is_err());
    }
}
