use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::TubeProfile;

/// Front speed `a(x) = √(½ S/V) (½ − μ)` of the reduced bistable equation.
pub fn bistable_speed(profile: &TubeProfile, mu: f64, x: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 0.5) {
        return Err(Error::Parameter(format!("bistable threshold mu = {mu} must lie in (0, 1/2)")));
    }
    let ratio = profile.surface(x)? / profile.volume(x)?;
    Ok((0.5 * ratio).sqrt() * (0.5 - mu))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BistableCheck {
    pub max_residual: f64,
    /// `v` at the first and last grid point.
    pub left_value: f64,
    pub right_value: f64,
}

/// Residual of `½ v'' + a v' + β v (v − μ)(1 − v)` on the logistic profile
/// `v(ξ) = 1/(1 + e^{√β ξ})`, using exact derivatives.
pub fn bistable_profile_check(beta: f64, mu: f64, a: f64, xi: &[f64]) -> Result<BistableCheck> {
    if !(beta > 0.0) || xi.is_empty() {
        return Err(Error::Parameter(format!("need beta > 0 and a nonempty grid, got beta = {beta}")));
    }
    let k = beta.sqrt();
    let v = |s: f64| {
        // Logistic written to avoid overflow of e^{k s}.
        if s > 0.0 {
            let e = (-k * s).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + (k * s).exp())
        }
    };
    let max_residual = xi
        .iter()
        .map(|&s| {
            let v = v(s);
            let q = v * (1.0 - v);
            let d1 = -k * q;
            let d2 = k * k * q * (1.0 - 2.0 * v);
            (0.5 * d2 + a * d1 + beta * v * (v - mu) * (1.0 - v)).abs()
        })
        .fold(0.0, f64::max);
    Ok(BistableCheck {
        max_residual,
        left_value: v(xi[0]),
        right_value: v(*xi.last().unwrap()),
    })
}
