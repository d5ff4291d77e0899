use serde::Serialize;

use super::{field::FieldMeta, Axis, Field, Grid};
use crate::error::{Error, Result};
use crate::stats::linear_fit;

/// Level-set position of a right-moving front at one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontSample {
    pub t: f64,
    /// Rightmost `x` with `u(t, x) = level` (linear interpolation); `None`
    /// when `u < level` everywhere.
    pub x: Option<f64>,
    /// The level set sits in the last cell, so the front has reached the
    /// right end of the window.
    pub at_edge: bool,
    /// `u` is nonincreasing over the two cells either side of the crossing.
    pub monotone: bool,
}

/// Front position `sup{x : u(t, x) ≥ level}` for every snapshot. Strip
/// fields are averaged over `η` first.
pub fn front_position(field: &Field, level: f64) -> Vec<FrontSample> {
    let ax = field.grid.x;
    (0..field.times.len())
        .map(|i| {
            let u = field.section_average(i);
            let t = field.times[i];
            let Some(j) = u.iter().rposition(|&v| v >= level) else {
                return FrontSample {
                    t,
                    x: None,
                    at_edge: false,
                    monotone: true,
                };
            };
            if j + 1 == u.len() {
                return FrontSample {
                    t,
                    x: Some(ax.hi),
                    at_edge: true,
                    monotone: true,
                };
            }
            let w = (u[j] - level) / (u[j] - u[j + 1]);
            let lo = j.saturating_sub(2);
            let hi = (j + 3).min(u.len() - 1);
            let monotone = u[lo..=hi].windows(2).all(|p| p[1] <= p[0] + 1e-12);
            FrontSample {
                t,
                x: Some(ax.node(j) + w * ax.dx()),
                at_edge: false,
                monotone,
            }
        })
        .collect()
}

/// Least-squares slope of the front position over `t ∈ [t0, t1]`.
///
/// Fails with [`Error::Window`] when fewer than three samples fall in the
/// window, the front is missing, or it has reached the window edge.
pub fn front_speed(samples: &[FrontSample], t0: f64, t1: f64) -> Result<f64> {
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for s in samples.iter().filter(|s| s.t >= t0 && s.t <= t1) {
        match s.x {
            Some(x) if !s.at_edge => {
                ts.push(s.t);
                xs.push(x);
            }
            _ => {
                return Err(Error::Window(format!(
                    "front is missing or at the window edge at t = {}",
                    s.t
                )))
            }
        }
    }
    if ts.len() < 3 {
        return Err(Error::Window(format!("only {} snapshots in [{t0}, {t1}]", ts.len())));
    }
    linear_fit(&ts, &xs)
        .map(|(_, slope)| slope)
        .ok_or_else(|| Error::Window("degenerate time window".into()))
}

/// Front speed with the logarithmic delay of pulled fronts removed: fits
/// `x(t) + (3 / (2λ*)) ln t` over the window, where `λ*` is the decay rate of
/// the leading edge (`λ* = √(2 c̄)` for `u_t = ½ u_xx + c̄ u (1 − u)`).
pub fn front_speed_log_corrected(samples: &[FrontSample], t0: f64, t1: f64, lambda_star: f64) -> Result<f64> {
    if !(lambda_star > 0.0) || !(t0 > 0.0) {
        return Err(Error::Parameter(format!(
            "need lambda* > 0 and t0 > 0, got {lambda_star} and {t0}"
        )));
    }
    let shift = 1.5 / lambda_star;
    let corrected: Vec<FrontSample> = samples
        .iter()
        .map(|s| FrontSample {
            x: s.x.map(|x| x + shift * s.t.ln()),
            ..*s
        })
        .collect();
    front_speed(&corrected, t0, t1)
}

/// Output window for [`rescale_solution`].
#[derive(Debug, Clone, PartialEq)]
pub struct RescaleWindow {
    pub x: Axis,
    pub times: Vec<f64>,
}

/// Hyperbolic rescaling `u^δ(t, x) = u(t/δ, x/δ)` of a 1-D field, sampled on
/// `window` (default: the stored grid scaled by `δ`).
pub fn rescale_solution(field: &Field, delta: f64, window: Option<RescaleWindow>) -> Result<Field> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    if field.is_2d() {
        return Err(Error::Config("rescaling applies to 1-D fields".into()));
    }
    let window = window.unwrap_or_else(|| RescaleWindow {
        x: Axis {
            lo: field.grid.x.lo * delta,
            hi: field.grid.x.hi * delta,
            n: field.grid.x.n,
        },
        times: field.times.iter().map(|t| t * delta).collect(),
    });
    let mut values = Vec::with_capacity(window.times.len() * window.x.n);
    for &t in &window.times {
        for j in 0..window.x.n {
            values.push(field.interp_1d(t / delta, window.x.node(j) / delta)?);
        }
    }
    let t_end = window.times.last().copied().unwrap_or(0.0);
    Ok(Field {
        grid: Grid {
            x: window.x,
            n_eta: None,
            t_end,
            dt: field.grid.step() * delta,
            save_every: field.grid.save_every,
        },
        times: window.times,
        values,
        meta: FieldMeta {
            profile: format!("{} (rescaled by {delta})", field.meta.profile),
            ..field.meta.clone()
        },
    })
}
