//! The reduced diffusion `dX = dW¹ + ½ (log V)'(X) dt` and its pathwise
//! coupling with the reflected process.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ensemble;
use crate::error::{Error, Result};
use crate::geometry::TubeProfile;
use crate::reflected_sde::{self, checkpoints, GaussianIncrements, Increments, SimConfig, State};
use crate::rng::{self, Domain, Rng};
use crate::stats::Accumulator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitConfig {
    pub dt: f64,
    pub horizon: f64,
    pub x0: f64,
    pub seed: u64,
}

impl LimitConfig {
    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!(
                "limit diffusion needs dt > 0 and finite horizon >= 0 (dt = {}, T = {})",
                self.dt, self.horizon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitPath {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub seed: u64,
    /// Steps whose drift was evaluated with the clamped profile extension.
    pub clamped_steps: usize,
}

/// Euler–Maruyama step of the reduced diffusion. Returns the new position and
/// whether the drift came from the clamped extension.
#[inline]
pub fn limit_step(profile: &TubeProfile, x: f64, dt: f64, dw: f64) -> (f64, bool) {
    let (drift, clamped) = profile.drift_clamped(x);
    (x + drift * dt + dw, clamped)
}

/// Path `index` of the reduced diffusion ensemble.
pub fn simulate_limit_path(config: &LimitConfig, profile: &TubeProfile, index: u64) -> Result<LimitPath> {
    config.validate()?;
    let mut rng: Rng = rng::substream(config.seed, Domain::Limit, &[], index);
    let sd = config.dt.sqrt();
    let n = config.n_steps();
    let mut path = LimitPath {
        times: Vec::with_capacity(n + 1),
        xs: Vec::with_capacity(n + 1),
        seed: config.seed,
        clamped_steps: 0,
    };
    let mut x = config.x0;
    path.times.push(0.0);
    path.xs.push(x);
    for k in 1..=n {
        let z: f64 = StandardNormal.sample(&mut rng);
        let (nx, clamped) = limit_step(profile, x, config.dt, sd * z);
        x = nx;
        path.clamped_steps += clamped as usize;
        if !x.is_finite() {
            return Err(Error::Numeric {
                step: k,
                reason: "limit diffusion left the finite range".into(),
            });
        }
        path.times.push(k as f64 * config.dt);
        path.xs.push(x);
    }
    Ok(path)
}

pub fn simulate_limit(config: &LimitConfig, profile: &TubeProfile) -> Result<LimitPath> {
    simulate_limit_path(config, profile, 0)
}

/// Mean-square gap series for one ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingRow {
    pub epsilon: f64,
    pub dt: f64,
    pub n_paths: usize,
    /// `sup_t E|X^ε_t − X_t|²` over the checkpoints.
    pub sup_mean_square_gap: f64,
    pub sup_se: f64,
    pub sup_time: f64,
    /// `(t, E|X^ε_t − X_t|², std error)` per checkpoint.
    pub series: Vec<(f64, f64, f64)>,
    /// Largest single-path gap seen at any checkpoint.
    pub max_abs_gap: f64,
}

#[derive(Clone)]
struct GapAcc {
    gaps: Vec<Accumulator>,
    max_abs: f64,
}

/// Drives the reflected process and the reduced diffusion with the same
/// `ΔW¹` increments per path and records `E|X^ε_t − X_t|²`.
pub fn coupled_gap(config: &SimConfig, profile: &TubeProfile, n_check: usize) -> Result<CouplingRow> {
    config.validate(profile)?;
    let n = config.n_steps();
    let checks = checkpoints(n, n_check);
    let chunks = ensemble::chunked(config.n_paths, |range| -> Result<GapAcc> {
        let mut acc = GapAcc {
            gaps: vec![Accumulator::new(); checks.len()],
            max_abs: 0.0,
        };
        for p in range {
            let mut inc = GaussianIncrements::new(rng::substream(config.seed, Domain::Coupled, &[], p as u64), config.dt);
            let (x0, y0) = config.start;
            let mut limit_x = x0;
            let mut next_check = 0;
            let mut step_err = None;
            let mut inner = |k: usize, xe: f64, dw1: f64| {
                limit_x = limit_step(profile, limit_x, config.dt, dw1).0;
                if next_check < checks.len() && k == checks[next_check] {
                    let gap = xe - limit_x;
                    acc.gaps[next_check].push(gap * gap);
                    acc.max_abs = acc.max_abs.max(gap.abs());
                    next_check += 1;
                }
            };
            // Stepped by hand: the limit path needs each ΔW¹ as it is drawn.
            let mut state = State { x: x0, y: y0 };
            for k in 1..=n {
                let (dw1, dw2) = inc.next_pair();
                match reflected_sde::step_reflect(state, dw1, dw2, profile, config.epsilon) {
                    Ok(out) => {
                        state = out.state;
                        inner(k, state.x, dw1);
                    }
                    Err(Error::StepSize { reason, .. }) => {
                        step_err = Some(Error::StepSize { step: k, reason });
                        break;
                    }
                    Err(e) => {
                        step_err = Some(e);
                        break;
                    }
                }
            }
            if let Some(e) = step_err {
                return Err(e);
            }
            if n == 0 {
                for a in acc.gaps.iter_mut() {
                    a.push(0.0);
                }
            }
        }
        Ok(acc)
    });
    let mut gaps = vec![Accumulator::new(); checks.len()];
    let mut max_abs: f64 = 0.0;
    for c in chunks {
        let c = c?;
        for (a, b) in gaps.iter_mut().zip(&c.gaps) {
            a.merge(b);
        }
        max_abs = max_abs.max(c.max_abs);
    }
    let series: Vec<(f64, f64, f64)> = checks
        .iter()
        .zip(&gaps)
        .map(|(&k, a)| (k as f64 * config.dt, a.mean, a.std_error()))
        .collect();
    let (i_sup, _) = series
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, s)| if s.1 > b.1 { (i, s.1) } else { b });
    let (sup_time, sup, sup_se) = series.get(i_sup).copied().unwrap_or((0.0, 0.0, 0.0));
    Ok(CouplingRow {
        epsilon: config.epsilon,
        dt: config.dt,
        n_paths: config.n_paths,
        sup_mean_square_gap: sup,
        sup_se,
        sup_time,
        series,
        max_abs_gap: max_abs,
    })
}

/// Coupled comparison over a list of configs (typically decreasing ε).
pub fn coupled_compare(configs: &[SimConfig], profile: &TubeProfile, n_check: usize) -> Result<Vec<CouplingRow>> {
    configs.iter().map(|c| coupled_gap(c, profile, n_check)).collect()
}
