//! Wiener process in the strip `D^ε` with instantaneous normal reflection.
//!
//! Each Euler step proposes `(x + ΔW¹, y + ΔW²)`. A proposal outside the
//! closed strip is mapped to the nearest point of the crossed boundary curve
//! and the Euclidean projection distance is booked as the local-time
//! increment `ΔL`; since `|γ^ε| = 1` the projection displacement equals
//! `γ^ε ΔL`. The discrete local time carries an `O(√dt)` bias, so ε-sweeps
//! keep `dt / (ε V_min)²` fixed.
//!
//! Two local-time functionals are provided: the averaging functional
//! `Σ ε H |γ₂^ε| ΔL` (see [`local_time_integral`]) and the plain `ε L`
//! used in the Feynman–Kac exponent.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ensemble;
use crate::error::{Error, Result};
use crate::geometry::{normal_from_slope, Section, Side, TubeProfile};
use crate::rng::{self, Domain, Rng};
use crate::stats::Accumulator;

/// Simulation parameters for one ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub epsilon: f64,
    pub dt: f64,
    pub horizon: f64,
    pub start: (f64, f64),
    pub seed: u64,
    pub n_paths: usize,
}

impl SimConfig {
    /// Config with `dt = kappa · (ε V_min)²`, started on the mid-line of the
    /// section at `x0`.
    pub fn for_epsilon(
        profile: &TubeProfile,
        epsilon: f64,
        kappa: f64,
        horizon: f64,
        x0: f64,
        seed: u64,
        n_paths: usize,
    ) -> Result<Self> {
        let s = profile.section(x0)?;
        let cfg = SimConfig {
            epsilon,
            dt: kappa * (epsilon * profile.v_min()).powi(2),
            horizon,
            start: (x0, 0.5 * epsilon * (s.lower.value + s.upper.value)),
            seed,
            n_paths,
        };
        cfg.validate(profile)?;
        Ok(cfg)
    }

    pub fn validate(&self, profile: &TubeProfile) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        let dt_max = 0.25 * (self.epsilon * profile.v_min()).powi(2);
        if self.dt > dt_max {
            return Err(Error::Config(format!(
                "dt = {} exceeds (eps * V_min)^2 / 4 = {dt_max}",
                self.dt
            )));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("horizon must be finite and >= 0, got {}", self.horizon)));
        }
        let (x0, y0) = self.start;
        let s = profile.section(x0)?;
        if !(y0 > self.epsilon * s.lower.value && y0 < self.epsilon * s.upper.value) {
            return Err(Error::Config(format!("start ({x0}, {y0}) is not strictly inside the strip")));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

/// Position inside the closed strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

/// Result of one reflected step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: State,
    pub delta_l: f64,
    pub side: Option<Side>,
    /// `|γ₂^ε|` at the contact point (1 when there was no contact).
    pub gamma2_abs: f64,
    /// Section at the new abscissa (clamped extension outside the domain).
    pub section: Section,
    pub clamped: bool,
}

/// Source of Brownian increments `(ΔW¹, ΔW²)`.
pub trait Increments {
    fn next_pair(&mut self) -> (f64, f64);
}

/// Gaussian increments with variance `dt` drawn from a substream.
pub struct GaussianIncrements {
    rng: Rng,
    sd: f64,
}

impl GaussianIncrements {
    pub fn new(rng: Rng, dt: f64) -> Self {
        GaussianIncrements { rng, sd: dt.sqrt() }
    }
}

impl Increments for GaussianIncrements {
    #[inline]
    fn next_pair(&mut self) -> (f64, f64) {
        let a: f64 = StandardNormal.sample(&mut self.rng);
        let b: f64 = StandardNormal.sample(&mut self.rng);
        (self.sd * a, self.sd * b)
    }
}

/// Noise-free override: every increment is zero.
pub struct ZeroIncrements;

impl Increments for ZeroIncrements {
    fn next_pair(&mut self) -> (f64, f64) {
        (0.0, 0.0)
    }
}

/// Nearest point on the curve `y = ε g(s)` to `(px, py)`, by Newton's method
/// on the orthogonality condition. Exact after one step for straight
/// boundaries.
fn project_onto_curve(profile: &TubeProfile, epsilon: f64, side: Side, px: f64, py: f64) -> (f64, Section, bool) {
    let mut s = px;
    let (mut sec, mut clamped) = profile.section_clamped(s);
    for _ in 0..30 {
        let g = sec.side(side);
        let gap = epsilon * g.value - py;
        let f = (s - px) + epsilon * g.d1 * gap;
        let fp = 1.0 + epsilon * epsilon * (g.d1 * g.d1 + g.d2 * gap / epsilon);
        let step = if fp > 0.0 { f / fp } else { f };
        s -= step;
        (sec, clamped) = profile.section_clamped(s);
        if step.abs() <= 1e-15 * (1.0 + s.abs()) {
            break;
        }
    }
    (s, sec, clamped)
}

/// One reflected Euler step from `state` with increments `(dw1, dw2)`.
///
/// Returns a step-size error when the proposal overshoots the crossed
/// boundary by more than the local strip width, i.e. it may have left through
/// both boundaries within one step.
pub fn step_reflect(state: State, dw1: f64, dw2: f64, profile: &TubeProfile, epsilon: f64) -> Result<StepOutcome> {
    let px = state.x + dw1;
    let py = state.y + dw2;
    let (sec, clamped) = profile.section_clamped(px);
    let lo = epsilon * sec.lower.value;
    let hi = epsilon * sec.upper.value;
    let side = if py > hi {
        Side::Upper
    } else if py < lo {
        Side::Lower
    } else {
        return Ok(StepOutcome {
            state: State { x: px, y: py },
            delta_l: 0.0,
            side: None,
            gamma2_abs: 1.0,
            section: sec,
            clamped,
        });
    };
    let overshoot = if side == Side::Upper { py - hi } else { lo - py };
    if overshoot > hi - lo {
        return Err(Error::StepSize {
            step: 0,
            reason: format!(
                "proposal ({px}, {py}) overshoots the {side:?} boundary by {overshoot}, more than the local width {}",
                hi - lo
            ),
        });
    }
    let (s, sec2, clamped2) = project_onto_curve(profile, epsilon, side, px, py);
    let y_new = epsilon * sec2.side(side).value;
    let delta_l = (s - px).hypot(y_new - py);
    let normal = normal_from_slope(s, side, epsilon * sec2.side(side).d1);
    Ok(StepOutcome {
        state: State { x: s, y: y_new },
        delta_l,
        side: Some(side),
        gamma2_abs: normal.gamma2_eps.abs(),
        section: sec2,
        clamped: clamped || clamped2,
    })
}

/// One boundary contact recorded along a path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionEvent {
    pub step: usize,
    pub side: Side,
    pub delta_l: f64,
    pub x: f64,
    pub y: f64,
    pub gamma2_abs: f64,
}

/// Discretised trajectory `(X^ε, Y^ε, L^ε)` on the grid `t_k = k dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectedPath {
    pub epsilon: f64,
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub local_time: Vec<f64>,
    pub events: Vec<ReflectionEvent>,
    /// Steps at which the profile was evaluated outside its domain.
    pub clamped_steps: usize,
}

/// Drives a reflected walk for `n_steps`, calling `visit(k, &outcome)` after
/// step `k` (1-based).
pub(crate) fn walk<I, F>(
    profile: &TubeProfile,
    epsilon: f64,
    start: State,
    n_steps: usize,
    increments: &mut I,
    mut visit: F,
) -> Result<()>
where
    I: Increments,
    F: FnMut(usize, &StepOutcome),
{
    let mut state = start;
    for k in 1..=n_steps {
        let (dw1, dw2) = increments.next_pair();
        let out = step_reflect(state, dw1, dw2, profile, epsilon).map_err(|e| match e {
            Error::StepSize { reason, .. } => Error::StepSize { step: k, reason },
            other => other,
        })?;
        state = out.state;
        visit(k, &out);
    }
    Ok(())
}

/// Simulates one path with the given increment source.
pub fn simulate_reflected_with<I: Increments>(
    config: &SimConfig,
    profile: &TubeProfile,
    increments: &mut I,
) -> Result<ReflectedPath> {
    config.validate(profile)?;
    let n = config.n_steps();
    let mut path = ReflectedPath {
        epsilon: config.epsilon,
        times: Vec::with_capacity(n + 1),
        xs: Vec::with_capacity(n + 1),
        ys: Vec::with_capacity(n + 1),
        local_time: Vec::with_capacity(n + 1),
        events: Vec::new(),
        clamped_steps: 0,
    };
    let (x0, y0) = config.start;
    path.times.push(0.0);
    path.xs.push(x0);
    path.ys.push(y0);
    path.local_time.push(0.0);
    let mut l = 0.0;
    walk(profile, config.epsilon, State { x: x0, y: y0 }, n, increments, |k, out| {
        l += out.delta_l;
        if let Some(side) = out.side {
            path.events.push(ReflectionEvent {
                step: k,
                side,
                delta_l: out.delta_l,
                x: out.state.x,
                y: out.state.y,
                gamma2_abs: out.gamma2_abs,
            });
        }
        if out.clamped {
            path.clamped_steps += 1;
        }
        path.times.push(k as f64 * config.dt);
        path.xs.push(out.state.x);
        path.ys.push(out.state.y);
        path.local_time.push(l);
    })?;
    Ok(path)
}

/// Simulates path `index` of the ensemble defined by `config`; identical
/// `(seed, index)` give bit-identical paths.
pub fn simulate_reflected_path(config: &SimConfig, profile: &TubeProfile, index: u64) -> Result<ReflectedPath> {
    let mut inc = GaussianIncrements::new(rng::substream(config.seed, Domain::Reflected, &[], index), config.dt);
    simulate_reflected_with(config, profile, &mut inc)
}

/// Path 0 of the ensemble.
pub fn simulate_reflected(config: &SimConfig, profile: &TubeProfile) -> Result<ReflectedPath> {
    simulate_reflected_path(config, profile, 0)
}

/// `Σ_events ε H(x_k, y_k/ε) |γ₂^ε| ΔL_k`.
pub fn local_time_integral<H>(path: &ReflectedPath, h: H, epsilon: f64) -> f64
where
    H: Fn(f64, f64, Side) -> f64,
{
    path.events
        .iter()
        .map(|e| epsilon * h(e.x, e.y / epsilon, e.side) * e.gamma2_abs * e.delta_l)
        .sum()
}

/// Monte Carlo summary of one ε in an averaging sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragingRow {
    pub epsilon: f64,
    pub dt: f64,
    pub n_paths: usize,
    /// `sup_t E|∫½Q ds − ∫εH|γ₂|dL|²` over the checkpoints.
    pub mean_square_error: f64,
    pub mean_square_error_se: f64,
    pub sup_time: f64,
    /// `E ∫₀ᵀ εH|γ₂^ε| dL`.
    pub functional_mean: f64,
    pub functional_se: f64,
    /// `E ∫₀ᵀ ½Q(X_s) ds`.
    pub drift_mean: f64,
    /// `E |ε L_T|²`.
    pub local_time_moment: f64,
    pub local_time_moment_se: f64,
    pub clamped_steps: u64,
}

#[derive(Clone)]
struct SweepAcc {
    gap_sq: Vec<Accumulator>,
    functional: Accumulator,
    drift: Accumulator,
    moment: Accumulator,
    clamped: u64,
}

impl SweepAcc {
    fn new(n_check: usize) -> Self {
        SweepAcc {
            gap_sq: vec![Accumulator::new(); n_check],
            functional: Accumulator::new(),
            drift: Accumulator::new(),
            moment: Accumulator::new(),
            clamped: 0,
        }
    }

    fn merge(&mut self, other: &SweepAcc) {
        for (a, b) in self.gap_sq.iter_mut().zip(&other.gap_sq) {
            a.merge(b);
        }
        self.functional.merge(&other.functional);
        self.drift.merge(&other.drift);
        self.moment.merge(&other.moment);
        self.clamped += other.clamped;
    }
}

/// Checkpoint step indices `k_i = round(i n / m)`, `i = 1..m` (deduplicated).
pub(crate) fn checkpoints(n_steps: usize, n_check: usize) -> Vec<usize> {
    let m = n_check.max(1).min(n_steps.max(1));
    let mut out: Vec<usize> = (1..=m).map(|i| (i * n_steps + m / 2) / m).collect();
    out.dedup();
    out
}

/// Runs the ensemble for one config and gathers the averaging statistics.
pub fn averaging_stats<H>(config: &SimConfig, profile: &TubeProfile, h: &H, n_check: usize) -> Result<AveragingRow>
where
    H: Fn(f64, f64, Side) -> f64 + Sync,
{
    config.validate(profile)?;
    let eps = config.epsilon;
    let n = config.n_steps();
    let checks = checkpoints(n, n_check);
    let q = |sec: &Section, x: f64| (h(x, sec.lower.value, Side::Lower) + h(x, sec.upper.value, Side::Upper)) / sec.volume();

    let chunks = ensemble::chunked(config.n_paths, |range| -> Result<SweepAcc> {
        let mut acc = SweepAcc::new(checks.len());
        for p in range {
            let mut inc = GaussianIncrements::new(rng::substream(config.seed, Domain::Reflected, &[], p as u64), config.dt);
            let (x0, y0) = config.start;
            let (mut sec, _) = profile.section_clamped(x0);
            let mut x = x0;
            let mut drift_int = 0.0;
            let mut functional = 0.0;
            let mut local = 0.0;
            let mut next_check = 0;
            walk(profile, eps, State { x: x0, y: y0 }, n, &mut inc, |k, out| {
                drift_int += 0.5 * q(&sec, x) * config.dt;
                if let Some(side) = out.side {
                    let yb = out.state.y / eps;
                    functional += eps * h(out.state.x, yb, side) * out.gamma2_abs * out.delta_l;
                    local += out.delta_l;
                }
                if out.clamped {
                    acc.clamped += 1;
                }
                x = out.state.x;
                sec = out.section;
                if next_check < checks.len() && k == checks[next_check] {
                    acc.gap_sq[next_check].push((drift_int - functional).powi(2));
                    next_check += 1;
                }
            })?;
            if n == 0 {
                for a in acc.gap_sq.iter_mut() {
                    a.push(0.0);
                }
            }
            acc.functional.push(functional);
            acc.drift.push(drift_int);
            acc.moment.push((eps * local).powi(2));
        }
        Ok(acc)
    });

    let mut total = SweepAcc::new(checks.len());
    for c in chunks {
        total.merge(&c?);
    }
    let (i_sup, sup) = total
        .gap_sq
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, a)| if a.mean > best.1 { (i, a.mean) } else { best });
    Ok(AveragingRow {
        epsilon: eps,
        dt: config.dt,
        n_paths: config.n_paths,
        mean_square_error: sup.max(0.0),
        mean_square_error_se: total.gap_sq[i_sup].std_error(),
        sup_time: checks.get(i_sup).map_or(0.0, |&k| k as f64 * config.dt),
        functional_mean: total.functional.mean,
        functional_se: total.functional.std_error(),
        drift_mean: total.drift.mean,
        local_time_moment: total.moment.mean,
        local_time_moment_se: total.moment.std_error(),
        clamped_steps: total.clamped,
    })
}

/// Averaging-error table over a list of configs (typically decreasing ε).
pub fn averaging_error<H>(configs: &[SimConfig], profile: &TubeProfile, h: H, n_check: usize) -> Result<Vec<AveragingRow>>
where
    H: Fn(f64, f64, Side) -> f64 + Sync,
{
    configs.iter().map(|c| averaging_stats(c, profile, &h, n_check)).collect()
}

/// Monte Carlo estimate of `E|ε L_T|²` with its standard error.
pub fn local_time_moment(config: &SimConfig, profile: &TubeProfile) -> Result<(f64, f64)> {
    let row = averaging_stats(config, profile, &|_, _, _| 0.0, 1)?;
    Ok((row.local_time_moment, row.local_time_moment_se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProfileFamily;

    fn unit() -> TubeProfile {
        TubeProfile::constant(1.0, -50.0, 50.0).unwrap()
    }

    fn sloped(s: f64) -> TubeProfile {
        TubeProfile::new(
            ProfileFamily::Affine {
                lower: -0.5,
                lower_slope: 0.0,
                upper: 0.5,
                upper_slope: s,
            },
            -1.5,
            1.5,
        )
        .unwrap()
    }

    #[test]
    fn interior_step_is_unchanged() {
        let out = step_reflect(State { x: 0.0, y: 0.0 }, 0.01, 0.02, &unit(), 0.1).unwrap();
        assert_eq!(out.state, State { x: 0.01, y: 0.02 });
        assert_eq!(out.delta_l, 0.0);
        assert!(out.side.is_none());
    }

    #[test]
    fn flat_upper_overshoot() {
        let eps = 0.1;
        let delta = 0.003;
        let out = step_reflect(State { x: 0.0, y: 0.04 }, 0.0, 0.01 + delta, &unit(), eps).unwrap();
        assert_eq!(out.side, Some(Side::Upper));
        assert!((out.state.y - 0.05).abs() < 1e-15);
        assert!((out.delta_l - delta).abs() < 1e-15);
        assert_eq!(out.gamma2_abs, 1.0);
    }

    #[test]
    fn sloped_projection_matches_line_projection() {
        let s = 0.3;
        let eps = 0.5;
        let p = sloped(s);
        let (px, py) = (0.4, eps * (0.5 + s * 0.4) + 0.01);
        let out = step_reflect(State { x: 0.4, y: py - 0.02 }, 0.0, 0.02, &p, eps).unwrap();
        // Line y = eps*0.5 + m x with m = eps*s; foot of the perpendicular.
        let m = eps * s;
        let b = eps * 0.5;
        let t = (px + m * (py - b)) / (1.0 + m * m);
        let foot = (t, b + m * t);
        let dist = (py - b - m * px).abs() / (1.0 + m * m).sqrt();
        assert!((out.state.x - foot.0).abs() < 1e-12);
        assert!((out.state.y - foot.1).abs() < 1e-12);
        assert!((out.delta_l - dist).abs() < 1e-12);
        assert!((out.gamma2_abs - 1.0 / (1.0 + m * m).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn overshoot_beyond_width_is_step_error() {
        let err = step_reflect(State { x: 0.0, y: 0.0 }, 0.0, 0.5, &unit(), 0.1).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
    }

    #[test]
    fn config_validation() {
        let p = unit();
        let good = SimConfig::for_epsilon(&p, 0.1, 0.01, 1.0, 0.0, 1, 10).unwrap();
        assert!((good.dt - 1e-4).abs() < 1e-18);
        let mut bad = good;
        bad.dt = 0.01;
        assert!(bad.validate(&p).is_err());
        let mut bad = good;
        bad.start = (0.0, 0.05);
        assert!(bad.validate(&p).is_err());
        let mut bad = good;
        bad.epsilon = 1.5;
        assert!(bad.validate(&p).is_err());
    }

    #[test]
    fn zero_noise_path_is_constant() {
        let p = unit();
        let cfg = SimConfig::for_epsilon(&p, 0.2, 0.01, 0.5, 0.3, 1, 1).unwrap();
        let path = simulate_reflected_with(&cfg, &p, &mut ZeroIncrements).unwrap();
        assert!(path.xs.iter().all(|&x| x == 0.3));
        assert!(path.local_time.iter().all(|&l| l == 0.0));
        assert!(path.events.is_empty());
    }

    #[test]
    fn seeded_paths_are_identical() {
        let p = sloped(0.2);
        let cfg = SimConfig::for_epsilon(&p, 0.2, 0.01, 0.3, 0.0, 17, 1).unwrap();
        let a = simulate_reflected(&cfg, &p).unwrap();
        let b = simulate_reflected(&cfg, &p).unwrap();
        assert_eq!(a, b);
        assert!(!a.events.is_empty());
        let c = simulate_reflected_path(&cfg, &p, 1).unwrap();
        assert_ne!(a.xs, c.xs);
    }

    #[test]
    fn path_invariants() {
        let p = sloped(0.25);
        let cfg = SimConfig::for_epsilon(&p, 0.3, 0.02, 0.5, 0.0, 5, 1).unwrap();
        let path = simulate_reflected(&cfg, &p).unwrap();
        for w in path.local_time.windows(2) {
            assert!(w[1] >= w[0]);
        }
        let contact: std::collections::HashSet<usize> = path.events.iter().map(|e| e.step).collect();
        for k in 1..path.local_time.len() {
            if path.local_time[k] > path.local_time[k - 1] {
                assert!(contact.contains(&k));
            }
        }
        for (x, y) in path.xs.iter().zip(&path.ys) {
            let s = p.section_clamped(*x).0;
            assert!(*y >= cfg.epsilon * s.lower.value - 1e-12);
            assert!(*y <= cfg.epsilon * s.upper.value + 1e-12);
        }
        assert!(path.events.iter().all(|e| e.delta_l > 0.0));
    }

    #[test]
    fn local_time_integral_cases() {
        let p = unit();
        let cfg = SimConfig::for_epsilon(&p, 0.2, 0.01, 0.5, 0.0, 3, 1).unwrap();
        let path = simulate_reflected(&cfg, &p).unwrap();
        assert_eq!(local_time_integral(&path, |_, _, _| 0.0, 0.2), 0.0);
        assert_eq!(local_time_integral(&path, p.normal_ratio_fn(), 0.2), 0.0);
        let one = local_time_integral(&path, |_, _, _| 1.0, 0.2);
        assert!((one - 0.2 * path.local_time.last().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn zero_observable_has_zero_error() {
        let p = unit();
        let cfgs: Vec<_> = [0.4, 0.2]
            .iter()
            .map(|&e| SimConfig::for_epsilon(&p, e, 0.01, 0.2, 0.0, 9, 64).unwrap())
            .collect();
        let rows = averaging_error(&cfgs, &p, |_, _, _| 0.0, 10).unwrap();
        assert!(rows.iter().all(|r| r.mean_square_error == 0.0 && r.functional_mean == 0.0));
    }

    #[test]
    fn zero_horizon_moment_is_zero() {
        let p = unit();
        let cfg = SimConfig::for_epsilon(&p, 0.2, 0.01, 0.0, 0.0, 1, 32).unwrap();
        assert_eq!(local_time_moment(&cfg, &p).unwrap().0, 0.0);
    }

    #[test]
    fn checkpoint_grid() {
        assert_eq!(checkpoints(10, 5), vec![2, 4, 6, 8, 10]);
        assert_eq!(checkpoints(3, 10), vec![1, 2, 3]);
        assert_eq!(*checkpoints(1000, 7).last().unwrap(), 1000);
    }
}
