//! Stationary random media: environment sampling, the exponent `μ(z)`, the
//! asymptotic front speed `ν*` and its comparison with PDE fronts.
//!
//! An environment is a random-phase Fourier field
//! `log V(x) = Σ a_j cos(ω_j x + θ_j)` with `ω_j = ω₀ √p_j` (`p_j` distinct
//! primes, so the frequencies are rationally independent) and a rate
//! `c(x) = max(c₀ + (r/n) Σ cos(ω_j x + φ_j), κ)`. The reduced rate is
//! `c̄ = (S/2V) c = c / V`.
//!
//! `μ(z) = E ln E₁[χ_{τ₀<∞} exp ∫₀^{τ₀} (c̄(X_s) + z) ds]` where `X` is the
//! reduced diffusion started at 1 and `τ₀` its hitting time of 0. Estimates
//! over a `z`-grid reuse the same paths for every `z`, so each estimated
//! curve is exactly convex and nondecreasing in `z`.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::ensemble;
use crate::error::{Error, Result};
use crate::geometry::{FourierSeries, ProfileFamily, TubeProfile};
use crate::pde::{front_position, front_speed, solve_limit_1d, FrontSample, Grid, Rate, Reaction, ReactionKind};
use crate::rng::{self, Domain};
use crate::stats::Accumulator;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSpec {
    pub seed: u64,
    pub n_modes: usize,
    /// Base frequency `ω₀`.
    #[serde(default = "one")]
    pub omega0: f64,
    /// `Σ |a_j|`, split evenly over the modes.
    pub amplitude: f64,
    /// Upper bound imposed on `Σ |a_j ω_j|`.
    #[serde(default = "default_slope_bound")]
    pub slope_bound: f64,
    pub c0: f64,
    /// Amplitude of the rate fluctuation.
    #[serde(default)]
    pub rate_amplitude: f64,
    /// Positivity floor `κ` for the rate.
    #[serde(default = "default_kappa")]
    pub kappa: f64,
}

fn one() -> f64 {
    1.0
}

fn default_slope_bound() -> f64 {
    5.0
}

fn default_kappa() -> f64 {
    0.05
}

impl EnvironmentSpec {
    /// Homogeneous medium `V ≡ 1`, `c ≡ c₀`.
    pub fn constant(c0: f64, seed: u64) -> Self {
        EnvironmentSpec {
            seed,
            n_modes: 0,
            omega0: 1.0,
            amplitude: 0.0,
            slope_bound: default_slope_bound(),
            c0,
            rate_amplitude: 0.0,
            kappa: default_kappa().min(c0),
        }
    }

    pub fn frequencies(&self) -> Vec<f64> {
        PRIMES[..self.n_modes].iter().map(|&p| self.omega0 * (p as f64).sqrt()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes > PRIMES.len() {
            return Err(Error::Parameter(format!("at most {} modes are supported", PRIMES.len())));
        }
        if !(self.c0 > 0.0 && self.kappa > 0.0 && self.kappa <= self.c0) {
            return Err(Error::Parameter(format!(
                "need c0 > 0 and 0 < kappa <= c0, got c0 = {}, kappa = {}",
                self.c0, self.kappa
            )));
        }
        if !(self.amplitude >= 0.0 && self.rate_amplitude >= 0.0 && self.omega0 > 0.0) {
            return Err(Error::Parameter("amplitudes and omega0 must be nonnegative / positive".into()));
        }
        if self.n_modes == 0 && (self.amplitude > 0.0 || self.rate_amplitude > 0.0) {
            return Err(Error::Parameter("nonzero amplitudes need at least one mode".into()));
        }
        let slope: f64 = self.frequencies().iter().map(|w| w * self.amplitude / self.n_modes.max(1) as f64).sum();
        if slope > self.slope_bound {
            return Err(Error::Parameter(format!(
                "sum |a_j w_j| = {slope} exceeds the slope bound {}",
                self.slope_bound
            )));
        }
        Ok(())
    }
}

/// One realization of the medium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub spec: EnvironmentSpec,
    pub index: u64,
    pub log_v: FourierSeries,
    pub rate: FourierSeries,
    pub v_min: f64,
    pub v_max: f64,
    pub c_min: f64,
    pub c_max: f64,
    /// Fraction of samples on `[0, 10³]` where the rate floor `κ` was active.
    pub clip_fraction: f64,
    pub warnings: Vec<String>,
}

impl Environment {
    #[inline]
    pub fn volume(&self, x: f64) -> f64 {
        self.log_v.eval(x).0.exp()
    }

    /// `½ (log V)'`.
    #[inline]
    pub fn drift(&self, x: f64) -> f64 {
        0.5 * self.log_v.eval(x).1
    }

    #[inline]
    pub fn rate_at(&self, x: f64) -> f64 {
        (self.spec.c0 + self.rate.eval(x).0).max(self.spec.kappa)
    }

    /// `c̄(x) = c(x) / V(x)`.
    #[inline]
    pub fn cbar(&self, x: f64) -> f64 {
        self.rate_at(x) / self.volume(x)
    }

    pub fn cbar_max(&self) -> f64 {
        self.c_max / self.v_min
    }

    pub fn cbar_min(&self) -> f64 {
        self.c_min / self.v_max
    }

    /// Symmetric strip with width `V` on `[x_lo, x_hi]`.
    pub fn profile(&self, x_lo: f64, x_hi: f64) -> Result<TubeProfile> {
        TubeProfile::new(ProfileFamily::RandomRealization(self.log_v.clone()), x_lo, x_hi)
    }

    /// KPP reaction `c(x) (1 − u)`.
    pub fn reaction(&self) -> Reaction {
        let env = self.clone();
        Reaction::with_rate(
            ReactionKind::Kpp,
            Rate::from_fn(move |x| env.rate_at(x), self.c_min, self.c_max, format!("env#{}", self.index)),
        )
    }
}

/// Draws realization `index` of the medium described by `spec`.
pub fn sample_environment(spec: &EnvironmentSpec, index: u64) -> Result<Environment> {
    spec.validate()?;
    let mut rng = rng::substream(spec.seed, Domain::Environment, &[index], 0);
    let n = spec.n_modes;
    let freqs = spec.frequencies();
    let phases_v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
    let phases_c: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
    let per = |total: f64| vec![total / n.max(1) as f64; n];
    let log_v = FourierSeries {
        base: 1.0,
        amplitudes: per(spec.amplitude),
        frequencies: freqs.clone(),
        phases: phases_v,
    };
    let rate = FourierSeries {
        base: 1.0,
        amplitudes: per(spec.rate_amplitude),
        frequencies: freqs,
        phases: phases_c,
    };
    let a = log_v.amplitude_bound();
    let r = rate.amplitude_bound();
    let samples = 100_000;
    let clipped = (0..samples)
        .filter(|&i| spec.c0 + rate.eval(i as f64 * 1e-2).0 < spec.kappa)
        .count();
    let clip_fraction = clipped as f64 / samples as f64;
    let mut warnings = Vec::new();
    if clipped > 0 {
        warnings.push(format!(
            "rate floor kappa = {} active on {:.3}% of [0, 1000]",
            spec.kappa,
            100.0 * clip_fraction
        ));
    }
    Ok(Environment {
        spec: spec.clone(),
        index,
        log_v,
        rate,
        v_min: (-a).exp(),
        v_max: a.exp(),
        c_min: (spec.c0 - r).max(spec.kappa),
        c_max: spec.c0 + r,
        clip_fraction,
        warnings,
    })
}

/// `(z, ∫₀^z V⁻¹ dx)` at `z ∈ {10, 10², 10³, z_max}` (those not above
/// `z_max`), by composite Simpson quadrature. Fails with [`Error::Data`] if the
/// table is not strictly increasing or drops below `z / V_max`.
pub fn check_drift_condition(env: &Environment, z_max: f64) -> Result<Vec<(f64, f64)>> {
    let mut marks: Vec<f64> = [10.0, 100.0, 1000.0].into_iter().filter(|&z| z < z_max).collect();
    marks.push(z_max);
    let h = 0.01;
    let mut table = Vec::with_capacity(marks.len());
    let mut total = 0.0;
    let mut from = 0.0;
    for &z in &marks {
        let n = (((z - from) / h).ceil() as usize).max(1) * 2;
        let step = (z - from) / n as f64;
        let f = |x: f64| 1.0 / env.volume(x);
        let mut s = f(from) + f(z);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(from + i as f64 * step);
        }
        total += s * step / 3.0;
        from = z;
        table.push((z, total));
    }
    for w in table.windows(2) {
        if !(w[1].1 > w[0].1) {
            return Err(Error::Data(format!("drift integral not increasing: {table:?}")));
        }
    }
    if let Some(&(z, v)) = table.iter().find(|(z, v)| *v < z / env.v_max * (1.0 - 1e-9)) {
        return Err(Error::Data(format!("integral {v} at z = {z} is below z / V_max")));
    }
    Ok(table)
}

/// Monte Carlo settings for `μ(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuConfig {
    pub n_paths: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_cap")]
    pub t_cap: f64,
    pub seed: u64,
}

fn default_dt() -> f64 {
    0.01
}

fn default_cap() -> f64 {
    1000.0
}

/// Hitting time of the shifted origin and the accumulated `∫ c̄ ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Hit {
    tau: f64,
    integral: f64,
}

/// Tabulated drift and `c̄` for fast path simulation.
struct Table {
    lo: f64,
    inv_dx: f64,
    drift: Vec<f64>,
    cbar: Vec<f64>,
}

impl Table {
    fn new(env: &Environment, lo: f64, hi: f64) -> Self {
        let dx = 2e-3;
        let n = ((hi - lo) / dx).ceil() as usize + 2;
        let xs = (0..n).map(|i| lo + i as f64 * dx);
        Table {
            lo,
            inv_dx: 1.0 / dx,
            drift: xs.clone().map(|x| env.drift(x)).collect(),
            cbar: xs.map(|x| env.cbar(x)).collect(),
        }
    }

    #[inline]
    fn at(&self, env: &Environment, x: f64) -> (f64, f64) {
        let s = (x - self.lo) * self.inv_dx;
        if s >= 0.0 && s < (self.drift.len() - 1) as f64 {
            let i = s as usize;
            let w = s - i as f64;
            (
                self.drift[i] + w * (self.drift[i + 1] - self.drift[i]),
                self.cbar[i] + w * (self.cbar[i + 1] - self.cbar[i]),
            )
        } else {
            (env.drift(x), env.cbar(x))
        }
    }
}

/// Paths of the reduced diffusion from `shift + 1` until they hit `shift`,
/// with a Brownian-bridge crossing test between grid times.
fn hitting_samples(env: &Environment, shift: f64, cfg: &MuConfig, key: &[u64]) -> Vec<Option<Hit>> {
    let reach = 8.0 * cfg.t_cap.sqrt() + 10.0;
    let table = Table::new(env, shift - 1.0, shift + 1.0 + reach);
    let sd = cfg.dt.sqrt();
    let max_steps = (cfg.t_cap / cfg.dt).ceil() as usize;
    let chunks = ensemble::chunked(cfg.n_paths, |range| {
        range
            .map(|p| {
                let mut rng = rng::substream(cfg.seed, Domain::Mu, key, p as u64);
                let mut y = 1.0;
                let (mut drift, mut cb) = table.at(env, shift + y);
                let mut integral = 0.0;
                for k in 0..max_steps {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let y_next = y + drift * cfg.dt + sd * z;
                    let t = k as f64 * cfg.dt;
                    if y_next <= 0.0 {
                        let frac = y / (y - y_next);
                        return Some(Hit {
                            tau: t + frac * cfg.dt,
                            integral: integral + cb * frac * cfg.dt,
                        });
                    }
                    let u: f64 = rng.gen();
                    if u < (-2.0 * y * y_next / cfg.dt).exp() {
                        return Some(Hit {
                            tau: t + 0.5 * cfg.dt,
                            integral: integral + 0.5 * cb * cfg.dt,
                        });
                    }
                    let (d, c) = table.at(env, shift + y_next);
                    integral += 0.5 * (cb + c) * cfg.dt;
                    y = y_next;
                    drift = d;
                    cb = c;
                }
                None
            })
            .collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().collect()
}

/// `ln` of the sample mean of `exp(I + z τ)` (zero for paths without a hit),
/// its delta-method standard error and the hit count.
fn log_mean(hits: &[Option<Hit>], z: f64, use_rate: bool) -> (f64, f64, usize) {
    let expo = |h: &Hit| if use_rate { h.integral } else { 0.0 } + z * h.tau;
    let m = hits.iter().flatten().map(expo).fold(f64::NEG_INFINITY, f64::max);
    let n_hits = hits.iter().flatten().count();
    if n_hits == 0 {
        return (f64::NEG_INFINITY, f64::INFINITY, 0);
    }
    let mut acc = Accumulator::new();
    for h in hits {
        acc.push(h.map_or(0.0, |h| (expo(&h) - m).exp()));
    }
    let rel = acc.std_error() / acc.mean;
    (m + acc.mean.ln(), rel, n_hits)
}

/// One point of an estimated `μ` curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuPoint {
    pub z: f64,
    /// `None` when the estimator failed at this `z`.
    pub mu: Option<f64>,
    pub std_error: f64,
    /// Smallest hit count over the environments.
    pub n_hits: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuCurve {
    pub points: Vec<MuPoint>,
    /// Whether `c̄` entered the exponent (`false` gives `μ₀`).
    pub with_rate: bool,
}

impl MuCurve {
    pub fn finite(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.points.iter().filter_map(|p| p.mu.map(|m| (p.z, m, p.std_error)))
    }
}

fn curve_from_samples(samples: &[Vec<Option<Hit>>], zs: &[f64], with_rate: bool) -> MuCurve {
    let points = zs
        .iter()
        .map(|&z| {
            let per: Vec<(f64, f64, usize)> = samples.iter().map(|h| log_mean(h, z, with_rate)).collect();
            let n_hits = per.iter().map(|p| p.2).min().unwrap_or(0);
            let failure = if n_hits < 10 {
                Some(format!("only {n_hits} hits"))
            } else if let Some(p) = per.iter().find(|p| p.0 >= 0.0) {
                Some(format!("log-mean {} is nonnegative (exponent not integrable)", p.0))
            } else {
                per.iter()
                    .find(|p| !(p.1 <= 0.5))
                    .map(|p| format!("relative standard error {} above 0.5", p.1))
            };
            let k = per.len() as f64;
            let mean = per.iter().map(|p| p.0).sum::<f64>() / k;
            let std_error = if per.len() >= 2 {
                let acc: Accumulator = per.iter().map(|p| p.0).collect();
                acc.std_error()
            } else {
                per[0].1
            };
            MuPoint {
                z,
                mu: failure.is_none().then_some(mean),
                std_error,
                n_hits,
                failure,
            }
        })
        .collect();
    MuCurve { points, with_rate }
}

/// Paths for environments `0..k_envs` (ensemble average over the medium).
fn ensemble_samples(spec: &EnvironmentSpec, k_envs: usize, cfg: &MuConfig) -> Result<Vec<Vec<Option<Hit>>>> {
    if k_envs == 0 || cfg.n_paths == 0 || !(cfg.dt > 0.0 && cfg.t_cap > cfg.dt) {
        return Err(Error::Config(format!("invalid mu estimation settings: {k_envs} environments, {cfg:?}")));
    }
    (0..k_envs as u64)
        .map(|k| Ok(hitting_samples(&sample_environment(spec, k)?, 0.0, cfg, &[k, 0])))
        .collect()
}

/// `μ̂(z)` averaged over `k_envs` sampled environments.
///
/// Requires `z < 0` and `z + sup c̄ < 0`; fails with [`Error::Unreliable`]
/// when an environment records fewer than 10 hits or a diverging mean.
pub fn estimate_mu(spec: &EnvironmentSpec, z: f64, k_envs: usize, cfg: &MuConfig) -> Result<(f64, f64)> {
    let sup = (0..k_envs as u64)
        .map(|k| sample_environment(spec, k).map(|e| e.cbar_max()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if !(z < 0.0 && z + sup < 0.0) {
        return Err(Error::Parameter(format!("need z < 0 and z + sup c̄ < 0 (z = {z}, sup c̄ = {sup})")));
    }
    let curve = curve_from_samples(&ensemble_samples(spec, k_envs, cfg)?, &[z], true);
    let p = &curve.points[0];
    match (p.mu, &p.failure) {
        (Some(m), _) => Ok((m, p.std_error)),
        (None, Some(f)) => Err(Error::Unreliable(f.clone())),
        (None, None) => unreachable!(),
    }
}

/// `μ̂` on a `z`-grid over `k_envs` environments with common random numbers.
/// Failed points are kept with a failure marker. With `with_rate = false`
/// this estimates `μ₀` (no `c̄` in the exponent) from the same paths.
pub fn mu_curve(spec: &EnvironmentSpec, zs: &[f64], k_envs: usize, cfg: &MuConfig, with_rate: bool) -> Result<MuCurve> {
    Ok(curve_from_samples(&ensemble_samples(spec, k_envs, cfg)?, zs, with_rate))
}

/// `μ̂` from a single environment, averaging over the translates
/// `x ↦ x + shift_k`; by ergodicity this targets the same `μ`.
pub fn mu_curve_translates(env: &Environment, shifts: &[f64], zs: &[f64], cfg: &MuConfig) -> Result<MuCurve> {
    if shifts.is_empty() || cfg.n_paths == 0 {
        return Err(Error::Config("need at least one translate and one path".into()));
    }
    let samples: Vec<Vec<Option<Hit>>> = shifts
        .iter()
        .enumerate()
        .map(|(k, &s)| hitting_samples(env, s, cfg, &[env.index, 1, k as u64]))
        .collect();
    Ok(curve_from_samples(&samples, zs, true))
}

/// Bracket `[last finite z, first failed z]` for the blow-up threshold `ḡ`.
pub fn estimate_gbar(curve: &MuCurve) -> Result<(f64, f64)> {
    let mut pts: Vec<&MuPoint> = curve.points.iter().collect();
    pts.sort_by(|a, b| a.z.total_cmp(&b.z));
    let last_finite = pts.iter().rposition(|p| p.mu.is_some());
    match last_finite {
        None => Err(Error::Inconclusive("every z on the grid failed".into())),
        Some(i) if i + 1 == pts.len() => Err(Error::Inconclusive("no failure on the grid; extend it upwards".into())),
        Some(i) => Ok((pts[i].z, pts[i + 1].z)),
    }
}

/// `ν* = min z/μ(z)` over the finite part of the curve, refined by a
/// parabola through the grid minimum and its neighbours. Returns `(ν*, z*)`.
pub fn compute_nu_star(curve: &MuCurve) -> Result<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = curve.finite().map(|(z, m, _)| (z, m)).collect();
    if let Some(&(z, m)) = pts.iter().find(|(_, m)| *m >= 0.0) {
        return Err(Error::Data(format!("mu({z}) = {m} is not negative")));
    }
    if pts.is_empty() {
        return Err(Error::Data("no finite mu values".into()));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ratio: Vec<f64> = pts.iter().map(|(z, m)| z / m).collect();
    let i = ratio
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if i == 0 || i + 1 == pts.len() {
        return Ok((ratio[i], pts[i].0));
    }
    let (x0, x1, x2) = (pts[i - 1].0, pts[i].0, pts[i + 1].0);
    let (y0, y1, y2) = (ratio[i - 1], ratio[i], ratio[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a > 0.0) {
        return Ok((y1, x1));
    }
    let b = d01 - a * (x0 + x1);
    let zv = (-b / (2.0 * a)).clamp(x0, x2);
    let v = y1 + (zv - x1) * (d01 + a * (zv - x0));
    Ok((v.min(y1), zv))
}

/// Result of [`empirical_front_speed`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalFront {
    pub speed: f64,
    pub samples: Vec<FrontSample>,
    /// `(t, u(t, x₀ + ν t))` for the probe speed, when requested.
    pub probe: Vec<(f64, f64)>,
}

/// Solves the reduced KPP equation in the realized medium from step data
/// `u₀ = 1` on `x ≤ x_start`, tracks the ½-level set and regresses its
/// position over `t_window`. With `probe_speed = Some(ν)` the solution is also
/// sampled along `x = x_start + ν t`.
pub fn empirical_front_speed(
    env: &Environment,
    grid: &Grid,
    x_start: f64,
    t_window: (f64, f64),
    probe_speed: Option<f64>,
) -> Result<EmpiricalFront> {
    let profile = env.profile(grid.x.lo, grid.x.hi)?;
    let field = solve_limit_1d(&profile, &env.reaction(), |x| if x <= x_start { 1.0 } else { 0.0 }, grid)?;
    let samples = front_position(&field, 0.5);
    let speed = front_speed(&samples, t_window.0, t_window.1)?;
    let probe = match probe_speed {
        Some(nu) => field
            .times
            .iter()
            .filter(|&&t| t >= t_window.0 && t <= t_window.1)
            .map(|&t| {
                let x = (x_start + nu * t).min(grid.x.hi);
                field.interp_1d(t, x).map(|u| (t, u))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(EmpiricalFront { speed, samples, probe })
}
