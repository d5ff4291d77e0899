//! Monte Carlo evaluation of the nonlinear Feynman–Kac representations.
//!
//! Limit problem: `u(t, x) = E_x f(X_t) exp ∫₀ᵗ c̄(X_s, u(t − s, X_s)) ds`
//! with `c̄(x, u) = ½ (S/V)(x) c(x, 0, u)` and `X` the reduced diffusion.
//! Strip problem: `u^ε(t, x, y) = E f(X^ε_t, Y^ε_t) exp ∫₀ᵗ ε c(·, u^ε(t − s, ·)) dL^ε_s`.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble;
use crate::error::{Error, Result};
use crate::geometry::TubeProfile;
use crate::pde::{Field, FieldMeta, Grid, Reaction, ReactionKind};
use crate::reflected_sde::{walk, GaussianIncrements, State};
use crate::rng::{self, Domain};
use crate::stats::Accumulator;

/// Monte Carlo settings for a probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FkConfig {
    pub n_paths: usize,
    /// Upper bound on the Euler step; shrunk to divide `t`.
    pub dt: f64,
    pub seed: u64,
}

impl FkConfig {
    fn validate(&self) -> Result<()> {
        if self.n_paths < 2 || !(self.dt > 0.0) {
            return Err(Error::Config(format!(
                "Feynman-Kac probe needs n_paths >= 2 and dt > 0, got {} and {}",
                self.n_paths, self.dt
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FkEstimate {
    pub t: f64,
    pub x: f64,
    pub y: Option<f64>,
    pub estimate: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

fn depends_on_u(reaction: &Reaction) -> bool {
    matches!(reaction.kind, ReactionKind::Kpp | ReactionKind::Bistable { .. })
}

fn steps_for(t: f64, dt: f64) -> (usize, f64) {
    if t <= 0.0 {
        return (0, 0.0);
    }
    let n = (t / dt * (1.0 - 1e-12)).ceil() as usize;
    (n, t / n as f64)
}

/// How table lookups treat abscissae outside the table.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Lookup {
    Strict,
    Clamp,
}

fn lookup_1d(table: &Field, t: f64, x: f64, mode: Lookup) -> Result<f64> {
    let x = match mode {
        Lookup::Strict => x,
        Lookup::Clamp => x.clamp(table.grid.x.lo, table.grid.x.hi),
    };
    table.interp_1d(t, x)
}

/// `f(X_t) exp ∫ c̄` along one reduced path, trapezoid rule in time.
/// `table = None` freezes `c̄` to zero.
#[allow(clippy::too_many_arguments)]
fn limit_sample<F: Fn(f64) -> f64>(
    t: f64,
    x0: f64,
    table: Option<(&Field, Lookup)>,
    profile: &TubeProfile,
    reaction: &Reaction,
    f: &F,
    dt: f64,
    rng: &mut rng::Rng,
) -> Result<f64> {
    let (n, h) = steps_for(t, dt);
    let sd = h.sqrt();
    let uses_u = depends_on_u(reaction);
    let rate = |s: f64, x: f64| -> Result<f64> {
        let Some((tab, mode)) = table else { return Ok(0.0) };
        let u = if uses_u { lookup_1d(tab, t - s, x, mode)? } else { 0.0 };
        Ok(0.5 * profile.surface_ratio_clamped(x) * reaction.c(x, 0.0, u))
    };
    let mut x = x0;
    let mut g = rate(0.0, x)?;
    let mut expo = 0.0;
    for k in 1..=n {
        let z: f64 = StandardNormal.sample(rng);
        x += profile.drift_clamped(x).0 * h + sd * z;
        let g_next = rate(k as f64 * h, x)?;
        expo += 0.5 * h * (g + g_next);
        g = g_next;
    }
    Ok(f(x) * expo.exp())
}

/// Estimate of `u(t, x)` for the reduced equation, with `u` inside the
/// exponent read from `u_table` (linear in time and space). Fails with
/// [`Error::OutsideDomain`] when a path leaves the table.
pub fn fk_limit_estimate<F>(
    t: f64,
    x: f64,
    u_table: &Field,
    profile: &TubeProfile,
    reaction: &Reaction,
    f: F,
    cfg: &FkConfig,
) -> Result<FkEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    if u_table.is_2d() {
        return Err(Error::Config("the reduced representation needs a 1-D table".into()));
    }
    let chunks = ensemble::chunked(cfg.n_paths, |range| -> Result<Accumulator> {
        let mut acc = Accumulator::new();
        for p in range {
            let mut rng = rng::substream(cfg.seed, Domain::FkLimit, &[], p as u64);
            acc.push(limit_sample(t, x, Some((u_table, Lookup::Strict)), profile, reaction, &f, cfg.dt, &mut rng)?);
        }
        Ok(acc)
    });
    let acc = merge(chunks)?;
    Ok(FkEstimate {
        t,
        x,
        y: None,
        estimate: acc.mean,
        std_error: acc.std_error(),
        n_paths: cfg.n_paths,
    })
}

fn merge(chunks: Vec<Result<Accumulator>>) -> Result<Accumulator> {
    let mut acc = Accumulator::new();
    for c in chunks {
        acc.merge(&c?);
    }
    Ok(acc)
}

/// Settings for [`picard_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub fk: FkConfig,
    /// Stop once the sup-norm change between iterates drops below `tol`.
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardSolution {
    pub field: Field,
    /// Standard errors of the final iterate, laid out like `field.values`.
    pub std_errors: Vec<f64>,
    /// Sup-norm change after each iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
}

/// Fixed-point iteration of the reduced representation on the snapshot
/// table of `grid`. Iterate `0` freezes `c̄` to zero; each point reuses the
/// same paths in every iteration, so a `u`-independent rate reaches its
/// fixed point after two passes. Paths leaving the table read its edge
/// values.
pub fn picard_solve<F>(
    profile: &TubeProfile,
    reaction: &Reaction,
    f: F,
    grid: &Grid,
    cfg: &PicardConfig,
) -> Result<PicardSolution>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.fk.validate()?;
    grid.validate()?;
    if grid.n_eta.is_some() {
        return Err(Error::Config("picard_solve works on a 1-D grid".into()));
    }
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
        return Err(Error::Config(format!(
            "need tol > 0 and max_iter >= 1, got {} and {}",
            cfg.tol, cfg.max_iter
        )));
    }
    let times = grid.snapshot_times();
    let nx = grid.x.n;
    let xs = grid.x.nodes();
    let points: Vec<(usize, usize)> = (0..times.len()).flat_map(|i| (0..nx).map(move |j| (i, j))).collect();

    let pass = |table: Option<&Field>| -> Result<(Vec<f64>, Vec<f64>)> {
        let out: Vec<Result<(f64, f64)>> = points
            .par_iter()
            .map(|&(i, j)| {
                if i == 0 {
                    return Ok((f(xs[j]), 0.0));
                }
                let mut acc = Accumulator::new();
                for p in 0..cfg.fk.n_paths {
                    let mut rng = rng::substream(cfg.fk.seed, Domain::Picard, &[i as u64, j as u64], p as u64);
                    let tab = table.map(|t| (t, Lookup::Clamp));
                    acc.push(limit_sample(times[i], xs[j], tab, profile, reaction, &f, cfg.fk.dt, &mut rng)?);
                }
                Ok((acc.mean, acc.std_error()))
            })
            .collect();
        let mut values = Vec::with_capacity(out.len());
        let mut errs = Vec::with_capacity(out.len());
        for r in out {
            let (v, e) = r?;
            values.push(v);
            errs.push(e);
        }
        Ok((values, errs))
    };

    let meta = FieldMeta {
        profile: profile.family.tag().to_string(),
        epsilon: None,
        reaction: reaction.label(),
    };
    let (values, _) = pass(None)?;
    let mut field = Field {
        grid: *grid,
        times: times.clone(),
        values,
        meta,
    };
    let mut history = Vec::new();
    for it in 1..=cfg.max_iter {
        let (next, errs) = pass(Some(&field))?;
        let change = next
            .iter()
            .zip(&field.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if !change.is_finite() {
            return Err(Error::Numeric {
                step: it,
                reason: "Picard iterate is not finite".into(),
            });
        }
        field.values = next;
        history.push(change);
        if change < cfg.tol {
            return Ok(PicardSolution {
                field,
                std_errors: errs,
                history,
                iterations: it,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        history,
    })
}

/// Settings for [`fk_eps_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FkEpsConfig {
    pub epsilon: f64,
    pub n_paths: usize,
    /// Step factor: `dt = kappa (ε V_min)²`, then shrunk to divide `t`.
    pub kappa: f64,
    pub seed: u64,
}

/// Estimate of `u^ε(t, x, y)` from reflected paths, with `u^ε` in the
/// boundary exponent read from the strip table `u_table`.
#[allow(clippy::too_many_arguments)]
pub fn fk_eps_estimate<F>(
    t: f64,
    x: f64,
    y: f64,
    profile: &TubeProfile,
    reaction: &Reaction,
    u_table: &Field,
    f: F,
    cfg: &FkEpsConfig,
) -> Result<FkEstimate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let eps = cfg.epsilon;
    if !(eps > 0.0 && eps <= 1.0) || cfg.n_paths < 2 || !(cfg.kappa > 0.0 && cfg.kappa <= 0.25) {
        return Err(Error::Config(format!("invalid strip probe settings {cfg:?}")));
    }
    if !u_table.is_2d() {
        return Err(Error::Config("the strip representation needs a 2-D table".into()));
    }
    let s = profile.section(x)?;
    if !(y > eps * s.lower.value && y < eps * s.upper.value) {
        return Err(Error::Parameter(format!("({x}, {y}) is not inside the strip")));
    }
    let (n, h) = steps_for(t, cfg.kappa * (eps * profile.v_min()).powi(2));
    let uses_u = depends_on_u(reaction);
    let lookup = |s: f64, px: f64, py: f64| -> Result<f64> {
        if !uses_u {
            return Ok(0.0);
        }
        let (sec, _) = profile.section_clamped(px);
        let eta = (py / eps - sec.lower.value) / sec.volume();
        u_table.interp_2d(t - s, px, eta)
    };
    let chunks = ensemble::chunked(cfg.n_paths, |range| -> Result<Accumulator> {
        let mut acc = Accumulator::new();
        for p in range {
            let mut inc = GaussianIncrements::new(rng::substream(cfg.seed, Domain::FkEps, &[], p as u64), h);
            let mut expo = 0.0;
            let mut failure = None;
            let mut end = State { x, y };
            walk(profile, eps, State { x, y }, n, &mut inc, |k, out| {
                end = out.state;
                if out.side.is_none() || failure.is_some() {
                    return;
                }
                let (bx, by) = (out.state.x, out.state.y);
                match lookup(k as f64 * h, bx, by) {
                    Ok(u) => expo += eps * reaction.c(bx, by, u) * out.delta_l,
                    Err(e) => failure = Some(e),
                }
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            acc.push(f(end.x, end.y) * expo.exp());
        }
        Ok(acc)
    });
    let acc = merge(chunks)?;
    Ok(FkEstimate {
        t,
        x,
        y: Some(y),
        estimate: acc.mean,
        std_error: acc.std_error(),
        n_paths: cfg.n_paths,
    })
}

/// CSV probe report `t,x,y,estimate,std_error,n_paths` (`y` empty for the
/// reduced problem).
pub fn write_probe_csv<W: std::io::Write>(out: W, rows: &[FkEstimate]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
    w.write_record(["t", "x", "y", "estimate", "std_error", "n_paths"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            r.x.to_string(),
            r.y.map_or(String::new(), |y| y.to_string()),
            r.estimate.to_string(),
            r.std_error.to_string(),
            r.n_paths.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Config(format!("csv write failed: {e}")))?;
    Ok(())
}
