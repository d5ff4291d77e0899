//! One runner per module. Each returns its tables and a JSON summary.

use std::f64::consts::TAU;

use narrowfront_core::feynman_kac::{fk_eps_estimate, fk_limit_estimate, picard_solve, FkConfig, FkEpsConfig, PicardConfig};
use narrowfront_core::limit_sde::coupled_compare;
use narrowfront_core::pde::{
    front_position, front_speed, front_speed_log_corrected, reduction_gap, solve_limit_1d, solve_strip_2d, stable_dt_2d,
    FrontSample,
};
use narrowfront_core::random_media::{
    check_drift_condition, compute_nu_star, empirical_front_speed, estimate_gbar, mu_curve, mu_curve_translates,
    sample_environment, MuCurve,
};
use narrowfront_core::reflected_sde::averaging_error;
use narrowfront_core::rng::{self, Domain};
use narrowfront_core::wavefront::{
    bistable_profile_check, bistable_speed, compute_w_dp, example_cbar, jump_certificate, FrontResult, Intervals,
    StepProfile,
};
use narrowfront_core::{Axis, Grid, Reaction, SimConfig, TubeProfile};
use rand::Rng;
use serde::Serialize;

use crate::output::{json_bytes, num, opt, Outcome, Table};
use crate::scenario::{self, Cbar, Experiment, Scenario};
use crate::RunError;

type Result<T> = std::result::Result<T, RunError>;

/// Runs the experiment of a validated scenario.
pub fn run_experiment(sc: &Scenario, verbose: bool) -> Result<Outcome> {
    let log = |msg: &str| {
        if verbose {
            eprintln!("[{}] {msg}", sc.name);
        }
    };
    match &sc.experiment {
        Experiment::SdeAveraging(p) => averaging(sc, p, &log),
        Experiment::LimitCoupling(p) => coupling(sc, p, &log),
        Experiment::ReduceCompare(p) => reduce_compare(sc, p, &log),
        Experiment::FkProbe(p) => fk_probe(sc, p, &log),
        Experiment::FrontDp(p) => front_dp(sc, p, &log),
        Experiment::StepClosedForm(p) => step_closed_form(p, &log),
        Experiment::JumpCertify(p) => jump_certify(p, &log),
        Experiment::Bistable(p) => bistable(p, &log),
        Experiment::RandomMedia(p) => random_media(sc, p, &log),
        Experiment::FrontSpeed(p) => front_speed_run(sc, p, &log),
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn sim_configs(sc: &Scenario, profile: &TubeProfile, eps: &[f64], kappa: f64, horizon: f64, x0: f64, n: usize) -> Result<Vec<SimConfig>> {
    eps.iter()
        .map(|&e| SimConfig::for_epsilon(profile, e, kappa, horizon, x0, sc.seed, n).map_err(RunError::from))
        .collect()
}

fn averaging(sc: &Scenario, p: &scenario::Averaging, log: &dyn Fn(&str)) -> Result<Outcome> {
    let profile = sc.profile()?;
    let configs = sim_configs(sc, &profile, &p.epsilons, p.kappa, p.horizon, p.x0, p.n_paths)?;
    log(&format!("{} epsilons x {} paths", configs.len(), p.n_paths));
    let w = p.weight;
    let rows = averaging_error(&configs, &profile, move |_, _, _| w, p.n_check)?;
    let mut t = Table::new(&[
        "epsilon",
        "dt",
        "n_paths",
        "functional_mean",
        "functional_se",
        "drift_mean",
        "mean_square_error",
        "mean_square_error_se",
        "sup_time",
        "local_time_moment",
        "local_time_moment_se",
        "clamped_steps",
    ]);
    for r in &rows {
        t.row([
            num(r.epsilon),
            num(r.dt),
            r.n_paths.to_string(),
            num(r.functional_mean),
            num(r.functional_se),
            num(r.drift_mean),
            num(r.mean_square_error),
            num(r.mean_square_error_se),
            num(r.sup_time),
            num(r.local_time_moment),
            num(r.local_time_moment_se),
            r.clamped_steps.to_string(),
        ]);
    }
    let mse: Vec<f64> = rows.iter().map(|r| r.mean_square_error).collect();
    let moments: Vec<f64> = rows.iter().map(|r| r.local_time_moment).collect();
    let mut out = Outcome::default();
    out.add("averaging.csv", t.finish());
    out.note("mean_square_error_decreasing", strictly_decreasing(&mse));
    out.note(
        "local_time_moment_ratio",
        moments.iter().cloned().fold(0.0, f64::max) / moments.iter().cloned().fold(f64::INFINITY, f64::min),
    );
    Ok(out)
}

fn coupling(sc: &Scenario, p: &scenario::Coupling, log: &dyn Fn(&str)) -> Result<Outcome> {
    let profile = sc.profile()?;
    let configs = sim_configs(sc, &profile, &p.epsilons, p.kappa, p.horizon, p.x0, p.n_paths)?;
    log(&format!("{} epsilons x {} coupled paths", configs.len(), p.n_paths));
    let rows = coupled_compare(&configs, &profile, p.n_check)?;
    let mut series = Table::new(&["epsilon", "t", "mean_square_gap", "std_error"]);
    let mut sup = Table::new(&["epsilon", "dt", "n_paths", "sup_mean_square_gap", "sup_se", "sup_time", "max_abs_gap"]);
    for r in &rows {
        for &(t, g, se) in &r.series {
            series.row([num(r.epsilon), num(t), num(g), num(se)]);
        }
        sup.row([
            num(r.epsilon),
            num(r.dt),
            r.n_paths.to_string(),
            num(r.sup_mean_square_gap),
            num(r.sup_se),
            num(r.sup_time),
            num(r.max_abs_gap),
        ]);
    }
    let gaps: Vec<f64> = rows.iter().map(|r| r.sup_mean_square_gap).collect();
    let mut out = Outcome::default();
    out.add("coupling.csv", series.finish());
    out.add("coupling_sup.csv", sup.finish());
    out.note("sup_gap_decreasing", strictly_decreasing(&gaps));
    out.note("pathwise_zero", rows.iter().all(|r| r.max_abs_gap == 0.0));
    Ok(out)
}

fn u_bound(f: &dyn Fn(f64) -> f64, ax: &Axis) -> f64 {
    ax.nodes().iter().map(|&x| f(x).abs()).fold(1.0, f64::max)
}

fn reduce_compare(sc: &Scenario, p: &scenario::ReduceCompare, log: &dyn Fn(&str)) -> Result<Outcome> {
    let profile = sc.profile()?;
    let reaction = sc.reaction()?;
    let init = p.initial.clone();
    let f = move |x: f64| init.eval(x);
    let ax = Axis::with_spacing(profile.x_lo, profile.x_hi, p.dx)?;
    let (lo, hi) = p.window.unwrap_or((profile.x_lo, profile.x_hi));
    let reduced = solve_limit_1d(&profile, &reaction, &f, &Grid::new_1d(ax, p.t, p.dt, usize::MAX))?;
    let u_max = u_bound(&f, &ax);
    let mut t = Table::new(&["epsilon", "sup_gap"]);
    let mut gaps = Vec::new();
    for &eps in &p.epsilons {
        let dt = p.cfl_fraction * stable_dt_2d(&profile, eps, &reaction, &Grid::new_2d(ax, p.n_eta, p.t, 1.0, 1), u_max)?;
        log(&format!("strip solve at eps = {eps}, dt = {dt:e}"));
        let strip = solve_strip_2d(&profile, eps, &reaction, |x, _| f(x), &Grid::new_2d(ax, p.n_eta, p.t, dt, usize::MAX))?;
        let gap = reduction_gap(&strip, &reduced, p.t, lo, hi)?;
        t.row([num(eps), num(gap)]);
        gaps.push(gap);
    }
    let mut out = Outcome::default();
    out.add("reduce_compare.csv", t.finish());
    out.note("sup_gap_decreasing", strictly_decreasing(&gaps));
    Ok(out)
}

struct ProbeRow {
    method: &'static str,
    x: f64,
    y: Option<f64>,
    estimate: f64,
    std_error: f64,
    n_paths: usize,
    reference: f64,
}

fn fk_probe(sc: &Scenario, p: &scenario::FkProbe, log: &dyn Fn(&str)) -> Result<Outcome> {
    let profile = sc.profile()?;
    let reaction = sc.reaction()?;
    let init = p.initial.clone();
    let f = move |x: f64| init.eval(x);
    let ax = Axis::with_spacing(profile.x_lo, profile.x_hi, p.dx)?;
    let save = ((p.path_dt / p.dt).round() as usize).max(1);
    let u = solve_limit_1d(&profile, &reaction, &f, &Grid::new_1d(ax, p.t, p.dt, save))?;
    let cfg = FkConfig {
        n_paths: p.n_paths,
        dt: p.path_dt,
        seed: sc.seed,
    };
    let mut rows = Vec::new();
    for &x in &p.probes {
        log(&format!("reduced probe at x = {x}"));
        let e = fk_limit_estimate(p.t, x, &u, &profile, &reaction, &f, &cfg)?;
        rows.push(ProbeRow {
            method: "reduced",
            x,
            y: None,
            estimate: e.estimate,
            std_error: e.std_error,
            n_paths: e.n_paths,
            reference: u.interp_1d(p.t, x)?,
        });
    }
    let mut out = Outcome::default();
    if let Some(q) = &p.picard {
        log("picard iteration");
        let grid = Grid::new_1d(Axis::with_spacing(q.x_lo, q.x_hi, q.dx)?, p.t, q.dt, 1);
        let pcfg = PicardConfig {
            fk: FkConfig {
                n_paths: q.n_paths,
                dt: p.path_dt,
                seed: sc.seed,
            },
            tol: q.tol,
            max_iter: q.max_iter,
        };
        let sol = picard_solve(&profile, &reaction, &f, &grid, &pcfg)?;
        let last = sol.field.times.len() - 1;
        let nodes = grid.x.nodes();
        for &x in &p.probes {
            let Some(j) = nodes.iter().position(|&n| (n - x).abs() <= 0.5 * grid.x.dx() + 1e-12) else {
                continue;
            };
            rows.push(ProbeRow {
                method: "picard",
                x: nodes[j],
                y: None,
                estimate: sol.field.at(last, j, 0),
                std_error: sol.std_errors[last * grid.x.n + j],
                n_paths: q.n_paths,
                reference: u.interp_1d(p.t, nodes[j])?,
            });
        }
        out.note("picard_iterations", sol.iterations);
        out.note("picard_history", &sol.history);
    }
    if let Some(s) = &p.strip {
        log(&format!("strip probe at eps = {}", s.epsilon));
        let strip = solve_strip_2d(
            &profile,
            s.epsilon,
            &reaction,
            |x, _| f(x),
            &Grid::new_2d(ax, s.n_eta, p.t, s.dt, s.save_every),
        )?;
        let sec = profile.section(s.x)?;
        let y = s.epsilon * 0.5 * (sec.lower.value + sec.upper.value);
        let cfg = FkEpsConfig {
            epsilon: s.epsilon,
            n_paths: s.n_paths,
            kappa: s.kappa,
            seed: sc.seed,
        };
        let e = fk_eps_estimate(p.t, s.x, y, &profile, &reaction, &strip, |x, _| f(x), &cfg)?;
        rows.push(ProbeRow {
            method: "strip",
            x: s.x,
            y: Some(y),
            estimate: e.estimate,
            std_error: e.std_error,
            n_paths: e.n_paths,
            reference: strip.interp_2d(p.t, s.x, 0.5)?,
        });
    }
    let mut t = Table::new(&["method", "t", "x", "y", "estimate", "std_error", "n_paths", "pde", "z_score"]);
    for r in &rows {
        t.row([
            r.method.to_string(),
            num(p.t),
            num(r.x),
            opt(r.y),
            num(r.estimate),
            num(r.std_error),
            r.n_paths.to_string(),
            num(r.reference),
            num((r.estimate - r.reference) / r.std_error),
        ]);
    }
    out.add("probes.csv", t.finish());
    out.note("probes", rows.len());
    Ok(out)
}

fn dp_artifacts(out: &mut Outcome, res: &FrontResult, write_w: bool) -> Result<()> {
    let mut buf = Vec::new();
    res.write_t_star_csv(&mut buf)?;
    out.add("t_star.csv", buf);
    if write_w {
        let mut buf = Vec::new();
        res.write_w_csv(&mut buf)?;
        out.add("w.csv", buf);
    }
    out.note("pinned_fraction", res.pinned_fraction);
    out.note("condition_n_advisory", &res.condition_n_advisory);
    Ok(())
}

#[derive(Serialize)]
struct Components {
    t: f64,
    count: usize,
    spans: Intervals,
}

fn components(res: &FrontResult, times: &[f64]) -> Vec<Components> {
    times
        .iter()
        .map(|&t| {
            let spans = res.excited_components(t);
            Components {
                t,
                count: spans.len(),
                spans,
            }
        })
        .collect()
}

fn t_star(res: &FrontResult, x: f64) -> Result<f64> {
    res.t_star_at(x)
        .ok_or_else(|| RunError::Numeric(format!("front never reaches x = {x} before t_max")))
}

fn front_dp(sc: &Scenario, p: &scenario::FrontDp, log: &dyn Fn(&str)) -> Result<Outcome> {
    let c = p.cbar.build()?;
    let f0 = p.initial_support()?;
    log("dynamic programme");
    let res = compute_w_dp(move |x| c.eval(x), &f0, p.t_max, &p.grid)?;
    let mut out = Outcome::default();
    dp_artifacts(&mut out, &res, p.write_w)?;
    out.note("components", components(&res, &p.component_times));
    out.note("largest_reversal", res.largest_reversal(p.grid.x_lo, p.grid.x_hi));
    if let Some(s) = &p.scaling {
        scaling(sc, &mut out, c, &f0, p, s, &res, log)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn scaling(
    sc: &Scenario,
    out: &mut Outcome,
    c: Cbar,
    f0: &Intervals,
    p: &scenario::FrontDp,
    s: &scenario::ScalingCheck,
    base: &FrontResult,
    log: &dyn Fn(&str),
) -> Result<()> {
    let (big_a, a) = (s.big_a, s.a);
    log("scaled media");
    let amp = compute_w_dp(move |x| big_a * c.eval(x), f0, p.t_max, &p.grid)?;
    let dil = compute_w_dp(move |x| c.eval(a * x), f0, p.t_max, &p.grid)?;
    let mut t = Table::new(&["x", "t_star", "t_star_amplified", "t_star_dilated", "amplitude_gap", "dilation_gap"]);
    let (mut worst_a, mut worst_d) = (0.0f64, 0.0f64);
    for &x in &s.probes {
        let tb = t_star(base, x)?;
        let ta = t_star(&amp, x)?;
        let td = t_star(&dil, x)?;
        let ga = ta * big_a.sqrt() / tb - 1.0;
        let gd = td / (t_star(base, a * x)? / a) - 1.0;
        worst_a = worst_a.max(ga.abs());
        worst_d = worst_d.max(gd.abs());
        t.row([num(x), num(tb), num(ta), num(td), num(ga), num(gd)]);
    }
    out.add("scaling.csv", t.finish());
    out.note("amplitude_identity_worst", worst_a);
    out.note("dilation_identity_worst", worst_d);
    if s.pairs == 0 {
        return Ok(());
    }
    let mut rng = rng::substream(sc.seed, Domain::Comparison, &[], 0);
    let mut t = Table::new(&["pair", "b", "w", "phase", "d", "w2", "strict"]);
    let mut strict = 0;
    for k in 0..s.pairs {
        let (b, w, ph) = (rng.gen_range(0.1..0.5), rng.gen_range(1.0..4.0), rng.gen_range(0.0..TAU));
        let (d, w2) = (rng.gen_range(0.05..0.3), rng.gen_range(1.0..4.0));
        log(&format!("comparison pair {k}"));
        let c1 = move |x: f64| 1.0 + b * (w * x + ph).sin();
        let c2 = move |x: f64| c1(x) + d * (1.0 + 0.5 * (w2 * x).cos());
        let r1 = compute_w_dp(c1, f0, p.t_max, &p.grid)?;
        let r2 = compute_w_dp(c2, f0, p.t_max, &p.grid)?;
        let ok = s.probes.iter().all(|&x| matches!((r1.t_star_at(x), r2.t_star_at(x)), (Some(u), Some(v)) if u > v));
        strict += ok as usize;
        t.row([k.to_string(), num(b), num(w), num(ph), num(d), num(w2), ok.to_string()]);
    }
    out.add("comparison.csv", t.finish());
    out.note("strict_pairs", strict);
    Ok(())
}

fn step_closed_form(p: &scenario::StepClosedForm, log: &dyn Fn(&str)) -> Result<Outcome> {
    let s = StepProfile::new(p.d1, p.d2, p.x2)?;
    let mut out = Outcome::default();
    out.note("t0", s.t0()?);
    out.note("t1", s.t1()?);
    out.note("x1", s.x1()?);
    let dp = match &p.dp {
        Some(d) => {
            log("dynamic programme");
            let res = compute_w_dp(|x| s.d(x), &Intervals::left_of(0.0), d.t_max, &d.grid)?;
            dp_artifacts(&mut out, &res, false)?;
            out.note("components", components(&res, &p.component_times));
            Some(res)
        }
        None => None,
    };
    let mut t = Table::new(&["x", "t_star_closed", "t_star_dp", "rel_gap"]);
    let mut worst: Option<f64> = None;
    for x in p.samples.points() {
        let closed = s.t_star(x)?;
        let from_dp = dp.as_ref().and_then(|r| r.t_star_at(x));
        let gap = from_dp.map(|v| v / closed - 1.0);
        if let Some(g) = gap {
            worst = Some(worst.unwrap_or(0.0).max(g.abs()));
        }
        t.row([num(x), num(closed), opt(from_dp), opt(gap)]);
    }
    out.add("step.csv", t.finish());
    out.note("worst_rel_gap", worst);
    Ok(out)
}

#[derive(Serialize)]
struct Certificate<'a> {
    #[serde(flatten)]
    certificate: &'a narrowfront_core::JumpCertificate,
    /// `(x_before, x_after, drop)` of the largest fall of `t*`.
    reversal: Option<(f64, f64, f64)>,
    jump_detected: Option<bool>,
}

fn jump_certify(p: &scenario::JumpCertify, log: &dyn Fn(&str)) -> Result<Outcome> {
    let s = StepProfile::new(p.d1, p.d2, p.x2)?;
    let c = example_cbar(&s, p.big_a, p.a, p.mu, p.lambda, p.k)?;
    let cert = jump_certificate(|x| c.eval(x), &s, p.big_a, p.a, &p.samples.points())?;
    let mut out = Outcome::default();
    let (mut reversal, mut jump_detected) = (None, None);
    if let Some(d) = &p.dp {
        log("dynamic programme on the example medium");
        let res = compute_w_dp(|x| c.eval(x), &Intervals::left_of(0.0), d.t_max, &d.grid)?;
        dp_artifacts(&mut out, &res, false)?;
        reversal = res.largest_reversal(p.reversal_window.0, p.reversal_window.1);
        jump_detected = Some(reversal.is_some_and(|(_, _, drop)| drop > 4.0 * d.grid.dt));
    }
    out.note("verdict", cert.verdict);
    out.note("bound", cert.bound);
    out.note("jump_detected", jump_detected);
    out.add(
        "certificate.json",
        json_bytes(&Certificate {
            certificate: &cert,
            reversal,
            jump_detected,
        })?,
    );
    Ok(out)
}

fn regress_front(samples: &[FrontSample], window: (f64, f64)) -> Result<f64> {
    Ok(front_speed(samples, window.0, window.1)?)
}

fn step_front(profile: &TubeProfile, reaction: &Reaction, f: &scenario::PdeFront) -> Result<Vec<FrontSample>> {
    let grid = Grid::new_1d(Axis::with_spacing(f.x_lo, f.x_hi, f.dx)?, f.t_end, f.dt, f.save_every);
    let u = solve_limit_1d(profile, reaction, |x| if x <= 0.0 { 1.0 } else { 0.0 }, &grid)?;
    Ok(front_position(&u, 0.5))
}

fn bistable(p: &scenario::Bistable, log: &dyn Fn(&str)) -> Result<Outcome> {
    let xi = p.xi.points();
    let mut t = Table::new(&["width", "s_over_v", "formula_speed", "profile_residual", "pde_speed", "rel_gap"]);
    let mut worst_residual = 0.0f64;
    for &w in &p.widths {
        let unit = TubeProfile::constant(w, -1.0, 1.0)?;
        let ratio = unit.surface(0.0)? / unit.volume(0.0)?;
        let a = bistable_speed(&unit, p.mu, 0.0)?;
        let check = bistable_profile_check(0.5 * ratio, p.mu, a, &xi)?;
        worst_residual = worst_residual.max(check.max_residual);
        let pde = match &p.pde {
            Some(f) => {
                log(&format!("PDE front for width {w}"));
                let profile = TubeProfile::constant(w, f.x_lo, f.x_hi)?;
                Some(regress_front(&step_front(&profile, &Reaction::bistable(p.mu, 1.0), f)?, f.window)?)
            }
            None => None,
        };
        t.row([
            num(w),
            num(ratio),
            num(a),
            num(check.max_residual),
            opt(pde),
            opt(pde.map(|v| v / a - 1.0)),
        ]);
    }
    let mut out = Outcome::default();
    out.add("bistable.csv", t.finish());
    out.note("max_profile_residual", worst_residual);
    Ok(out)
}

fn mu_table(curve: &MuCurve) -> Vec<u8> {
    let mut t = Table::new(&["z", "mu_hat", "std_error", "n_hits", "failure"]);
    for pt in &curve.points {
        t.row([
            num(pt.z),
            opt(pt.mu),
            num(pt.std_error),
            pt.n_hits.to_string(),
            pt.failure.clone().unwrap_or_default(),
        ]);
    }
    t.finish()
}

fn front_table(samples: &[FrontSample]) -> Vec<u8> {
    let mut t = Table::new(&["t", "x", "at_edge", "monotone"]);
    for s in samples {
        t.row([num(s.t), opt(s.x), s.at_edge.to_string(), s.monotone.to_string()]);
    }
    t.finish()
}

fn random_media(sc: &Scenario, p: &scenario::RandomMedia, log: &dyn Fn(&str)) -> Result<Outcome> {
    let cfg = sc.mu_config(p.n_paths, p.path_dt, p.t_cap);
    let zs = p.zs.points();
    let mut out = Outcome::default();
    let env = sample_environment(&p.environment, 0)?;
    out.note("clip_fraction", env.clip_fraction);
    out.note("warnings", &env.warnings);
    let curve = match &p.translates {
        Some(shifts) => {
            log(&format!("mu over {} translates", shifts.len()));
            mu_curve_translates(&env, shifts, &zs, &cfg)?
        }
        None => {
            log(&format!("mu over {} environments", p.k_envs));
            mu_curve(&p.environment, &zs, p.k_envs, &cfg, p.with_rate)?
        }
    };
    out.add("mu.csv", mu_table(&curve));
    if curve.with_rate {
        let (nu, z) = compute_nu_star(&curve)?;
        out.note("nu_star", nu);
        out.note("z_star", z);
    }
    match estimate_gbar(&curve) {
        Ok(g) => out.note("gbar_bracket", Some(g)),
        Err(e) => {
            out.note("gbar_bracket", None::<(f64, f64)>);
            out.note("gbar_note", e.to_string());
        }
    }
    if let Some(z) = p.drift_check {
        let mut t = Table::new(&["z", "integral_inverse_volume"]);
        for (z, v) in check_drift_condition(&env, z)? {
            t.row([num(z), num(v)]);
        }
        out.add("drift_condition.csv", t.finish());
    }
    if let Some(f) = &p.front {
        log("PDE front in the sampled medium");
        let grid = Grid::new_1d(Axis::with_spacing(f.x_lo, f.x_hi, f.dx)?, f.t_end, f.dt, f.save_every);
        let front = empirical_front_speed(&env, &grid, 0.0, f.window, None)?;
        out.add("front.csv", front_table(&front.samples));
        out.note("front_speed", front.speed);
    }
    Ok(out)
}

fn front_speed_run(sc: &Scenario, p: &scenario::FrontSpeed, log: &dyn Fn(&str)) -> Result<Outcome> {
    let profile = sc.profile()?;
    let reaction = sc.reaction()?;
    let init = p.initial.clone();
    let grid = Grid::new_1d(Axis::with_spacing(profile.x_lo, profile.x_hi, p.dx)?, p.t_end, p.dt, p.save_every);
    log("reduced PDE");
    let u = solve_limit_1d(&profile, &reaction, |x| init.eval(x), &grid)?;
    let samples = front_position(&u, p.level);
    let mut out = Outcome::default();
    out.add("front.csv", front_table(&samples));
    out.note("speed", front_speed(&samples, p.window.0, p.window.1)?);
    if let Some(l) = p.lambda_star {
        out.note("speed_log_corrected", front_speed_log_corrected(&samples, p.window.0, p.window.1, l)?);
    }
    Ok(out)
}
