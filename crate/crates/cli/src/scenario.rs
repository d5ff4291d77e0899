//! Scenario files: one JSON document per run.

use std::path::PathBuf;

use narrowfront_core::pde::ReactionConfig;
use narrowfront_core::random_media::MuConfig;
use narrowfront_core::wavefront::{example_cbar, DpGrid, ExampleCbar, Intervals, StepProfile};
use narrowfront_core::{EnvironmentSpec, Reaction, TubeProfile};
use serde::{Deserialize, Serialize};

use crate::RunError;

const TOP_LEVEL_KEYS: [&str; 7] = ["name", "seed", "profile", "reaction", "output", "module", "params"];

/// A parsed scenario. `module` and `params` come from the [`Experiment`] tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// Master seed for every random stream of the run.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<TubeProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reaction: Option<ReactionConfig>,
    /// Not part of the resolved config: it does not change any numbers.
    #[serde(default, skip_serializing)]
    pub output: OutputConfig,
    #[serde(flatten)]
    pub experiment: Experiment,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "module", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    SdeAveraging(Averaging),
    LimitCoupling(Coupling),
    ReduceCompare(ReduceCompare),
    FkProbe(FkProbe),
    FrontDp(FrontDp),
    StepClosedForm(StepClosedForm),
    JumpCertify(JumpCertify),
    Bistable(Bistable),
    RandomMedia(RandomMedia),
    FrontSpeed(FrontSpeed),
}

impl Experiment {
    pub fn module(&self) -> &'static str {
        match self {
            Experiment::SdeAveraging(_) => "sde-averaging",
            Experiment::LimitCoupling(_) => "limit-coupling",
            Experiment::ReduceCompare(_) => "reduce-compare",
            Experiment::FkProbe(_) => "fk-probe",
            Experiment::FrontDp(_) => "front-dp",
            Experiment::StepClosedForm(_) => "step-closed-form",
            Experiment::JumpCertify(_) => "jump-certify",
            Experiment::Bistable(_) => "bistable",
            Experiment::RandomMedia(_) => "random-media",
            Experiment::FrontSpeed(_) => "front-speed",
        }
    }
}

/// Averaging of the boundary local-time functional with weight `H ≡ weight`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Averaging {
    pub epsilons: Vec<f64>,
    /// `dt = kappa (ε V_min)²`.
    pub kappa: f64,
    pub horizon: f64,
    #[serde(default)]
    pub x0: f64,
    pub n_paths: usize,
    #[serde(default = "default_checks")]
    pub n_check: usize,
    #[serde(default = "one")]
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coupling {
    pub epsilons: Vec<f64>,
    pub kappa: f64,
    pub horizon: f64,
    #[serde(default)]
    pub x0: f64,
    pub n_paths: usize,
    #[serde(default = "default_checks")]
    pub n_check: usize,
}

/// Strip solutions for each ε against the reduced solution at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceCompare {
    pub epsilons: Vec<f64>,
    pub t: f64,
    pub dx: f64,
    pub n_eta: usize,
    /// Time step of the reduced solver.
    pub dt: f64,
    /// Strip time step as a fraction of its stability bound.
    #[serde(default = "default_cfl")]
    pub cfl_fraction: f64,
    pub initial: InitialData,
    /// `x` range of the sup; defaults to the whole grid.
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FkProbe {
    pub t: f64,
    pub probes: Vec<f64>,
    pub initial: InitialData,
    /// Reference solve of the reduced equation.
    pub dx: f64,
    pub dt: f64,
    pub n_paths: usize,
    /// Euler step of the Monte Carlo paths.
    pub path_dt: f64,
    #[serde(default)]
    pub picard: Option<PicardParams>,
    #[serde(default)]
    pub strip: Option<StripProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardParams {
    pub x_lo: f64,
    pub x_hi: f64,
    pub dx: f64,
    /// Spacing of the time table.
    pub dt: f64,
    pub n_paths: usize,
    pub tol: f64,
    pub max_iter: usize,
}

/// Probe of the strip representation at `(x, mid-line)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripProbe {
    pub epsilon: f64,
    pub x: f64,
    pub n_eta: usize,
    pub dt: f64,
    pub save_every: usize,
    pub n_paths: usize,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontDp {
    pub cbar: CbarSpec,
    /// Initial support as finite spans; defaults to `(−∞, 0]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<Intervals>,
    pub t_max: f64,
    pub grid: DpGrid,
    #[serde(default)]
    pub write_w: bool,
    /// Times at which the excited set is reported.
    #[serde(default)]
    pub component_times: Vec<f64>,
    #[serde(default)]
    pub scaling: Option<ScalingCheck>,
}

impl FrontDp {
    pub fn initial_support(&self) -> Result<Intervals, RunError> {
        match &self.f0 {
            None => Ok(Intervals::left_of(0.0)),
            Some(f) if f.is_empty() => Err(RunError::config("f0 must not be empty")),
            Some(f) => Ok(Intervals::new(f.spans.clone())?),
        }
    }
}

/// `√A` and dilation identities plus the comparison principle on random
/// ordered pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingCheck {
    pub big_a: f64,
    pub a: f64,
    pub probes: Vec<f64>,
    #[serde(default)]
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepClosedForm {
    pub d1: f64,
    pub d2: f64,
    pub x2: f64,
    pub samples: Sampling,
    #[serde(default)]
    pub dp: Option<DpRun>,
    #[serde(default)]
    pub component_times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DpRun {
    pub t_max: f64,
    pub grid: DpGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpCertify {
    pub d1: f64,
    pub d2: f64,
    pub x2: f64,
    pub big_a: f64,
    pub a: f64,
    /// Shape of the example medium.
    pub mu: f64,
    pub lambda: f64,
    pub k: f64,
    pub samples: Sampling,
    #[serde(default)]
    pub dp: Option<DpRun>,
    #[serde(default = "default_reversal_window")]
    pub reversal_window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bistable {
    pub mu: f64,
    pub xi: Sampling,
    /// Widths of constant strips for the speed law.
    pub widths: Vec<f64>,
    #[serde(default)]
    pub pde: Option<PdeFront>,
}

/// Step-data PDE run whose ½-level set is regressed over `window`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeFront {
    pub x_lo: f64,
    pub x_hi: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_save")]
    pub save_every: usize,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomMedia {
    pub environment: EnvironmentSpec,
    #[serde(default = "default_envs")]
    pub k_envs: usize,
    pub n_paths: usize,
    #[serde(default = "default_mu_dt")]
    pub path_dt: f64,
    #[serde(default = "default_cap")]
    pub t_cap: f64,
    pub zs: Sampling,
    #[serde(default = "yes")]
    pub with_rate: bool,
    /// Spatial shifts of one realization, used instead of `k_envs` draws.
    #[serde(default)]
    pub translates: Option<Vec<f64>>,
    #[serde(default)]
    pub front: Option<PdeFront>,
    /// Upper end of the `z` range for the drift-condition check.
    #[serde(default)]
    pub drift_check: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontSpeed {
    pub initial: InitialData,
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_save")]
    pub save_every: usize,
    #[serde(default = "half")]
    pub level: f64,
    pub window: (f64, f64),
    /// Leading-edge decay rate; when set the logarithmic delay is removed.
    #[serde(default)]
    pub lambda_star: Option<f64>,
}

/// `n` equispaced points on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Sampling {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }

    fn check(&self, what: &str) -> Result<(), RunError> {
        if self.n == 0 || !self.lo.is_finite() || !self.hi.is_finite() || (self.n > 1 && self.lo == self.hi) {
            return Err(RunError::config(format!("{what}: need n >= 1 and a nondegenerate finite range")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    /// `amplitude · exp(−((x − center)/width)²)`.
    Gaussian {
        amplitude: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// `value` on `x ≤ at`, zero to the right.
    Step {
        at: f64,
        #[serde(default = "one")]
        value: f64,
    },
    Constant { value: f64 },
    /// `1 / (1 + exp(steepness (x − center)))`.
    Logistic { center: f64, steepness: f64 },
}

impl InitialData {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            InitialData::Gaussian { amplitude, center, width } => amplitude * (-((x - center) / width).powi(2)).exp(),
            InitialData::Step { at, value } => {
                if x <= at {
                    value
                } else {
                    0.0
                }
            }
            InitialData::Constant { value } => value,
            InitialData::Logistic { center, steepness } => 1.0 / (1.0 + (steepness * (x - center)).exp()),
        }
    }

    fn check(&self) -> Result<(), RunError> {
        let ok = match *self {
            InitialData::Gaussian { amplitude, center, width } => amplitude.is_finite() && center.is_finite() && width > 0.0,
            InitialData::Step { at, value } => at.is_finite() && value.is_finite(),
            InitialData::Constant { value } => value.is_finite(),
            InitialData::Logistic { center, steepness } => center.is_finite() && steepness.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(RunError::config(format!("invalid initial data {self:?}")))
        }
    }
}

/// Effective medium `c̄(x)` for the front computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CbarSpec {
    Constant { value: f64 },
    Step { d1: f64, d2: f64, x2: f64 },
    /// `base + amplitude · tanh(steepness (x − center))`.
    Tanh {
        base: f64,
        amplitude: f64,
        center: f64,
        steepness: f64,
    },
    /// Smooth medium squeezed between `d` and `A d(a·)`.
    Example {
        d1: f64,
        d2: f64,
        x2: f64,
        big_a: f64,
        a: f64,
        mu: f64,
        lambda: f64,
        k: f64,
    },
}

/// A built medium, cheap to copy into closures.
#[derive(Debug, Clone, Copy)]
pub enum Cbar {
    Constant(f64),
    Step(StepProfile),
    Tanh { base: f64, amplitude: f64, center: f64, steepness: f64 },
    Example(ExampleCbar),
}

impl Cbar {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Cbar::Constant(c) => c,
            Cbar::Step(s) => s.d(x),
            Cbar::Tanh { base, amplitude, center, steepness } => base + amplitude * (steepness * (x - center)).tanh(),
            Cbar::Example(e) => e.eval(x),
        }
    }
}

impl CbarSpec {
    pub fn build(&self) -> Result<Cbar, RunError> {
        Ok(match *self {
            CbarSpec::Constant { value } => {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(RunError::config(format!("constant medium must be positive, got {value}")));
                }
                Cbar::Constant(value)
            }
            CbarSpec::Step { d1, d2, x2 } => Cbar::Step(StepProfile::new(d1, d2, x2)?),
            CbarSpec::Tanh { base, amplitude, center, steepness } => {
                if !(base - amplitude.abs() > 0.0) || !center.is_finite() || !steepness.is_finite() {
                    return Err(RunError::config("tanh medium must satisfy base > |amplitude|"));
                }
                Cbar::Tanh { base, amplitude, center, steepness }
            }
            CbarSpec::Example { d1, d2, x2, big_a, a, mu, lambda, k } => {
                Cbar::Example(example_cbar(&StepProfile::new(d1, d2, x2)?, big_a, a, mu, lambda, k)?)
            }
        })
    }
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

fn yes() -> bool {
    true
}

fn default_checks() -> usize {
    20
}

fn default_cfl() -> f64 {
    0.9
}

fn default_save() -> usize {
    100
}

fn default_envs() -> usize {
    1
}

fn default_mu_dt() -> f64 {
    0.01
}

fn default_cap() -> f64 {
    1000.0
}

fn default_reversal_window() -> (f64, f64) {
    (0.0, 2.0)
}

fn positive(v: f64, what: &str) -> Result<(), RunError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(RunError::config(format!("{what} must be positive and finite, got {v}")))
    }
}

fn nonzero(n: usize, what: &str) -> Result<(), RunError> {
    if n > 0 {
        Ok(())
    } else {
        Err(RunError::config(format!("{what} must be at least 1")))
    }
}

fn window(w: (f64, f64), what: &str) -> Result<(), RunError> {
    if w.0.is_finite() && w.1.is_finite() && w.0 < w.1 {
        Ok(())
    } else {
        Err(RunError::config(format!("{what} [{}, {}] is not an increasing finite range", w.0, w.1)))
    }
}

fn epsilons(eps: &[f64]) -> Result<(), RunError> {
    if eps.is_empty() {
        return Err(RunError::config("epsilons must not be empty"));
    }
    if let Some(e) = eps.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
        return Err(RunError::config(format!("epsilon {e} is outside (0, 1]")));
    }
    Ok(())
}

impl PdeFront {
    fn check(&self) -> Result<(), RunError> {
        window((self.x_lo, self.x_hi), "pde domain")?;
        positive(self.dx, "pde dx")?;
        positive(self.dt, "pde dt")?;
        positive(self.t_end, "pde t_end")?;
        nonzero(self.save_every, "pde save_every")?;
        window(self.window, "pde regression window")
    }
}

impl Scenario {
    /// Parses a scenario, rejecting unknown top-level keys.
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| RunError::config(format!("malformed JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| RunError::config("scenario must be a JSON object"))?;
        if let Some(k) = obj.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
            return Err(RunError::config(format!("unknown top-level key `{k}`")));
        }
        serde_json::from_value(value).map_err(|e| RunError::config(format!("invalid scenario: {e}")))
    }

    /// The resolved configuration recorded in manifests and hashed.
    pub fn resolved(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scenario serializes")
    }

    /// Validated profile, required by the module.
    pub fn profile(&self) -> Result<TubeProfile, RunError> {
        let p = self
            .profile
            .clone()
            .ok_or_else(|| RunError::config(format!("module {} needs a `profile`", self.experiment.module())))?;
        Ok(p.validated()?)
    }

    pub fn reaction(&self) -> Result<Reaction, RunError> {
        let r = self
            .reaction
            .ok_or_else(|| RunError::config(format!("module {} needs a `reaction`", self.experiment.module())))?;
        Ok(r.build()?)
    }

    pub fn mu_config(&self, n_paths: usize, dt: f64, t_cap: f64) -> MuConfig {
        MuConfig {
            n_paths,
            dt,
            t_cap,
            seed: self.seed,
        }
    }

    /// Schema and range checks, run before any computation.
    pub fn validate(&self) -> Result<(), RunError> {
        if self.name.trim().is_empty() {
            return Err(RunError::config("scenario name must not be empty"));
        }
        match &self.experiment {
            Experiment::SdeAveraging(p) => {
                let profile = self.profile()?;
                epsilons(&p.epsilons)?;
                nonzero(p.n_paths, "n_paths")?;
                positive(p.kappa, "kappa")?;
                if !p.weight.is_finite() {
                    return Err(RunError::config("weight must be finite"));
                }
                for &e in &p.epsilons {
                    narrowfront_core::SimConfig::for_epsilon(&profile, e, p.kappa, p.horizon, p.x0, self.seed, p.n_paths)?;
                }
            }
            Experiment::LimitCoupling(p) => {
                let profile = self.profile()?;
                epsilons(&p.epsilons)?;
                nonzero(p.n_paths, "n_paths")?;
                positive(p.kappa, "kappa")?;
                for &e in &p.epsilons {
                    narrowfront_core::SimConfig::for_epsilon(&profile, e, p.kappa, p.horizon, p.x0, self.seed, p.n_paths)?;
                }
            }
            Experiment::ReduceCompare(p) => {
                self.profile()?;
                self.reaction()?;
                epsilons(&p.epsilons)?;
                positive(p.t, "t")?;
                positive(p.dx, "dx")?;
                positive(p.dt, "dt")?;
                if p.n_eta < 3 {
                    return Err(RunError::config("n_eta must be at least 3"));
                }
                if !(p.cfl_fraction > 0.0 && p.cfl_fraction <= 0.9) {
                    return Err(RunError::config("cfl_fraction must lie in (0, 0.9]"));
                }
                p.initial.check()?;
                if let Some(w) = p.window {
                    window(w, "comparison window")?;
                }
            }
            Experiment::FkProbe(p) => {
                let profile = self.profile()?;
                self.reaction()?;
                positive(p.t, "t")?;
                positive(p.dx, "dx")?;
                positive(p.dt, "dt")?;
                positive(p.path_dt, "path_dt")?;
                nonzero(p.n_paths, "n_paths")?;
                p.initial.check()?;
                if p.probes.is_empty() || p.probes.iter().any(|&x| !profile.contains(x)) {
                    return Err(RunError::config("probes must be nonempty and inside the profile domain"));
                }
                if let Some(q) = &p.picard {
                    window((q.x_lo, q.x_hi), "picard domain")?;
                    positive(q.dx, "picard dx")?;
                    positive(q.dt, "picard dt")?;
                    positive(q.tol, "picard tol")?;
                    nonzero(q.n_paths, "picard n_paths")?;
                    nonzero(q.max_iter, "picard max_iter")?;
                }
                if let Some(s) = &p.strip {
                    epsilons(&[s.epsilon])?;
                    if !profile.contains(s.x) {
                        return Err(RunError::config("strip probe lies outside the profile domain"));
                    }
                    positive(s.dt, "strip dt")?;
                    positive(s.kappa, "strip kappa")?;
                    nonzero(s.n_paths, "strip n_paths")?;
                    nonzero(s.save_every, "strip save_every")?;
                    if s.n_eta < 3 {
                        return Err(RunError::config("strip n_eta must be at least 3"));
                    }
                }
            }
            Experiment::FrontDp(p) => {
                p.cbar.build()?;
                positive(p.t_max, "t_max")?;
                p.initial_support()?;
                if let Some(s) = &p.scaling {
                    if !(s.big_a > 0.0 && s.a > 0.0) || s.probes.is_empty() {
                        return Err(RunError::config("scaling check needs A > 0, a > 0 and probes"));
                    }
                }
            }
            Experiment::StepClosedForm(p) => {
                let s = StepProfile::new(p.d1, p.d2, p.x2)?;
                s.t0()?;
                p.samples.check("samples")?;
                if let Some(d) = &p.dp {
                    positive(d.t_max, "dp t_max")?;
                }
            }
            Experiment::JumpCertify(p) => {
                example_cbar(&StepProfile::new(p.d1, p.d2, p.x2)?, p.big_a, p.a, p.mu, p.lambda, p.k)?;
                p.samples.check("samples")?;
                window(p.reversal_window, "reversal window")?;
                if let Some(d) = &p.dp {
                    positive(d.t_max, "dp t_max")?;
                }
            }
            Experiment::Bistable(p) => {
                if !(p.mu > 0.0 && p.mu < 0.5) {
                    return Err(RunError::config(format!("mu = {} must lie in (0, 1/2)", p.mu)));
                }
                p.xi.check("xi")?;
                if p.widths.is_empty() {
                    return Err(RunError::config("widths must not be empty"));
                }
                for &w in &p.widths {
                    positive(w, "width")?;
                }
                if let Some(f) = &p.pde {
                    f.check()?;
                }
            }
            Experiment::RandomMedia(p) => {
                p.environment.validate()?;
                nonzero(p.k_envs, "k_envs")?;
                nonzero(p.n_paths, "n_paths")?;
                positive(p.path_dt, "path_dt")?;
                positive(p.t_cap, "t_cap")?;
                p.zs.check("zs")?;
                if p.zs.points().iter().any(|&z| !(z < 0.0)) {
                    return Err(RunError::config("all z must be negative"));
                }
                if p.translates.is_some() && !p.with_rate {
                    return Err(RunError::config("translates always include the rate; drop with_rate = false"));
                }
                if let Some(t) = &p.translates {
                    if t.is_empty() || t.iter().any(|s| !s.is_finite()) {
                        return Err(RunError::config("translates must be nonempty and finite"));
                    }
                }
                if let Some(f) = &p.front {
                    f.check()?;
                }
                if let Some(z) = p.drift_check {
                    positive(z, "drift_check")?;
                }
            }
            Experiment::FrontSpeed(p) => {
                self.profile()?;
                self.reaction()?;
                p.initial.check()?;
                positive(p.dx, "dx")?;
                positive(p.dt, "dt")?;
                positive(p.t_end, "t_end")?;
                nonzero(p.save_every, "save_every")?;
                window(p.window, "regression window")?;
                if let Some(l) = p.lambda_star {
                    positive(l, "lambda_star")?;
                }
            }
        }
        Ok(())
    }
}
