//! Strip geometry `D^ε = {(x, y) : ε g⁻(x) < y < ε g⁺(x)}`.
//!
//! A [`TubeProfile`] carries the unscaled cross-section `(g⁻(x), g⁺(x))` on a
//! finite interval `[x_lo, x_hi]`. Every family supplies its boundary curves
//! together with analytic first and second derivatives, so identities such as
//! `∮ γ₁/|γ₂| dS = V'` hold to rounding error.
//!
//! The strict accessors (`volume`, `grad_log_volume`, ...) reject points
//! outside the interval. Simulators use [`TubeProfile::jets_clamped`], which
//! extends the profile by the constant values at the nearest end (zero
//! derivatives) and reports that it did so.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of interior samples used to validate profile invariants.
const VALIDATION_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Value and first two derivatives of a boundary curve at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    fn scaled(self, s: f64) -> Jet {
        Jet {
            value: s * self.value,
            d1: s * self.d1,
            d2: s * self.d2,
        }
    }
}

/// Both boundary curves at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub lower: Jet,
    pub upper: Jet,
}

impl Section {
    #[inline]
    pub fn volume(&self) -> f64 {
        self.upper.value - self.lower.value
    }

    #[inline]
    pub fn volume_d1(&self) -> f64 {
        self.upper.d1 - self.lower.d1
    }

    #[inline]
    pub fn volume_d2(&self) -> f64 {
        self.upper.d2 - self.lower.d2
    }

    #[inline]
    pub fn side(&self, side: Side) -> Jet {
        match side {
            Side::Lower => self.lower,
            Side::Upper => self.upper,
        }
    }

    fn symmetric(width: Jet) -> Section {
        Section {
            lower: width.scaled(-0.5),
            upper: width.scaled(0.5),
        }
    }
}

/// Truncated Fourier series `log V(x) = ln base + Σ a_j cos(ω_j x + θ_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    pub base: f64,
    pub amplitudes: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub phases: Vec<f64>,
}

impl FourierSeries {
    /// `(L, L', L'')` for `L = Σ a_j cos(ω_j x + θ_j)` (without the base).
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let mut l = 0.0;
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        for ((a, w), p) in self.amplitudes.iter().zip(&self.frequencies).zip(&self.phases) {
            let (s, c) = (w * x + p).sin_cos();
            l += a * c;
            l1 -= a * w * s;
            l2 -= a * w * w * c;
        }
        (l, l1, l2)
    }

    /// Upper bound on `|L'|`.
    pub fn slope_bound(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.frequencies)
            .map(|(a, w)| (a * w).abs())
            .sum()
    }

    pub fn amplitude_bound(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.abs()).sum()
    }
}

/// Cross-section families. Symmetric families place the boundaries at
/// `±V(x)/2`; `constant` and `affine` allow asymmetric sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum ProfileFamily {
    Constant {
        lower: f64,
        upper: f64,
    },
    Affine {
        lower: f64,
        lower_slope: f64,
        upper: f64,
        upper_slope: f64,
    },
    /// Logistic transition of the width from `width_left` to `width_right`.
    Sigmoid {
        width_left: f64,
        width_right: f64,
        center: f64,
        scale: f64,
    },
    /// Cubic smoothstep transition over `[center - half_width, center + half_width]`.
    SmoothedStep {
        width_left: f64,
        width_right: f64,
        center: f64,
        half_width: f64,
    },
    /// `V(x) = base · exp(amplitude · sin(wavenumber · x + phase))`.
    Sinusoidal {
        base: f64,
        amplitude: f64,
        wavenumber: f64,
        phase: f64,
    },
    RandomRealization(FourierSeries),
}

impl ProfileFamily {
    pub fn constant_width(width: f64) -> Self {
        ProfileFamily::Constant {
            lower: -0.5 * width,
            upper: 0.5 * width,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ProfileFamily::Constant { .. } => "constant",
            ProfileFamily::Affine { .. } => "affine",
            ProfileFamily::Sigmoid { .. } => "sigmoid",
            ProfileFamily::SmoothedStep { .. } => "smoothed-step",
            ProfileFamily::Sinusoidal { .. } => "sinusoidal",
            ProfileFamily::RandomRealization(_) => "random-realization",
        }
    }

    fn section(&self, x: f64) -> Section {
        match *self {
            ProfileFamily::Constant { lower, upper } => Section {
                lower: Jet {
                    value: lower,
                    ..Jet::default()
                },
                upper: Jet {
                    value: upper,
                    ..Jet::default()
                },
            },
            ProfileFamily::Affine {
                lower,
                lower_slope,
                upper,
                upper_slope,
            } => Section {
                lower: Jet {
                    value: lower + lower_slope * x,
                    d1: lower_slope,
                    d2: 0.0,
                },
                upper: Jet {
                    value: upper + upper_slope * x,
                    d1: upper_slope,
                    d2: 0.0,
                },
            },
            ProfileFamily::Sigmoid {
                width_left,
                width_right,
                center,
                scale,
            } => {
                let s = 1.0 / (1.0 + (-(x - center) / scale).exp());
                let jump = width_right - width_left;
                let ds = s * (1.0 - s) / scale;
                let dds = s * (1.0 - s) * (1.0 - 2.0 * s) / (scale * scale);
                Section::symmetric(Jet {
                    value: width_left + jump * s,
                    d1: jump * ds,
                    d2: jump * dds,
                })
            }
            ProfileFamily::SmoothedStep {
                width_left,
                width_right,
                center,
                half_width,
            } => {
                let span = 2.0 * half_width;
                let s = (x - (center - half_width)) / span;
                let jump = width_right - width_left;
                let width = if s <= 0.0 {
                    Jet {
                        value: width_left,
                        ..Jet::default()
                    }
                } else if s >= 1.0 {
                    Jet {
                        value: width_right,
                        ..Jet::default()
                    }
                } else {
                    Jet {
                        value: width_left + jump * s * s * (3.0 - 2.0 * s),
                        d1: jump * 6.0 * s * (1.0 - s) / span,
                        d2: jump * (6.0 - 12.0 * s) / (span * span),
                    }
                };
                Section::symmetric(width)
            }
            ProfileFamily::Sinusoidal {
                base,
                amplitude,
                wavenumber,
                phase,
            } => {
                let (s, c) = (wavenumber * x + phase).sin_cos();
                let v = base * (amplitude * s).exp();
                let l1 = amplitude * wavenumber * c;
                let l2 = -amplitude * wavenumber * wavenumber * s;
                Section::symmetric(Jet {
                    value: v,
                    d1: v * l1,
                    d2: v * (l2 + l1 * l1),
                })
            }
            ProfileFamily::RandomRealization(ref series) => {
                let (l, l1, l2) = series.eval(x);
                let v = series.base * l.exp();
                Section::symmetric(Jet {
                    value: v,
                    d1: v * l1,
                    d2: v * (l2 + l1 * l1),
                })
            }
        }
    }
}

/// Inward unit normal to `∂D^ε` at a boundary abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub x: f64,
    pub side: Side,
    pub gamma1_eps: f64,
    pub gamma2_eps: f64,
}

/// A validated strip profile on `[x_lo, x_hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeProfile {
    #[serde(flatten)]
    pub family: ProfileFamily,
    pub x_lo: f64,
    pub x_hi: f64,
    /// Declared positive floor for `V`; defaults to the sampled minimum.
    #[serde(default)]
    pub v_min: Option<f64>,
    /// Declared bound on `|g±'|`; defaults to 5.
    #[serde(default)]
    pub slope_max: Option<f64>,
}

impl TubeProfile {
    pub const DEFAULT_SLOPE_MAX: f64 = 5.0;

    pub fn new(family: ProfileFamily, x_lo: f64, x_hi: f64) -> Result<Self> {
        TubeProfile {
            family,
            x_lo,
            x_hi,
            v_min: None,
            slope_max: None,
        }
        .validated()
    }

    pub fn constant(width: f64, x_lo: f64, x_hi: f64) -> Result<Self> {
        Self::new(ProfileFamily::constant_width(width), x_lo, x_hi)
    }

    pub fn with_v_min(mut self, v_min: f64) -> Result<Self> {
        self.v_min = Some(v_min);
        self.validated()
    }

    pub fn with_slope_max(mut self, slope_max: f64) -> Result<Self> {
        self.slope_max = Some(slope_max);
        self.validated()
    }

    /// Checks `g⁻ < 0 < g⁺`, `V ≥ v_min > 0` and `|g±'| ≤ slope_max` on a
    /// uniform sample of the domain, filling in defaults.
    pub fn validated(mut self) -> Result<Self> {
        if !(self.x_lo.is_finite() && self.x_hi.is_finite() && self.x_lo < self.x_hi) {
            return Err(Error::Config(format!(
                "profile domain [{}, {}] must be a finite nonempty interval",
                self.x_lo, self.x_hi
            )));
        }
        self.check_family_params()?;
        let slope_max = self.slope_max.unwrap_or(Self::DEFAULT_SLOPE_MAX);
        if !(slope_max > 0.0) {
            return Err(Error::Config("slope_max must be positive".into()));
        }
        let mut v_floor = f64::INFINITY;
        for i in 0..=VALIDATION_SAMPLES {
            let x = self.x_lo + (self.x_hi - self.x_lo) * i as f64 / VALIDATION_SAMPLES as f64;
            let s = self.family.section(x);
            if !(s.lower.value < 0.0 && s.upper.value > 0.0) {
                return Err(Error::Config(format!(
                    "cross-section at x = {x} is ({}, {}), must contain 0",
                    s.lower.value, s.upper.value
                )));
            }
            let slope = s.lower.d1.abs().max(s.upper.d1.abs());
            if slope > slope_max {
                return Err(Error::Config(format!(
                    "boundary slope {slope} at x = {x} exceeds slope_max = {slope_max}"
                )));
            }
            v_floor = v_floor.min(s.volume());
        }
        let v_min = self.v_min.unwrap_or(v_floor);
        if !(v_min > 0.0) || v_floor < v_min {
            return Err(Error::Config(format!(
                "volume floor violated: sampled min V = {v_floor}, declared v_min = {v_min}"
            )));
        }
        self.v_min = Some(v_min);
        self.slope_max = Some(slope_max);
        Ok(self)
    }

    fn check_family_params(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("{} profile: {msg}", self.family.tag())));
        match &self.family {
            ProfileFamily::Sigmoid { scale, .. } if !(*scale > 0.0) => bad("scale must be positive"),
            ProfileFamily::SmoothedStep { half_width, .. } if !(*half_width > 0.0) => {
                bad("half_width must be positive")
            }
            ProfileFamily::Sinusoidal { base, .. } if !(*base > 0.0) => bad("base must be positive"),
            ProfileFamily::RandomRealization(s)
                if s.amplitudes.len() != s.frequencies.len() || s.amplitudes.len() != s.phases.len() =>
            {
                bad("amplitudes, frequencies and phases must have equal lengths")
            }
            ProfileFamily::RandomRealization(s) if !(s.base > 0.0) => bad("base must be positive"),
            _ => Ok(()),
        }
    }

    pub fn v_min(&self) -> f64 {
        self.v_min.expect("validated profile")
    }

    pub fn slope_max(&self) -> f64 {
        self.slope_max.unwrap_or(Self::DEFAULT_SLOPE_MAX)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                x,
                lo: self.x_lo,
                hi: self.x_hi,
            })
        }
    }

    /// Boundary curves with derivatives at `x`.
    pub fn section(&self, x: f64) -> Result<Section> {
        self.check(x)?;
        Ok(self.family.section(x))
    }

    /// Section with the clamped-constant extension outside the domain.
    /// The flag is `true` when `x` had to be clamped.
    #[inline]
    pub fn section_clamped(&self, x: f64) -> (Section, bool) {
        if self.contains(x) {
            (self.family.section(x), false)
        } else {
            let s = self.family.section(x.clamp(self.x_lo, self.x_hi));
            let flat = |j: Jet| Jet {
                value: j.value,
                d1: 0.0,
                d2: 0.0,
            };
            (
                Section {
                    lower: flat(s.lower),
                    upper: flat(s.upper),
                },
                true,
            )
        }
    }

    pub fn volume(&self, x: f64) -> Result<f64> {
        Ok(self.section(x)?.volume())
    }

    /// Surface measure of `∂D_x`; for an interval this counts its two endpoints.
    pub fn surface(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(2.0)
    }

    pub fn grad_log_volume(&self, x: f64) -> Result<f64> {
        let s = self.section(x)?;
        Ok(s.volume_d1() / s.volume())
    }

    /// `½ (log V)'` with the clamped extension; zero outside the domain.
    #[inline]
    pub fn drift_clamped(&self, x: f64) -> (f64, bool) {
        let (s, clamped) = self.section_clamped(x);
        (0.5 * s.volume_d1() / s.volume(), clamped)
    }

    /// `S(x) / V(x)` with the clamped extension.
    #[inline]
    pub fn surface_ratio_clamped(&self, x: f64) -> f64 {
        2.0 / self.section_clamped(x).0.volume()
    }

    /// Boundary average `Q(x) = (1/V) ∮ H dS_x = (H(x, g⁻) + H(x, g⁺)) / V`.
    ///
    /// `h` receives the abscissa, the unscaled boundary ordinate and the side.
    pub fn q_average<H>(&self, h: H, x: f64) -> Result<f64>
    where
        H: Fn(f64, f64, Side) -> f64,
    {
        let s = self.section(x)?;
        Ok((h(x, s.lower.value, Side::Lower) + h(x, s.upper.value, Side::Upper)) / s.volume())
    }

    /// `γ₁¹ / |γ₂¹|` at the unscaled boundary point on `side`: `g⁺'` on the
    /// upper curve and `-g⁻'` on the lower one.
    #[inline]
    pub fn normal_ratio(section: &Section, side: Side) -> f64 {
        match side {
            Side::Upper => section.upper.d1,
            Side::Lower => -section.lower.d1,
        }
    }

    /// Boundary observable `H = γ₁¹/|γ₂¹|` as a closure usable with
    /// [`TubeProfile::q_average`] and the local-time functionals.
    pub fn normal_ratio_fn(&self) -> impl Fn(f64, f64, Side) -> f64 + Sync + '_ {
        move |x, _y, side| Self::normal_ratio(&self.section_clamped(x).0, side)
    }

    /// Unit inward normal to the curve `y = ε g^side(x)`.
    pub fn inward_normal_eps(&self, epsilon: f64, x: f64, side: Side) -> Result<BoundaryPoint> {
        if !(epsilon > 0.0) {
            return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
        }
        let s = self.section(x)?;
        Ok(normal_from_slope(x, side, epsilon * s.side(side).d1))
    }
}

/// Inward unit normal for a boundary with physical slope `slope = ε g'`.
#[inline]
pub fn normal_from_slope(x: f64, side: Side, slope: f64) -> BoundaryPoint {
    let n = (1.0 + slope * slope).sqrt();
    let (g1, g2) = match side {
        Side::Upper => (slope / n, -1.0 / n),
        Side::Lower => (-slope / n, 1.0 / n),
    };
    BoundaryPoint {
        x,
        side,
        gamma1_eps: g1,
        gamma2_eps: g2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn affine() -> TubeProfile {
        TubeProfile::new(
            ProfileFamily::Affine {
                lower: -0.5,
                lower_slope: 0.0,
                upper: 0.5,
                upper_slope: 0.1,
            },
            -2.0,
            2.0,
        )
        .unwrap()
    }

    fn exp_sin() -> TubeProfile {
        TubeProfile::new(
            ProfileFamily::Sinusoidal {
                base: 1.0,
                amplitude: 1.0,
                wavenumber: 1.0,
                phase: 0.0,
            },
            -10.0,
            10.0,
        )
        .unwrap()
    }

    fn families() -> Vec<TubeProfile> {
        vec![
            TubeProfile::constant(1.0, -5.0, 5.0).unwrap(),
            affine(),
            TubeProfile::new(
                ProfileFamily::Sigmoid {
                    width_left: 1.0,
                    width_right: 0.4,
                    center: 0.5,
                    scale: 0.7,
                },
                -5.0,
                5.0,
            )
            .unwrap(),
            TubeProfile::new(
                ProfileFamily::SmoothedStep {
                    width_left: 0.8,
                    width_right: 1.6,
                    center: 0.0,
                    half_width: 1.5,
                },
                -5.0,
                5.0,
            )
            .unwrap(),
            exp_sin(),
            TubeProfile::new(
                ProfileFamily::RandomRealization(FourierSeries {
                    base: 1.0,
                    amplitudes: vec![0.2, 0.1, 0.05],
                    frequencies: vec![2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt()],
                    phases: vec![0.3, 1.7, 4.0],
                }),
                -20.0,
                20.0,
            )
            .unwrap(),
        ]
    }

    #[test]
    fn volume_examples() {
        assert_eq!(TubeProfile::constant(1.0, -1.0, 1.0).unwrap().volume(0.3).unwrap(), 1.0);
        assert!((affine().volume(1.0).unwrap() - 1.1).abs() < 1e-15);
        assert!((exp_sin().volume(0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn surface_is_two() {
        let p = TubeProfile::constant(4.0, -1.0, 1.0).unwrap();
        assert_eq!(p.surface(0.0).unwrap(), 2.0);
        assert_eq!(p.surface(0.0).unwrap() / p.volume(0.0).unwrap(), 0.5);
        let unit = TubeProfile::constant(1.0, -1.0, 1.0).unwrap();
        assert_eq!(unit.surface(0.5).unwrap() / unit.volume(0.5).unwrap(), 2.0);
    }

    #[test]
    fn grad_log_volume_examples() {
        assert_eq!(TubeProfile::constant(1.0, -1.0, 1.0).unwrap().grad_log_volume(0.0).unwrap(), 0.0);
        assert!((exp_sin().grad_log_volume(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((affine().grad_log_volume(0.0).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn q_average_examples() {
        let p = TubeProfile::constant(2.5, -1.0, 1.0).unwrap();
        assert!((p.q_average(|_, _, _| 1.0, 0.0).unwrap() - 2.0 / 2.5).abs() < 1e-15);
        assert_eq!(p.q_average(p.normal_ratio_fn(), 0.2).unwrap(), 0.0);
        let a = affine();
        let q = a.q_average(a.normal_ratio_fn(), 0.7).unwrap();
        assert!((q - a.grad_log_volume(0.7).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn outside_domain_is_an_error() {
        let p = TubeProfile::constant(1.0, -1.0, 1.0).unwrap();
        assert!(matches!(p.volume(1.5), Err(Error::OutsideDomain { .. })));
        assert!(p.surface(-1.01).is_err());
        assert!(p.inward_normal_eps(0.1, 3.0, Side::Upper).is_err());
        let (s, clamped) = p.section_clamped(3.0);
        assert!(clamped);
        assert_eq!(s.volume(), 1.0);
    }

    #[test]
    fn invalid_profiles_rejected() {
        assert!(TubeProfile::new(ProfileFamily::Constant { lower: 0.1, upper: 1.0 }, 0.0, 1.0).is_err());
        assert!(TubeProfile::constant(1.0, 1.0, 0.0).is_err());
        let steep = ProfileFamily::Affine {
            lower: -0.5,
            lower_slope: -3.0,
            upper: 0.5,
            upper_slope: 3.0,
        };
        assert!(TubeProfile::new(steep.clone(), 0.0, 1.0)
            .unwrap()
            .with_slope_max(2.0)
            .is_err());
        assert!(TubeProfile::constant(1.0, 0.0, 1.0).unwrap().with_v_min(1.5).is_err());
    }

    #[test]
    fn flat_normal() {
        let p = TubeProfile::constant(1.0, -1.0, 1.0).unwrap();
        for eps in [1.0, 0.3, 0.01] {
            let n = p.inward_normal_eps(eps, 0.0, Side::Upper).unwrap();
            assert_eq!((n.gamma1_eps, n.gamma2_eps), (0.0, -1.0));
            let n = p.inward_normal_eps(eps, 0.0, Side::Lower).unwrap();
            assert_eq!((n.gamma1_eps, n.gamma2_eps), (0.0, 1.0));
        }
    }

    #[test]
    fn normal_small_eps_limits() {
        // |ε⁻¹ γ₁^ε| = |s| / sqrt(1 + ε² s²) for an upper boundary of slope s.
        let s = 0.1;
        let p = affine();
        let mut prev_g2 = 0.0;
        for eps in [0.1, 0.01] {
            let n = p.inward_normal_eps(eps, 0.5, Side::Upper).unwrap();
            let ratio = (n.gamma1_eps / eps).abs();
            let expected = s / (1.0f64 + eps * eps * s * s).sqrt();
            assert!((ratio - expected).abs() < 1e-15);
            assert!((ratio - s).abs() <= 0.5 * eps * eps * s * s * s + 1e-15);
            assert!(n.gamma2_eps.abs() > prev_g2);
            assert!(1.0 - n.gamma2_eps.abs() <= 0.5 * (eps * s).powi(2) + 1e-15);
            prev_g2 = n.gamma2_eps.abs();
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        for p in families() {
            for i in 1..41 {
                let x = p.x_lo + (p.x_hi - p.x_lo) * i as f64 / 41.0;
                let h = 1e-5;
                let s = p.section(x).unwrap();
                let sp = p.section(x + h).unwrap();
                let sm = p.section(x - h).unwrap();
                for side in [Side::Lower, Side::Upper] {
                    let fd1 = (sp.side(side).value - sm.side(side).value) / (2.0 * h);
                    let fd2 = (sp.side(side).d1 - sm.side(side).d1) / (2.0 * h);
                    assert!((fd1 - s.side(side).d1).abs() < 1e-7, "{} d1 at {x}", p.family.tag());
                    assert!((fd2 - s.side(side).d2).abs() < 1e-6, "{} d2 at {x}", p.family.tag());
                }
            }
        }
    }

    #[test]
    fn profile_json_shape() {
        let json = r#"{"family":"sigmoid","params":{"width_left":1.0,"width_right":0.5,"center":0.0,"scale":1.0},"x_lo":-3,"x_hi":3}"#;
        let p: TubeProfile = serde_json::from_str(json).unwrap();
        let p = p.validated().unwrap();
        assert_eq!(p.family.tag(), "sigmoid");
        assert_eq!(p.v_min(), p.volume(3.0).unwrap());
    }

    proptest! {
        #[test]
        fn drift_identity(idx in 0usize..6, u in 0.0f64..1.0) {
            let p = &families()[idx];
            let x = p.x_lo + u * (p.x_hi - p.x_lo);
            let q = p.q_average(p.normal_ratio_fn(), x).unwrap();
            let s = p.section(x).unwrap();
            prop_assert!((q * s.volume() - s.volume_d1()).abs() < 1e-12);
        }

        #[test]
        fn normals_have_unit_length(idx in 0usize..6, u in 0.0f64..1.0, eps in 1e-3f64..1.0, upper in any::<bool>()) {
            let p = &families()[idx];
            let x = p.x_lo + u * (p.x_hi - p.x_lo);
            let side = if upper { Side::Upper } else { Side::Lower };
            let n = p.inward_normal_eps(eps, x, side).unwrap();
            prop_assert!((n.gamma1_eps.hypot(n.gamma2_eps) - 1.0).abs() < 1e-15);
            prop_assert_eq!(n.gamma2_eps > 0.0, side == Side::Lower);
        }
    }
}
