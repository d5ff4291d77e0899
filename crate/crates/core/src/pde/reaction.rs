use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the reaction rate in `u`; the full rate is `c(x, y, u) = r(x) · shape(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReactionKind {
    /// `c ≡ 0`.
    Zero,
    /// `c = r(x)`, independent of `u`.
    Linear,
    /// `c = r(x) (1 − u)`.
    Kpp,
    /// `c = r(x) (u − μ)(1 − u)`, `0 < μ < 1`.
    Bistable { mu: f64 },
}

/// Spatial rate profile `r(x)` with declared bounds.
#[derive(Clone)]
pub struct Rate {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub min: f64,
    pub max: f64,
    pub label: String,
}

impl Rate {
    pub fn constant(r: f64) -> Self {
        Rate {
            f: Arc::new(move |_| r),
            min: r,
            max: r,
            label: format!("{r}"),
        }
    }

    /// Rate given by a function with bounds `min ≤ r(x) ≤ max`.
    pub fn from_fn<F>(f: F, min: f64, max: f64, label: impl Into<String>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Rate {
            f: Arc::new(f),
            min,
            max,
            label: label.into(),
        }
    }

    #[inline]
    pub fn at(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn max_abs(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

impl fmt::Debug for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rate({}, [{}, {}])", self.label, self.min, self.max)
    }
}

/// Boundary reaction `c(x, y, u)`.
#[derive(Debug, Clone)]
pub struct Reaction {
    pub kind: ReactionKind,
    pub rate: Rate,
}

impl Reaction {
    pub fn zero() -> Self {
        Reaction {
            kind: ReactionKind::Zero,
            rate: Rate::constant(0.0),
        }
    }

    pub fn linear(lambda: f64) -> Self {
        Reaction {
            kind: ReactionKind::Linear,
            rate: Rate::constant(lambda),
        }
    }

    pub fn kpp(rate: f64) -> Self {
        Reaction {
            kind: ReactionKind::Kpp,
            rate: Rate::constant(rate),
        }
    }

    pub fn bistable(mu: f64, rate: f64) -> Self {
        Reaction {
            kind: ReactionKind::Bistable { mu },
            rate: Rate::constant(rate),
        }
    }

    pub fn with_rate(kind: ReactionKind, rate: Rate) -> Self {
        Reaction { kind, rate }
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            ReactionKind::Zero => "zero".to_string(),
            ReactionKind::Linear => "linear".to_string(),
            ReactionKind::Kpp => "kpp".to_string(),
            ReactionKind::Bistable { mu } => format!("bistable(mu={mu})"),
        };
        format!("{k}*{}", self.rate.label)
    }

    #[inline]
    pub fn shape(&self, u: f64) -> f64 {
        match self.kind {
            ReactionKind::Zero => 0.0,
            ReactionKind::Linear => 1.0,
            ReactionKind::Kpp => 1.0 - u,
            ReactionKind::Bistable { mu } => (u - mu) * (1.0 - u),
        }
    }

    /// `c(x, y, u)`; the built-in reactions do not depend on `y`.
    #[inline]
    pub fn c(&self, x: f64, _y: f64, u: f64) -> f64 {
        match self.kind {
            ReactionKind::Zero => 0.0,
            _ => self.rate.at(x) * self.shape(u),
        }
    }

    /// Positivity cutoff `N_c`: `c(x, y, u) ≤ 0` for `u ≥ N_c`. `None` when no
    /// such level exists (growing linear reactions).
    pub fn cutoff(&self) -> Option<f64> {
        match self.kind {
            ReactionKind::Zero => Some(0.0),
            ReactionKind::Linear if self.rate.max <= 0.0 => Some(0.0),
            ReactionKind::Linear => None,
            ReactionKind::Kpp | ReactionKind::Bistable { .. } if self.rate.min >= 0.0 => Some(1.0),
            _ => None,
        }
    }

    /// Upper bound on `|∂(shape(u) u)/∂u|` for `u ∈ [0, u_max]`.
    pub(crate) fn shape_lipschitz(&self, u_max: f64) -> f64 {
        let d = |u: f64| match self.kind {
            ReactionKind::Zero => 0.0,
            ReactionKind::Linear => 1.0,
            ReactionKind::Kpp => 1.0 - 2.0 * u,
            ReactionKind::Bistable { mu } => -3.0 * u * u + 2.0 * (1.0 + mu) * u - mu,
        };
        let mut pts = vec![0.0, u_max];
        if let ReactionKind::Bistable { mu } = self.kind {
            let vertex = (1.0 + mu) / 3.0;
            if vertex > 0.0 && vertex < u_max {
                pts.push(vertex);
            }
        }
        pts.into_iter().map(|u| d(u).abs()).fold(0.0, f64::max)
    }

    /// Upper bound on `|∂(c u)/∂u|` over all `x` and `u ∈ [0, u_max]`.
    pub fn lipschitz(&self, u_max: f64) -> f64 {
        self.rate.max_abs() * self.shape_lipschitz(u_max)
    }

    /// Upper bound on `|c|` over all `x` and `u ∈ [0, u_max]`.
    pub fn c_max(&self, u_max: f64) -> f64 {
        let s = match self.kind {
            ReactionKind::Zero => 0.0,
            ReactionKind::Linear => 1.0,
            ReactionKind::Kpp => 1.0f64.max((1.0 - u_max).abs()),
            ReactionKind::Bistable { mu } => {
                let vertex = 0.5 * (1.0 + mu);
                [0.0, u_max, vertex.clamp(0.0, u_max)]
                    .iter()
                    .map(|&u| ((u - mu) * (1.0 - u)).abs())
                    .fold(0.0, f64::max)
            }
        };
        self.rate.max_abs() * s
    }

    /// Checks the structural assumptions by sampling `x ∈ xs` and `u`:
    /// KPP rates are positive below 1, negative above 1 and maximal at 0;
    /// bistable rates have `0 < μ < 1`.
    pub fn validate(&self, xs: &[f64]) -> Result<()> {
        match self.kind {
            ReactionKind::Bistable { mu } if !(mu > 0.0 && mu < 1.0) => {
                return Err(Error::Parameter(format!("bistable threshold mu = {mu} must lie in (0, 1)")));
            }
            ReactionKind::Kpp => {
                for &x in xs {
                    let c0 = self.c(x, 0.0, 0.0);
                    for i in 0..=40 {
                        let u = 2.0 * i as f64 / 40.0;
                        let c = self.c(x, 0.0, u);
                        let ok = if u < 1.0 {
                            c > 0.0
                        } else if u > 1.0 {
                            c < 0.0
                        } else {
                            true
                        };
                        if !ok || c > c0 {
                            return Err(Error::Parameter(format!(
                                "rate is not of KPP type at x = {x}, u = {u} (c = {c}, c(x,0,0) = {c0})"
                            )));
                        }
                    }
                }
            }
            _ => {}
        }
        for &x in xs {
            let r = self.rate.at(x);
            if !r.is_finite() || r < self.rate.min - 1e-12 || r > self.rate.max + 1e-12 {
                return Err(Error::Parameter(format!(
                    "rate r({x}) = {r} outside its declared bounds [{}, {}]",
                    self.rate.min, self.rate.max
                )));
            }
        }
        Ok(())
    }
}

/// Serializable reaction description: constant rate times a shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReactionConfig {
    #[serde(flatten)]
    pub kind: ReactionKind,
    #[serde(default = "one")]
    pub rate: f64,
}

fn one() -> f64 {
    1.0
}

impl ReactionConfig {
    pub fn build(&self) -> Result<Reaction> {
        let r = Reaction::with_rate(self.kind, Rate::constant(self.rate));
        r.validate(&[0.0])?;
        Ok(r)
    }
}
