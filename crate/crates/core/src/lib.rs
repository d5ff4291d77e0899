//! Numerics for reaction-diffusion equations posed in narrow strips with
//! nonlinear (Robin-type) boundary reactions, and for their reduced
//! one-dimensional limit.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: strip profiles `y ∈ (ε g⁻(x), ε g⁺(x))`, volume `V`,
//!   surface `S`, inward normals and boundary averages.
//! * [`reflected_sde`]: Wiener process with normal reflection in the strip and
//!   its discrete local time.
//! * [`limit_sde`]: the reduced diffusion with drift `½ (log V)'` and the
//!   coupled comparison against the reflected process.
//! * [`pde`]: explicit finite-difference solvers for the strip problem and the
//!   reduced equation, plus front tracking.
//! * [`feynman_kac`]: Monte Carlo evaluation of the nonlinear Feynman–Kac
//!   representations, including Picard iteration on a space-time table.
//! * [`wavefront`]: action functional, `W(t, x)` by dynamic programming, step
//!   media, jump certificates and bistable speeds.
//! * [`random_media`]: stationary random environments, the exponent `μ(z)` and
//!   the asymptotic front speed `ν*`.
//!
//! Randomness always flows through [`rng`], which derives independent
//! counter-based substreams from a single master seed so that ensemble
//! results do not depend on the thread schedule.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod feynman_kac;
pub mod geometry;
pub mod limit_sde;
pub mod pde;
pub mod random_media;
pub mod reflected_sde;
pub mod rng;
pub mod stats;
pub mod wavefront;

mod ensemble;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use geometry::{BoundaryPoint, ProfileFamily, Side, TubeProfile};
pub use pde::{Axis, Field, Grid, Reaction, ReactionKind};

pub use reflected_sde::{ReflectedPath, SimConfig};

pub use random_media::{Environment, EnvironmentSpec};
pub use wavefront::{FrontResult, Intervals, JumpCertificate, StepProfile};
