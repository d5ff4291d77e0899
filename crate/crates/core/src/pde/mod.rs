//! Explicit finite-difference solvers.
//!
//! * [`solve_limit_1d`]: the reduced equation
//!   `u_t = ½ (1/V)(V u_x)_x + c̄(x, u) u`, `c̄ = ½ (S/V) c(x, 0, u)`, in
//!   conservative form with no-flux ends.
//! * [`solve_strip_2d`]: `u_t = ½ Δu` in the physical strip with the boundary
//!   condition `∂u/∂γ^ε = −ε c u`, mapped onto the rectangle
//!   `(x, η) ∈ [x_lo, x_hi] × [0, 1]` with `η = (y − ε g⁻)/(ε V)`.
//!
//! Both solvers store snapshots in a [`Field`] and enforce the bound
//! `0 ≤ u ≤ max(N_c, sup f)` at every step.

mod field;
mod front;
mod io;
mod reaction;
mod solve1d;
mod solve2d;

pub use field::{reduction_gap, Axis, Field, FieldMeta, Grid};
pub use front::{front_position, front_speed, front_speed_log_corrected, rescale_solution, FrontSample, RescaleWindow};
pub use io::{read_binary, write_binary, write_csv, FIELD_MAGIC};
pub use reaction::{Rate, Reaction, ReactionConfig, ReactionKind};
pub use solve1d::{solve_limit_1d, stable_dt_1d};
pub use solve2d::{solve_strip_2d, stable_dt_2d};

/// Slack allowed on the maximum-principle bound, relative to `max(1, U)`.
pub(crate) const BOUND_SLACK: f64 = 1e-8;
