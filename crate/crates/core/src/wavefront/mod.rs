//! Variational front machinery in one space dimension.
//!
//! For the reduced rate `c̄(x)` the action of a path `φ` on `[0, t]` is
//! `R(φ) = ∫ [c̄(φ_s) − ½ |φ̇_s|²] ds` and
//! `W(t, x) = sup { R(φ) : φ_0 = x, φ_t ∈ F₀ }`. The front at time `t` is the
//! boundary of `{W(t, ·) > 0}`; `t*(x)` is the first time `W(t, x)` reaches 0.

mod action;
mod bistable;
mod certificate;
mod dp;
mod intervals;
mod step;
mod wstar;

pub use action::{action_r, ActionPath};
pub use bistable::{bistable_profile_check, bistable_speed, BistableCheck};
pub use certificate::{example_cbar, jump_certificate, ExampleCbar, JumpCertificate, SandwichSample};
pub use dp::{compute_w_dp, DpGrid, FrontResult};
pub use intervals::Intervals;
pub use step::StepProfile;
pub use wstar::{compute_w_star, WStarBudget};

/// Golden-section maximisation of a unimodal function on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
