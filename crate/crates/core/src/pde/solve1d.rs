use super::{field::FieldMeta, Field, Grid, Reaction, BOUND_SLACK};
use crate::error::{Error, Result};
use crate::geometry::TubeProfile;

/// Precomputed coefficients of the conservative scheme.
struct Coefficients {
    /// `V_{j+½} / (2 V_j dx²)` and `V_{j−½} / (2 V_j dx²)`; zero across the ends.
    plus: Vec<f64>,
    minus: Vec<f64>,
    /// `r(x_j) · (S/2V)(x_j)`, the reduced rate factor.
    rate: Vec<f64>,
}

fn coefficients(profile: &TubeProfile, reaction: &Reaction, grid: &Grid) -> Result<Coefficients> {
    let ax = grid.x;
    if ax.lo < profile.x_lo || ax.hi > profile.x_hi {
        return Err(Error::Config(format!(
            "grid [{}, {}] extends outside the profile domain [{}, {}]",
            ax.lo, ax.hi, profile.x_lo, profile.x_hi
        )));
    }
    let dx = ax.dx();
    let n = ax.n;
    let mut volume = Vec::with_capacity(n);
    let mut rate = Vec::with_capacity(n);
    for j in 0..n {
        let x = ax.node(j);
        let v = profile.volume(x)?;
        volume.push(v);
        rate.push(reaction.rate.at(x) * 0.5 * profile.surface(x)? / v);
    }
    let mut plus = vec![0.0; n];
    let mut minus = vec![0.0; n];
    for j in 0..n {
        let scale = 0.5 / (volume[j] * dx * dx);
        if j + 1 < n {
            plus[j] = profile.volume(ax.lo + (j + 1) as f64 * dx)? * scale;
        }
        if j > 0 {
            minus[j] = profile.volume(ax.lo + j as f64 * dx)? * scale;
        }
    }
    Ok(Coefficients {
        plus,
        minus,
        rate,
    })
}

fn upper_level(reaction: &Reaction, u0: &[f64]) -> Option<f64> {
    let sup = u0.iter().cloned().fold(0.0, f64::max);
    reaction.cutoff().map(|nc| nc.max(sup))
}

/// Largest stable step for [`solve_limit_1d`] on `grid` with initial data
/// bounded by `u_max`.
pub fn stable_dt_1d(profile: &TubeProfile, reaction: &Reaction, grid: &Grid, u_max: f64) -> Result<f64> {
    let c = coefficients(profile, reaction, grid)?;
    let lip = reaction.shape_lipschitz(u_max.max(reaction.cutoff().unwrap_or(u_max)));
    let worst = (0..grid.x.n)
        .map(|j| c.plus[j] + c.minus[j] + c.rate[j].abs() * lip)
        .fold(0.0, f64::max);
    Ok(1.0 / worst)
}

/// Explicit conservative solve of the reduced equation with no-flux ends and
/// initial data `f` sampled at cell centres.
///
/// The step is `grid.step()`; it must satisfy `dt ≤ 0.9 ·` [`stable_dt_1d`].
/// Every step is checked against `0 ≤ u ≤ max(N_c, sup f)`.
pub fn solve_limit_1d<F>(profile: &TubeProfile, reaction: &Reaction, f: F, grid: &Grid) -> Result<Field>
where
    F: Fn(f64) -> f64,
{
    grid.validate()?;
    if grid.n_eta.is_some() {
        return Err(Error::Config("the reduced solver takes a 1-D grid (n_eta must be unset)".into()));
    }
    let ax = grid.x;
    reaction.validate(&ax.nodes())?;
    let coef = coefficients(profile, reaction, grid)?;
    let mut u: Vec<f64> = ax.nodes().into_iter().map(&f).collect();
    if let Some(bad) = u.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Parameter(format!("initial data must be finite and nonnegative, found {bad}")));
    }
    let sup_f = u.iter().cloned().fold(0.0, f64::max);
    let upper = upper_level(reaction, &u);
    let dt = grid.step();
    let bound = stable_dt_1d(profile, reaction, grid, sup_f)?;
    if dt > 0.9 * bound {
        return Err(Error::Cfl { dt, bound: 0.9 * bound });
    }
    let slack = BOUND_SLACK * upper.unwrap_or(sup_f).max(1.0);

    let n_steps = grid.n_steps();
    let mut times = vec![0.0];
    let mut values = u.clone();
    let n = ax.n;
    let mut next = vec![0.0; n];
    for step in 1..=n_steps {
        for j in 0..n {
            let left = if j > 0 { u[j - 1] } else { u[j] };
            let right = if j + 1 < n { u[j + 1] } else { u[j] };
            let diff = coef.plus[j] * (right - u[j]) - coef.minus[j] * (u[j] - left);
            let growth = coef.rate[j] * reaction.shape(u[j]) * u[j];
            next[j] = u[j] + dt * (diff + growth);
        }
        std::mem::swap(&mut u, &mut next);
        for (j, &v) in u.iter().enumerate() {
            let above = upper.is_some_and(|m| v > m + slack);
            if !v.is_finite() || v < -slack || above {
                return Err(Error::Numeric {
                    step,
                    reason: format!(
                        "maximum principle violated at x = {}: u = {v} outside [0, {}]",
                        ax.node(j),
                        upper.map_or("inf".to_string(), |m| m.to_string())
                    ),
                });
            }
        }
        if step % grid.save_every == 0 || step == n_steps {
            times.push(step as f64 * dt);
            values.extend_from_slice(&u);
        }
    }
    Ok(Field {
        grid: *grid,
        times,
        values,
        meta: FieldMeta {
            profile: profile.family.tag().to_string(),
            epsilon: None,
            reaction: reaction.label(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProfileFamily;
    use crate::pde::Axis;

    fn sinusoidal() -> TubeProfile {
        TubeProfile::new(
            ProfileFamily::Sinusoidal {
                base: 1.0,
                amplitude: 0.5,
                wavenumber: 1.0,
                phase: 0.0,
            },
            -10.0,
            10.0,
        )
        .unwrap()
    }

    fn mass(profile: &TubeProfile, field: &Field, i: usize) -> f64 {
        let ax = field.grid.x;
        field
            .snapshot(i)
            .iter()
            .enumerate()
            .map(|(j, u)| u * profile.volume(ax.node(j)).unwrap() * ax.dx())
            .sum()
    }

    #[test]
    fn mass_is_conserved_without_reaction() {
        let p = sinusoidal();
        let grid = Grid::new_1d(Axis::new(-6.0, 6.0, 240).unwrap(), 2.0, 0.001, 100);
        let field = solve_limit_1d(&p, &Reaction::zero(), |x| (-x * x).exp(), &grid).unwrap();
        let m0 = mass(&p, &field, 0);
        let m1 = mass(&p, &field, field.times.len() - 1);
        assert!(((m1 - m0) / m0).abs() < 1e-12, "{m0} {m1}");
    }

    #[test]
    fn constants_are_stationary_and_linear_growth_is_exponential() {
        let p = sinusoidal();
        let grid = Grid::new_1d(Axis::new(-3.0, 3.0, 60).unwrap(), 1.0, 0.001, 1000);
        let field = solve_limit_1d(&p, &Reaction::zero(), |_| 0.7, &grid).unwrap();
        assert!(field.last().iter().all(|u| (u - 0.7).abs() < 1e-14));

        let w = TubeProfile::constant(2.0, -3.0, 3.0).unwrap();
        let field = solve_limit_1d(&w, &Reaction::linear(0.4), |_| 1.0, &grid).unwrap();
        // c̄ = 0.4 / 2 per unit time, explicit Euler growth (1 + 0.2 dt)^n.
        let expect = (1.0 + 0.2 * grid.step()).powi(grid.n_steps() as i32);
        assert!(field.last().iter().all(|u| (u - expect).abs() < 1e-12));
    }

    #[test]
    fn cfl_violation_is_reported() {
        let p = sinusoidal();
        let grid = Grid::new_1d(Axis::new(-3.0, 3.0, 600).unwrap(), 1.0, 0.01, 1);
        match solve_limit_1d(&p, &Reaction::zero(), |_| 1.0, &grid) {
            Err(Error::Cfl { dt, bound }) => assert!(dt > bound),
            other => panic!("expected CFL error, got {other:?}"),
        }
    }

    #[test]
    fn kpp_stays_in_unit_interval() {
        let p = sinusoidal();
        let grid = Grid::new_1d(Axis::new(-8.0, 8.0, 160).unwrap(), 4.0, 0.002, 500);
        let field = solve_limit_1d(&p, &Reaction::kpp(1.0), |x| if x < 0.0 { 1.0 } else { 0.0 }, &grid).unwrap();
        assert!(field.values.iter().all(|&u| (0.0..=1.0 + 1e-12).contains(&u)));
    }

    #[test]
    fn heat_kernel_on_constant_width() {
        // Gaussian initial data spreads as N(0, s² + t).
        let p = TubeProfile::constant(1.0, -12.0, 12.0).unwrap();
        let s2: f64 = 0.25;
        let grid = Grid::new_1d(Axis::new(-12.0, 12.0, 960).unwrap(), 1.0, 0.0002, 5000);
        let g = |x: f64, v: f64| (-x * x / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        let field = solve_limit_1d(&p, &Reaction::zero(), |x| g(x, s2), &grid).unwrap();
        let ax = grid.x;
        let err = (0..ax.n)
            .map(|j| (field.last()[j] - g(ax.node(j), s2 + 1.0)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "max error {err}");
    }

    #[test]
    fn grid_must_fit_profile() {
        let p = TubeProfile::constant(1.0, -1.0, 1.0).unwrap();
        let grid = Grid::new_1d(Axis::new(-2.0, 1.0, 30).unwrap(), 1.0, 0.001, 1);
        assert!(matches!(solve_limit_1d(&p, &Reaction::zero(), |_| 0.0, &grid), Err(Error::Config(_))));
    }
}
