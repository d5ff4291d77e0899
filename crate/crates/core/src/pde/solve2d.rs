use super::{field::FieldMeta, Field, Grid, Reaction, BOUND_SLACK};
use crate::error::{Error, Result};
use crate::geometry::TubeProfile;

/// Coefficients of the strip equation in `(x, η)` coordinates.
///
/// With `η = (y − ε g⁻)/(ε V)` the heat operator becomes
/// `½ [w_xx + 2b w_xη + (b² + (εV)⁻²) w_ηη + b_x w_η]` where
/// `b = −(g⁻' + η V')/V` and `b_x = −(g⁻'' + η V'')/V − 2 b V'/V`.
/// The Robin condition turns into `w_η = α w_x ∓ β c w` on `η = 0` / `η = 1`.
pub(crate) struct StripCoefficients {
    nx: usize,
    ne: usize,
    dx: f64,
    de: f64,
    b: Vec<f64>,
    a22: Vec<f64>,
    bx: Vec<f64>,
    x: Vec<f64>,
    alpha_lo: Vec<f64>,
    beta_lo: Vec<f64>,
    alpha_up: Vec<f64>,
    beta_up: Vec<f64>,
    y_lo: Vec<f64>,
    y_up: Vec<f64>,
}

impl StripCoefficients {
    pub(crate) fn new(profile: &TubeProfile, epsilon: f64, grid: &Grid) -> Result<Self> {
        let ax = grid.x;
        let ne = grid.n_eta.ok_or_else(|| Error::Config("strip solve needs n_eta".into()))?;
        if ax.lo < profile.x_lo || ax.hi > profile.x_hi {
            return Err(Error::Config(format!(
                "grid [{}, {}] extends outside the profile domain [{}, {}]",
                ax.lo, ax.hi, profile.x_lo, profile.x_hi
            )));
        }
        let nx = ax.n;
        let de = 1.0 / (ne - 1) as f64;
        let mut c = StripCoefficients {
            nx,
            ne,
            dx: ax.dx(),
            de,
            b: Vec::with_capacity(nx * ne),
            a22: Vec::with_capacity(nx * ne),
            bx: Vec::with_capacity(nx * ne),
            x: ax.nodes(),
            alpha_lo: Vec::with_capacity(nx),
            beta_lo: Vec::with_capacity(nx),
            alpha_up: Vec::with_capacity(nx),
            beta_up: Vec::with_capacity(nx),
            y_lo: Vec::with_capacity(nx),
            y_up: Vec::with_capacity(nx),
        };
        for j in 0..nx {
            let s = profile.section(c.x[j])?;
            let (v, v1, v2) = (s.volume(), s.volume_d1(), s.volume_d2());
            let (g1, g2) = (s.lower.d1, s.lower.d2);
            let ev = epsilon * v;
            for k in 0..ne {
                let eta = k as f64 * de;
                let b = -(g1 + eta * v1) / v;
                c.b.push(b);
                c.a22.push(b * b + 1.0 / (ev * ev));
                c.bx.push(-(g2 + eta * v2) / v - 2.0 * b * v1 / v);
            }
            for (jet, alpha, beta, y) in [
                (s.lower, &mut c.alpha_lo, &mut c.beta_lo, &mut c.y_lo),
                (s.upper, &mut c.alpha_up, &mut c.beta_up, &mut c.y_up),
            ] {
                let slope = epsilon * jet.d1;
                let n2 = 1.0 + slope * slope;
                alpha.push(slope * ev / n2);
                beta.push(epsilon * n2.sqrt() * ev / n2);
                y.push(epsilon * jet.value);
            }
        }
        Ok(c)
    }

    /// Physical ordinate of node `(j, k)`.
    fn y(&self, j: usize, k: usize) -> f64 {
        let eta = k as f64 * self.de;
        self.y_lo[j] + eta * (self.y_up[j] - self.y_lo[j])
    }

    /// `w_η` prescribed by the Robin condition on the lower (`upper = false`)
    /// or upper boundary, given `w_x`, the rate `c` and `w` there.
    #[inline]
    fn robin_slope(&self, j: usize, upper: bool, wx: f64, c: f64, w: f64) -> f64 {
        if upper {
            self.alpha_up[j] * wx + self.beta_up[j] * c * w
        } else {
            self.alpha_lo[j] * wx - self.beta_lo[j] * c * w
        }
    }

    fn stable_dt(&self, reaction_lip: f64) -> f64 {
        let (dx, de) = (self.dx, self.de);
        let mut worst: f64 = 0.0;
        for j in 0..self.nx {
            for k in 0..self.ne {
                let i = j * self.ne + k;
                let mut r = 1.0 / (dx * dx) + self.a22[i] / (de * de) + self.b[i].abs() / (dx * de);
                if k == 0 || k == self.ne - 1 {
                    let beta = if k == 0 { self.beta_lo[j] } else { self.beta_up[j] };
                    r += (self.a22[i] / de + 0.5 * self.bx[i].abs()) * beta * reaction_lip;
                }
                worst = worst.max(r);
            }
        }
        1.0 / worst
    }

    /// Fills the padded buffer `e` (`(nx + 2) × (ne + 2)`) from `w`, with
    /// Robin ghost rows and no-flux ghost columns.
    fn pad(&self, w: &[f64], e: &mut [f64], reaction: &Reaction) {
        let (nx, ne) = (self.nx, self.ne);
        let pw = ne + 2;
        let at = |j: usize, k: usize| w[j * ne + k];
        for j in 0..nx {
            e[(j + 1) * pw + 1..(j + 1) * pw + 1 + ne].copy_from_slice(&w[j * ne..(j + 1) * ne]);
            let jl = j.saturating_sub(1);
            let jr = (j + 1).min(nx - 1);
            for upper in [false, true] {
                let k = if upper { ne - 1 } else { 0 };
                let wx = (at(jr, k) - at(jl, k)) / (2.0 * self.dx);
                let wb = at(j, k);
                let y = if upper { self.y_up[j] } else { self.y_lo[j] };
                let c = reaction.c(self.x[j], y, wb);
                let slope = self.robin_slope(j, upper, wx, c, wb);
                if upper {
                    e[(j + 1) * pw + ne + 1] = at(j, ne - 2) + 2.0 * self.de * slope;
                } else {
                    e[(j + 1) * pw] = at(j, 1) - 2.0 * self.de * slope;
                }
            }
        }
        e.copy_within(pw..2 * pw, 0);
        e.copy_within(nx * pw..(nx + 1) * pw, (nx + 1) * pw);
    }

    /// `½ [w_xx + 2b w_xη + a22 w_ηη + b_x w_η]` at every node.
    fn apply(&self, e: &[f64], out: &mut [f64]) {
        let (nx, ne) = (self.nx, self.ne);
        let pw = ne + 2;
        let (idx2, ide2, idxde, ide) = (
            1.0 / (self.dx * self.dx),
            1.0 / (self.de * self.de),
            1.0 / (4.0 * self.dx * self.de),
            1.0 / (2.0 * self.de),
        );
        for j in 0..nx {
            let r = (j + 1) * pw;
            for k in 0..ne {
                let c = r + k + 1;
                let w = e[c];
                let wxx = (e[c + pw] - 2.0 * w + e[c - pw]) * idx2;
                let wee = (e[c + 1] - 2.0 * w + e[c - 1]) * ide2;
                let we = (e[c + 1] - e[c - 1]) * ide;
                let wxe = (e[c + pw + 1] - e[c + pw - 1] - e[c - pw + 1] + e[c - pw - 1]) * idxde;
                let i = j * ne + k;
                out[i] = 0.5 * (wxx + 2.0 * self.b[i] * wxe + self.a22[i] * wee + self.bx[i] * we);
            }
        }
    }
}

/// Largest stable step for [`solve_strip_2d`].
pub fn stable_dt_2d(profile: &TubeProfile, epsilon: f64, reaction: &Reaction, grid: &Grid, u_max: f64) -> Result<f64> {
    let coef = StripCoefficients::new(profile, epsilon, grid)?;
    let lip = reaction.rate.max_abs() * reaction.shape_lipschitz(u_max.max(reaction.cutoff().unwrap_or(u_max)));
    Ok(coef.stable_dt(lip))
}

/// Explicit solve of `u_t = ½ Δu` in the strip `{ε g⁻(x) < y < ε g⁺(x)}` with
/// `∂u/∂γ^ε = −ε c(x, y, u) u` on the curved boundary, no-flux in `x` at the
/// grid ends, and initial data `f(x, y)`.
///
/// The field is stored on the `(x, η)` grid; `η_k = k/(n_eta − 1)` includes
/// both boundary curves.
pub fn solve_strip_2d<F>(profile: &TubeProfile, epsilon: f64, reaction: &Reaction, f: F, grid: &Grid) -> Result<Field>
where
    F: Fn(f64, f64) -> f64,
{
    grid.validate()?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    reaction.validate(&grid.x.nodes())?;
    let coef = StripCoefficients::new(profile, epsilon, grid)?;
    let (nx, ne) = (coef.nx, coef.ne);
    let mut w = Vec::with_capacity(nx * ne);
    for j in 0..nx {
        for k in 0..ne {
            w.push(f(coef.x[j], coef.y(j, k)));
        }
    }
    if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Parameter(format!("initial data must be finite and nonnegative, found {bad}")));
    }
    let sup_f = w.iter().cloned().fold(0.0, f64::max);
    let upper = reaction.cutoff().map(|nc| nc.max(sup_f));
    let dt = grid.step();
    let lip = reaction.rate.max_abs() * reaction.shape_lipschitz(upper.unwrap_or(sup_f).max(sup_f));
    let bound = 0.9 * coef.stable_dt(lip);
    if dt > bound {
        return Err(Error::Cfl { dt, bound });
    }
    let slack = BOUND_SLACK * upper.unwrap_or(sup_f).max(1.0);

    let n_steps = grid.n_steps();
    let mut times = vec![0.0];
    let mut values = w.clone();
    let mut padded = vec![0.0; (nx + 2) * (ne + 2)];
    let mut lw = vec![0.0; nx * ne];
    for step in 1..=n_steps {
        coef.pad(&w, &mut padded, reaction);
        coef.apply(&padded, &mut lw);
        for (i, (v, l)) in w.iter_mut().zip(&lw).enumerate() {
            *v += dt * l;
            let above = upper.is_some_and(|m| *v > m + slack);
            if !v.is_finite() || *v < -slack || above {
                return Err(Error::Numeric {
                    step,
                    reason: format!(
                        "maximum principle violated at x = {}, eta = {}: u = {v}",
                        coef.x[i / ne],
                        (i % ne) as f64 * coef.de
                    ),
                });
            }
        }
        if step % grid.save_every == 0 || step == n_steps {
            times.push(step as f64 * dt);
            values.extend_from_slice(&w);
        }
    }
    Ok(Field {
        grid: *grid,
        times,
        values,
        meta: FieldMeta {
            profile: profile.family.tag().to_string(),
            epsilon: Some(epsilon),
            reaction: reaction.label(),
        },
    })
}
