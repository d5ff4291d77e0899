use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform cell-centred axis on `[lo, hi]` with `n` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo < hi && n >= 2 && lo.is_finite() && hi.is_finite()) {
            return Err(Error::Config(format!("axis [{lo}, {hi}] with {n} cells is invalid")));
        }
        Ok(Axis { lo, hi, n })
    }

    /// Axis with cell width close to `dx`.
    pub fn with_spacing(lo: f64, hi: f64, dx: f64) -> Result<Self> {
        Self::new(lo, hi, ((hi - lo) / dx).round().max(2.0) as usize)
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.lo + (j as f64 + 0.5) * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Left node index and weight for linear interpolation at `x`; points in
    /// the outer half cells use the edge value.
    #[inline]
    pub(crate) fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if !(x >= self.lo && x <= self.hi) {
            return Err(Error::OutsideDomain {
                x,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let s = (x - self.lo) / self.dx() - 0.5;
        if s <= 0.0 {
            return Ok((0, 0.0));
        }
        let j = s.floor() as usize;
        if j >= self.n - 1 {
            return Ok((self.n - 2, 1.0));
        }
        Ok((j, s - j as f64))
    }
}

/// Space-time discretisation shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x: Axis,
    /// Number of η nodes on `[0, 1]` (boundaries included) for strip solves.
    #[serde(default)]
    pub n_eta: Option<usize>,
    pub t_end: f64,
    pub dt: f64,
    /// Snapshot stride in time steps; the final time is always stored.
    #[serde(default = "one")]
    pub save_every: usize,
}

fn one() -> usize {
    1
}

impl Grid {
    pub fn new_1d(x: Axis, t_end: f64, dt: f64, save_every: usize) -> Self {
        Grid {
            x,
            n_eta: None,
            t_end,
            dt,
            save_every: save_every.max(1),
        }
    }

    pub fn new_2d(x: Axis, n_eta: usize, t_end: f64, dt: f64, save_every: usize) -> Self {
        Grid {
            n_eta: Some(n_eta),
            ..Self::new_1d(x, t_end, dt, save_every)
        }
    }

    /// Number of steps; `dt` is treated as an upper bound and shrunk to divide
    /// `t_end` exactly (see [`Grid::step`]).
    pub fn n_steps(&self) -> usize {
        if self.t_end <= 0.0 {
            0
        } else {
            (self.t_end / self.dt * (1.0 - 1e-12)).ceil() as usize
        }
    }

    /// Effective step `t_end / n_steps`, never larger than `dt`.
    pub fn step(&self) -> f64 {
        let n = self.n_steps();
        if n == 0 {
            self.dt
        } else {
            self.t_end / n as f64
        }
    }

    /// Snapshot times written by the solvers: `0`, every `save_every` steps,
    /// and `t_end`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        let n = self.n_steps();
        let dt = self.step();
        let mut times = vec![0.0];
        times.extend(
            (1..=n)
                .filter(|&k| k % self.save_every == 0 || k == n)
                .map(|k| k as f64 * dt),
        );
        times
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!(
                "grid needs dt > 0 and finite t_end >= 0 (dt = {}, t_end = {})",
                self.dt, self.t_end
            )));
        }
        if let Some(n) = self.n_eta {
            if n < 3 {
                return Err(Error::Config(format!("need at least 3 eta nodes, got {n}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub profile: String,
    /// `None` for the reduced equation.
    pub epsilon: Option<f64>,
    pub reaction: String,
}

/// Snapshots `u(t_i, x_j[, η_k])`, stored snapshot-major, then `x`, then `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: FieldMeta,
}

impl Field {
    pub fn n_eta(&self) -> usize {
        self.grid.n_eta.unwrap_or(1)
    }

    pub fn is_2d(&self) -> bool {
        self.grid.n_eta.is_some()
    }

    fn stride(&self) -> usize {
        self.grid.x.n * self.n_eta()
    }

    pub fn snapshot(&self, i: usize) -> &[f64] {
        let s = self.stride();
        &self.values[i * s..(i + 1) * s]
    }

    pub fn last(&self) -> &[f64] {
        self.snapshot(self.times.len() - 1)
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[i * self.stride() + j * self.n_eta() + k]
    }

    /// Index of the snapshot closest to `t`.
    pub fn nearest_time(&self, t: f64) -> usize {
        let i = self.times.partition_point(|&s| s < t);
        if i == 0 {
            0
        } else if i >= self.times.len() {
            self.times.len() - 1
        } else if (self.times[i] - t).abs() < (t - self.times[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }

    #[inline]
    fn locate_time(&self, t: f64) -> Result<(usize, f64)> {
        let n = self.times.len();
        let (t0, t1) = (self.times[0], self.times[n - 1]);
        let tol = 1e-12 * t1.abs().max(1.0);
        if !(t >= t0 - tol && t <= t1 + tol) {
            return Err(Error::OutsideDomain { x: t, lo: t0, hi: t1 });
        }
        if n == 1 {
            return Ok((0, 0.0));
        }
        let i = self.times.partition_point(|&s| s <= t).clamp(1, n - 1) - 1;
        let w = ((t - self.times[i]) / (self.times[i + 1] - self.times[i])).clamp(0.0, 1.0);
        Ok((i, w))
    }

    /// Time- and space-linear interpolation of a 1-D field.
    #[inline]
    pub fn interp_1d(&self, t: f64, x: f64) -> Result<f64> {
        let (i, wt) = self.locate_time(t)?;
        let (j, wx) = self.grid.x.locate(x)?;
        let row = |i: usize| {
            let s = self.snapshot(i);
            s[j] + wx * (s[j + 1] - s[j])
        };
        let a = row(i);
        Ok(if wt == 0.0 { a } else { a + wt * (row(i + 1) - a) })
    }

    /// Interpolation of a 2-D field at `(t, x, η)`, `η ∈ [0, 1]`.
    #[inline]
    pub fn interp_2d(&self, t: f64, x: f64, eta: f64) -> Result<f64> {
        let ne = self.n_eta();
        let (i, wt) = self.locate_time(t)?;
        let (j, wx) = self.grid.x.locate(x)?;
        let e = eta.clamp(0.0, 1.0) * (ne - 1) as f64;
        let k = (e.floor() as usize).min(ne - 2);
        let we = e - k as f64;
        let slab = |i: usize| {
            let f = |jj: usize, kk: usize| self.at(i, jj, kk);
            let lo = f(j, k) + wx * (f(j + 1, k) - f(j, k));
            let hi = f(j, k + 1) + wx * (f(j + 1, k + 1) - f(j, k + 1));
            lo + we * (hi - lo)
        };
        let a = slab(i);
        Ok(if wt == 0.0 { a } else { a + wt * (slab(i + 1) - a) })
    }

    /// `η`-averaged snapshot (trapezoidal weights); identity for 1-D fields.
    pub fn section_average(&self, i: usize) -> Vec<f64> {
        let ne = self.n_eta();
        let s = self.snapshot(i);
        if ne == 1 {
            return s.to_vec();
        }
        s.chunks(ne)
            .map(|col| {
                let inner: f64 = col[1..ne - 1].iter().sum();
                (inner + 0.5 * (col[0] + col[ne - 1])) / (ne - 1) as f64
            })
            .collect()
    }
}

/// `sup |u^ε(t, x, η) − u(t, x)|` over the strip nodes with `x ∈ [x_lo, x_hi]`
/// and all `η`.
pub fn reduction_gap(strip: &Field, reduced: &Field, t: f64, x_lo: f64, x_hi: f64) -> Result<f64> {
    if !strip.is_2d() || reduced.is_2d() {
        return Err(Error::Config("reduction_gap compares a strip field with a 1-D field".into()));
    }
    let ne = strip.n_eta();
    let mut gap: f64 = 0.0;
    for x in strip.grid.x.nodes().into_iter().filter(|x| *x >= x_lo && *x <= x_hi) {
        let u = reduced.interp_1d(t, x)?;
        for k in 0..ne {
            gap = gap.max((strip.interp_2d(t, x, k as f64 / (ne - 1) as f64)? - u).abs());
        }
    }
    Ok(gap)
}
