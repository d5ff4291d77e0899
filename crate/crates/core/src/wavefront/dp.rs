use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Intervals;
use crate::error::{Error, Result};

/// Vertex grid `x_j = x_lo + j dx` (both ends included), time step `dt` and
/// velocity cap `v_max` for the dynamic programme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub dx: f64,
    pub dt: f64,
    pub v_max: f64,
}

impl DpGrid {
    pub fn n_x(&self) -> usize {
        ((self.x_hi - self.x_lo) / self.dx).round() as usize + 1
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.x_lo + j as f64 * self.dx
    }

    /// Largest per-step displacement in cells.
    pub fn reach(&self) -> usize {
        (self.v_max * self.dt / self.dx + 1e-9).floor() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_lo < self.x_hi && self.dx > 0.0 && self.dt > 0.0 && self.v_max > 0.0) {
            return Err(Error::Config(format!("invalid DP grid {self:?}")));
        }
        if self.reach() == 0 {
            return Err(Error::Config(format!(
                "v_max dt = {} is below one cell ({}); no motion is possible",
                self.v_max * self.dt,
                self.dx
            )));
        }
        Ok(())
    }
}

/// `W(t_k, x_j)` on the DP grid, the first-hitting curve `t*` and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontResult {
    pub grid: DpGrid,
    pub xs: Vec<f64>,
    pub times: Vec<f64>,
    /// Time-major; `−∞` where no admissible path exists.
    pub w: Vec<f64>,
    /// First time with `W ≥ 0`, linearly interpolated in `t`.
    pub t_star: Vec<Option<f64>>,
    /// Fraction of relevant cells whose maximiser sat on the velocity cap.
    pub pinned_fraction: f64,
    /// Set when `c̄` is not nondecreasing on the grid, in which case the
    /// regularity condition behind `{W = 0}` marking the front is unverified.
    pub condition_n_advisory: Option<String>,
}

impl FrontResult {
    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.xs.len();
        &self.w[k * n..(k + 1) * n]
    }

    #[inline]
    pub fn w_at(&self, k: usize, j: usize) -> f64 {
        self.w[k * self.xs.len() + j]
    }

    /// Nearest grid index to `x`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let j = ((x - self.grid.x_lo) / self.grid.dx).round();
        (j >= 0.0 && (j as usize) < self.xs.len()).then_some(j as usize)
    }

    pub fn time_index(&self, t: f64) -> usize {
        ((t / self.grid.dt).round() as usize).min(self.times.len() - 1)
    }

    /// `t*` at the nearest grid node.
    pub fn t_star_at(&self, x: f64) -> Option<f64> {
        self.index_of(x).and_then(|j| self.t_star[j])
    }

    /// Maximal intervals of `{x : W(t, x) > 0}` at the snapshot nearest `t`,
    /// reported by their outermost grid nodes.
    pub fn excited_components(&self, t: f64) -> Intervals {
        let row = self.row(self.time_index(t));
        let mut spans = Vec::new();
        let mut start: Option<usize> = None;
        for (j, &w) in row.iter().enumerate() {
            match (w > 0.0, start) {
                (true, None) => start = Some(j),
                (false, Some(s)) => {
                    spans.push((self.xs[s], self.xs[j - 1]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            spans.push((self.xs[s], *self.xs.last().unwrap()));
        }
        Intervals { spans }
    }

    /// Largest reversal of `t*` on `[lo, hi]`: points `x_a < x_b` with
    /// `t*(x_b) < t*(x_a)`, i.e. the front reaches `x_b` first. Returns
    /// `(x_a, x_b, drop)`.
    pub fn largest_reversal(&self, lo: f64, hi: f64) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        let mut running: Option<(f64, f64)> = None;
        for (j, &x) in self.xs.iter().enumerate() {
            if x < lo || x > hi {
                continue;
            }
            let Some(t) = self.t_star[j] else { continue };
            if let Some((xa, ta)) = running {
                let drop = ta - t;
                if drop > 0.0 && best.is_none_or(|b| drop > b.2) {
                    best = Some((xa, x, drop));
                }
            }
            if running.is_none_or(|(_, ta)| t > ta) {
                running = Some((x, t));
            }
        }
        best
    }

    /// Long-format CSV `t,x,W` (non-finite values written as `-inf`).
    pub fn write_w_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let err = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
        w.write_record(["t", "x", "W"]).map_err(err)?;
        for (k, t) in self.times.iter().enumerate() {
            for (j, x) in self.xs.iter().enumerate() {
                w.write_record([t.to_string(), x.to_string(), self.w_at(k, j).to_string()])
                    .map_err(err)?;
            }
        }
        w.flush().map_err(|e| Error::Data(e.to_string()))
    }

    /// CSV `x,t_star` with an empty field where the front never arrives.
    pub fn write_t_star_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let err = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
        w.write_record(["x", "t_star"]).map_err(err)?;
        for (x, t) in self.xs.iter().zip(&self.t_star) {
            w.write_record([x.to_string(), t.map_or(String::new(), |t| t.to_string())])
                .map_err(err)?;
        }
        w.flush().map_err(|e| Error::Data(e.to_string()))
    }
}

/// `W(t, x)` by dynamic programming over piecewise-linear paths:
/// `W(0, x) = 0` on `F₀` and `−∞` elsewhere, then
/// `W(t, x) = max_{|x − x'| ≤ v_max Δt} [W(t − Δt, x') + Δt c̄(x) − (x − x')² / (2Δt)]`.
///
/// Fails with [`Error::Resolution`] when more than 1% of the relevant cells
/// (those with `W ≥ −v_max² t / 4`) take their maximum on the velocity cap,
/// or when an excited cell borders an unreachable one.
pub fn compute_w_dp<C>(cbar: C, f0: &Intervals, t_max: f64, grid: &DpGrid) -> Result<FrontResult>
where
    C: Fn(f64) -> f64 + Sync,
{
    grid.validate()?;
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::Config(format!("t_max must be finite and nonnegative, got {t_max}")));
    }
    let n = grid.n_x();
    let xs: Vec<f64> = (0..n).map(|j| grid.node(j)).collect();
    let c: Vec<f64> = xs.iter().map(|&x| cbar(x)).collect();
    if let Some(j) = c.iter().position(|v| !v.is_finite()) {
        return Err(Error::Parameter(format!("c̄({}) is not finite", xs[j])));
    }
    let advisory = c
        .windows(2)
        .position(|p| p[1] < p[0])
        .map(|j| format!("c̄ decreases near x = {}; condition (N) is not guaranteed", xs[j]));
    let n_t = (t_max / grid.dt).round() as usize;
    let m = grid.reach() as isize;
    let penalty: Vec<f64> = (-m..=m)
        .map(|d| {
            let s = d as f64 * grid.dx;
            s * s / (2.0 * grid.dt)
        })
        .collect();

    let mut w = Vec::with_capacity((n_t + 1) * n);
    w.extend(xs.iter().map(|&x| if f0.contains(x) { 0.0 } else { f64::NEG_INFINITY }));
    let mut relevant = 0usize;
    let mut pinned = 0usize;
    let mut next = vec![0.0; n];
    let mut at_cap = vec![false; n];
    for k in 1..=n_t {
        let prev = &w[(k - 1) * n..k * n];
        next.par_iter_mut()
            .zip(at_cap.par_iter_mut())
            .enumerate()
            .for_each(|(j, (out, cap))| {
                let mut best = f64::NEG_INFINITY;
                let mut best_d = 0isize;
                let lo = (-m).max(-(j as isize));
                let hi = m.min((n - 1 - j) as isize);
                for d in lo..=hi {
                    let p = prev[(j as isize + d) as usize];
                    if p == f64::NEG_INFINITY {
                        continue;
                    }
                    let v = p - penalty[(d + m) as usize];
                    if v > best || (v == best && d.abs() < best_d.abs()) {
                        best = v;
                        best_d = d;
                    }
                }
                *out = best + grid.dt * c[j];
                *cap = best > f64::NEG_INFINITY && best_d.abs() == m;
            });
        let t = k as f64 * grid.dt;
        // An excited cell next to an unreachable one means the front is set
        // by the velocity cap rather than by W crossing zero.
        if let Some(j) = (1..n).find(|&j| {
            (next[j - 1] >= 0.0 && next[j] == f64::NEG_INFINITY) || (next[j] >= 0.0 && next[j - 1] == f64::NEG_INFINITY)
        }) {
            return Err(Error::Resolution(format!(
                "excited set reaches the edge of the reachable cone at x = {}, t = {t}; increase v_max",
                xs[j]
            )));
        }
        let floor = -grid.v_max * grid.v_max * t / 4.0;
        for (v, &cap) in next.iter().zip(&at_cap) {
            if *v >= floor {
                relevant += 1;
                pinned += cap as usize;
            }
        }
        w.extend_from_slice(&next);
    }
    let pinned_fraction = if relevant == 0 { 0.0 } else { pinned as f64 / relevant as f64 };
    if pinned_fraction > 0.01 {
        return Err(Error::Resolution(format!(
            "{:.2}% of relevant cells maximise on the velocity cap v_max = {}; increase v_max",
            100.0 * pinned_fraction,
            grid.v_max
        )));
    }
    let times: Vec<f64> = (0..=n_t).map(|k| k as f64 * grid.dt).collect();
    let t_star = (0..n)
        .map(|j| {
            let k = (0..=n_t).find(|&k| w[k * n + j] >= 0.0)?;
            if k == 0 {
                return Some(0.0);
            }
            let (a, b) = (w[(k - 1) * n + j], w[k * n + j]);
            if a == f64::NEG_INFINITY {
                Some(times[k])
            } else {
                Some(times[k - 1] + grid.dt * (-a) / (b - a))
            }
        })
        .collect();
    Ok(FrontResult {
        grid: *grid,
        xs,
        times,
        w,
        t_star,
        pinned_fraction,
        condition_n_advisory: advisory,
    })
}
