use serde::{Deserialize, Serialize};

use super::Intervals;
use crate::error::{Error, Result};

/// Path family for [`compute_w_star`]: paths with `segments` linear pieces
/// over equal time slices whose breakpoints lie on the lattice
/// `lattice_lo + i (lattice_hi − lattice_lo)/(nodes − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WStarBudget {
    pub segments: usize,
    pub lattice_lo: f64,
    pub lattice_hi: f64,
    pub nodes: usize,
    /// Quadrature points per segment for the running action.
    pub substeps: usize,
    /// Hard cap on the number of enumerated paths.
    pub max_paths: usize,
}

impl WStarBudget {
    fn node(&self, i: usize) -> f64 {
        self.lattice_lo + (self.lattice_hi - self.lattice_lo) * i as f64 / (self.nodes - 1) as f64
    }
}

/// `W*(t, x) = sup_φ min_{s ≤ t} R_{0,s}(φ)` over the budgeted path family
/// with `φ_0 = x` and `φ_t ∈ F₀`. Returns `−∞` when no family member ends in
/// `F₀`.
pub fn compute_w_star<C: Fn(f64) -> f64>(cbar: C, f0: &Intervals, t: f64, x: f64, budget: &WStarBudget) -> Result<f64> {
    let b = budget;
    if !(1..=4).contains(&b.segments) || b.nodes < 2 || b.substeps == 0 || !(b.lattice_lo < b.lattice_hi) {
        return Err(Error::Config(format!("invalid W* budget {b:?}")));
    }
    if !(t > 0.0) {
        return Ok(if f0.contains(x) { 0.0 } else { f64::NEG_INFINITY });
    }
    let count = (b.nodes as f64).powi(b.segments as i32);
    if count > b.max_paths as f64 {
        return Err(Error::Config(format!(
            "path family has {count} members, above the budget of {}",
            b.max_paths
        )));
    }
    let ends: Vec<usize> = (0..b.nodes).filter(|&i| f0.contains(b.node(i))).collect();
    if ends.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    let h = t / b.segments as f64;
    let ds = h / b.substeps as f64;
    let c_start = cbar(x);
    let mut best = f64::NEG_INFINITY;
    let mut idx = vec![0usize; b.segments - 1];
    loop {
        for &e in &ends {
            // Running action along the path, tracking its minimum (s = 0 gives 0).
            let mut r = 0.0;
            let mut worst: f64 = 0.0;
            let mut from = x;
            let mut c_prev = c_start;
            for seg in 0..b.segments {
                let to = idx.get(seg).map_or(b.node(e), |&i| b.node(i));
                let v = (to - from) / h;
                for q in 1..=b.substeps {
                    let p = from + v * ds * q as f64;
                    let c = cbar(p);
                    r += 0.5 * ds * (c_prev + c) - 0.5 * v * v * ds;
                    c_prev = c;
                    worst = worst.min(r);
                }
                from = to;
                if worst <= best {
                    break;
                }
            }
            best = best.max(worst);
        }
        // Next interior breakpoint combination.
        let mut d = 0;
        loop {
            if d == idx.len() {
                return Ok(best);
            }
            idx[d] += 1;
            if idx[d] < b.nodes {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget(segments: usize) -> WStarBudget {
        WStarBudget {
            segments,
            lattice_lo: -1.0,
            lattice_hi: 3.0,
            nodes: 17,
            substeps: 8,
            max_paths: 200_000,
        }
    }

    #[test]
    fn inside_support_is_zero() {
        let f0 = Intervals::left_of(0.0);
        let w = compute_w_star(|_| 1.0, &f0, 0.5, -0.5, &budget(3)).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn straight_path_is_optimal_far_away() {
        // c̄ = 1, x = 2, t = 0.5: W = 0.5 − 4 = −3.5, attained by the straight line.
        let f0 = Intervals::left_of(0.0);
        let w = compute_w_star(|_| 1.0, &f0, 0.5, 2.0, &budget(4)).unwrap();
        assert!((w + 3.5).abs() < 1e-12, "{w}");
    }

    #[test]
    fn empty_family_and_budget_errors() {
        let f0 = Intervals::new(vec![(10.0, 11.0)]).unwrap();
        assert_eq!(compute_w_star(|_| 1.0, &f0, 1.0, 0.0, &budget(2)).unwrap(), f64::NEG_INFINITY);
        let big = WStarBudget { max_paths: 10, ..budget(4) };
        assert!(compute_w_star(|_| 1.0, &Intervals::left_of(0.0), 1.0, 0.0, &big).is_err());
    }
}
