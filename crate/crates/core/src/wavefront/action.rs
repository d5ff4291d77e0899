use serde::{Deserialize, Serialize};

/// Piecewise-linear path with nodes `φ_k` at times `k Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionPath {
    pub dt: f64,
    pub values: Vec<f64>,
}

impl ActionPath {
    pub fn horizon(&self) -> f64 {
        self.dt * self.values.len().saturating_sub(1) as f64
    }

    /// Straight path from `from` to `to` over `[0, t]` with `n` segments.
    pub fn straight(from: f64, to: f64, t: f64, n: usize) -> Self {
        ActionPath {
            dt: t / n as f64,
            values: (0..=n).map(|k| from + (to - from) * k as f64 / n as f64).collect(),
        }
    }
}

/// `R(φ) = ∫ c̄(φ_s) ds − ½ ∫ |φ̇_s|² ds`: trapezoidal reaction term, exact
/// kinetic term for the piecewise-linear interpolant.
pub fn action_r<C: Fn(f64) -> f64>(path: &ActionPath, cbar: C) -> f64 {
    let mut r = 0.0;
    let mut prev = match path.values.first() {
        Some(&p) => (p, cbar(p)),
        None => return 0.0,
    };
    for &p in &path.values[1..] {
        let c = cbar(p);
        let dp = p - prev.0;
        r += 0.5 * path.dt * (prev.1 + c) - dp * dp / (2.0 * path.dt);
        prev = (p, c);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_straight_paths() {
        let still = ActionPath {
            dt: 0.1,
            values: vec![0.3; 11],
        };
        assert!((action_r(&still, |_| 2.0) - 2.0).abs() < 1e-12);
        let line = ActionPath::straight(1.5, 0.0, 2.0, 7);
        assert!((action_r(&line, |_| 1.0) - (2.0 - 1.5 * 1.5 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_converges_at_second_order() {
        let c = |x: f64| (x).sin() + 2.0;
        let phi = |s: f64| s * s;
        let at = |n: usize| {
            let p = ActionPath {
                dt: 1.0 / n as f64,
                values: (0..=n).map(|k| phi(k as f64 / n as f64)).collect(),
            };
            action_r(&p, c)
        };
        let (a, b, d) = (at(20), at(40), at(80));
        let ratio = (a - b) / (b - d);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }
}
