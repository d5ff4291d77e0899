use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite union of closed intervals `[a, b]`; ends may be infinite.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Intervals {
    pub spans: Vec<(f64, f64)>,
}

impl Intervals {
    /// Sorts and merges overlapping spans.
    pub fn new(mut spans: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(a, b)) = spans.iter().find(|(a, b)| !(a <= b) || a.is_nan() || b.is_nan()) {
            return Err(Error::Config(format!("interval [{a}, {b}] is empty or invalid")));
        }
        spans.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(spans.len());
        for (a, b) in spans {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Intervals { spans: merged })
    }

    /// `(−∞, x]`.
    pub fn left_of(x: f64) -> Self {
        Intervals {
            spans: vec![(f64::NEG_INFINITY, x)],
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.spans.iter().any(|&(a, b)| x >= a && x <= b)
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }
}

impl fmt::Display for Intervals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.spans.iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_contain() {
        let s = Intervals::new(vec![(2.0, 3.0), (0.0, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(s.spans, vec![(0.0, 3.0)]);
        assert!(Intervals::left_of(0.0).contains(0.0));
        assert!(!Intervals::left_of(0.0).contains(1e-12));
        assert!(Intervals::new(vec![(1.0, 0.0)]).is_err());
    }
}
