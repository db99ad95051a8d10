use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angle reduced to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Distance on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Open arc from `lo` counter-clockwise to `hi` on the circle, endpoints in
/// `(−π, π]`. `wraps` marks arcs crossing the `±π` seam. The full circle is
/// stored as `lo = −π, hi = π` with `full = true`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArc", deny_unknown_fields)]
pub struct Arc {
    pub lo: f64,
    pub hi: f64,
    pub wraps: bool,
    #[serde(default)]
    pub full: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArc {
    lo: f64,
    hi: f64,
    #[serde(default)]
    #[allow(dead_code)]
    wraps: Option<bool>,
    #[serde(default)]
    full: bool,
}

impl TryFrom<RawArc> for Arc {
    type Error = Error;
    fn try_from(r: RawArc) -> Result<Self> {
        if r.full {
            Ok(Arc::full())
        } else {
            Arc::new(r.lo, r.hi)
        }
    }
}

impl Arc {
    /// The arc swept from `lo` to `hi` (`hi > lo`, length at most `2π`).
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument("arc endpoints must be finite".into()));
        }
        let len = hi - lo;
        if !(len > 0.0) {
            return Err(Error::InvalidArgument(format!("arc needs hi > lo, got ({lo}, {hi})")));
        }
        if len > 2.0 * PI + 1e-12 {
            return Err(Error::InvalidArgument(format!("arc length {len} exceeds 2π")));
        }
        if len >= 2.0 * PI - 1e-12 {
            return Ok(Self::full());
        }
        let (l, h) = (wrap_angle(lo), wrap_angle(hi));
        Ok(Self { lo: l, hi: h, wraps: h < l, full: false })
    }

    pub fn full() -> Self {
        Self { lo: -PI, hi: PI, wraps: false, full: true }
    }

    /// Centred at `center` with total length `len`.
    pub fn centered(center: f64, len: f64) -> Result<Self> {
        Self::new(center - len / 2.0, center + len / 2.0)
    }

    pub fn length(&self) -> f64 {
        if self.full {
            2.0 * PI
        } else if self.wraps {
            self.hi - self.lo + 2.0 * PI
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.full {
            return true;
        }
        let t = wrap_angle(theta);
        if self.wraps {
            t > self.lo || t < self.hi
        } else {
            t > self.lo && t < self.hi
        }
    }

    /// Distance from `theta` to the nearer endpoint (infinite for the full
    /// circle, which has none).
    pub fn endpoint_distance(&self, theta: f64) -> f64 {
        if self.full {
            return f64::INFINITY;
        }
        angle_distance(theta, self.lo).min(angle_distance(theta, self.hi))
    }

    /// Is `self` contained in `other`?
    pub fn is_subarc_of(&self, other: &Arc) -> bool {
        if other.full {
            return true;
        }
        if self.full {
            return false;
        }
        let start = wrap_angle(self.lo - other.lo);
        let start = if start < 0.0 { start + 2.0 * PI } else { start };
        start + self.length() <= other.length() + 1e-15
    }

    /// `n` angles evenly spaced strictly inside the arc.
    pub fn sample_angles(&self, n: usize) -> Vec<f64> {
        let len = self.length();
        (0..n).map(|k| wrap_angle(self.lo + len * (k as f64 + 0.5) / n as f64)).collect()
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.full {
            write!(f, "full")
        } else {
            let hi = if self.wraps { self.hi + 2.0 * PI } else { self.hi };
            write!(f, "{:?}:{:?}", self.lo, hi)
        }
    }
}

/// `full` or `lo:hi` in radians.
impl FromStr for Arc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("full") {
            return Ok(Self::full());
        }
        let (a, b) = s.split_once(':').ok_or_else(|| Error::InvalidArgument(format!("arc must be `full` or `lo:hi`, got `{s}`")))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad arc endpoint `{t}`")));
        Self::new(parse(a)?, parse(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_with_and_without_wrap() {
        let a = Arc::new(PI / 4.0, 3.0 * PI / 4.0).unwrap();
        assert!(a.contains(PI / 2.0) && !a.contains(0.0) && !a.wraps);
        let w = Arc::new(3.0, 3.5).unwrap();
        assert!(w.wraps);
        assert!(w.contains(PI) && w.contains(-PI + 0.1) && !w.contains(0.0));
        assert!((w.length() - 0.5).abs() < 1e-12);
        assert!(Arc::full().contains(-PI) && Arc::full().contains(1.0));
    }

    #[test]
    fn rejects_bad_arcs_and_parses() {
        assert!(Arc::new(1.0, 1.0).is_err() && Arc::new(0.0, 7.0).is_err());
        assert_eq!("full".parse::<Arc>().unwrap(), Arc::full());
        let a: Arc = "0.5:1.5".parse().unwrap();
        assert_eq!(a.to_string().parse::<Arc>().unwrap(), a);
        let w: Arc = "3:3.5".parse().unwrap();
        assert_eq!(w.to_string().parse::<Arc>().unwrap(), w);
    }

    #[test]
    fn subarcs() {
        let big = Arc::new(-1.0, 2.0).unwrap();
        assert!(Arc::new(0.0, 1.0).unwrap().is_subarc_of(&big));
        assert!(!Arc::new(1.5, 2.5).unwrap().is_subarc_of(&big));
        assert!(Arc::new(3.0, 3.5).unwrap().is_subarc_of(&Arc::new(2.9, 3.6).unwrap()));
    }
}
