//! The closed vocabulary of real functions used for drives `E(t)` and
//! potentials `V(x)`, with a compact text form such as `gaussian(0.1, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FunctionDesc {
    Zero,
    Constant(f64),
    /// `a·sin(b·s)`
    Sin {
        a: f64,
        b: f64,
    },
    /// `a·cos(b·s)`
    Cos {
        a: f64,
        b: f64,
    },
    /// `a·exp(−u²/s²)` at argument `u`
    Gaussian {
        a: f64,
        s: f64,
    },
    /// `a·exp(1 − 1/(1 − (s/w)²))` on `|s| < w`, zero outside; peak value `a`.
    Bump {
        a: f64,
        w: f64,
    },
    /// Samples `values[k]` at `x0 + k·dx`, linearly interpolated and held
    /// constant beyond either end.
    Tabulated {
        x0: f64,
        dx: f64,
        values: Vec<f64>,
    },
}

impl FunctionDesc {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Constant(c) => *c,
            Self::Sin { a, b } => a * (b * s).sin(),
            Self::Cos { a, b } => a * (b * s).cos(),
            Self::Gaussian { a, s: w } => a * (-(s / w).powi(2)).exp(),
            Self::Bump { a, w } => {
                let u = s / w;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    a * (1.0 - 1.0 / (1.0 - u * u)).exp()
                }
            }
            Self::Tabulated { x0, dx, values } => {
                let n = values.len();
                let t = (s - x0) / dx;
                if t <= 0.0 {
                    return values[0];
                }
                if t >= (n - 1) as f64 {
                    return values[n - 1];
                }
                let k = t.floor() as usize;
                let f = t - k as f64;
                values[k] * (1.0 - f) + values[k + 1] * f
            }
        }
    }

    /// Closed-form derivative of order 1 or 2; `None` for tabulated data.
    pub fn derivative(&self, s: f64, order: u32) -> Option<f64> {
        if order == 0 {
            return Some(self.eval(s));
        }
        let v = match (self, order) {
            (Self::Zero | Self::Constant(_), _) => 0.0,
            (Self::Sin { a, b }, 1) => a * b * (b * s).cos(),
            (Self::Sin { a, b }, 2) => -a * b * b * (b * s).sin(),
            (Self::Cos { a, b }, 1) => -a * b * (b * s).sin(),
            (Self::Cos { a, b }, 2) => -a * b * b * (b * s).cos(),
            (Self::Gaussian { a, s: w }, 1) => {
                let w2 = w * w;
                a * (-2.0 * s / w2) * (-s * s / w2).exp()
            }
            (Self::Gaussian { a, s: w }, 2) => {
                let w2 = w * w;
                a * (4.0 * s * s / (w2 * w2) - 2.0 / w2) * (-s * s / w2).exp()
            }
            (Self::Bump { a, w }, k @ (1 | 2)) => {
                let u = s / w;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    let q = 1.0 - u * u;
                    let e = a * (1.0 - 1.0 / q).exp();
                    let g1 = -2.0 * u / (q * q);
                    if k == 1 {
                        e * g1 / w
                    } else {
                        let g2 = -2.0 / (q * q) - 8.0 * u * u / (q * q * q);
                        e * (g1 * g1 + g2) / (w * w)
                    }
                }
            }
            _ => return None,
        };
        Some(v)
    }

    pub fn has_analytic_derivative(&self) -> bool {
        !matches!(self, Self::Tabulated { .. })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Constant(c) => *c == 0.0,
            Self::Sin { a, .. } | Self::Cos { a, .. } | Self::Gaussian { a, .. } | Self::Bump { a, .. } => *a == 0.0,
            Self::Tabulated { values, .. } => values.iter().all(|&v| v == 0.0),
        }
    }

    fn validate(self) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("{m} in `{self}`")));
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match &self {
            Self::Constant(c) if !c.is_finite() => bad("non-finite constant"),
            Self::Sin { a, b } | Self::Cos { a, b } if !finite(&[*a, *b]) => bad("non-finite parameter"),
            Self::Gaussian { a, s } if !finite(&[*a, *s]) || *s <= 0.0 => bad("width must be positive"),
            Self::Bump { a, w } if !finite(&[*a, *w]) || *w <= 0.0 => bad("width must be positive"),
            Self::Tabulated { x0, dx, values } if !finite(&[*x0, *dx]) || *dx <= 0.0 || values.len() < 2 || !finite(values) => {
                bad("tabulated data needs a positive spacing and at least two finite samples")
            }
            _ => Ok(self),
        }
    }
}

impl fmt::Display for FunctionDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "zero"),
            Self::Constant(c) => write!(f, "constant({c:?})"),
            Self::Sin { a, b } => write!(f, "sin({a:?}, {b:?})"),
            Self::Cos { a, b } => write!(f, "cos({a:?}, {b:?})"),
            Self::Gaussian { a, s } => write!(f, "gaussian({a:?}, {s:?})"),
            Self::Bump { a, w } => write!(f, "bump({a:?}, {w:?})"),
            Self::Tabulated { x0, dx, values } => {
                write!(f, "tabulated({x0:?}, {dx:?}")?;
                for v in values {
                    write!(f, ", {v:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for FunctionDesc {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let err = |m: String| Error::InvalidArgument(format!("function `{t}`: {m}"));
        let (name, args) = match t.find('(') {
            None => (t, Vec::new()),
            Some(open) => {
                let inner = t[open + 1..].strip_suffix(')').ok_or_else(|| err("missing closing parenthesis".into()))?;
                let args = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').map(|a| a.trim().parse::<f64>().map_err(|e| err(format!("argument `{}`: {e}", a.trim())))).collect::<Result<Vec<f64>>>()?
                };
                (t[..open].trim(), args)
            }
        };
        let want = |n: usize| if args.len() == n { Ok(()) } else { Err(err(format!("expected {n} arguments, got {}", args.len()))) };
        let d = match name {
            "zero" => {
                want(0)?;
                Self::Zero
            }
            "constant" => {
                want(1)?;
                Self::Constant(args[0])
            }
            "sin" => {
                want(2)?;
                Self::Sin { a: args[0], b: args[1] }
            }
            "cos" => {
                want(2)?;
                Self::Cos { a: args[0], b: args[1] }
            }
            "gaussian" => {
                want(2)?;
                Self::Gaussian { a: args[0], s: args[1] }
            }
            "bump" => {
                want(2)?;
                Self::Bump { a: args[0], w: args[1] }
            }
            "tabulated" => {
                if args.len() < 4 {
                    return Err(err("tabulated needs x0, dx and at least two samples".into()));
                }
                Self::Tabulated { x0: args[0], dx: args[1], values: args[2..].to_vec() }
            }
            other => return Err(err(format!("unknown function `{other}`"))),
        };
        d.validate()
    }
}

impl TryFrom<String> for FunctionDesc {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FunctionDesc> for String {
    fn from(f: FunctionDesc) -> String {
        f.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["zero", "constant(2.5)", "sin(1.0, 2.0)", "cos(0.5, 1.0)", "gaussian(0.1, 1.0)", "bump(1.0, 0.3)", "tabulated(-1.0, 0.5, 0.0, 1.0, 4.0)"] {
            let f: FunctionDesc = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(f.to_string().parse::<FunctionDesc>().unwrap(), f);
        }
        assert_eq!("gaussian(1,1)".parse::<FunctionDesc>().unwrap(), FunctionDesc::Gaussian { a: 1.0, s: 1.0 });
    }

    #[test]
    fn parse_errors() {
        for s in ["gaussian(1)", "gaussian(1, -1)", "sqrt(2)", "sin(1, 2", "constant(x)", "tabulated(0, 1, 3)"] {
            assert!(s.parse::<FunctionDesc>().is_err(), "{s}");
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let h = 1e-5;
        for f in [
            FunctionDesc::Sin { a: 0.7, b: 1.3 },
            FunctionDesc::Cos { a: -0.2, b: 2.0 },
            FunctionDesc::Gaussian { a: 0.3, s: 1.7 },
            FunctionDesc::Bump { a: 1.1, w: 2.0 },
        ] {
            for &x in &[-1.5, -0.3, 0.0, 0.4, 1.2] {
                let d1 = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                let d2 = (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
                assert!((f.derivative(x, 1).unwrap() - d1).abs() < 1e-8, "{f} d1 at {x}");
                assert!((f.derivative(x, 2).unwrap() - d2).abs() < 1e-4, "{f} d2 at {x}");
            }
        }
    }

    #[test]
    fn tabulated_interpolates_and_clamps() {
        let f = FunctionDesc::Tabulated { x0: 0.0, dx: 1.0, values: vec![0.0, 2.0, 4.0] };
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(-3.0), 0.0);
        assert_eq!(f.eval(7.0), 4.0);
        assert!(f.derivative(0.5, 1).is_none());
    }

    #[test]
    fn bump_is_compactly_supported() {
        let f = FunctionDesc::Bump { a: 2.0, w: 1.0 };
        assert_eq!(f.eval(0.0), 2.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.derivative(-1.5, 2), Some(0.0));
    }
}
