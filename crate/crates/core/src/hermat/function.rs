use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convexity {
    OperatorConvex,
    OperatorConcave,
}

/// Scalar functions used as `f` in the inequality chains.
///
/// `Pow(s)` is operator convex for `s ∈ [1, 2]` and operator concave for
/// `s ∈ [0, 1]`; `s = 1` is classified as convex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    Inv,
    Square,
    Pow(f64),
    XLogX,
    Log,
}

impl TestFunction {
    /// Default palette: four operator convex members followed by two operator concave ones.
    pub fn palette() -> Vec<TestFunction> {
        vec![
            TestFunction::Inv,
            TestFunction::Square,
            TestFunction::Pow(1.5),
            TestFunction::XLogX,
            TestFunction::Pow(0.5),
            TestFunction::Log,
        ]
    }

    pub fn id(&self) -> String {
        match self {
            TestFunction::Inv => "inv".into(),
            TestFunction::Square => "square".into(),
            TestFunction::Pow(s) => format!("pow:{s}"),
            TestFunction::XLogX => "xlogx".into(),
            TestFunction::Log => "log".into(),
        }
    }

    /// Open interval on which the function is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            TestFunction::Square => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn convexity(&self) -> Convexity {
        match self {
            TestFunction::Inv | TestFunction::Square | TestFunction::XLogX => Convexity::OperatorConvex,
            TestFunction::Pow(s) if *s >= 1.0 => Convexity::OperatorConvex,
            TestFunction::Pow(_) | TestFunction::Log => Convexity::OperatorConcave,
        }
    }

    pub fn is_convex(&self) -> bool {
        self.convexity() == Convexity::OperatorConvex
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            TestFunction::Inv => 1.0 / x,
            TestFunction::Square => x * x,
            TestFunction::Pow(s) => x.powf(s),
            TestFunction::XLogX => x * x.ln(),
            TestFunction::Log => x.ln(),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            TestFunction::Inv => -1.0 / (x * x),
            TestFunction::Square => 2.0 * x,
            TestFunction::Pow(s) => s * x.powf(s - 1.0),
            TestFunction::XLogX => x.ln() + 1.0,
            TestFunction::Log => 1.0 / x,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x > lo && x < hi
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl Serialize for TestFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.id())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Accepts `inv`, `square`, `xlogx`, `log`, and `pow:<s>` (or `pow<s>`) with `s ∈ [0, 2]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || Error::UnknownFunction(s.to_string());
        match s {
            "inv" => return Ok(TestFunction::Inv),
            "square" => return Ok(TestFunction::Square),
            "xlogx" => return Ok(TestFunction::XLogX),
            "log" => return Ok(TestFunction::Log),
            _ => {}
        }
        let exponent = s.strip_prefix("pow").ok_or_else(unknown)?;
        let exponent = exponent.strip_prefix(':').unwrap_or(exponent);
        let p: f64 = exponent.parse().map_err(|_| unknown())?;
        if !(0.0..=2.0).contains(&p) {
            return Err(Error::param("pow exponent", p, "must lie in [0, 2]"));
        }
        Ok(TestFunction::Pow(p))
    }
}
