//! Serializable ensemble descriptions.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::dd::{ser_f64, Family, Side};
use crate::error::{Error, Result};
use crate::series::DEFAULT_PRECISION;

/// Matched-family parameter `b`: an explicit value or the smallest valid one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BParam {
    Value(f64),
    Auto,
}

impl fmt::Display for BParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BParam::Value(b) => write!(f, "{b}"),
            BParam::Auto => f.write_str("auto"),
        }
    }
}

impl std::str::FromStr for BParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BParam::Auto);
        }
        s.parse::<f64>()
            .map(BParam::Value)
            .map_err(|_| Error::InvalidInput(format!("b must be a number or 'auto', got '{s}'")))
    }
}

impl Serialize for BParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BParam::Value(b) => ser_f64(b, s),
            BParam::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for BParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BParam;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"auto\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<BParam, E> {
                Ok(BParam::Value(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BParam, E> {
                Ok(BParam::Value(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BParam, E> {
                Ok(BParam::Value(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BParam, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

/// Everything needed to regenerate a degree-distribution pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    #[serde(serialize_with = "ser_f64")]
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<BParam>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular_degree: Option<u32>,
    /// Side carrying the regular degree; bit side when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular_side: Option<Side>,
    /// LDPC bit-side edge polynomial, e.g. `"x^2"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// LDPC check-side edge polynomial, e.g. `"x^5"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl EnsembleSpec {
    fn base(family: Family, p: f64) -> Self {
        Self {
            family,
            p,
            b: None,
            regular_degree: None,
            regular_side: None,
            lambda: None,
            rho: None,
            precision: DEFAULT_PRECISION,
        }
    }

    /// Matched ARA/NSIRA (or ALDPC from matched NSIRA) with parameter `b`.
    pub fn matched(family: Family, p: f64, b: BParam) -> Self {
        Self { b: Some(b), ..Self::base(family, p) }
    }

    /// Regular on one side, solved for the other.
    pub fn regular(family: Family, p: f64, degree: u32, side: Side) -> Self {
        Self { regular_degree: Some(degree), regular_side: Some(side), ..Self::base(family, p) }
    }

    /// Plain LDPC from edge polynomials.
    pub fn ldpc(lambda: &str, rho: &str) -> Self {
        Self { lambda: Some(lambda.into()), rho: Some(rho.into()), ..Self::base(Family::Ldpc, 0.5) }
    }

    pub fn with_precision(mut self, n: usize) -> Self {
        self.precision = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < 8 {
            return Err(Error::InvalidInput(format!("precision {} is too small", self.precision)));
        }
        if self.family != Family::Ldpc && !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Domain(format!("design p must lie in (0, 1), got {}", self.p)));
        }
        if let Some(BParam::Value(b)) = self.b {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::Domain(format!("b must lie in (0, 1), got {b}")));
            }
        }
        if let Some(d) = self.regular_degree {
            if d < 2 {
                return Err(Error::InvalidInput(format!("regular degree must be at least 2, got {d}")));
            }
        }
        if self.b.is_some() && self.regular_degree.is_some() {
            return Err(Error::InvalidInput("give either b or a regular degree, not both".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("ensemble spec JSON: {e}")))
    }
}

/// Parses polynomials like `x^2`, `0.4x^2 + 0.6*x^3` or `0.5 x + 0.5x^4`
/// into a coefficient vector.
pub fn parse_polynomial(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("cannot parse polynomial '{s}'"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        let after_exp = i > 0 && matches!(compact.as_bytes()[i - 1], b'e' | b'E');
        if (ch == '+' || ch == '-') && i > start && !after_exp {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut coeffs: Vec<f64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, power) = match body.find('x') {
            None => (body.parse::<f64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let head = body[..pos].trim_end_matches('*');
                let coef = if head.is_empty() { 1.0 } else { head.parse::<f64>().map_err(|_| bad())? };
                let tail = &body[pos + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (coef, power)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0.0);
        }
        coeffs[power] += sign * coef;
    }
    Ok(coeffs)
}
