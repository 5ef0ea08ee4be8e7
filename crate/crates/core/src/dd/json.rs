//! JSON form of a single degree distribution.
//!
//! Floats are written with 17 significant digits in scientific notation, so
//! serialize, parse, serialize is byte-identical.

use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{DegreeDist, Family, Perspective, Side};
use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Formats `x` with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_f64(x)).expect("scientific notation is valid JSON")
}

/// `serialize_with` helper for a single float.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    raw(*x).serialize(s)
}

/// `serialize_with` helper for a float list.
pub fn ser_f64_vec<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for &x in xs {
        seq.serialize_element(&raw(x))?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DdDocument {
    pub family: Family,
    #[serde(serialize_with = "ser_f64")]
    pub p: f64,
    pub perspective: Perspective,
    pub side: Side,
    pub precision: usize,
    #[serde(serialize_with = "ser_f64_vec")]
    pub coeffs: Vec<f64>,
}

impl DdDocument {
    pub fn from_dist(d: &DegreeDist, family: Family, p: f64) -> Self {
        Self {
            family,
            p,
            perspective: d.perspective(),
            side: d.side(),
            precision: d.precision(),
            coeffs: d.coeffs().to_vec(),
        }
    }

    /// Coefficients as a series, checking the declared precision.
    pub fn series(&self) -> Result<PowerSeries> {
        if self.coeffs.len() != self.precision {
            return Err(Error::LengthMismatch { expected: self.precision, got: self.coeffs.len() });
        }
        PowerSeries::new(self.coeffs.clone())
    }

    /// Distribution evaluated as the stored polynomial.
    pub fn to_dist(&self) -> Result<DegreeDist> {
        DegreeDist::from_series(self.series()?, self.perspective, self.side)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("degree distribution JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let coeffs: Vec<f64> =
            (0..40).map(|k| if k == 0 { 0.0 } else { 0.1f64.sqrt() * 0.93f64.powi(k) / k as f64 }).collect();
        let doc = DdDocument {
            family: Family::Ara,
            p: 0.1 + 0.2,
            perspective: Perspective::Node,
            side: Side::Check,
            precision: coeffs.len(),
            coeffs,
        };
        let a = doc.to_json();
        let back = DdDocument::from_json(&a).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), a);
        assert!(a.contains("\"family\": \"ara\""));
        assert!(a.contains("3.0000000000000004e-1"));
    }

    #[test]
    fn precision_mismatch_is_rejected() {
        let doc = DdDocument {
            family: Family::Ldpc,
            p: 0.5,
            perspective: Perspective::Edge,
            side: Side::Bit,
            precision: 4,
            coeffs: vec![0.0, 0.0, 1.0],
        };
        assert!(matches!(doc.series(), Err(Error::LengthMismatch { .. })));
    }
}
