//! Floats in files are decimal strings with 17 significant digits, which
//! round-trip every `f64` exactly.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Real(pub f64);

impl Real {
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{:.16e}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<f64>().map(Real).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "crate::real::string")]` for plain `f64` fields.
pub mod string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        Real(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Real::deserialize(d).map(Real::get)
    }
}

/// `#[serde(default, with = "crate::real::opt_string")]` for `Option<f64>`.
pub mod opt_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(Real).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Real>::deserialize(d).map(|o| o.map(Real::get))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_roundtrip_bit_exactly() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, -7.25e17, f64::MAX, 0.0, 0.11956695986928281] {
            let json = serde_json::to_string(&Real(v)).unwrap();
            let back: Real = serde_json::from_str(&json).unwrap();
            assert_eq!(back.0.to_bits(), v.to_bits(), "{json}");
        }
        assert_eq!(Real(0.5).to_string(), "5.0000000000000000e-1");
    }

    #[test]
    fn field_helpers() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct S {
            #[serde(with = "string")]
            x: f64,
            #[serde(default, with = "opt_string")]
            y: Option<f64>,
        }
        let s = S { x: 0.1 + 0.2, y: Some(1.0 / 7.0) };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"x\":\"3.0000000000000004e-1\""));
        assert_eq!(serde_json::from_str::<S>(&json).unwrap(), s);
        assert_eq!(serde_json::from_str::<S>("{\"x\":\"1e0\"}").unwrap().y, None);
    }
}
