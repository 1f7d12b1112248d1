//! Support code for the `blockmap` binary: argument types, JSON helpers and
//! the verification checks.

pub mod criteria;

use std::str::FromStr;

use blockmap::series::parse_rational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde_json::{json, Value};

/// A weight given on the command line, kept both exact and as a float.
/// Accepts `p/q`, decimals and scientific notation.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub exact: BigRational,
    pub value: f64,
}

impl FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let exact = match parse_rational(s) {
            Some(r) => r,
            None => {
                let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
                BigRational::from_f64(v).ok_or_else(|| format!("not a finite number: {s:?}"))?
            }
        };
        if !exact.is_positive() {
            return Err(format!("the weight must be positive, got {s}"));
        }
        let value = exact.to_f64().filter(|v| v.is_finite() && *v > 0.0).ok_or_else(|| format!("{s} is out of range"))?;
        Ok(Weight { exact, value })
    }
}

/// `{"num": "...", "den": "..."}`, so exact values survive JSON parsers.
pub fn rational_json(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub fn integer_ratio(num: i64, den: i64) -> Value {
    rational_json(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}
