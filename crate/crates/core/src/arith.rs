//! Exact rational scalars and their canonical text encoding.
//!
//! Every rational that crosses a file boundary is written as `"n"` or
//! `"n/d"` in lowest terms with a positive denominator. Decimal points and
//! exponents are rejected on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// Parse a rational written as `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> std::result::Result<Q, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(format!("'{t}' is not an exact rational (decimals are not accepted)"));
    }
    let parse_int = |p: &str| -> std::result::Result<Z, String> {
        let p = p.trim();
        let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("'{p}' is not an integer"));
        }
        p.parse::<Z>().map_err(|e| e.to_string())
    };
    match t.split_once('/') {
        None => Ok(Q::from_integer(parse_int(t)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Q::new(n, d))
        }
    }
}

pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_field(s: &str, field: &str) -> Result<Q> {
    parse_rational(s).map_err(|message| Error::Parse { field: field.to_string(), message })
}

/// Multiply a rational vector by the lcm of its denominators and divide by
/// the gcd of the resulting numerators. The result is a primitive integer
/// vector spanning the same line.
pub fn primitive_integer_row(row: &[Q]) -> Vec<Z> {
    use num_integer::Integer;
    let l = row.iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Z> = row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(Z::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Scale a rational vector so that its first nonzero entry is one.
pub fn normalize_leading(row: &mut [Q]) {
    if let Some(lead) = row.iter().find(|x| !x.is_zero()).cloned() {
        for x in row.iter_mut() {
            *x = &*x / &lead;
        }
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// `serde` adapter writing rationals as canonical strings.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_rational(&v).map_err(de::Error::custom)
    }

    pub(crate) fn value_to_rational(v: &serde_json::Value) -> std::result::Result<Q, String> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
            serde_json::Value::Number(n) => {
                Err(format!("floating-point value {n} is not an exact rational"))
            }
            other => Err(format!("expected a rational string, found {other}")),
        }
    }
}

/// `serde` adapter for `Vec<Q>`.
pub mod serde_qvec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let vs = Vec::<serde_json::Value>::deserialize(d)?;
        vs.iter()
            .enumerate()
            .map(|(i, v)| serde_q::value_to_rational(v).map_err(|e| format!("[{i}]: {e}")))
            .collect::<std::result::Result<_, _>>()
            .map_err(de::Error::custom)
    }
}
