//! Predicted approximation exponents for the built-in examples.
//!
//! For a group `G` acting on `X` with counting exponent `a` and
//! integrability exponent `q`, almost every target is approximated with
//! `omega <= eps^-(dim X / a) (q / 2)` and every target in a bounded set
//! with twice that exponent. The universal lower bound is `dim X / a_X`
//! for the counting exponent `a_X` of the variety itself.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPrediction {
    pub example_id: String,
    #[serde(rename = "dim_X")]
    pub dim_x: u32,
    /// Counting exponent of the acting group; `None` where only the
    /// resulting exponents are tabulated.
    #[serde(
        rename = "a_S_G",
        serialize_with = "ser_opt_ratio",
        deserialize_with = "de_opt_ratio"
    )]
    pub a_s_g: Option<Rational64>,
    pub r_v: u32,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub q_bound: Rational64,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub ae_exponent: Rational64,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub uniform_exponent: Rational64,
    #[serde(serialize_with = "ser_opt_ratio", deserialize_with = "de_opt_ratio")]
    pub lower_exponent: Option<Rational64>,
    /// Which case of which example the row describes.
    pub reference: String,
}

/// `"num/den"`, also for integers.
pub fn ratio_string(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

fn ser_opt_ratio<S: Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_ratio(r, s),
        None => s.serialize_none(),
    }
}

fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational64, D::Error> {
    let s = String::deserialize(d)?;
    parse_ratio(&s).map_err(serde::de::Error::custom)
}

fn de_opt_ratio<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational64>, D::Error> {
    Option::<String>::deserialize(d)?
        .map(|s| parse_ratio(&s).map_err(serde::de::Error::custom))
        .transpose()
}

/// Parses `"num/den"` or an integer.
pub fn parse_ratio(s: &str) -> Result<Rational64> {
    let bad = || Error::InvalidArgument(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for ExponentPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |r: &Option<Rational64>| r.map_or_else(|| "-".to_string(), |r| r.to_string());
        write!(
            f,
            "{}: dim X = {}, a = {}, q = {}, a.e. {}, uniform {}, lower {} ({})",
            self.example_id,
            self.dim_x,
            opt(&self.a_s_g),
            self.q_bound,
            self.ae_exponent,
            self.uniform_exponent,
            opt(&self.lower_exponent),
            self.reference
        )
    }
}

fn ri(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn computed(
    id: &str,
    dim_x: u32,
    a: Rational64,
    q: Rational64,
    lower: Option<Rational64>,
    reference: String,
) -> ExponentPrediction {
    let ae = ri(dim_x as i64) / a * q / ri(2);
    ExponentPrediction {
        example_id: id.to_string(),
        dim_x,
        a_s_g: Some(a),
        r_v: 1,
        q_bound: q,
        ae_exponent: ae,
        uniform_exponent: ae * ri(2),
        lower_exponent: lower,
        reference,
    }
}

fn tabulated(id: &str, q: Rational64, ae: Rational64, reference: &str) -> ExponentPrediction {
    ExponentPrediction {
        example_id: id.to_string(),
        dim_x: 2,
        a_s_g: None,
        r_v: 1,
        q_bound: q,
        ae_exponent: ae,
        uniform_exponent: ae * ri(2),
        lower_exponent: None,
        reference: reference.to_string(),
    }
}

/// Built-in example ids: `S2`, `S3`, `S<d>` for `d >= 4`, `SO<d+1>` for
/// `d >= 4`, `SL2_Q`, `SL2_Q_unconditional`, `hyperboloid`,
/// `hyperboloid_unconditional`, `hyperboloid_Q`.
pub fn predicted_exponents(example_id: &str) -> Result<ExponentPrediction> {
    let unknown = || Error::UnknownExample(example_id.to_string());
    let p = match example_id {
        "S2" => computed(
            "S2",
            2,
            ri(1),
            ri(2),
            Some(ri(2)),
            "2-sphere over Z[1/p], p = 1 mod 4, unit quaternions mod centre".into(),
        ),
        "S3" => computed(
            "S3",
            3,
            ri(2),
            ri(2),
            Some(Rational64::new(3, 2)),
            "3-sphere over Z[1/p], p = 1 mod 4, norm-one quaternions".into(),
        ),
        "SL2_Q" => computed(
            "SL2_Q",
            3,
            ri(2),
            ri(2),
            Some(Rational64::new(3, 2)),
            "SL_2 lattice points, assuming the Ramanujan bound".into(),
        ),
        "SL2_Q_unconditional" => computed(
            "SL2_Q_unconditional",
            3,
            ri(2),
            Rational64::new(18, 7),
            Some(Rational64::new(3, 2)),
            "SL_2 lattice points, Kim-Sarnak bound q <= 18/7".into(),
        ),
        "hyperboloid" => tabulated(
            "hyperboloid",
            ri(2),
            ri(2),
            "ternary quadric Q(x) = a, assuming the Ramanujan bound",
        ),
        "hyperboloid_unconditional" => tabulated(
            "hyperboloid_unconditional",
            Rational64::new(18, 7),
            Rational64::new(18, 7),
            "ternary quadric Q(x) = a over a number field, Kim-Sarnak bound",
        ),
        "hyperboloid_Q" => tabulated(
            "hyperboloid_Q",
            Rational64::new(64, 25),
            Rational64::new(64, 25),
            "ternary quadric Q(x) = a over Q, Kim-Sarnak bound for Q",
        ),
        _ => {
            if let Some(n) = example_id.strip_prefix("SO") {
                let n: i64 = n.parse().map_err(|_| unknown())?;
                let d = n - 1;
                if d < 4 {
                    return Err(unknown());
                }
                let dim = (d * (d + 1) / 2) as u32;
                let a = so_counting_exponent(d);
                let q = so_integrability_bound(d);
                let lower = ri(dim as i64) / a;
                computed(
                    example_id,
                    dim,
                    a,
                    q,
                    Some(lower),
                    format!("SO_{n} over Z[1/p], p = 1 mod 4"),
                )
            } else if let Some(d) = example_id.strip_prefix('S') {
                let d: i64 = d.parse().map_err(|_| unknown())?;
                if d < 4 {
                    return Err(unknown());
                }
                let lower = Rational64::new(d, d - 1);
                computed(
                    example_id,
                    d as u32,
                    so_counting_exponent(d),
                    so_integrability_bound(d),
                    Some(lower),
                    format!("{d}-sphere over Z[1/p] under SO_{}, p = 1 mod 4", d + 1),
                )
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(p)
}

/// Counting exponent of `SO_{d+1}`: `d^2/4` for even `d`,
/// `(d+1)(d+3)/4` for odd `d`.
fn so_counting_exponent(d: i64) -> Rational64 {
    if d % 2 == 0 {
        Rational64::new(d * d, 4)
    } else {
        Rational64::new((d + 1) * (d + 3), 4)
    }
}

/// Integrability bound of `SO_{d+1}`: `d` for even `d`, `d+1` for odd `d`.
fn so_integrability_bound(d: i64) -> Rational64 {
    ri(if d % 2 == 0 { d } else { d + 1 })
}

/// The fixed ids, plus `S4`..`S7` and `SO5`..`SO8` as representatives of
/// the parametric families.
pub fn builtin_example_ids() -> Vec<String> {
    let mut ids: Vec<String> = [
        "S2",
        "S3",
        "SL2_Q",
        "SL2_Q_unconditional",
        "hyperboloid",
        "hyperboloid_unconditional",
        "hyperboloid_Q",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    ids.extend((4..=7).map(|d| format!("S{d}")));
    ids.extend((5..=8).map(|n| format!("SO{n}")));
    ids
}

/// The table for [`builtin_example_ids`] as a JSON array.
pub fn prediction_table_json() -> serde_json::Value {
    let rows: Vec<ExponentPrediction> = builtin_example_ids()
        .iter()
        .map(|id| predicted_exponents(id).expect("built-in id"))
        .collect();
    serde_json::to_value(rows).expect("serializable")
}

/// Lower bound `2 a_G / a_X` on the integrability exponent.
pub fn qv_lower_bound(a_g: Rational64, a_x: Rational64) -> Result<Rational64> {
    if a_x <= ri(0) {
        return Err(Error::InvalidArgument(format!("a_X = {a_x} must be positive")));
    }
    Ok(ri(2) * a_g / a_x)
}
