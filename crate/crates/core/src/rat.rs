//! Exact rationals and integer vectors.
//!
//! Rationals travel through JSON as `"p/q"` strings (or `"p"` when `q = 1`)
//! with `q > 0` and `gcd(p, q) = 1`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub type Rat = BigRational;
/// A point or vector with rational coordinates.
pub type Point = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn point(xs: &[i64]) -> Point {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rat::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

pub fn fmt_rat(x: &Rat) -> String {
    x.to_string()
}

/// Parses a comma separated list such as `1,-2/3,0`.
pub fn parse_rat_list(s: &str) -> Result<Point> {
    s.split(',').map(parse_rat).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], c: &Rat) -> Point {
    a.iter().map(|x| x * c).collect()
}

pub fn is_integral(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn to_i64(x: &Rat) -> Option<i64> {
    if is_integral(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators of all coordinates.
pub fn common_denominator<'a>(pts: impl IntoIterator<Item = &'a Point>) -> BigInt {
    let mut l = BigInt::one();
    for p in pts {
        for x in p {
            l = l.lcm(x.denom());
        }
    }
    l
}

/// Clears denominators of a single vector and divides out the content,
/// giving the primitive integer vector on the same ray.
pub fn primitive(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn from_ints(v: &[BigInt]) -> Point {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn from_i64s(v: &[i64]) -> Point {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn is_primitive(v: &[Rat]) -> bool {
    v.iter().all(is_integral)
        && v.iter().fold(BigInt::zero(), |g, x| g.gcd(x.numer())).is_one()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Small random rational with numerator in `[-bound, bound]` and
/// denominator in `[1, den]`.
pub fn random_rat<R: Rng + ?Sized>(rng: &mut R, bound: i64, den: i64) -> Rat {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=den);
    frac(p, q)
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// Serde adaptors for the `"p/q"` encoding.
pub mod serde_rat {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_rat(&v).map_err(D::Error::custom)
    }

    pub(crate) fn value_to_rat(v: &serde_json::Value) -> Result<Rat> {
        match v {
            serde_json::Value::String(s) => parse_rat(s),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(rat)
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(x: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(x.len()))?;
            for e in x {
                seq.serialize_element(&fmt_rat(e))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Point, D::Error> {
            let v = Vec::<serde_json::Value>::deserialize(d)?;
            v.iter().map(value_to_rat).collect::<Result<_>>().map_err(D::Error::custom)
        }
    }

    pub mod vec2 {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(x: &[Point], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(x.len()))?;
            for row in x {
                let strs: Vec<String> = row.iter().map(fmt_rat).collect();
                seq.serialize_element(&strs)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Point>, D::Error> {
            let v = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
            v.iter()
                .map(|row| row.iter().map(value_to_rat).collect::<Result<Point>>())
                .collect::<Result<_>>()
                .map_err(D::Error::custom)
        }
    }
}

pub fn rat_to_json(x: &Rat) -> serde_json::Value {
    serde_json::Value::String(fmt_rat(x))
}

pub fn point_to_json(p: &[Rat]) -> serde_json::Value {
    serde_json::Value::Array(p.iter().map(rat_to_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_rat("6/4").unwrap(), frac(3, 2));
        assert_eq!(fmt_rat(&frac(3, 2)), "3/2");
        assert_eq!(fmt_rat(&frac(-4, 2)), "-2");
        assert_eq!(parse_rat("-7").unwrap(), rat(-7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vector() {
        let v = vec![frac(2, 3), frac(-4, 3), rat(0)];
        let p = primitive(&v);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(0)]);
        assert!(is_primitive(&from_ints(&p)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(factorial(4), BigInt::from(24));
    }
}
