//! Exact rational coordinates.
//!
//! Every geometric predicate in this crate is a strict or closed comparison,
//! so coordinates are arbitrary-precision rationals. Values serialize as
//! `"p/q"` strings (`"p"` when the denominator is 1).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coord(BigRational);

impl Coord {
    pub fn zero() -> Self {
        Coord(BigRational::zero())
    }

    pub fn one() -> Self {
        Coord(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coord(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as an exact rational. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Coord(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Coord(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn half(&self) -> Self {
        Coord(&self.0 / BigInt::from(2))
    }

    pub fn abs(&self) -> Self {
        Coord(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Lossy conversion for reporting and plotting output only.
    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer();
        let d = self.0.denom();
        // Good enough for the magnitudes this crate produces.
        str_to_f64(&n.to_string()) / str_to_f64(&d.to_string())
    }
}

fn str_to_f64(s: &str) -> f64 {
    s.parse::<f64>().unwrap_or(f64::NAN)
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid rational literal {0:?} (expected \"p\" or \"p/q\")")]
pub struct ParseCoordError(String);

impl FromStr for Coord {
    type Err = ParseCoordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseCoordError(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let p: BigInt = num.trim().parse().map_err(|_| bad())?;
        let q: BigInt = den.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Coord(BigRational::new(p, q)))
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Coord {
    fn from(n: i64) -> Self {
        Coord::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Coord {
            type Output = Coord;
            fn $method(self, rhs: Coord) -> Coord {
                Coord((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Coord> for &'a Coord {
            type Output = Coord;
            fn $method(self, rhs: &'a Coord) -> Coord {
                Coord((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord(-self.0)
    }
}

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord(-&self.0)
    }
}

/// Maps each value to its rank among the sorted distinct values of `pool`.
///
/// Box-intersection and dominance predicates depend only on coordinate
/// order, so hot loops compress rationals to integer ranks once and compare
/// machine integers afterwards.
pub fn rank_map(pool: &[Coord]) -> RankMap {
    let mut sorted: Vec<Coord> = pool.to_vec();
    sorted.sort();
    sorted.dedup();
    RankMap { sorted }
}

pub struct RankMap {
    sorted: Vec<Coord>,
}

impl RankMap {
    /// Rank of a value that is guaranteed to be in the pool.
    pub fn rank(&self, v: &Coord) -> u32 {
        self.sorted
            .binary_search(v)
            .expect("value missing from rank pool") as u32
    }
}
