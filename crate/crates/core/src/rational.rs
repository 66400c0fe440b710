//! Exact rational helpers shared by every module.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(x) => x,
        None => r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN),
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A rational extended with `+∞`, used as the sentinel when a minimisation
/// ranges over an empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinite => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtRational::Finite(r) => r > &Rational::zero(),
            ExtRational::Infinite => true,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(r) => to_f64(r),
            ExtRational::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinite) => Ordering::Less,
            (ExtRational::Infinite, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinite, ExtRational::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinite => f.write_str("inf"),
        }
    }
}

/// A list of non-negative rationals rewritten over one common denominator,
/// so that exhaustive searches can run on machine integers.
#[derive(Clone, Debug)]
pub struct Scaled {
    pub numers: Vec<u64>,
    pub denom: u64,
}

impl Scaled {
    pub fn new(values: &[Rational]) -> Result<Self> {
        let mut lcm = BigInt::one();
        for v in values {
            lcm = lcm.lcm(v.denom());
        }
        let too_large = || Error::TooLarge("weight denominators exceed 64 bits".into());
        let denom = lcm.to_u64().ok_or_else(too_large)?;
        let mut total: u128 = 0;
        let numers = values
            .iter()
            .map(|v| {
                if v < &Rational::zero() {
                    return Err(Error::BadDistribution("negative weight".into()));
                }
                let n = (v.numer() * (&lcm / v.denom())).to_u64().ok_or_else(too_large)?;
                total += n as u128;
                Ok(n)
            })
            .collect::<Result<Vec<_>>>()?;
        if total > (u64::MAX >> 1) as u128 {
            return Err(too_large());
        }
        Ok(Scaled { numers, denom })
    }

    pub fn total(&self) -> u64 {
        self.numers.iter().sum()
    }

    pub fn to_rational(&self, numer: u64) -> Rational {
        Rational::new(BigInt::from(numer), BigInt::from(self.denom))
    }
}

/// `a/b < c/d` for non-negative integer fractions with positive denominators.
pub(crate) fn frac_lt(a: u64, b: u64, c: u64, d: u64) -> bool {
    (a as u128) * (d as u128) < (c as u128) * (b as u128)
}
