//! Exact positive rational weights.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SfvsError;

/// An exact rational weight, always normalized with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(BigRational);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn new(num: i64, den: i64) -> Self {
        Weight(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Weight(r)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parse a strictly positive weight.
    pub fn parse_positive(s: &str) -> Result<Self, SfvsError> {
        let w: Weight = s.parse()?;
        if !w.is_positive() {
            return Err(SfvsError::InvalidWeight(format!("{s} is not positive")));
        }
        Ok(w)
    }
}

impl FromStr for Weight {
    type Err = SfvsError;

    /// Accepts `num/den` or a bare integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SfvsError::InvalidWeight(format!("cannot parse {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(SfvsError::InvalidWeight(format!("zero denominator in {s:?}")));
        }
        Ok(Weight(BigRational::new(num, den)))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &'a Weight) -> Weight {
        Weight(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(&self.0 - &rhs.0)
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Self {
        iter.fold(Weight::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Self {
        iter.fold(Weight::zero(), |a, b| &a + b)
    }
}

/// Weights rescaled to integers over a common denominator.
///
/// Solvers compare candidate weights as integer sums; only final results are
/// turned back into rationals.
#[derive(Clone, Debug)]
pub struct ScaledWeights {
    values: Vec<BigInt>,
    denom: BigInt,
    small: Option<Vec<i64>>,
}

impl ScaledWeights {
    pub fn new(weights: &[Weight]) -> Self {
        let denom = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let values: Vec<BigInt> = weights
            .iter()
            .map(|w| w.numer() * (&denom / w.denom()))
            .collect();
        let total: BigInt = values.iter().sum();
        let small = if total.to_i64().is_some() {
            values.iter().map(|v| v.to_i64()).collect()
        } else {
            None
        };
        ScaledWeights { values, denom, small }
    }

    pub fn get(&self, v: usize) -> &BigInt {
        &self.values[v]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `Some` when every partial sum fits in an `i64`.
    pub fn small(&self) -> Option<&[i64]> {
        self.small.as_deref()
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn sum_of<I: IntoIterator<Item = usize>>(&self, vertices: I) -> BigInt {
        vertices.into_iter().map(|v| &self.values[v]).sum()
    }

    pub fn unscale(&self, scaled: BigInt) -> Weight {
        Weight(BigRational::new(scaled, self.denom.clone()))
    }
}
