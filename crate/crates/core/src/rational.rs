//! Exact rationals, the bias parameter of the product measure, and the
//! per-level weights `p^k (1-p)^(n-k)` shared by every measure computation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Parses `"a/b"`, `"a"` or a terminating decimal such as `"0.375"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Rational(s.to_string());
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(whole * &scale + digits, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let a: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(a))
}

/// Lowest-terms `a/b` rendering; integers render as `a/1` so every exact
/// value crossing a boundary has the same shape.
pub fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering rounded half away from zero. Display only.
pub fn to_decimal(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        frac.to_string(),
        width = places
    )
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Bias `p` of the product measure on `Q_n(p)`; always within `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bias(BigRational);

impl Bias {
    pub fn new(p: BigRational) -> Result<Self> {
        if p.is_negative() || p > BigRational::one() {
            return Err(Error::InvalidBias(fmt_ratio(&p)));
        }
        Ok(Bias(p))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidBias(format!("{num}/{den}")));
        }
        Self::new(ratio(num, den))
    }

    pub fn uniform() -> Self {
        Bias(ratio(1, 2))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn is_uniform(&self) -> bool {
        self.0 == ratio(1, 2)
    }

    /// True for `0 < p < 1`.
    pub fn is_interior(&self) -> bool {
        self.0.is_positive() && self.0 < BigRational::one()
    }

    pub fn level_weights(&self, n: u32) -> LevelWeights {
        LevelWeights::new(self, n)
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_ratio(&self.0))
    }
}

impl FromStr for Bias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bias::new(parse_rational(s)?)
    }
}

impl TryFrom<BigRational> for Bias {
    type Error = Error;

    fn try_from(p: BigRational) -> Result<Self> {
        Bias::new(p)
    }
}

/// Weights `p^k (1-p)^(n-k)` for `k = 0..=n`, held as integer numerators
/// over the common denominator `den^n` where `p = num/den`.
///
/// Measures are then integer dot products against level histograms, and
/// comparisons between measures at the same bias reduce to comparing the
/// numerators.
#[derive(Clone, Debug)]
pub struct LevelWeights {
    n: u32,
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl LevelWeights {
    pub fn new(bias: &Bias, n: u32) -> Self {
        let a = bias.value().numer().clone();
        let b = bias.value().denom().clone();
        let c = &b - &a;
        let mut a_pows = Vec::with_capacity(n as usize + 1);
        let mut c_pows = Vec::with_capacity(n as usize + 1);
        let (mut x, mut y) = (BigInt::one(), BigInt::one());
        for _ in 0..=n {
            a_pows.push(x.clone());
            c_pows.push(y.clone());
            x *= &a;
            y *= &c;
        }
        let numerators = (0..=n as usize)
            .map(|k| &a_pows[k] * &c_pows[n as usize - k])
            .collect();
        LevelWeights {
            n,
            numerators,
            denominator: num_traits::pow(b, n as usize),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Weight of a single point with `k` elements.
    pub fn point(&self, k: usize) -> BigRational {
        BigRational::new(self.numerators[k].clone(), self.denominator.clone())
    }

    /// `Σ_k hist[k] · num_k`, the numerator of the measure of a family with
    /// the given level histogram.
    pub fn numerator_of(&self, hist: &[u64]) -> BigInt {
        debug_assert_eq!(hist.len(), self.numerators.len());
        hist.iter()
            .zip(&self.numerators)
            .filter(|(c, _)| **c != 0)
            .fold(BigInt::zero(), |acc, (c, w)| acc + w * BigInt::from(*c))
    }

    pub fn measure_of(&self, hist: &[u64]) -> BigRational {
        BigRational::new(self.numerator_of(hist), self.denominator.clone())
    }
}
