//! Explicit families: dictators, thresholds, the five-dimensional triple
//! beating `3ρ(1-ρ)²`, the level-threshold triple on `Q_n(p)` and the
//! closed form `q(p)` of its single-occupancy measure.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, to_decimal, Bias};
use crate::setcube::{Family, Point, N_MAX};

/// Three upward closed families of equal dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    pub x: Family,
    pub y: Family,
    pub z: Family,
    pub label: String,
}

impl TripleSystem {
    pub fn new(x: Family, y: Family, z: Family, label: impl Into<String>) -> Result<Self> {
        for f in [&y, &z] {
            if f.n() != x.n() {
                return Err(Error::DimensionMismatch {
                    left: x.n(),
                    right: f.n(),
                });
            }
        }
        if !(x.is_upward_closed() && y.is_upward_closed() && z.is_upward_closed()) {
            return Err(Error::NotUpwardClosed);
        }
        Ok(TripleSystem {
            x,
            y,
            z,
            label: label.into(),
        })
    }

    pub fn n(&self) -> u32 {
        self.x.n()
    }

    pub fn families(&self) -> [&Family; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn counts(&self) -> [u64; 3] {
        self.families().map(Family::count)
    }
}

/// Dimension, level threshold and bias of the level-threshold triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: u32,
    pub l: u32,
    pub p: Bias,
}

impl ConstructionParams {
    pub fn new(n: u32, l: u32, p: Bias) -> Result<Self> {
        check_level(n, l)?;
        Ok(ConstructionParams { n, l, p })
    }
}

fn check_level(n: u32, l: u32) -> Result<()> {
    if l < 1 || l + 2 > n {
        return Err(Error::InvalidParams(format!(
            "level l={l} must satisfy 1 <= l <= n-2 for n={n}"
        )));
    }
    Ok(())
}

/// `{A : i ∈ A}`.
pub fn dictator(n: u32, i: u32) -> Result<Family> {
    if i < 1 || i > n {
        return Err(Error::OutOfRange(format!("coordinate {i} outside [{n}]")));
    }
    let bit = 1u32 << (i - 1);
    Family::from_predicate(n, |p| p.mask() & bit != 0)
}

/// `{A : |A| ≥ l}`; `l = 0` is the full cube and `l = n+1` is empty.
pub fn threshold(n: u32, l: u32) -> Result<Family> {
    if l > n + 1 {
        return Err(Error::OutOfRange(format!(
            "threshold {l} above n+1 = {}",
            n + 1
        )));
    }
    Family::from_predicate(n, |p| p.len() >= l)
}

fn pt(elements: &[u32]) -> Point {
    Point::from_elements(elements).expect("fixed point is valid")
}

/// The `Q_5` triple: two dictators and the threshold-3 family with `{3,4}`,
/// `{3,5}` swapped in for `{1,4,5}`, `{2,4,5}`. Each family has 16 members
/// and 13 points lie in exactly one of them.
pub fn q5_triple() -> TripleSystem {
    let x = dictator(5, 1).expect("valid");
    let y = dictator(5, 2).expect("valid");
    let mut z = threshold(5, 3).expect("valid");
    z.insert(pt(&[3, 4]));
    z.insert(pt(&[3, 5]));
    z.remove(pt(&[1, 4, 5]));
    z.remove(pt(&[2, 4, 5]));
    TripleSystem::new(x, y, z, "q5").expect("q5 families are upsets")
}

/// Dictators on 1 and 2, and `Z` = sets of size `> l` plus the size-`l`
/// sets avoiding both 1 and 2.
pub fn kahn_triple(n: u32, l: u32) -> Result<TripleSystem> {
    check_level(n, l)?;
    if n > N_MAX {
        return Err(Error::DimensionOverflow { n, max: N_MAX });
    }
    let x = dictator(n, 1)?;
    let y = dictator(n, 2)?;
    let z = Family::from_predicate(n, |p| {
        let k = p.len();
        k > l || (k == l && p.mask() & 0b11 == 0)
    })?;
    TripleSystem::new(x, y, z, format!("kahn(n={n},l={l})"))
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

/// `q = 2 Σ_{k=1}^{l} C(n-2,k-1) p^k (1-p)^(n-k) + Σ_{k=l}^{n-2} C(n-2,k) p^k (1-p)^(n-k)`.
pub fn q_formula(params: &ConstructionParams) -> Result<BigRational> {
    let ConstructionParams { n, l, p } = params;
    check_level(*n, *l)?;
    let c = binomial_row(n - 2);
    let p = p.value();
    let r = BigRational::one() - p;
    let term = |k: u32| pow(p, k) * pow(&r, n - k);
    let mut q = BigRational::zero();
    for k in 1..=*l {
        q += BigRational::from_integer(&c[k as usize - 1] * 2) * term(k);
    }
    for k in *l..=n - 2 {
        q += BigRational::from_integer(c[k as usize].clone()) * term(k);
    }
    Ok(q)
}

/// The two partial binomial sums `(A, B)` with `q = 2p(1-p)·A + (1-p)²·B`
/// and `A + B = 1`.
pub fn q_binomial_split(params: &ConstructionParams) -> Result<(BigRational, BigRational)> {
    let ConstructionParams { n, l, p } = params;
    check_level(*n, *l)?;
    let c = binomial_row(n - 2);
    let p = p.value();
    let r = BigRational::one() - p;
    let mut a = BigRational::zero();
    for k in 1..=*l {
        a += BigRational::from_integer(c[k as usize - 1].clone())
            * pow(p, k - 1)
            * pow(&r, n - k - 1);
    }
    let mut b = BigRational::zero();
    for k in *l..=n - 2 {
        b += BigRational::from_integer(c[k as usize].clone()) * pow(p, k) * pow(&r, n - k - 2);
    }
    Ok((a, b))
}

/// `q_formula` sampled on a grid of biases.
pub fn qcurve(n: u32, l: u32, grid: &[Bias]) -> Result<Vec<(Bias, BigRational)>> {
    check_level(n, l)?;
    grid.iter()
        .map(|p| {
            let params = ConstructionParams::new(n, l, p.clone())?;
            Ok((p.clone(), q_formula(&params)?))
        })
        .collect()
}

/// `k+1` equally spaced biases `0, 1/k, ..., 1`.
pub fn uniform_grid(k: u32) -> Result<Vec<Bias>> {
    if k == 0 {
        return Err(Error::InvalidParams("grid needs at least one step".into()));
    }
    (0..=k)
        .map(|i| Bias::from_ratio(i64::from(i), i64::from(k)))
        .collect()
}

pub fn qcurve_csv(curve: &[(Bias, BigRational)]) -> String {
    let mut out = String::from("p,q,q_decimal\n");
    for (p, q) in curve {
        let _ = writeln!(out, "{p},{},{}", fmt_ratio(q), to_decimal(q, 10));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::setcube::measure;

    #[test]
    fn dictator_examples() {
        let d = dictator(5, 1).unwrap();
        assert_eq!(d.count(), 16);
        assert_eq!(d.minimal_elements().unwrap(), vec![pt(&[1])]);
        assert_eq!(
            dictator(4, 2).unwrap().minimal_elements().unwrap(),
            vec![pt(&[2])]
        );
        assert!(matches!(dictator(4, 5), Err(Error::OutOfRange(_))));
        assert!(matches!(dictator(4, 0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn threshold_examples() {
        let t = threshold(5, 3).unwrap();
        assert_eq!(t.count(), 16);
        let mins = t.minimal_elements().unwrap();
        assert_eq!(mins.len(), 10);
        assert!(mins.iter().all(|p| p.len() == 3));
        assert_eq!(threshold(4, 0).unwrap(), Family::full(4).unwrap());
        assert!(threshold(4, 5).unwrap().is_empty());
        assert!(threshold(4, 6).is_err());
    }

    #[test]
    fn q5_shape() {
        let t = q5_triple();
        assert_eq!(t.counts(), [16, 16, 16]);
        assert!(t.z.is_upward_closed());
        assert!(t.z.contains(pt(&[3, 4])) && !t.z.contains(pt(&[1, 4, 5])));
    }

    #[test]
    fn kahn_rejects_bad_levels() {
        assert!(matches!(kahn_triple(7, 0), Err(Error::InvalidParams(_))));
        assert!(matches!(kahn_triple(7, 6), Err(Error::InvalidParams(_))));
        assert!(kahn_triple(7, 5).is_ok());
        assert!(ConstructionParams::new(3, 2, Bias::uniform()).is_err());
    }

    #[test]
    fn kahn_z_measure() {
        let t = kahn_triple(7, 3).unwrap();
        let p = Bias::from_ratio(3, 8).unwrap();
        assert_eq!(measure(&t.z, &p), ratio(678402, 2097152));
    }

    #[test]
    fn q_formula_values() {
        let at = |num, den| {
            q_formula(&ConstructionParams::new(7, 3, Bias::from_ratio(num, den).unwrap()).unwrap())
                .unwrap()
        };
        assert_eq!(at(1, 3), ratio(4, 9));
        assert_eq!(at(3, 8), ratio(937950, 2097152));
        assert_eq!(at(0, 1), ratio(0, 1));
        assert_eq!(at(1, 1), ratio(0, 1));
    }

    #[test]
    fn qcurve_grid() {
        let grid = vec![
            Bias::from_ratio(1, 3).unwrap(),
            Bias::from_ratio(3, 8).unwrap(),
        ];
        let c = qcurve(7, 3, &grid).unwrap();
        assert_eq!(c[0].1, ratio(4, 9));
        assert_eq!(c[1].1, ratio(937950, 2097152));
        let g = uniform_grid(16).unwrap();
        assert_eq!(qcurve(7, 3, &g).unwrap().len(), 17);
        let csv = qcurve_csv(&c);
        assert!(csv.starts_with("p,q,q_decimal\n1/3,4/9,0.4444444444\n"));
        assert!(qcurve(7, 0, &g).is_err());
    }

    #[test]
    fn pascal_rows() {
        let r = binomial_row(5);
        assert_eq!(r, [1, 5, 10, 10, 5, 1].map(BigInt::from).to_vec());
        assert_eq!(binomial_row(24)[12], BigInt::from(2704156));
    }
}
