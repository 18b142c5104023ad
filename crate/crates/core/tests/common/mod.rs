//! Brute-force reference implementations. Nothing here calls the library's
//! closure, measure, occupancy or formula code; only `Family::contains` and
//! constructors from explicit point lists are used to cross the boundary.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use upcube::{Family, Point};

pub fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn popcount(x: u32) -> u32 {
    x.count_ones()
}

pub fn point_weight(x: u32, n: u32, p: &BigRational) -> BigRational {
    let k = popcount(x) as usize;
    let q = BigRational::one() - p;
    num_traits::pow(p.clone(), k) * num_traits::pow(q, n as usize - k)
}

/// Membership vector of a family, read point by point.
pub fn members(f: &Family) -> Vec<bool> {
    (0..1u32 << f.n()).map(|x| f.contains(Point(x))).collect()
}

pub fn family_of(n: u32, m: &[bool]) -> Family {
    let pts = (0..1u32 << n).filter(|&x| m[x as usize]).map(Point);
    Family::from_points(n, pts).unwrap()
}

pub fn measure(m: &[bool], n: u32, p: &BigRational) -> BigRational {
    (0..1u32 << n)
        .filter(|&x| m[x as usize])
        .map(|x| point_weight(x, n, p))
        .fold(BigRational::zero(), |a, b| a + b)
}

pub fn is_upset(m: &[bool], n: u32) -> bool {
    (0..1u32 << n).all(|x| !m[x as usize] || (0..n).all(|i| m[(x | 1 << i) as usize]))
}

/// Everything above some generator.
pub fn closure(gens: &[u32], n: u32) -> Vec<bool> {
    (0..1u32 << n)
        .map(|x| gens.iter().any(|g| g & !x == 0))
        .collect()
}

/// Members with no member strictly below.
pub fn minimal(m: &[bool], n: u32) -> Vec<u32> {
    (0..1u32 << n)
        .filter(|&x| m[x as usize])
        .filter(|&x| (0..1u32 << n).all(|y| y == x || y & x != y || !m[y as usize]))
        .collect()
}

/// Occupancy densities `s_0..s_3` of three membership vectors.
pub fn occupancy(ms: [&[bool]; 3], n: u32, p: &BigRational) -> ([u64; 4], [BigRational; 4]) {
    let mut counts = [0u64; 4];
    let mut dens: [BigRational; 4] = std::array::from_fn(|_| BigRational::zero());
    for x in 0..1u32 << n {
        let k = ms.iter().filter(|m| m[x as usize]).count();
        counts[k] += 1;
        dens[k] += point_weight(x, n, p);
    }
    (counts, dens)
}

/// Exactly-one measure of the threshold triple, summed point by point from
/// the defining predicates.
pub fn q_by_points(n: u32, l: u32, p: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for x in 0..1u32 << n {
        let k = popcount(x);
        let inx = x & 1 != 0;
        let iny = x & 2 != 0;
        let inz = k > l || (k == l && x & 3 == 0);
        if u32::from(inx) + u32::from(iny) + u32::from(inz) == 1 {
            total += point_weight(x, n, p);
        }
    }
    total
}

/// All upsets of `Q_n` for `n <= 4`, by filtering all `2^(2^n)` families.
pub fn all_upsets_small(n: u32) -> Vec<Vec<bool>> {
    assert!(n <= 4);
    let size = 1usize << n;
    (0..1u64 << size)
        .map(|bits| (0..size).map(|x| bits >> x & 1 == 1).collect::<Vec<bool>>())
        .filter(|m| is_upset(m, n))
        .collect()
}

/// Number of upsets of `Q_5`: pairs `U_0 ⊆ U_1` of upsets of `Q_4` (the
/// sets without and with element 5).
pub fn count_upsets_q5() -> usize {
    let ups = all_upsets_small(4);
    let masks: Vec<u16> = ups
        .iter()
        .map(|m| {
            m.iter()
                .enumerate()
                .fold(0u16, |acc, (i, &b)| acc | (u16::from(b) << i))
        })
        .collect();
    masks
        .iter()
        .map(|&a| masks.iter().filter(|&&b| a & b == a).count())
        .sum()
}

/// The LP maximum of `s_1` by brute force over the two free coordinates
/// `(s_2, s_3)` on a grid of step `1/steps`, returning the best feasible s1.
pub fn lp_grid_max(rho: &BigRational, steps: i64) -> BigRational {
    let three = r(3, 1);
    let one = BigRational::one();
    let mut best: Option<BigRational> = None;
    for i in 0..=steps {
        for j in 0..=steps {
            let s2 = r(i, steps);
            let s3 = r(j, steps);
            let s1 = &three * rho - r(2, 1) * &s2 - &three * &s3;
            let s0 = &one - &s1 - &s2 - &s3;
            let ok = s0 >= BigRational::zero()
                && s1 >= BigRational::zero()
                && &three * (&one - rho) * &s3 >= rho * &s2
                && &three * rho * &s0 >= (&one - rho) * &s1;
            if ok && best.as_ref().is_none_or(|b| s1 > *b) {
                best = Some(s1);
            }
        }
    }
    best.unwrap_or_else(BigRational::zero)
}
