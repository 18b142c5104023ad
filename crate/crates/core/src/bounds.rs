//! The upper bound `3ρ(1-ρ)/(1+ρ)` on the single-occupancy density of
//! three upsets of common density `ρ`, and the four-variable linear
//! program it comes from.
//!
//! Variables are the occupancy densities `s_0..s_3`. Constraints:
//!
//! * `s_0 + s_1 + s_2 + s_3 = 1`
//! * `s_1 + 2 s_2 + 3 s_3 = 3ρ`
//! * `3(1-ρ) s_3 >= ρ s_2` (correlation of pairwise and triple intersections)
//! * `3ρ s_0 >= (1-ρ) s_1` (the same for complements)
//! * `s_i >= 0`

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, int, ratio, to_decimal};

/// Names of the six inequality constraints, in enumeration order.
pub const INEQUALITIES: [&str; 6] = ["hk_upper", "hk_lower", "s0>=0", "s1>=0", "s2>=0", "s3>=0"];

type Row = [BigRational; 4];

fn inequality_rows(rho: &BigRational) -> [Row; 6] {
    let one = BigRational::one();
    let z = BigRational::zero;
    let unit =
        |i: usize| -> Row { std::array::from_fn(|j| if i == j { one.clone() } else { z() }) };
    [
        [z(), z(), -rho.clone(), int(3) * (&one - rho)],
        [int(3) * rho, -(&one - rho), z(), z()],
        unit(0),
        unit(1),
        unit(2),
        unit(3),
    ]
}

fn equality_rows(rho: &BigRational) -> [(Row, BigRational); 2] {
    [
        ([int(1), int(1), int(1), int(1)], int(1)),
        ([int(0), int(1), int(2), int(3)], int(3) * rho),
    ]
}

fn dot(a: &Row, s: &[BigRational; 4]) -> BigRational {
    a.iter().zip(s).map(|(x, y)| x * y).sum()
}

/// True iff `s` satisfies every constraint exactly.
pub fn profile_feasible(s: &[BigRational; 4], rho: &BigRational) -> bool {
    equality_rows(rho)
        .iter()
        .all(|(row, rhs)| dot(row, s) == *rhs)
        && inequality_rows(rho)
            .iter()
            .all(|row| !dot(row, s).is_negative())
}

/// `3ρ(1-ρ)/(1+ρ)`.
pub fn occupancy_bound(rho: &BigRational) -> BigRational {
    let one = BigRational::one();
    int(3) * rho * (&one - rho) / (&one + rho)
}

/// `3ρ(1-ρ)²`, the value of three independent upsets of density `ρ`.
pub fn independent_value(rho: &BigRational) -> BigRational {
    let r = BigRational::one() - rho;
    int(3) * rho * &r * &r
}

/// Solves a square system by Gauss-Jordan elimination; `None` if singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for v in &mut a[col] {
            *v *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub rho: BigRational,
    pub profile: [BigRational; 4],
    pub objective: BigRational,
    /// Inequalities holding with equality at `profile`.
    pub tight: Vec<&'static str>,
    /// Feasible basic points examined.
    pub vertices: usize,
}

impl LpSolution {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            rho: String,
            profile: [String; 4],
            objective: String,
            objective_decimal: String,
            bound: String,
            matches_bound: bool,
            tight: Vec<&'static str>,
            vertices: usize,
        }
        let bound = occupancy_bound(&self.rho);
        serde_json::to_value(Repr {
            rho: fmt_ratio(&self.rho),
            profile: std::array::from_fn(|i| fmt_ratio(&self.profile[i])),
            objective: fmt_ratio(&self.objective),
            objective_decimal: to_decimal(&self.objective, 10),
            bound: fmt_ratio(&bound),
            matches_bound: bound == self.objective,
            tight: self.tight.clone(),
            vertices: self.vertices,
        })
        .expect("solution serializes")
    }
}

/// Maximizes `s_1` by enumerating every basic point (both equalities plus
/// two active inequalities) and keeping the best feasible one; the first
/// optimal vertex in enumeration order is reported.
pub fn lp_max_s1(rho: &BigRational) -> Result<LpSolution> {
    if !rho.is_positive() || *rho >= BigRational::one() {
        return Err(Error::InvalidRho(fmt_ratio(rho)));
    }
    let ineq = inequality_rows(rho);
    let eq = equality_rows(rho);
    let mut best: Option<[BigRational; 4]> = None;
    let mut vertices = 0;
    for i in 0..ineq.len() {
        for j in i + 1..ineq.len() {
            let mut a: Vec<Vec<BigRational>> = eq.iter().map(|(r, _)| r.to_vec()).collect();
            let mut b: Vec<BigRational> = eq.iter().map(|(_, v)| v.clone()).collect();
            a.push(ineq[i].to_vec());
            a.push(ineq[j].to_vec());
            b.push(BigRational::zero());
            b.push(BigRational::zero());
            let Some(sol) = solve(a, b) else { continue };
            let s: [BigRational; 4] = sol.try_into().expect("four unknowns");
            if !profile_feasible(&s, rho) {
                continue;
            }
            vertices += 1;
            if best.as_ref().is_none_or(|b| s[1] > b[1]) {
                best = Some(s);
            }
        }
    }
    let profile = best.ok_or_else(|| Error::InvalidRho(fmt_ratio(rho)))?;
    let tight = ineq
        .iter()
        .zip(INEQUALITIES)
        .filter(|(row, _)| dot(row, &profile).is_zero())
        .map(|(_, name)| name)
        .collect();
    Ok(LpSolution {
        rho: rho.clone(),
        objective: profile[1].clone(),
        profile,
        tight,
        vertices,
    })
}

/// `((1-ρ)²/(1+ρ), 3ρ(1-ρ)/(1+ρ), 0, 2ρ²/(1+ρ))`, the optimal profile.
pub fn optimal_profile(rho: &BigRational) -> [BigRational; 4] {
    let one = BigRational::one();
    let d = &one + rho;
    let r = &one - rho;
    [
        &r * &r / &d,
        int(3) * rho * &r / &d,
        BigRational::zero(),
        int(2) * rho * rho / &d,
    ]
}

/// Rational approximation of the maximizer `√2 - 1` of the bound and of the
/// maximum `9 - 6√2`, each certified by squaring against 2 (resp. 72).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundMaximum {
    pub tolerance: BigRational,
    pub rho: BigRational,
    pub value: BigRational,
    pub iterations: u32,
    /// `(ρ+1-tol)² <= 2 <= (ρ+1+tol)²`, i.e. `|ρ - (√2-1)| <= tol`.
    pub rho_certified: bool,
    /// `(9-v-tol)² <= 72 <= (9-v+tol)²`, i.e. `|v - (9-6√2)| <= tol`.
    pub value_certified: bool,
    /// `(1+ρ)·v = 3ρ(1-ρ)` at the returned point.
    pub identity_holds: bool,
}

impl BoundMaximum {
    pub fn certified(&self) -> bool {
        self.rho_certified && self.value_certified && self.identity_holds
    }
}

fn bracketed(lo: &BigRational, hi: &BigRational, square: &BigRational) -> bool {
    !lo.is_negative() && lo * lo <= *square && *square <= hi * hi
}

/// Ternary search over `[0, 1]` with dyadic probes at 3/8 and 5/8 of the
/// bracket; the bound is strictly concave there.
pub fn bound_maximizer(tolerance: &BigRational) -> Result<BoundMaximum> {
    if !tolerance.is_positive() {
        return Err(Error::InvalidTolerance(fmt_ratio(tolerance)));
    }
    let (mut lo, mut hi) = (BigRational::zero(), BigRational::one());
    let mut iterations = 0;
    let eighth = ratio(1, 8);
    while &hi - &lo > *tolerance {
        let width = &hi - &lo;
        let m1 = &lo + &width * int(3) * &eighth;
        let m2 = &lo + &width * int(5) * &eighth;
        let (f1, f2) = (occupancy_bound(&m1), occupancy_bound(&m2));
        if f1 < f2 {
            lo = m1;
        } else if f1 > f2 {
            hi = m2;
        } else {
            lo = m1;
            hi = m2;
        }
        iterations += 1;
    }
    let rho = (&lo + &hi) * ratio(1, 2);
    let value = occupancy_bound(&rho);
    let one = BigRational::one();
    let nine = int(9);
    let rho_certified = bracketed(
        &(&rho + &one - tolerance),
        &(&rho + &one + tolerance),
        &int(2),
    );
    let value_certified = bracketed(
        &(&nine - &value - tolerance),
        &(&nine - &value + tolerance),
        &int(72),
    );
    let identity_holds = (&one + &rho) * &value == int(3) * &rho * (&one - &rho);
    Ok(BoundMaximum {
        tolerance: tolerance.clone(),
        rho,
        value,
        iterations,
        rho_certified,
        value_certified,
        identity_holds,
    })
}

/// `k+1` rows `ρ = i/k` of the bound next to the independent value.
pub fn bound_sweep_csv(k: u32) -> Result<String> {
    if k == 0 {
        return Err(Error::InvalidParams("sweep needs at least one step".into()));
    }
    let mut out = String::from("rho,bound,bound_decimal,independent,independent_decimal\n");
    for i in 0..=k {
        let rho = ratio(i64::from(i), i64::from(k));
        let b = occupancy_bound(&rho);
        let c = independent_value(&rho);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_ratio(&rho),
            fmt_ratio(&b),
            to_decimal(&b, 10),
            fmt_ratio(&c),
            to_decimal(&c, 10)
        );
    }
    Ok(out)
}
