use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::family::{level_histograms, Family};
use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, to_decimal, Bias, LevelWeights};

/// Pointwise boolean operations on families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Complement,
    Difference,
}

/// Applies `op` to `a` (and `b` for the binary operations).
pub fn combine(op: SetOp, a: &Family, b: Option<&Family>) -> Result<Family> {
    let rhs = || b.ok_or_else(|| Error::InvalidParams(format!("{op:?} needs two operands")));
    match op {
        SetOp::Complement => Ok(a.complement()),
        SetOp::Union => a.union(rhs()?),
        SetOp::Intersect => a.intersect(rhs()?),
        SetOp::Difference => a.difference(rhs()?),
    }
}

/// Exact `Σ_{A∈F} p^|A| (1-p)^(n-|A|)`.
pub fn measure(f: &Family, p: &Bias) -> BigRational {
    p.level_weights(f.n()).measure_of(&f.level_histogram())
}

fn same_dims(fams: &[&Family]) -> Result<()> {
    let n = fams[0].n();
    for f in &fams[1..] {
        if f.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: f.n(),
            });
        }
    }
    Ok(())
}

/// Level histograms of the four occupancy classes of a triple, plus the
/// three single-family parts `X∖(Y∪Z)`, `Y∖(X∪Z)`, `Z∖(X∪Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleHistograms {
    pub n: u32,
    pub classes: [Vec<u64>; 4],
    pub parts: [Vec<u64>; 3],
}

impl TripleHistograms {
    pub fn new(x: &Family, y: &Family, z: &Family) -> Result<Self> {
        same_dims(&[x, y, z])?;
        let n = x.n();
        let valid = if n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << n)) - 1
        };
        let (xw, yw, zw) = (x.words(), y.words(), z.words());
        let [c0, c1, c2, c3, px, py, pz] = level_histograms(n, xw.len(), |j| {
            let (a, b, c) = (xw[j], yw[j], zw[j]);
            let all = a & b & c;
            let any = a | b | c;
            let odd = a ^ b ^ c;
            [
                !any & valid,
                odd & !all,
                any & !odd,
                all,
                a & !b & !c,
                b & !a & !c,
                c & !a & !b,
            ]
        });
        Ok(TripleHistograms {
            n,
            classes: [c0, c1, c2, c3],
            parts: [px, py, pz],
        })
    }

    pub fn class_counts(&self) -> [u64; 4] {
        std::array::from_fn(|i| self.classes[i].iter().sum())
    }

    pub fn part_counts(&self) -> [u64; 3] {
        std::array::from_fn(|i| self.parts[i].iter().sum())
    }
}

/// Counts and biased measures of the points lying in exactly `i` of three
/// families, `i = 0..=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupancyProfile {
    pub counts: [u64; 4],
    pub densities: [BigRational; 4],
    /// `None` when the profile comes from a weighted poset rather than a
    /// biased cube.
    pub bias: Option<Bias>,
}

impl OccupancyProfile {
    pub fn s1(&self) -> &BigRational {
        &self.densities[1]
    }

    pub fn c1(&self) -> u64 {
        self.counts[1]
    }

    pub fn is_normalized(&self) -> bool {
        self.densities.iter().sum::<BigRational>() == BigRational::one()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            counts: [u64; 4],
            densities: [String; 4],
            decimals: [String; 4],
            bias: Option<String>,
        }
        serde_json::to_value(Repr {
            counts: self.counts,
            densities: std::array::from_fn(|i| fmt_ratio(&self.densities[i])),
            decimals: std::array::from_fn(|i| to_decimal(&self.densities[i], 10)),
            bias: self.bias.as_ref().map(|b| b.to_string()),
        })
        .expect("profile serializes")
    }
}

/// Occupancy profile of the triple `(X, Y, Z)` under bias `p`.
pub fn occupancy(x: &Family, y: &Family, z: &Family, p: &Bias) -> Result<OccupancyProfile> {
    let h = TripleHistograms::new(x, y, z)?;
    let w = LevelWeights::new(p, h.n);
    Ok(OccupancyProfile {
        counts: h.class_counts(),
        densities: std::array::from_fn(|i| w.measure_of(&h.classes[i])),
        bias: Some(p.clone()),
    })
}

/// `μ_p(U∩V) − μ_p(U)·μ_p(V)`; nonnegative whenever both are upsets.
pub fn hk_defect(u: &Family, v: &Family, p: &Bias) -> Result<BigRational> {
    let both = u.intersect(v)?;
    let w = p.level_weights(u.n());
    let mu = |f: &Family| w.measure_of(&f.level_histogram());
    Ok(mu(&both) - mu(u) * mu(v))
}

/// Measure of the points in exactly one of `X`, `Y`.
pub fn two_set_exactly_one(x: &Family, y: &Family, p: &Bias) -> Result<BigRational> {
    Ok(measure(&x.symmetric_difference(y)?, p))
}
