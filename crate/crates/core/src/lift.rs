//! Block lifts from a biased cube to a uniform one, and the greedy top-up
//! that brings a lifted upset to an exact size.
//!
//! An upward closed gadget `I ⊆ Q_b` of size `u` sends each `b`-bit block
//! of a point of `Q_{bm}` to one bit (`1` iff the block lies in `I`). The
//! resulting map `Q_{bm} → Q_m` pushes the uniform measure forward to the
//! product measure with bias `u/2^b`, and preimages of upsets are upsets.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::constructions::{kahn_triple, q_formula, ConstructionParams, TripleSystem};
use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, ratio, to_decimal, Bias};
use crate::setcube::{occupancy, Family, OccupancyProfile, Point, N_MAX};

/// Widest supported gadget block.
pub const MAX_BLOCK: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftGadget {
    family: Family,
}

impl LiftGadget {
    /// Wraps a family over `Q_b`, `1 <= b <= 4`. Monotonicity is not
    /// required here; [`gadget_bias`] rejects a non-monotone gadget.
    pub fn new(family: Family) -> Result<Self> {
        let b = family.n();
        if b == 0 || b > MAX_BLOCK {
            return Err(Error::InvalidParams(format!(
                "gadget block width {b} outside 1..={MAX_BLOCK}"
            )));
        }
        Ok(LiftGadget { family })
    }

    /// `I = {{1,2}, {1,3}, {1,2,3}} ⊆ Q_3`, of bias 3/8.
    pub fn three_eighths() -> Self {
        let pts = [0b011, 0b101, 0b111].map(Point);
        LiftGadget::new(Family::from_points(3, pts).expect("valid")).expect("valid")
    }

    pub fn block(&self) -> u32 {
        self.family.n()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_monotone(&self) -> bool {
        self.family.is_upward_closed()
    }
}

/// `count(I) / 2^b`.
pub fn gadget_bias(g: &LiftGadget) -> Result<Bias> {
    if !g.is_monotone() {
        return Err(Error::NotUpwardClosed);
    }
    Bias::new(ratio(g.family.count() as i64, g.family.universe() as i64))
}

/// The point of `Q_m` that `x ∈ Q_{bm}` maps to: bit `j` is set iff block
/// `j` (bits `jb..jb+b-1` of `x`) is a member of the gadget.
pub fn project(x: Point, g: &LiftGadget, m: u32) -> Point {
    let b = g.block();
    let low = (1u32 << b) - 1;
    let mut y = 0;
    for j in 0..m {
        if g.family.contains(Point(x.mask() >> (j * b) & low)) {
            y |= 1 << j;
        }
    }
    Point(y)
}

/// Preimage of `s ⊆ Q_m` under the block map of `g`.
pub fn pull_back(s: &Family, g: &LiftGadget) -> Result<Family> {
    let m = s.n();
    let n = g.block() * m;
    if n > N_MAX {
        return Err(Error::DimensionOverflow { n, max: N_MAX });
    }
    let b = g.block();
    let low = (1u32 << b) - 1;
    let table: Vec<bool> = (0..=low).map(|q| g.family.contains(Point(q))).collect();
    Family::from_predicate(n, |x| {
        let mut y = 0u32;
        let mut rest = x.mask();
        for j in 0..m {
            if table[(rest & low) as usize] {
                y |= 1 << j;
            }
            rest >>= b;
        }
        s.contains(Point(y))
    })
}

/// Pool points in the order they are added: descending cardinality, ties
/// by ascending mask. Every superset of a pool point comes earlier.
pub fn topup_order(pool: &Family) -> Vec<Point> {
    let mut pts = pool.points();
    pts.sort_by_key(|p| (std::cmp::Reverse(p.len()), p.mask()));
    pts
}

/// Grows the upset `z0` by points of `pool`, one maximal point at a time,
/// until it has exactly `target` members.
///
/// `pool` must be disjoint from `z0` with `z0 ∪ pool` upward closed; then
/// every prefix of [`topup_order`] keeps the family upward closed.
pub fn topup_to_count(z0: &Family, pool: &Family, target: u64) -> Result<Family> {
    if z0.n() != pool.n() {
        return Err(Error::DimensionMismatch {
            left: z0.n(),
            right: pool.n(),
        });
    }
    let (low, high) = (z0.count(), z0.count() + pool.count());
    if target < low || target > high {
        return Err(Error::TargetUnreachable { target, low, high });
    }
    if !z0.is_upward_closed() {
        return Err(Error::ClosureViolation(
            "base family is not upward closed".into(),
        ));
    }
    if !z0.is_disjoint_from(pool)? {
        return Err(Error::ClosureViolation("pool meets the base family".into()));
    }
    if !z0.union(pool)?.is_upward_closed() {
        return Err(Error::ClosureViolation(
            "a pool point has a superset outside base and pool".into(),
        ));
    }
    let mut z1 = z0.clone();
    for p in topup_order(pool).into_iter().take((target - low) as usize) {
        z1.insert(p);
    }
    Ok(z1)
}

/// Everything measured while lifting the level-threshold triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub m: u32,
    pub b: u32,
    pub n: u32,
    pub l: u32,
    pub bias: Bias,
    pub target: u64,
    pub counts_before: [u64; 3],
    pub counts_after: [u64; 3],
    pub pool_size: u64,
    pub deficit: u64,
    /// `count(Z)/2^n` before the top-up.
    pub z_density_before: BigRational,
    /// `count(Z ∪ pool)/2^n`, the most the top-up could reach.
    pub z_density_with_pool: BigRational,
    pub occupancy_before: OccupancyProfile,
    pub occupancy: OccupancyProfile,
    /// Closed-form single-occupancy measure of the base triple.
    pub base_q: BigRational,
}

impl LiftReport {
    pub fn s1_count(&self) -> u64 {
        self.occupancy.counts[1]
    }

    pub fn s1_density(&self) -> &BigRational {
        &self.occupancy.densities[1]
    }

    /// `9·|S_1| > 4·2^n`, the exact form of `|S_1|/2^n > 4/9`.
    pub fn exceeds_four_ninths(&self) -> bool {
        BigInt::from(self.s1_count()) * 9 > BigInt::from(4u8) << self.n as usize
    }

    pub fn equal_sizes(&self) -> bool {
        self.counts_after.iter().all(|&c| c == self.target)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            m: u32,
            b: u32,
            n: u32,
            l: u32,
            bias: String,
            target: u64,
            counts_before: [u64; 3],
            counts_after: [u64; 3],
            pool_size: u64,
            deficit: u64,
            z_density_before: String,
            z_density_before_decimal: String,
            z_density_with_pool: String,
            z_density_with_pool_decimal: String,
            occupancy_before: serde_json::Value,
            occupancy: serde_json::Value,
            s1_count: u64,
            s1_density: String,
            s1_decimal: String,
            base_q: String,
            exceeds_four_ninths: bool,
            equal_sizes: bool,
        }
        serde_json::to_value(Repr {
            m: self.m,
            b: self.b,
            n: self.n,
            l: self.l,
            bias: self.bias.to_string(),
            target: self.target,
            counts_before: self.counts_before,
            counts_after: self.counts_after,
            pool_size: self.pool_size,
            deficit: self.deficit,
            z_density_before: fmt_ratio(&self.z_density_before),
            z_density_before_decimal: to_decimal(&self.z_density_before, 10),
            z_density_with_pool: fmt_ratio(&self.z_density_with_pool),
            z_density_with_pool_decimal: to_decimal(&self.z_density_with_pool, 10),
            occupancy_before: self.occupancy_before.to_json(),
            occupancy: self.occupancy.to_json(),
            s1_count: self.s1_count(),
            s1_density: fmt_ratio(self.s1_density()),
            s1_decimal: to_decimal(self.s1_density(), 10),
            base_q: fmt_ratio(&self.base_q),
            exceeds_four_ninths: self.exceeds_four_ninths(),
            equal_sizes: self.equal_sizes(),
        })
        .expect("report serializes")
    }
}

/// Lifts `kahn_triple(m, l)` through `g` and tops `Z` up, from the part of
/// `X∩Y` it misses, to the common size of the lifted dictators.
pub fn build_lifted(m: u32, l: u32, g: &LiftGadget) -> Result<(TripleSystem, LiftReport)> {
    let bias = gadget_bias(g)?;
    let base = kahn_triple(m, l)?;
    let x = pull_back(&base.x, g)?;
    let y = pull_back(&base.y, g)?;
    let z0 = pull_back(&base.z, g)?;
    let n = x.n();
    let uniform = Bias::uniform();
    let occupancy_before = occupancy(&x, &y, &z0, &uniform)?;
    let pool = pull_back(&base.x.intersect(&base.y)?, g)?.difference(&z0)?;
    let target = x.count();
    let deficit = target.checked_sub(z0.count()).ok_or_else(|| {
        Error::InvalidParams(format!(
            "lifted Z already has {} > {target} members",
            z0.count()
        ))
    })?;
    let z = topup_to_count(&z0, &pool, target)?;
    let occ = occupancy(&x, &y, &z, &uniform)?;
    let universe = BigInt::from(1u8) << n as usize;
    let density = |c: u64| BigRational::new(BigInt::from(c), universe.clone());
    let report = LiftReport {
        m,
        b: g.block(),
        n,
        l,
        bias: bias.clone(),
        target,
        counts_before: [x.count(), y.count(), z0.count()],
        counts_after: [x.count(), y.count(), z.count()],
        pool_size: pool.count(),
        deficit,
        z_density_before: density(z0.count()),
        z_density_with_pool: density(z0.count() + pool.count()),
        occupancy_before,
        occupancy: occ,
        base_q: q_formula(&ConstructionParams::new(m, l, bias)?)?,
    };
    let label = format!("lift({}, b={})", base.label, g.block());
    Ok((TripleSystem::new(x, y, z, label)?, report))
}

/// The 21-dimensional triple: `kahn_triple(7, 3)` lifted through the
/// 3/8 gadget and topped up to 786432 members each.
pub fn build_q21() -> Result<(TripleSystem, LiftReport)> {
    build_lifted(7, 3, &LiftGadget::three_eighths())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::dictator;

    #[test]
    fn gadget_biases() {
        assert_eq!(
            gadget_bias(&LiftGadget::three_eighths()).unwrap(),
            Bias::from_ratio(3, 8).unwrap()
        );
        let single = LiftGadget::new(Family::from_points(1, [Point(1)]).unwrap()).unwrap();
        assert_eq!(gadget_bias(&single).unwrap(), Bias::uniform());
        let full = LiftGadget::new(Family::full(2).unwrap()).unwrap();
        assert_eq!(gadget_bias(&full).unwrap(), Bias::from_ratio(1, 1).unwrap());
        let bad = LiftGadget::new(Family::from_points(2, [Point(1)]).unwrap()).unwrap();
        assert!(matches!(gadget_bias(&bad), Err(Error::NotUpwardClosed)));
        assert!(LiftGadget::new(Family::full(5).unwrap()).is_err());
        assert!(LiftGadget::new(Family::full(0).unwrap()).is_err());
    }

    #[test]
    fn identity_lift() {
        let g = LiftGadget::new(Family::from_points(1, [Point(1)]).unwrap()).unwrap();
        let s = Family::from_points(4, [Point(0b0101), Point(0b0010)])
            .unwrap()
            .up_closure();
        assert_eq!(pull_back(&s, &g).unwrap(), s);
        let e = Family::empty(4).unwrap();
        assert!(pull_back(&e, &LiftGadget::three_eighths())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dictator_lift_count() {
        let s = dictator(7, 1).unwrap();
        let lifted = pull_back(&s, &LiftGadget::three_eighths()).unwrap();
        assert_eq!(lifted.n(), 21);
        assert_eq!(lifted.count(), 786432);
        assert!(lifted.is_upward_closed());
    }

    #[test]
    fn lift_overflow() {
        let s = Family::empty(9).unwrap();
        assert!(matches!(
            pull_back(&s, &LiftGadget::three_eighths()),
            Err(Error::DimensionOverflow { n: 27, .. })
        ));
    }

    #[test]
    fn projection_uses_block_layout() {
        let g = LiftGadget::three_eighths();
        // block 0 = {1,2} ∈ I, block 1 = {1} ∉ I, block 2 = {1,3} ∈ I
        let x = Point(0b101_001_011);
        assert_eq!(project(x, &g, 3), Point(0b101));
    }

    #[test]
    fn topup_edges() {
        let z0 = dictator(4, 1).unwrap();
        let pool = dictator(4, 2).unwrap().difference(&z0).unwrap();
        assert_eq!(topup_to_count(&z0, &pool, z0.count()).unwrap(), z0);
        let all = topup_to_count(&z0, &pool, z0.count() + pool.count()).unwrap();
        assert_eq!(all, z0.union(&pool).unwrap());
        assert!(matches!(
            topup_to_count(&z0, &pool, 3),
            Err(Error::TargetUnreachable { .. })
        ));
        assert!(matches!(
            topup_to_count(&z0, &pool, 20),
            Err(Error::TargetUnreachable { .. })
        ));
        let overlapping = dictator(4, 2).unwrap();
        assert!(matches!(
            topup_to_count(&z0, &overlapping, 9),
            Err(Error::ClosureViolation(_))
        ));
        let loose = Family::from_points(4, [Point(0b0010)]).unwrap();
        assert!(matches!(
            topup_to_count(&z0, &loose, 9),
            Err(Error::ClosureViolation(_))
        ));
    }

    #[test]
    fn topup_prefixes_stay_closed() {
        let z0 = Family::from_points(5, [Point(0b00111)])
            .unwrap()
            .up_closure();
        let pool = Family::from_points(5, [Point(0b00001), Point(0b00010)])
            .unwrap()
            .up_closure()
            .difference(&z0)
            .unwrap();
        for t in z0.count()..=z0.count() + pool.count() {
            let z = topup_to_count(&z0, &pool, t).unwrap();
            assert_eq!(z.count(), t);
            assert!(z.is_upward_closed());
            assert!(z0.is_subset_of(&z).unwrap());
        }
    }
}
