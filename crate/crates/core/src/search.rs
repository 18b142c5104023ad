//! Exhaustive and local search over triples of equal-size upsets.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::occupancy_bound;
use crate::constructions::TripleSystem;
use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, ratio, to_decimal, Bias, LevelWeights};
use crate::setcube::{write_upset, Family, Point, TripleHistograms, N_MAX};

/// Largest `n` for which every upset of `Q_n` is enumerated.
pub const MAX_ENUM_N: u32 = 5;
/// Largest `n` for which all equal-count triples are examined.
pub const MAX_EXHAUSTIVE_N: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// Measure of the points in exactly one family.
    S1Density,
    /// Smallest of the measures of `X∖(Y∪Z)`, `Y∖(X∪Z)`, `Z∖(X∪Y)`.
    MinPartDensity,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::S1Density => "s1",
            ObjectiveKind::MinPartDensity => "min-part",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchObjective {
    kind: ObjectiveKind,
    bias: Bias,
}

impl SearchObjective {
    pub fn new(kind: ObjectiveKind, bias: Bias) -> Result<Self> {
        if !bias.is_interior() {
            return Err(Error::InvalidBias(bias.to_string()));
        }
        Ok(SearchObjective { kind, bias })
    }

    pub fn uniform(kind: ObjectiveKind) -> Self {
        SearchObjective {
            kind,
            bias: Bias::uniform(),
        }
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn evaluate(&self, x: &Family, y: &Family, z: &Family) -> Result<BigRational> {
        let w = self.bias.level_weights(x.n());
        let num = score(self.kind, &w, x, y, z)?;
        Ok(BigRational::new(num, w.denominator().clone()))
    }
}

/// Objective numerator over the fixed denominator of `w`.
fn score(
    kind: ObjectiveKind,
    w: &LevelWeights,
    x: &Family,
    y: &Family,
    z: &Family,
) -> Result<BigInt> {
    let h = TripleHistograms::new(x, y, z)?;
    Ok(match kind {
        ObjectiveKind::S1Density => w.numerator_of(&h.classes[1]),
        ObjectiveKind::MinPartDensity => h
            .parts
            .iter()
            .map(|p| w.numerator_of(p))
            .min()
            .expect("three parts"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub triple: TripleSystem,
    pub value: BigRational,
    pub objective: ObjectiveKind,
    pub iterations: u64,
    pub seed: u64,
}

impl SearchResult {
    /// Common uniform density `count/2^n` of the three families.
    pub fn rho(&self) -> BigRational {
        ratio(
            self.triple.x.count() as i64,
            self.triple.x.universe() as i64,
        )
    }

    /// Uniform single-occupancy density of the triple.
    pub fn uniform_s1(&self) -> BigRational {
        let t = &self.triple;
        SearchObjective::uniform(ObjectiveKind::S1Density)
            .evaluate(&t.x, &t.y, &t.z)
            .expect("triple has equal dimensions")
    }

    /// Checks the emitted triple: upsets of equal size whose uniform
    /// single-occupancy density respects `3ρ(1-ρ)/(1+ρ)`.
    pub fn is_sound(&self) -> bool {
        let [a, b, c] = self.triple.counts();
        self.triple.families().iter().all(|f| f.is_upward_closed())
            && a == b
            && b == c
            && self.uniform_s1() <= occupancy_bound(&self.rho())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            n: u32,
            objective: &'static str,
            value: String,
            value_decimal: String,
            rho: String,
            uniform_s1: String,
            bound: String,
            within_bound: bool,
            counts: [u64; 3],
            iterations: u64,
            seed: u64,
            families: [String; 3],
        }
        let t = &self.triple;
        let fams = t.families().map(|f| write_upset(f).unwrap_or_default());
        serde_json::to_value(Repr {
            n: t.n(),
            objective: self.objective.name(),
            value: fmt_ratio(&self.value),
            value_decimal: to_decimal(&self.value, 10),
            rho: fmt_ratio(&self.rho()),
            uniform_s1: fmt_ratio(&self.uniform_s1()),
            bound: fmt_ratio(&occupancy_bound(&self.rho())),
            within_bound: self.is_sound(),
            counts: t.counts(),
            iterations: self.iterations,
            seed: self.seed,
            families: fams,
        })
        .expect("result serializes")
    }
}

/// Every upset of `Q_n` exactly once, by deciding points from the top
/// level down: a point may join once all its one-element extensions have.
/// Exclusion is explored first, so the empty family comes first.
pub fn enumerate_upsets_qn(n: u32) -> Result<Vec<Family>> {
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge(format!(
            "upset enumeration for n={n} > {MAX_ENUM_N}"
        )));
    }
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
    fn walk(n: u32, order: &[u32], cur: u64, out: &mut Vec<u64>) {
        let Some((&x, rest)) = order.split_first() else {
            out.push(cur);
            return;
        };
        walk(n, rest, cur, out);
        let closed = (0..n)
            .filter(|b| x >> b & 1 == 0)
            .all(|b| cur >> (x | 1 << b) & 1 == 1);
        if closed {
            walk(n, rest, cur | 1 << x, out);
        }
    }
    let mut masks = Vec::new();
    walk(n, &order, 0, &mut masks);
    masks
        .into_iter()
        .map(|w| Family::from_points(n, (0..1u32 << n).filter(|&m| w >> m & 1 == 1).map(Point)))
        .collect()
}

/// Exact maximum of the objective over all triples (with repetition) of
/// equal-count upsets of `Q_n`. Triples are taken as `i <= j <= k` within
/// each count class; the first maximizer found is the witness.
pub fn exhaustive_best(n: u32, objective: &SearchObjective) -> Result<SearchResult> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge(format!(
            "exhaustive triple search for n={n} > {MAX_EXHAUSTIVE_N}"
        )));
    }
    let upsets = enumerate_upsets_qn(n)?;
    let mut classes: Vec<Vec<&Family>> = vec![Vec::new(); (1usize << n) + 1];
    for f in &upsets {
        classes[f.count() as usize].push(f);
    }
    let w = objective.bias.level_weights(n);
    let mut best: Option<(BigInt, [&Family; 3])> = None;
    let mut iterations = 0u64;
    for class in &classes {
        for (i, x) in class.iter().enumerate() {
            for (j, y) in class.iter().enumerate().skip(i) {
                for z in class.iter().skip(j) {
                    iterations += 1;
                    let s = score(objective.kind, &w, x, y, z)?;
                    if best.as_ref().is_none_or(|(b, _)| s > *b) {
                        best = Some((s, [*x, *y, *z]));
                    }
                }
            }
        }
    }
    let (num, [x, y, z]) = best.expect("the empty family forms a triple");
    Ok(SearchResult {
        triple: TripleSystem::new(
            x.clone(),
            y.clone(),
            z.clone(),
            format!("exhaustive(n={n})"),
        )?,
        value: BigRational::new(num, w.denominator().clone()),
        objective: objective.kind,
        iterations,
        seed: 0,
    })
}

/// Uniformly random member of `f`; `None` if `f` is empty.
fn random_member(f: &Family, rng: &mut impl Rng) -> Option<Point> {
    if f.is_empty() {
        return None;
    }
    let mut k = rng.gen_range(0..f.count());
    for (j, &w) in f.words().iter().enumerate() {
        let c = u64::from(w.count_ones());
        if k < c {
            let mut w = w;
            for _ in 0..k {
                w &= w - 1;
            }
            return Some(Point(((j as u32) << 6) | w.trailing_zeros()));
        }
        k -= c;
    }
    unreachable!("index below count")
}

/// Up-closure of `k` uniformly random points, `k` drawn from `1..=2^(n-1)`.
pub fn random_upset(n: u32, rng: &mut impl Rng) -> Result<Family> {
    let half = if n == 0 { 1 } else { 1u64 << (n - 1) };
    let k = rng.gen_range(1..=half);
    let pts: Vec<Point> = (0..k).map(|_| Point(rng.gen_range(0..1u32 << n))).collect();
    Ok(Family::from_points(n, pts)?.up_closure())
}

/// A random upset with exactly `target` members: a random up-closure,
/// shrunk by minimal points or grown by addable points as needed.
pub fn random_upset_with_count(n: u32, target: u64, rng: &mut impl Rng) -> Result<Family> {
    if target > 1u64 << n {
        return Err(Error::InvalidDensity(format!("{target} members in Q_{n}")));
    }
    let mut f = random_upset(n, rng)?;
    while f.count() > target {
        let p = random_member(&f.removable(), rng).expect("nonempty upset has a minimal point");
        f.remove(p);
    }
    while f.count() < target {
        let p = random_member(&f.addable(), rng).expect("proper upset has an addable point");
        f.insert(p);
    }
    Ok(f)
}

#[derive(Clone, Debug)]
pub struct LocalSearchConfig {
    pub n: u32,
    /// Common uniform density; `rho·2^n` must be an integer.
    pub rho: BigRational,
    pub objective: SearchObjective,
    pub seed: u64,
    /// Move budget of each restart.
    pub max_iters: u64,
    pub restarts: u32,
    /// Non-improving moves tolerated before the current triple is redrawn.
    pub patience: u64,
}

impl LocalSearchConfig {
    pub fn new(
        n: u32,
        rho: BigRational,
        objective: SearchObjective,
        seed: u64,
        max_iters: u64,
    ) -> Self {
        LocalSearchConfig {
            n,
            rho,
            objective,
            seed,
            max_iters,
            restarts: 1,
            patience: 2_000,
        }
    }

    pub fn with_restarts(mut self, restarts: u32) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_patience(mut self, patience: u64) -> Self {
        self.patience = patience;
        self
    }

    fn target_count(&self) -> Result<u64> {
        let bad = || Error::InvalidDensity(fmt_ratio(&self.rho));
        if self.n > N_MAX {
            return Err(Error::DimensionOverflow {
                n: self.n,
                max: N_MAX,
            });
        }
        if self.rho < ratio(0, 1) || self.rho > ratio(1, 1) {
            return Err(bad());
        }
        let scaled = &self.rho * BigRational::from_integer(BigInt::from(1u64 << self.n));
        if !scaled.is_integer() {
            return Err(bad());
        }
        u64::try_from(scaled.to_integer()).map_err(|_| bad())
    }
}

/// Hill climbing over equal-count upset triples.
///
/// A move picks one family, adds a random addable point and removes a
/// random minimal point other than the one just added, so closure and size
/// are preserved. Moves that do not lower the objective are kept. After
/// `patience` moves without improvement the current triple is redrawn.
/// Restarts use seeds `seed, seed+1, ...` and may run in parallel; the
/// reported result has the largest value, then the smallest seed.
pub fn local_search(cfg: &LocalSearchConfig) -> Result<SearchResult> {
    let target = cfg.target_count()?;
    if cfg.restarts == 0 {
        return Err(Error::InvalidParams(
            "at least one restart is required".into(),
        ));
    }
    let runs: Vec<Result<(BigInt, SearchResult)>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| climb(cfg, target, cfg.seed.wrapping_add(u64::from(r))))
        .collect();
    let mut best: Option<(BigInt, SearchResult)> = None;
    for run in runs {
        let (s, res) = run?;
        let better = match &best {
            None => true,
            Some((b, cur)) => s > *b || (s == *b && res.seed < cur.seed),
        };
        if better {
            best = Some((s, res));
        }
    }
    Ok(best.expect("at least one restart").1)
}

fn climb(cfg: &LocalSearchConfig, target: u64, seed: u64) -> Result<(BigInt, SearchResult)> {
    let n = cfg.n;
    let kind = cfg.objective.kind;
    let w = cfg.objective.bias.level_weights(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Result<[Family; 3]> {
        Ok([
            random_upset_with_count(n, target, rng)?,
            random_upset_with_count(n, target, rng)?,
            random_upset_with_count(n, target, rng)?,
        ])
    };
    let mut cur = draw(&mut rng)?;
    let mut cur_score = score(kind, &w, &cur[0], &cur[1], &cur[2])?;
    let mut best = (cur_score.clone(), cur.clone());
    let mut stall = 0u64;
    let mut iterations = 0u64;
    let movable = target > 0 && target < 1u64 << n;
    while movable && iterations < cfg.max_iters {
        iterations += 1;
        let i = rng.gen_range(0..3);
        let f = &mut cur[i];
        let add = random_member(&f.addable(), &mut rng).expect("proper upset has an addable point");
        f.insert(add);
        let mut out = f.removable();
        out.remove(add);
        let Some(del) = random_member(&out, &mut rng) else {
            f.remove(add);
            stall += 1;
            continue;
        };
        f.remove(del);
        let s = score(kind, &w, &cur[0], &cur[1], &cur[2])?;
        if s >= cur_score {
            if s > cur_score {
                stall = 0;
            } else {
                stall += 1;
            }
            cur_score = s;
            if cur_score > best.0 {
                best = (cur_score.clone(), cur.clone());
            }
        } else {
            let f = &mut cur[i];
            f.insert(del);
            f.remove(add);
            stall += 1;
        }
        if stall > cfg.patience {
            cur = draw(&mut rng)?;
            cur_score = score(kind, &w, &cur[0], &cur[1], &cur[2])?;
            if cur_score > best.0 {
                best = (cur_score.clone(), cur.clone());
            }
            stall = 0;
        }
    }
    let (num, [x, y, z]) = best;
    let triple = TripleSystem::new(x, y, z, format!("local(n={n},seed={seed})"))?;
    let value = BigRational::new(num.clone(), w.denominator().clone());
    Ok((
        num,
        SearchResult {
            triple,
            value,
            objective: kind,
            iterations,
            seed,
        },
    ))
}
