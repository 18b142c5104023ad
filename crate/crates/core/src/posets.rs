//! Finite weighted posets: upset enumeration, correlation scans and
//! occupancy profiles, plus the five-element extremal poset
//! `a < p_1, p_2, p_3 < A`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, ratio, Bias};
use crate::setcube::OccupancyProfile;

/// Largest poset accepted by the exhaustive routines.
pub const MAX_POSET: usize = 20;

/// A finite poset with nonnegative rational weights summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoset {
    labels: Vec<String>,
    /// `above[x]` has bit `y` set iff `x < y` (transitively closed).
    above: Vec<u32>,
    weights: Vec<BigRational>,
}

/// Membership flags of a subset of a poset, one bit per element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpsetMask(pub u32);

impl UpsetMask {
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersect(self, other: UpsetMask) -> UpsetMask {
        UpsetMask(self.0 & other.0)
    }
}

impl WeightedPoset {
    /// `relations` lists pairs `(x, y)` meaning `x < y`; the transitive
    /// closure is taken here and must stay irreflexive.
    pub fn new(
        labels: Vec<String>,
        relations: &[(usize, usize)],
        weights: Vec<BigRational>,
    ) -> Result<Self> {
        let size = labels.len();
        if size > 32 {
            return Err(Error::TooLarge(format!("{size} elements")));
        }
        if weights.len() != size {
            return Err(Error::Poset(format!(
                "{} weights for {size} elements",
                weights.len()
            )));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::Poset("negative weight".into()));
        }
        if weights.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::Poset("weights do not sum to 1".into()));
        }
        let mut above = vec![0u32; size];
        for &(x, y) in relations {
            if x >= size || y >= size {
                return Err(Error::Poset(format!("relation ({x}, {y}) out of range")));
            }
            above[x] |= 1 << y;
        }
        // Warshall closure on bit rows.
        for k in 0..size {
            for x in 0..size {
                if above[x] >> k & 1 == 1 {
                    above[x] |= above[k];
                }
            }
        }
        if (0..size).any(|x| above[x] >> x & 1 == 1) {
            return Err(Error::Poset("order relation has a cycle".into()));
        }
        Ok(WeightedPoset {
            labels,
            above,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.above[x] >> y & 1 == 1
    }

    pub fn full_mask(&self) -> UpsetMask {
        UpsetMask(((1u64 << self.len()) - 1) as u32)
    }

    pub fn mask_of(&self, labels: &[&str]) -> Result<UpsetMask> {
        let mut m = 0;
        for l in labels {
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::Poset(format!("unknown element {l:?}")))?;
            m |= 1 << i;
        }
        Ok(UpsetMask(m))
    }

    pub fn is_upset(&self, u: UpsetMask) -> bool {
        (0..self.len()).all(|x| !u.contains(x) || self.above[x] & !u.0 == 0)
    }

    pub fn weight(&self, u: UpsetMask) -> BigRational {
        (0..self.len())
            .filter(|&x| u.contains(x))
            .map(|x| &self.weights[x])
            .sum()
    }

    pub fn label_set(&self, u: UpsetMask) -> Vec<String> {
        (0..self.len())
            .filter(|&x| u.contains(x))
            .map(|x| self.labels[x].clone())
            .collect()
    }

    /// Parses the JSON poset description:
    /// `{"elements": [...], "covers": [[lo, hi], ...], "weights": [...]}`
    /// where weights are `"a/b"` strings, either a list aligned with
    /// `elements` or an object keyed by label.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Weights {
            List(Vec<String>),
            Map(BTreeMap<String, String>),
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Desc {
            elements: Vec<String>,
            #[serde(default)]
            covers: Vec<(String, String)>,
            weights: Weights,
        }
        let desc: Desc = serde_json::from_str(text)?;
        let index = |l: &str| {
            desc.elements
                .iter()
                .position(|e| e == l)
                .ok_or_else(|| Error::Poset(format!("unknown element {l:?}")))
        };
        let relations = desc
            .covers
            .iter()
            .map(|(lo, hi)| Ok((index(lo)?, index(hi)?)))
            .collect::<Result<Vec<_>>>()?;
        let weights = match &desc.weights {
            Weights::List(ws) => ws
                .iter()
                .map(|w| parse_rational(w))
                .collect::<Result<Vec<_>>>()?,
            Weights::Map(map) => {
                if map.len() != desc.elements.len() {
                    return Err(Error::Poset(
                        "weight map does not cover every element".into(),
                    ));
                }
                desc.elements
                    .iter()
                    .map(|e| {
                        map.get(e)
                            .ok_or_else(|| Error::Poset(format!("no weight for {e:?}")))
                            .and_then(|w| parse_rational(w))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        WeightedPoset::new(desc.elements, &relations, weights)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn check_size(p: &WeightedPoset) -> Result<()> {
    if p.len() > MAX_POSET {
        return Err(Error::TooLarge(format!(
            "poset with {} elements exceeds {MAX_POSET}",
            p.len()
        )));
    }
    Ok(())
}

/// All upsets of `p`, by backtracking from the top of a linear extension:
/// an element may join only once everything above it has. Exclusion is
/// explored first, so the empty upset comes first and the full poset last.
pub fn enumerate_upsets(p: &WeightedPoset) -> Result<Vec<UpsetMask>> {
    check_size(p)?;
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&x| (p.above[x].count_ones(), x));
    let mut out = Vec::new();
    fn walk(p: &WeightedPoset, order: &[usize], cur: u32, out: &mut Vec<UpsetMask>) {
        let Some((&x, rest)) = order.split_first() else {
            out.push(UpsetMask(cur));
            return;
        };
        walk(p, rest, cur, out);
        if p.above[x] & !cur == 0 {
            walk(p, rest, cur | 1 << x, out);
        }
    }
    walk(p, &order, 0, &mut out);
    Ok(out)
}

/// The five-element poset `a < p_i < A` with weights
/// `(1-p)²/(1+p)`, `p(1-p)/(1+p)` each, and `2p²/(1+p)`.
pub fn five_point_poset(p: &Bias) -> Result<WeightedPoset> {
    if !p.is_interior() {
        return Err(Error::InvalidBias(p.to_string()));
    }
    let p = p.value();
    let one = BigRational::one();
    let denom = &one + p;
    let w_a = (&one - p) * (&one - p) / &denom;
    let w_mid = p * (&one - p) / &denom;
    let w_top = ratio(2, 1) * p * p / &denom;
    let labels = ["a", "p1", "p2", "p3", "A"].map(String::from).to_vec();
    let relations = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
    WeightedPoset::new(
        labels,
        &relations,
        vec![w_a, w_mid.clone(), w_mid.clone(), w_mid, w_top],
    )
}

/// The upsets `{p_i, A}` of the five-element poset. Each has weight `p`,
/// and together their occupancy is the LP optimum at `ρ = p`.
pub fn five_point_extremal_triple(p: &WeightedPoset) -> Result<[UpsetMask; 3]> {
    Ok([
        p.mask_of(&["p1", "A"])?,
        p.mask_of(&["p2", "A"])?,
        p.mask_of(&["p3", "A"])?,
    ])
}

/// The three size-three upsets `{A, p_j, p_k}`, the `i`-th one omitting
/// `p_{i+1}`. Each has weight `2p/(1+p)`; any two meet in a set of weight `p`.
pub fn five_point_size_three_upsets(p: &WeightedPoset) -> Result<[UpsetMask; 3]> {
    Ok([
        p.mask_of(&["A", "p2", "p3"])?,
        p.mask_of(&["A", "p1", "p3"])?,
        p.mask_of(&["A", "p1", "p2"])?,
    ])
}

/// Result of scanning all ordered upset pairs for the smallest
/// `w(U∩V) − w(U)w(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkScan {
    pub min_defect: BigRational,
    pub witness: (UpsetMask, UpsetMask),
    pub upsets: usize,
}

pub fn poset_defect(p: &WeightedPoset, u: UpsetMask, v: UpsetMask) -> BigRational {
    p.weight(u.intersect(v)) - p.weight(u) * p.weight(v)
}

pub fn poset_hk_scan(p: &WeightedPoset) -> Result<HkScan> {
    let ups = enumerate_upsets(p)?;
    let weights: Vec<BigRational> = ups.iter().map(|&u| p.weight(u)).collect();
    let mut best: Option<(BigRational, (UpsetMask, UpsetMask))> = None;
    for (i, &u) in ups.iter().enumerate() {
        for (j, &v) in ups.iter().enumerate() {
            let d = p.weight(u.intersect(v)) - &weights[i] * &weights[j];
            if best.as_ref().is_none_or(|(m, _)| d < *m) {
                best = Some((d, (u, v)));
            }
        }
    }
    let (min_defect, witness) = best.expect("every poset has at least the empty upset");
    Ok(HkScan {
        min_defect,
        witness,
        upsets: ups.len(),
    })
}

/// Weighted occupancy classes of three upsets of `p`; counts are numbers
/// of poset elements.
pub fn poset_occupancy(
    p: &WeightedPoset,
    x: UpsetMask,
    y: UpsetMask,
    z: UpsetMask,
) -> Result<OccupancyProfile> {
    if ![x, y, z].iter().all(|&u| p.is_upset(u)) {
        return Err(Error::NotUpwardClosed);
    }
    let mut counts = [0u64; 4];
    let mut densities: [BigRational; 4] = std::array::from_fn(|_| BigRational::zero());
    for e in 0..p.len() {
        let k = [x, y, z].iter().filter(|u| u.contains(e)).count();
        counts[k] += 1;
        densities[k] += &p.weights[e];
    }
    Ok(OccupancyProfile {
        counts,
        densities,
        bias: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_weights(k: usize) -> Vec<BigRational> {
        vec![ratio(1, k as i64); k]
    }

    fn labels(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn antichain_and_chain() {
        let anti = WeightedPoset::new(labels(3), &[], uniform_weights(3)).unwrap();
        assert_eq!(enumerate_upsets(&anti).unwrap().len(), 8);
        let chain = WeightedPoset::new(labels(3), &[(0, 1), (1, 2)], uniform_weights(3)).unwrap();
        let ups = enumerate_upsets(&chain).unwrap();
        assert_eq!(
            ups,
            vec![
                UpsetMask(0),
                UpsetMask(0b100),
                UpsetMask(0b110),
                UpsetMask(0b111)
            ]
        );
    }

    #[test]
    fn five_point_poset_has_ten_upsets() {
        let p = five_point_poset(&Bias::from_ratio(1, 2).unwrap()).unwrap();
        let ups = enumerate_upsets(&p).unwrap();
        assert_eq!(ups.len(), 10);
        let a = p.index_of("A").unwrap();
        let bottom = p.index_of("a").unwrap();
        for u in &ups[1..ups.len() - 1] {
            assert!(u.contains(a) && !u.contains(bottom));
        }
        assert_eq!(ups[0], UpsetMask(0));
        assert_eq!(*ups.last().unwrap(), p.full_mask());
    }

    #[test]
    fn five_point_weights() {
        let p = five_point_poset(&Bias::from_ratio(1, 2).unwrap()).unwrap();
        let w = p.weights();
        assert_eq!(w[0], ratio(1, 6));
        assert_eq!(&w[1..4], &[ratio(1, 6), ratio(1, 6), ratio(1, 6)]);
        assert_eq!(w[4], ratio(1, 3));
        let third = five_point_poset(&Bias::from_ratio(1, 3).unwrap()).unwrap();
        assert_eq!(third.weight(third.mask_of(&["A"]).unwrap()), ratio(1, 6));
        assert!(matches!(
            five_point_poset(&Bias::from_ratio(0, 1).unwrap()),
            Err(Error::InvalidBias(_))
        ));
        assert!(matches!(
            five_point_poset(&Bias::from_ratio(1, 1).unwrap()),
            Err(Error::InvalidBias(_))
        ));
    }

    #[test]
    fn scan_and_size_three_pair() {
        let p = five_point_poset(&Bias::from_ratio(1, 2).unwrap()).unwrap();
        let u = p.mask_of(&["A", "p1", "p2"]).unwrap();
        let v = p.mask_of(&["A", "p1", "p3"]).unwrap();
        assert_eq!(poset_defect(&p, u, v), ratio(1, 18));
        assert_eq!(poset_defect(&p, p.full_mask(), v), ratio(0, 1));
        let scan = poset_hk_scan(&p).unwrap();
        assert_eq!(scan.upsets, 10);
        assert!(!scan.min_defect.is_negative());
        // min is 0, first reached by the pair (∅, ∅)
        assert_eq!(scan.min_defect, ratio(0, 1));
        assert_eq!(scan.witness, (UpsetMask(0), UpsetMask(0)));
    }

    #[test]
    fn singleton_triple_and_size_three_triple() {
        let p = five_point_poset(&Bias::from_ratio(1, 3).unwrap()).unwrap();
        let [u, v, w] = five_point_extremal_triple(&p).unwrap();
        assert!([u, v, w].iter().all(|&x| p.weight(x) == ratio(1, 3)));
        let occ = poset_occupancy(&p, u, v, w).unwrap();
        assert_eq!(
            occ.densities,
            [ratio(1, 3), ratio(1, 2), ratio(0, 1), ratio(1, 6)]
        );
        let [u, v, w] = five_point_size_three_upsets(&p).unwrap();
        assert!([u, v, w].iter().all(|&x| p.weight(x) == ratio(1, 2)));
        let occ = poset_occupancy(&p, u, v, w).unwrap();
        assert_eq!(
            occ.densities,
            [ratio(1, 3), ratio(0, 1), ratio(1, 2), ratio(1, 6)]
        );
    }

    #[test]
    fn occupancy_edges() {
        let p = five_point_poset(&Bias::from_ratio(3, 8).unwrap()).unwrap();
        let e = UpsetMask(0);
        let f = p.full_mask();
        let empty = poset_occupancy(&p, e, e, e).unwrap();
        assert_eq!(
            empty.densities,
            [ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)]
        );
        let full = poset_occupancy(&p, f, f, f).unwrap();
        assert_eq!(
            full.densities,
            [ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(1, 1)]
        );
        let not_up = p.mask_of(&["a"]).unwrap();
        assert!(matches!(
            poset_occupancy(&p, not_up, e, e),
            Err(Error::NotUpwardClosed)
        ));
    }

    #[test]
    fn validation() {
        assert!(WeightedPoset::new(labels(2), &[(0, 1), (1, 0)], uniform_weights(2)).is_err());
        assert!(WeightedPoset::new(labels(2), &[], vec![ratio(1, 3), ratio(1, 3)]).is_err());
        assert!(WeightedPoset::new(labels(2), &[], vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(WeightedPoset::new(labels(2), &[(0, 2)], uniform_weights(2)).is_err());
        let big = WeightedPoset::new(labels(21), &[], uniform_weights(21)).unwrap();
        assert!(matches!(enumerate_upsets(&big), Err(Error::TooLarge(_))));
        assert!(matches!(poset_hk_scan(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn json_description() {
        let text = r#"{
            "elements": ["a", "b", "c"],
            "covers": [["a", "b"], ["b", "c"]],
            "weights": ["1/2", "1/4", "1/4"]
        }"#;
        let p = WeightedPoset::from_json(text).unwrap();
        assert!(p.less(0, 2));
        assert_eq!(enumerate_upsets(&p).unwrap().len(), 4);
        let keyed = r#"{"elements": ["x", "y"], "weights": {"y": "2/3", "x": "1/3"}}"#;
        let q = WeightedPoset::from_json(keyed).unwrap();
        assert_eq!(q.weights()[1], ratio(2, 3));
        assert!(WeightedPoset::from_json(
            r#"{"elements": ["x"], "covers": [["x","z"]], "weights": ["1"]}"#
        )
        .is_err());
    }
}
