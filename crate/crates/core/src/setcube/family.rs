use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest supported dimension for dense families (2^24 bits = 2 MiB).
pub const N_MAX: u32 = 24;

/// Families with at least this many words are scanned in parallel.
const PAR_WORDS: usize = 1 << 12;

/// For coordinate `i < 6`, the in-word positions whose bit `i` is clear.
const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// `LEVEL[t]` marks the in-word positions `0..64` with exactly `t` set bits.
const LEVEL: [u64; 7] = level_masks();

const fn level_masks() -> [u64; 7] {
    let mut out = [0u64; 7];
    let mut pos = 0;
    while pos < 64 {
        out[(pos as u64).count_ones() as usize] |= 1u64 << pos;
        pos += 1;
    }
    out
}

/// A point of `Q_n`: element `i` of `[n]` is bit `i - 1` of the mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub u32);

impl Point {
    pub const EMPTY: Point = Point(0);

    /// Builds a point from 1-based elements. Duplicates are rejected.
    pub fn from_elements(elements: &[u32]) -> Result<Point> {
        let mut mask = 0u32;
        for &e in elements {
            if e == 0 || e > N_MAX {
                return Err(Error::OutOfRange(format!("element {e}")));
            }
            let bit = 1 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::OutOfRange(format!("duplicate element {e}")));
            }
            mask |= bit;
        }
        Ok(Point(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: u32) -> bool {
        (1..=32).contains(&element) && self.0 & (1 << (element - 1)) != 0
    }

    /// Ascending 1-based elements.
    pub fn elements(self) -> Vec<u32> {
        (0..32)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn is_subset_of(self, other: Point) -> bool {
        self.0 & !other.0 == 0
    }

    /// The `(cardinality, mask)` key used for every canonical ordering.
    pub fn order_key(self) -> (u32, u32) {
        (self.len(), self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A set system over `Q_n`, stored as a membership bit vector of length
/// `2^n` (bit `mask` set iff the point `mask` is a member).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u32,
    words: Vec<u64>,
    count: u64,
}

fn word_count(n: u32) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of valid positions in the last (only) word when `n < 6`.
fn tail_mask(n: u32) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

fn check_dim(n: u32) -> Result<()> {
    if n > N_MAX {
        return Err(Error::DimensionOverflow { n, max: N_MAX });
    }
    Ok(())
}

impl Family {
    pub fn empty(n: u32) -> Result<Family> {
        check_dim(n)?;
        Ok(Family {
            n,
            words: vec![0; word_count(n)],
            count: 0,
        })
    }

    pub fn full(n: u32) -> Result<Family> {
        check_dim(n)?;
        let mut words = vec![u64::MAX; word_count(n)];
        words[0] &= tail_mask(n);
        Ok(Family::from_words(n, words))
    }

    pub fn from_points<I>(n: u32, points: I) -> Result<Family>
    where
        I: IntoIterator<Item = Point>,
    {
        let mut f = Family::empty(n)?;
        for p in points {
            if u64::from(p.0) >> n != 0 {
                return Err(Error::OutOfRange(format!("point {p} outside Q_{n}")));
            }
            f.insert(p);
        }
        Ok(f)
    }

    pub fn from_predicate(n: u32, pred: impl Fn(Point) -> bool + Sync) -> Result<Family> {
        check_dim(n)?;
        let fill = |(j, w): (usize, &mut u64)| {
            let base = (j as u32) << 6;
            let width = (1u32 << n).min(64);
            for b in 0..width {
                if pred(Point(base | b)) {
                    *w |= 1 << b;
                }
            }
        };
        let mut words = vec![0u64; word_count(n)];
        if words.len() >= PAR_WORDS {
            words.par_iter_mut().enumerate().for_each(fill);
        } else {
            words.iter_mut().enumerate().for_each(fill);
        }
        Ok(Family::from_words(n, words))
    }

    pub(crate) fn from_words(n: u32, words: Vec<u64>) -> Family {
        debug_assert_eq!(words.len(), word_count(n));
        debug_assert_eq!(words[0] & !tail_mask(n), 0);
        let count = popcount(&words);
        Family { n, words, count }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Number of points in `Q_n`.
    pub fn universe(&self) -> u64 {
        1u64 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, p: Point) -> bool {
        let m = p.0 as usize;
        m >> self.n == 0 && self.words[m >> 6] >> (m & 63) & 1 == 1
    }

    /// Adds a point; returns whether it was newly inserted.
    pub fn insert(&mut self, p: Point) -> bool {
        let m = p.0 as usize;
        assert!(m >> self.n == 0, "point {p} outside Q_{}", self.n);
        let w = &mut self.words[m >> 6];
        let bit = 1u64 << (m & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.count += u64::from(fresh);
        fresh
    }

    pub fn remove(&mut self, p: Point) -> bool {
        let m = p.0 as usize;
        if m >> self.n != 0 {
            return false;
        }
        let w = &mut self.words[m >> 6];
        let bit = 1u64 << (m & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        self.count -= u64::from(present);
        present
    }

    /// Members in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.words.iter().enumerate().flat_map(|(j, &w)| {
            let base = (j as u32) << 6;
            BitIter(w).map(move |b| Point(base | b))
        })
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter().collect()
    }

    fn same_dim(&self, other: &Family) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Family, f: impl Fn(u64, u64) -> u64) -> Result<Family> {
        self.same_dim(other)?;
        let mask = tail_mask(self.n);
        let mut words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        words[0] &= mask;
        Ok(Family::from_words(self.n, words))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Family) -> Result<Family> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Family) -> Result<Family> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Family) -> Result<Family> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Family {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        words[0] &= tail_mask(self.n);
        Family::from_words(self.n, words)
    }

    pub fn is_subset_of(&self, other: &Family) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    pub fn is_disjoint_from(&self, other: &Family) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0))
    }

    /// `{A ∪ {i+1} : A ∈ F, i+1 ∉ A}` for 0-based coordinate `i`.
    fn shift_up(&self, i: u32) -> Vec<u64> {
        if i < 6 {
            let s = 1u32 << i;
            self.words
                .iter()
                .map(|&w| (w & LOW[i as usize]) << s)
                .collect()
        } else {
            let stride = 1usize << (i - 6);
            let mut out = vec![0u64; self.words.len()];
            for (j, &w) in self.words.iter().enumerate() {
                if j & stride == 0 {
                    out[j | stride] = w;
                }
            }
            out
        }
    }

    /// `{A \ {i+1} : A ∈ F, i+1 ∈ A}` for 0-based coordinate `i`.
    fn shift_down(&self, i: u32) -> Vec<u64> {
        if i < 6 {
            let s = 1u32 << i;
            self.words
                .iter()
                .map(|&w| (w & !LOW[i as usize]) >> s)
                .collect()
        } else {
            let stride = 1usize << (i - 6);
            let mut out = vec![0u64; self.words.len()];
            for (j, o) in out.iter_mut().enumerate() {
                if j & stride == 0 {
                    *o = self.words[j | stride];
                }
            }
            out
        }
    }

    /// Smallest upward closed family containing `self`: one OR-with-shift
    /// pass per coordinate.
    pub fn up_closure(&self) -> Family {
        let mut words = self.words.clone();
        for i in 0..self.n {
            if i < 6 {
                let s = 1u32 << i;
                for w in &mut words {
                    *w |= (*w & LOW[i as usize]) << s;
                }
            } else {
                let stride = 1usize << (i - 6);
                for j in 0..words.len() {
                    if j & stride == 0 {
                        words[j | stride] |= words[j];
                    }
                }
            }
        }
        Family::from_words(self.n, words)
    }

    /// Smallest downward closed family containing `self`.
    pub fn down_closure(&self) -> Family {
        let mut f = self.clone();
        for i in 0..self.n {
            let down = f.shift_down(i);
            for (w, d) in f.words.iter_mut().zip(down) {
                *w |= d;
            }
        }
        Family::from_words(self.n, f.words)
    }

    /// True iff every member's one-element extensions are members.
    pub fn is_upward_closed(&self) -> bool {
        (0..self.n).all(|i| {
            self.shift_up(i)
                .iter()
                .zip(&self.words)
                .all(|(up, w)| up & !w == 0)
        })
    }

    pub fn is_downward_closed(&self) -> bool {
        self.complement().is_upward_closed()
    }

    /// Members with a member immediate predecessor.
    fn non_minimal_words(&self) -> Vec<u64> {
        let mut covered = vec![0u64; self.words.len()];
        for i in 0..self.n {
            for (c, up) in covered.iter_mut().zip(self.shift_up(i)) {
                *c |= up;
            }
        }
        covered
    }

    /// Inclusion-minimal members as a family (the generating antichain when
    /// `self` is upward closed).
    pub fn minimal_family(&self) -> Family {
        let covered = self.non_minimal_words();
        let words = self
            .words
            .iter()
            .zip(covered)
            .map(|(w, c)| w & !c)
            .collect();
        Family::from_words(self.n, words)
    }

    /// Generating antichain of an upward closed family, sorted by
    /// `(cardinality, mask)`.
    pub fn minimal_elements(&self) -> Result<Vec<Point>> {
        if !self.is_upward_closed() {
            return Err(Error::NotUpwardClosed);
        }
        let mut pts = self.minimal_family().points();
        pts.sort_by_key(|p| p.order_key());
        Ok(pts)
    }

    /// Non-members all of whose one-element extensions are members: the
    /// points that can be added while keeping an upset upward closed.
    pub fn addable(&self) -> Family {
        let comp = self.complement();
        let mut blocked = vec![0u64; self.words.len()];
        for i in 0..self.n {
            for (b, d) in blocked.iter_mut().zip(comp.shift_down(i)) {
                *b |= d;
            }
        }
        let words = comp
            .words
            .iter()
            .zip(blocked)
            .map(|(c, b)| c & !b)
            .collect();
        Family::from_words(self.n, words)
    }

    /// Members that can be removed while keeping an upset upward closed;
    /// for an upset these are exactly its minimal elements.
    pub fn removable(&self) -> Family {
        self.minimal_family()
    }

    /// Number of members with exactly `k` elements, for `k = 0..=n`.
    pub fn level_histogram(&self) -> Vec<u64> {
        let [hist] = level_histograms(self.n, self.words.len(), |j| [self.words[j]]);
        hist
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 6 {
            let pts: Vec<String> = self.iter().map(|p| p.to_string()).collect();
            write!(f, "Family(n={}, [{}])", self.n, pts.join(" "))
        } else {
            write!(f, "Family(n={}, count={})", self.n, self.count)
        }
    }
}

/// Per-level point counts of `K` word-mask streams at once. `masks(j)`
/// yields the `K` words at word index `j`; the level of bit `b` of word `j`
/// is `popcount(j) + popcount(b)`.
pub(crate) fn level_histograms<const K: usize>(
    n: u32,
    nwords: usize,
    masks: impl Fn(usize) -> [u64; K] + Sync,
) -> [Vec<u64>; K] {
    let len = n as usize + 1;
    let new = || std::array::from_fn::<Vec<u64>, K, _>(|_| vec![0u64; len + 6]);
    let add_word = |mut acc: [Vec<u64>; K], j: usize| {
        let base = j.count_ones() as usize;
        let ws = masks(j);
        for (h, w) in acc.iter_mut().zip(ws) {
            if w == 0 {
                continue;
            }
            for (t, lvl) in LEVEL.iter().enumerate() {
                h[base + t] += u64::from((w & lvl).count_ones());
            }
        }
        acc
    };
    let merge = |mut a: [Vec<u64>; K], b: [Vec<u64>; K]| {
        for (x, y) in a.iter_mut().zip(b) {
            for (u, v) in x.iter_mut().zip(y) {
                *u += v;
            }
        }
        a
    };
    let mut out = if nwords >= PAR_WORDS {
        (0..nwords)
            .into_par_iter()
            .fold(new, add_word)
            .reduce(new, merge)
    } else {
        (0..nwords).fold(new(), add_word)
    };
    for h in &mut out {
        debug_assert!(h[len..].iter().all(|&c| c == 0));
        h.truncate(len);
    }
    out
}

fn popcount(words: &[u64]) -> u64 {
    if words.len() >= PAR_WORDS {
        words.par_iter().map(|w| u64::from(w.count_ones())).sum()
    } else {
        words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}
