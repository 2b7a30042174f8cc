//! Binary relations on a finite point set, stored as dense bit matrices.
//!
//! Entourages are symmetric and reflexive, but a [`SymRelation`] can hold any
//! set of ordered pairs; the validator in [`crate::space`] is responsible for
//! rejecting relations that are not symmetric or miss the diagonal.

use std::fmt;

use serde::{Deserialize, Serialize};

const WORD: usize = 64;

/// A named set of ordered point-index pairs over `0..size`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymRelation {
    name: String,
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SymRelation {
    pub fn empty(name: impl Into<String>, size: usize) -> Self {
        let words = size.div_ceil(WORD).max(1);
        SymRelation {
            name: name.into(),
            size,
            words,
            bits: vec![0; words * size],
        }
    }

    pub fn diagonal(name: impl Into<String>, size: usize) -> Self {
        let mut r = Self::empty(name, size);
        for x in 0..size {
            r.insert(x, x);
        }
        r
    }

    pub fn full(name: impl Into<String>, size: usize) -> Self {
        let mut r = Self::empty(name, size);
        for x in 0..size {
            for y in 0..size {
                r.insert(x, y);
            }
        }
        r
    }

    /// Builds a relation from explicit pairs. Out-of-range indices are reported
    /// as the first offending pair.
    pub fn from_pairs(
        name: impl Into<String>,
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, (usize, usize)> {
        let mut r = Self::empty(name, size);
        for (x, y) in pairs {
            if x >= size || y >= size {
                return Err((x, y));
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// Builds a relation from a predicate evaluated on every ordered pair.
    pub fn from_fn(name: impl Into<String>, size: usize, mut pred: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(name, size);
        for x in 0..size {
            for y in 0..size {
                if pred(x, y) {
                    r.insert(x, y);
                }
            }
        }
        r
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Number of points of the underlying set.
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.size && y < self.size);
        self.bits[x * self.words + y / WORD] >> (y % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits[x * self.words + y / WORD] |= 1 << (y % WORD);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.bits[x * self.words + y / WORD] &= !(1 << (y % WORD));
    }

    /// Number of ordered pairs.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// All `y` with `(x, y)` in the relation, ascending.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(x);
        row.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    /// All ordered pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |x| self.neighbors(x).map(move |y| (x, y)))
    }

    /// Pairs `(x, y)` with `x <= y`; enough to describe a symmetric relation.
    pub fn upper_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|&(x, y)| x <= y)
    }

    pub fn is_subset(&self, other: &SymRelation) -> bool {
        self.size == other.size && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn same_pairs(&self, other: &SymRelation) -> bool {
        self.size == other.size && self.bits == other.bits
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    /// First pair `(x, y)` whose mirror `(y, x)` is missing.
    pub fn asymmetric_pair(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !self.contains(y, x))
    }

    pub fn missing_diagonal(&self) -> Option<usize> {
        (0..self.size).find(|&x| !self.contains(x, x))
    }

    pub fn is_reflexive(&self) -> bool {
        self.missing_diagonal().is_none()
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_reflexive() && self.pairs().all(|(x, y)| x == y)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.size * self.size
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    /// Relation composition: `(x, z)` is in the result when some `y` has
    /// `(x, y)` in `self` and `(y, z)` in `other`.
    pub fn compose(&self, other: &SymRelation) -> SymRelation {
        assert_eq!(self.size, other.size, "composition over different point sets");
        let mut out = SymRelation::empty(format!("{}∘{}", self.name, other.name), self.size);
        for x in 0..self.size {
            let dst = x * out.words;
            for y in self.neighbors(x) {
                let src = other.row(y);
                for (k, w) in src.iter().enumerate() {
                    out.bits[dst + k] |= w;
                }
            }
        }
        out
    }

    pub fn union(&self, other: &SymRelation) -> SymRelation {
        assert_eq!(self.size, other.size);
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &SymRelation) -> SymRelation {
        assert_eq!(self.size, other.size);
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        out
    }

    /// True when every point of `set` is related to every other point of `set`.
    pub fn is_bounded(&self, set: &[usize]) -> bool {
        set.iter().all(|&x| set.iter().all(|&y| self.contains(x, y)))
    }

    /// Image `{(f(x), f(y))}` on a target of `target_size` points.
    pub fn image(&self, values: &[usize], target_size: usize) -> SymRelation {
        let mut out = SymRelation::empty(self.name.clone(), target_size);
        for (x, y) in self.pairs() {
            out.insert(values[x], values[y]);
        }
        out
    }

    /// Preimage `{(x, y) : (f(x), f(y)) in self}` on a source of `values.len()` points.
    pub fn preimage(&self, values: &[usize]) -> SymRelation {
        let n = values.len();
        SymRelation::from_fn(self.name.clone(), n, |x, y| self.contains(values[x], values[y]))
    }

    /// Connected components of the relation viewed as a graph; component
    /// ids are assigned in order of the smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.size];
        let mut next = 0;
        for s in 0..self.size {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in self.neighbors(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
                // symmetric closure for non-symmetric inputs
                for y in 0..self.size {
                    if comp[y] == usize::MAX && self.contains(y, x) {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

impl fmt::Debug for SymRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymRelation")
            .field("name", &self.name)
            .field("size", &self.size)
            .field("pairs", &self.upper_pairs().collect::<Vec<_>>())
            .finish()
    }
}

/// Serialized form: name plus the full list of ordered pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawRelation {
    pub name: String,
    pub pairs: Vec<[usize; 2]>,
}

impl From<&SymRelation> for RawRelation {
    fn from(r: &SymRelation) -> Self {
        RawRelation {
            name: r.name.clone(),
            pairs: r.pairs().map(|(x, y)| [x, y]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, r: usize) -> SymRelation {
        SymRelation::from_fn("c", n, |x, y| {
            let d = (x + n - y) % n;
            d.min(n - d) <= r
        })
    }

    #[test]
    fn composition_with_diagonal_is_identity() {
        let e = cycle(6, 1);
        let d = SymRelation::diagonal("d", 6);
        assert!(d.compose(&e).same_pairs(&e));
        assert!(e.compose(&d).same_pairs(&e));
    }

    #[test]
    fn square_of_hop_one_on_hexagon_is_hop_two() {
        assert!(cycle(6, 1).compose(&cycle(6, 1)).same_pairs(&cycle(6, 2)));
    }

    #[test]
    fn neighbors_cross_word_boundaries() {
        let mut r = SymRelation::empty("r", 130);
        r.insert(3, 0);
        r.insert(3, 64);
        r.insert(3, 129);
        assert_eq!(r.neighbors(3).collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn image_and_preimage_under_mod_three() {
        let f: Vec<usize> = (0..6).map(|x| x % 3).collect();
        let img = cycle(6, 1).image(&f, 3);
        assert!(img.is_full());
        let pre = SymRelation::diagonal("d", 3).preimage(&f);
        assert!(pre.contains(0, 3) && pre.contains(2, 5) && !pre.contains(0, 1));
    }

    #[test]
    fn out_of_range_pair_is_rejected() {
        assert_eq!(SymRelation::from_pairs("e", 2, [(0, 2)]).unwrap_err(), (0, 2));
    }
}
