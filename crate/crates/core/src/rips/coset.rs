//! Todd–Coxeter coset enumeration (HLT strategy with coincidence processing).

use crate::rips::presentation::{gen_of, Word};

const NONE: usize = usize::MAX;

#[inline]
fn col(letter: i32) -> usize {
    2 * gen_of(letter) + usize::from(letter < 0)
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

/// A complete coset table: `table[c][col]`, with column `2g` for generator
/// `g` and `2g + 1` for its inverse. Coset 0 is the subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    gens: usize,
    table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn act(&self, coset: usize, letter: i32) -> usize {
        self.table[coset][col(letter)]
    }

    pub fn trace(&self, coset: usize, w: &[i32]) -> usize {
        w.iter().fold(coset, |c, &x| self.act(c, x))
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }
}

struct Enumerator<'a> {
    relators: &'a [Word],
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    budget: usize,
    exhausted: bool,
}

impl Enumerator<'_> {
    fn define(&mut self, c: usize, x: usize) {
        if self.table.len() >= self.budget {
            self.exhausted = true;
            return;
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][inv_col(x)] = c;
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                self.table[f][inv_col(x)] = NONE;
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][inv_col(x)] != NONE {
                    let t = self.table[f1][inv_col(x)];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv_col(x)] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[i32]) {
        if w.is_empty() {
            return;
        }
        let cols: Vec<usize> = w.iter().map(|&x| col(x)).collect();
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = cols.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][cols[i]] != NONE {
                f = self.table[f][cols[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize && self.table[b][inv_col(cols[j as usize])] != NONE {
                b = self.table[b][inv_col(cols[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            }
            if j == i as isize {
                self.table[f][cols[i]] = b;
                self.table[b][inv_col(cols[i])] = f;
                return;
            }
            self.define(f, cols[i]);
            if self.exhausted {
                return;
            }
        }
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` in `⟨gens | relators⟩`. Returns
/// `None` when more than `budget` cosets would be defined.
pub fn enumerate_cosets(gens: usize, relators: &[Word], subgroup: &[Word], budget: usize) -> Option<CosetTable> {
    let cols = 2 * gens;
    let mut en = Enumerator {
        relators,
        cols,
        table: vec![vec![NONE; cols]],
        parent: vec![0],
        budget: budget.max(1),
        exhausted: false,
    };
    for w in subgroup {
        en.scan_and_fill(0, w);
        if en.exhausted {
            return None;
        }
    }
    let mut c = 0;
    while c < en.table.len() {
        if en.parent[c] == c {
            for r in 0..en.relators.len() {
                let rel = en.relators[r].clone();
                en.scan_and_fill(c, &rel);
                if en.exhausted {
                    return None;
                }
                if en.parent[c] != c {
                    break;
                }
            }
            if en.parent[c] == c {
                for x in 0..cols {
                    if en.table[c][x] == NONE {
                        en.define(c, x);
                        if en.exhausted {
                            return None;
                        }
                    }
                }
            }
        }
        c += 1;
    }
    // compact live cosets, keeping definition order
    let mut index = vec![NONE; en.table.len()];
    let mut live = 0;
    for k in 0..en.table.len() {
        if en.parent[k] == k {
            index[k] = live;
            live += 1;
        }
    }
    let mut table = Vec::with_capacity(live);
    for k in 0..en.table.len() {
        if en.parent[k] == k {
            let row: Vec<usize> = (0..cols).map(|x| en.table[k][x]).collect();
            table.push(row.into_iter().map(|t| index[en.rep(t)]).collect());
        }
    }
    Some(CosetTable { gens, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_of_order_five() {
        let t = enumerate_cosets(1, &[vec![1, 1, 1, 1, 1]], &[], 1000).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.trace(0, &[1, 1, 1, 1, 1]), 0);
        assert_ne!(t.trace(0, &[1, 1]), 0);
    }

    #[test]
    fn symmetric_group_s3() {
        // <a, b | a^2, b^3, (ab)^2>
        let rels = vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]];
        let t = enumerate_cosets(2, &rels, &[], 1000).unwrap();
        assert_eq!(t.len(), 6);
        let t = enumerate_cosets(2, &rels, &[vec![1]], 1000).unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn trivial_group_from_coincidences() {
        // <a, b | ab^-1, a^2 b^-3> is trivial
        let rels = vec![vec![1, -2], vec![1, 1, -2, -2, -2]];
        let t = enumerate_cosets(2, &rels, &[], 1000).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn infinite_group_exhausts_budget() {
        // Z^2
        let rels = vec![vec![1, 2, -1, -2]];
        assert!(enumerate_cosets(2, &rels, &[], 500).is_none());
    }

    #[test]
    fn table_is_a_permutation_representation() {
        let rels = vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]];
        let t = enumerate_cosets(2, &rels, &[], 1000).unwrap();
        for c in 0..t.len() {
            for g in 1..=2 {
                assert_eq!(t.act(t.act(c, g), -g), c);
            }
            for r in &rels {
                assert_eq!(t.trace(c, r), c);
            }
        }
    }
}
