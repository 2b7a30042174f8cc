//! Integer linear algebra: Smith normal form, lattice membership, and the
//! first homology of a clique complex.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rips::complex::RipsComplex;

pub type Mat = Vec<Vec<i128>>;

/// Free rank plus torsion coefficients `d1 | d2 | …`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Invariants of `Z^cols / rowspan(rows)`.
    pub fn of_quotient(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let m: Mat = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let snf = smith(&m, cols, false)?;
        Ok(AbelianInvariants {
            free_rank: cols - snf.rank,
            torsion: torsion_of(&snf.diag),
        })
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn torsion_of(diag: &[i128]) -> Vec<u64> {
    diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect()
}

/// Result of a Smith normal form computation `U·A·V = D`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<i128>,
    pub rank: usize,
    /// Column transform `V` and its inverse, when requested.
    pub v: Option<Mat>,
    pub v_inv: Option<Mat>,
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow)
}

/// Smith normal form of an `rows.len() × cols` integer matrix.
pub fn smith(a: &Mat, cols: usize, with_transform: bool) -> Result<Smith> {
    let m = a.len();
    let n = cols;
    let mut a: Mat = a.clone();
    for row in &a {
        assert_eq!(row.len(), n, "ragged matrix");
    }
    let ident = |k: usize| -> Mat { (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect() };
    let mut v = if with_transform { Some(ident(n)) } else { None };
    let mut vi = if with_transform { Some(ident(n)) } else { None };

    // col_j -= q * col_t   (V ← V·E, V⁻¹ ← E⁻¹·V⁻¹: row_t += q * row_j)
    let col_sub = |a: &mut Mat, v: &mut Option<Mat>, vi: &mut Option<Mat>, j: usize, t: usize, q: i128| -> Result<()> {
        for row in a.iter_mut() {
            row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))?))?;
        }
        if let (Some(v), Some(vi)) = (v.as_mut(), vi.as_mut()) {
            for row in v.iter_mut() {
                row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))?))?;
            }
            let (rt, rj) = if t < j {
                let (lo, hi) = vi.split_at_mut(j);
                (&mut lo[t], &hi[0])
            } else {
                let (lo, hi) = vi.split_at_mut(t);
                (&mut hi[0], &lo[j])
            };
            for (x, y) in rt.iter_mut().zip(rj.iter()) {
                *x = ck(x.checked_add(ck(q.checked_mul(*y))?))?;
            }
        }
        Ok(())
    };
    let col_swap = |a: &mut Mat, v: &mut Option<Mat>, vi: &mut Option<Mat>, j: usize, t: usize| {
        if j == t {
            return;
        }
        for row in a.iter_mut() {
            row.swap(j, t);
        }
        if let (Some(v), Some(vi)) = (v.as_mut(), vi.as_mut()) {
            for row in v.iter_mut() {
                row.swap(j, t);
            }
            vi.swap(j, t);
        }
    };

    let mut rank = 0;
    let limit = m.min(n);
    for t in 0..limit {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        col_swap(&mut a, &mut v, &mut vi, t, pj);
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t] / p;
                    for j in t..n {
                        a[i][j] = ck(a[i][j].checked_sub(ck(q.checked_mul(a[t][j]))?))?;
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let i = (t + 1..m)
                    .filter(|&i| a[i][t] != 0)
                    .min_by_key(|&i| a[i][t].abs())
                    .unwrap();
                a.swap(t, i);
                continue;
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j] / p;
                    col_sub(&mut a, &mut v, &mut vi, j, t, q)?;
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let j = (t + 1..n)
                    .filter(|&j| a[t][j] != 0)
                    .min_by_key(|&j| a[t][j].abs())
                    .unwrap();
                col_swap(&mut a, &mut v, &mut vi, t, j);
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            if let Some(i) = bad {
                for j in t..n {
                    a[t][j] = ck(a[t][j].checked_add(a[i][j]))?;
                }
                continue;
            }
            break;
        }
        if a[t][t] < 0 {
            for j in t..n {
                a[t][j] = -a[t][j];
            }
        }
        rank += 1;
    }
    let diag = (0..rank).map(|t| a[t][t]).collect();
    Ok(Smith {
        diag,
        rank,
        v,
        v_inv: vi,
    })
}

/// A sublattice of `Z^n` kept in row echelon form for membership tests.
#[derive(Debug, Clone)]
pub struct IntLattice {
    dim: usize,
    rows: Vec<(usize, Vec<i128>)>,
}

fn lead(v: &[i128]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

impl IntLattice {
    pub fn new(dim: usize) -> Self {
        IntLattice { dim, rows: Vec::new() }
    }

    pub fn from_rows(dim: usize, rows: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let mut l = IntLattice::new(dim);
        for r in rows {
            l.insert(r.into_iter().map(i128::from).collect())?;
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut v: Vec<i128>) -> Result<()> {
        assert_eq!(v.len(), self.dim);
        while let Some(q) = lead(&v) {
            match self.rows.iter().position(|(p, _)| *p == q) {
                None => {
                    if v[q] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    let at = self.rows.partition_point(|(p, _)| *p < q);
                    self.rows.insert(at, (q, v));
                    return Ok(());
                }
                Some(k) => {
                    let b = &self.rows[k].1;
                    let (bq, vq) = (b[q], v[q]);
                    if vq % bq == 0 {
                        let c = vq / bq;
                        for (x, y) in v.iter_mut().zip(b.iter()) {
                            *x = ck(x.checked_sub(ck(c.checked_mul(*y))?))?;
                        }
                    } else {
                        let (g, s, t) = ext_gcd(bq, vq);
                        let (bf, vf) = (bq / g, vq / g);
                        let mut nb = vec![0i128; self.dim];
                        let mut nv = vec![0i128; self.dim];
                        for j in 0..self.dim {
                            nb[j] = ck(ck(s.checked_mul(b[j]))?.checked_add(ck(t.checked_mul(v[j]))?))?;
                            nv[j] = ck(ck(vf.checked_mul(b[j]))?.checked_sub(ck(bf.checked_mul(v[j]))?))?;
                        }
                        self.rows[k].1 = nb;
                        v = nv;
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical representative of `v` modulo the lattice: each pivot
    /// coordinate reduced into `[0, pivot)`; zero iff `v` is in the lattice.
    pub fn reduce(&self, v: &[i64]) -> Result<Vec<i128>> {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, b) in &self.rows {
            let c = v[*p].div_euclid(b[*p]);
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b.iter()) {
                    *x = ck(x.checked_sub(ck(c.checked_mul(*y))?))?;
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|&x| x == 0))
    }
}

/// Boundary matrix `∂k` of a complex (rows indexed by `(k-1)`-simplices).
pub fn boundary(complex: &RipsComplex, k: usize) -> Mat {
    let lower = complex.dim_simplices(k - 1);
    let upper = complex.dim_simplices(k);
    let mut m = vec![vec![0i128; upper.len()]; lower.len()];
    for (c, s) in upper.iter().enumerate() {
        for skip in 0..s.len() {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            let r = lower
                .binary_search(&face)
                .expect("faces of listed simplices are listed");
            m[r][c] += if skip % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// First homology of the complex over the integers.
pub fn h1(complex: &RipsComplex) -> Result<AbelianInvariants> {
    assert!(complex.d_max() >= 2, "H1 needs the 2-skeleton");
    let e = complex.edges().len();
    if e == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    let d1 = boundary(complex, 1);
    let r1 = smith(&d1, e, false)?.rank;
    let t = complex.triangles().len();
    let (r2, tors) = if t == 0 {
        (0, Vec::new())
    } else {
        let d2 = boundary(complex, 2);
        let s2 = smith(&d2, t, false)?;
        (s2.rank, torsion_of(&s2.diag))
    };
    Ok(AbelianInvariants {
        free_rank: e - r1 - r2,
        torsion: tors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::SymRelation;

    fn cycle(n: usize, r: usize) -> SymRelation {
        SymRelation::from_fn("c", n, |x, y| {
            let d = (x + n - y) % n;
            d.min(n - d) <= r
        })
    }

    fn complex(rel: &SymRelation) -> RipsComplex {
        RipsComplex::from_relation(rel, 2, 100_000).unwrap()
    }

    #[test]
    fn hexagon_has_rank_one() {
        assert_eq!(
            h1(&complex(&cycle(6, 1))).unwrap(),
            AbelianInvariants {
                free_rank: 1,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn filled_triangle_is_acyclic() {
        assert!(h1(&complex(&cycle(3, 1))).unwrap().is_trivial());
        assert!(h1(&complex(&SymRelation::full("F", 5))).unwrap().is_trivial());
    }

    #[test]
    fn smith_finds_torsion() {
        // Z^2 / <(2, 0), (0, 3)> = Z/6
        let inv = AbelianInvariants::of_quotient(&[vec![2, 0], vec![0, 3]], 2).unwrap();
        assert_eq!(
            inv,
            AbelianInvariants {
                free_rank: 0,
                torsion: vec![6]
            }
        );
        let inv = AbelianInvariants::of_quotient(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).unwrap();
        assert_eq!(inv.torsion, vec![2, 6, 12]);
    }

    #[test]
    fn smith_transform_diagonalises() {
        let a: Mat = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3, true).unwrap();
        let v = s.v.unwrap();
        let vi = s.v_inv.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let x: i128 = (0..3).map(|k| v[i][k] * vi[k][j]).sum();
                assert_eq!(x, i128::from(i == j));
            }
        }
    }

    #[test]
    fn lattice_membership() {
        let l = IntLattice::from_rows(3, [vec![2, 0, 0], vec![4, 6, 0], vec![0, 3, 0]]).unwrap();
        assert!(l.contains(&[2, 3, 0]).unwrap());
        assert!(l.contains(&[0, 0, 0]).unwrap());
        assert!(!l.contains(&[1, 0, 0]).unwrap());
        assert!(!l.contains(&[0, 0, 1]).unwrap());
        assert!(!l.contains(&[0, 1, 0]).unwrap());
    }
}
