//! Edge-path group presentations of clique complexes and their Tietze
//! simplification.
//!
//! Words are `Vec<i32>`; the letter `g + 1` is generator `g` and `-(g + 1)`
//! is its inverse.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rips::complex::RipsComplex;
use crate::rips::homology::AbelianInvariants;

pub type Word = Vec<i32>;

#[inline]
pub fn gen_of(letter: i32) -> usize {
    (letter.unsigned_abs() - 1) as usize
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn concat(a: &[i32], b: &[i32]) -> Word {
    let mut w = a.to_vec();
    w.extend_from_slice(b);
    free_reduce(&w)
}

/// Exponent sum of every generator.
pub fn exponent_vector(w: &[i32], gens: usize) -> Vec<i64> {
    let mut v = vec![0i64; gens];
    for &x in w {
        v[gen_of(x)] += x.signum() as i64;
    }
    v
}

/// Replaces every generator `g` by `images[g]`.
pub fn substitute(w: &[i32], images: &[Word]) -> Word {
    let mut out = Vec::new();
    for &x in w {
        let img = &images[gen_of(x)];
        if x > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(inverse(img));
        }
    }
    free_reduce(&out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub basepoint: usize,
}

impl Presentation {
    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| exponent_vector(r, self.generators.len()))
            .collect()
    }

    pub fn abelianization(&self) -> Result<AbelianInvariants> {
        AbelianInvariants::of_quotient(&self.relation_matrix(), self.generators.len())
    }

    /// Tietze simplification: repeatedly drop a generator that occurs exactly
    /// once in some relator. The result carries the images of the original
    /// generators as words in the surviving ones.
    pub fn simplify(&self) -> Simplified {
        let n = self.generators.len();
        let mut relators: Vec<Word> = self
            .relators
            .iter()
            .map(|r| cyclic_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        let mut images: Vec<Word> = (0..n).map(|g| vec![g as i32 + 1]).collect();
        let mut alive = vec![true; n];
        loop {
            relators.retain(|r| !r.is_empty());
            relators.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            relators.dedup();
            let mut pick = None;
            'search: for (ri, r) in relators.iter().enumerate() {
                let mut count = vec![0usize; n];
                for &x in r {
                    count[gen_of(x)] += 1;
                }
                for (pos, &x) in r.iter().enumerate() {
                    if count[gen_of(x)] == 1 {
                        pick = Some((ri, pos));
                        break 'search;
                    }
                }
            }
            let Some((ri, pos)) = pick else { break };
            let r = relators.remove(ri);
            // rotate so the letter comes first: x^e · rest = 1
            let x = r[pos];
            let rest: Word = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
            let expr = if x > 0 { inverse(&rest) } else { rest };
            let g = gen_of(x);
            alive[g] = false;
            let mut step: Vec<Word> = (0..n).map(|h| vec![h as i32 + 1]).collect();
            step[g] = free_reduce(&expr);
            for r in relators.iter_mut() {
                *r = cyclic_reduce(&substitute(r, &step));
            }
            for img in images.iter_mut() {
                *img = substitute(img, &step);
            }
        }
        let mut new_index = vec![usize::MAX; n];
        let mut generators = Vec::new();
        for g in 0..n {
            if alive[g] {
                new_index[g] = generators.len();
                generators.push(self.generators[g].clone());
            }
        }
        let rename = |w: &Word| -> Word {
            w.iter()
                .map(|&x| (new_index[gen_of(x)] as i32 + 1) * x.signum())
                .collect()
        };
        let relators: Vec<Word> = relators.iter().map(rename).collect();
        let images = images.iter().map(rename).collect();
        Simplified {
            presentation: Presentation {
                generators,
                relators,
                basepoint: self.basepoint,
            },
            images,
        }
    }
}

/// A simplified presentation plus the rewrite of the original generators.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub presentation: Presentation,
    pub images: Vec<Word>,
}

impl Simplified {
    pub fn rewrite(&self, w: &[i32]) -> Word {
        substitute(w, &self.images)
    }
}

/// Spanning-tree bookkeeping for the edge-path group of one component.
#[derive(Debug, Clone)]
pub struct EdgePathGroup {
    basepoint: usize,
    vertices: Vec<usize>,
    parent: Vec<Option<usize>>,
    /// For non-tree edge `(u, v)` with `u < v`, its generator index.
    generator_edges: Vec<(usize, usize)>,
    edge_gen: std::collections::HashMap<(usize, usize), usize>,
    presentation: Presentation,
}

impl EdgePathGroup {
    pub fn new(complex: &RipsComplex, basepoint: usize) -> Self {
        let rel = complex.relation();
        let n = rel.size();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([basepoint]);
        seen[basepoint] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in rel.neighbors(x) {
                if !seen[y] && complex.has_vertex(y) {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        let is_tree = |u: usize, v: usize| parent[v] == Some(u) || parent[u] == Some(v);
        let mut generator_edges = Vec::new();
        let mut edge_gen = std::collections::HashMap::new();
        for e in complex.edges() {
            let (u, v) = (e[0], e[1]);
            if seen[u] && !is_tree(u, v) {
                edge_gen.insert((u, v), generator_edges.len());
                generator_edges.push((u, v));
            }
        }
        order.sort_unstable();
        let mut epg = EdgePathGroup {
            basepoint,
            vertices: order,
            parent,
            generator_edges,
            edge_gen,
            presentation: Presentation {
                generators: Vec::new(),
                relators: Vec::new(),
                basepoint,
            },
        };
        let generators = epg.generator_edges.iter().map(|&(u, v)| format!("e{u}_{v}")).collect();
        let mut relators = Vec::new();
        for t in complex.triangles() {
            if !seen[t[0]] {
                continue;
            }
            let w = free_reduce(&epg.chain_word(&[t[0], t[1], t[2], t[0]]));
            if !w.is_empty() {
                relators.push(w);
            }
        }
        epg.presentation = Presentation {
            generators,
            relators,
            basepoint,
        };
        epg
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generator_edges(&self) -> &[(usize, usize)] {
        &self.generator_edges
    }

    pub fn generator_count(&self) -> usize {
        self.generator_edges.len()
    }

    /// Letter for traversing `u -> v`; empty for tree edges and stays.
    pub fn edge_word(&self, u: usize, v: usize) -> Word {
        if u == v {
            return Vec::new();
        }
        let key = if u < v { (u, v) } else { (v, u) };
        match self.edge_gen.get(&key) {
            Some(&g) => vec![if u < v { g as i32 + 1 } else { -(g as i32 + 1) }],
            None => Vec::new(),
        }
    }

    /// Word of a chain; for a chain from `a` to `b` it represents the loop
    /// `tree(a) · chain · tree(b)⁻¹`.
    pub fn chain_word(&self, chain: &[usize]) -> Word {
        let mut w = Vec::new();
        for p in chain.windows(2) {
            w.extend(self.edge_word(p[0], p[1]));
        }
        free_reduce(&w)
    }

    /// Tree path from the basepoint to `v`.
    pub fn tree_path(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            out.push(p);
            x = p;
        }
        out.reverse();
        out
    }

    /// Loop at the basepoint representing generator `g`.
    pub fn generator_loop(&self, g: usize) -> Vec<usize> {
        let (u, v) = self.generator_edges[g];
        let mut path = self.tree_path(u);
        let mut back = self.tree_path(v);
        back.reverse();
        path.extend(back);
        path
    }

    /// A chain realizing a word as a loop at the basepoint.
    pub fn word_loop(&self, w: &[i32]) -> Vec<usize> {
        let mut out = vec![self.basepoint];
        for &x in w {
            let mut lp = self.generator_loop(gen_of(x));
            if x < 0 {
                lp.reverse();
            }
            out.extend_from_slice(&lp[1..]);
        }
        out
    }
}

/// Spanning-tree presentation of `π₁(K, basepoint)` on the basepoint's component.
pub fn pi1_presentation(complex: &RipsComplex, basepoint: usize) -> Presentation {
    EdgePathGroup::new(complex, basepoint).presentation.clone()
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

    fn rips(rel: &SymRelation) -> RipsComplex {
        RipsComplex::from_relation(rel, 2, 100_000).unwrap()
    }

    #[test]
    fn hexagon_is_free_of_rank_one() {
        let p = pi1_presentation(&rips(&cycle(6, 1)), 0);
        assert_eq!(p.generators.len(), 1);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn full_simplex_simplifies_to_trivial() {
        let p = pi1_presentation(&rips(&SymRelation::full("F", 5)), 0);
        let s = p.simplify();
        assert!(s.presentation.generators.is_empty());
        assert!(s.presentation.relators.is_empty());
    }

    #[test]
    fn abelianization_matches_h1_on_c6_at_two() {
        let k = rips(&cycle(6, 2));
        let p = pi1_presentation(&k, 0);
        assert_eq!(p.abelianization().unwrap(), crate::rips::homology::h1(&k).unwrap());
    }

    #[test]
    fn hexagon_loop_is_a_generator() {
        let epg = EdgePathGroup::new(&rips(&cycle(6, 1)), 0);
        let w = epg.chain_word(&[0, 1, 2, 3, 4, 5, 0]);
        assert_eq!(w.len(), 1);
        let lp = epg.generator_loop(0);
        assert_eq!(lp.first(), Some(&0));
        assert_eq!(lp.last(), Some(&0));
        assert_eq!(epg.chain_word(&lp), vec![1]);
    }

    #[test]
    fn simplification_rewrites_consistently() {
        let k = rips(&cycle(9, 2));
        let epg = EdgePathGroup::new(&k, 0);
        let s = epg.presentation().simplify();
        assert_eq!(
            s.presentation.abelianization().unwrap(),
            epg.presentation().abelianization().unwrap()
        );
        assert!(s.presentation.is_free());
        assert_eq!(s.presentation.generators.len(), 1);
        for r in &epg.presentation().relators {
            assert!(s.rewrite(r).is_empty());
        }
        let w = s.rewrite(&epg.chain_word(&[0, 2, 4, 6, 8, 0]));
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(inverse(&[1, -2]), vec![2, -1]);
    }
}
