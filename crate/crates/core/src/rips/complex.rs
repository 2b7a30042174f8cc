use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::UniformMap;
use crate::relation::SymRelation;
use crate::space::FiniteUniformSpace;

/// Default ceiling on the number of simplices a complex may hold.
pub const DEFAULT_SIMPLEX_CAP: usize = 250_000;

/// Clique complex of a relation, truncated at dimension `d_max`.
///
/// Simplices are sorted vertex lists; `simplices[k]` holds the
/// `k`-dimensional ones in lexicographic order.
#[derive(Debug, Clone)]
pub struct RipsComplex {
    scale_name: String,
    relation: SymRelation,
    d_max: usize,
    vertices: Vec<usize>,
    simplices: Vec<Vec<Vec<usize>>>,
    edge_index: HashMap<(usize, usize), usize>,
}

/// Serialized complex: simplices by vertex index.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawComplex {
    pub scale: String,
    pub dmax: usize,
    pub vertices: Vec<usize>,
    pub simplices: Vec<Vec<usize>>,
    pub counts: Vec<usize>,
}

/// `R(X, Ei)` up to dimension `d_max`.
pub fn build_rips(space: &FiniteUniformSpace, scale: usize, d_max: usize) -> Result<RipsComplex> {
    RipsComplex::from_relation(space.entry(scale), d_max, DEFAULT_SIMPLEX_CAP)
}

impl RipsComplex {
    pub fn from_relation(relation: &SymRelation, d_max: usize, cap: usize) -> Result<Self> {
        let vertices: Vec<usize> = (0..relation.size()).collect();
        Self::on_vertices(relation, &vertices, d_max, cap)
    }

    /// Clique complex restricted to the given vertex subset.
    pub fn on_vertices(relation: &SymRelation, vertices: &[usize], d_max: usize, cap: usize) -> Result<Self> {
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let mut inside = vec![false; relation.size()];
        for &v in &vertices {
            inside[v] = true;
        }
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d_max + 1];
        let mut count = 0usize;
        // Depth-first clique extension by increasing vertex index keeps each
        // clique listed once, already sorted.
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for &v in vertices.iter().rev() {
            let cands: Vec<usize> = relation.neighbors(v).filter(|&w| w > v && inside[w]).collect();
            stack.push((vec![v], cands));
        }
        while let Some((clique, cands)) = stack.pop() {
            count += 1;
            if count > cap {
                return Err(Error::RipsCap { cap });
            }
            let dim = clique.len() - 1;
            simplices[dim].push(clique.clone());
            if dim == d_max {
                continue;
            }
            for (k, &w) in cands.iter().enumerate().rev() {
                let next: Vec<usize> = cands[k + 1..]
                    .iter()
                    .copied()
                    .filter(|&u| relation.contains(w, u))
                    .collect();
                let mut c = clique.clone();
                c.push(w);
                stack.push((c, next));
            }
        }
        for level in &mut simplices {
            level.sort();
        }
        let edge_index = simplices
            .get(1)
            .map(|edges| edges.iter().enumerate().map(|(k, e)| ((e[0], e[1]), k)).collect())
            .unwrap_or_default();
        Ok(RipsComplex {
            scale_name: relation.name().to_string(),
            relation: relation.clone(),
            d_max,
            vertices,
            simplices,
            edge_index,
        })
    }

    pub fn scale_name(&self) -> &str {
        &self.scale_name
    }

    pub fn relation(&self) -> &SymRelation {
        &self.relation
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn dim_simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        self.dim_simplices(1)
    }

    pub fn triangles(&self) -> &[Vec<usize>] {
        self.dim_simplices(2)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Index of the edge `{u, v}` in [`Self::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    /// True when `set` (any order, duplicates allowed) spans a simplex of
    /// dimension at most `d_max` on vertices of this complex.
    pub fn is_simplex(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        !s.is_empty()
            && s.len() <= self.d_max + 1
            && s.iter().all(|&v| self.has_vertex(v))
            && self.relation.is_bounded(&s)
    }

    /// Vertices of the connected component containing `v`.
    pub fn component_of(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.relation.size()];
        let mut out = vec![v];
        seen[v] = true;
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            k += 1;
            for y in self.relation.neighbors(x) {
                if !seen[y] && self.has_vertex(y) {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The full subcomplex on the component containing `v`.
    pub fn component(&self, v: usize) -> RipsComplex {
        let comp = self.component_of(v);
        RipsComplex::on_vertices(&self.relation, &comp, self.d_max, usize::MAX)
            .expect("a subcomplex never exceeds an unbounded cap")
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.component_of(self.vertices[0]).len() == self.vertices.len()
    }

    /// Simplices of the closed star of `v`: every simplex `σ` with `σ ∪ {v}` a simplex.
    pub fn closed_star(&self, v: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for level in &self.simplices {
            for s in level {
                let mut t = s.clone();
                if !t.contains(&v) {
                    t.push(v);
                }
                if self.is_simplex(&t) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            scale: self.scale_name.clone(),
            dmax: self.d_max,
            vertices: self.vertices.clone(),
            simplices: self.simplices.iter().flatten().cloned().collect(),
            counts: self.counts(),
        }
    }
}

/// Vertex map `R(X, Ei) → R(Y, f(Ei))` induced by a point map.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    pub source: RipsComplex,
    pub target: RipsComplex,
    pub vertex_map: Vec<usize>,
}

impl SimplicialMap {
    /// Image of a simplex: sorted, deduplicated vertex images.
    pub fn image(&self, simplex: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = simplex.iter().map(|&v| self.vertex_map[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Every source simplex lands on a target simplex.
    pub fn is_simplicial(&self) -> bool {
        self.source
            .simplices
            .iter()
            .flatten()
            .all(|s| self.target.is_simplex(&self.image(s)))
    }

    /// First vertex whose closed star is not carried isomorphically onto the
    /// closed star of its image, or a target vertex missing from the image.
    pub fn star_failure(&self) -> Option<StarFailure> {
        let mut hit = vec![false; self.target.relation.size()];
        for &v in self.source.vertices() {
            hit[self.vertex_map[v]] = true;
        }
        if let Some(&y) = self.target.vertices().iter().find(|&&y| !hit[y]) {
            return Some(StarFailure::Unreached { vertex: y });
        }
        for &v in self.source.vertices() {
            let star = self.source.closed_star(v);
            let mut star_vertices: Vec<usize> = star.iter().flatten().copied().collect();
            star_vertices.sort_unstable();
            star_vertices.dedup();
            let mut imgs: Vec<usize> = star_vertices.iter().map(|&u| self.vertex_map[u]).collect();
            imgs.sort_unstable();
            if imgs.windows(2).any(|w| w[0] == w[1]) {
                return Some(StarFailure::NotInjective { vertex: v });
            }
            let mut mapped: Vec<Vec<usize>> = star.iter().map(|s| self.image(s)).collect();
            mapped.sort();
            let mut target_star = self.target.closed_star(self.vertex_map[v]);
            target_star.sort();
            if mapped != target_star {
                return Some(StarFailure::NotOnto { vertex: v });
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarFailure {
    Unreached { vertex: usize },
    NotInjective { vertex: usize },
    NotOnto { vertex: usize },
}

/// The simplicial map induced by `f` at source scale `i`.
pub fn induced_simplicial_map(f: &UniformMap, scale: usize, d_max: usize) -> Result<SimplicialMap> {
    let e = f.source().entry(scale);
    let source = RipsComplex::from_relation(e, d_max, DEFAULT_SIMPLEX_CAP)?;
    let target = RipsComplex::from_relation(&f.entourage_image(e), d_max, DEFAULT_SIMPLEX_CAP)?;
    let map = SimplicialMap {
        source,
        target,
        vertex_map: f.values().to_vec(),
    };
    debug_assert!(map.is_simplicial());
    Ok(map)
}
