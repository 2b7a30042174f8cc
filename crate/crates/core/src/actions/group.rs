use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::SymRelation;
use crate::space::FiniteUniformSpace;

/// Default ceiling on the enumerated group order.
pub const DEFAULT_GROUP_CAP: usize = 512;

/// JSON form of an action; `space` is a path resolved relative to the file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawAction {
    pub space: String,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub names: Vec<String>,
}

/// A finite permutation group acting on the points of a space.
///
/// Elements are enumerated eagerly; element 0 is the identity. Products
/// compose as maps: `mul(a, b)` acts by `b` first.
#[derive(Debug, Clone)]
pub struct GroupAction {
    space: Arc<FiniteUniformSpace>,
    generator_names: Vec<String>,
    generators: Vec<usize>,
    collapsed: Vec<String>,
    elements: Vec<Vec<usize>>,
    words: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    continuous: Vec<bool>,
}

impl GroupAction {
    pub fn new(space: Arc<FiniteUniformSpace>, generators: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        Self::with_cap(space, generators, names, DEFAULT_GROUP_CAP)
    }

    pub fn with_cap(
        space: Arc<FiniteUniformSpace>,
        generators: Vec<Vec<usize>>,
        names: Vec<String>,
        cap: usize,
    ) -> Result<Self> {
        let n = space.len();
        let names: Vec<String> = if names.is_empty() {
            (0..generators.len()).map(|k| format!("g{}", k + 1)).collect()
        } else if names.len() == generators.len() {
            names
        } else {
            return Err(Error::Action(format!(
                "{} names for {} generators",
                names.len(),
                generators.len()
            )));
        };
        for (k, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(Error::Action(format!(
                    "generator {} has {} entries for {n} points",
                    names[k],
                    g.len()
                )));
            }
            let mut hit = vec![false; n];
            for &v in g {
                if v >= n || hit[v] {
                    return Err(Error::Action(format!("generator {} is not a permutation", names[k])));
                }
                hit[v] = true;
            }
        }
        let identity: Vec<usize> = (0..n).collect();
        let mut elements = vec![identity.clone()];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        // generators that coincide with the identity or an earlier generator
        let mut collapsed = Vec::new();
        let mut gen_ids = Vec::new();
        let mut gen_names = Vec::new();
        for (k, g) in generators.iter().enumerate() {
            if let Some(&id) = index.get(g) {
                if id == 0 || gen_ids.contains(&id) {
                    collapsed.push(names[k].clone());
                    continue;
                }
            }
            let id = *index.entry(g.clone()).or_insert_with(|| {
                elements.push(g.clone());
                words.push(vec![gen_ids.len()]);
                elements.len() - 1
            });
            gen_ids.push(id);
            gen_names.push(names[k].clone());
        }
        let mut head = 0;
        while head < elements.len() {
            for (s, &gid) in gen_ids.iter().enumerate() {
                let g = &elements[gid];
                let prod: Vec<usize> = elements[head].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::GroupCap { cap });
                    }
                    index.insert(prod.clone(), elements.len());
                    let mut w = vec![s];
                    w.extend_from_slice(&words[head]);
                    elements.push(prod);
                    words.push(w);
                }
            }
            head += 1;
        }
        let order = elements.len();
        let mut mul = vec![vec![0; order]; order];
        let mut inv = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                let prod: Vec<usize> = elements[b].iter().map(|&x| elements[a][x]).collect();
                mul[a][b] = index[&prod];
                if mul[a][b] == 0 {
                    inv[a] = b;
                }
            }
        }
        let fin = space.entry(space.finest());
        let continuous = elements.iter().map(|g| maps_into(fin, g, fin)).collect();
        Ok(GroupAction {
            space,
            generator_names: gen_names,
            generators: gen_ids,
            collapsed,
            elements,
            words,
            mul,
            inv,
            continuous,
        })
    }

    /// The trivial group.
    pub fn trivial(space: Arc<FiniteUniformSpace>) -> Self {
        Self::new(space, Vec::new(), Vec::new()).expect("the trivial group is valid")
    }

    /// The same generators acting on another base over the same points.
    pub fn on_space(&self, space: Arc<FiniteUniformSpace>) -> Result<Self> {
        if space.len() != self.space.len() {
            return Err(Error::Action(format!(
                "{} points, expected {}",
                space.len(),
                self.space.len()
            )));
        }
        let gens = self.generators.iter().map(|&g| self.elements[g].clone()).collect();
        Self::with_cap(space, gens, self.generator_names.clone(), self.elements.len())
    }

    pub fn space(&self) -> &Arc<FiniteUniformSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, g: usize) -> &[usize] {
        &self.elements[g]
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.elements[g][x]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_elements(&self) -> &[usize] {
        &self.generators
    }

    /// Input generators dropped because they repeat the identity or an earlier generator.
    pub fn collapsed(&self) -> &[String] {
        &self.collapsed
    }

    /// Word for `g` as generator indices, leftmost applied last.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    pub fn word_string(&self, g: usize) -> String {
        if self.words[g].is_empty() {
            return "1".into();
        }
        self.words[g]
            .iter()
            .map(|&s| self.generator_names[s].as_str())
            .collect::<Vec<_>>()
            .join("·")
    }

    /// `g` maps the finest entry into itself, which on a finite chain means
    /// `g⁻¹(E)` is an entourage for every `E` (and `g` is a uniform equivalence).
    pub fn is_uniformly_continuous(&self, g: usize) -> bool {
        self.continuous[g]
    }

    /// Orbit id per point, ids in order of least member.
    pub fn orbits(&self) -> Vec<usize> {
        let n = self.space.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &g in &self.generators {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, self.act(g, x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = find(&mut parent, x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        out
    }

    /// `S_F`: elements moving some point within `E_i` (identity included).
    pub fn s_f(&self, i: usize) -> Vec<usize> {
        let e = self.space.entry(i);
        (0..self.order())
            .filter(|&g| (0..self.space.len()).any(|x| e.contains(x, self.act(g, x))))
            .collect()
    }

    /// The subgroup generated by a set of elements, sorted.
    pub fn generated(&self, set: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut out = vec![0];
        let mut k = 0;
        while k < out.len() {
            let a = out[k];
            k += 1;
            for &s in set {
                for b in [self.mul(s, a), self.mul(self.inv(s), a)] {
                    if !inside[b] {
                        inside[b] = true;
                        out.push(b);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `G_F`: the subgroup generated by `S_F`.
    pub fn g_f(&self, i: usize) -> Vec<usize> {
        self.generated(&self.s_f(i))
    }
}

/// `g(a) ⊆ b`.
pub fn maps_into(a: &SymRelation, g: &[usize], b: &SymRelation) -> bool {
    a.pairs().all(|(x, y)| b.contains(g[x], g[y]))
}
