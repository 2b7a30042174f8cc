//! Deciding E-homotopy of chains rel endpoints.
//!
//! Three tiers: the abelian obstruction in `H1`, breadth-first search over
//! elementary moves, and the word problem in the simplified edge-path group
//! (free reduction, else coset enumeration). Exhausted budgets give
//! `unknown`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::SymRelation;
use crate::rips::complex::{RipsComplex, DEFAULT_SIMPLEX_CAP};
use crate::rips::coset::{enumerate_cosets, CosetTable};
use crate::rips::homology::IntLattice;
use crate::rips::presentation::{exponent_vector, free_reduce, inverse, EdgePathGroup, Simplified, Word};
use crate::verdict::Status;

pub const DEFAULT_MOVE_BUDGET: usize = 10_000;
pub const DEFAULT_COSET_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub moves: usize,
    pub cosets: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            moves: DEFAULT_MOVE_BUDGET,
            cosets: DEFAULT_COSET_BUDGET,
        }
    }
}

impl Budgets {
    /// Defaults overridden by `UCL_BUDGET_MOVES` / `UCL_BUDGET_COSETS`.
    pub fn from_env() -> Self {
        let read = |key: &str, default: usize| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        Budgets {
            moves: read("UCL_BUDGET_MOVES", DEFAULT_MOVE_BUDGET),
            cosets: read("UCL_BUDGET_COSETS", DEFAULT_COSET_BUDGET),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Insert,
    Delete,
}

/// One elementary move. `position` is the index the vertex occupies before
/// a deletion or after an insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub op: MoveKind,
    pub position: usize,
    pub vertex: usize,
}

impl Move {
    pub fn insert(position: usize, vertex: usize) -> Self {
        Move {
            op: MoveKind::Insert,
            position,
            vertex,
        }
    }

    pub fn delete(position: usize, vertex: usize) -> Self {
        Move {
            op: MoveKind::Delete,
            position,
            vertex,
        }
    }

    /// Applies the move, checking that it is elementary for `e`.
    pub fn apply(&self, e: &SymRelation, chain: &[usize]) -> std::result::Result<Vec<usize>, String> {
        let n = chain.len();
        let p = self.position;
        let v = self.vertex;
        match self.op {
            MoveKind::Insert => {
                if p > n {
                    return Err(format!("insert position {p} beyond length {n}"));
                }
                let ok = if p == 0 {
                    v == chain[0]
                } else if p == n {
                    v == chain[n - 1]
                } else {
                    e.contains(chain[p - 1], v) && e.contains(v, chain[p])
                };
                if !ok {
                    return Err(format!("inserting {v} at {p} does not span a simplex"));
                }
                let mut out = chain.to_vec();
                out.insert(p, v);
                Ok(out)
            }
            MoveKind::Delete => {
                if p >= n || chain[p] != v {
                    return Err(format!("no vertex {v} at position {p}"));
                }
                if n == 1 {
                    return Err("cannot delete the only vertex".into());
                }
                let ok = if p == 0 {
                    chain[1] == v
                } else if p == n - 1 {
                    chain[n - 2] == v
                } else {
                    e.contains(chain[p - 1], chain[p + 1])
                };
                if !ok {
                    return Err(format!("deleting {v} at {p} does not span a simplex"));
                }
                let mut out = chain.to_vec();
                out.remove(p);
                Ok(out)
            }
        }
    }
}

/// Replays a move script, returning every intermediate chain.
pub fn replay(e: &SymRelation, start: &[usize], moves: &[Move]) -> std::result::Result<Vec<Vec<usize>>, String> {
    let mut out = vec![start.to_vec()];
    for (k, m) in moves.iter().enumerate() {
        let next = m
            .apply(e, out.last().unwrap())
            .map_err(|msg| format!("move {k}: {msg}"))?;
        out.push(next);
    }
    Ok(out)
}

/// Certificate for a `no`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// `abelian`, `free-group`, or `coset-table`.
    pub kind: String,
    /// Class of `c·d⁻¹` reduced modulo the relator lattice (abelian kind).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub class: Vec<i64>,
    /// Reduced word in the simplified presentation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub word: Vec<i32>,
    /// Non-tree edges labelling the class coordinates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyVerdict {
    pub status: Status,
    /// Tier that decided (1 abelian, 2 move search, 3 word problem).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moves: Vec<Move>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Budgets>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl HomotopyVerdict {
    fn yes(tier: u8, moves: Vec<Move>) -> Self {
        HomotopyVerdict {
            status: Status::Yes,
            tier: Some(tier),
            moves,
            obstruction: None,
            budgets: None,
            note: None,
        }
    }

    fn no(tier: u8, obstruction: Obstruction) -> Self {
        HomotopyVerdict {
            status: Status::No,
            tier: Some(tier),
            moves: Vec::new(),
            obstruction: Some(obstruction),
            budgets: None,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }
}

/// Per-component data: the edge-path group and its solvers.
#[derive(Debug)]
pub struct ComponentGroup {
    pub epg: EdgePathGroup,
    pub lattice: IntLattice,
    pub simplified: Simplified,
    cosets: OnceLock<Option<CosetTable>>,
}

impl ComponentGroup {
    fn new(complex: &RipsComplex, basepoint: usize) -> Result<Self> {
        let epg = EdgePathGroup::new(complex, basepoint);
        let gens = epg.generator_count();
        let lattice = IntLattice::from_rows(gens, epg.presentation().relation_matrix())?;
        let simplified = epg.presentation().simplify();
        Ok(ComponentGroup {
            epg,
            lattice,
            simplified,
            cosets: OnceLock::new(),
        })
    }

    /// Coset table of the trivial subgroup, if the group is finite within budget.
    pub fn coset_table(&self, budget: usize) -> Option<&CosetTable> {
        self.cosets
            .get_or_init(|| {
                let p = &self.simplified.presentation;
                enumerate_cosets(p.generators.len(), &p.relators, &[], budget)
            })
            .as_ref()
    }

    /// Decides whether a word in the original generators is trivial.
    /// Returns `None` when the coset budget runs out.
    pub fn word_is_trivial(&self, w: &[i32], budget: usize) -> Option<bool> {
        let r = free_reduce(&self.simplified.rewrite(w));
        if r.is_empty() {
            return Some(true);
        }
        if self.simplified.presentation.is_free() {
            return Some(false);
        }
        self.coset_table(budget).map(|t| t.trace(0, &r) == 0)
    }
}

/// Shared state for all homotopy questions at one scale.
#[derive(Debug)]
pub struct HomotopyContext {
    relation: SymRelation,
    complex: RipsComplex,
    budgets: Budgets,
    component: Vec<usize>,
    groups: Vec<OnceLock<std::result::Result<ComponentGroup, String>>>,
    reps: Vec<usize>,
}

impl HomotopyContext {
    pub fn new(relation: &SymRelation, budgets: Budgets) -> Result<Self> {
        let complex = RipsComplex::from_relation(relation, 2, DEFAULT_SIMPLEX_CAP)?;
        let component = relation.components();
        let count = component.iter().copied().max().map_or(0, |m| m + 1);
        let mut reps = vec![usize::MAX; count];
        for (x, &c) in component.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        Ok(HomotopyContext {
            relation: relation.clone(),
            complex,
            budgets,
            component,
            groups: (0..count).map(|_| OnceLock::new()).collect(),
            reps,
        })
    }

    pub fn relation(&self) -> &SymRelation {
        &self.relation
    }

    pub fn complex(&self) -> &RipsComplex {
        &self.complex
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets
    }

    /// Edge-path group of the component containing `x`, based at its least point.
    pub fn group_of(&self, x: usize) -> Result<&ComponentGroup> {
        let c = self.component[x];
        self.groups[c]
            .get_or_init(|| {
                ComponentGroup::new(&self.complex.component(self.reps[c]), self.reps[c]).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|_| Error::Overflow)
    }

    fn check_chain(&self, c: &[usize]) -> Result<()> {
        if c.is_empty() {
            return Err(Error::Chain("empty chain".into()));
        }
        if let Some(&p) = c.iter().find(|&&p| p >= self.relation.size()) {
            return Err(Error::Chain(format!("point {p} is out of range")));
        }
        if let Some(k) = c.windows(2).position(|w| !self.relation.contains(w[0], w[1])) {
            return Err(Error::Chain(format!(
                "({}, {}) at position {k} is not in {}",
                c[k],
                c[k + 1],
                self.relation.name()
            )));
        }
        Ok(())
    }

    /// Are `c` and `d` homotopic rel endpoints in `R(X, E)`?
    pub fn chains_homotopic(&self, c: &[usize], d: &[usize]) -> Result<HomotopyVerdict> {
        self.check_chain(c)?;
        self.check_chain(d)?;
        if c[0] != d[0] || c[c.len() - 1] != d[d.len() - 1] {
            return Err(Error::Chain("chains do not share both endpoints".into()));
        }
        if c == d {
            return Ok(HomotopyVerdict::yes(2, Vec::new()));
        }
        let group = self.group_of(c[0])?;
        let w: Word = free_reduce(&[group.epg.chain_word(c), inverse(&group.epg.chain_word(d))].concat());

        // tier 1
        let gens = group.epg.generator_count();
        let class = group.lattice.reduce(&exponent_vector(&w, gens))?;
        if class.iter().any(|&x| x != 0) {
            return Ok(HomotopyVerdict::no(
                1,
                Obstruction {
                    kind: "abelian".into(),
                    class: class.iter().map(|&x| x as i64).collect(),
                    word: Vec::new(),
                    generators: group.epg.presentation().generators.clone(),
                },
            ));
        }

        // tier 2
        if let Some(moves) = self.move_search(c, d) {
            return Ok(HomotopyVerdict::yes(2, moves));
        }

        // tier 3
        let reduced = free_reduce(&group.simplified.rewrite(&w));
        match group.word_is_trivial(&w, self.budgets.cosets) {
            Some(true) => Ok(HomotopyVerdict::yes(3, Vec::new()).with_note(if reduced.is_empty() {
                "word reduces to the identity in the simplified presentation".to_string()
            } else {
                "word traces the identity coset".to_string()
            })),
            Some(false) => Ok(HomotopyVerdict::no(
                3,
                Obstruction {
                    kind: if group.simplified.presentation.is_free() {
                        "free-group"
                    } else {
                        "coset-table"
                    }
                    .into(),
                    class: Vec::new(),
                    word: reduced,
                    generators: group.simplified.presentation.generators.clone(),
                },
            )),
            None => Ok(HomotopyVerdict {
                status: Status::Unknown,
                tier: None,
                moves: Vec::new(),
                obstruction: None,
                budgets: Some(self.budgets),
                note: Some("move and coset budgets exhausted".into()),
            }),
        }
    }

    /// Is `c` homotopic to the edge path between its endpoints?
    pub fn is_e_short(&self, c: &[usize]) -> Result<HomotopyVerdict> {
        self.check_chain(c)?;
        let (a, b) = (c[0], c[c.len() - 1]);
        if !self.relation.contains(a, b) {
            return Err(Error::Chain(format!(
                "endpoints ({a}, {b}) are not {}-close",
                self.relation.name()
            )));
        }
        let edge = if a == b { vec![a] } else { vec![a, b] };
        self.chains_homotopic(c, &edge)
    }

    /// Is `c⁻¹·d` short? `c` and `d` must share their origin.
    pub fn e_homotopic_pair(&self, c: &[usize], d: &[usize]) -> Result<HomotopyVerdict> {
        if c.first() != d.first() {
            return Err(Error::Chain("chains do not share their origin".into()));
        }
        let mut path: Vec<usize> = c.iter().rev().copied().collect();
        path.extend_from_slice(&d[1..]);
        self.is_e_short(&path)
    }

    /// Breadth-first search over canonical chains (no immediate repeats);
    /// returns a full move script from `c` to `d`.
    fn move_search(&self, c: &[usize], d: &[usize]) -> Option<Vec<Move>> {
        let e = &self.relation;
        let (cc, c_moves) = canonicalize(c);
        let (dc, d_moves) = canonicalize(d);
        let finish = |mid: Vec<Move>| {
            let mut script = c_moves.clone();
            script.extend(mid);
            for m in d_moves.iter().rev() {
                script.push(Move::insert(m.position, m.vertex));
            }
            script
        };
        if cc == dc {
            return Some(finish(Vec::new()));
        }
        let cap = c.len().max(d.len()) + 3;
        let mut states: Vec<Vec<usize>> = vec![cc.clone()];
        let mut back: Vec<(usize, Vec<Move>)> = vec![(usize::MAX, Vec::new())];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(cc, 0)]);
        let mut head = 0;
        while head < states.len() {
            let s = states[head].clone();
            let sid = head;
            head += 1;
            let mut next: Vec<(Vec<usize>, Vec<Move>)> = Vec::new();
            // deletions
            for p in 1..s.len().saturating_sub(1) {
                if e.contains(s[p - 1], s[p + 1]) {
                    let mut t = s.clone();
                    t.remove(p);
                    let mut ms = vec![Move::delete(p, s[p])];
                    if t[p - 1] == t[p] {
                        ms.push(Move::delete(p, t[p]));
                        t.remove(p);
                    }
                    next.push((t, ms));
                }
            }
            // insertions
            if s.len() < cap {
                for p in 1..s.len() {
                    let (a, b) = (s[p - 1], s[p]);
                    for v in e.neighbors(a) {
                        if v != a && v != b && e.contains(v, b) {
                            let mut t = s.clone();
                            t.insert(p, v);
                            next.push((t, vec![Move::insert(p, v)]));
                        }
                    }
                }
            }
            for (t, ms) in next {
                if index.contains_key(&t) {
                    continue;
                }
                let id = states.len();
                let done = t == dc;
                index.insert(t.clone(), id);
                states.push(t);
                back.push((sid, ms));
                if done {
                    let mut mid = Vec::new();
                    let mut k = id;
                    while back[k].0 != usize::MAX {
                        mid.push(back[k].1.clone());
                        k = back[k].0;
                    }
                    mid.reverse();
                    return Some(finish(mid.concat()));
                }
                if states.len() >= self.budgets.moves {
                    return None;
                }
            }
        }
        None
    }
}

/// Collapses immediate repetitions, recording the deletions.
pub fn canonicalize(c: &[usize]) -> (Vec<usize>, Vec<Move>) {
    let mut out = vec![c[0]];
    let mut moves = Vec::new();
    for &x in &c[1..] {
        if *out.last().unwrap() == x {
            moves.push(Move::delete(out.len(), x));
        } else {
            out.push(x);
        }
    }
    (out, moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, r: usize) -> SymRelation {
        SymRelation::from_fn(format!("d<={r}"), n, |x, y| {
            let d = (x + n - y) % n;
            d.min(n - d) <= r
        })
    }

    fn ctx(rel: &SymRelation) -> HomotopyContext {
        HomotopyContext::new(rel, Budgets::default()).unwrap()
    }

    #[test]
    fn hexagon_loop_is_not_null() {
        let h = ctx(&cycle(6, 1));
        let v = h.chains_homotopic(&[0, 1, 2, 3, 4, 5, 0], &[0]).unwrap();
        assert!(v.is_no());
        let ob = v.obstruction.unwrap();
        assert_eq!(ob.kind, "abelian");
        assert_eq!(ob.class.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn doubled_vertex_is_one_deletion() {
        let rel = cycle(6, 1);
        let h = ctx(&rel);
        let v = h.chains_homotopic(&[0, 1, 2], &[0, 1, 1, 2]).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.moves.len(), 1);
        let steps = replay(&rel, &[0, 1, 2], &v.moves).unwrap();
        assert_eq!(steps.last().unwrap(), &vec![0, 1, 1, 2]);
    }

    #[test]
    fn full_relation_is_simply_connected() {
        let rel = SymRelation::full("F", 5);
        let h = ctx(&rel);
        let c = [0, 3, 1, 4, 2];
        let d = [0, 2];
        let v = h.chains_homotopic(&c, &d).unwrap();
        assert!(v.is_yes());
        assert_eq!(replay(&rel, &c, &v.moves).unwrap().last().unwrap(), &d.to_vec());
    }

    #[test]
    fn hexagon_at_two_fills_small_triangles() {
        let rel = cycle(6, 2);
        let h = ctx(&rel);
        let v = h.chains_homotopic(&[0, 1, 2], &[0, 2]).unwrap();
        assert!(v.is_yes());
        assert!(h.chains_homotopic(&[0, 2, 4, 0], &[0]).unwrap().is_yes());
        let h = ctx(&cycle(8, 2));
        assert!(h.chains_homotopic(&[0, 2, 4, 6, 0], &[0]).unwrap().is_no());
    }

    #[test]
    fn short_chains() {
        let h = ctx(&cycle(6, 1));
        assert!(h.is_e_short(&[0, 1]).unwrap().is_yes());
        assert!(h.is_e_short(&[0, 1, 2, 3, 4, 5, 0]).unwrap().is_no());
        assert!(h.is_e_short(&[0, 1, 2]).is_err());
        assert!(h.e_homotopic_pair(&[0, 1, 2], &[0, 1, 2, 1]).unwrap().is_yes());
    }

    #[test]
    fn bad_moves_are_rejected() {
        let rel = cycle(6, 1);
        assert!(Move::insert(1, 3).apply(&rel, &[0, 1]).is_err());
        assert!(Move::delete(1, 1).apply(&rel, &[0, 1, 2]).is_err());
        assert!(Move::insert(0, 0).apply(&rel, &[0, 1]).is_ok());
        assert!(Move::delete(0, 0).apply(&rel, &[0, 1]).is_err());
    }
}
