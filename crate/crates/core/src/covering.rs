//! Uniform covering maps: the four equivalent conditions, approximate
//! uniqueness of chain lifts, and the covering class of a map.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::map::UniformMap;
use crate::rips::complex::{induced_simplicial_map, StarFailure};
use crate::space::coarsest_working;
use crate::verdict::{Counterexample, TableRow, Verdict, Witness};

/// Brute-force self-checks run only on sources this small.
pub const SELF_CHECK_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverClass {
    UniformCovering,
    GeneralizedUniformCovering,
    Neither,
}

impl CoverClass {
    pub fn is_covering(self) -> bool {
        self != CoverClass::Neither
    }
}

/// Cross-checks computed while classifying. `None` means not applicable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Consistency {
    /// Conditions 1 and 4 agree.
    pub condition1_matches_4: Option<bool>,
    /// Condition 3 agrees with 4 (needs the square axiom on the source).
    pub condition3_matches_4: Option<bool>,
    /// Condition 2 agrees with 4 (needs the square axiom; absent if the star check did not complete).
    pub condition2_matches_4: Option<bool>,
    /// Edge-level lifting and uniqueness agree with chain-level search.
    pub edge_level_matches_chains: Option<bool>,
    /// Uniqueness of lifts implies approximate uniqueness.
    pub uniqueness_implies_approximate: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub source_scales: Vec<String>,
    pub target_scales: Vec<String>,
    pub generates_structure: Verdict,
    pub condition1: Verdict,
    pub condition2: Verdict,
    pub condition3a: Verdict,
    pub condition3b: Verdict,
    pub condition3: Verdict,
    pub uniqueness: Verdict,
    pub condition4: Verdict,
    pub approximate_uniqueness: Verdict,
    pub complete_fibers: Verdict,
    pub class: CoverClass,
    pub base_relative: bool,
    pub source_uniform: bool,
    pub consistency: Consistency,
}

fn row(f: &UniformMap, e: usize, fi: usize) -> TableRow {
    TableRow {
        e: f.source().scale_name(e).to_string(),
        f: f.source().scale_name(fi).to_string(),
        e_index: e,
        f_index: fi,
    }
}

/// Runs a `∀E ∃F` scan over source base entries. `works(e, f)` decides a
/// pair; on failure returns the first `E` with no `F`.
fn forall_exists(
    f: &UniformMap,
    mut works: impl FnMut(usize, usize) -> bool,
) -> std::result::Result<Vec<TableRow>, usize> {
    let m = f.source().scales();
    let mut rows = Vec::with_capacity(m);
    for e in 0..m {
        match coarsest_working(m, |j| works(e, j)) {
            Some(j) => rows.push(row(f, e, j)),
            None => return Err(e),
        }
    }
    Ok(rows)
}

fn fibers(f: &UniformMap) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); f.target().len()];
    for (x, &y) in f.values().iter().enumerate() {
        out[y].push(x);
    }
    out
}

/// Condition 1: balls map bijectively onto balls of the image entourage.
/// Decided at the finest entry, which belongs to every basis; the witness
/// lists every scale at which it holds.
pub fn check_ball_bijectivity(f: &UniformMap) -> Verdict {
    let src = f.source();
    let rel = f.base_relative();
    let ball_failure = |i: usize| -> Option<Counterexample> {
        let e = src.entry(i);
        let img = f.entourage_image(e);
        for x in 0..src.len() {
            let ball: Vec<usize> = e.neighbors(x).collect();
            let mut seen = vec![usize::MAX; f.target().len()];
            for &a in &ball {
                let y = f.apply(a);
                if seen[y] != usize::MAX {
                    return Some(Counterexample::new(
                        format!("ball({x}, {}) contains {} and {a}, both sent to {y}", e.name(), seen[y]),
                        vec![x, seen[y], a],
                    ));
                }
                seen[y] = a;
            }
            if let Some(y) = img.neighbors(f.apply(x)).find(|&y| seen[y] == usize::MAX) {
                return Some(Counterexample::new(
                    format!(
                        "{y} lies in ball({}, f({})) but not in f(ball({x}))",
                        f.apply(x),
                        e.name()
                    ),
                    vec![x, y],
                ));
            }
        }
        None
    };
    let holds: Vec<usize> = (0..src.scales()).filter(|&i| ball_failure(i).is_none()).collect();
    match ball_failure(src.finest()) {
        None => Verdict::yes(Witness::Scales {
            names: holds.iter().map(|&i| src.scale_name(i).to_string()).collect(),
            indices: holds,
        }),
        Some(cx) => Verdict::no(cx),
    }
    .relative_to(rel)
}

/// Condition 2: the induced simplicial map is a covering (star isomorphisms)
/// at the finest scale, on simplices up to `d_max`.
pub fn check_simplicial_cover(f: &UniformMap, d_max: usize) -> Verdict {
    let src = f.source();
    let rel = f.base_relative();
    let mut holds = Vec::new();
    let mut finest = None;
    for i in 0..src.scales() {
        let sm = match induced_simplicial_map(f, i, d_max) {
            Ok(sm) => sm,
            Err(err) => {
                if i == src.finest() {
                    return Verdict::unknown(format!("star check did not complete: {err}")).relative_to(rel);
                }
                continue;
            }
        };
        let failure = sm.star_failure();
        if failure.is_none() {
            holds.push(i);
        }
        if i == src.finest() {
            finest = failure;
        }
    }
    let name = src.scale_name(src.finest());
    match finest {
        None => Verdict::yes(Witness::Scales {
            names: holds.iter().map(|&i| src.scale_name(i).to_string()).collect(),
            indices: holds,
        }),
        Some(StarFailure::Unreached { vertex }) => Verdict::no(Counterexample::new(
            format!("target vertex {vertex} is not hit by the induced map at {name}"),
            vec![vertex],
        )),
        Some(StarFailure::NotInjective { vertex }) => Verdict::no(Counterexample::new(
            format!("the closed star of {vertex} at {name} is not mapped injectively"),
            vec![vertex],
        )),
        Some(StarFailure::NotOnto { vertex }) => Verdict::no(Counterexample::new(
            format!("the closed star of {vertex} at {name} does not map onto the star of its image"),
            vec![vertex],
        )),
    }
    .relative_to(rel)
}

/// `(y1, y2) ∈ f(F)`, `x1 ∈ f⁻¹(y1)` with no `E`-neighbour over `y2`.
fn lifting_failure(f: &UniformMap, fib: &[Vec<usize>], e: usize, fi: usize) -> Option<(usize, usize, usize)> {
    let src = f.source();
    let ee = src.entry(e);
    let img = f.entourage_image(src.entry(fi));
    for (y1, y2) in img.pairs() {
        for &x1 in &fib[y1] {
            if !ee.neighbors(x1).any(|x2| f.apply(x2) == y2) {
                return Some((y1, y2, x1));
            }
        }
    }
    None
}

/// Condition 3a, equivalently chain lifting from every basepoint.
pub fn check_chain_lifting(f: &UniformMap) -> Verdict {
    let rel = f.base_relative();
    let fib = fibers(f);
    match forall_exists(f, |e, fi| lifting_failure(f, &fib, e, fi).is_none()) {
        Ok(rows) => Verdict::yes(Witness::Table { rows }),
        Err(e) => {
            let src = f.source();
            let fi = src.finest();
            let (y1, y2, x1) = lifting_failure(f, &fib, e, fi).expect("finest F fails too");
            Verdict::no(
                Counterexample::new(
                    format!(
                        "for E = {}: the f({})-chain ({y1}, {y2}) has no E-lift starting at {x1}",
                        src.scale_name(e),
                        src.scale_name(fi)
                    ),
                    vec![e, y1, y2, x1],
                )
                .with_chains(vec![vec![y1, y2], vec![x1]]),
            )
        }
    }
    .relative_to(rel)
}

fn transverse_failure(f: &UniformMap, i: usize) -> Option<(usize, usize)> {
    f.source()
        .entry(i)
        .pairs()
        .find(|&(x, y)| x != y && f.apply(x) == f.apply(y))
}

/// Condition 3b: some base entry is transverse to `f`. The witness is the
/// coarsest such entry.
pub fn check_transverse(f: &UniformMap) -> Verdict {
    let src = f.source();
    let rel = f.base_relative();
    match coarsest_working(src.scales(), |i| transverse_failure(f, i).is_none()) {
        Some(i) => Verdict::yes(Witness::Entourage {
            name: src.scale_name(i).to_string(),
            index: i,
        }),
        None => {
            let (x, y) = transverse_failure(f, src.finest()).unwrap();
            Verdict::no(Counterexample::new(
                format!(
                    "({x}, {y}) ∈ {} with f({x}) = f({y}) = {}",
                    src.scale_name(src.finest()),
                    f.apply(x)
                ),
                vec![x, y],
            ))
        }
    }
    .relative_to(rel)
}

fn uniqueness_failure(f: &UniformMap, i: usize) -> Option<(usize, usize, usize)> {
    let e = f.source().entry(i);
    for x in 0..f.source().len() {
        let nb: Vec<usize> = e.neighbors(x).collect();
        for (k, &a) in nb.iter().enumerate() {
            if let Some(&b) = nb[k + 1..].iter().find(|&&b| f.apply(b) == f.apply(a)) {
                return Some((x, a, b));
            }
        }
    }
    None
}

/// Uniqueness of chain lifts: some `F` on which two one-step lifts from the
/// same point with the same image coincide. The `E` quantifier is vacuous,
/// so the table repeats the coarsest such `F`.
pub fn check_uniqueness(f: &UniformMap) -> Verdict {
    let src = f.source();
    let rel = f.base_relative();
    match coarsest_working(src.scales(), |i| uniqueness_failure(f, i).is_none()) {
        Some(j) => Verdict::yes(Witness::Table {
            rows: (0..src.scales()).map(|e| row(f, e, j)).collect(),
        }),
        None => {
            let (x, a, b) = uniqueness_failure(f, src.finest()).unwrap();
            Verdict::no(
                Counterexample::new(
                    format!(
                        "{}-chains ({x}, {a}) and ({x}, {b}) differ but have the same image",
                        src.scale_name(src.finest())
                    ),
                    vec![x, a, b],
                )
                .with_chains(vec![vec![x, a], vec![x, b]]),
            )
        }
    }
    .relative_to(rel)
}

/// Condition 4: chain lifting and uniqueness of chain lifts.
pub fn check_unique_chain_lifting(f: &UniformMap) -> Verdict {
    check_chain_lifting(f).and(check_uniqueness(f))
}

/// Reachable states of the synchronized product graph at scale `fi`,
/// starting from the diagonal. Returns the first reachable state outside
/// `E_e` with its decoded chain pair.
fn product_search(f: &UniformMap, e: usize, fi: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let src = f.source();
    let n = src.len();
    let ee = src.entry(e);
    let ff = src.entry(fi);
    let mut parent = vec![usize::MAX; n * n];
    let mut queue = VecDeque::new();
    for x in 0..n {
        parent[x * n + x] = x * n + x;
        queue.push_back(x * n + x);
    }
    while let Some(s) = queue.pop_front() {
        let (a, b) = (s / n, s % n);
        if !ee.contains(a, b) {
            let mut ca = Vec::new();
            let mut cb = Vec::new();
            let mut k = s;
            loop {
                ca.push(k / n);
                cb.push(k % n);
                if parent[k] == k {
                    break;
                }
                k = parent[k];
            }
            ca.reverse();
            cb.reverse();
            return Some((ca, cb));
        }
        for a2 in ff.neighbors(a) {
            for b2 in ff.neighbors(b) {
                let t = a2 * n + b2;
                if f.apply(a2) == f.apply(b2) && parent[t] == usize::MAX {
                    parent[t] = s;
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Approximate uniqueness of chain lifts via product-graph reachability.
pub fn check_approx_uniqueness(f: &UniformMap) -> Verdict {
    let rel = f.base_relative();
    match forall_exists(f, |e, fi| product_search(f, e, fi).is_none()) {
        Ok(rows) => Verdict::yes(Witness::Table { rows }),
        Err(e) => {
            let src = f.source();
            let fi = src.finest();
            let (ca, cb) = product_search(f, e, fi).expect("finest F fails too");
            let (a, b) = (*ca.last().unwrap(), *cb.last().unwrap());
            Verdict::no(
                Counterexample::new(
                    format!(
                        "for E = {}: {}-chains {ca:?} and {cb:?} share origin and image but end at ({a}, {b}) ∉ E",
                        src.scale_name(e),
                        src.scale_name(fi)
                    ),
                    vec![e, a, b],
                )
                .with_chains(vec![ca, cb]),
            )
        }
    }
    .relative_to(rel)
}

/// Chain-level lifting by subset search: every `f(F)`-chain of length at
/// most `depth` lifts to an `E`-chain from every point over its origin.
pub fn chain_lifting_by_search(f: &UniformMap, e: usize, fi: usize, depth: usize) -> bool {
    let src = f.source();
    let ee = src.entry(e);
    let img = f.entourage_image(src.entry(fi));
    let fib = fibers(f);
    // a state is (set of possible current lift points, current image point)
    for x0 in 0..src.len() {
        let mut frontier = vec![(vec![x0], f.apply(x0))];
        let mut seen = std::collections::HashSet::new();
        for _ in 0..depth {
            let mut next = Vec::new();
            for (set, y) in &frontier {
                for y2 in img.neighbors(*y) {
                    let mut s2: Vec<usize> = fib[y2]
                        .iter()
                        .copied()
                        .filter(|&x2| set.iter().any(|&x| ee.contains(x, x2)))
                        .collect();
                    if s2.is_empty() {
                        return false;
                    }
                    s2.sort_unstable();
                    if seen.insert((s2.clone(), y2)) {
                        next.push((s2, y2));
                    }
                }
            }
            frontier = next;
        }
    }
    true
}

/// Classifies `f` and records the equivalence cross-checks.
pub fn classify_map(f: &UniformMap, d_max: usize) -> CoverReport {
    let src = f.source();
    let generates = f.generates_structure();
    let c1 = check_ball_bijectivity(f);
    let c2 = check_simplicial_cover(f, d_max);
    let c3a = check_chain_lifting(f);
    let c3b = check_transverse(f);
    let c3 = c3a.clone().and(c3b.clone());
    let uniq = check_uniqueness(f);
    let c4 = c3a.clone().and(uniq.clone());
    let approx = check_approx_uniqueness(f);
    let complete = Verdict::yes(Witness::Note {
        text: "fibers of a finite space are complete".into(),
    });

    let class = if generates.is_yes() && c4.is_yes() {
        CoverClass::UniformCovering
    } else if generates.is_yes() && c3a.is_yes() && approx.is_yes() {
        CoverClass::GeneralizedUniformCovering
    } else {
        CoverClass::Neither
    };

    let gen = generates.is_yes();
    let uniform = src.is_uniform();
    let mut consistency = Consistency {
        condition1_matches_4: gen.then(|| c1.status == c4.status),
        condition3_matches_4: (gen && uniform).then(|| c3.status == c4.status),
        condition2_matches_4: (gen && uniform && c2.status != crate::verdict::Status::Unknown)
            .then(|| c2.status == c4.status),
        edge_level_matches_chains: None,
        uniqueness_implies_approximate: Some(!uniq.is_yes() || approx.is_yes()),
    };
    if src.len() <= SELF_CHECK_POINTS {
        let depth = 2 * src.len();
        let m = src.scales();
        let lift_ok = (0..m).all(|e| {
            (0..m).all(|fi| lifting_failure(f, &fibers(f), e, fi).is_none() == chain_lifting_by_search(f, e, fi, depth))
        });
        let uniq_ok = (0..m).all(|fi| {
            // uniqueness is approximate uniqueness against the diagonal
            let diag = crate::relation::SymRelation::diagonal("Δ", src.len());
            let chains_unique = product_search_with(f, &diag, fi, depth).is_none();
            chains_unique == uniqueness_failure(f, fi).is_none()
        });
        consistency.edge_level_matches_chains = Some(lift_ok && uniq_ok);
    }

    CoverReport {
        source_scales: src.scale_names(),
        target_scales: f.target().scale_names(),
        generates_structure: generates,
        condition1: c1,
        condition2: c2,
        condition3a: c3a,
        condition3b: c3b,
        condition3: c3,
        uniqueness: uniq,
        condition4: c4,
        approximate_uniqueness: approx,
        complete_fibers: complete,
        class,
        base_relative: f.base_relative(),
        source_uniform: uniform,
        consistency,
    }
}

/// Product search against an arbitrary closeness relation.
fn product_search_with(
    f: &UniformMap,
    close: &crate::relation::SymRelation,
    fi: usize,
    depth: usize,
) -> Option<(usize, usize)> {
    let src = f.source();
    let n = src.len();
    let ff = src.entry(fi);
    let mut seen = vec![false; n * n];
    let mut frontier: Vec<(usize, usize)> = (0..n).map(|x| (x, x)).collect();
    for &(a, b) in &frontier {
        seen[a * n + b] = true;
    }
    for _ in 0..=depth {
        let mut next = Vec::new();
        for &(a, b) in &frontier {
            if !close.contains(a, b) {
                return Some((a, b));
            }
            for a2 in ff.neighbors(a) {
                for b2 in ff.neighbors(b) {
                    if f.apply(a2) == f.apply(b2) && !seen[a2 * n + b2] {
                        seen[a2 * n + b2] = true;
                        next.push((a2, b2));
                    }
                }
            }
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::SymRelation;
    use crate::space::{FiniteUniformSpace, Mode};
    use std::sync::Arc;

    fn cycle(n: usize) -> Arc<FiniteUniformSpace> {
        let e = SymRelation::from_fn("d<=1", n, |x, y| {
            let d = (x + n - y) % n;
            d.min(n - d) <= 1
        });
        Arc::new(FiniteUniformSpace::new((0..n).map(|i| i.to_string()).collect(), vec![e], Mode::Scale, None).unwrap())
    }

    fn path(n: usize) -> Arc<FiniteUniformSpace> {
        let e = SymRelation::from_fn("adj", n, |x, y| x.abs_diff(y) <= 1);
        Arc::new(FiniteUniformSpace::new((0..n).map(|i| i.to_string()).collect(), vec![e], Mode::Scale, None).unwrap())
    }

    #[test]
    fn hexagon_over_triangle_is_a_uniform_cover() {
        let f = UniformMap::new(cycle(6), cycle(3), (0..6).map(|x| x % 3).collect()).unwrap();
        let r = classify_map(&f, 2);
        assert!(r.condition1.is_yes());
        assert!(r.condition3a.is_yes());
        assert!(r.condition3b.is_yes());
        assert!(r.condition4.is_yes());
        assert_eq!(r.class, CoverClass::UniformCovering);
        assert_eq!(r.consistency.edge_level_matches_chains, Some(true));
    }

    #[test]
    fn collapse_of_a_path_is_not_a_cover() {
        let f = UniformMap::new(path(3), path(2), vec![0, 1, 0]).unwrap();
        let r = classify_map(&f, 2);
        assert!(r.generates_structure.is_yes());
        let c1 = r.condition1.counterexample.clone().unwrap();
        assert_eq!(c1.tuple, vec![1, 0, 2]);
        assert!(r.condition4.is_no());
        assert!(r.condition3a.is_yes() && r.condition3b.is_yes());
        let ax = r.approximate_uniqueness.counterexample.clone().unwrap();
        assert_eq!(&ax.tuple[1..], &[0, 2]);
        assert_eq!(r.class, CoverClass::Neither);
    }

    #[test]
    fn identity_is_a_uniform_cover() {
        let f = UniformMap::identity(cycle(7));
        assert_eq!(classify_map(&f, 2).class, CoverClass::UniformCovering);
    }

    #[test]
    fn two_close_points_over_a_point_are_not_transverse() {
        let two = Arc::new(
            FiniteUniformSpace::new(
                vec!["a".into(), "b".into()],
                vec![SymRelation::full("E", 2)],
                Mode::Strict,
                None,
            )
            .unwrap(),
        );
        let pt = Arc::new(
            FiniteUniformSpace::new(vec!["p".into()], vec![SymRelation::full("E", 1)], Mode::Strict, None).unwrap(),
        );
        let f = UniformMap::new(two, pt, vec![0, 0]).unwrap();
        assert!(check_transverse(&f).is_no());
        assert!(check_simplicial_cover(&f, 2).is_no());
    }

    #[test]
    fn counterexample_chains_replay() {
        let f = UniformMap::new(
            cycle(6),
            Arc::new(
                FiniteUniformSpace::new(vec!["p".into()], vec![SymRelation::full("E", 1)], Mode::Strict, None).unwrap(),
            ),
            vec![0; 6],
        )
        .unwrap();
        let v = check_approx_uniqueness(&f);
        let cx = v.counterexample.unwrap();
        let e = f.source().entry(0);
        for c in &cx.chains {
            assert!(c.windows(2).all(|w| e.contains(w[0], w[1])));
        }
        assert_eq!(cx.chains[0][0], cx.chains[1][0]);
        let (a, b) = (*cx.chains[0].last().unwrap(), *cx.chains[1].last().unwrap());
        assert!(!e.contains(a, b));
    }
}
