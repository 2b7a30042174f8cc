use serde::{Deserialize, Serialize};

use crate::actions::group::{maps_into, GroupAction};
use crate::space::coarsest_working;
use crate::verdict::{Counterexample, TableRow, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub group_order: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub collapsed_generators: Vec<String>,
    pub neutral: Verdict,
    pub uniformly_properly_discontinuous: Verdict,
    pub equicontinuous: Verdict,
    pub equi_uniform: Verdict,
    pub small_scale_uniformly_continuous: Verdict,
    pub small_scale_uniformly_equicontinuous: Verdict,
    pub small_scale_bounded_orbits: Verdict,
    pub free: Verdict,
    pub faithful: Verdict,
    pub discrete: Verdict,
    pub pro_discrete: Verdict,
    pub hausdorff: Verdict,
    pub chain_connected: Verdict,
    pub by_uniform_equivalences: Verdict,
    /// `S_F` and `G_F` per base entry, as element indices.
    pub s_f: Vec<Vec<usize>>,
    pub g_f: Vec<Vec<usize>>,
    pub base_relative: bool,
}

fn row(a: &GroupAction, e: usize, f: usize) -> TableRow {
    TableRow {
        e: a.space().scale_name(e).to_string(),
        f: a.space().scale_name(f).to_string(),
        e_index: e,
        f_index: f,
    }
}

/// `∀E ∃F` over base entries with the coarsest `F`; on failure the
/// counterexample is built at the finest `F`.
fn forall_exists(
    a: &GroupAction,
    mut works: impl FnMut(usize, usize) -> bool,
    mut explain: impl FnMut(usize, usize) -> Counterexample,
) -> Verdict {
    let m = a.space().scales();
    let mut rows = Vec::with_capacity(m);
    for e in 0..m {
        match coarsest_working(m, |j| works(e, j)) {
            Some(j) => rows.push(row(a, e, j)),
            None => return Verdict::no(explain(e, a.space().finest())),
        }
    }
    Verdict::yes(Witness::Table { rows })
}

/// Orbits hit by each ball, as bit rows over orbit ids.
fn orbit_hits(a: &GroupAction, orbit: &[usize], i: usize) -> Vec<Vec<bool>> {
    let count = orbit.iter().max().map_or(0, |m| m + 1);
    let e = a.space().entry(i);
    (0..a.space().len())
        .map(|x| {
            let mut hit = vec![false; count];
            for y in e.neighbors(x) {
                hit[orbit[y]] = true;
            }
            hit
        })
        .collect()
}

/// First `(x, y)` with `ball_F(x) ∩ Gy ≠ ∅` but `ball_E(y) ∩ Gx = ∅`.
pub(crate) fn neutral_failure(a: &GroupAction, orbit: &[usize], e: usize, f: usize) -> Option<(usize, usize)> {
    let hf = orbit_hits(a, orbit, f);
    let he = orbit_hits(a, orbit, e);
    let n = a.space().len();
    for x in 0..n {
        for y in 0..n {
            if hf[x][orbit[y]] && !he[y][orbit[x]] {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn check_neutral(a: &GroupAction) -> Verdict {
    let orbit = a.orbits();
    forall_exists(
        a,
        |e, f| neutral_failure(a, &orbit, e, f).is_none(),
        |e, f| {
            let (x, y) = neutral_failure(a, &orbit, e, f).unwrap();
            let ff = a.space().entry(f);
            let h = (0..a.order()).find(|&h| ff.contains(x, a.act(h, y))).unwrap();
            Counterexample::new(
                format!(
                    "for E = {}: ({x}, {}·{y}) ∈ {} but no g has (g·{x}, {y}) ∈ E",
                    a.space().scale_name(e),
                    a.word_string(h),
                    a.space().scale_name(f)
                ),
                vec![e, x, h, y],
            )
        },
    )
}

fn pd_failure(a: &GroupAction, i: usize) -> Option<(usize, usize)> {
    let e = a.space().entry(i);
    (1..a.order()).find_map(|g| {
        (0..a.space().len())
            .find(|&x| e.contains(x, a.act(g, x)))
            .map(|x| (x, g))
    })
}

pub fn check_properly_discontinuous(a: &GroupAction) -> Verdict {
    let sp = a.space();
    match coarsest_working(sp.scales(), |i| pd_failure(a, i).is_none()) {
        Some(i) => Verdict::yes(Witness::Entourage {
            name: sp.scale_name(i).to_string(),
            index: i,
        }),
        None => {
            let (x, g) = pd_failure(a, sp.finest()).unwrap();
            Verdict::no(Counterexample::new(
                format!(
                    "({x}, {}·{x}) = ({x}, {}) ∈ {} with {} ≠ 1",
                    a.word_string(g),
                    a.act(g, x),
                    sp.scale_name(sp.finest()),
                    a.word_string(g)
                ),
                vec![x, g],
            ))
        }
    }
}

/// `g(E_f) ⊆ E_e` for every `g` in `set`; returns the first failing element and pair.
fn uniform_failure(a: &GroupAction, set: &[usize], e: usize, f: usize) -> Option<(usize, usize, usize)> {
    let (ee, ff) = (a.space().entry(e), a.space().entry(f));
    for &g in set {
        if let Some((x, y)) = ff.pairs().find(|&(x, y)| !ee.contains(a.act(g, x), a.act(g, y))) {
            return Some((g, x, y));
        }
    }
    None
}

fn equi_counterexample(a: &GroupAction, set: &[usize], e: usize, f: usize, what: &str) -> Counterexample {
    let (g, x, y) = uniform_failure(a, set, e, f).unwrap();
    Counterexample::new(
        format!(
            "{what}: for E = {}, ({x}, {y}) ∈ {} but ({}·{x}, {}·{y}) ∉ E",
            a.space().scale_name(e),
            a.space().scale_name(f),
            a.word_string(g),
            a.word_string(g)
        ),
        vec![e, g, x, y],
    )
}

pub fn check_equicontinuous(a: &GroupAction) -> Verdict {
    let all: Vec<usize> = (0..a.order()).collect();
    forall_exists(
        a,
        |e, f| uniform_failure(a, &all, e, f).is_none(),
        |e, f| equi_counterexample(a, &all, e, f, "not equicontinuous"),
    )
}

/// Some base (here: the finest entry, which every base contains) consists of
/// `G`-invariant entourages. The witness lists every invariant base entry.
pub fn check_equi_uniform(a: &GroupAction) -> Verdict {
    let sp = a.space();
    let invariant: Vec<usize> = (0..sp.scales())
        .filter(|&i| (0..a.order()).all(|g| maps_into(sp.entry(i), a.element(g), sp.entry(i))))
        .collect();
    let fin = sp.finest();
    if invariant.contains(&fin) {
        Verdict::yes(Witness::Scales {
            names: invariant.iter().map(|&i| sp.scale_name(i).to_string()).collect(),
            indices: invariant,
        })
    } else {
        let all: Vec<usize> = (0..a.order()).collect();
        Verdict::no(equi_counterexample(a, &all, fin, fin, "finest entry is not invariant"))
    }
}

pub fn check_ssuc(a: &GroupAction, g_f: &[Vec<usize>]) -> Verdict {
    // g⁻¹(E) is an entourage iff it contains the finest entry
    let fin = a.space().finest();
    forall_exists(
        a,
        |e, f| uniform_failure(a, &g_f[f], e, fin).is_none(),
        |e, f| {
            let mut cx = equi_counterexample(a, &g_f[f], e, fin, "g⁻¹(E) is not an entourage for some g in G_F");
            cx.tuple.insert(1, f);
            cx
        },
    )
}

pub fn check_ssue(a: &GroupAction, g_f: &[Vec<usize>]) -> Verdict {
    forall_exists(
        a,
        |e, f| uniform_failure(a, &g_f[f], e, f).is_none(),
        |e, f| equi_counterexample(a, &g_f[f], e, f, "F ⊄ g⁻¹(E) for some g in G_F"),
    )
}

fn orbit_bound_failure(a: &GroupAction, set: &[usize], e: usize) -> Option<(usize, usize)> {
    let ee = a.space().entry(e);
    for &g in set {
        if let Some(x) = (0..a.space().len()).find(|&x| !ee.contains(x, a.act(g, x))) {
            return Some((x, g));
        }
    }
    None
}

pub fn check_ssbo(a: &GroupAction, g_f: &[Vec<usize>]) -> Verdict {
    forall_exists(
        a,
        |e, f| orbit_bound_failure(a, &g_f[f], e).is_none(),
        |e, f| {
            let (x, g) = orbit_bound_failure(a, &g_f[f], e).unwrap();
            Counterexample::new(
                format!(
                    "for E = {}: {} ∈ G_F (F = {}) moves {x} to {}, outside E",
                    a.space().scale_name(e),
                    a.word_string(g),
                    a.space().scale_name(f),
                    a.act(g, x)
                ),
                vec![e, g, x],
            )
        },
    )
}

pub fn check_free(a: &GroupAction) -> Verdict {
    for g in 1..a.order() {
        if let Some(x) = (0..a.space().len()).find(|&x| a.act(g, x) == x) {
            return Verdict::no(Counterexample::new(
                format!("{} fixes {x}", a.word_string(g)),
                vec![x, g],
            ));
        }
    }
    Verdict::yes(Witness::Elements { elements: vec![0] })
}

pub fn classify_action(a: &GroupAction) -> ActionReport {
    let sp = a.space();
    let rel = sp.base_relative();
    let s_f: Vec<Vec<usize>> = (0..sp.scales()).map(|i| a.s_f(i)).collect();
    let g_f: Vec<Vec<usize>> = s_f.iter().map(|s| a.generated(s)).collect();
    let neutral = check_neutral(a);
    let pd = check_properly_discontinuous(a);
    let equi = check_equicontinuous(a);
    let equi_uniform = check_equi_uniform(a);
    let ssuc = check_ssuc(a, &g_f);
    let ssue = check_ssue(a, &g_f);
    let ssbo = check_ssbo(a, &g_f);
    let free = check_free(a);
    let faithful = Verdict::yes(Witness::Note {
        text: if a.collapsed().is_empty() {
            "elements are stored as distinct permutations".into()
        } else {
            format!("collapsed generators quotiented out: {}", a.collapsed().join(", "))
        },
    });
    let discrete = equi.clone().and(pd.clone());
    let pro_discrete = equi.clone().and(ssbo.clone());
    let hausdorff = if sp.is_hausdorff() {
        Verdict::yes(Witness::Entourage {
            name: sp.scale_name(sp.finest()).to_string(),
            index: sp.finest(),
        })
    } else {
        let (x, y) = sp.entry(sp.finest()).pairs().find(|&(x, y)| x != y).unwrap();
        Verdict::no(Counterexample::new(
            format!("({x}, {y}) lies in every base entry"),
            vec![x, y],
        ))
    };
    let by_ue = match (0..a.order()).find(|&g| !a.is_uniformly_continuous(g)) {
        None => Verdict::yes(Witness::Elements {
            elements: (0..a.order()).collect(),
        }),
        Some(g) => {
            let fin = sp.finest();
            Verdict::no(equi_counterexample(a, &[g], fin, fin, "not a uniform equivalence"))
        }
    };
    let tag = |v: Verdict| v.relative_to(rel);
    ActionReport {
        group_order: a.order(),
        generators: a.generator_names().to_vec(),
        collapsed_generators: a.collapsed().to_vec(),
        neutral: tag(neutral),
        uniformly_properly_discontinuous: tag(pd),
        equicontinuous: tag(equi),
        equi_uniform: tag(equi_uniform),
        small_scale_uniformly_continuous: tag(ssuc),
        small_scale_uniformly_equicontinuous: tag(ssue),
        small_scale_bounded_orbits: tag(ssbo),
        free,
        faithful,
        discrete: tag(discrete),
        pro_discrete: tag(pro_discrete),
        hausdorff: tag(hausdorff),
        chain_connected: sp.is_chain_connected(),
        by_uniform_equivalences: tag(by_ue),
        s_f,
        g_f,
        base_relative: rel,
    }
}
