//! Uniform structures on `X^G` and on `G` induced by an action, the
//! evaluation map `φ`, and the checks relating them to the action classifier.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::actions::{ActionReport, GroupAction, QuotientResult};
use crate::covering::{CoverClass, CoverReport};
use crate::error::{Error, Result};
use crate::props::{equivalence, implication, PropositionCheck, UNIFORM};
use crate::relation::SymRelation;
use crate::space::coarsest_working;
use crate::verdict::{Counterexample, TableRow, Verdict, Witness};

/// Largest `|X|^|G|` for which the full function space is used.
pub const FULL_CARRIER_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnKind {
    Uniform,
    Pointwise,
    SmallScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarrierSelector {
    /// The full space when within the cap, else the image of `φ`.
    Auto,
    Image,
    Full,
}

/// Functions `G → X`, stored as value lists indexed by group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    /// `φ(x)` for each point `x`, in point order.
    Image(Vec<Vec<usize>>),
    /// All of `X^G`, decoded on demand: coordinate `g` is digit `g` base `points`.
    Full { points: usize, order: usize },
}

impl Carrier {
    pub fn len(&self) -> usize {
        match self {
            Carrier::Image(f) => f.len(),
            Carrier::Full { points, order } => points.pow(*order as u32),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Carrier::Full { .. })
    }

    pub fn value(&self, u: usize, g: usize) -> usize {
        match self {
            Carrier::Image(f) => f[u][g],
            Carrier::Full { points, .. } => (u / points.pow(g as u32)) % points,
        }
    }

    pub fn function(&self, u: usize) -> Vec<usize> {
        match self {
            Carrier::Image(f) => f[u].clone(),
            Carrier::Full { order, .. } => (0..*order).map(|g| self.value(u, g)).collect(),
        }
    }

    pub fn index_of(&self, values: &[usize]) -> Option<usize> {
        match self {
            Carrier::Image(f) => f.iter().position(|v| v == values),
            Carrier::Full { points, .. } => Some(values.iter().rev().fold(0, |acc, &v| acc * points + v)),
        }
    }
}

/// `{(u, v) : (u(g), v(g)) ∈ E_scale for all g ∈ coords}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnEntry {
    pub name: String,
    pub scale: usize,
    pub coords: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FnSpaceStructure {
    pub kind: FnKind,
    pub carrier: Carrier,
    pub entries: Vec<FnEntry>,
    space: std::sync::Arc<crate::space::FiniteUniformSpace>,
}

pub fn build_fn_structure(a: &GroupAction, kind: FnKind, carrier: CarrierSelector) -> Result<FnSpaceStructure> {
    let sp = a.space();
    let (n, order) = (sp.len(), a.order());
    let size = (n as f64).powi(order as i32);
    let full_ok = size <= FULL_CARRIER_CAP as f64;
    let carrier = match carrier {
        CarrierSelector::Full if !full_ok => {
            return Err(Error::CarrierCap {
                size,
                cap: FULL_CARRIER_CAP,
            })
        }
        CarrierSelector::Full => Carrier::Full { points: n, order },
        CarrierSelector::Auto if full_ok => Carrier::Full { points: n, order },
        _ => Carrier::Image((0..n).map(|x| (0..order).map(|g| a.act(g, x)).collect()).collect()),
    };
    let all: Vec<usize> = (0..order).collect();
    let mut entries = Vec::new();
    for i in 0..sp.scales() {
        let name = sp.scale_name(i);
        match kind {
            FnKind::Uniform => entries.push(FnEntry {
                name: format!("{name}*"),
                scale: i,
                coords: all.clone(),
            }),
            FnKind::Pointwise => {
                entries.push(FnEntry {
                    name: format!("{name}*[G]"),
                    scale: i,
                    coords: all.clone(),
                });
                for g in 0..order {
                    entries.push(FnEntry {
                        name: format!("{name}*[{}]", a.word_string(g)),
                        scale: i,
                        coords: vec![g],
                    });
                }
            }
            FnKind::SmallScale => entries.push(FnEntry {
                name: format!("{name}*ss"),
                scale: i,
                coords: a.g_f(i),
            }),
        }
    }
    Ok(FnSpaceStructure {
        kind,
        carrier,
        entries,
        space: sp.clone(),
    })
}

impl FnSpaceStructure {
    pub fn contains(&self, k: usize, u: usize, v: usize) -> bool {
        let e = &self.entries[k];
        let rel = self.space.entry(e.scale);
        e.coords
            .iter()
            .all(|&g| rel.contains(self.carrier.value(u, g), self.carrier.value(v, g)))
    }

    /// Entry `a` is contained in entry `b`.
    pub fn entry_subset(&self, a: usize, b: usize) -> bool {
        let (ea, eb) = (&self.entries[a], &self.entries[b]);
        match &self.carrier {
            Carrier::Full { .. } => {
                let (ra, rb) = (self.space.entry(ea.scale), self.space.entry(eb.scale));
                let inner = ra.is_subset(rb);
                eb.coords
                    .iter()
                    .all(|g| rb.is_full() || (inner && ea.coords.contains(g)))
            }
            Carrier::Image(_) => {
                let n = self.carrier.len();
                (0..n).all(|u| (0..n).all(|v| !self.contains(a, u, v) || self.contains(b, u, v)))
            }
        }
    }

    pub fn entry_names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }
}

/// `φ(x)(g) = g·x` as carrier indices.
pub fn phi(a: &GroupAction, s: &FnSpaceStructure) -> Vec<usize> {
    (0..a.space().len())
        .map(|x| {
            let f: Vec<usize> = (0..a.order()).map(|g| a.act(g, x)).collect();
            s.carrier.index_of(&f).expect("carrier contains the image of phi")
        })
        .collect()
}

/// `φ` is uniformly continuous: every structure entry pulls back to an entourage.
pub fn phi_continuity(a: &GroupAction, s: &FnSpaceStructure) -> Verdict {
    let sp = a.space();
    let p = phi(a, s);
    let works = |k: usize, f: usize| sp.entry(f).pairs().all(|(x, y)| s.contains(k, p[x], p[y]));
    let mut rows = Vec::new();
    for (k, entry) in s.entries.iter().enumerate() {
        match coarsest_working(sp.scales(), |f| works(k, f)) {
            Some(f) => rows.push(TableRow {
                e: entry.name.clone(),
                f: sp.scale_name(f).to_string(),
                e_index: k,
                f_index: f,
            }),
            None => {
                let (x, y) = sp
                    .entry(sp.finest())
                    .pairs()
                    .find(|&(x, y)| !s.contains(k, p[x], p[y]))
                    .expect("failure at the finest entry");
                return Verdict::no(Counterexample::new(
                    format!(
                        "({x}, {y}) ∈ {} but (φ({x}), φ({y})) ∉ {}",
                        sp.scale_name(sp.finest()),
                        entry.name
                    ),
                    vec![k, x, y],
                ))
                .relative_to(sp.base_relative());
            }
        }
    }
    Verdict::yes(Witness::Table { rows }).relative_to(sp.base_relative())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    UniformConvergence,
    SmallScale,
}

/// One entry per base entry of `X`, as relations on group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupUniformStructure {
    pub kind: GroupKind,
    pub entries: Vec<SymRelation>,
}

/// `(E*, Ē)`: `(g, h) ∈ E*` iff `(g·x, h·x) ∈ E` for all `x`; `(g, h) ∈ Ē` iff `g·h⁻¹ ∈ G_E`.
pub fn build_group_structures(a: &GroupAction) -> (GroupUniformStructure, GroupUniformStructure) {
    let sp = a.space();
    let order = a.order();
    let mut star = Vec::new();
    let mut bar = Vec::new();
    for i in 0..sp.scales() {
        let e = sp.entry(i);
        let name = sp.scale_name(i);
        star.push(SymRelation::from_fn(format!("{name}*"), order, |g, h| {
            (0..sp.len()).all(|x| e.contains(a.act(g, x), a.act(h, x)))
        }));
        let mut inside = vec![false; order];
        for k in a.g_f(i) {
            inside[k] = true;
        }
        bar.push(SymRelation::from_fn(format!("{name}‾"), order, |g, h| {
            inside[a.mul(g, a.inv(h))]
        }));
    }
    (
        GroupUniformStructure {
            kind: GroupKind::UniformConvergence,
            entries: star,
        },
        GroupUniformStructure {
            kind: GroupKind::SmallScale,
            entries: bar,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Finer,
    Coarser,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureComparison {
    pub relation: Relation,
    /// For each entry of `B`, an entry of `A` inside it.
    pub a_refines_b: Vec<Option<usize>>,
    /// For each entry of `A`, an entry of `B` inside it.
    pub b_refines_a: Vec<Option<usize>>,
}

impl StructureComparison {
    pub fn is_equal(&self) -> bool {
        self.relation == Relation::Equal
    }
}

fn refinement(count_a: usize, count_b: usize, subset: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    // finest-first scan, coarsest containing entry wins
    (0..count_b)
        .map(|b| (0..count_a).rev().filter(|&a| subset(a, b)).last())
        .collect()
}

fn comparison(a_refines_b: Vec<Option<usize>>, b_refines_a: Vec<Option<usize>>) -> StructureComparison {
    let ab = a_refines_b.iter().all(Option::is_some);
    let ba = b_refines_a.iter().all(Option::is_some);
    let relation = match (ab, ba) {
        (true, true) => Relation::Equal,
        (true, false) => Relation::Finer,
        (false, true) => Relation::Coarser,
        (false, false) => Relation::Incomparable,
    };
    StructureComparison {
        relation,
        a_refines_b,
        b_refines_a,
    }
}

/// Mutual refinement of two structures on `G`.
pub fn compare(a: &GroupUniformStructure, b: &GroupUniformStructure) -> Result<StructureComparison> {
    let (na, nb) = (a.entries[0].size(), b.entries[0].size());
    if na != nb {
        return Err(Error::CarrierMismatch(na, nb));
    }
    let (ea, eb) = (&a.entries, &b.entries);
    Ok(comparison(
        refinement(ea.len(), eb.len(), |i, j| ea[i].is_subset(&eb[j])),
        refinement(eb.len(), ea.len(), |j, i| eb[j].is_subset(&ea[i])),
    ))
}

/// Mutual refinement of two structures on the same function-space carrier.
pub fn compare_fn(a: &FnSpaceStructure, b: &FnSpaceStructure) -> Result<StructureComparison> {
    if a.carrier != b.carrier {
        return Err(Error::CarrierMismatch(a.carrier.len(), b.carrier.len()));
    }
    // entries of both live on one carrier; fold them into one list
    let mut joint = a.clone();
    joint.entries.extend(b.entries.iter().cloned());
    let off = a.entries.len();
    Ok(comparison(
        refinement(a.entries.len(), b.entries.len(), |i, j| joint.entry_subset(i, off + j)),
        refinement(b.entries.len(), a.entries.len(), |j, i| joint.entry_subset(off + j, i)),
    ))
}

/// Some entry is the diagonal.
pub fn is_discrete(s: &GroupUniformStructure) -> Verdict {
    match s.entries.iter().position(|e| e.is_diagonal()) {
        Some(i) => Verdict::yes(Witness::Entourage {
            name: s.entries[i].name().to_string(),
            index: i,
        }),
        None => {
            let last = s.entries.last().expect("structures are nonempty");
            let (g, h) = last.pairs().find(|&(g, h)| g != h).expect("not the diagonal");
            Verdict::no(Counterexample::new(
                format!("({g}, {h}) lies in every entry, including {}", last.name()),
                vec![g, h],
            ))
        }
    }
}

/// Everything the structures module reports for one action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuresReport {
    pub carrier_points: usize,
    pub carrier_is_full: bool,
    pub fn_entries: Vec<(FnKind, Vec<String>)>,
    pub phi_pointwise: Verdict,
    pub phi_uniform: Verdict,
    pub phi_small_scale: Verdict,
    pub uniform_vs_pointwise: StructureComparison,
    pub uniform_vs_small_scale: StructureComparison,
    pub group_star: Vec<RelationDigest>,
    pub group_bar: Vec<RelationDigest>,
    pub star_vs_bar: StructureComparison,
    pub star_discrete: Verdict,
    pub bar_discrete: Verdict,
    pub star_inside_bar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDigest {
    pub name: String,
    pub pairs: Vec<(usize, usize)>,
}

impl From<&SymRelation> for RelationDigest {
    fn from(r: &SymRelation) -> Self {
        RelationDigest {
            name: r.name().to_string(),
            pairs: r.upper_pairs().filter(|(x, y)| x != y).collect(),
        }
    }
}

pub fn structures_report(a: &GroupAction, carrier: CarrierSelector) -> Result<StructuresReport> {
    let uni = build_fn_structure(a, FnKind::Uniform, carrier)?;
    let pw = build_fn_structure(a, FnKind::Pointwise, carrier)?;
    let ss = build_fn_structure(a, FnKind::SmallScale, carrier)?;
    let (star, bar) = build_group_structures(a);
    let star_inside_bar = star.entries.iter().zip(&bar.entries).all(|(s, b)| s.is_subset(b));
    Ok(StructuresReport {
        carrier_points: uni.carrier.len(),
        carrier_is_full: uni.carrier.is_full(),
        fn_entries: vec![
            (FnKind::Uniform, uni.entry_names()),
            (FnKind::Pointwise, pw.entry_names()),
            (FnKind::SmallScale, ss.entry_names()),
        ],
        phi_pointwise: phi_continuity(a, &pw),
        phi_uniform: phi_continuity(a, &uni),
        phi_small_scale: phi_continuity(a, &ss),
        uniform_vs_pointwise: compare_fn(&uni, &pw)?,
        uniform_vs_small_scale: compare_fn(&uni, &ss)?,
        group_star: star.entries.iter().map(RelationDigest::from).collect(),
        group_bar: bar.entries.iter().map(RelationDigest::from).collect(),
        star_vs_bar: compare(&star, &bar)?,
        star_discrete: is_discrete(&star),
        bar_discrete: is_discrete(&bar),
        star_inside_bar,
    })
}

pub const NEUTRAL: &str = "action is neutral";
pub const FREE: &str = "action is free";
pub const SSUE: &str = "action is small scale uniformly equicontinuous";
pub const CHAIN_CONNECTED: &str = "space is chain connected";

/// Function-space and group-structure checks for one action. Uses the image
/// carrier, which is all the statements about `φ` probe.
pub fn convergence_checks(
    a: &GroupAction,
    _q: &QuotientResult,
    r: &ActionReport,
    c: &CoverReport,
) -> Vec<PropositionCheck> {
    let uni = build_fn_structure(a, FnKind::Uniform, CarrierSelector::Image).expect("image carrier");
    let pw = build_fn_structure(a, FnKind::Pointwise, CarrierSelector::Image).expect("image carrier");
    let ss = build_fn_structure(a, FnKind::SmallScale, CarrierSelector::Image).expect("image carrier");
    let (phi_pw, phi_uni, phi_ss) = (phi_continuity(a, &pw), phi_continuity(a, &uni), phi_continuity(a, &ss));
    let (star, bar) = build_group_structures(a);
    let cmp = compare(&star, &bar).expect("same group");
    let discrete = is_discrete(&star);
    let neutral = r.neutral.is_yes();
    let free = r.free.is_yes();
    let ssue = r.small_scale_uniformly_equicontinuous.is_yes();
    let cc = r.chain_connected.is_yes();
    let uniform = a.space().is_uniform();
    let ucm = c.class == CoverClass::UniformCovering;
    let v = |v: &Verdict| serde_json::to_value(v).expect("verdicts serialize");
    let mut out = vec![
        equivalence(
            "phi-pointwise-iff-uniform-equivalences",
            &[],
            phi_pw.is_yes(),
            r.by_uniform_equivalences.is_yes(),
            || json!({ "phi": v(&phi_pw), "by_uniform_equivalences": v(&r.by_uniform_equivalences) }),
        ),
        equivalence(
            "phi-uniform-iff-equicontinuous",
            &[],
            phi_uni.is_yes(),
            r.equicontinuous.is_yes(),
            || json!({ "phi": v(&phi_uni), "equicontinuous": v(&r.equicontinuous) }),
        ),
        equivalence(
            "phi-small-scale-iff-ssue",
            &[],
            phi_ss.is_yes(),
            ssue,
            || json!({ "phi": v(&phi_ss), "ssue": v(&r.small_scale_uniformly_equicontinuous) }),
        ),
    ];
    let bad = star.entries.iter().zip(&bar.entries).position(|(s, b)| !s.is_subset(b));
    out.push(match bad {
        None => PropositionCheck::pass("star-inside-bar"),
        Some(i) => PropositionCheck::fail(
            "star-inside-bar",
            format!("{} ⊄ {}", star.entries[i].name(), bar.entries[i].name()),
            json!({ "entry": i }),
        ),
    });
    let class_cert = || {
        json!({
            "class": c.class,
            "condition4": v(&c.condition4),
            "approximate_uniqueness": v(&c.approximate_uniqueness),
            "star_discrete": v(&discrete),
            "star_vs_bar": cmp,
        })
    };
    out.push(implication(
        "neutral-free-ucm-implies-discrete",
        &[(NEUTRAL, neutral), (FREE, free)],
        ucm,
        discrete.is_yes(),
        class_cert,
    ));
    out.push(implication(
        "neutral-free-discrete-implies-ucm",
        &[(UNIFORM, uniform), (NEUTRAL, neutral), (FREE, free)],
        discrete.is_yes(),
        ucm,
        class_cert,
    ));
    out.push(implication(
        "ssue-neutral-cc-cover-implies-equal-structures",
        &[(SSUE, ssue), (NEUTRAL, neutral), (CHAIN_CONNECTED, cc)],
        c.class.is_covering(),
        cmp.is_equal(),
        class_cert,
    ));
    out.push(implication(
        "ssue-neutral-cc-equal-structures-implies-cover",
        &[
            (UNIFORM, uniform),
            (SSUE, ssue),
            (NEUTRAL, neutral),
            (CHAIN_CONNECTED, cc),
        ],
        cmp.is_equal(),
        c.class.is_covering(),
        class_cert,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{FiniteUniformSpace, Mode};
    use std::sync::Arc;

    fn c6() -> Arc<FiniteUniformSpace> {
        let e = SymRelation::from_fn("d<=1", 6, |x, y| {
            let d = (x + 6 - y) % 6;
            d.min(6 - d) <= 1
        });
        Arc::new(
            FiniteUniformSpace::new((0..6).map(|i| i.to_string()).collect(), vec![e], Mode::Scale, Some(0)).unwrap(),
        )
    }

    fn rotation(step: usize) -> GroupAction {
        GroupAction::new(c6(), vec![(0..6).map(|x| (x + step) % 6).collect()], vec![]).unwrap()
    }

    #[test]
    fn carrier_decoding_round_trips() {
        let c = Carrier::Full { points: 6, order: 2 };
        assert_eq!(c.len(), 36);
        for u in 0..36 {
            assert_eq!(c.index_of(&c.function(u)), Some(u));
        }
    }

    #[test]
    fn antipodal_small_scale_entry_is_strictly_coarser() {
        let a = rotation(3);
        let uni = build_fn_structure(&a, FnKind::Uniform, CarrierSelector::Full).unwrap();
        let ss = build_fn_structure(&a, FnKind::SmallScale, CarrierSelector::Full).unwrap();
        assert_eq!(ss.entries[0].coords, vec![0]);
        let cmp = compare_fn(&uni, &ss).unwrap();
        assert_eq!(cmp.relation, Relation::Finer);
    }

    #[test]
    fn finite_group_uniform_equals_pointwise() {
        let a = rotation(2);
        let uni = build_fn_structure(&a, FnKind::Uniform, CarrierSelector::Full).unwrap();
        let pw = build_fn_structure(&a, FnKind::Pointwise, CarrierSelector::Full).unwrap();
        assert!(compare_fn(&uni, &pw).unwrap().is_equal());
    }

    #[test]
    fn rotation_structures_on_the_group() {
        let a = rotation(1);
        let (star, bar) = build_group_structures(&a);
        assert!(star.entries[0].contains(0, 1));
        assert!(is_discrete(&star).is_no());
        assert!(star.entries[0].is_subset(&bar.entries[0]));
        let a = rotation(3);
        let (star, bar) = build_group_structures(&a);
        assert!(is_discrete(&star).is_yes());
        assert!(bar.entries[0].is_diagonal());
    }

    #[test]
    fn isometric_rotation_has_continuous_phi() {
        let a = rotation(1);
        let uni = build_fn_structure(&a, FnKind::Uniform, CarrierSelector::Auto).unwrap();
        assert!(phi_continuity(&a, &uni).is_yes());
    }

    #[test]
    fn full_carrier_over_cap_is_refused() {
        let sp = c6();
        let gens = vec![
            (0..6).map(|x| (x + 1) % 6).collect(),
            (0..6).map(|x| (6 - x) % 6).collect(),
        ];
        let a = GroupAction::new(sp, gens, vec![]).unwrap();
        assert!(matches!(
            build_fn_structure(&a, FnKind::Uniform, CarrierSelector::Full),
            Err(Error::CarrierCap { .. })
        ));
        assert!(!build_fn_structure(&a, FnKind::Uniform, CarrierSelector::Auto)
            .unwrap()
            .carrier
            .is_full());
    }

    #[test]
    fn compare_is_reflexive() {
        let (star, _) = build_group_structures(&rotation(2));
        assert!(compare(&star, &star).unwrap().is_equal());
    }
}
