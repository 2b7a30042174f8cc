use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::actions::classify::{classify_action, ActionReport};
use crate::actions::group::GroupAction;
use crate::actions::quotient::{orbit_space, QuotientResult};
use crate::covering::{classify_map, CoverClass, CoverReport};
use crate::props::{equivalence, implication, PropositionCheck, UNIFORM};
use crate::verdict::{Verdict, Witness};

pub const FAITHFUL: &str = "action is faithful";
pub const HAUSDORFF: &str = "space is Hausdorff";
pub const CHAIN_CONNECTED: &str = "space is chain connected";
pub const SSUC: &str = "action is small scale uniformly continuous";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionTheorems {
    pub action: ActionReport,
    pub projection: CoverReport,
    pub checks: Vec<PropositionCheck>,
}

fn cert(items: &[(&str, &Verdict)]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (k, v) in items {
        map.insert((*k).to_string(), serde_json::to_value(v).expect("verdicts serialize"));
    }
    serde_json::Value::Object(map)
}

/// `(x, y) ∈ E_i` and `p(x) = p(y)` force `x = y`.
fn transverse_at(q: &QuotientResult, i: usize) -> bool {
    let p = q.projection.values();
    q.projection
        .source()
        .entry(i)
        .pairs()
        .all(|(x, y)| x == y || p[x] != p[y])
}

pub fn verify_action_theorems(a: &GroupAction, d_max: usize) -> ActionTheorems {
    let q = orbit_space(a);
    let r = classify_action(a);
    let c = classify_map(&q.projection, d_max);
    let checks = action_checks(a, &q, &r, &c);
    ActionTheorems {
        action: r,
        projection: c,
        checks,
    }
}

pub fn action_checks(a: &GroupAction, q: &QuotientResult, r: &ActionReport, c: &CoverReport) -> Vec<PropositionCheck> {
    let sp = a.space();
    let uniform = sp.is_uniform();
    let cc = r.chain_connected.is_yes();
    let faithful = r.faithful.is_yes();
    let hausdorff = r.hausdorff.is_yes();
    let ssuc = r.small_scale_uniformly_continuous.is_yes();
    let ucm = c.class == CoverClass::UniformCovering;
    let mut out = Vec::new();

    out.push(equivalence(
        "neutral-iff-chain-lifting",
        &[],
        r.neutral.is_yes(),
        c.condition3a.is_yes(),
        || cert(&[("neutral", &r.neutral), ("chain_lifting", &c.condition3a)]),
    ));

    let pd_index = match &r.uniformly_properly_discontinuous.witness {
        Some(Witness::Entourage { index, .. }) => Some(*index),
        _ => None,
    };
    out.push(implication(
        "pd-implies-transverse",
        &[],
        r.uniformly_properly_discontinuous.is_yes(),
        c.condition3b.is_yes() && pd_index.is_some_and(|i| transverse_at(q, i)),
        || {
            cert(&[
                ("pd", &r.uniformly_properly_discontinuous),
                ("transverse", &c.condition3b),
            ])
        },
    ));

    out.push(implication(
        "equicontinuous-implies-neutral",
        &[],
        r.equicontinuous.is_yes(),
        r.neutral.is_yes(),
        || cert(&[("equicontinuous", &r.equicontinuous), ("neutral", &r.neutral)]),
    ));

    out.push(equivalence(
        "equicontinuous-iff-equi-uniform",
        &[],
        r.equicontinuous.is_yes(),
        r.equi_uniform.is_yes(),
        || cert(&[("equicontinuous", &r.equicontinuous), ("equi_uniform", &r.equi_uniform)]),
    ));

    out.push(implication(
        "ssbo-implies-ssue",
        &[(UNIFORM, uniform)],
        r.small_scale_bounded_orbits.is_yes(),
        r.small_scale_uniformly_equicontinuous.is_yes(),
        || {
            cert(&[
                ("ssbo", &r.small_scale_bounded_orbits),
                ("ssue", &r.small_scale_uniformly_equicontinuous),
            ])
        },
    ));

    out.push(implication(
        "ssue-implies-ssuc",
        &[],
        r.small_scale_uniformly_equicontinuous.is_yes(),
        ssuc,
        || {
            cert(&[
                ("ssue", &r.small_scale_uniformly_equicontinuous),
                ("ssuc", &r.small_scale_uniformly_continuous),
            ])
        },
    ));

    out.push(implication(
        "ssbo-implies-approximate-uniqueness",
        &[(UNIFORM, uniform)],
        r.small_scale_bounded_orbits.is_yes(),
        c.approximate_uniqueness.is_yes(),
        || {
            cert(&[
                ("ssbo", &r.small_scale_bounded_orbits),
                ("approximate_uniqueness", &c.approximate_uniqueness),
            ])
        },
    ));

    out.push(implication(
        "ssue-cc-au-implies-ssbo",
        &[(CHAIN_CONNECTED, cc)],
        r.small_scale_uniformly_equicontinuous.is_yes() && c.approximate_uniqueness.is_yes(),
        r.small_scale_bounded_orbits.is_yes(),
        || {
            cert(&[
                ("ssue", &r.small_scale_uniformly_equicontinuous),
                ("approximate_uniqueness", &c.approximate_uniqueness),
                ("ssbo", &r.small_scale_bounded_orbits),
            ])
        },
    ));

    out.push(implication(
        "faithful-hausdorff-ssbo-implies-free",
        &[(FAITHFUL, faithful), (HAUSDORFF, hausdorff)],
        r.small_scale_bounded_orbits.is_yes(),
        r.free.is_yes(),
        || cert(&[("ssbo", &r.small_scale_bounded_orbits), ("free", &r.free)]),
    ));

    let class_cert = || {
        json!({
            "class": c.class,
            "condition4": c.condition4,
            "approximate_uniqueness": c.approximate_uniqueness,
            "neutral": r.neutral,
            "pd": r.uniformly_properly_discontinuous,
        })
    };

    out.push(implication(
        "neutral-pd-implies-uniform-covering",
        &[(UNIFORM, uniform)],
        r.neutral.is_yes() && r.uniformly_properly_discontinuous.is_yes(),
        ucm,
        class_cert,
    ));

    out.push(implication(
        "discrete-implies-uniform-covering",
        &[(UNIFORM, uniform)],
        r.discrete.is_yes(),
        ucm,
        class_cert,
    ));

    out.push(implication(
        "pro-discrete-implies-covering",
        &[(UNIFORM, uniform), (CHAIN_CONNECTED, cc)],
        r.pro_discrete.is_yes(),
        c.class.is_covering(),
        class_cert,
    ));

    out.push(implication(
        "uclp-implies-pd",
        &[
            (UNIFORM, uniform),
            (CHAIN_CONNECTED, cc),
            (FAITHFUL, faithful),
            (SSUC, ssuc),
        ],
        c.uniqueness.is_yes(),
        r.uniformly_properly_discontinuous.is_yes(),
        || {
            cert(&[
                ("uniqueness", &c.uniqueness),
                ("pd", &r.uniformly_properly_discontinuous),
            ])
        },
    ));

    out.push(equivalence(
        "ucm-iff-neutral-and-transverse",
        &[(UNIFORM, uniform)],
        ucm,
        r.neutral.is_yes() && c.condition3b.is_yes(),
        class_cert,
    ));

    out.push(equivalence(
        "ssuc-ucm-iff-neutral-pd",
        &[(UNIFORM, uniform), (CHAIN_CONNECTED, cc), (FAITHFUL, faithful)],
        ssuc && ucm,
        r.neutral.is_yes() && r.uniformly_properly_discontinuous.is_yes(),
        class_cert,
    ));

    let monotone = (1..sp.scales()).find(|&j| !r.g_f[j].iter().all(|g| r.g_f[j - 1].binary_search(g).is_ok()));
    out.push(match monotone {
        None => PropositionCheck::pass("g-f-monotone"),
        Some(j) => PropositionCheck::fail(
            "g-f-monotone",
            format!(
                "G_F at {} is not inside G_F at {}",
                sp.scale_name(j),
                sp.scale_name(j - 1)
            ),
            json!({ "finer": j, "g_f": r.g_f }),
        ),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props::Outcome;
    use crate::relation::SymRelation;
    use crate::space::{FiniteUniformSpace, Mode};
    use std::sync::Arc;

    fn cycle(n: usize, mode: Mode, scales: &[usize]) -> Arc<FiniteUniformSpace> {
        let entries = scales
            .iter()
            .map(|&r| {
                SymRelation::from_fn(format!("d<={r}"), n, |x, y| {
                    let d = (x + n - y) % n;
                    d.min(n - d) <= r
                })
            })
            .collect();
        Arc::new(FiniteUniformSpace::new((0..n).map(|i| i.to_string()).collect(), entries, mode, Some(0)).unwrap())
    }

    fn rotation(n: usize, step: usize) -> Vec<usize> {
        (0..n).map(|x| (x + step) % n).collect()
    }

    fn outcome(t: &ActionTheorems, id: &str) -> Outcome {
        t.checks.iter().find(|c| c.id == id).unwrap().outcome
    }

    #[test]
    fn antipodal_projection_covers() {
        let a = GroupAction::new(cycle(6, Mode::Scale, &[1]), vec![rotation(6, 3)], vec![]).unwrap();
        let t = verify_action_theorems(&a, 2);
        assert_eq!(t.projection.class, CoverClass::UniformCovering);
        assert!(t.checks.iter().all(|c| !c.is_fail()));
    }

    #[test]
    fn full_rotation_has_no_violations() {
        let a = GroupAction::new(cycle(6, Mode::Scale, &[1]), vec![rotation(6, 1)], vec![]).unwrap();
        let t = verify_action_theorems(&a, 2);
        assert!(t.action.neutral.is_yes());
        assert!(t.projection.condition3a.is_yes());
        assert!(!t.action.uniformly_properly_discontinuous.is_yes());
        assert!(!t.projection.condition4.is_yes());
        assert_eq!(t.projection.class, CoverClass::Neither);
        assert!(t.checks.iter().all(|c| !c.is_fail()));
        assert_eq!(outcome(&t, "neutral-pd-implies-uniform-covering"), Outcome::Skipped);
    }

    #[test]
    fn discrete_space_runs_every_check() {
        // an equivalence-relation chain ending in the diagonal
        let n = 6;
        let halves = SymRelation::from_fn("halves", n, |x, y| x / 3 == y / 3);
        let diag = SymRelation::diagonal("Δ", n);
        let sp = Arc::new(
            FiniteUniformSpace::new(
                (0..n).map(|i| i.to_string()).collect(),
                vec![halves, diag],
                Mode::Strict,
                None,
            )
            .unwrap(),
        );
        let swap: Vec<usize> = vec![1, 0, 2, 4, 3, 5];
        let a = GroupAction::new(sp, vec![swap], vec![]).unwrap();
        let t = verify_action_theorems(&a, 2);
        assert!(t.checks.iter().all(|c| !c.is_fail()), "{:#?}", t.checks);
        assert_eq!(outcome(&t, "ssbo-implies-ssue"), Outcome::Pass);
    }
}
