//! Batch verification: every cross-checked proposition of the covering,
//! action and convergence modules, evaluated over a list of instances.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::actions::{action_checks, classify_action, orbit_space, ActionReport, GroupAction};
use crate::convergence::convergence_checks;
use crate::covering::{classify_map, CoverClass, CoverReport, SELF_CHECK_POINTS};
use crate::generate::{generate, Bounds, Instance, InstanceSpec};
use crate::genpaths::verify_constant_gp;
use crate::map::UniformMap;
use crate::par::{self, Parallelism};
use crate::props::{Outcome, PropositionCheck, UNIFORM};
use crate::space::{FiniteUniformSpace, Mode};
use crate::verdict::Status;

pub const GENERATES: &str = "map generates the target structure";
pub const CONDITION2_COMPLETES: &str = "condition 2 completed";
pub const SMALL_SOURCE: &str = "source has at most 8 points";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    #[default]
    All,
    Covering,
    Actions,
    Convergence,
}

impl SuiteKind {
    fn covering(self) -> bool {
        matches!(self, SuiteKind::All | SuiteKind::Covering)
    }

    fn actions(self) -> bool {
        matches!(self, SuiteKind::All | SuiteKind::Actions)
    }

    fn convergence(self) -> bool {
        matches!(self, SuiteKind::All | SuiteKind::Convergence)
    }
}

impl FromStr for SuiteKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(SuiteKind::All),
            "covering" => Ok(SuiteKind::Covering),
            "actions" => Ok(SuiteKind::Actions),
            "convergence" => Ok(SuiteKind::Convergence),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub kind: SuiteKind,
    pub d_max: usize,
    pub bounds: Bounds,
    pub parallelism: Parallelism,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            kind: SuiteKind::All,
            d_max: 2,
            bounds: Bounds::default(),
            parallelism: Parallelism::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionCounts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub skip_reasons: BTreeMap<String, usize>,
}

impl PropositionCounts {
    pub fn total(&self) -> usize {
        self.pass + self.fail + self.skipped
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDigest {
    pub generates_structure: Status,
    pub condition1: Status,
    pub condition2: Status,
    pub condition3a: Status,
    pub condition3b: Status,
    pub condition4: Status,
    pub approximate_uniqueness: Status,
    pub class: CoverClass,
}

impl From<&CoverReport> for CoverDigest {
    fn from(c: &CoverReport) -> Self {
        CoverDigest {
            generates_structure: c.generates_structure.status,
            condition1: c.condition1.status,
            condition2: c.condition2.status,
            condition3a: c.condition3a.status,
            condition3b: c.condition3b.status,
            condition4: c.condition4.status,
            approximate_uniqueness: c.approximate_uniqueness.status,
            class: c.class,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDigest {
    pub group_order: usize,
    pub neutral: Status,
    pub uniformly_properly_discontinuous: Status,
    pub equicontinuous: Status,
    pub small_scale_uniformly_continuous: Status,
    pub small_scale_uniformly_equicontinuous: Status,
    pub small_scale_bounded_orbits: Status,
    pub free: Status,
    pub discrete: Status,
    pub pro_discrete: Status,
    pub chain_connected: Status,
    pub hausdorff: Status,
}

impl From<&ActionReport> for ActionDigest {
    fn from(r: &ActionReport) -> Self {
        ActionDigest {
            group_order: r.group_order,
            neutral: r.neutral.status,
            uniformly_properly_discontinuous: r.uniformly_properly_discontinuous.status,
            equicontinuous: r.equicontinuous.status,
            small_scale_uniformly_continuous: r.small_scale_uniformly_continuous.status,
            small_scale_uniformly_equicontinuous: r.small_scale_uniformly_equicontinuous.status,
            small_scale_bounded_orbits: r.small_scale_bounded_orbits.status,
            free: r.free.status,
            discrete: r.discrete.status,
            pro_discrete: r.pro_discrete.status,
            chain_connected: r.chain_connected.status,
            hausdorff: r.hausdorff.status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDigest {
    pub id: String,
    pub spec: InstanceSpec,
    pub points: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDigest>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<PropositionCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instance_count: usize,
    pub failed_checks: usize,
    pub errors: usize,
    pub propositions: BTreeMap<String, PropositionCounts>,
    pub instances: Vec<InstanceDigest>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failed_checks == 0
    }

    pub fn counts(&self, id: &str) -> PropositionCounts {
        self.propositions.get(id).cloned().unwrap_or_default()
    }
}

/// Everything computed for one instance.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub digest: InstanceDigest,
    pub checks: Vec<PropositionCheck>,
}

fn consistency_check(
    id: &str,
    hyps: &[(&str, bool)],
    value: Option<bool>,
    cert: impl FnOnce() -> serde_json::Value,
) -> PropositionCheck {
    if let Some((h, _)) = hyps.iter().find(|(_, ok)| !ok) {
        return PropositionCheck::skipped(id, format!("hypothesis fails: {h}"));
    }
    match value {
        Some(true) => PropositionCheck::pass(id),
        Some(false) => PropositionCheck::fail(id, "verdicts disagree", cert()),
        None => PropositionCheck::skipped(id, "not evaluated"),
    }
}

/// The theorem-equivalence and self-consistency checks on one map.
pub fn covering_checks(f: &UniformMap, c: &CoverReport) -> Vec<PropositionCheck> {
    let gen = c.generates_structure.is_yes();
    let uniform = f.source().is_uniform();
    let completes = c.condition2.status != Status::Unknown;
    let k = &c.consistency;
    let digest = || serde_json::to_value(CoverDigest::from(c)).expect("digests serialize");
    vec![
        consistency_check(
            "condition1-iff-condition4",
            &[(GENERATES, gen)],
            k.condition1_matches_4,
            digest,
        ),
        consistency_check(
            "condition3-iff-condition4",
            &[(GENERATES, gen), (UNIFORM, uniform)],
            k.condition3_matches_4,
            digest,
        ),
        consistency_check(
            "condition2-iff-condition4",
            &[(GENERATES, gen), (UNIFORM, uniform), (CONDITION2_COMPLETES, completes)],
            k.condition2_matches_4,
            digest,
        ),
        consistency_check(
            "edge-level-matches-chains",
            &[(SMALL_SOURCE, f.source().len() <= SELF_CHECK_POINTS)],
            k.edge_level_matches_chains,
            digest,
        ),
        consistency_check(
            "uniqueness-implies-approximate-uniqueness",
            &[],
            k.uniqueness_implies_approximate,
            digest,
        ),
    ]
}

fn identity_check(space: &Arc<FiniteUniformSpace>, d_max: usize) -> PropositionCheck {
    let c = classify_map(&UniformMap::identity(space.clone()), d_max);
    if c.class == CoverClass::UniformCovering && c.generates_structure.is_yes() {
        PropositionCheck::pass("identity-is-uniform-covering")
    } else {
        PropositionCheck::fail(
            "identity-is-uniform-covering",
            "identity is not classified as a uniform covering",
            serde_json::to_value(CoverDigest::from(&c)).expect("digests serialize"),
        )
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rotations of `C_n`: properly discontinuous exactly when the smallest
/// displacement of a nontrivial element exceeds the finest radius.
fn rotation_check(n: usize, step: usize, radii: &[usize], r: &ActionReport) -> PropositionCheck {
    let g = gcd(step % n, n);
    let expected = g == n || g > *radii.last().unwrap_or(&0);
    let got = r.uniformly_properly_discontinuous.is_yes();
    if expected == got {
        PropositionCheck::pass("rotation-pd-iff-displacement")
    } else {
        PropositionCheck::fail(
            "rotation-pd-iff-displacement",
            "proper discontinuity disagrees with the displacement of the rotation subgroup",
            json!({ "n": n, "step": step, "min_displacement": g, "radii": radii, "pd": got }),
        )
    }
}

fn action_instance(
    a: &GroupAction,
    opts: &SuiteOptions,
    checks: &mut Vec<PropositionCheck>,
) -> (CoverDigest, ActionDigest) {
    let q = orbit_space(a);
    let r = classify_action(a);
    let c = classify_map(&q.projection, opts.d_max);
    if opts.kind.covering() {
        checks.extend(covering_checks(&q.projection, &c));
    }
    if opts.kind.actions() {
        checks.extend(action_checks(a, &q, &r, &c));
    }
    if opts.kind.convergence() {
        checks.extend(convergence_checks(a, &q, &r, &c));
    }
    ((&c).into(), (&r).into())
}

/// Keeps the worst outcome per proposition id, in first-seen order.
fn merge_checks(all: Vec<PropositionCheck>) -> Vec<PropositionCheck> {
    let mut out: Vec<PropositionCheck> = Vec::new();
    for c in all {
        match out.iter_mut().find(|o| o.id == c.id) {
            None => out.push(c),
            Some(o) => {
                let rank = |x: Outcome| match x {
                    Outcome::Fail => 2,
                    Outcome::Pass => 1,
                    Outcome::Skipped => 0,
                };
                if rank(c.outcome) > rank(o.outcome) {
                    *o = c;
                }
            }
        }
    }
    out
}

pub fn evaluate(index: usize, spec: &InstanceSpec, opts: &SuiteOptions) -> Evaluation {
    let id = format!("{index:04}-{}", spec.family());
    let mut digest = InstanceDigest {
        id,
        spec: spec.clone(),
        points: 0,
        mode: Mode::Strict,
        cover: None,
        action: None,
        failures: Vec::new(),
        error: None,
    };
    let instance = match generate(spec, &opts.bounds) {
        Ok(i) => i,
        Err(e) => {
            digest.error = Some(e.to_string());
            return Evaluation {
                digest,
                checks: Vec::new(),
            };
        }
    };
    let first = &instance.spaces()[0];
    digest.points = first.len();
    digest.mode = first.mode();
    let mut checks = Vec::new();
    match &instance {
        Instance::Space(s) => {
            if opts.kind.covering() {
                checks.push(identity_check(s, opts.d_max));
            }
        }
        Instance::Map(f) => {
            let c = classify_map(f, opts.d_max);
            if opts.kind.covering() {
                checks.extend(covering_checks(f, &c));
                checks.push(identity_check(f.source(), opts.d_max));
            }
            digest.cover = Some((&c).into());
        }
        Instance::Tower(t) => {
            if opts.kind.covering() {
                let mut all = Vec::new();
                for bond in t.bonds() {
                    all.extend(covering_checks(bond, &classify_map(bond, opts.d_max)));
                }
                checks.extend(merge_checks(all));
            }
        }
        Instance::Action(a) => {
            let action = match spec {
                // classified at the truncation scales, with the closing diagonal dropped
                InstanceSpec::FreeGroupTruncated { .. } => {
                    let sp = a.space();
                    let t = sp
                        .truncated(sp.scales() - 1)
                        .expect("a prefix of a valid base is valid");
                    a.on_space(Arc::new(t)).expect("same points")
                }
                _ => a.clone(),
            };
            let (c, r) = action_instance(&action, opts, &mut checks);
            if let InstanceSpec::RotationAction { n, step, radii } = spec {
                if opts.kind.actions() {
                    checks.push(rotation_check(*n, *step, radii, &classify_action(a)));
                }
            }
            if let InstanceSpec::FreeGroupTruncated { .. } = spec {
                if opts.kind.covering() {
                    let v = verify_constant_gp(a.space());
                    checks.push(if v.is_yes() {
                        PropositionCheck::pass("constant-generalized-paths")
                    } else {
                        PropositionCheck::fail(
                            "constant-generalized-paths",
                            "generalized paths are not constant",
                            serde_json::to_value(&v).expect("verdicts serialize"),
                        )
                    });
                }
            }
            digest.cover = Some(c);
            digest.action = Some(r);
        }
    }
    digest.failures = checks.iter().filter(|c| c.is_fail()).cloned().collect();
    Evaluation { digest, checks }
}

pub fn evaluate_all(specs: &[InstanceSpec], opts: &SuiteOptions) -> Vec<Evaluation> {
    let indexed: Vec<(usize, &InstanceSpec)> = specs.iter().enumerate().collect();
    let mut out = par::map(opts.parallelism, &indexed, |(i, s)| evaluate(*i, s, opts));
    out.sort_by(|a, b| a.digest.id.cmp(&b.digest.id));
    out
}

const NOT_APPLICABLE: &str = "not applicable to the instance";

pub fn summarize(evals: &[Evaluation], kind: SuiteKind, seed: Option<u64>) -> SuiteReport {
    let mut propositions: BTreeMap<String, PropositionCounts> = BTreeMap::new();
    for e in evals {
        for c in &e.checks {
            let counts = propositions.entry(c.id.clone()).or_default();
            match c.outcome {
                Outcome::Pass => counts.pass += 1,
                Outcome::Fail => counts.fail += 1,
                Outcome::Skipped => {
                    counts.skipped += 1;
                    let reason = c.reason.clone().unwrap_or_default();
                    *counts.skip_reasons.entry(reason).or_default() += 1;
                }
            }
        }
    }
    for (id, counts) in propositions.iter_mut() {
        let absent = evals.iter().filter(|e| !e.checks.iter().any(|c| &c.id == id)).count();
        if absent > 0 {
            counts.skipped += absent;
            *counts.skip_reasons.entry(NOT_APPLICABLE.to_string()).or_default() += absent;
        }
    }
    SuiteReport {
        suite: kind,
        seed,
        instance_count: evals.len(),
        failed_checks: propositions.values().map(|c| c.fail).sum(),
        errors: evals.iter().filter(|e| e.digest.error.is_some()).count(),
        propositions,
        instances: evals.iter().map(|e| e.digest.clone()).collect(),
    }
}

pub fn run_suite(specs: &[InstanceSpec], seed: Option<u64>, opts: &SuiteOptions) -> SuiteReport {
    summarize(&evaluate_all(specs, opts), opts.kind, seed)
}

fn radii_for(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    if n >= 5 && rng.gen_bool(0.4) {
        vec![2, 1]
    } else {
        vec![1]
    }
}

/// The seeded default corpus: cycle covers, rotation and antipodal actions,
/// random quotients in both modes, and a few plain nets. Every instance has
/// at most 32 points and every group at most 12 elements.
pub fn default_corpus(seed: u64, count: usize) -> Vec<InstanceSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 10 {
            0 | 9 => {
                let n = rng.gen_range(3..=8);
                let k = rng.gen_range(1..=(32 / n).min(4));
                let radii = radii_for(&mut rng, n);
                InstanceSpec::CycleCover { n, k, radii }
            }
            1 => {
                let n = rng.gen_range(3..=12);
                let step = rng.gen_range(1..=5);
                let radii = radii_for(&mut rng, n);
                InstanceSpec::RotationAction { n, step, radii }
            }
            5 => match (i / 10) % 3 {
                0 => {
                    let n = *[4, 6, 8, 10, 12].choose(&mut rng).expect("nonempty");
                    let radii = radii_for(&mut rng, n);
                    InstanceSpec::AntipodalAction { n, radii }
                }
                1 => {
                    let n = rng.gen_range(3..=12);
                    let radii = radii_for(&mut rng, n);
                    InstanceSpec::CycleNet { n, radii }
                }
                _ => InstanceSpec::GridNet {
                    w: rng.gen_range(2..=4),
                    h: rng.gen_range(2..=4),
                    radii: vec![1],
                },
            },
            3 | 7 => InstanceSpec::RandomQuotient {
                points: 32,
                mode: Mode::Scale,
                seed: rng.gen(),
                max_group: 12,
            },
            _ => InstanceSpec::RandomQuotient {
                points: 32,
                mode: Mode::Strict,
                seed: rng.gen(),
                max_group: 12,
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_spec_list_gives_empty_report() {
        let r = run_suite(&[], Some(0), &SuiteOptions::default());
        assert_eq!(r.instance_count, 0);
        assert!(r.propositions.is_empty());
        assert!(r.all_pass());
    }

    #[test]
    fn counts_add_up_per_proposition() {
        let specs = default_corpus(3, 20);
        let evals = evaluate_all(&specs, &SuiteOptions::default());
        let r = summarize(&evals, SuiteKind::All, Some(3));
        for (id, c) in &r.propositions {
            assert_eq!(c.total(), evals.len(), "{id}");
        }
        assert_eq!(r.errors, 0);
    }

    #[test]
    fn rotation_family_matches_displacement() {
        let mut specs = Vec::new();
        for n in 6..=12 {
            for step in 1..=5 {
                specs.push(InstanceSpec::RotationAction {
                    n,
                    step,
                    radii: vec![1],
                });
            }
        }
        let opts = SuiteOptions {
            kind: SuiteKind::Actions,
            ..SuiteOptions::default()
        };
        let r = run_suite(&specs, None, &opts);
        let c = r.counts("rotation-pd-iff-displacement");
        assert_eq!(c.pass, specs.len());
        assert_eq!(r.failed_checks, 0, "{:#?}", r.propositions);
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let specs = default_corpus(11, 30);
        let mut opts = SuiteOptions::default();
        let a = serde_json::to_string(&run_suite(&specs, Some(11), &opts)).unwrap();
        opts.parallelism = Parallelism::Sequential;
        let b = serde_json::to_string(&run_suite(&specs, Some(11), &opts)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn free_group_instance_runs_its_extra_check() {
        let specs = [InstanceSpec::FreeGroupTruncated {
            gens: 3,
            len: 3,
            depth: 3,
        }];
        let r = run_suite(&specs, None, &SuiteOptions::default());
        assert_eq!(r.counts("constant-generalized-paths").pass, 1);
        let a = r.instances[0].action.as_ref().unwrap();
        assert_eq!(a.small_scale_uniformly_equicontinuous, Status::Yes);
        assert_eq!(a.equicontinuous, Status::No);
    }
}
