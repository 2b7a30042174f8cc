//! Seeded instance families and the files they serialize to.

use std::collections::{HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{orbit_space, GroupAction, RawAction};
use crate::error::{Error, Result};
use crate::genpaths::{RawTower, Tower};
use crate::io::write_json;
use crate::map::UniformMap;
use crate::relation::SymRelation;
use crate::space::{threshold_name, FiniteUniformSpace, Mode};

fn default_radii() -> Vec<usize> {
    vec![1]
}

fn default_points() -> usize {
    12
}

fn default_max_group() -> usize {
    12
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum InstanceSpec {
    /// `C_n` with hop-distance thresholds.
    CycleNet {
        n: usize,
        #[serde(default = "default_radii")]
        radii: Vec<usize>,
    },
    /// `C_{nk} → C_n`, `x ↦ x mod n`.
    CycleCover {
        n: usize,
        k: usize,
        #[serde(default = "default_radii")]
        radii: Vec<usize>,
    },
    GridNet {
        w: usize,
        h: usize,
        #[serde(default = "default_radii")]
        radii: Vec<usize>,
    },
    RotationAction {
        n: usize,
        step: usize,
        #[serde(default = "default_radii")]
        radii: Vec<usize>,
    },
    AntipodalAction {
        n: usize,
        #[serde(default = "default_radii")]
        radii: Vec<usize>,
    },
    /// Dyadic covers `C_{2^k·base}` at `d<=1`, `k = 1..=levels`.
    SolenoidTower { base: usize, levels: usize },
    /// A finite model of the free group on `gens` letters acting on itself.
    FreeGroupTruncated { gens: usize, len: usize, depth: usize },
    RandomQuotient {
        #[serde(default = "default_points")]
        points: usize,
        #[serde(default)]
        mode: Mode,
        seed: u64,
        #[serde(default = "default_max_group")]
        max_group: usize,
    },
}

impl InstanceSpec {
    pub fn family(&self) -> &'static str {
        match self {
            InstanceSpec::CycleNet { .. } => "cycle-net",
            InstanceSpec::CycleCover { .. } => "cycle-cover",
            InstanceSpec::GridNet { .. } => "grid-net",
            InstanceSpec::RotationAction { .. } => "rotation-action",
            InstanceSpec::AntipodalAction { .. } => "antipodal-action",
            InstanceSpec::SolenoidTower { .. } => "solenoid-tower",
            InstanceSpec::FreeGroupTruncated { .. } => "free-group-truncated",
            InstanceSpec::RandomQuotient { .. } => "random-quotient",
        }
    }

    /// Short human-readable form, e.g. `cycle-cover(n=3,k=2,radii=1)`.
    pub fn label(&self) -> String {
        let r = |radii: &[usize]| radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("/");
        let params = match self {
            InstanceSpec::CycleNet { n, radii } => format!("n={n},radii={}", r(radii)),
            InstanceSpec::CycleCover { n, k, radii } => format!("n={n},k={k},radii={}", r(radii)),
            InstanceSpec::GridNet { w, h, radii } => format!("w={w},h={h},radii={}", r(radii)),
            InstanceSpec::RotationAction { n, step, radii } => format!("n={n},step={step},radii={}", r(radii)),
            InstanceSpec::AntipodalAction { n, radii } => format!("n={n},radii={}", r(radii)),
            InstanceSpec::SolenoidTower { base, levels } => format!("base={base},levels={levels}"),
            InstanceSpec::FreeGroupTruncated { gens, len, depth } => format!("gens={gens},len={len},depth={depth}"),
            InstanceSpec::RandomQuotient {
                points,
                mode,
                seed,
                max_group,
            } => {
                let m = match mode {
                    Mode::Strict => "strict",
                    Mode::Scale => "scale",
                };
                format!("points={points},mode={m},seed={seed},max_group={max_group}")
            }
        };
        format!("{}({params})", self.family())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_points: usize,
    pub max_group: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_points: 64,
            max_group: 16,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Space(Arc<FiniteUniformSpace>),
    Map(UniformMap),
    Action(GroupAction),
    Tower(Tower),
}

impl Instance {
    /// Every space the instance mentions, sources first.
    pub fn spaces(&self) -> Vec<Arc<FiniteUniformSpace>> {
        match self {
            Instance::Space(s) => vec![s.clone()],
            Instance::Map(f) => vec![f.source().clone(), f.target().clone()],
            Instance::Action(a) => vec![a.space().clone()],
            Instance::Tower(t) => t.levels().to_vec(),
        }
    }

    /// Writes the instance into `dir` and returns the files written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let mut put = |name: &str, value: serde_json::Value| -> Result<()> {
            let path = dir.join(name);
            write_json(&path, &value)?;
            written.push(path);
            Ok(())
        };
        fn v<T: Serialize>(x: &T) -> serde_json::Value {
            serde_json::to_value(x).expect("instance files serialize")
        }
        match self {
            Instance::Space(s) => put("space.json", v(&s.to_raw()))?,
            Instance::Map(f) => {
                put("source.json", v(&f.source().to_raw()))?;
                put("target.json", v(&f.target().to_raw()))?;
                put("map.json", v(&f.to_raw("source.json", "target.json")))?;
            }
            Instance::Action(a) => {
                put("space.json", v(&a.space().to_raw()))?;
                put("action.json", v(&action_raw(a, "space.json")))?;
                let q = orbit_space(a);
                put("quotient.json", v(&q.quotient.to_raw()))?;
                put("map.json", v(&q.projection.to_raw("space.json", "quotient.json")))?;
            }
            Instance::Tower(t) => {
                let levels: Vec<String> = (0..t.levels().len()).map(|k| format!("level{k}.json")).collect();
                let bonds: Vec<String> = (0..t.bonds().len()).map(|k| format!("bond{k}.json")).collect();
                for (name, level) in levels.iter().zip(t.levels()) {
                    put(name, v(&level.to_raw()))?;
                }
                for (k, (name, bond)) in bonds.iter().zip(t.bonds()).enumerate() {
                    put(name, v(&bond.to_raw(&levels[k + 1], &levels[k])))?;
                }
                put("tower.json", v(&RawTower { levels, bonds }))?;
            }
        }
        Ok(written)
    }
}

pub fn action_raw(a: &GroupAction, space: &str) -> RawAction {
    RawAction {
        space: space.to_string(),
        generators: a.generator_elements().iter().map(|&g| a.element(g).to_vec()).collect(),
        names: a.generator_names().to_vec(),
    }
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::Spec(msg.into())
}

fn check_points(n: usize, bounds: &Bounds) -> Result<()> {
    if n > bounds.max_points {
        return Err(spec_err(format!(
            "{n} points exceeds the bound of {}",
            bounds.max_points
        )));
    }
    if n == 0 {
        return Err(spec_err("no points"));
    }
    Ok(())
}

fn check_radii(radii: &[usize]) -> Result<()> {
    if radii.is_empty() {
        return Err(spec_err("radii must be nonempty"));
    }
    if radii.windows(2).any(|w| w[0] <= w[1]) {
        return Err(spec_err("radii must be strictly decreasing"));
    }
    Ok(())
}

fn metric_space(
    labels: Vec<String>,
    dist: impl Fn(usize, usize) -> usize,
    radii: &[usize],
) -> Result<Arc<FiniteUniformSpace>> {
    check_radii(radii)?;
    let n = labels.len();
    let entries = radii
        .iter()
        .map(|&r| SymRelation::from_fn(threshold_name(r as f64), n, |x, y| dist(x, y) <= r))
        .collect();
    Ok(Arc::new(FiniteUniformSpace::new(
        labels,
        entries,
        Mode::Scale,
        Some(0),
    )?))
}

pub fn cycle_space(n: usize, radii: &[usize]) -> Result<Arc<FiniteUniformSpace>> {
    metric_space(
        (0..n).map(|i| i.to_string()).collect(),
        |x, y| {
            let d = (x + n - y) % n;
            d.min(n - d)
        },
        radii,
    )
}

fn group_action(
    space: Arc<FiniteUniformSpace>,
    gens: Vec<Vec<usize>>,
    names: Vec<String>,
    bounds: &Bounds,
) -> Result<GroupAction> {
    GroupAction::with_cap(space, gens, names, bounds.max_group).map_err(|e| match e {
        Error::GroupCap { cap } => spec_err(format!("group order exceeds the bound of {cap}")),
        other => other,
    })
}

pub fn generate(spec: &InstanceSpec, bounds: &Bounds) -> Result<Instance> {
    match spec {
        InstanceSpec::CycleNet { n, radii } => {
            check_points(*n, bounds)?;
            Ok(Instance::Space(cycle_space(*n, radii)?))
        }
        InstanceSpec::CycleCover { n, k, radii } => {
            check_points(n * k, bounds)?;
            if *k == 0 {
                return Err(spec_err("k must be positive"));
            }
            let source = cycle_space(n * k, radii)?;
            let target = cycle_space(*n, radii)?;
            let values = (0..n * k).map(|x| x % n).collect();
            Ok(Instance::Map(UniformMap::new(source, target, values)?))
        }
        InstanceSpec::GridNet { w, h, radii } => {
            check_points(w * h, bounds)?;
            let (w, h) = (*w, *h);
            let labels = (0..w * h).map(|i| format!("{},{}", i % w, i / w)).collect();
            let dist = move |a: usize, b: usize| (a % w).abs_diff(b % w) + (a / w).abs_diff(b / w);
            Ok(Instance::Space(metric_space(labels, dist, radii)?))
        }
        InstanceSpec::RotationAction { n, step, radii } => {
            check_points(*n, bounds)?;
            let rot = (0..*n).map(|x| (x + step) % n).collect();
            let a = group_action(cycle_space(*n, radii)?, vec![rot], vec![format!("r{step}")], bounds)?;
            Ok(Instance::Action(a))
        }
        InstanceSpec::AntipodalAction { n, radii } => {
            check_points(*n, bounds)?;
            if n % 2 != 0 {
                return Err(spec_err("antipodal action needs an even cycle"));
            }
            let flip = (0..*n).map(|x| (x + n / 2) % n).collect();
            let a = group_action(cycle_space(*n, radii)?, vec![flip], vec!["a".into()], bounds)?;
            Ok(Instance::Action(a))
        }
        InstanceSpec::SolenoidTower { base, levels } => {
            if *levels == 0 || *base == 0 {
                return Err(spec_err("solenoid tower needs a positive base and level count"));
            }
            check_points(base << levels, bounds)?;
            Ok(Instance::Tower(Tower::dyadic(*base, *levels)?))
        }
        InstanceSpec::FreeGroupTruncated { gens, len, depth } => free_group_truncated(*gens, *len, *depth, bounds),
        InstanceSpec::RandomQuotient {
            points,
            mode,
            seed,
            max_group,
        } => {
            let b = Bounds {
                max_points: bounds.max_points.min(*points),
                max_group: bounds.max_group.min(*max_group),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            match mode {
                Mode::Strict => random_hierarchy(&mut rng, &b),
                Mode::Scale => random_lift(&mut rng, &b),
            }
        }
    }
}

type Perm = Vec<usize>;

fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

fn inverse(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &v) in a.iter().enumerate() {
        out[v] = i;
    }
    out
}

/// `Q = S_{gens+1}` on `{0..gens}` with `x_k` the cycle `(0 1 … gens+1-k)`.
/// `G_k = ⟨x_n : n ≥ k⟩` is then the symmetric group on `{0..gens+1-k}`, and
/// `E_k` relates `x, y` with `x·y⁻¹ ∈ G_k`. The diagonal closes the base.
fn free_group_truncated(gens: usize, len: usize, depth: usize, bounds: &Bounds) -> Result<Instance> {
    if gens == 0 || depth == 0 || depth > gens {
        return Err(spec_err("need 1 <= depth <= gens"));
    }
    let m = gens + 1;
    let order: usize = (1..=m).product();
    check_points(order, bounds)?;
    let letters: Vec<Perm> = (1..=gens)
        .map(|k| {
            let top = m - k;
            (0..m)
                .map(|i| {
                    if i < top {
                        i + 1
                    } else if i == top {
                        0
                    } else {
                        i
                    }
                })
                .collect()
        })
        .collect();
    let mut moves: Vec<(String, Perm)> = Vec::new();
    for (k, x) in letters.iter().enumerate() {
        moves.push((format!("x{}", k + 1), x.clone()));
        let inv = inverse(x);
        if inv != *x {
            moves.push((format!("x{}^-1", k + 1), inv));
        }
    }
    let identity: Perm = (0..m).collect();
    let mut index: HashMap<Perm, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elements = vec![identity];
    let mut words: Vec<Vec<String>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if words[i].len() == len {
            continue;
        }
        for (name, x) in &moves {
            let y = compose(&elements[i], x);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elements.len());
                let mut w = words[i].clone();
                w.push(name.clone());
                words.push(w);
                elements.push(y);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    if elements.len() < order {
        return Err(spec_err(format!(
            "words of length <= {len} reach {} of {order} elements",
            elements.len()
        )));
    }
    let labels = words
        .iter()
        .map(|w| if w.is_empty() { "e".to_string() } else { w.join("·") })
        .collect();
    let in_g = |z: &[usize], k: usize| z.iter().enumerate().all(|(i, &v)| i <= m - k || v == i);
    let mut entries: Vec<SymRelation> = (1..=depth)
        .map(|k| {
            SymRelation::from_fn(format!("E{k}"), order, |x, y| {
                in_g(&compose(&elements[x], &inverse(&elements[y])), k)
            })
        })
        .collect();
    entries.push(SymRelation::diagonal("Δ", order));
    let space = Arc::new(FiniteUniformSpace::new(labels, entries, Mode::Strict, Some(0))?);
    let gens_perm = letters
        .iter()
        .map(|x| elements.iter().map(|e| index[&compose(x, e)]).collect())
        .collect();
    let names = (1..=gens).map(|k| format!("x{k}")).collect();
    let a = GroupAction::with_cap(space, gens_perm, names, order)?;
    Ok(Instance::Action(a))
}

/// Random product of one or two disjoint transpositions.
fn random_swaps(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut p: Perm = (0..n).collect();
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let pairs = if n >= 4 && rng.gen_bool(0.5) { 2 } else { 1 };
    for c in pts.chunks(2).take(pairs) {
        if let [a, b] = c {
            p.swap(*a, *b);
        }
    }
    p
}

fn pick_action(
    rng: &mut ChaCha8Rng,
    space: Arc<FiniteUniformSpace>,
    bounds: &Bounds,
    mut structural: impl FnMut(&mut ChaCha8Rng) -> Perm,
) -> Result<Instance> {
    let n = space.len();
    for _ in 0..32 {
        let count = rng.gen_range(1..=2);
        let gens: Vec<Perm> = (0..count)
            .map(|_| {
                if rng.gen_bool(0.75) {
                    structural(rng)
                } else {
                    random_swaps(rng, n)
                }
            })
            .collect();
        match GroupAction::with_cap(space.clone(), gens, Vec::new(), bounds.max_group) {
            Ok(a) => return Ok(Instance::Action(a)),
            Err(Error::GroupCap { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Instance::Action(GroupAction::trivial(space)))
}

/// Points are digit strings; level `j` relates strings sharing their first
/// `j` digits. Structural generators permute children of tree nodes.
fn random_hierarchy(rng: &mut ChaCha8Rng, bounds: &Bounds) -> Result<Instance> {
    let mut radix = vec![2, 2];
    for _ in 0..64 {
        let depth = rng.gen_range(2..=3);
        let r: Vec<usize> = (0..depth).map(|_| rng.gen_range(2..=3)).collect();
        if r.iter().product::<usize>() <= bounds.max_points {
            radix = r;
            break;
        }
    }
    let n: usize = radix.iter().product();
    check_points(n, bounds)?;
    let digits = |x: usize| -> Vec<usize> {
        let mut out = vec![0; radix.len()];
        let mut r = x;
        for j in (0..radix.len()).rev() {
            out[j] = r % radix[j];
            r /= radix[j];
        }
        out
    };
    let encode = |d: &[usize]| d.iter().zip(&radix).fold(0, |acc, (v, r)| acc * r + v);
    let all: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let labels = all.iter().map(|d| d.iter().map(|v| v.to_string()).collect()).collect();
    let levels = radix.len();
    let start = if rng.gen_bool(0.75) { 0 } else { 1 };
    let end = if rng.gen_bool(0.5) { levels } else { levels - 1 };
    let entries = (start..=end)
        .map(|j| {
            let name = if j == levels { "Δ".to_string() } else { format!("P{j}") };
            SymRelation::from_fn(name, n, |x, y| all[x][..j] == all[y][..j])
        })
        .collect();
    let space = Arc::new(FiniteUniformSpace::new(labels, entries, Mode::Strict, Some(0))?);
    let radix2 = radix.clone();
    pick_action(rng, space, bounds, move |rng| {
        let mut table: HashMap<Vec<usize>, Perm> = HashMap::new();
        (0..n)
            .map(|x| {
                let d = &all[x];
                let image: Vec<usize> = (0..levels)
                    .map(|j| {
                        let sigma = table.entry(d[..j].to_vec()).or_insert_with(|| {
                            let mut p: Perm = (0..radix2[j]).collect();
                            if rng.gen_bool(0.4) {
                                p.shuffle(rng);
                            }
                            p
                        });
                        sigma[d[j]]
                    })
                    .collect();
                encode(&image)
            })
            .collect()
    })
}

/// A random connected base graph lifted along random `Z/k` voltages; the
/// fibre rotation acts by graph automorphisms.
fn random_lift(rng: &mut ChaCha8Rng, bounds: &Bounds) -> Result<Instance> {
    let max = bounds.max_points.max(6);
    let k = rng.gen_range(2..=4usize.min(max / 3));
    let m = rng.gen_range(3..=(max / k).clamp(3, 6));
    let mut edges: Vec<(usize, usize)> = (1..m).map(|v| (rng.gen_range(0..v), v)).collect();
    for u in 0..m {
        for v in u + 1..m {
            if !edges.contains(&(u, v)) && rng.gen_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    let n = m * k;
    check_points(n, bounds)?;
    let mut dist = Vec::new();
    for attempt in 0..16 {
        let volts: Vec<usize> = edges.iter().map(|_| rng.gen_range(0..k)).collect();
        let mut adj = vec![Vec::new(); n];
        for (&(u, v), &t) in edges.iter().zip(&volts) {
            for i in 0..k {
                let a = u * k + i;
                let b = v * k + (i + t) % k;
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        dist = hop_distances(&adj);
        if dist[0].iter().all(|&d| d < usize::MAX) || attempt == 15 {
            break;
        }
    }
    let radii = [vec![1], vec![2, 1], vec![2], vec![3, 1]]
        .choose(rng)
        .cloned()
        .unwrap_or_else(default_radii);
    let labels = (0..n).map(|x| format!("{}_{}", x / k, x % k)).collect();
    let space = metric_space(labels, |x, y| dist[x][y], &radii)?;
    pick_action(rng, space, bounds, move |rng| {
        let s = rng.gen_range(1..k);
        (0..n).map(|x| (x / k) * k + (x % k + s) % k).collect()
    })
}

fn hop_distances(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if d[y] == usize::MAX {
                        d[y] = d[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn action(spec: InstanceSpec) -> GroupAction {
        match generate(&spec, &Bounds::default()).unwrap() {
            Instance::Action(a) => a,
            other => panic!("expected an action, got {other:?}"),
        }
    }

    #[test]
    fn cycle_cover_is_mod_n() {
        let spec = InstanceSpec::CycleCover {
            n: 3,
            k: 2,
            radii: vec![1],
        };
        let Instance::Map(f) = generate(&spec, &Bounds::default()).unwrap() else {
            panic!()
        };
        assert_eq!(f.values(), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(f.source().scale_names(), vec!["d<=1"]);
    }

    #[test]
    fn rotation_by_three_is_antipodal() {
        let a = action(InstanceSpec::RotationAction {
            n: 6,
            step: 3,
            radii: vec![1],
        });
        assert_eq!(a.order(), 2);
        assert_eq!(a.element(1), &[3, 4, 5, 0, 1, 2]);
    }

    #[test]
    fn free_group_truncated_is_a_coset_chain() {
        let a = action(InstanceSpec::FreeGroupTruncated {
            gens: 3,
            len: 3,
            depth: 3,
        });
        let sp = a.space();
        assert_eq!(sp.len(), 24);
        assert_eq!(a.order(), 24);
        assert!(sp.entry(0).is_full());
        assert!(sp.is_hausdorff());
        assert_eq!(sp.mode(), Mode::Strict);
        for i in 0..sp.scales() {
            assert!(sp.entry(i).is_transitive());
        }
        // class sizes |G_k| = 24, 6, 2
        let sizes: Vec<usize> = (0..3).map(|i| sp.ball(0, i).len()).collect();
        assert_eq!(sizes, vec![24, 6, 2]);
        assert!(sp.points().iter().all(|l| l == "e" || l.split('·').count() <= 3));
    }

    #[test]
    fn short_words_are_rejected() {
        let spec = InstanceSpec::FreeGroupTruncated {
            gens: 3,
            len: 2,
            depth: 3,
        };
        assert!(matches!(generate(&spec, &Bounds::default()), Err(Error::Spec(_))));
    }

    #[test]
    fn random_quotients_are_deterministic_and_bounded() {
        for mode in [Mode::Strict, Mode::Scale] {
            for seed in 0..40 {
                let spec = InstanceSpec::RandomQuotient {
                    points: 32,
                    mode,
                    seed,
                    max_group: 12,
                };
                let a = action(spec.clone());
                let b = action(spec);
                assert_eq!(a.space().to_raw(), b.space().to_raw());
                assert_eq!(action_raw(&a, "s"), action_raw(&b, "s"));
                assert!(a.space().len() <= 32);
                assert!(a.order() <= 12);
                assert_eq!(a.space().mode(), mode);
            }
        }
    }

    #[test]
    fn bounds_are_enforced() {
        let spec = InstanceSpec::CycleNet { n: 100, radii: vec![1] };
        assert!(generate(&spec, &Bounds::default()).is_err());
        let spec = InstanceSpec::RotationAction {
            n: 40,
            step: 1,
            radii: vec![1],
        };
        assert!(generate(&spec, &Bounds::default()).is_err());
    }

    #[test]
    fn specs_round_trip_through_json() {
        let spec: InstanceSpec = serde_json::from_str(r#"{"family":"cycle-cover","n":3,"k":2}"#).unwrap();
        assert_eq!(
            spec,
            InstanceSpec::CycleCover {
                n: 3,
                k: 2,
                radii: vec![1]
            }
        );
        assert_eq!(spec.label(), "cycle-cover(n=3,k=2,radii=1)");
    }

    #[test]
    fn instances_write_loadable_files() {
        let dir = std::env::temp_dir().join(format!("ucl-gen-{}", std::process::id()));
        let spec = InstanceSpec::SolenoidTower { base: 3, levels: 3 };
        let files = generate(&spec, &Bounds::default()).unwrap().write(&dir).unwrap();
        assert_eq!(files.len(), 6);
        let t = crate::io::load_tower(&dir.join("tower.json")).unwrap();
        assert_eq!(t.levels().len(), 3);
        let spec = InstanceSpec::AntipodalAction { n: 6, radii: vec![1] };
        generate(&spec, &Bounds::default()).unwrap().write(&dir).unwrap();
        let a = crate::io::load_action(&dir.join("action.json")).unwrap();
        assert_eq!(a.order(), 2);
        let f = crate::io::load_map(&dir.join("map.json")).unwrap();
        assert_eq!(f.target().len(), 3);
        std::fs::remove_dir_all(&dir).ok();
    }
}
