//! Generalized paths over a finite base, the GP space with its `E*`
//! entourages, and the uniform fundamental group as a pro-group.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::UniformMap;
use crate::relation::SymRelation;
use crate::rips::complex::{RipsComplex, DEFAULT_SIMPLEX_CAP};
use crate::rips::homology::{smith, AbelianInvariants, Mat};
use crate::rips::homotopy::{Budgets, HomotopyContext, HomotopyVerdict};
use crate::rips::presentation::{exponent_vector, free_reduce, substitute, EdgePathGroup, Presentation, Word};
use crate::space::{FiniteUniformSpace, Mode};
use crate::verdict::{Counterexample, Status, Verdict, Witness};

/// JSON form of a tower; paths resolve relative to the tower file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawTower {
    pub levels: Vec<String>,
    pub bonds: Vec<String>,
}

/// Levels listed coarsest first; `bonds[k]` maps level `k + 1` onto level `k`.
#[derive(Debug, Clone)]
pub struct Tower {
    levels: Vec<Arc<FiniteUniformSpace>>,
    bonds: Vec<UniformMap>,
    bond_generates: Vec<Verdict>,
}

impl Tower {
    pub fn new(levels: Vec<Arc<FiniteUniformSpace>>, bonds: Vec<UniformMap>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Tower("no levels".into()));
        }
        if bonds.len() + 1 != levels.len() {
            return Err(Error::Tower(format!(
                "{} levels need {} bonds, got {}",
                levels.len(),
                levels.len() - 1,
                bonds.len()
            )));
        }
        for (k, b) in bonds.iter().enumerate() {
            if b.source().len() != levels[k + 1].len() || b.target().len() != levels[k].len() {
                return Err(Error::Tower(format!(
                    "bond {k} does not map level {} onto level {k}",
                    k + 1
                )));
            }
        }
        let bond_generates = bonds.iter().map(|b| b.generates_structure()).collect();
        Ok(Tower {
            levels,
            bonds,
            bond_generates,
        })
    }

    /// `C_{base·2^k}` at `d≤1` for `k = 1..=count`, bonded by reduction mod the smaller size.
    pub fn dyadic(base: usize, count: usize) -> Result<Self> {
        let levels: Vec<Arc<FiniteUniformSpace>> = (1..=count)
            .map(|k| {
                let n = base << k;
                let e = SymRelation::from_fn("d<=1", n, |x, y| {
                    let d = (x + n - y) % n;
                    d.min(n - d) <= 1
                });
                FiniteUniformSpace::new((0..n).map(|i| i.to_string()).collect(), vec![e], Mode::Scale, Some(0))
                    .map(Arc::new)
            })
            .collect::<std::result::Result<_, _>>()?;
        let bonds = (0..count.saturating_sub(1))
            .map(|k| {
                let m = levels[k].len();
                let values = (0..levels[k + 1].len()).map(|x| x % m).collect();
                UniformMap::new(levels[k + 1].clone(), levels[k].clone(), values)
            })
            .collect::<Result<_>>()?;
        Tower::new(levels, bonds)
    }

    pub fn levels(&self) -> &[Arc<FiniteUniformSpace>] {
        &self.levels
    }

    pub fn bonds(&self) -> &[UniformMap] {
        &self.bonds
    }

    pub fn bond_generates(&self) -> &[Verdict] {
        &self.bond_generates
    }
}

/// A coherent family of chains from the basepoint, one per base entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneralizedPath {
    pub chains: Vec<Vec<usize>>,
    /// `(i, j, verdict)`: `c_{E_j}` against `c_{E_i}` at scale `E_i`, `i < j`.
    pub coherence: Vec<(usize, usize, HomotopyVerdict)>,
}

impl GeneralizedPath {
    pub fn new(space: &FiniteUniformSpace, chains: Vec<Vec<usize>>, budgets: Budgets) -> Result<Self> {
        if chains.len() != space.scales() {
            return Err(Error::Chain(format!(
                "{} chains for {} scales",
                chains.len(),
                space.scales()
            )));
        }
        let origin = chains.first().and_then(|c| c.first()).copied();
        let end = chains.first().and_then(|c| c.last()).copied();
        for (i, c) in chains.iter().enumerate() {
            if c.is_empty() || c.first().copied() != origin || c.last().copied() != end {
                return Err(Error::Chain(format!(
                    "chain at scale {i} does not share the origin and end"
                )));
            }
            if let Some(b) = space.basepoint() {
                if c[0] != b {
                    return Err(Error::Chain(format!(
                        "chain at scale {i} does not start at the basepoint"
                    )));
                }
            }
        }
        let mut coherence = Vec::new();
        for i in 0..chains.len() {
            let ctx = HomotopyContext::new(space.entry(i), budgets)?;
            for j in i + 1..chains.len() {
                let v = ctx.chains_homotopic(&chains[j], &chains[i])?;
                if v.is_no() {
                    return Err(Error::Chain(format!(
                        "chains at scales {j} and {i} are not homotopic at scale {i}"
                    )));
                }
                coherence.push((i, j, v));
            }
        }
        Ok(GeneralizedPath { chains, coherence })
    }

    /// The family determined by one chain at the finest entry.
    pub fn from_finest(space: &FiniteUniformSpace, chain: Vec<usize>, budgets: Budgets) -> Result<Self> {
        Self::new(space, vec![chain; space.scales()], budgets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpOptions {
    pub budgets: Budgets,
    /// BFS radius for partial enumerations.
    pub radius: usize,
    /// Stop enumerating after this many classes.
    pub max_classes: usize,
    /// Compute `E*` even when the class set is partial.
    pub entourages_on_partial: bool,
}

impl Default for GpOptions {
    fn default() -> Self {
        GpOptions {
            budgets: Budgets::default(),
            radius: 12,
            max_classes: 512,
            entourages_on_partial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpClass {
    pub endpoint: usize,
    /// Coset index (complete) or reduced word in the simplified presentation (partial).
    pub key: Vec<i32>,
    /// A shortest representative chain from the basepoint.
    pub chain: Vec<usize>,
}

/// `E*` on the class set: off-diagonal pairs `(a, b)`, `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpEntourage {
    pub name: String,
    pub scale_index: usize,
    pub pairs: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknown: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpSpace {
    pub scale: String,
    pub scale_index: usize,
    pub basepoint: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    pub classes: Vec<GpClass>,
    pub entourages: Vec<GpEntourage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Homotopy classes of finest-scale chains from the basepoint.
pub fn gp_space(space: &FiniteUniformSpace, opts: GpOptions) -> Result<GpSpace> {
    let b = space
        .basepoint()
        .ok_or_else(|| Error::Chain("the space has no basepoint".into()))?;
    let m = space.finest();
    let rel = space.entry(m);
    let complex = RipsComplex::from_relation(rel, 2, DEFAULT_SIMPLEX_CAP)?;
    let epg = EdgePathGroup::new(&complex, b);
    let simplified = epg.presentation().simplify();
    let gens = simplified.presentation.generators.len();
    let table = if gens == 0 || simplified.presentation.is_free() {
        None
    } else {
        crate::rips::coset::enumerate_cosets(gens, &simplified.presentation.relators, &[], opts.budgets.cosets)
    };
    let complete = gens == 0 || table.is_some();
    let letters = |y: usize, z: usize| free_reduce(&simplified.rewrite(&epg.edge_word(y, z)));

    let mut classes = Vec::new();
    let mut note = None;
    let mut radius = None;
    let group_order;
    if complete {
        group_order = Some(table.as_ref().map_or(1, |t| t.len()));
        let step = |k: usize, w: &[i32]| table.as_ref().map_or(0, |t| t.trace(k, w));
        let mut index: HashMap<(usize, usize), usize> = HashMap::from([((b, 0), 0)]);
        classes.push(GpClass {
            endpoint: b,
            key: vec![0],
            chain: vec![b],
        });
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (y, k) = (classes[i].endpoint, classes[i].key[0] as usize);
            for z in rel.neighbors(y) {
                let k2 = step(k, &letters(y, z));
                if !index.contains_key(&(z, k2)) {
                    index.insert((z, k2), classes.len());
                    let mut chain = classes[i].chain.clone();
                    chain.push(z);
                    classes.push(GpClass {
                        endpoint: z,
                        key: vec![k2 as i32],
                        chain,
                    });
                    queue.push_back(classes.len() - 1);
                }
            }
        }
    } else {
        group_order = None;
        let mut index: HashMap<(usize, Word), usize> = HashMap::from([((b, Vec::new()), 0)]);
        classes.push(GpClass {
            endpoint: b,
            key: Vec::new(),
            chain: vec![b],
        });
        let mut frontier = vec![0usize];
        let mut reached = 0;
        'bfs: for r in 1..=opts.radius {
            let mut next = Vec::new();
            for &i in &frontier {
                let y = classes[i].endpoint;
                for z in rel.neighbors(y) {
                    let key = free_reduce(&[classes[i].key.clone(), letters(y, z)].concat());
                    if !index.contains_key(&(z, key.clone())) {
                        if classes.len() >= opts.max_classes {
                            break 'bfs;
                        }
                        index.insert((z, key.clone()), classes.len());
                        let mut chain = classes[i].chain.clone();
                        chain.push(z);
                        classes.push(GpClass {
                            endpoint: z,
                            key,
                            chain,
                        });
                        next.push(classes.len() - 1);
                    }
                }
            }
            reached = r;
            frontier = next;
        }
        radius = Some(reached);
        note = Some(if simplified.presentation.is_free() {
            format!("partial: fundamental group is free of rank {gens}, classes within radius {reached}")
        } else {
            format!(
                "partial: coset budget {} exhausted; classes keyed by reduced words within radius {reached}",
                opts.budgets.cosets
            )
        });
    }

    let mut entourages = Vec::new();
    if complete || opts.entourages_on_partial {
        for i in 0..space.scales() {
            let ctx = HomotopyContext::new(space.entry(i), opts.budgets)?;
            let mut pairs = Vec::new();
            let mut unknown = Vec::new();
            for a in 0..classes.len() {
                for c in a + 1..classes.len() {
                    let (x, y) = (classes[a].endpoint, classes[c].endpoint);
                    if !space.entry(i).contains(x, y) {
                        continue;
                    }
                    match ctx.e_homotopic_pair(&classes[a].chain, &classes[c].chain)?.status {
                        Status::Yes => pairs.push((a, c)),
                        Status::Unknown => unknown.push((a, c)),
                        Status::No => {}
                    }
                }
            }
            entourages.push(GpEntourage {
                name: format!("{}*", space.scale_name(i)),
                scale_index: i,
                pairs,
                unknown,
            });
        }
    }
    Ok(GpSpace {
        scale: space.scale_name(m).to_string(),
        scale_index: m,
        basepoint: b,
        complete,
        group_order,
        radius,
        classes,
        entourages,
        note,
    })
}

/// The endpoint map from the enumerated classes, carrying the `E*` entries, to `X`.
pub fn gp_endpoint_map(space: &Arc<FiniteUniformSpace>, gp: &GpSpace) -> Result<UniformMap> {
    if gp.entourages.is_empty() || gp.entourages.iter().any(|e| !e.unknown.is_empty()) {
        return Err(Error::Chain("the GP entourages are not fully decided".into()));
    }
    let n = gp.classes.len();
    let mut entries: Vec<SymRelation> = Vec::new();
    for e in &gp.entourages {
        let mut r = SymRelation::diagonal(e.name.clone(), n);
        for &(a, b) in &e.pairs {
            r.insert(a, b);
            r.insert(b, a);
        }
        match entries.last() {
            Some(prev) if prev.same_pairs(&r) => {}
            _ => entries.push(r),
        }
    }
    let points = gp
        .classes
        .iter()
        .map(|c| c.chain.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-"))
        .collect();
    let source = FiniteUniformSpace::new(points, entries, Mode::Scale, Some(0))?;
    UniformMap::new(
        Arc::new(source),
        space.clone(),
        gp.classes.iter().map(|c| c.endpoint).collect(),
    )
}

/// Every pair of distinct points is separated into different chain
/// components by some base entry, so generalized paths are constant.
pub fn verify_constant_gp(space: &FiniteUniformSpace) -> Verdict {
    let comps: Vec<Vec<usize>> = (0..space.scales()).map(|i| space.entry(i).components()).collect();
    let n = space.len();
    let mut used = vec![false; space.scales()];
    for x in 0..n {
        for y in x + 1..n {
            match (0..space.scales()).find(|&i| comps[i][x] != comps[i][y]) {
                Some(i) => used[i] = true,
                None => {
                    return Verdict::no(Counterexample::new(
                        format!("{x} and {y} are joined by a chain at every scale"),
                        vec![x, y],
                    ))
                    .relative_to(space.base_relative())
                }
            }
        }
    }
    let indices: Vec<usize> = (0..space.scales()).filter(|&i| used[i]).collect();
    Verdict::yes(Witness::Scales {
        names: indices.iter().map(|&i| space.scale_name(i).to_string()).collect(),
        indices,
    })
    .relative_to(space.base_relative())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pi1Mode {
    #[serde(alias = "pres")]
    Presentation,
    Abelian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProLevel {
    pub label: String,
    pub scale: String,
    pub basepoint: usize,
    pub h1: AbelianInvariants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Presentation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified: Option<Presentation>,
    /// Names of the abelian coordinates: `Z` or `Z/d`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProBond {
    pub from: usize,
    pub to: usize,
    /// Images of the source generators as words in the target generators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<Word>>,
    /// Rows: target coordinates; columns: source coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
    /// Relators of the source map to trivial loops in the target.
    pub homomorphism: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProGroup {
    pub mode: Pi1Mode,
    pub levels: Vec<ProLevel>,
    pub bonds: Vec<ProBond>,
    /// Rank of the free part when it is constant along the last two levels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_rank: Option<usize>,
    pub description: String,
}

/// Edge-path group of one level plus abelian coordinates.
struct LevelGroup {
    relation: SymRelation,
    basepoint: usize,
    epg: EdgePathGroup,
    h1: AbelianInvariants,
    v: Mat,
    /// `(smith column, modulus)`; modulus 0 for free coordinates.
    keep: Vec<(usize, i128)>,
    v_inv: Mat,
    sign: Vec<i128>,
}

impl LevelGroup {
    fn new(relation: &SymRelation, basepoint: usize) -> Result<Self> {
        let complex = RipsComplex::from_relation(relation, 2, DEFAULT_SIMPLEX_CAP)?;
        let epg = EdgePathGroup::new(&complex, basepoint);
        let n = epg.generator_count();
        let rows: Mat = epg
            .presentation()
            .relation_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let s = smith(&rows, n, true)?;
        let mut keep = Vec::new();
        for (t, &d) in s.diag.iter().enumerate() {
            if d > 1 {
                keep.push((t, d));
            }
        }
        for t in s.rank..n {
            keep.push((t, 0));
        }
        let h1 = epg.presentation().abelianization()?;
        let v_inv = s.v_inv.expect("transform requested");
        let mut sign = vec![1; keep.len()];
        // default orientation: first nonzero entry of each free basis vector positive
        for (j, &(t, d)) in keep.iter().enumerate() {
            if d == 0 && v_inv[t].iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                sign[j] = -1;
            }
        }
        Ok(LevelGroup {
            relation: relation.clone(),
            basepoint,
            epg,
            h1,
            v: s.v.expect("transform requested"),
            keep,
            v_inv,
            sign,
        })
    }

    fn coords(&self, x: &[i64]) -> Vec<i128> {
        let n = x.len();
        self.keep
            .iter()
            .zip(&self.sign)
            .map(|(&(t, d), &s)| {
                let y: i128 = (0..n).map(|i| x[i] as i128 * self.v[i][t]).sum::<i128>() * s;
                if d > 0 {
                    y.rem_euclid(d)
                } else {
                    y
                }
            })
            .collect()
    }

    fn basis(&self, j: usize) -> Vec<i128> {
        let (t, _) = self.keep[j];
        self.v_inv[t].iter().map(|&x| x * self.sign[j]).collect()
    }

    fn coordinate_names(&self) -> Vec<String> {
        self.keep
            .iter()
            .map(|&(_, d)| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect()
    }
}

/// Images of the source generators under a vertex map, as target words.
fn generator_images(src: &LevelGroup, dst: &LevelGroup, values: &[usize]) -> Result<Vec<Word>> {
    if let Some((x, y)) = src
        .relation
        .pairs()
        .find(|&(x, y)| !dst.relation.contains(values[x], values[y]))
    {
        return Err(Error::Tower(format!(
            "({x}, {y}) maps to ({}, {}), outside {}",
            values[x],
            values[y],
            dst.relation.name()
        )));
    }
    Ok((0..src.epg.generator_count())
        .map(|g| {
            let image: Vec<usize> = src.epg.generator_loop(g).iter().map(|&x| values[x]).collect();
            dst.epg.chain_word(&image)
        })
        .collect())
}

fn bond_matrix(src: &LevelGroup, dst: &LevelGroup, images: &[Word]) -> Vec<Vec<i128>> {
    let tg = dst.epg.generator_count();
    let h: Vec<Vec<i64>> = images.iter().map(|w| exponent_vector(w, tg)).collect();
    let mut cols = Vec::new();
    for j in 0..src.keep.len() {
        let b = src.basis(j);
        let mut x = vec![0i64; tg];
        for (i, &c) in b.iter().enumerate() {
            for k in 0..tg {
                x[k] += (c as i64) * h[i][k];
            }
        }
        cols.push(dst.coords(&x));
    }
    (0..dst.keep.len())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect()
}

fn bond_label(m: &[Vec<i64>]) -> String {
    if m.len() == 1 && m[0].len() == 1 {
        format!("×{}", m[0][0])
    } else {
        format!("{m:?}")
    }
}

/// Levels and vertex maps of an inverse system, coarsest first.
struct System {
    labels: Vec<String>,
    relations: Vec<SymRelation>,
    /// `maps[k]` sends level `k + 1` vertices to level `k`.
    maps: Vec<Vec<usize>>,
    basepoint: usize,
}

fn pro_group(sys: System, mode: Pi1Mode, budgets: Budgets) -> Result<ProGroup> {
    pro_group_with_levels(sys, mode, budgets).map(|(pg, _)| pg)
}

fn pro_group_with_levels(sys: System, mode: Pi1Mode, budgets: Budgets) -> Result<(ProGroup, Vec<LevelGroup>)> {
    let count = sys.relations.len();
    // basepoints propagate down from the finest level
    let mut bases = vec![sys.basepoint; count];
    for k in (0..count.saturating_sub(1)).rev() {
        bases[k] = sys.maps[k][bases[k + 1]];
    }
    let mut groups: Vec<LevelGroup> = sys
        .relations
        .iter()
        .zip(&bases)
        .map(|(r, &b)| LevelGroup::new(r, b))
        .collect::<Result<_>>()?;
    let mut images = Vec::new();
    let mut matrices = Vec::new();
    for k in 0..count.saturating_sub(1) {
        let imgs = generator_images(&groups[k + 1], &groups[k], &sys.maps[k])?;
        let mut m = bond_matrix(&groups[k + 1], &groups[k], &imgs);
        // orient source free coordinates so each column leads with a positive entry
        for j in 0..groups[k + 1].keep.len() {
            if groups[k + 1].keep[j].1 != 0 {
                continue;
            }
            let lead = (0..m.len())
                .filter(|&r| groups[k].keep[r].1 == 0)
                .map(|r| m[r][j])
                .find(|&x| x != 0);
            if lead.is_some_and(|x| x < 0) {
                groups[k + 1].sign[j] *= -1;
                for row in m.iter_mut() {
                    row[j] = -row[j];
                }
                for (r, row) in m.iter_mut().enumerate() {
                    let d = groups[k].keep[r].1;
                    if d > 0 {
                        row[j] = row[j].rem_euclid(d);
                    }
                }
            }
        }
        images.push(imgs);
        matrices.push(m);
    }

    let mut bonds = Vec::new();
    for k in 0..count.saturating_sub(1) {
        let status = verify_homomorphism(&groups[k + 1], &groups[k], &images[k], budgets)?;
        let matrix: Vec<Vec<i64>> = matrices[k]
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        bonds.push(ProBond {
            from: k + 1,
            to: k,
            images: (mode == Pi1Mode::Presentation).then(|| images[k].clone()),
            matrix: (mode == Pi1Mode::Abelian).then_some(matrix),
            homomorphism: status,
        });
    }
    let levels: Vec<ProLevel> = groups
        .iter()
        .enumerate()
        .map(|(k, g)| ProLevel {
            label: sys.labels[k].clone(),
            scale: g.relation.name().to_string(),
            basepoint: g.basepoint,
            h1: g.h1.clone(),
            presentation: (mode == Pi1Mode::Presentation).then(|| g.epg.presentation().clone()),
            simplified: (mode == Pi1Mode::Presentation).then(|| g.epg.presentation().simplify().presentation),
            coordinates: if mode == Pi1Mode::Abelian {
                g.coordinate_names()
            } else {
                Vec::new()
            },
        })
        .collect();
    let stable_rank = match levels.len() {
        0 => None,
        1 => Some(levels[0].h1.free_rank),
        l => (levels[l - 1].h1.free_rank == levels[l - 2].h1.free_rank).then_some(levels[l - 1].h1.free_rank),
    };
    let mut description = levels.first().map(|l| l.h1.to_string()).unwrap_or_default();
    for k in 1..levels.len() {
        let label = match mode {
            Pi1Mode::Abelian => bond_label(bonds[k - 1].matrix.as_ref().expect("abelian mode")),
            Pi1Mode::Presentation => "hom".to_string(),
        };
        description.push_str(&format!(" ←{label}— {}", levels[k].h1));
    }
    Ok((
        ProGroup {
            mode,
            levels,
            bonds,
            stable_rank,
            description,
        },
        groups,
    ))
}

/// Each source relator, pushed through the bond, bounds in the target.
fn verify_homomorphism(src: &LevelGroup, dst: &LevelGroup, images: &[Word], budgets: Budgets) -> Result<Status> {
    let ctx = HomotopyContext::new(&dst.relation, budgets)?;
    let mut status = Status::Yes;
    for r in &src.epg.presentation().relators {
        let loop_ = dst.epg.word_loop(&substitute(r, images));
        match ctx.chains_homotopic(&loop_, &[dst.basepoint])?.status {
            Status::No => return Ok(Status::No),
            Status::Unknown => status = Status::Unknown,
            Status::Yes => {}
        }
    }
    Ok(status)
}

/// Per-scale fundamental groups of one space, bonded by the identity.
pub fn uniform_pi1(space: &FiniteUniformSpace, mode: Pi1Mode, budgets: Budgets) -> Result<ProGroup> {
    let m = space.scales();
    let n = space.len();
    pro_group(
        System {
            labels: space.scale_names(),
            relations: (0..m).map(|i| space.entry(i).clone()).collect(),
            maps: vec![(0..n).collect(); m.saturating_sub(1)],
            basepoint: space.basepoint().unwrap_or(0),
        },
        mode,
        budgets,
    )
}

/// Fundamental groups of the levels of a tower at their finest entries.
pub fn uniform_pi1_tower(tower: &Tower, mode: Pi1Mode, budgets: Budgets) -> Result<ProGroup> {
    pro_group(tower_system(tower), mode, budgets)
}

fn tower_system(tower: &Tower) -> System {
    let last = tower.levels.last().expect("towers are nonempty");
    System {
        labels: (0..tower.levels.len()).map(|k| format!("level {k}")).collect(),
        relations: tower.levels.iter().map(|l| l.entry(l.finest()).clone()).collect(),
        maps: tower.bonds.iter().map(|b| b.values().to_vec()).collect(),
        basepoint: last.basepoint().unwrap_or(0),
    }
}

/// Abelian matrix of the composite bond from level `from` down to level `to`,
/// computed directly from the composite vertex map in the pro-group's bases.
pub fn composite_matrix(tower: &Tower, from: usize, to: usize) -> Result<Vec<Vec<i64>>> {
    if to >= from || from >= tower.levels.len() {
        return Err(Error::Tower(format!("no composite from level {from} to level {to}")));
    }
    let (_, groups) = pro_group_with_levels(tower_system(tower), Pi1Mode::Abelian, Budgets::default())?;
    let mut values: Vec<usize> = (0..tower.levels[from].len()).collect();
    for k in (to..from).rev() {
        values = values.iter().map(|&x| tower.bonds[k].values()[x]).collect();
    }
    let images = generator_images(&groups[from], &groups[to], &values)?;
    Ok(bond_matrix(&groups[from], &groups[to], &images)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, radii: &[usize]) -> FiniteUniformSpace {
        let entries = radii
            .iter()
            .map(|&r| {
                SymRelation::from_fn(format!("d<={r}"), n, |x, y| {
                    let d = (x + n - y) % n;
                    d.min(n - d) <= r
                })
            })
            .collect();
        FiniteUniformSpace::new((0..n).map(|i| i.to_string()).collect(), entries, Mode::Scale, Some(0)).unwrap()
    }

    #[test]
    fn dyadic_tower_is_a_solenoid() {
        let t = Tower::dyadic(3, 3).unwrap();
        let pg = uniform_pi1_tower(&t, Pi1Mode::Abelian, Budgets::default()).unwrap();
        assert_eq!(pg.description, "Z ←×2— Z ←×2— Z");
        assert_eq!(pg.stable_rank, Some(1));
        assert!(pg.bonds.iter().all(|b| b.homomorphism == Status::Yes));
        assert_eq!(composite_matrix(&t, 2, 0).unwrap(), vec![vec![4]]);
    }

    #[test]
    fn hexagon_gp_is_partial() {
        let sp = cycle(6, &[1]);
        let gp = gp_space(
            &sp,
            GpOptions {
                radius: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!gp.complete);
        assert!(gp.entourages.is_empty());
        // the universal cover of the hexagon is a line: 2r + 1 classes within radius r
        assert_eq!(gp.classes.len(), 13);
    }

    #[test]
    fn simply_connected_gp_has_one_class_per_point() {
        let sp = cycle(6, &[2]);
        let gp = gp_space(&sp, GpOptions::default()).unwrap();
        assert!(gp.complete);
        assert_eq!(gp.group_order, Some(1));
        assert_eq!(gp.classes.len(), 6);
        let f = gp_endpoint_map(&Arc::new(sp), &gp).unwrap();
        assert!(crate::covering::check_chain_lifting(&f).is_yes());
    }

    #[test]
    fn constant_gp_needs_separation() {
        let full = cycle(4, &[2]);
        assert!(verify_constant_gp(&full).is_no());
        let n = 4;
        let sp = FiniteUniformSpace::new(
            (0..n).map(|i| i.to_string()).collect(),
            vec![SymRelation::full("full", n), SymRelation::diagonal("Δ", n)],
            Mode::Strict,
            None,
        )
        .unwrap();
        assert!(verify_constant_gp(&sp).is_yes());
    }

    #[test]
    fn single_space_pro_group() {
        let pg = uniform_pi1(&cycle(6, &[2, 1]), Pi1Mode::Presentation, Budgets::default()).unwrap();
        assert_eq!(pg.levels.len(), 2);
        assert!(pg.levels[0].h1.is_trivial());
        assert_eq!(pg.levels[1].h1.free_rank, 1);
        assert_eq!(pg.bonds[0].homomorphism, Status::Yes);
    }

    #[test]
    fn generalized_path_coherence() {
        let sp = cycle(8, &[2, 1]);
        let p = GeneralizedPath::from_finest(&sp, vec![0, 1, 2], Budgets::default()).unwrap();
        assert_eq!(p.coherence.len(), 1);
        assert!(p.coherence[0].2.is_yes());
        let wound = vec![0, 1, 2, 3, 4, 5, 6, 7, 0, 1, 2];
        assert!(GeneralizedPath::new(&sp, vec![vec![0, 2], wound], Budgets::default()).is_err());
    }
}
