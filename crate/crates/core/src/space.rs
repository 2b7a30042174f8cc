//! Finite uniform spaces given by a descending chain of entourages.
//!
//! Bases are listed coarsest first: `E1 ⊋ E2 ⊋ … ⊋ Em`. On a finite set the
//! filter generated by such a chain is exactly the set of supersets of `Em`,
//! so every "for each entourage E there is an entourage F" quantifier reduces
//! to a scan over base indices. All checkers in this crate quantify over base
//! entries only.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::{RawRelation, SymRelation};
use crate::verdict::{Counterexample, Verdict, Witness};

/// How the square axiom is treated during validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every entry `Ei` must admit some `Ej` with `Ej∘Ej ⊆ Ei`.
    #[default]
    Strict,
    /// Formal scale sequence: the square axiom is not enforced and verdicts
    /// are flagged base-relative.
    Scale,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPoints,
    EmptyBase,
    PointOutOfRange { entry: String, pair: (usize, usize) },
    NotSymmetric { entry: String, pair: (usize, usize) },
    MissingDiagonal { entry: String, point: usize },
    NotDescending { coarser: String, finer: String },
    SquareAxiom { entry: String },
    BasepointOutOfRange(usize),
    Metric(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPoints => write!(f, "space has no points"),
            Violation::EmptyBase => write!(f, "base has no entourages"),
            Violation::PointOutOfRange { entry, pair } => {
                write!(f, "{entry}: pair {pair:?} references a missing point")
            }
            Violation::NotSymmetric { entry, pair } => {
                write!(f, "{entry}: contains {:?} but not {:?}", pair, (pair.1, pair.0))
            }
            Violation::MissingDiagonal { entry, point } => {
                write!(f, "{entry}: missing diagonal pair ({point}, {point})")
            }
            Violation::NotDescending { coarser, finer } => {
                write!(f, "{finer} is not strictly contained in {coarser}")
            }
            Violation::SquareAxiom { entry } => {
                write!(f, "{entry}: no base entry F has F∘F contained in it")
            }
            Violation::BasepointOutOfRange(b) => write!(f, "basepoint {b} is not a point"),
            Violation::Metric(msg) => write!(f, "metric: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid space:")?;
        for v in &self.violations {
            write!(f, " [{v}]")?;
        }
        Ok(())
    }
}

/// Strictly descending chain of symmetric reflexive relations, coarsest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntourageChain {
    entries: Vec<SymRelation>,
    mode: Mode,
}

impl EntourageChain {
    pub fn entries(&self) -> &[SymRelation] {
        &self.entries
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &SymRelation {
        &self.entries[i]
    }

    pub fn finest(&self) -> &SymRelation {
        self.entries.last().expect("validated chains are nonempty")
    }

    pub fn finest_index(&self) -> usize {
        self.entries.len() - 1
    }
}

/// A validated finite uniform space (or formal scale sequence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteUniformSpace {
    points: Vec<String>,
    base: EntourageChain,
    basepoint: Option<usize>,
    hausdorff: bool,
    square_axiom: bool,
}

/// JSON form of a space. Either `entourages` or the `metric` + `scales`
/// shorthand must be present.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct RawSpace {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entourages: Option<Vec<RawRelation>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<usize>,
}

/// Formats a threshold radius the way entry names are written (`d<=2`).
pub fn threshold_name(r: f64) -> String {
    if r.fract() == 0.0 && r.abs() < 1e15 {
        format!("d<={}", r as i64)
    } else {
        format!("d<={r}")
    }
}

/// Expands `metric` + `scales` into threshold relations `d <= r`.
pub fn threshold_relations(metric: &[Vec<f64>], scales: &[f64]) -> std::result::Result<Vec<SymRelation>, String> {
    let n = metric.len();
    if let Some((i, row)) = metric.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(format!("row {i} has {} entries, expected {n}", row.len()));
    }
    if scales.windows(2).any(|w| w[0] <= w[1]) {
        return Err("scales must be strictly decreasing".into());
    }
    Ok(scales
        .iter()
        .map(|&r| SymRelation::from_fn(threshold_name(r), n, |x, y| metric[x][y] <= r))
        .collect())
}

/// Validates a raw description. In scale-chain mode the square axiom is
/// skipped and the result is a formal scale sequence.
pub fn validate_space(raw: RawSpace) -> std::result::Result<FiniteUniformSpace, ValidationError> {
    let mode = raw.mode.unwrap_or(if raw.metric.is_some() {
        Mode::Scale
    } else {
        Mode::Strict
    });
    let mut violations = Vec::new();
    let n = match (&raw.points, &raw.metric) {
        (Some(p), _) => p.len(),
        (None, Some(m)) => m.len(),
        _ => 0,
    };
    let points = raw
        .points
        .clone()
        .unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());

    let entries = if let Some(rels) = raw.entourages {
        let mut out = Vec::with_capacity(rels.len());
        for r in rels {
            match SymRelation::from_pairs(r.name.clone(), n, r.pairs.iter().map(|p| (p[0], p[1]))) {
                Ok(rel) => out.push(rel),
                Err(pair) => violations.push(Violation::PointOutOfRange { entry: r.name, pair }),
            }
        }
        out
    } else if let (Some(metric), Some(scales)) = (raw.metric.as_ref(), raw.scales.as_ref()) {
        if metric.len() != n {
            violations.push(Violation::Metric(format!("{} rows for {n} points", metric.len())));
            Vec::new()
        } else {
            match threshold_relations(metric, scales) {
                Ok(rels) => rels,
                Err(msg) => {
                    violations.push(Violation::Metric(msg));
                    Vec::new()
                }
            }
        }
    } else {
        Vec::new()
    };

    if let Some(b) = raw.basepoint {
        if b >= n {
            violations.push(Violation::BasepointOutOfRange(b));
        }
    }
    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }
    FiniteUniformSpace::new(points, entries, mode, raw.basepoint)
}

impl FiniteUniformSpace {
    /// Validates and assembles a space from already-built relations.
    pub fn new(
        points: Vec<String>,
        entries: Vec<SymRelation>,
        mode: Mode,
        basepoint: Option<usize>,
    ) -> std::result::Result<Self, ValidationError> {
        let n = points.len();
        let mut violations = Vec::new();
        if n == 0 {
            violations.push(Violation::NoPoints);
        }
        if entries.is_empty() {
            violations.push(Violation::EmptyBase);
        }
        if let Some(b) = basepoint {
            if b >= n {
                violations.push(Violation::BasepointOutOfRange(b));
            }
        }
        for e in &entries {
            if e.size() != n {
                violations.push(Violation::PointOutOfRange {
                    entry: e.name().to_string(),
                    pair: (e.size(), e.size()),
                });
                continue;
            }
            if let Some(pair) = e.asymmetric_pair() {
                violations.push(Violation::NotSymmetric {
                    entry: e.name().to_string(),
                    pair,
                });
            }
            if let Some(point) = e.missing_diagonal() {
                violations.push(Violation::MissingDiagonal {
                    entry: e.name().to_string(),
                    point,
                });
            }
        }
        for w in entries.windows(2) {
            if w[0].size() == w[1].size() && (!w[1].is_subset(&w[0]) || w[1].same_pairs(&w[0])) {
                violations.push(Violation::NotDescending {
                    coarser: w[0].name().to_string(),
                    finer: w[1].name().to_string(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }
        let failures = square_axiom_failures(&entries);
        if mode == Mode::Strict && !failures.is_empty() {
            return Err(ValidationError {
                violations: failures
                    .into_iter()
                    .map(|i| Violation::SquareAxiom {
                        entry: entries[i].name().to_string(),
                    })
                    .collect(),
            });
        }
        let hausdorff = entries.last().is_some_and(|e| e.is_diagonal());
        Ok(FiniteUniformSpace {
            points,
            hausdorff,
            square_axiom: failures.is_empty(),
            base: EntourageChain { entries, mode },
            basepoint,
        })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base(&self) -> &EntourageChain {
        &self.base
    }

    pub fn entry(&self, i: usize) -> &SymRelation {
        self.base.get(i)
    }

    pub fn scales(&self) -> usize {
        self.base.len()
    }

    pub fn finest(&self) -> usize {
        self.base.finest_index()
    }

    pub fn scale_names(&self) -> Vec<String> {
        self.base.entries().iter().map(|e| e.name().to_string()).collect()
    }

    pub fn scale_name(&self, i: usize) -> &str {
        self.base.get(i).name()
    }

    /// Scale index by entry name.
    pub fn scale_index(&self, name: &str) -> Option<usize> {
        self.base.entries().iter().position(|e| e.name() == name)
    }

    pub fn mode(&self) -> Mode {
        self.base.mode()
    }

    /// Verdicts over this space are relative to the listed base rather than
    /// to a genuine uniform structure.
    pub fn base_relative(&self) -> bool {
        !self.square_axiom
    }

    /// Whether the chain satisfies the square axiom, i.e. generates a
    /// genuine uniform structure. Always true in strict mode.
    pub fn is_uniform(&self) -> bool {
        self.square_axiom
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn with_basepoint(mut self, basepoint: Option<usize>) -> Self {
        self.basepoint = basepoint;
        self
    }

    /// The intersection of all base entries is the diagonal.
    pub fn is_hausdorff(&self) -> bool {
        self.hausdorff
    }

    pub fn label(&self, x: usize) -> &str {
        &self.points[x]
    }

    /// `{ y : (x, y) ∈ Ei }`.
    pub fn ball(&self, x: usize, i: usize) -> Vec<usize> {
        self.base.get(i).neighbors(x).collect()
    }

    /// Decides whether every pair of points is joined by an `Ei`-chain for
    /// every base entry; it suffices to check the finest entry.
    pub fn is_chain_connected(&self) -> Verdict {
        let comp = self.base.finest().components();
        match comp.iter().position(|&c| c != 0) {
            None => Verdict::yes(Witness::Entourage {
                name: self.scale_name(self.finest()).to_string(),
                index: self.finest(),
            }),
            Some(y) => Verdict::no(Counterexample::new(
                format!(
                    "points 0 and {y} are not joined by an {}-chain",
                    self.scale_name(self.finest())
                ),
                vec![0, y],
            )),
        }
        .relative_to(self.base_relative())
    }

    /// Drops the last `k` entries of the base (used for truncated instances).
    pub fn truncated(&self, keep: usize) -> std::result::Result<Self, ValidationError> {
        let entries = self.base.entries()[..keep.min(self.scales())].to_vec();
        let mode = if square_axiom_failures(&entries).is_empty() {
            self.mode()
        } else {
            Mode::Scale
        };
        FiniteUniformSpace::new(self.points.clone(), entries, mode, self.basepoint)
    }

    pub fn to_raw(&self) -> RawSpace {
        RawSpace {
            points: Some(self.points.clone()),
            entourages: Some(self.base.entries().iter().map(RawRelation::from).collect()),
            metric: None,
            scales: None,
            mode: Some(self.mode()),
            basepoint: self.basepoint,
        }
    }
}

/// Base indices `i` for which no entry `Ej` satisfies `Ej∘Ej ⊆ Ei`.
pub fn square_axiom_failures(entries: &[SymRelation]) -> Vec<usize> {
    // Squares are monotone, so the finest entry gives the smallest square.
    let Some(finest) = entries.last() else {
        return Vec::new();
    };
    let sq = finest.compose(finest);
    entries
        .iter()
        .enumerate()
        .filter(|(_, e)| !sq.is_subset(e))
        .map(|(i, _)| i)
        .collect()
}

/// `E∘F`.
pub fn compose_relations(e: &SymRelation, f: &SymRelation) -> SymRelation {
    e.compose(f)
}

/// Scans candidate base indices finest first and returns the coarsest one
/// satisfying `works`.
pub fn coarsest_working(scales: usize, mut works: impl FnMut(usize) -> bool) -> Option<usize> {
    let mut best = None;
    for j in (0..scales).rev() {
        if works(j) {
            best = Some(j);
        }
    }
    best
}

/// A point sequence whose consecutive pairs lie in `E_scale`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub points: Vec<usize>,
    pub scale: usize,
}

impl Chain {
    pub fn new(space: &FiniteUniformSpace, points: Vec<usize>, scale: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Chain("chains need at least one point".into()));
        }
        if scale >= space.scales() {
            return Err(Error::Chain(format!("scale {scale} is not a base index")));
        }
        if let Some(&p) = points.iter().find(|&&p| p >= space.len()) {
            return Err(Error::Chain(format!("point {p} is out of range")));
        }
        let e = space.entry(scale);
        if let Some(k) = points.windows(2).position(|w| !e.contains(w[0], w[1])) {
            return Err(Error::Chain(format!(
                "({}, {}) at position {k} is not in {}",
                points[k],
                points[k + 1],
                e.name()
            )));
        }
        Ok(Chain { points, scale })
    }

    pub fn first(&self) -> usize {
        self.points[0]
    }

    pub fn last(&self) -> usize {
        *self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Chain {
        let mut points = self.points.clone();
        points.reverse();
        Chain {
            points,
            scale: self.scale,
        }
    }

    /// Concatenation `self * other`; the shared endpoint is not repeated.
    pub fn concat(&self, other: &Chain) -> Chain {
        assert_eq!(self.last(), other.first(), "chains must share the junction point");
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        Chain {
            points,
            scale: self.scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hop_metric_cycle(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let d = (x + n - y) % n;
                        d.min(n - d) as f64
                    })
                    .collect()
            })
            .collect()
    }

    fn c6(scales: &[f64], mode: Mode) -> std::result::Result<FiniteUniformSpace, ValidationError> {
        validate_space(RawSpace {
            metric: Some(hop_metric_cycle(6)),
            scales: Some(scales.to_vec()),
            mode: Some(mode),
            ..Default::default()
        })
    }

    #[test]
    fn diagonal_chain_is_valid_and_hausdorff() {
        let s = FiniteUniformSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![SymRelation::diagonal("D", 3)],
            Mode::Strict,
            None,
        )
        .unwrap();
        assert!(s.is_hausdorff());
        assert!(s.is_uniform());
        assert_eq!(s.ball(1, 0), vec![1]);
    }

    #[test]
    fn hexagon_thresholds_fail_square_axiom_in_strict_mode() {
        let err = c6(&[2.0, 1.0], Mode::Strict).unwrap_err();
        assert_eq!(err.violations, vec![Violation::SquareAxiom { entry: "d<=1".into() }]);
        let s = c6(&[2.0, 1.0], Mode::Scale).unwrap();
        assert!(s.base_relative());
        assert!(!s.is_uniform());
    }

    #[test]
    fn ball_on_hexagon() {
        let s = c6(&[1.0], Mode::Scale).unwrap();
        assert_eq!(s.ball(0, 0), vec![0, 1, 5]);
    }

    #[test]
    fn validator_reports_every_violation() {
        let raw = RawSpace {
            points: Some(vec!["a".into(), "b".into()]),
            entourages: Some(vec![
                RawRelation {
                    name: "E1".into(),
                    pairs: vec![[0, 0], [1, 1]],
                },
                RawRelation {
                    name: "E2".into(),
                    pairs: vec![[0, 0], [0, 1]],
                },
            ]),
            ..Default::default()
        };
        let err = validate_space(raw).unwrap_err();
        assert!(err.violations.contains(&Violation::NotSymmetric {
            entry: "E2".into(),
            pair: (0, 1)
        }));
        assert!(err.violations.contains(&Violation::MissingDiagonal {
            entry: "E2".into(),
            point: 1
        }));
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotDescending { .. })));
    }

    #[test]
    fn two_discrete_points_are_not_chain_connected() {
        let s = FiniteUniformSpace::new(
            vec!["a".into(), "b".into()],
            vec![SymRelation::diagonal("D", 2)],
            Mode::Strict,
            None,
        )
        .unwrap();
        let v = s.is_chain_connected();
        assert!(v.is_no());
        assert_eq!(v.counterexample.unwrap().tuple, vec![0, 1]);
        assert!(c6(&[1.0], Mode::Scale).unwrap().is_chain_connected().is_yes());
    }

    #[test]
    fn chain_construction_checks_links() {
        let s = c6(&[1.0], Mode::Scale).unwrap();
        assert!(Chain::new(&s, vec![0, 1, 2], 0).is_ok());
        assert!(Chain::new(&s, vec![0, 2], 0).is_err());
        assert!(Chain::new(&s, vec![], 0).is_err());
    }

    #[test]
    fn coarsest_working_prefers_low_indices() {
        assert_eq!(coarsest_working(4, |j| j >= 2), Some(2));
        assert_eq!(coarsest_working(4, |_| false), None);
    }
}
