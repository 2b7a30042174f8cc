use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::SymRelation;
use crate::space::{coarsest_working, FiniteUniformSpace};
use crate::verdict::{Counterexample, TableRow, Verdict, Witness};

/// A point function between two finite uniform spaces.
#[derive(Debug, Clone)]
pub struct UniformMap {
    source: Arc<FiniteUniformSpace>,
    target: Arc<FiniteUniformSpace>,
    values: Vec<usize>,
}

/// JSON form of a map; `source` and `target` are paths to space files,
/// resolved relative to the map file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawMap {
    pub source: String,
    pub target: String,
    pub values: Vec<usize>,
}

impl UniformMap {
    pub fn new(source: Arc<FiniteUniformSpace>, target: Arc<FiniteUniformSpace>, values: Vec<usize>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::Map(format!(
                "{} values for a source of {} points",
                values.len(),
                source.len()
            )));
        }
        if let Some((x, &v)) = values.iter().enumerate().find(|(_, &v)| v >= target.len()) {
            return Err(Error::Map(format!("value {v} of point {x} is not a target point")));
        }
        Ok(UniformMap { source, target, values })
    }

    pub fn identity(space: Arc<FiniteUniformSpace>) -> Self {
        let values = (0..space.len()).collect();
        UniformMap {
            source: space.clone(),
            target: space,
            values,
        }
    }

    pub fn source(&self) -> &Arc<FiniteUniformSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteUniformSpace> {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn apply_chain(&self, chain: &[usize]) -> Vec<usize> {
        chain.iter().map(|&x| self.values[x]).collect()
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn after(&self, inner: &UniformMap) -> Result<UniformMap> {
        if inner.target.len() != self.source.len() {
            return Err(Error::Map("composed maps do not share a middle space".into()));
        }
        let values = inner.values.iter().map(|&x| self.values[x]).collect();
        UniformMap::new(inner.source.clone(), self.target.clone(), values)
    }

    /// `{(f(x), f(y)) : (x, y) ∈ E}` for `E` over the source.
    pub fn entourage_image(&self, e: &SymRelation) -> SymRelation {
        e.image(&self.values, self.target.len())
    }

    /// `{(x, y) : (f(x), f(y)) ∈ E}` for `E` over the target.
    pub fn entourage_preimage(&self, e: &SymRelation) -> SymRelation {
        e.preimage(&self.values)
    }

    /// `f(Ei)` for every base entry of the source.
    pub fn scale_images(&self) -> Vec<SymRelation> {
        self.source
            .base()
            .entries()
            .iter()
            .map(|e| self.entourage_image(e))
            .collect()
    }

    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.values.len()).filter(|&x| self.values[x] == y).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn base_relative(&self) -> bool {
        self.source.base_relative() || self.target.base_relative()
    }

    /// Surjective, and every `f(Ei)` contains some base entry of the target.
    /// The witness maps each source scale to the coarsest target entry
    /// contained in its image.
    pub fn generates_structure(&self) -> Verdict {
        let rel = self.base_relative();
        if let Some(y) = (0..self.target.len()).find(|&y| !self.values.contains(&y)) {
            return Verdict::no(Counterexample::new(
                format!("target point {y} is not in the image"),
                vec![y],
            ))
            .relative_to(rel);
        }
        let mut rows = Vec::new();
        for (i, img) in self.scale_images().iter().enumerate() {
            let found = coarsest_working(self.target.scales(), |j| self.target.entry(j).is_subset(img));
            match found {
                Some(j) => rows.push(TableRow {
                    e: self.source.scale_name(i).to_string(),
                    f: self.target.scale_name(j).to_string(),
                    e_index: i,
                    f_index: j,
                }),
                None => {
                    let fin = self.target.entry(self.target.finest());
                    let (a, b) = fin.pairs().find(|&(a, b)| !img.contains(a, b)).unwrap();
                    return Verdict::no(Counterexample::new(
                        format!(
                            "f({}) contains no target base entry: ({a}, {b}) ∈ {} is missing",
                            self.source.scale_name(i),
                            fin.name()
                        ),
                        vec![i, a, b],
                    ))
                    .relative_to(rel);
                }
            }
        }
        Verdict::yes(Witness::Table { rows }).relative_to(rel)
    }

    pub fn to_raw(&self, source: impl Into<String>, target: impl Into<String>) -> RawMap {
        RawMap {
            source: source.into(),
            target: target.into(),
            values: self.values.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Mode;

    fn cycle(n: usize) -> Arc<FiniteUniformSpace> {
        let e = SymRelation::from_fn("d<=1", n, |x, y| {
            let d = (x + n - y) % n;
            d.min(n - d) <= 1
        });
        Arc::new(FiniteUniformSpace::new((0..n).map(|i| i.to_string()).collect(), vec![e], Mode::Scale, None).unwrap())
    }

    #[test]
    fn identity_generates_with_identity_table() {
        let v = UniformMap::identity(cycle(6)).generates_structure();
        assert!(v.is_yes());
        let rows = v.table().unwrap();
        assert!(rows.iter().all(|r| r.e_index == r.f_index));
    }

    #[test]
    fn mod_three_generates() {
        let f = UniformMap::new(cycle(6), cycle(3), (0..6).map(|x| x % 3).collect()).unwrap();
        assert!(f.generates_structure().is_yes());
        assert!(f.entourage_image(f.source().entry(0)).is_full());
    }

    #[test]
    fn non_surjective_map_does_not_generate() {
        let point = Arc::new(
            FiniteUniformSpace::new(vec!["p".into()], vec![SymRelation::full("E", 1)], Mode::Strict, None).unwrap(),
        );
        let f = UniformMap::new(point, cycle(3), vec![1]).unwrap();
        let v = f.generates_structure();
        assert!(v.is_no());
        assert_eq!(v.counterexample.unwrap().tuple, vec![0]);
    }

    #[test]
    fn preimage_of_image_contains_original() {
        let f = UniformMap::new(cycle(6), cycle(3), (0..6).map(|x| x % 3).collect()).unwrap();
        let e = f.source().entry(0);
        assert!(e.is_subset(&f.entourage_preimage(&f.entourage_image(e))));
        assert!(f.entourage_image(e).len() <= e.len());
    }
}
