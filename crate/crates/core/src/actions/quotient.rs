use std::sync::Arc;

use crate::actions::group::GroupAction;
use crate::map::UniformMap;
use crate::relation::SymRelation;
use crate::space::{square_axiom_failures, FiniteUniformSpace, Mode};

/// The orbit space with the structure generated by the projection.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub quotient: Arc<FiniteUniformSpace>,
    pub projection: UniformMap,
    /// Quotient base index of `p(E_i)` for each source index `i`.
    pub scale_index: Vec<usize>,
}

pub fn orbit_space(a: &GroupAction) -> QuotientResult {
    let sp = a.space();
    let orbit = a.orbits();
    let k = orbit.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); k];
    for (x, &o) in orbit.iter().enumerate() {
        members[o].push(sp.label(x));
    }
    let points: Vec<String> = members.iter().map(|m| format!("[{}]", m.join(","))).collect();
    let mut entries: Vec<SymRelation> = Vec::new();
    let mut scale_index = Vec::with_capacity(sp.scales());
    for i in 0..sp.scales() {
        let img = sp.entry(i).image(&orbit, k);
        match entries.last() {
            Some(prev) if prev.same_pairs(&img) => {}
            _ => entries.push(img.with_name(format!("p({})", sp.scale_name(i)))),
        }
        scale_index.push(entries.len() - 1);
    }
    let mode = if square_axiom_failures(&entries).is_empty() {
        sp.mode()
    } else {
        Mode::Scale
    };
    let basepoint = sp.basepoint().map(|b| orbit[b]);
    let quotient = Arc::new(
        FiniteUniformSpace::new(points, entries, mode, basepoint).expect("images of a descending chain descend"),
    );
    let projection = UniformMap::new(sp.clone(), quotient.clone(), orbit).expect("orbit ids index the quotient");
    QuotientResult {
        quotient,
        projection,
        scale_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c6() -> Arc<FiniteUniformSpace> {
        let e = SymRelation::from_fn("d<=1", 6, |x, y| {
            let d = (x + 6 - y) % 6;
            d.min(6 - d) <= 1
        });
        Arc::new(
            FiniteUniformSpace::new((0..6).map(|i| i.to_string()).collect(), vec![e], Mode::Scale, Some(0)).unwrap(),
        )
    }

    #[test]
    fn antipodal_quotient_is_full_triangle() {
        let a = GroupAction::new(c6(), vec![(0..6).map(|x| (x + 3) % 6).collect()], vec![]).unwrap();
        let q = orbit_space(&a);
        assert_eq!(q.quotient.len(), 3);
        assert!(q.quotient.entry(0).is_full());
        assert_eq!(q.quotient.points()[0], "[0,3]");
        assert_eq!(q.projection.values(), &[0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn trivial_quotient_is_isomorphic() {
        let q = orbit_space(&GroupAction::trivial(c6()));
        assert_eq!(q.quotient.len(), 6);
        assert!(q.quotient.entry(0).same_pairs(c6().entry(0)));
        assert_eq!(q.scale_index, vec![0]);
    }

    #[test]
    fn transitive_quotient_is_a_point() {
        let a = GroupAction::new(c6(), vec![(0..6).map(|x| (x + 1) % 6).collect()], vec![]).unwrap();
        assert_eq!(orbit_space(&a).quotient.len(), 1);
    }

    #[test]
    fn coinciding_images_are_deduplicated() {
        let coarse = SymRelation::from_fn("d<=2", 6, |x, y| {
            let d = (x + 6 - y) % 6;
            d.min(6 - d) <= 2
        });
        let fine = c6().entry(0).clone();
        let sp = Arc::new(
            FiniteUniformSpace::new(
                (0..6).map(|i| i.to_string()).collect(),
                vec![coarse, fine],
                Mode::Scale,
                None,
            )
            .unwrap(),
        );
        let a = GroupAction::new(sp, vec![(0..6).map(|x| (x + 3) % 6).collect()], vec![]).unwrap();
        let q = orbit_space(&a);
        assert_eq!(q.quotient.scales(), 1);
        assert_eq!(q.scale_index, vec![0, 0]);
    }
}
