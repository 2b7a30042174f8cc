use std::sync::Arc;

use proptest::prelude::*;

use ucl_core::actions::{classify_action, orbit_space, GroupAction};
use ucl_core::convergence::{build_fn_structure, build_group_structures, phi_continuity, CarrierSelector, FnKind};
use ucl_core::covering::{check_chain_lifting, classify_map, CoverClass};
use ucl_core::generate::{cycle_space, generate, Bounds, Instance, InstanceSpec};
use ucl_core::genpaths::{composite_matrix, gp_endpoint_map, gp_space, uniform_pi1_tower, GpOptions, Pi1Mode, Tower};
use ucl_core::io::to_json_string;
use ucl_core::rips::{h1, pi1_presentation, replay, Budgets, HomotopyContext, RipsComplex};
use ucl_core::{FiniteUniformSpace, Mode, Status, SymRelation, UniformMap, Verdict};

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Strict), Just(Mode::Scale)]
}

fn quotient_spec() -> impl Strategy<Value = InstanceSpec> {
    (any::<u64>(), mode(), 6usize..=20).prop_map(|(seed, mode, points)| InstanceSpec::RandomQuotient {
        points,
        mode,
        seed,
        max_group: 12,
    })
}

fn action(spec: &InstanceSpec) -> GroupAction {
    match generate(spec, &Bounds::default()).unwrap() {
        Instance::Action(a) => a,
        _ => unreachable!(),
    }
}

fn space(spec: &InstanceSpec) -> Arc<FiniteUniformSpace> {
    action(spec).space().clone()
}

fn walk(e: &SymRelation, start: usize, steps: &[usize]) -> Vec<usize> {
    let mut c = vec![start];
    for &s in steps {
        let nb: Vec<usize> = e.neighbors(*c.last().unwrap()).collect();
        c.push(nb[s % nb.len()]);
    }
    c
}

fn check_certificates(name: &str, v: &Verdict) -> Result<(), TestCaseError> {
    match v.status {
        Status::Yes => prop_assert!(v.witness.is_some(), "{name}: yes without witness"),
        Status::No => prop_assert!(v.counterexample.is_some(), "{name}: no without counterexample"),
        Status::Unknown => {}
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn base_entries_descend(spec in quotient_spec()) {
        let sp = space(&spec);
        for i in 1..sp.scales() {
            prop_assert!(sp.entry(i).is_subset(sp.entry(i - 1)));
        }
    }

    #[test]
    fn strict_bases_have_square_witnesses(spec in quotient_spec()) {
        let sp = space(&spec);
        if sp.mode() == Mode::Strict {
            for i in 0..sp.scales() {
                prop_assert!((0..sp.scales()).any(|j| sp.entry(j).compose(sp.entry(j)).is_subset(sp.entry(i))));
            }
        }
    }

    #[test]
    fn balls_contain_their_centre(spec in quotient_spec()) {
        let sp = space(&spec);
        for i in 0..sp.scales() {
            for x in 0..sp.len() {
                prop_assert!(sp.ball(x, i).contains(&x));
            }
        }
    }

    #[test]
    fn identity_is_a_uniform_covering(spec in quotient_spec()) {
        let id = UniformMap::identity(space(&spec));
        prop_assert!(id.generates_structure().is_yes());
        prop_assert_eq!(classify_map(&id, 2).class, CoverClass::UniformCovering);
    }

    #[test]
    fn image_and_preimage_bracket_entries(spec in quotient_spec()) {
        let a = action(&spec);
        let p = orbit_space(&a).projection;
        for i in 0..a.space().scales() {
            let e = a.space().entry(i);
            let img = p.entourage_image(e);
            prop_assert!(img.len() <= e.len());
            prop_assert!(e.is_subset(&p.entourage_preimage(&img)));
        }
    }

    #[test]
    fn abelianized_pi1_is_h1(spec in quotient_spec()) {
        let sp = space(&spec);
        for i in 0..sp.scales() {
            let k = RipsComplex::from_relation(sp.entry(i), 2, 1 << 20).unwrap().component(0);
            let ab = pi1_presentation(&k, 0).abelianization().unwrap();
            prop_assert_eq!(ab, h1(&k).unwrap());
        }
    }

    #[test]
    fn homotopy_is_reflexive_and_symmetric(
        spec in quotient_spec(),
        c_steps in prop::collection::vec(any::<usize>(), 0..6),
        d_steps in prop::collection::vec(any::<usize>(), 0..6),
        back in prop::collection::vec(any::<usize>(), 0..4),
    ) {
        let sp = space(&spec);
        let e = sp.entry(sp.finest());
        let ctx = HomotopyContext::new(e, Budgets::default()).unwrap();
        let c = walk(e, 0, &c_steps);
        let mut d = walk(e, 0, &d_steps);
        // route d to c's endpoint through c reversed when possible
        let tail = walk(e, *d.last().unwrap(), &back);
        d.extend_from_slice(&tail[1..]);
        let end = *c.last().unwrap();
        if e.contains(*d.last().unwrap(), end) {
            d.push(end);
        } else {
            return Ok(());
        }
        prop_assert!(ctx.chains_homotopic(&c, &c).unwrap().is_yes());
        let cd = ctx.chains_homotopic(&c, &d).unwrap();
        let dc = ctx.chains_homotopic(&d, &c).unwrap();
        prop_assert_eq!(cd.status, dc.status);
        if cd.is_yes() && !cd.moves.is_empty() {
            let steps = replay(e, &c, &cd.moves).unwrap();
            prop_assert_eq!(steps.last().unwrap(), &d);
            for s in &steps {
                prop_assert!(s.windows(2).all(|w| e.contains(w[0], w[1])));
            }
        }
    }

    #[test]
    fn trees_have_trivial_h1(parents in prop::collection::vec(any::<usize>(), 1..16)) {
        let n = parents.len() + 1;
        let rel = SymRelation::from_fn("tree", n, |x, y| {
            x == y || (x > 0 && y == parents[x - 1] % x) || (y > 0 && x == parents[y - 1] % y)
        });
        let k = RipsComplex::from_relation(&rel, 2, 1 << 20).unwrap();
        prop_assert!(h1(&k).unwrap().is_trivial());
    }

    #[test]
    fn uniqueness_implies_approximate_uniqueness(spec in quotient_spec()) {
        let r = classify_map(&orbit_space(&action(&spec)).projection, 2);
        if r.condition4.is_yes() {
            prop_assert!(r.approximate_uniqueness.is_yes());
        }
    }

    #[test]
    fn g_f_grows_with_f(spec in quotient_spec()) {
        let a = action(&spec);
        for i in 1..a.space().scales() {
            let finer = a.g_f(i);
            let coarser = a.g_f(i - 1);
            prop_assert!(finer.iter().all(|g| coarser.contains(g)));
        }
    }

    #[test]
    fn star_lies_inside_bar(spec in quotient_spec()) {
        let (star, bar) = build_group_structures(&action(&spec));
        for (s, b) in star.entries.iter().zip(&bar.entries) {
            prop_assert!(s.is_subset(b));
        }
    }

    #[test]
    fn phi_continuity_matches_action_flags(spec in quotient_spec()) {
        let a = action(&spec);
        let r = classify_action(&a);
        let phi = |k| phi_continuity(&a, &build_fn_structure(&a, k, CarrierSelector::Image).unwrap()).is_yes();
        let all_continuous = (0..a.order()).all(|g| a.is_uniformly_continuous(g));
        prop_assert_eq!(phi(FnKind::Pointwise), all_continuous);
        prop_assert_eq!(phi(FnKind::Uniform), r.equicontinuous.is_yes());
        prop_assert_eq!(phi(FnKind::SmallScale), r.small_scale_uniformly_equicontinuous.is_yes());
    }

    #[test]
    fn verdicts_carry_certificates(spec in quotient_spec()) {
        let a = action(&spec);
        let r = classify_action(&a);
        check_certificates("neutral", &r.neutral)?;
        check_certificates("pd", &r.uniformly_properly_discontinuous)?;
        check_certificates("equicontinuous", &r.equicontinuous)?;
        check_certificates("ssbo", &r.small_scale_bounded_orbits)?;
        let c = classify_map(&orbit_space(&a).projection, 2);
        check_certificates("condition1", &c.condition1)?;
        check_certificates("condition3a", &c.condition3a)?;
        check_certificates("condition3b", &c.condition3b)?;
        check_certificates("condition4", &c.condition4)?;
        check_certificates("approximate uniqueness", &c.approximate_uniqueness)?;
    }

    #[test]
    fn generation_is_deterministic(spec in quotient_spec()) {
        let a = action(&spec);
        let b = action(&spec);
        prop_assert_eq!(to_json_string(&a.space().to_raw()), to_json_string(&b.space().to_raw()));
        prop_assert_eq!(a.order(), b.order());
        for g in 0..a.order() {
            prop_assert_eq!(a.element(g), b.element(g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bond_matrices_compose(base in 3usize..=6, count in 3usize..=4) {
        let t = Tower::dyadic(base, count).unwrap();
        let g = uniform_pi1_tower(&t, Pi1Mode::Abelian, Budgets::default()).unwrap();
        let m: Vec<Vec<Vec<i64>>> = g.bonds.iter().map(|b| b.matrix.clone().unwrap()).collect();
        let product = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..a.len())
                .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
                .collect()
        };
        // bond k maps level k+1 to level k
        let direct = composite_matrix(&t, 2, 0).unwrap();
        prop_assert_eq!(direct, product(&m[0], &m[1]));
    }

    #[test]
    fn gp_classes_at_simply_connected_scales(n in 3usize..=9, fine in 1usize..=3, extra in 0usize..=2) {
        let (hi, lo) = ((fine + extra).min(n / 2), fine.min(n / 2));
        let radii = if hi > lo { vec![hi, lo] } else { vec![lo] };
        let sp = cycle_space(n, &radii).unwrap();
        let gp = gp_space(&sp, GpOptions::default()).unwrap();
        if gp.complete && gp.group_order == Some(1) {
            prop_assert_eq!(gp.classes.len(), n);
        }
        if gp.complete && sp.is_chain_connected().is_yes() {
            let p = gp_endpoint_map(&sp, &gp).unwrap();
            prop_assert!(check_chain_lifting(&p).is_yes());
        }
    }
}
