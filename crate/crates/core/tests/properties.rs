mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use twcx::bundle::Bundle;
use twcx::cech::{gauge_transform, invert_graded, mc_residual, HomElement};
use twcx::generate::{generate, GenerateParams};
use twcx::linalg::BaseRing;
use twcx::random;
use twcx::simplicial::{cylinder, homotopy_from_cylinder, projection, SimplicialMap};
use twcx::twisted::{pullback_type, TwistedComplex};

use common::*;

fn ring(p: bool) -> BaseRing {
    if p {
        gf101()
    } else {
        q()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn homology_has_the_euler_characteristic_of_the_module(seed in any::<u64>(), p in any::<bool>()) {
        let mut rng = random::rng(seed);
        let c = random::complex(ring(p), -1, 2, 4, &mut rng).unwrap();
        let chi: i64 = c.homology_dims().unwrap().iter().map(|(&d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) }).sum();
        prop_assert_eq!(chi, c.module().euler_characteristic());
    }

    #[test]
    fn nerves_and_cylinders_satisfy_the_simplicial_identities(seed in any::<u64>(), sets in 1usize..=4, n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let s = space(rng.gen_range(1..=5), sets, n, &mut rng);
        prop_assert!(s.validate().passed());
        prop_assert!(s.validate_face_composites().passed());
        let cyl = cylinder(s).unwrap();
        prop_assert!(cyl.space.validate().passed());
        let id = SimplicialMap::identity(cyl.space.clone());
        let (h, _) = homotopy_from_cylinder(&cyl, &id).unwrap();
        prop_assert!(h.validate().passed());
    }

    #[test]
    fn composition_is_associative_and_delta_is_a_derivation(seed in any::<u64>(), p in any::<bool>()) {
        let mut rng = random::rng(seed);
        let s = space(rng.gen_range(2..=4), rng.gen_range(1..=3), 3, &mut rng);
        let r = ring(p);
        let (e, f, g) = (sheaf(r, &s, &mut rng), sheaf(r, &s, &mut rng), sheaf(r, &s, &mut rng));
        let (du, dv) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let u = element(&f, &g, du, &mut rng);
        let v = element(&e, &f, dv, &mut rng);
        let w = element(&e, &e, rng.gen_range(-1..=1), &mut rng);
        let ct = |a: &HomElement, b: &HomElement| a.compose_truncated(b).unwrap();
        prop_assert_eq!(ct(&ct(&u, &v), &w), ct(&u, &ct(&v, &w)));
        let lhs = ct(&u, &v).delta_truncated();
        let rhs = ct(&u.delta_truncated(), &v).add(&ct(&u, &v.delta_truncated()).signed(du % 2 == 0)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(v.delta_truncated().delta_truncated().is_zero());
    }

    #[test]
    fn pullback_is_a_map_of_dg_algebras(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = space(rng.gen_range(2..=4), rng.gen_range(1..=3), 2, &mut rng);
        let (e, f) = (sheaf(q(), &s, &mut rng), sheaf(q(), &s, &mut rng));
        let u = element(&f, &f, rng.gen_range(-1..=1), &mut rng);
        let v = element(&e, &f, rng.gen_range(-1..=1), &mut rng);
        let map = projection(&cylinder(s).unwrap()).unwrap();
        let pb = |a: &HomElement| a.pullback(&map).unwrap();
        prop_assert_eq!(pb(&u.compose_truncated(&v).unwrap()), pb(&u).compose_truncated(&pb(&v)).unwrap());
        prop_assert_eq!(pb(&v.delta_truncated()), pb(&v).delta_truncated());
    }

    #[test]
    fn gauge_transforms_preserve_maurer_cartan(seed in any::<u64>(), p in any::<bool>()) {
        let mut rng = random::rng(seed);
        let s = space(rng.gen_range(2..=4), rng.gen_range(1..=3), 3, &mut rng);
        let c = random::complex(ring(p), 0, 1, 3, &mut rng).unwrap();
        let base = pullback_type(s, &c).unwrap();
        let u = random::gauge(base.sheaf(), &mut rng, 0.6).unwrap();
        let ui = invert_graded(&u).unwrap();
        prop_assert!(u.compose_truncated(&ui).unwrap().sub(&HomElement::identity(base.sheaf().clone())).unwrap().is_zero());
        let a = gauge_transform(&u, base.a()).unwrap();
        prop_assert!(mc_residual(&a).unwrap().is_zero());
        let t = TwistedComplex::new(base.sheaf().clone(), a).unwrap();
        prop_assert!(t.check_nondegenerate().unwrap().passed());
    }

    #[test]
    fn morphism_differential_squares_to_zero_and_is_a_derivation(seed in any::<u64>(), p in any::<bool>()) {
        let mut rng = random::rng(seed);
        let s = space(rng.gen_range(2..=3), rng.gen_range(1..=3), 3, &mut rng);
        let objs: Vec<Arc<TwistedComplex>> = (0..3).map(|_| twisted(ring(p), &s, &mut rng)).collect();
        let (m, n) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let u = morphism(&objs[0], &objs[1], n, &mut rng);
        let v = morphism(&objs[1], &objs[2], m, &mut rng);
        prop_assert!(u.differential().unwrap().differential().unwrap().is_zero());
        let lhs = v.compose(&u).unwrap().differential().unwrap();
        let rhs = v.differential().unwrap().compose(&u).unwrap()
            .add(&v.compose(&u.differential().unwrap()).unwrap().signed(m % 2 == 0)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn generated_bundles_round_trip_canonically(seed in any::<u64>(), p in any::<bool>()) {
        let params = GenerateParams { ring: ring(p), ..GenerateParams::default() };
        let g = generate(seed, &params).unwrap();
        let text = g.bundle.to_json();
        let again = Bundle::parse(&text).unwrap();
        prop_assert_eq!(again.to_json(), text);
    }
}
