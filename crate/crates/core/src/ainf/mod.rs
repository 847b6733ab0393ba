//! A∞-prenatural transformations between pullback functors, the
//! differential `d^∞`, and the transformation `Φ : f^* ⇒ g^*` induced by a
//! simplicial homotopy.
//!
//! Transformations are evaluated extensionally: a [`Prenat`] answers
//! `Φ^l(u_l ⊗ … ⊗ u_1)` for any composable chain it is asked about, and
//! identities are checked on a finite [`ProbeSet`].

mod dinf;
mod functor;
mod homotopy;
mod prenat;
mod probe;

pub use dinf::{Convention, DInfinity};
pub use functor::Pullback;
pub use homotopy::{build_phi0, build_phi1, HomotopyPhi};
pub use prenat::{
    chain_degree, chain_ends, compose_chain, zero_value, Composite, IdentityPrenat, ObjectwisePrenat, Prenat,
    RandomPrenat,
};
pub use probe::{
    agree, check_phi, dinf_squared, objectwise_inverse, verify_closed, verify_quasi_inverse, InverseTriple,
    ObjectwiseInverse, PhiReport, ProbeSet, QuasiInverseLevel, DEFAULT_CHAIN_CAP,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cech::gauge_transform;
    use crate::linalg::BaseRing;
    use crate::random::{self, Rng64};
    use crate::simplicial::{cylinder, homotopy_from_cylinder, SimplicialHomotopy, SimplicialMap};
    use crate::twisted::{pullback_type, TwistedComplex, TwistedMorphism};

    fn q() -> BaseRing {
        BaseRing::Rationals
    }

    fn object(space: &Arc<crate::simplicial::SimplicialSpace>, rng: &mut Rng64) -> Arc<TwistedComplex> {
        let c = random::complex(q(), 0, 1, 2, rng).unwrap();
        let base = pullback_type(space.clone(), &c).unwrap();
        let u = random::gauge(base.sheaf(), rng, 0.6).unwrap();
        let a = gauge_transform(&u, base.a()).unwrap();
        Arc::new(TwistedComplex::new(base.sheaf().clone(), a).unwrap())
    }

    fn probe(space: &Arc<crate::simplicial::SimplicialSpace>, seed: u64) -> ProbeSet {
        let mut rng = random::rng(seed);
        let objects = vec![object(space, &mut rng), object(space, &mut rng)];
        let mut morphisms = Vec::new();
        for deg in [-1, 0, 1] {
            for (s, t) in [(0, 1), (1, 0), (0, 0)] {
                let (src, tgt) = (objects[s].clone(), objects[t].clone());
                let top = space.truncation();
                let theta = random::hom_element(src.sheaf(), tgt.sheaf(), deg, 0..=top, &mut rng, 0.5).unwrap();
                morphisms.push(TwistedMorphism::new(src, tgt, deg, theta).unwrap());
            }
        }
        ProbeSet::new(objects, morphisms)
    }

    /// The homotopy between the two ends of the cylinder on a point.
    fn cylinder_homotopy(n: usize) -> Arc<SimplicialHomotopy> {
        let cyl = cylinder(random::point(n)).unwrap();
        let id = SimplicialMap::identity(cyl.space.clone());
        Arc::new(homotopy_from_cylinder(&cyl, &id).unwrap().0)
    }

    #[test]
    fn phi_from_cylinder_is_closed_and_natural_up_to_homotopy() {
        let h = cylinder_homotopy(4);
        let probe = probe(h.target(), 3);
        let (_, report) = check_phi(&h, &probe, 3).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn reindexing_identities_hold_on_the_cylinder() {
        let h = cylinder_homotopy(4);
        let phi = HomotopyPhi::new(h.clone());
        assert!(phi.reindexing_faces().passed());
        let p = probe(h.target(), 9);
        for a in &p.morphisms {
            for b in &p.morphisms {
                if !Arc::ptr_eq(a.target(), b.source()) {
                    continue;
                }
                let (m, n) = (b.degree(), a.degree());
                let front = phi.reindexing_front(b.theta(), m, a.theta(), n).unwrap();
                let back = phi.reindexing_back(b.theta(), m, a.theta(), n).unwrap();
                assert!(front.passed(), "{front:?}");
                assert!(back.passed(), "{back:?}");
            }
        }
    }

    #[test]
    fn constant_homotopy_of_identity_gives_closed_phi() {
        let space = random::point(3);
        let h = Arc::new(SimplicialHomotopy::constant(Arc::new(SimplicialMap::identity(
            space.clone(),
        ))));
        let (_, report) = check_phi(&h, &probe(&space, 4), 3).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    fn random_prenat(
        space: &Arc<crate::simplicial::SimplicialSpace>,
        p: &ProbeSet,
        degree: i32,
        seed: u64,
    ) -> Arc<dyn Prenat> {
        let id = Pullback::new(Arc::new(SimplicialMap::identity(space.clone())));
        let mut rng = random::rng(seed);
        Arc::new(RandomPrenat::new(id.clone(), id, degree, &p.objects, 4, &mut rng, 0.5).unwrap())
    }

    #[test]
    fn corrected_dinf_squares_to_zero() {
        let space = random::point(3);
        let p = probe(&space, 5);
        for degree in [-1, 0, 1] {
            let phi = random_prenat(&space, &p, degree, (11 + degree) as u64);
            let r = dinf_squared(phi, &p, 3, Convention::Corrected).unwrap();
            assert!(r.passed(), "degree {degree}: {r:?}");
        }
    }

    #[test]
    fn verbatim_dinf_does_not_square_to_zero() {
        let space = random::point(3);
        let p = probe(&space, 5);
        let phi = random_prenat(&space, &p, 0, 21);
        assert!(dinf_squared(phi.clone(), &p, 0, Convention::Verbatim).unwrap().passed());
        assert!(!dinf_squared(phi, &p, 3, Convention::Verbatim).unwrap().passed());
    }

    #[test]
    fn conventions_agree_in_degree_zero() {
        let space = random::point(3);
        let p = probe(&space, 6);
        let phi = random_prenat(&space, &p, 0, 7);
        let a = DInfinity::new(phi.clone(), Convention::Verbatim);
        let b = DInfinity::new(phi, Convention::Corrected);
        assert!(agree(&a, &b, &p, 3, "conventions").unwrap().passed());
    }

    #[test]
    fn composite_with_identity_is_unchanged() {
        let space = random::point(3);
        let p = probe(&space, 8);
        let phi = random_prenat(&space, &p, 0, 2);
        let id: Arc<dyn Prenat> = Arc::new(IdentityPrenat::new(phi.source().clone()));
        let left = Composite::new(phi.clone(), id.clone()).unwrap();
        let right = Composite::new(id, phi.clone()).unwrap();
        assert!(agree(&left, phi.as_ref(), &p, 3, "Φ∘id").unwrap().passed());
        assert!(agree(&right, phi.as_ref(), &p, 3, "id∘Φ").unwrap().passed());
    }

    #[test]
    fn objectwise_inverse_of_phi_passes_at_level_zero() {
        let h = cylinder_homotopy(4);
        let p = probe(h.target(), 12);
        let phi = Arc::new(HomotopyPhi::new(h));
        let inv = objectwise_inverse(phi.as_ref(), &p.objects).unwrap();
        assert!(inv.exists());
        let (psi, eta, omega) = inv.assemble(phi.as_ref()).unwrap();
        let src = ProbeSet::new(p.objects.clone(), Vec::new());
        let rows = verify_quasi_inverse(phi, psi, eta, omega, &src, &src, 0).unwrap();
        assert!(rows.iter().all(|r| r.report.passed()), "{rows:?}");
    }
}
