//! Random fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use twcx::cech::{gauge_transform, GradedSheaf, HomElement};
use twcx::linalg::{BaseRing, GradedModule};
use twcx::random::{self, Rng64};
use twcx::simplicial::{nerve, SimplicialSpace};
use twcx::twisted::{pullback_type, TwistedComplex, TwistedMorphism};

pub fn q() -> BaseRing {
    BaseRing::Rationals
}

pub fn gf101() -> BaseRing {
    BaseRing::PrimeField { p: 101 }
}

/// Nerve of a random cover.
pub fn space(points: usize, sets: usize, truncation: usize, rng: &mut Rng64) -> Arc<SimplicialSpace> {
    let cover = random::cover(points, sets, rng);
    Arc::new(nerve(&cover, truncation).unwrap())
}

/// A sheaf with an independent random module (degrees `-1..=1`, ranks
/// `0..=2`) at every point.
pub fn sheaf(ring: BaseRing, space: &Arc<SimplicialSpace>, rng: &mut Rng64) -> Arc<GradedSheaf> {
    let modules = (0..space.level_size(0))
        .map(|_| GradedModule::new((-1..=1).map(|n| (n, rng.gen_range(0..=2))).collect::<BTreeMap<_, _>>()))
        .collect();
    Arc::new(GradedSheaf::new(ring, space.clone(), modules).unwrap())
}

/// A random element of total degree `total` with pieces at every level.
pub fn element(s: &Arc<GradedSheaf>, t: &Arc<GradedSheaf>, total: i32, rng: &mut Rng64) -> HomElement {
    let top = s.truncation();
    random::hom_element(s, t, total, 0..=top, rng, 0.5).unwrap()
}

/// A gauge transform of a pulled-back random complex.
pub fn twisted(ring: BaseRing, space: &Arc<SimplicialSpace>, rng: &mut Rng64) -> Arc<TwistedComplex> {
    let c = random::complex(ring, 0, 1, 2, rng).unwrap();
    let base = pullback_type(space.clone(), &c).unwrap();
    let u = random::gauge(base.sheaf(), rng, 0.6).unwrap();
    let a = gauge_transform(&u, base.a()).unwrap();
    Arc::new(TwistedComplex::new(base.sheaf().clone(), a).unwrap())
}

pub fn morphism(s: &Arc<TwistedComplex>, t: &Arc<TwistedComplex>, degree: i32, rng: &mut Rng64) -> TwistedMorphism {
    let theta = element(s.sheaf(), t.sheaf(), degree, rng);
    TwistedMorphism::new(s.clone(), t.clone(), degree, theta).unwrap()
}
