mod common;

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use twcx::ainf::HomotopyPhi;
use twcx::bundle::Bundle;
use twcx::cech::{BlockKey, HomElement};
use twcx::linalg::{BaseRing, Matrix};
use twcx::random;
use twcx::simplicial::{SimplicialHomotopy, SimplicialMap};

use common::*;

/// `(−1)^{m−1} Σ_i (−1)^i (s_i)^*φ^{k+1,m−k−1}`, read straight off the blocks
/// of `φ`, for the constant homotopy at the identity.
fn expected_phi1(phi: &HomElement, m: i32) -> HomElement {
    let space = phi.source().space().clone();
    let mut out = HomElement::zero(phi.source().clone(), phi.target().clone());
    for k in 0..space.truncation() {
        let q = m - k as i32 - 1;
        for x in 0..space.level_size(k) {
            for i in 0..=k {
                let sx = space.degeneracy(k, i)[x];
                for (key, block) in phi.blocks() {
                    if key.p == k + 1 && key.q == q && key.x == sx {
                        let positive = (m - 1 + i as i32).rem_euclid(2) == 0;
                        let b = if positive { block.clone() } else { -block.clone() };
                        out.add_block(BlockKey { p: k, q, x, n: key.n }, &b).unwrap();
                    }
                }
            }
        }
    }
    out
}

#[test]
fn constant_homotopy_matches_independent_expansion() {
    let mut nonzero = 0;
    for seed in 0..12u64 {
        let mut rng = random::rng(seed);
        let ring = if seed % 2 == 0 { q() } else { gf101() };
        let s = space(rng.gen_range(2..=4), rng.gen_range(1..=3), 3, &mut rng);
        let (e, f) = (twisted(ring, &s, &mut rng), twisted(ring, &s, &mut rng));
        let m = rng.gen_range(-1..=1);
        let u = morphism(&e, &f, m, &mut rng);
        let id = Arc::new(SimplicialMap::identity(s.clone()));
        let phi = HomotopyPhi::new(Arc::new(SimplicialHomotopy::constant(id)));
        let got = phi.phi1(&u).unwrap();
        let want = expected_phi1(u.theta(), m);
        assert_eq!(got.degree(), m - 1);
        assert_eq!(*got.theta(), want, "seed {seed}");
        nonzero += usize::from(!want.is_zero());
    }
    assert!(nonzero >= 6, "only {nonzero} non-trivial cases");
}

#[test]
fn point_target_specialises_at_level_zero() {
    let b = Bundle::read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/point.json")).unwrap();
    let phi = HomotopyPhi::new(b.homotopy("h").unwrap().clone());
    let w = b.morphism("w").unwrap();
    let got = phi.phi1(w).unwrap();
    // m = 0, so Φ₁(w)^{0,−1} = −w^{1,−1} = −2 on E^1.
    let key = BlockKey {
        p: 0,
        q: -1,
        x: 0,
        n: 1,
    };
    assert_eq!(
        got.theta().get(&key),
        Some(&Matrix::from_i64(BaseRing::Rationals, 1, 1, &[-2]))
    );
    assert_eq!(got.theta().block_count(), 1);
}

#[test]
fn phi0_of_constant_homotopy_is_a_weak_equivalence_on_every_object() {
    let mut rng = random::rng(77);
    let s = space(4, 3, 3, &mut rng);
    let id = Arc::new(SimplicialMap::identity(s.clone()));
    let phi = HomotopyPhi::new(Arc::new(SimplicialHomotopy::constant(id)));
    for _ in 0..5 {
        let e = twisted(q(), &s, &mut rng);
        let p0 = phi.phi0(&e).unwrap();
        assert!(twcx::twisted::is_weak_equivalence(&p0).unwrap());
        assert!(phi.closedness_residual(&e).unwrap().is_zero());
    }
}
