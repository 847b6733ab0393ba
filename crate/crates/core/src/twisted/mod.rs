//! Twisted complexes `(E, a)` and their morphism complexes.

mod complex;
mod invert;
mod morphism;

pub use complex::{NondegeneracyEntry, NondegeneracyReport, TwistedComplex};
pub use invert::{ho_invert, required_truncation, HoInverse};
pub(crate) use morphism::same_object;
pub use morphism::{is_weak_equivalence, TwistedMorphism};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cech::{BlockKey, GradedSheaf, HomElement};
use crate::error::Result;
use crate::linalg::{BaseRing, ChainComplex, Matrix};
use crate::simplicial::SimplicialSpace;

/// The complex `C` pulled back to every point: `a^{0,1} = d_C`,
/// `a^{1,0} = id`, all higher pieces zero.
pub fn pullback_type(space: Arc<SimplicialSpace>, c: &ChainComplex) -> Result<TwistedComplex> {
    let ring = c.ring();
    let sheaf = Arc::new(GradedSheaf::constant(ring, space.clone(), c.module().clone()));
    let mut a = HomElement::zero(sheaf.clone(), sheaf.clone());
    for y in 0..space.level_size(0) {
        for (n, _) in c.module().degrees() {
            a.add_block(BlockKey { p: 0, q: 1, x: y, n }, &c.d(n))?;
        }
    }
    if space.truncation() >= 1 {
        for x in 0..space.level_size(1) {
            for (n, r) in c.module().degrees() {
                a.add_block(BlockKey { p: 1, q: 0, x, n }, &Matrix::identity(ring, r))?;
            }
        }
    }
    TwistedComplex::new(sheaf, a)
}

/// A chain complex from `(degree, rank)` pairs and differentials given as
/// integer row-major entries.
pub fn small_complex(ring: BaseRing, dims: &[(i32, usize)], diffs: &[(i32, &[i64])]) -> Result<ChainComplex> {
    let module = crate::linalg::GradedModule::new(dims.iter().copied());
    let differential: BTreeMap<i32, Matrix> = diffs
        .iter()
        .map(|&(n, e)| (n, Matrix::from_i64(ring, module.rank(n + 1), module.rank(n), e)))
        .collect();
    ChainComplex::new(ring, module, differential)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn q() -> BaseRing {
        BaseRing::Rationals
    }

    fn two_term() -> ChainComplex {
        // k --1--> k plus a free k in degree 1: homology k in degree 1.
        small_complex(q(), &[(0, 1), (1, 2)], &[(0, &[1, 0])]).unwrap()
    }

    #[test]
    fn pullback_type_point_is_mc() {
        let t = pullback_type(Arc::new(SimplicialSpace::point(3)), &two_term()).unwrap();
        assert!(t.mc_residual().unwrap().is_zero());
        let report = t.check_nondegenerate().unwrap();
        assert!(report.passed() && report.all_simplices_pass());
    }

    #[test]
    fn non_square_zero_differential_fails_only_in_bidegree_0_2() {
        let space = Arc::new(SimplicialSpace::point(2));
        let c = small_complex(q(), &[(0, 1), (1, 1), (2, 1)], &[(0, &[1]), (1, &[1])]).unwrap();
        let sheaf = Arc::new(GradedSheaf::constant(q(), space.clone(), c.module().clone()));
        let mut a = HomElement::zero(sheaf.clone(), sheaf.clone());
        for n in 0..2 {
            a.add_block(BlockKey { p: 0, q: 1, x: 0, n }, &c.d(n)).unwrap();
        }
        for n in 0..3 {
            a.add_block(BlockKey { p: 1, q: 0, x: 0, n }, &Matrix::identity(q(), 1))
                .unwrap();
        }
        assert!(matches!(
            TwistedComplex::new(sheaf.clone(), a.clone()),
            Err(Error::InvariantViolation(_))
        ));
        let t = TwistedComplex::candidate(sheaf, a).unwrap();
        let r = t.mc_residual().unwrap();
        assert_eq!(r.bidegrees().into_iter().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn zero_a10_is_degenerate() {
        let space = Arc::new(SimplicialSpace::point(1));
        let c = two_term();
        let sheaf = Arc::new(GradedSheaf::constant(q(), space.clone(), c.module().clone()));
        let mut a = HomElement::zero(sheaf.clone(), sheaf.clone());
        a.add_block(BlockKey { p: 0, q: 1, x: 0, n: 0 }, &c.d(0)).unwrap();
        let t = TwistedComplex::new(sheaf, a).unwrap();
        assert!(!t.check_nondegenerate().unwrap().passed());
    }

    #[test]
    fn identity_is_a_closed_weak_equivalence_with_trivial_inverse() {
        let t = Arc::new(pullback_type(Arc::new(SimplicialSpace::point(3)), &two_term()).unwrap());
        let id = TwistedMorphism::identity(t.clone());
        assert!(id.is_closed().unwrap());
        assert!(is_weak_equivalence(&id).unwrap());
        let w = ho_invert(&id).unwrap().unwrap();
        assert!(w.verify(&id).unwrap());
        let zero = TwistedMorphism::zero(t.clone(), t, 0);
        assert!(!is_weak_equivalence(&zero).unwrap());
        assert!(ho_invert(&zero).unwrap().is_none());
    }

    #[test]
    fn insufficient_truncation_is_an_error_not_a_no() {
        let c = small_complex(q(), &[(0, 1), (1, 1), (2, 1)], &[]).unwrap();
        let t = Arc::new(pullback_type(Arc::new(SimplicialSpace::point(1)), &c).unwrap());
        let id = TwistedMorphism::identity(t);
        assert!(matches!(ho_invert(&id), Err(Error::Truncation(_))));
    }
}
