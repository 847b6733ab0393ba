//! Bounded graded modules and cochain complexes (differential raises degree).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::BaseRing;
use crate::error::{Error, Result};

/// Ranks of a bounded free graded module, by degree. Degrees not present
/// have rank zero; zero ranks are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "BTreeMap<i32, usize>", into = "BTreeMap<i32, usize>")]
pub struct GradedModule {
    dims: BTreeMap<i32, usize>,
}

impl From<BTreeMap<i32, usize>> for GradedModule {
    fn from(dims: BTreeMap<i32, usize>) -> Self {
        GradedModule::new(dims)
    }
}

impl From<GradedModule> for BTreeMap<i32, usize> {
    fn from(m: GradedModule) -> Self {
        m.dims
    }
}

impl GradedModule {
    pub fn new(dims: impl IntoIterator<Item = (i32, usize)>) -> Self {
        GradedModule {
            dims: dims.into_iter().filter(|&(_, r)| r > 0).collect(),
        }
    }

    pub fn zero() -> Self {
        GradedModule::default()
    }

    pub fn rank(&self, degree: i32) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().map(|(&d, &r)| (d, r))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.dims.keys().next_back().copied()
    }

    pub fn total_rank(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&d, &r)| if d.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let mut dims = self.dims.clone();
        for (&d, &r) in &other.dims {
            *dims.entry(d).or_insert(0) += r;
        }
        GradedModule { dims }
    }
}

/// A cochain complex of finite free modules: `d_n : C^n → C^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: BaseRing,
    module: GradedModule,
    differential: BTreeMap<i32, Matrix>,
}

impl ChainComplex {
    /// Checks matrix shapes; `d∘d = 0` is checked by [`ChainComplex::check_square_zero`]
    /// and by the homology routines.
    pub fn new(ring: BaseRing, module: GradedModule, differential: BTreeMap<i32, Matrix>) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (n, m) in differential {
            let expected = (module.rank(n + 1), module.rank(n));
            if m.shape() != expected {
                return Err(Error::structural(format!(
                    "differential d_{n} has shape {:?}, expected {:?}",
                    m.shape(),
                    expected
                )));
            }
            if m.ring() != ring {
                return Err(Error::structural(format!("differential d_{n} is over {}", m.ring())));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        Ok(ChainComplex {
            ring,
            module,
            differential: kept,
        })
    }

    pub fn zero_differential(ring: BaseRing, module: GradedModule) -> Self {
        ChainComplex {
            ring,
            module,
            differential: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    /// `d_n`, materialized as a zero matrix of the right shape when absent.
    pub fn d(&self, n: i32) -> Matrix {
        self.differential
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring, self.module.rank(n + 1), self.module.rank(n)))
    }

    fn degree_range(&self) -> Vec<i32> {
        match (self.module.min_degree(), self.module.max_degree()) {
            (Some(lo), Some(hi)) => (lo..=hi).collect(),
            _ => Vec::new(),
        }
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for n in self.degree_range() {
            if !(&self.d(n + 1) * &self.d(n)).is_zero() {
                return Err(Error::invariant(format!("d_{} ∘ d_{n} ≠ 0", n + 1)));
            }
        }
        Ok(())
    }

    /// `dim H^n = dim ker d_n − rank d_{n−1}` for every degree in the support.
    pub fn homology_dims(&self) -> Result<BTreeMap<i32, usize>> {
        self.check_square_zero()?;
        let mut out = BTreeMap::new();
        for n in self.degree_range() {
            let dim = self.module.rank(n);
            let kernel = dim - self.d(n).rank();
            let image = self.d(n - 1).rank();
            out.insert(n, kernel - image);
        }
        Ok(out)
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.homology_dims()?.values().all(|&h| h == 0))
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let module = self.module.direct_sum(&other.module);
        let mut differential = BTreeMap::new();
        for n in self.degree_range().into_iter().chain(other.degree_range()) {
            let a = self.d(n);
            let b = other.d(n);
            let m = Matrix::block(
                self.ring,
                &[a.rows(), b.rows()],
                &[a.cols(), b.cols()],
                &[vec![Some(&a), None], vec![None, Some(&b)]],
            );
            differential.insert(n, m);
        }
        ChainComplex::new(self.ring, module, differential).expect("direct sum shapes")
    }
}

/// A degree-0 map of complexes, `f_n : A^n → B^n`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    components: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: BTreeMap<i32, Matrix>) -> Result<Self> {
        for (n, m) in &components {
            let expected = (target.module.rank(*n), source.module.rank(*n));
            if m.shape() != expected {
                return Err(Error::structural(format!(
                    "chain map component f_{n} has shape {:?}, expected {:?}",
                    m.shape(),
                    expected
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c
            .module
            .degrees()
            .map(|(n, r)| (n, Matrix::identity(c.ring, r)))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn component(&self, n: i32) -> Matrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.source.ring, self.target.module.rank(n), self.source.module.rank(n)))
    }

    fn degree_range(&self) -> Vec<i32> {
        let lo = [self.source.module.min_degree(), self.target.module.min_degree()]
            .into_iter()
            .flatten()
            .min();
        let hi = [self.source.module.max_degree(), self.target.module.max_degree()]
            .into_iter()
            .flatten()
            .max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => (lo..=hi).collect(),
            _ => Vec::new(),
        }
    }

    pub fn check_chain_map(&self) -> Result<()> {
        for n in self.degree_range() {
            let lhs = &self.component(n + 1) * &self.source.d(n);
            let rhs = &self.target.d(n) * &self.component(n);
            if lhs != rhs {
                return Err(Error::invariant(format!("f_{} ∘ d_{n} ≠ d_{n} ∘ f_{n}", n + 1)));
            }
        }
        Ok(())
    }

    /// `Cone(f)^n = A^{n+1} ⊕ B^n` with `d(a, b) = (−d_A a, f(a) + d_B b)`.
    pub fn mapping_cone(&self) -> ChainComplex {
        let ring = self.source.ring;
        let a = &self.source.module;
        let b = &self.target.module;
        let degrees = self.degree_range();
        let mut dims = BTreeMap::new();
        let mut differential = BTreeMap::new();
        if let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) {
            for n in (lo - 1)..=hi {
                dims.insert(n, a.rank(n + 1) + b.rank(n));
            }
            for n in (lo - 1)..=hi {
                let da = -self.source.d(n + 1);
                let f = self.component(n + 1);
                let db = self.target.d(n);
                let m = Matrix::block(
                    ring,
                    &[a.rank(n + 2), b.rank(n + 1)],
                    &[a.rank(n + 1), b.rank(n)],
                    &[vec![Some(&da), None], vec![Some(&f), Some(&db)]],
                );
                differential.insert(n, m);
            }
        }
        ChainComplex::new(ring, GradedModule::new(dims), differential).expect("cone shapes")
    }

    /// True iff the mapping cone is acyclic. Fails if `f` is not a chain map.
    pub fn is_quasi_iso(&self) -> Result<bool> {
        self.source.check_square_zero()?;
        self.target.check_square_zero()?;
        self.check_chain_map()?;
        self.mapping_cone().is_acyclic()
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::structural("chain maps are not composable"));
        }
        let components = self
            .degree_range()
            .into_iter()
            .chain(first.degree_range())
            .map(|n| (n, &self.component(n) * &first.component(n)))
            .collect();
        ChainMap::new(first.source.clone(), self.target.clone(), components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BaseRing {
        BaseRing::Rationals
    }

    #[test]
    fn zero_differential_homology_is_the_module() {
        let m = GradedModule::new([(0, 2), (1, 3)]);
        let c = ChainComplex::zero_differential(q(), m);
        let h = c.homology_dims().unwrap();
        assert_eq!(h, BTreeMap::from([(0, 2), (1, 3)]));
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let m = GradedModule::new([(0, 1), (1, 1)]);
        let c = ChainComplex::new(q(), m, BTreeMap::from([(0, Matrix::identity(q(), 1))])).unwrap();
        assert!(c.is_acyclic().unwrap());
    }

    #[test]
    fn non_square_zero_is_rejected() {
        let m = GradedModule::new([(0, 1), (1, 1), (2, 1)]);
        let d = BTreeMap::from([(0, Matrix::identity(q(), 1)), (1, Matrix::identity(q(), 1))]);
        let c = ChainComplex::new(q(), m, d).unwrap();
        assert!(matches!(c.homology_dims(), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn identity_and_zero_maps() {
        let m = GradedModule::new([(0, 2), (1, 1)]);
        let c = ChainComplex::zero_differential(q(), m);
        assert!(ChainMap::identity(&c).is_quasi_iso().unwrap());
        let zero = ChainMap::new(c.clone(), c.clone(), BTreeMap::new()).unwrap();
        assert!(!zero.is_quasi_iso().unwrap());
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let m = GradedModule::new([(0, 1), (1, 1)]);
        let c = ChainComplex::new(q(), m.clone(), BTreeMap::from([(0, Matrix::identity(q(), 1))])).unwrap();
        let flat = ChainComplex::zero_differential(q(), m);
        let f = ChainMap::new(
            c,
            flat,
            BTreeMap::from([(0, Matrix::identity(q(), 1)), (1, Matrix::identity(q(), 1))]),
        )
        .unwrap();
        assert!(matches!(f.is_quasi_iso(), Err(Error::InvariantViolation(_))));
    }
}
