use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::sheaf::GradedSheaf;
use crate::error::{Error, Result};
use crate::linalg::{sign_positive, BaseRing, Matrix, Scalar};
use crate::mutation::{active, Mutation};
use crate::simplicial::SimplicialMap;

/// Address of one matrix block of a Hom-type cochain.
///
/// The block at `(p, q, x, n)` maps `E^n(τ_{p,0}x)` to `F^{n+q}(ρ_{p,0}x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockKey {
    pub p: usize,
    pub q: i32,
    pub x: usize,
    pub n: i32,
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) simplex {} degree {}", self.p, self.q, self.x, self.n)
    }
}

/// An element of `C^•(U, Hom^•(E, F))`: a finite sum of homogeneous pieces
/// `u^{p,q}`, stored sparsely. Zero blocks are never stored, so equality is
/// equality of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    source: Arc<GradedSheaf>,
    target: Arc<GradedSheaf>,
    blocks: BTreeMap<BlockKey, Matrix>,
}

pub(crate) fn check_same(a: &Arc<GradedSheaf>, b: &Arc<GradedSheaf>, what: &str) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::structural(format!("{what}: sheaves do not match")))
    }
}

impl HomElement {
    pub fn zero(source: Arc<GradedSheaf>, target: Arc<GradedSheaf>) -> Self {
        HomElement {
            source,
            target,
            blocks: BTreeMap::new(),
        }
    }

    /// The unit: identity matrices in bidegree `(0,0)`.
    pub fn identity(sheaf: Arc<GradedSheaf>) -> Self {
        let ring = sheaf.ring();
        let mut blocks = BTreeMap::new();
        for y in 0..sheaf.space().level_size(0) {
            for (n, r) in sheaf.module(y).degrees() {
                blocks.insert(BlockKey { p: 0, q: 0, x: y, n }, Matrix::identity(ring, r));
            }
        }
        HomElement {
            source: sheaf.clone(),
            target: sheaf,
            blocks,
        }
    }

    /// Builds an element from blocks, summing repeated keys.
    pub fn from_blocks(
        source: Arc<GradedSheaf>,
        target: Arc<GradedSheaf>,
        blocks: impl IntoIterator<Item = (BlockKey, Matrix)>,
    ) -> Result<Self> {
        let mut out = HomElement::zero(source, target);
        for (k, m) in blocks {
            out.add_block(k, &m)?;
        }
        Ok(out)
    }

    pub fn source(&self) -> &Arc<GradedSheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSheaf> {
        &self.target
    }

    pub fn ring(&self) -> BaseRing {
        self.source.ring()
    }

    pub fn truncation(&self) -> usize {
        self.source.truncation()
    }

    /// Shape `(rows, cols)` of the block at `key`, or an error when the
    /// simplex is out of range.
    pub fn block_shape(&self, key: &BlockKey) -> Result<(usize, usize)> {
        let space = self.source.space();
        if key.p > space.truncation() || key.x >= space.level_size(key.p) {
            return Err(Error::structural(format!("block {key} is outside the space")));
        }
        let first = space.first_vertex(key.p, key.x);
        let last = space.last_vertex(key.p, key.x);
        Ok((self.target.rank(first, key.n + key.q), self.source.rank(last, key.n)))
    }

    /// Adds `m` to the block at `key`.
    pub fn add_block(&mut self, key: BlockKey, m: &Matrix) -> Result<()> {
        let shape = self.block_shape(&key)?;
        if m.shape() != shape {
            return Err(Error::structural(format!(
                "block {key} has shape {:?}, expected {:?}",
                m.shape(),
                shape
            )));
        }
        if m.ring() != self.ring() {
            return Err(Error::structural(format!("block {key} is over {}", m.ring())));
        }
        self.add_block_unchecked(key, m);
        Ok(())
    }

    pub(crate) fn add_block_unchecked(&mut self, key: BlockKey, m: &Matrix) {
        if m.is_zero() {
            return;
        }
        match self.blocks.get_mut(&key) {
            Some(existing) => {
                existing.add_assign_ref(m);
                if existing.is_zero() {
                    self.blocks.remove(&key);
                }
            }
            None => {
                self.blocks.insert(key, m.clone());
            }
        }
    }

    pub fn get(&self, key: &BlockKey) -> Option<&Matrix> {
        self.blocks.get(key)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&BlockKey, &Matrix)> {
        self.blocks.iter()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks over simplex `x` of piece `(p, q)`, by internal degree.
    pub fn blocks_at(&self, p: usize, q: i32, x: usize) -> impl Iterator<Item = (i32, &Matrix)> {
        let lo = BlockKey { p, q, x, n: i32::MIN };
        let hi = BlockKey { p, q, x, n: i32::MAX };
        self.blocks.range(lo..=hi).map(|(k, m)| (k.n, m))
    }

    /// Bidegrees `(p, q)` with a non-zero piece.
    pub fn bidegrees(&self) -> BTreeSet<(usize, i32)> {
        self.blocks.keys().map(|k| (k.p, k.q)).collect()
    }

    /// Total degrees `p + q` of the non-zero pieces.
    pub fn total_degrees(&self) -> BTreeSet<i64> {
        self.blocks.keys().map(|k| k.p as i64 + k.q as i64).collect()
    }

    /// The homogeneous piece `u^{p,q}`.
    pub fn piece(&self, p: usize, q: i32) -> HomElement {
        let blocks = self
            .blocks
            .iter()
            .filter(|(k, _)| k.p == p && k.q == q)
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        HomElement {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    /// The sum of pieces with `p` in `range`.
    pub fn levels(&self, range: impl std::ops::RangeBounds<usize>) -> HomElement {
        let blocks = self
            .blocks
            .iter()
            .filter(|(k, _)| range.contains(&k.p))
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        HomElement {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn map_blocks(&self, f: impl Fn(&BlockKey, &Matrix) -> Matrix) -> HomElement {
        let blocks = self
            .blocks
            .iter()
            .map(|(k, m)| (*k, f(k, m)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        HomElement {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn scale(&self, s: &Scalar) -> HomElement {
        self.map_blocks(|_, m| m.scale(s))
    }

    pub fn neg(&self) -> HomElement {
        self.map_blocks(|_, m| -m.clone())
    }

    /// `±self`.
    pub fn signed(&self, positive: bool) -> HomElement {
        if positive {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn add(&self, other: &HomElement) -> Result<HomElement> {
        check_same(&self.source, &other.source, "sum")?;
        check_same(&self.target, &other.target, "sum")?;
        let mut out = self.clone();
        for (k, m) in &other.blocks {
            out.add_block_unchecked(*k, m);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomElement) -> Result<HomElement> {
        self.add(&other.neg())
    }

    /// Adds `other` in place.
    pub fn add_assign(&mut self, other: &HomElement) -> Result<()> {
        check_same(&self.source, &other.source, "sum")?;
        check_same(&self.target, &other.target, "sum")?;
        for (k, m) in &other.blocks {
            self.add_block_unchecked(*k, m);
        }
        Ok(())
    }

    /// The first block that differs from `other`, for residual reporting.
    pub fn first_difference(&self, other: &HomElement) -> Option<BlockKey> {
        let keys: BTreeSet<&BlockKey> = self.blocks.keys().chain(other.blocks.keys()).collect();
        keys.into_iter()
            .find(|k| self.blocks.get(k) != other.blocks.get(k))
            .copied()
    }

    pub fn first_block_key(&self) -> Option<BlockKey> {
        self.blocks.keys().next().copied()
    }

    /// `u·v`, erroring when a product piece would exceed the truncation.
    pub fn compose(&self, v: &HomElement) -> Result<HomElement> {
        let big_n = self.truncation();
        let max_u = self.blocks.keys().map(|k| k.p).max();
        let max_v = v.blocks.keys().map(|k| k.p).max();
        if let (Some(a), Some(b)) = (max_u, max_v) {
            if a + b > big_n {
                return Err(Error::Truncation(format!(
                    "composite reaches simplicial degree {} beyond truncation {big_n}",
                    a + b
                )));
            }
        }
        self.compose_truncated(v)
    }

    /// `u·v` with pieces beyond the truncation dropped.
    ///
    /// `(u·v)^{p+r,q+s} = (−1)^{qr} (ρ_{p+r,p}^*u^{p,q}) ∘ (τ_{p+r,r}^*v^{r,s})`.
    pub fn compose_truncated(&self, v: &HomElement) -> Result<HomElement> {
        check_same(&self.source, &v.target, "composition")?;
        let space = self.source.space().clone();
        let big_n = space.truncation();
        let drop_sign = active(Mutation::ComposeSign);
        let mut out = HomElement::zero(v.source.clone(), self.target.clone());
        for &(p, q) in &self.bidegrees() {
            for &(r, s) in &v.bidegrees() {
                let level = p + r;
                if level > big_n {
                    continue;
                }
                let positive = drop_sign || sign_positive(q as i64 * r as i64);
                for z in 0..space.level_size(level) {
                    let xu = space.rho(level, p, z);
                    let xv = space.tau(level, r, z);
                    for (n, vm) in v.blocks_at(r, s, xv) {
                        let key_u = BlockKey { p, q, x: xu, n: n + s };
                        if let Some(um) = self.blocks.get(&key_u) {
                            let prod = (um * vm).signed(positive);
                            out.add_block_unchecked(
                                BlockKey {
                                    p: level,
                                    q: q + s,
                                    x: z,
                                    n,
                                },
                                &prod,
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `δu`, erroring when a piece would exceed the truncation.
    pub fn delta(&self) -> Result<HomElement> {
        let big_n = self.truncation();
        if let Some(p) = self.blocks.keys().map(|k| k.p).max() {
            if p + 1 > big_n && p >= 1 {
                return Err(Error::Truncation(format!(
                    "δ of a degree-{p} piece exceeds truncation {big_n}"
                )));
            }
        }
        Ok(self.delta_truncated())
    }

    /// `(δu)^{p+1,q} = Σ_{k=1}^{p} (−1)^k ∂_k^* u^{p,q}`, dropping pieces
    /// beyond the truncation.
    pub fn delta_truncated(&self) -> HomElement {
        let space = self.source.space().clone();
        let big_n = space.truncation();
        let flip = active(Mutation::DeltaSign);
        let mut out = HomElement::zero(self.source.clone(), self.target.clone());
        for &(p, q) in &self.bidegrees() {
            if p == 0 || p + 1 > big_n {
                continue;
            }
            for z in 0..space.level_size(p + 1) {
                for k in 1..=p {
                    let y = space.face(p + 1, k)[z];
                    let positive = sign_positive(k as i64) != flip;
                    for (n, m) in self.blocks_at(p, q, y) {
                        out.add_block_unchecked(BlockKey { p: p + 1, q, x: z, n }, &m.clone().signed(positive));
                    }
                }
            }
        }
        out
    }

    /// `f^*u` with the pulled-back sheaves supplied by the caller.
    pub fn pullback_into(
        &self,
        f: &SimplicialMap,
        source: Arc<GradedSheaf>,
        target: Arc<GradedSheaf>,
    ) -> Result<HomElement> {
        if **f.target() != **self.source.space() {
            return Err(Error::structural("pullback map does not land in the element's space"));
        }
        if !Arc::ptr_eq(source.space(), f.source()) && **source.space() != **f.source() {
            return Err(Error::structural("pulled-back sheaf lives on the wrong space"));
        }
        let u_space = f.source();
        let preimages: Vec<Vec<Vec<usize>>> = (0..=u_space.truncation())
            .map(|p| {
                let mut pre = vec![Vec::new(); f.target().level_size(p)];
                for x in 0..u_space.level_size(p) {
                    pre[f.apply(p, x)].push(x);
                }
                pre
            })
            .collect();
        let mut out = HomElement::zero(source, target);
        for (k, m) in &self.blocks {
            for &x in &preimages[k.p][k.x] {
                out.add_block(BlockKey { x, ..*k }, m)?;
            }
        }
        Ok(out)
    }

    /// `f^*u`.
    pub fn pullback(&self, f: &SimplicialMap) -> Result<HomElement> {
        let source = Arc::new(self.source.pullback(f)?);
        let target = if Arc::ptr_eq(&self.source, &self.target) {
            source.clone()
        } else {
            Arc::new(self.target.pullback(f)?)
        };
        self.pullback_into(f, source, target)
    }

    /// Replaces the endpoint sheaves by equal ones (to share allocations).
    pub fn with_sheaves(&self, source: Arc<GradedSheaf>, target: Arc<GradedSheaf>) -> Result<HomElement> {
        check_same(&self.source, &source, "re-homing")?;
        check_same(&self.target, &target, "re-homing")?;
        Ok(HomElement {
            source,
            target,
            blocks: self.blocks.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::GradedModule;
    use crate::simplicial::SimplicialSpace;

    fn point_sheaf(n: usize, module: GradedModule) -> Arc<GradedSheaf> {
        Arc::new(GradedSheaf::constant(
            BaseRing::Rationals,
            Arc::new(SimplicialSpace::point(n)),
            module,
        ))
    }

    #[test]
    fn compose_sign_on_point() {
        let q = BaseRing::Rationals;
        let e = point_sheaf(2, GradedModule::new([(0, 1), (1, 1), (2, 1)]));
        let u = HomElement::from_blocks(
            e.clone(),
            e.clone(),
            [(BlockKey { p: 1, q: 1, x: 0, n: 0 }, Matrix::from_i64(q, 1, 1, &[2]))],
        )
        .unwrap();
        let v = HomElement::from_blocks(
            e.clone(),
            e.clone(),
            [(
                BlockKey {
                    p: 1,
                    q: 1,
                    x: 0,
                    n: -1,
                },
                Matrix::zeros(q, 1, 0),
            )],
        )
        .unwrap();
        assert!(v.is_zero());
        let v = HomElement::from_blocks(
            e.clone(),
            e.clone(),
            [(BlockKey { p: 1, q: 0, x: 0, n: 0 }, Matrix::from_i64(q, 1, 1, &[3]))],
        )
        .unwrap();
        // q = 1, r = 1
        let w = u.compose(&v).unwrap();
        let m = w.get(&BlockKey { p: 2, q: 1, x: 0, n: 0 }).unwrap();
        assert_eq!(m, &Matrix::from_i64(q, 1, 1, &[-6]));
    }

    #[test]
    fn identity_is_unit() {
        let q = BaseRing::Rationals;
        let e = point_sheaf(2, GradedModule::new([(0, 2)]));
        let u = HomElement::from_blocks(
            e.clone(),
            e.clone(),
            [(
                BlockKey { p: 1, q: 0, x: 0, n: 0 },
                Matrix::from_i64(q, 2, 2, &[1, 2, 3, 4]),
            )],
        )
        .unwrap();
        let id = HomElement::identity(e);
        assert_eq!(id.compose(&u).unwrap(), u);
        assert_eq!(u.compose(&id).unwrap(), u);
    }

    #[test]
    fn delta_of_level_zero_vanishes() {
        let q = BaseRing::Rationals;
        let e = point_sheaf(2, GradedModule::new([(0, 1)]));
        let u = HomElement::from_blocks(
            e.clone(),
            e,
            [(BlockKey { p: 0, q: 0, x: 0, n: 0 }, Matrix::from_i64(q, 1, 1, &[5]))],
        )
        .unwrap();
        assert!(u.delta().unwrap().is_zero());
    }

    #[test]
    fn overflow_is_reported() {
        let q = BaseRing::Rationals;
        let e = point_sheaf(1, GradedModule::new([(0, 1)]));
        let u = HomElement::from_blocks(
            e.clone(),
            e,
            [(BlockKey { p: 1, q: 0, x: 0, n: 0 }, Matrix::from_i64(q, 1, 1, &[1]))],
        )
        .unwrap();
        assert!(matches!(u.compose(&u), Err(Error::Truncation(_))));
        assert!(u.compose_truncated(&u).unwrap().is_zero());
    }
}
