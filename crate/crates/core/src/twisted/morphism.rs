use std::sync::Arc;

use super::complex::TwistedComplex;
use crate::cech::{BlockKey, HomElement};
use crate::error::{Error, Result};
use crate::linalg::{sign_positive, ChainMap, Scalar};
use crate::simplicial::SimplicialMap;

/// A degree-`m` morphism `θ = Σ_k θ^{k,m−k}` between twisted complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMorphism {
    source: Arc<TwistedComplex>,
    target: Arc<TwistedComplex>,
    degree: i32,
    theta: HomElement,
}

impl TwistedMorphism {
    /// Every piece of `theta` must have total degree `degree`.
    pub fn new(
        source: Arc<TwistedComplex>,
        target: Arc<TwistedComplex>,
        degree: i32,
        theta: HomElement,
    ) -> Result<Self> {
        let theta = theta.with_sheaves(source.sheaf().clone(), target.sheaf().clone())?;
        if let Some(d) = theta.total_degrees().into_iter().find(|&d| d != degree as i64) {
            return Err(Error::structural(format!(
                "morphism declared of degree {degree} has a piece of degree {d}"
            )));
        }
        Ok(TwistedMorphism {
            source,
            target,
            degree,
            theta,
        })
    }

    pub fn zero(source: Arc<TwistedComplex>, target: Arc<TwistedComplex>, degree: i32) -> Self {
        let theta = HomElement::zero(source.sheaf().clone(), target.sheaf().clone());
        TwistedMorphism {
            source,
            target,
            degree,
            theta,
        }
    }

    pub fn identity(object: Arc<TwistedComplex>) -> Self {
        let theta = HomElement::identity(object.sheaf().clone());
        TwistedMorphism {
            source: object.clone(),
            target: object,
            degree: 0,
            theta,
        }
    }

    pub fn source(&self) -> &Arc<TwistedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TwistedComplex> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn theta(&self) -> &HomElement {
        &self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.theta.is_zero()
    }

    fn same_hom_set(&self, other: &TwistedMorphism, what: &str) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::structural(format!(
                "{what}: degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        if !same_object(&self.source, &other.source) || !same_object(&self.target, &other.target) {
            return Err(Error::structural(format!("{what}: endpoints differ")));
        }
        Ok(())
    }

    pub fn add(&self, other: &TwistedMorphism) -> Result<TwistedMorphism> {
        self.same_hom_set(other, "sum")?;
        Ok(self.with_theta(self.theta.add(&other.theta)?))
    }

    pub fn sub(&self, other: &TwistedMorphism) -> Result<TwistedMorphism> {
        self.same_hom_set(other, "difference")?;
        Ok(self.with_theta(self.theta.sub(&other.theta)?))
    }

    pub fn scale(&self, s: &Scalar) -> TwistedMorphism {
        self.with_theta(self.theta.scale(s))
    }

    pub fn signed(&self, positive: bool) -> TwistedMorphism {
        self.with_theta(self.theta.signed(positive))
    }

    fn with_theta(&self, theta: HomElement) -> TwistedMorphism {
        TwistedMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            theta,
        }
    }

    /// `self · other`, i.e. `other` first. Levels beyond the truncation are
    /// dropped; they form a dg-ideal, so all identities survive exactly.
    pub fn compose(&self, other: &TwistedMorphism) -> Result<TwistedMorphism> {
        if !same_object(&self.source, &other.target) {
            return Err(Error::structural("composition: endpoints do not match"));
        }
        Ok(TwistedMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            theta: self.theta.compose_truncated(&other.theta)?,
        })
    }

    /// `dθ = δθ + b·θ − (−1)^m θ·a`, cross-checked against the explicit
    /// per-level expansion.
    pub fn differential(&self) -> Result<TwistedMorphism> {
        let compact = self.differential_compact()?;
        let explicit = self.differential_explicit();
        if compact != explicit {
            return Err(Error::Verification(format!(
                "compact and explicit morphism differentials differ at {:?}",
                compact.first_difference(&explicit)
            )));
        }
        Ok(TwistedMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree + 1,
            theta: compact,
        })
    }

    fn differential_compact(&self) -> Result<HomElement> {
        let a = self.source.a();
        let b = self.target.a();
        let bt = b.compose_truncated(&self.theta)?;
        let ta = self
            .theta
            .compose_truncated(a)?
            .signed(!sign_positive(self.degree as i64));
        self.theta.delta_truncated().add(&bt)?.add(&ta)
    }

    /// `(dθ)^{k,m+1−k} = Σ_{j=1}^{k−1} (−1)^j ∂_j^*θ^{k−1,m+1−k}
    ///  + Σ_l (−1)^{(1−l)(k−l)} ρ^*b^{l,1−l} τ^*θ^{k−l,m−k+l}
    ///  + Σ_l (−1)^{(m−l)(k−l)+m+1} ρ^*θ^{l,m−l} τ^*a^{k−l,1−k+l}`.
    ///
    /// The last sign includes the factor `−(−1)^m` of the compact form.
    fn differential_explicit(&self) -> HomElement {
        let space = self.source.sheaf().space().clone();
        let (a, b, theta) = (self.source.a(), self.target.a(), &self.theta);
        let m = self.degree;
        let mut out = HomElement::zero(self.source.sheaf().clone(), self.target.sheaf().clone());
        for k in 0..=space.truncation() {
            let q = m + 1 - k as i32;
            for z in 0..space.level_size(k) {
                for j in 1..k {
                    let y = space.face(k, j)[z];
                    for (n, blk) in theta.blocks_at(k - 1, q, y) {
                        out.add_block_unchecked(
                            BlockKey { p: k, q, x: z, n },
                            &blk.clone().signed(sign_positive(j as i64)),
                        );
                    }
                }
                for l in 0..=k {
                    let (xl, xr) = (space.rho(k, l, z), space.tau(k, k - l, z));
                    let r = (k - l) as i64;
                    let s_theta = m - (k - l) as i32;
                    let positive = sign_positive((1 - l as i64) * r);
                    for (n, v) in theta.blocks_at(k - l, s_theta, xr) {
                        if let Some(u) = b.get(&BlockKey {
                            p: l,
                            q: 1 - l as i32,
                            x: xl,
                            n: n + s_theta,
                        }) {
                            out.add_block_unchecked(BlockKey { p: k, q, x: z, n }, &(u * v).signed(positive));
                        }
                    }
                    let s_a = 1 - (k - l) as i32;
                    let positive = sign_positive((m as i64 - l as i64) * r + m as i64 + 1);
                    for (n, v) in a.blocks_at(k - l, s_a, xr) {
                        if let Some(u) = theta.get(&BlockKey {
                            p: l,
                            q: m - l as i32,
                            x: xl,
                            n: n + s_a,
                        }) {
                            out.add_block_unchecked(BlockKey { p: k, q, x: z, n }, &(u * v).signed(positive));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.differential()?.is_zero())
    }

    /// `f^*θ` between the pulled-back endpoints.
    pub fn pullback(&self, f: &SimplicialMap) -> Result<TwistedMorphism> {
        let source = Arc::new(self.source.pullback(f)?);
        let target = if Arc::ptr_eq(&self.source, &self.target) {
            source.clone()
        } else {
            Arc::new(self.target.pullback(f)?)
        };
        self.pullback_into(f, source, target)
    }

    /// `f^*θ` with endpoints supplied by the caller (they must equal the
    /// pullbacks of the endpoints).
    pub fn pullback_into(
        &self,
        f: &SimplicialMap,
        source: Arc<TwistedComplex>,
        target: Arc<TwistedComplex>,
    ) -> Result<TwistedMorphism> {
        let theta = self
            .theta
            .pullback_into(f, source.sheaf().clone(), target.sheaf().clone())?;
        TwistedMorphism::new(source, target, self.degree, theta)
    }

    /// The `(0,0)` component at point `y` as a map of complexes
    /// `(E(y), a^{0,1}) → (F(y), b^{0,1})`.
    pub fn point_chain_map(&self, y: usize) -> Result<ChainMap> {
        let components = self.theta.blocks_at(0, 0, y).map(|(n, m)| (n, m.clone())).collect();
        ChainMap::new(self.source.point_complex(y)?, self.target.point_complex(y)?, components)
    }
}

/// Pointer equality first, value equality as fallback.
pub(crate) fn same_object(a: &Arc<TwistedComplex>, b: &Arc<TwistedComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Closed, of degree 0, and a quasi-isomorphism on `(0,0)` components at
/// every point.
pub fn is_weak_equivalence(phi: &TwistedMorphism) -> Result<bool> {
    if phi.degree() != 0 || !phi.is_closed()? {
        return Ok(false);
    }
    let space = phi.source().sheaf().space().clone();
    for y in 0..space.level_size(0) {
        if !phi.point_chain_map(y)?.is_quasi_iso()? {
            return Ok(false);
        }
    }
    Ok(true)
}
