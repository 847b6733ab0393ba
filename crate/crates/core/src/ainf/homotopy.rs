use std::collections::BTreeMap;
use std::sync::Arc;

use super::functor::Pullback;
use super::prenat::{zero_value, Prenat};
use crate::cech::{hom_degree_range, BlockKey, GradedSheaf, HomElement};
use crate::error::{Error, Result};
use crate::linalg::sign_positive;
use crate::mutation::{active, Mutation};
use crate::simplicial::SimplicialHomotopy;
use crate::twisted::{TwistedComplex, TwistedMorphism};
use crate::validation::ValidationReport;

/// The transformation `Φ = {Φ_0, Φ_1, 0, …} : f^* ⇒ g^*` induced by a
/// homotopy `h` from `f` to `g`.
pub struct HomotopyPhi {
    h: Arc<SimplicialHomotopy>,
    f: Pullback,
    g: Pullback,
}

/// `out^{k, d−k−1} = Σ_{i=0}^{k} (−1)^i h_i^* θ^{k+1, d−k−1}`, optionally
/// negated.
///
/// At `k = N` the piece `θ^{N+1,·}` lies beyond the truncation; it vanishes
/// when `Hom^{d−N−1}` between the stalks is zero, and otherwise the
/// computation is refused.
fn transfer(
    h: &SimplicialHomotopy,
    theta: &HomElement,
    total: i32,
    source: Arc<GradedSheaf>,
    target: Arc<GradedSheaf>,
    positive: bool,
) -> Result<HomElement> {
    let u = h.source().clone();
    let big_n = u.truncation();
    if let Some((lo, _)) = hom_degree_range(theta.source(), theta.target()) {
        if lo < total - big_n as i32 {
            return Err(Error::Truncation(format!(
                "homotopy transfer at level {big_n} needs a level-{} piece of degree {}",
                big_n + 1,
                total - big_n as i32 - 1
            )));
        }
    }
    let mut out = HomElement::zero(source, target);
    for k in 0..big_n {
        let q = total - k as i32 - 1;
        for x in 0..u.level_size(k) {
            for i in 0..=k {
                let y = h.apply(k, i, x);
                let sign = sign_positive(i as i64) == positive;
                for (n, m) in theta.blocks_at(k + 1, q, y) {
                    out.add_block_unchecked(BlockKey { p: k, q, x, n }, &m.clone().signed(sign));
                }
            }
        }
    }
    Ok(out)
}

impl HomotopyPhi {
    pub fn new(h: Arc<SimplicialHomotopy>) -> Self {
        let f = Pullback::new(h.f().clone());
        let g = Pullback::new(h.g().clone());
        HomotopyPhi { h, f, g }
    }

    pub fn homotopy(&self) -> &Arc<SimplicialHomotopy> {
        &self.h
    }

    pub fn f(&self) -> &Pullback {
        &self.f
    }

    pub fn g(&self) -> &Pullback {
        &self.g
    }

    /// `Φ_0^{k,−k}(E) = Σ_{i=0}^{k} (−1)^i h_i^*(a^{k+1,−k})`.
    pub fn phi0(&self, e: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        let (fe, ge) = (self.f.object(e)?, self.g.object(e)?);
        let theta = transfer(&self.h, e.a(), 1, fe.sheaf().clone(), ge.sheaf().clone(), true)?;
        TwistedMorphism::new(fe, ge, 0, theta)
    }

    /// `[Φ_1(φ)]^{k,m−k−1} = (−1)^{m−1} Σ_{i=0}^{k} (−1)^i h_i^* φ^{k+1,m−k−1}`.
    pub fn phi1(&self, phi: &TwistedMorphism) -> Result<TwistedMorphism> {
        let m = phi.degree();
        let (fe, gf) = (self.f.object(phi.source())?, self.g.object(phi.target())?);
        let positive = active(Mutation::Phi1Sign) || sign_positive(m as i64 - 1);
        let theta = transfer(
            &self.h,
            phi.theta(),
            m,
            fe.sheaf().clone(),
            gf.sheaf().clone(),
            positive,
        )?;
        TwistedMorphism::new(fe, gf, m - 1, theta)
    }

    /// `dΦ_0(E)`; zero when `Φ_0(E)` is closed.
    pub fn closedness_residual(&self, e: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        self.phi0(e)?.differential()
    }

    /// `g^*(φ)·Φ_0(E) − (−1)^{|φ|} Φ_0(F)·f^*(φ)`, the failure of strict
    /// naturality of `Φ_0`.
    pub fn naturality_defect(&self, phi: &TwistedMorphism) -> Result<TwistedMorphism> {
        let left = self.g.morphism(phi)?.compose(&self.phi0(phi.source())?)?;
        let right = self.phi0(phi.target())?.compose(&self.f.morphism(phi)?)?;
        left.sub(&right.signed(sign_positive(phi.degree() as i64)))
    }

    /// `d[Φ_1(φ)] − Φ_1(dφ) + (−1)^{m−1} g^*(φ)Φ_0(E) + (−1)^m Φ_0(F) f^*(φ)`.
    pub fn level_one_residual(&self, phi: &TwistedMorphism) -> Result<TwistedMorphism> {
        let m = phi.degree() as i64;
        let a = self.phi1(phi)?.differential()?;
        let b = self.phi1(&phi.differential()?)?;
        let c = self.g.morphism(phi)?.compose(&self.phi0(phi.source())?)?;
        let d = self.phi0(phi.target())?.compose(&self.f.morphism(phi)?)?;
        a.sub(&b)?
            .add(&c.signed(sign_positive(m - 1)))?
            .add(&d.signed(sign_positive(m)))
    }

    /// `(−1)^{m−1} g^*(φ)·Φ_1(ψ) + (−1)^{−m−n+1} Φ_1(φ)·f^*(ψ)
    ///  + (−1)^m Φ_1(φ·ψ)` for `φ` of degree `m` after `ψ` of degree `n`.
    pub fn level_two_residual(&self, phi: &TwistedMorphism, psi: &TwistedMorphism) -> Result<TwistedMorphism> {
        let (m, n) = (phi.degree() as i64, psi.degree() as i64);
        let a = self.g.morphism(phi)?.compose(&self.phi1(psi)?)?;
        let b = self.phi1(phi)?.compose(&self.f.morphism(psi)?)?;
        let c = self.phi1(&phi.compose(psi)?)?;
        a.signed(sign_positive(m - 1))
            .add(&b.signed(sign_positive(-m - n + 1)))?
            .add(&c.signed(sign_positive(m)))
    }

    /// `Σ_{i=1}^{k−1} Σ_{j=0}^{k−1} (−1)^{i+j} ∂_i^* h_j^*
    ///  = Σ_{i=1}^{k} Σ_{j=0}^{k} (−1)^{i+j−1} h_j^* ∂_i^*`
    /// as formal signed sums of `k`-simplices of the target, per source
    /// simplex.
    pub fn reindexing_faces(&self) -> ValidationReport {
        let (u, v) = (self.h.source().clone(), self.h.target().clone());
        let mut r = ValidationReport::new();
        for k in 1..u.truncation() {
            for z in 0..u.level_size(k) {
                let mut diff: BTreeMap<usize, i64> = BTreeMap::new();
                for i in 1..k {
                    for j in 0..k {
                        let y = self.h.apply(k - 1, j, u.face(k, i)[z]);
                        *diff.entry(y).or_default() += if (i + j) % 2 == 0 { 1 } else { -1 };
                    }
                }
                for i in 1..=k {
                    for j in 0..=k {
                        let y = v.face(k + 1, i)[self.h.apply(k, j, z)];
                        *diff.entry(y).or_default() -= if (i + j) % 2 == 1 { 1 } else { -1 };
                    }
                }
                r.check(
                    diff.values().all(|&c| c == 0),
                    || "Σ ∂_i h_j = Σ h_j ∂_i (signed)".into(),
                    k,
                    &[],
                    z,
                );
            }
        }
        r
    }

    /// Block expansion of the front re-indexing identity for `φ : F → G`
    /// of degree `m` and `ψ : E → F` of degree `n`: the products
    /// `(ρ^*g^*φ^{i,m−i})(τ^*h_j^*ψ)` re-grouped under a single `h_j^*`.
    pub fn reindexing_front(&self, phi: &HomElement, m: i32, psi: &HomElement, n: i32) -> Result<ValidationReport> {
        let (u, v) = (self.h.source().clone(), self.h.target().clone());
        let g = self.h.g().clone();
        let (mut lhs, mut rhs) = self.product_frames(phi, psi)?;
        for k in 0..u.truncation() {
            for z in 0..u.level_size(k) {
                for i in 0..=k {
                    let xphi = g.apply(i, u.rho(k, i, z));
                    for j in 0..=k - i {
                        let xpsi = self.h.apply(k - i, j, u.tau(k, k - i, z));
                        let sign = sign_positive((m as i64 - i as i64) * (k - i) as i64 + j as i64);
                        let pieces = ((i, m - i as i32, xphi), (k - i + 1, n - 1 + i as i32 - k as i32, xpsi));
                        add_product(&mut lhs, k, z, phi, pieces.0, psi, pieces.1, sign);
                    }
                }
                for j in 0..=k {
                    let y = self.h.apply(k, j, z);
                    for i in 0..=j {
                        let sign = sign_positive(j as i64 + m as i64 + (m as i64 - i as i64) * (k + 1 - i) as i64);
                        let pieces = (
                            (i, m - i as i32, v.rho(k + 1, i, y)),
                            (k + 1 - i, n - 1 + i as i32 - k as i32, v.tau(k + 1, k + 1 - i, y)),
                        );
                        add_product(&mut rhs, k, z, phi, pieces.0, psi, pieces.1, sign);
                    }
                }
            }
        }
        Ok(compare_levels(
            &lhs,
            &rhs,
            u.truncation(),
            "front re-indexing of g^*φ · h^*ψ",
        ))
    }

    /// Block expansion of the back re-indexing identity: the products
    /// `(ρ^*h_j^*φ)(τ^*f^*ψ^{k−i,n+i−k})` re-grouped under a single `h_j^*`.
    pub fn reindexing_back(&self, phi: &HomElement, m: i32, psi: &HomElement, n: i32) -> Result<ValidationReport> {
        let (u, v) = (self.h.source().clone(), self.h.target().clone());
        let f = self.h.f().clone();
        let (mut lhs, mut rhs) = self.product_frames(phi, psi)?;
        for k in 0..u.truncation() {
            for z in 0..u.level_size(k) {
                for i in 0..=k {
                    let xpsi = f.apply(k - i, u.tau(k, k - i, z));
                    for j in 0..=i {
                        let xphi = self.h.apply(i, j, u.rho(k, i, z));
                        let sign = sign_positive((m as i64 - i as i64 - 1) * (k - i) as i64 + j as i64);
                        let pieces = ((i + 1, m - i as i32 - 1, xphi), (k - i, n + i as i32 - k as i32, xpsi));
                        add_product(&mut lhs, k, z, phi, pieces.0, psi, pieces.1, sign);
                    }
                }
                for j in 0..=k {
                    let y = self.h.apply(k, j, z);
                    for i in j + 1..=k + 1 {
                        let sign = sign_positive(j as i64 + (m as i64 - i as i64) * (k + 1 - i) as i64);
                        let pieces = (
                            (i, m - i as i32, v.rho(k + 1, i, y)),
                            (k + 1 - i, n - 1 + i as i32 - k as i32, v.tau(k + 1, k + 1 - i, y)),
                        );
                        add_product(&mut rhs, k, z, phi, pieces.0, psi, pieces.1, sign);
                    }
                }
            }
        }
        Ok(compare_levels(
            &lhs,
            &rhs,
            u.truncation(),
            "back re-indexing of h^*φ · f^*ψ",
        ))
    }

    /// Empty elements `f^*E → g^*G` for the re-indexing comparisons.
    fn product_frames(&self, phi: &HomElement, psi: &HomElement) -> Result<(HomElement, HomElement)> {
        let source = Arc::new(psi.source().pullback(self.h.f())?);
        let target = Arc::new(phi.target().pullback(self.h.g())?);
        let frame = HomElement::zero(source, target);
        Ok((frame.clone(), frame))
    }
}

type Piece = (usize, i32, usize);

#[allow(clippy::too_many_arguments)]
fn add_product(
    out: &mut HomElement,
    k: usize,
    z: usize,
    phi: &HomElement,
    l: Piece,
    psi: &HomElement,
    r: Piece,
    positive: bool,
) {
    for (n, v) in psi.blocks_at(r.0, r.1, r.2) {
        if let Some(u) = phi.get(&BlockKey {
            p: l.0,
            q: l.1,
            x: l.2,
            n: n + r.1,
        }) {
            out.add_block_unchecked(
                BlockKey {
                    p: k,
                    q: l.1 + r.1,
                    x: z,
                    n,
                },
                &(u * v).signed(positive),
            );
        }
    }
}

fn compare_levels(lhs: &HomElement, rhs: &HomElement, top: usize, name: &str) -> ValidationReport {
    let space = lhs.source().space().clone();
    let mut r = ValidationReport::new();
    for k in 0..top {
        for z in 0..space.level_size(k) {
            let a: Vec<_> = lhs.blocks().filter(|(key, _)| key.p == k && key.x == z).collect();
            let b: Vec<_> = rhs.blocks().filter(|(key, _)| key.p == k && key.x == z).collect();
            r.check(a == b, || name.to_string(), k, &[], z);
        }
    }
    r
}

impl Prenat for HomotopyPhi {
    fn degree(&self) -> i32 {
        0
    }
    fn source(&self) -> &Pullback {
        &self.f
    }
    fn target(&self) -> &Pullback {
        &self.g
    }
    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        self.phi0(x)
    }
    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
        match us {
            [u] => self.phi1(u),
            _ => zero_value(self, us),
        }
    }
}

/// `Φ_0(E) : f^*E → g^*E`.
pub fn build_phi0(h: &Arc<SimplicialHomotopy>, e: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
    HomotopyPhi::new(h.clone()).phi0(e)
}

/// `Φ_1(φ) : f^*E → g^*F` of degree `|φ| − 1`.
pub fn build_phi1(h: &Arc<SimplicialHomotopy>, phi: &TwistedMorphism) -> Result<TwistedMorphism> {
    HomotopyPhi::new(h.clone()).phi1(phi)
}
