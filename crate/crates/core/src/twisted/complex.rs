use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cech::{mc_residual, BlockKey, GradedSheaf, HomElement};
use crate::error::{Error, Result};
use crate::linalg::{sign_positive, BaseRing, ChainComplex, ChainMap};
use crate::simplicial::SimplicialMap;

/// A graded sheaf with a total-degree-1 element `a = Σ_k a^{k,1−k}`
/// satisfying `δa + a·a = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    sheaf: Arc<GradedSheaf>,
    a: HomElement,
}

/// Non-degeneracy status of `a^{1,0}` at one 1-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NondegeneracyEntry {
    pub simplex: String,
    pub degenerate: bool,
    pub quasi_isomorphism: bool,
}

/// Required at degenerate 1-simplices, informative elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NondegeneracyReport {
    pub entries: Vec<NondegeneracyEntry>,
}

impl NondegeneracyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !e.degenerate || e.quasi_isomorphism)
    }

    pub fn all_simplices_pass(&self) -> bool {
        self.entries.iter().all(|e| e.quasi_isomorphism)
    }
}

impl TwistedComplex {
    /// Checks degrees and the Maurer–Cartan equation.
    pub fn new(sheaf: Arc<GradedSheaf>, a: HomElement) -> Result<Self> {
        let t = TwistedComplex::candidate(sheaf, a)?;
        if let Some(k) = t.mc_residual()?.first_block_key() {
            return Err(Error::invariant(format!("Maurer–Cartan residual is non-zero at {k}")));
        }
        Ok(t)
    }

    /// Checks degrees only; the Maurer–Cartan equation may fail.
    pub fn candidate(sheaf: Arc<GradedSheaf>, a: HomElement) -> Result<Self> {
        let a = a.with_sheaves(sheaf.clone(), sheaf.clone())?;
        if let Some(d) = a.total_degrees().into_iter().find(|&d| d != 1) {
            return Err(Error::structural(format!(
                "twisting element has a piece of total degree {d}"
            )));
        }
        Ok(TwistedComplex { sheaf, a })
    }

    pub fn sheaf(&self) -> &Arc<GradedSheaf> {
        &self.sheaf
    }

    pub fn a(&self) -> &HomElement {
        &self.a
    }

    pub fn ring(&self) -> BaseRing {
        self.sheaf.ring()
    }

    pub fn truncation(&self) -> usize {
        self.sheaf.truncation()
    }

    /// `δa + a·a` in compact form, cross-checked against the explicit
    /// per-level expansion.
    pub fn mc_residual(&self) -> Result<HomElement> {
        let compact = mc_residual(&self.a)?;
        let explicit = self.mc_residual_explicit();
        if compact != explicit {
            return Err(Error::Verification(format!(
                "compact and explicit Maurer–Cartan residuals differ at {:?}",
                compact.first_difference(&explicit)
            )));
        }
        Ok(compact)
    }

    /// `Σ_{j=1}^{k−1} (−1)^j ∂_j^* a^{k−1,2−k}
    ///  + Σ_{j=0}^{k} (−1)^{(1−j)(k−j)} ρ_{k,j}^* a^{j,1−j} τ_{k,k−j}^* a^{k−j,1−k+j}`.
    pub fn mc_residual_explicit(&self) -> HomElement {
        let space = self.sheaf.space().clone();
        let a = &self.a;
        let mut out = HomElement::zero(self.sheaf.clone(), self.sheaf.clone());
        for k in 0..=space.truncation() {
            let q = 2 - k as i32;
            for z in 0..space.level_size(k) {
                for j in 1..k {
                    let y = space.face(k, j)[z];
                    for (n, m) in a.blocks_at(k - 1, q, y) {
                        out.add_block_unchecked(
                            BlockKey { p: k, q, x: z, n },
                            &m.clone().signed(sign_positive(j as i64)),
                        );
                    }
                }
                for j in 0..=k {
                    let xl = space.rho(k, j, z);
                    let xr = space.tau(k, k - j, z);
                    let qr = 1 - (k - j) as i32;
                    let positive = sign_positive((1 - j as i64) * (k - j) as i64);
                    for (n, v) in a.blocks_at(k - j, qr, xr) {
                        if let Some(u) = a.get(&BlockKey {
                            p: j,
                            q: 1 - j as i32,
                            x: xl,
                            n: n + qr,
                        }) {
                            out.add_block_unchecked(BlockKey { p: k, q, x: z, n }, &(u * v).signed(positive));
                        }
                    }
                }
            }
        }
        out
    }

    /// `(E(y), a^{0,1}(y))`.
    pub fn point_complex(&self, y: usize) -> Result<ChainComplex> {
        let module = self.sheaf.module(y).clone();
        let differential: BTreeMap<i32, _> = self.a.blocks_at(0, 1, y).map(|(n, m)| (n, m.clone())).collect();
        ChainComplex::new(self.ring(), module, differential)
    }

    /// Tests `a^{1,0}(y) : (E(τy), a^{0,1}) → (E(ρy), a^{0,1})` for
    /// quasi-isomorphism at every 1-simplex.
    pub fn check_nondegenerate(&self) -> Result<NondegeneracyReport> {
        let residual = self.mc_residual()?;
        if !residual.is_zero() {
            return Err(Error::invariant("non-degeneracy check needs a Maurer–Cartan element"));
        }
        let space = self.sheaf.space().clone();
        let mut report = NondegeneracyReport::default();
        if space.truncation() == 0 {
            return Ok(report);
        }
        let degenerate: std::collections::BTreeSet<usize> = space.degeneracy(0, 0).iter().copied().collect();
        for y in 0..space.level_size(1) {
            let src = self.point_complex(space.last_vertex(1, y))?;
            let tgt = self.point_complex(space.first_vertex(1, y))?;
            let components = self.a.blocks_at(1, 0, y).map(|(n, m)| (n, m.clone())).collect();
            let map = ChainMap::new(src, tgt, components)?;
            report.entries.push(NondegeneracyEntry {
                simplex: space.id(1, y).to_string(),
                degenerate: degenerate.contains(&y),
                quasi_isomorphism: map.is_quasi_iso()?,
            });
        }
        Ok(report)
    }

    /// `f^*E` with `(f^*a)^{k,1−k} = f_k^* a^{k,1−k}`.
    pub fn pullback(&self, f: &SimplicialMap) -> Result<TwistedComplex> {
        let sheaf = Arc::new(self.sheaf.pullback(f)?);
        let a = self.a.pullback_into(f, sheaf.clone(), sheaf.clone())?;
        Ok(TwistedComplex { sheaf, a })
    }
}
