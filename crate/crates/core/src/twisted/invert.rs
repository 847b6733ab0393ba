use std::sync::Arc;

use super::complex::TwistedComplex;
use super::morphism::TwistedMorphism;
use crate::cech::{hom_degree_range, BlockKey, GradedSheaf, HomElement};
use crate::error::{Error, Result};
use crate::linalg::{LinearSystem, Matrix};

/// A homotopy inverse `ψ` of `φ : E → F` with `ψ·φ − id = dη` and
/// `φ·ψ − id = dω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoInverse {
    pub psi: TwistedMorphism,
    pub eta: TwistedMorphism,
    pub omega: TwistedMorphism,
}

impl HoInverse {
    /// Exact re-check of all three witness equations.
    pub fn verify(&self, phi: &TwistedMorphism) -> Result<bool> {
        let id_e = TwistedMorphism::identity(phi.source().clone());
        let id_f = TwistedMorphism::identity(phi.target().clone());
        let closed = self.psi.is_closed()?;
        let left = self.psi.compose(phi)?.sub(&id_e)? == self.eta.differential()?;
        let right = phi.compose(&self.psi)?.sub(&id_f)? == self.omega.differential()?;
        Ok(closed && left && right)
    }
}

/// Smallest truncation for which the truncated system is equivalent to the
/// untruncated one: all equation levels `k` with `Hom^{1−k} ≠ 0` must fit.
pub fn required_truncation(e: &GradedSheaf, f: &GradedSheaf) -> usize {
    let lo = [(e, f), (f, e), (e, e), (f, f)]
        .into_iter()
        .filter_map(|(s, t)| hom_degree_range(s, t).map(|r| r.0))
        .min();
    lo.map_or(0, |lo| (1 - lo).max(0) as usize)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Unknown {
    Psi,
    Eta,
    Omega,
}

/// One scalar unknown: entry `(row, col)` of a block.
struct Slot {
    which: Unknown,
    key: BlockKey,
    row: usize,
    col: usize,
    shape: (usize, usize),
}

fn slots(which: Unknown, src: &GradedSheaf, tgt: &GradedSheaf, total: i32, out: &mut Vec<Slot>) {
    let space = src.space().clone();
    for k in 0..=space.truncation() {
        let q = total - k as i32;
        for x in 0..space.level_size(k) {
            let (from, to) = (space.last_vertex(k, x), space.first_vertex(k, x));
            for (n, cols) in src.module(from).degrees() {
                let rows = tgt.rank(to, n + q);
                for row in 0..rows {
                    for col in 0..cols {
                        out.push(Slot {
                            which,
                            key: BlockKey { p: k, q, x, n },
                            row,
                            col,
                            shape: (rows, cols),
                        });
                    }
                }
            }
        }
    }
}

type RowKey = (u8, BlockKey, usize, usize);

fn add_rows(sys: &mut LinearSystem<RowKey>, eq: u8, unknown: usize, image: &HomElement, negate: bool) {
    for (key, m) in image.blocks() {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    let v = if negate { -v.clone() } else { v.clone() };
                    sys.add_coefficient((eq, *key, i, j), unknown, &v);
                }
            }
        }
    }
}

fn add_rhs(sys: &mut LinearSystem<RowKey>, eq: u8, id: &HomElement) {
    for (key, m) in id.blocks() {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    sys.add_rhs((eq, *key, i, j), v);
                }
            }
        }
    }
}

/// Searches for `(ψ, η, ω)` by solving the linear system
/// `dψ = 0, ψ·φ − dη = id, φ·ψ − dω = id` in the truncated morphism spaces.
///
/// Returns `Ok(None)` exactly when the system is infeasible. A truncation
/// too small to contain every non-zero equation level is an error, never a
/// "no".
pub fn ho_invert(phi: &TwistedMorphism) -> Result<Option<HoInverse>> {
    if phi.degree() != 0 {
        return Err(Error::structural(format!(
            "ho_invert needs degree 0, found {}",
            phi.degree()
        )));
    }
    if !phi.is_closed()? {
        return Err(Error::invariant("ho_invert needs a closed morphism"));
    }
    let (e, f) = (phi.source().clone(), phi.target().clone());
    let (se, sf) = (e.sheaf().clone(), f.sheaf().clone());
    let need = required_truncation(&se, &sf);
    if se.truncation() < need {
        return Err(Error::Truncation(format!(
            "homotopy inversion needs truncation at least {need}, have {}",
            se.truncation()
        )));
    }
    let ring = se.ring();
    let mut all = Vec::new();
    slots(Unknown::Psi, &sf, &se, 0, &mut all);
    slots(Unknown::Eta, &se, &se, -1, &mut all);
    slots(Unknown::Omega, &sf, &sf, -1, &mut all);
    let mut sys: LinearSystem<RowKey> = LinearSystem::new(ring, all.len());
    for (idx, slot) in all.iter().enumerate() {
        let mut m = Matrix::zeros(ring, slot.shape.0, slot.shape.1);
        m.set(slot.row, slot.col, ring.one());
        match slot.which {
            Unknown::Psi => {
                let psi = single(&f, &e, 0, slot.key, &m)?;
                add_rows(&mut sys, 0, idx, psi.differential()?.theta(), false);
                add_rows(&mut sys, 1, idx, psi.compose(phi)?.theta(), false);
                add_rows(&mut sys, 2, idx, phi.compose(&psi)?.theta(), false);
            }
            Unknown::Eta => {
                let eta = single(&e, &e, -1, slot.key, &m)?;
                add_rows(&mut sys, 1, idx, eta.differential()?.theta(), true);
            }
            Unknown::Omega => {
                let omega = single(&f, &f, -1, slot.key, &m)?;
                add_rows(&mut sys, 2, idx, omega.differential()?.theta(), true);
            }
        }
    }
    add_rhs(&mut sys, 1, &HomElement::identity(se.clone()));
    add_rhs(&mut sys, 2, &HomElement::identity(sf.clone()));
    let Some(solution) = sys.solve()? else {
        return Ok(None);
    };
    let mut parts = [
        HomElement::zero(sf.clone(), se.clone()),
        HomElement::zero(se.clone(), se.clone()),
        HomElement::zero(sf.clone(), sf.clone()),
    ];
    for (slot, value) in all.iter().zip(solution) {
        if value.is_zero() {
            continue;
        }
        let mut m = Matrix::zeros(ring, slot.shape.0, slot.shape.1);
        m.set(slot.row, slot.col, value);
        parts[slot.which as usize].add_block(slot.key, &m)?;
    }
    let [psi, eta, omega] = parts;
    let witness = HoInverse {
        psi: TwistedMorphism::new(f.clone(), e.clone(), 0, psi)?,
        eta: TwistedMorphism::new(e.clone(), e, -1, eta)?,
        omega: TwistedMorphism::new(f.clone(), f, -1, omega)?,
    };
    if !witness.verify(phi)? {
        return Err(Error::Verification(
            "solved homotopy inverse failed its exact re-check".into(),
        ));
    }
    Ok(Some(witness))
}

fn single(
    src: &Arc<TwistedComplex>,
    tgt: &Arc<TwistedComplex>,
    degree: i32,
    key: BlockKey,
    m: &Matrix,
) -> Result<TwistedMorphism> {
    let mut theta = HomElement::zero(src.sheaf().clone(), tgt.sheaf().clone());
    theta.add_block(key, m)?;
    TwistedMorphism::new(src.clone(), tgt.clone(), degree, theta)
}
