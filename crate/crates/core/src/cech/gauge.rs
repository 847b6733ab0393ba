use super::element::{BlockKey, HomElement};
use crate::error::{Error, Result};

/// `δa + a·a`, with pieces beyond the truncation dropped.
pub fn mc_residual(a: &HomElement) -> Result<HomElement> {
    a.delta_truncated().add(&a.compose_truncated(a)?)
}

/// Inverse of a total-degree-0 endomorphism whose `(0,0)` blocks are all
/// invertible. Higher pieces are nilpotent modulo the truncation, so the
/// Neumann series `Σ_k (−D⁻¹n)^k D⁻¹` is finite.
pub fn invert_graded(u: &HomElement) -> Result<HomElement> {
    if u.source() != u.target() {
        return Err(Error::structural("graded inverse needs an endomorphism"));
    }
    if let Some(d) = u.total_degrees().into_iter().find(|&d| d != 0) {
        return Err(Error::structural(format!(
            "graded inverse needs total degree 0, found {d}"
        )));
    }
    let sheaf = u.source().clone();
    let mut d_inv = HomElement::zero(sheaf.clone(), sheaf.clone());
    for y in 0..sheaf.space().level_size(0) {
        for (n, _) in sheaf.module(y).degrees() {
            let key = BlockKey { p: 0, q: 0, x: y, n };
            let inv = u.get(&key).and_then(|m| m.inverse()).ok_or_else(|| {
                Error::NotInvertible(format!(
                    "level-0 block at point {} degree {n} is singular",
                    sheaf.space().id(0, y)
                ))
            })?;
            d_inv.add_block(key, &inv)?;
        }
    }
    let nilpotent = u.levels(1..);
    let x = d_inv.compose_truncated(&nilpotent)?.neg();
    let mut power = HomElement::identity(sheaf.clone());
    let mut series = power.clone();
    for _ in 0..sheaf.truncation() {
        power = power.compose_truncated(&x)?;
        if power.is_zero() {
            break;
        }
        series.add_assign(&power)?;
    }
    let inverse = series.compose_truncated(&d_inv)?;
    let id = HomElement::identity(sheaf);
    if u.compose_truncated(&inverse)? != id || inverse.compose_truncated(u)? != id {
        return Err(Error::Verification("graded inverse failed its self-check".into()));
    }
    Ok(inverse)
}

/// `a' = u·a·u⁻¹ − (δu)·u⁻¹`.
///
/// The result is required to satisfy `δa' + a'·a' = 0`; a non-zero residual
/// is a convention error and no element is returned.
pub fn gauge_transform(u: &HomElement, a: &HomElement) -> Result<HomElement> {
    if !mc_residual(a)?.is_zero() {
        return Err(Error::invariant(
            "gauge input does not satisfy the Maurer–Cartan equation",
        ));
    }
    let u_inv = invert_graded(u)?;
    let conj = u.compose_truncated(a)?.compose_truncated(&u_inv)?;
    let conn = u.delta_truncated().compose_truncated(&u_inv)?;
    let out = conj.sub(&conn)?;
    let residual = mc_residual(&out)?;
    if let Some(k) = residual.first_block_key() {
        return Err(Error::Convention(format!(
            "gauge-transformed element has non-zero Maurer–Cartan residual at {k}"
        )));
    }
    Ok(out)
}
