use std::sync::Arc;

use serde::Serialize;

use super::cylinder::Cylinder;
use super::map::{same_space, SimplicialMap};
use super::space::SimplicialSpace;
use crate::error::{Error, Result};
use crate::validation::ValidationReport;

/// Combinatorial homotopy data `h_i^p : U_p → V_{p+1}`, `0 ≤ i ≤ p < N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialHomotopy {
    f: Arc<SimplicialMap>,
    g: Arc<SimplicialMap>,
    /// `h[p][i][x] = h_i^p(x)`.
    h: Vec<Vec<Vec<usize>>>,
}

/// Which cylinder end and step-function convention produced a homotopy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CylinderOrientation {
    /// `f = H∘ε₀`, `g = H∘ε₁`.
    Natural,
    /// `f = H∘ε₁`, `g = H∘ε₀`.
    Mirrored,
}

impl SimplicialHomotopy {
    pub fn new(f: Arc<SimplicialMap>, g: Arc<SimplicialMap>, h: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if !same_space(f.source(), g.source()) || !same_space(f.target(), g.target()) {
            return Err(Error::structural("homotopy ends have different source or target"));
        }
        let src = f.source();
        let tgt = f.target();
        let big_n = src.truncation();
        if h.len() != big_n {
            return Err(Error::structural(format!(
                "homotopy needs {big_n} levels, got {}",
                h.len()
            )));
        }
        for (p, level) in h.iter().enumerate() {
            if level.len() != p + 1 {
                return Err(Error::structural(format!(
                    "level {p} needs {} maps h_i, got {}",
                    p + 1,
                    level.len()
                )));
            }
            for (i, op) in level.iter().enumerate() {
                if op.len() != src.level_size(p) {
                    return Err(Error::structural(format!(
                        "h_{i} on level {p} has {} entries, expected {}",
                        op.len(),
                        src.level_size(p)
                    )));
                }
                if let Some(&bad) = op.iter().find(|&&v| v >= tgt.level_size(p + 1)) {
                    return Err(Error::structural(format!(
                        "h_{i} on level {p} maps to index {bad} out of range"
                    )));
                }
            }
        }
        Ok(SimplicialHomotopy { f, g, h })
    }

    /// `h_i = s_i ∘ f`, a homotopy from `f` to itself.
    pub fn constant(f: Arc<SimplicialMap>) -> Self {
        let tgt = f.target().clone();
        let h = (0..f.source().truncation())
            .map(|p| {
                (0..=p)
                    .map(|i| f.component(p).iter().map(|&y| tgt.degeneracy(p, i)[y]).collect())
                    .collect()
            })
            .collect();
        SimplicialHomotopy { g: f.clone(), f, h }
    }

    pub fn f(&self) -> &Arc<SimplicialMap> {
        &self.f
    }

    pub fn g(&self) -> &Arc<SimplicialMap> {
        &self.g
    }

    pub fn source(&self) -> &Arc<SimplicialSpace> {
        self.f.source()
    }

    pub fn target(&self) -> &Arc<SimplicialSpace> {
        self.f.target()
    }

    pub fn data(&self) -> &[Vec<Vec<usize>>] {
        &self.h
    }

    /// `h_i^p(x)`.
    #[inline]
    pub fn apply(&self, p: usize, i: usize, x: usize) -> usize {
        self.h[p][i][x]
    }

    /// Copy with one entry replaced; used by mutation tests.
    pub fn with_entry(&self, p: usize, i: usize, x: usize, value: usize) -> Result<Self> {
        let mut h = self.h.clone();
        *h.get_mut(p)
            .and_then(|l| l.get_mut(i))
            .and_then(|op| op.get_mut(x))
            .ok_or_else(|| Error::structural("homotopy entry out of range"))? = value;
        SimplicialHomotopy::new(self.f.clone(), self.g.clone(), h)
    }

    /// Every clause of the combinatorial homotopy conditions and the derived
    /// identities with faces, front and back face maps, wherever both sides
    /// lie within the truncation.
    pub fn validate(&self) -> ValidationReport {
        let u = self.source().clone();
        let v = self.target().clone();
        let big_n = u.truncation();
        let mut r = ValidationReport::new();
        for p in 0..big_n {
            for x in 0..u.level_size(p) {
                // (1) ends
                r.check(
                    v.face(p + 1, 0)[self.apply(p, 0, x)] == self.f.apply(p, x),
                    || "(1) ∂_0 h_0 = f".into(),
                    p,
                    &[0, 0],
                    x,
                );
                r.check(
                    v.face(p + 1, p + 1)[self.apply(p, p, x)] == self.g.apply(p, x),
                    || "(1) ∂_{p+1} h_p = g".into(),
                    p,
                    &[p + 1, p],
                    x,
                );
                // (2) faces of h
                for j in 0..=p {
                    let hj = self.apply(p, j, x);
                    for i in 0..=p + 1 {
                        let lhs = v.face(p + 1, i)[hj];
                        if i < j {
                            let rhs = self.apply(p - 1, j - 1, u.face(p, i)[x]);
                            r.check(lhs == rhs, || "(2) ∂_i h_j = h_{j-1} ∂_i (i<j)".into(), p, &[i, j], x);
                        } else if i == j && i != 0 {
                            let rhs = v.face(p + 1, i)[self.apply(p, i - 1, x)];
                            r.check(lhs == rhs, || "(2) ∂_i h_i = ∂_i h_{i-1}".into(), p, &[i, j], x);
                        } else if i > j + 1 {
                            let rhs = self.apply(p - 1, j, u.face(p, i - 1)[x]);
                            r.check(lhs == rhs, || "(2) ∂_i h_j = h_j ∂_{i-1} (i>j+1)".into(), p, &[i, j], x);
                        }
                    }
                }
                // (3) degeneracies of h
                if p + 2 <= big_n {
                    for j in 0..=p {
                        let hj = self.apply(p, j, x);
                        for i in 0..=p + 1 {
                            let lhs = v.degeneracy(p + 1, i)[hj];
                            if i <= j {
                                let rhs = self.apply(p + 1, j + 1, u.degeneracy(p, i)[x]);
                                r.check(lhs == rhs, || "(3) s_i h_j = h_{j+1} s_i (i<=j)".into(), p, &[i, j], x);
                            } else {
                                let rhs = self.apply(p + 1, j, u.degeneracy(p, i - 1)[x]);
                                r.check(lhs == rhs, || "(3) s_i h_j = h_j s_{i-1} (i>j)".into(), p, &[i, j], x);
                            }
                        }
                    }
                }
            }
        }
        r.merge(self.validate_derived());
        r
    }

    fn validate_derived(&self) -> ValidationReport {
        let u = self.source().clone();
        let v = self.target().clone();
        let big_n = u.truncation();
        let mut r = ValidationReport::new();
        for k in 0..big_n {
            for x in 0..u.level_size(k) {
                // h_i ∂_j on U_k, k ≥ 1
                if k >= 1 {
                    for j in 0..=k {
                        for i in 0..k {
                            let lhs = self.apply(k - 1, i, u.face(k, j)[x]);
                            let rhs = if i < j {
                                v.face(k + 1, j + 1)[self.apply(k, i, x)]
                            } else {
                                v.face(k + 1, j)[self.apply(k, i + 1, x)]
                            };
                            r.check(lhs == rhs, || "h_i ∂_j face identity".into(), k, &[i, j], x);
                        }
                    }
                }
                for p in 0..=k {
                    for i in 0..=p {
                        let lhs = self.apply(p, i, u.tau(k, p, x));
                        let rhs = v.tau(k + 1, p + 1, self.apply(k, i + k - p, x));
                        r.check(
                            lhs == rhs,
                            || "h_i τ_{k,p} = τ_{k+1,p+1} h_{i+k-p}".into(),
                            k,
                            &[i, p],
                            x,
                        );
                        let lhs = self.apply(p, i, u.rho(k, p, x));
                        let rhs = v.rho(k + 1, p + 1, self.apply(k, i, x));
                        r.check(lhs == rhs, || "h_i ρ_{k,p} = ρ_{k+1,p+1} h_i".into(), k, &[i, p], x);
                    }
                    for i in 0..=k - p {
                        let lhs = self.f.apply(p, u.tau(k, p, x));
                        let rhs = v.tau(k + 1, p, self.apply(k, i, x));
                        r.check(lhs == rhs, || "f τ_{k,p} = τ_{k+1,p} h_i".into(), k, &[i, p], x);
                    }
                    for i in p..=k {
                        let lhs = self.g.apply(p, u.rho(k, p, x));
                        let rhs = v.rho(k + 1, p, self.apply(k, i, x));
                        r.check(lhs == rhs, || "g ρ_{k,p} = ρ_{k+1,p} h_i".into(), k, &[i, p], x);
                    }
                }
            }
        }
        r
    }
}

/// Extracts `h_i^p(x) = H(s_i x, σ_i)` from a map on the cylinder, where
/// `σ_i ∈ Δ¹_{p+1}` has zeros exactly at positions `0..=i`.
///
/// The natural orientation `f = H∘ε₀` is tried first and the mirrored one
/// `f = H∘ε₁` second; the first that passes validation is returned with its
/// orientation. If neither passes this is a convention error.
pub fn homotopy_from_cylinder(
    cyl: &Cylinder,
    big_h: &SimplicialMap,
) -> Result<(SimplicialHomotopy, CylinderOrientation)> {
    if !same_space(big_h.source(), &cyl.space) {
        return Err(Error::structural("map is not defined on the given cylinder"));
    }
    let base = &cyl.base;
    let h: Vec<Vec<Vec<usize>>> = (0..base.truncation())
        .map(|p| {
            (0..=p)
                .map(|i| {
                    (0..base.level_size(p))
                        .map(|x| {
                            let sx = base.degeneracy(p, i)[x];
                            big_h.apply(p + 1, Cylinder::index(p + 1, sx, i + 1))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let at_0 = Arc::new(cyl.eps0.then(big_h)?);
    let at_1 = Arc::new(cyl.eps1.then(big_h)?);
    let mut failures = Vec::new();
    for (orientation, f, g) in [
        (CylinderOrientation::Natural, &at_0, &at_1),
        (CylinderOrientation::Mirrored, &at_1, &at_0),
    ] {
        let candidate = SimplicialHomotopy::new(f.clone(), g.clone(), h.clone())?;
        let mut report = candidate.validate();
        if report.passed() {
            return Ok((candidate, orientation));
        }
        report.violations.truncate(1);
        failures.push(format!("{orientation:?}: {}", report.violations[0]));
    }
    Err(Error::Convention(format!(
        "no cylinder orientation yields a valid homotopy ({})",
        failures.join("; ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::cylinder::{cylinder, projection};

    #[test]
    fn constant_homotopy_validates() {
        let s = Arc::new(SimplicialSpace::point(3));
        let h = SimplicialHomotopy::constant(Arc::new(SimplicialMap::identity(s)));
        assert!(h.validate().passed());
    }

    #[test]
    fn identity_of_cylinder_gives_homotopy_between_inclusions() {
        let cyl = cylinder(Arc::new(SimplicialSpace::point(3))).unwrap();
        let id = SimplicialMap::identity(cyl.space.clone());
        let (h, orientation) = homotopy_from_cylinder(&cyl, &id).unwrap();
        assert_eq!(orientation, CylinderOrientation::Mirrored);
        assert_eq!(**h.f(), cyl.eps1);
        assert_eq!(**h.g(), cyl.eps0);
    }

    #[test]
    fn projection_gives_constant_homotopy() {
        let base = Arc::new(SimplicialSpace::point(2));
        let cyl = cylinder(base.clone()).unwrap();
        let (h, _) = homotopy_from_cylinder(&cyl, &projection(&cyl).unwrap()).unwrap();
        let expected = SimplicialHomotopy::constant(Arc::new(SimplicialMap::identity(base)));
        assert_eq!(h.data(), expected.data());
    }

    #[test]
    fn wrong_entry_is_located() {
        let cyl = cylinder(Arc::new(SimplicialSpace::point(2))).unwrap();
        let id = SimplicialMap::identity(cyl.space.clone());
        let (h, _) = homotopy_from_cylinder(&cyl, &id).unwrap();
        let other = (h.apply(1, 0, 0) + 1) % cyl.space.level_size(2);
        let bad = h.with_entry(1, 0, 0, other).unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert!(!report.violations.is_empty());
    }
}
