use std::sync::Arc;

use super::space::SimplicialSpace;
use crate::error::{Error, Result};
use crate::validation::ValidationReport;

/// A levelwise map `f_n : U_n → V_n` between truncated simplicial sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Arc<SimplicialSpace>,
    target: Arc<SimplicialSpace>,
    components: Vec<Vec<usize>>,
}

impl SimplicialMap {
    /// Checks shapes and index ranges; compatibility with faces and
    /// degeneracies is checked by [`SimplicialMap::validate`].
    pub fn new(
        source: Arc<SimplicialSpace>,
        target: Arc<SimplicialSpace>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if source.truncation() != target.truncation() {
            return Err(Error::structural(format!(
                "map between truncations {} and {}",
                source.truncation(),
                target.truncation()
            )));
        }
        if components.len() != source.truncation() + 1 {
            return Err(Error::structural(format!(
                "map needs {} components, got {}",
                source.truncation() + 1,
                components.len()
            )));
        }
        for (n, c) in components.iter().enumerate() {
            if c.len() != source.level_size(n) {
                return Err(Error::structural(format!(
                    "component {n} has {} entries, source level has {}",
                    c.len(),
                    source.level_size(n)
                )));
            }
            if let Some(&bad) = c.iter().find(|&&v| v >= target.level_size(n)) {
                return Err(Error::structural(format!(
                    "component {n} maps to index {bad}, target level has {}",
                    target.level_size(n)
                )));
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(space: Arc<SimplicialSpace>) -> Self {
        let components = (0..=space.truncation())
            .map(|n| (0..space.level_size(n)).collect())
            .collect();
        SimplicialMap {
            source: space.clone(),
            target: space,
            components,
        }
    }

    pub fn source(&self) -> &Arc<SimplicialSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSpace> {
        &self.target
    }

    pub fn component(&self, n: usize) -> &[usize] {
        &self.components[n]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    #[inline]
    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.components[n][x]
    }

    /// `g ∘ self`: apply `self` first.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        if !same_space(&self.target, &g.source) {
            return Err(Error::structural("composed maps do not share a middle space"));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(n, c)| c.iter().map(|&x| g.components[n][x]).collect())
            .collect();
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: g.target.clone(),
            components,
        })
    }

    /// Compatibility with faces, degeneracies and the front/back face maps.
    pub fn validate(&self) -> ValidationReport {
        let s = &self.source;
        let t = &self.target;
        let mut report = ValidationReport::new();
        for n in 0..=s.truncation() {
            for x in 0..s.level_size(n) {
                let fx = self.apply(n, x);
                if n >= 1 {
                    for i in 0..=n {
                        let ok = self.apply(n - 1, s.face(n, i)[x]) == t.face(n, i)[fx];
                        report.check(ok, || "f∂_i = ∂_i f".into(), n, &[i], x);
                    }
                }
                if n < s.truncation() {
                    for i in 0..=n {
                        let ok = self.apply(n + 1, s.degeneracy(n, i)[x]) == t.degeneracy(n, i)[fx];
                        report.check(ok, || "f s_i = s_i f".into(), n, &[i], x);
                    }
                }
                for p in 0..=n {
                    let ok = self.apply(p, s.rho(n, p, x)) == t.rho(n, p, fx);
                    report.check(ok, || "f_p ρ_{k,p} = ρ_{k,p} f_k".into(), n, &[p], x);
                    let ok = self.apply(p, s.tau(n, p, x)) == t.tau(n, p, fx);
                    report.check(ok, || "f_p τ_{k,p} = τ_{k,p} f_k".into(), n, &[p], x);
                }
            }
        }
        report
    }
}

pub(crate) fn same_space(a: &Arc<SimplicialSpace>, b: &Arc<SimplicialSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_validates_and_composes() {
        let s = Arc::new(SimplicialSpace::point(2));
        let id = SimplicialMap::identity(s.clone());
        assert!(id.validate().passed());
        assert_eq!(id.then(&id).unwrap(), id);
    }

    #[test]
    fn out_of_range_component_rejected() {
        let s = Arc::new(SimplicialSpace::point(1));
        assert!(SimplicialMap::new(s.clone(), s, vec![vec![1], vec![0]]).is_err());
    }
}
