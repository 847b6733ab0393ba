use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{BaseRing, GradedModule};
use crate::simplicial::{SimplicialMap, SimplicialSpace};

/// A bounded free graded module attached to every point of `U_0`.
///
/// Pullbacks along face composites are re-indexings: the stalk of
/// `ρ_{p,0}^*E` at a `p`-simplex is the module at its first vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSheaf {
    ring: BaseRing,
    space: Arc<SimplicialSpace>,
    modules: Vec<GradedModule>,
}

impl GradedSheaf {
    pub fn new(ring: BaseRing, space: Arc<SimplicialSpace>, modules: Vec<GradedModule>) -> Result<Self> {
        if modules.len() != space.level_size(0) {
            return Err(Error::structural(format!(
                "sheaf assigns {} modules to {} points",
                modules.len(),
                space.level_size(0)
            )));
        }
        Ok(GradedSheaf { ring, space, modules })
    }

    /// The same module at every point.
    pub fn constant(ring: BaseRing, space: Arc<SimplicialSpace>, module: GradedModule) -> Self {
        let modules = vec![module; space.level_size(0)];
        GradedSheaf { ring, space, modules }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn space(&self) -> &Arc<SimplicialSpace> {
        &self.space
    }

    pub fn truncation(&self) -> usize {
        self.space.truncation()
    }

    pub fn module(&self, y: usize) -> &GradedModule {
        &self.modules[y]
    }

    pub fn modules(&self) -> &[GradedModule] {
        &self.modules
    }

    #[inline]
    pub fn rank(&self, y: usize, degree: i32) -> usize {
        self.modules[y].rank(degree)
    }

    /// Smallest and largest degree with non-zero rank over all points.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.modules.iter().filter_map(GradedModule::min_degree).min()?;
        let hi = self.modules.iter().filter_map(GradedModule::max_degree).max()?;
        Some((lo, hi))
    }

    /// `max degree − min degree`, or 0 for the zero sheaf.
    pub fn amplitude(&self) -> usize {
        self.degree_range().map_or(0, |(lo, hi)| (hi - lo) as usize)
    }

    /// `f_0^*E` on the source of `f`.
    pub fn pullback(&self, f: &SimplicialMap) -> Result<GradedSheaf> {
        if **f.target() != *self.space {
            return Err(Error::structural("pullback map does not land in the sheaf's space"));
        }
        let modules = f.component(0).iter().map(|&y| self.modules[y].clone()).collect();
        Ok(GradedSheaf {
            ring: self.ring,
            space: f.source().clone(),
            modules,
        })
    }

    pub fn direct_sum(&self, other: &GradedSheaf) -> Result<GradedSheaf> {
        if self.space != other.space || self.ring != other.ring {
            return Err(Error::structural("direct sum of sheaves over different spaces"));
        }
        let modules = self
            .modules
            .iter()
            .zip(&other.modules)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(GradedSheaf {
            ring: self.ring,
            space: self.space.clone(),
            modules,
        })
    }
}

/// Range of degrees `q` for which `Hom^q(E(y), F(y'))` can be non-zero.
pub fn hom_degree_range(source: &GradedSheaf, target: &GradedSheaf) -> Option<(i32, i32)> {
    let (slo, shi) = source.degree_range()?;
    let (tlo, thi) = target.degree_range()?;
    Some((tlo - shi, thi - slo))
}
