use std::sync::Arc;

use super::map::SimplicialMap;
use super::space::SimplicialSpace;
use crate::error::Result;

/// `S × Δ¹` with its two end inclusions.
///
/// An element of `Δ¹_n` is a monotone map `[n] → [1]`, encoded by its number
/// of zeros `j ∈ 0..=n+1`; element `(x, j)` at level `n` has index
/// `x·(n+2) + j`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub base: Arc<SimplicialSpace>,
    pub space: Arc<SimplicialSpace>,
    /// `x ↦ (x, constant 0)`.
    pub eps0: SimplicialMap,
    /// `x ↦ (x, constant 1)`.
    pub eps1: SimplicialMap,
}

impl Cylinder {
    #[inline]
    pub fn index(n: usize, x: usize, zeros: usize) -> usize {
        x * (n + 2) + zeros
    }

    /// Inverse of [`Cylinder::index`]: `(x, zeros)`.
    #[inline]
    pub fn split(n: usize, element: usize) -> (usize, usize) {
        (element / (n + 2), element % (n + 2))
    }
}

fn interval_face(i: usize, zeros: usize) -> usize {
    if i < zeros {
        zeros - 1
    } else {
        zeros
    }
}

fn interval_degeneracy(i: usize, zeros: usize) -> usize {
    if i < zeros {
        zeros + 1
    } else {
        zeros
    }
}

fn bits(n: usize, zeros: usize) -> String {
    (0..=n).map(|k| if k < zeros { '0' } else { '1' }).collect()
}

pub fn cylinder(base: Arc<SimplicialSpace>) -> Result<Cylinder> {
    let big_n = base.truncation();
    let ids = (0..=big_n)
        .map(|n| {
            let mut level = Vec::with_capacity(base.level_size(n) * (n + 2));
            for x in 0..base.level_size(n) {
                for j in 0..n + 2 {
                    level.push(format!("{}|{}", base.id(n, x), bits(n, j)));
                }
            }
            level
        })
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=big_n {
        let ops = (0..=n)
            .map(|i| {
                let mut op = Vec::with_capacity(base.level_size(n) * (n + 2));
                for x in 0..base.level_size(n) {
                    for j in 0..n + 2 {
                        op.push(Cylinder::index(n - 1, base.face(n, i)[x], interval_face(i, j)));
                    }
                }
                op
            })
            .collect();
        faces.push(ops);
    }
    let mut degeneracies = Vec::new();
    for n in 0..big_n {
        let ops = (0..=n)
            .map(|i| {
                let mut op = Vec::with_capacity(base.level_size(n) * (n + 2));
                for x in 0..base.level_size(n) {
                    for j in 0..n + 2 {
                        op.push(Cylinder::index(
                            n + 1,
                            base.degeneracy(n, i)[x],
                            interval_degeneracy(i, j),
                        ));
                    }
                }
                op
            })
            .collect();
        degeneracies.push(ops);
    }
    let space = Arc::new(SimplicialSpace::new(big_n, ids, faces, degeneracies)?);
    let end = |ones: bool| -> Vec<Vec<usize>> {
        (0..=big_n)
            .map(|n| {
                (0..base.level_size(n))
                    .map(|x| Cylinder::index(n, x, if ones { 0 } else { n + 1 }))
                    .collect()
            })
            .collect()
    };
    let eps0 = SimplicialMap::new(base.clone(), space.clone(), end(false))?;
    let eps1 = SimplicialMap::new(base.clone(), space.clone(), end(true))?;
    Ok(Cylinder {
        base,
        space,
        eps0,
        eps1,
    })
}

/// The projection `S × Δ¹ → S`.
pub fn projection(cyl: &Cylinder) -> Result<SimplicialMap> {
    let components = (0..=cyl.base.truncation())
        .map(|n| (0..cyl.space.level_size(n)).map(|e| Cylinder::split(n, e).0).collect())
        .collect();
    SimplicialMap::new(cyl.space.clone(), cyl.base.clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_cylinder_sizes() {
        let c = cylinder(Arc::new(SimplicialSpace::point(1))).unwrap();
        assert_eq!(c.space.level_size(0), 2);
        assert_eq!(c.space.level_size(1), 3);
    }

    #[test]
    fn cylinder_and_inclusions_validate() {
        let c = cylinder(Arc::new(SimplicialSpace::point(3))).unwrap();
        assert!(c.space.validate().passed());
        assert!(c.eps0.validate().passed());
        assert!(c.eps1.validate().passed());
        assert!(projection(&c).unwrap().validate().passed());
    }
}
