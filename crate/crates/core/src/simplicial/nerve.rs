use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::map::SimplicialMap;
use super::space::SimplicialSpace;
use crate::error::{Error, Result};

/// A finite cover of a finite ground set. Sets are ordered by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub points: Vec<String>,
    pub sets: BTreeMap<String, Vec<String>>,
}

impl CoverSpec {
    pub fn new(points: Vec<String>, sets: BTreeMap<String, Vec<String>>) -> Result<Self> {
        let cover = CoverSpec { points, sets };
        cover.check()?;
        Ok(cover)
    }

    pub fn check(&self) -> Result<()> {
        if self.sets.is_empty() {
            return Err(Error::structural("cover has no sets"));
        }
        let known: BTreeSet<&str> = self.points.iter().map(String::as_str).collect();
        if known.len() != self.points.len() {
            return Err(Error::structural("cover lists a point twice"));
        }
        let mut covered = BTreeSet::new();
        for (name, members) in &self.sets {
            if name.is_empty() || name.contains(',') {
                return Err(Error::structural(format!(
                    "set name {name:?} must be non-empty and free of ','"
                )));
            }
            for m in members {
                if !known.contains(m.as_str()) {
                    return Err(Error::structural(format!("set {name} mentions unknown point {m}")));
                }
                covered.insert(m.as_str());
            }
        }
        if let Some(p) = known.difference(&covered).next() {
            return Err(Error::structural(format!("point {p} is not covered")));
        }
        Ok(())
    }

    pub fn set_names(&self) -> Vec<&str> {
        self.sets.keys().map(String::as_str).collect()
    }

    fn membership(&self) -> Vec<Vec<bool>> {
        let index: HashMap<&str, usize> = self.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        self.sets
            .values()
            .map(|members| {
                let mut row = vec![false; self.points.len()];
                for m in members {
                    row[index[m.as_str()]] = true;
                }
                row
            })
            .collect()
    }
}

/// The nerve of a cover together with its tuple description.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub cover: CoverSpec,
    pub space: Arc<SimplicialSpace>,
    /// `tuples[n][x]` lists the set indices `(i_0, …, i_n)` of simplex `x`.
    pub tuples: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    /// Level `n` holds the tuples with non-empty intersection, in
    /// lexicographic order of set indices.
    pub fn build(cover: &CoverSpec, truncation: usize) -> Result<Self> {
        cover.check()?;
        let names: Vec<&str> = cover.set_names();
        let membership = cover.membership();
        let all = vec![true; cover.points.len()];
        let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new(); truncation + 1];
        let mut prefix = Vec::new();
        enumerate(&membership, &all, &mut prefix, truncation, &mut tuples);
        let lookup: Vec<HashMap<Vec<usize>, usize>> = tuples
            .iter()
            .map(|level| level.iter().enumerate().map(|(x, t)| (t.clone(), x)).collect())
            .collect();
        let ids = tuples
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|t| t.iter().map(|&i| names[i]).collect::<Vec<_>>().join(","))
                    .collect()
            })
            .collect();
        let mut faces = vec![Vec::new()];
        for n in 1..=truncation {
            let ops = (0..=n)
                .map(|k| {
                    tuples[n]
                        .iter()
                        .map(|t| {
                            let mut s = t.clone();
                            s.remove(k);
                            lookup[n - 1][&s]
                        })
                        .collect()
                })
                .collect();
            faces.push(ops);
        }
        let mut degeneracies = Vec::new();
        for n in 0..truncation {
            let ops = (0..=n)
                .map(|k| {
                    tuples[n]
                        .iter()
                        .map(|t| {
                            let mut s = t.clone();
                            s.insert(k, t[k]);
                            lookup[n + 1][&s]
                        })
                        .collect()
                })
                .collect();
            degeneracies.push(ops);
        }
        let space = SimplicialSpace::new(truncation, ids, faces, degeneracies)?;
        Ok(Nerve {
            cover: cover.clone(),
            space: Arc::new(space),
            tuples,
            lookup,
        })
    }

    pub fn find(&self, tuple: &[usize]) -> Option<usize> {
        let n = tuple.len().checked_sub(1)?;
        self.lookup.get(n)?.get(tuple).copied()
    }

    /// The map of nerves induced by a map of index sets, `i ↦ index_map[i]`.
    pub fn induced_map(&self, target: &Nerve, index_map: &[usize]) -> Result<SimplicialMap> {
        if index_map.len() != self.cover.sets.len() {
            return Err(Error::structural("index map length differs from the number of sets"));
        }
        let mut components = Vec::with_capacity(self.tuples.len());
        for level in &self.tuples {
            let mut c = Vec::with_capacity(level.len());
            for t in level {
                let image: Vec<usize> = t.iter().map(|&i| index_map[i]).collect();
                let y = target
                    .find(&image)
                    .ok_or_else(|| Error::structural(format!("image tuple {image:?} has empty intersection")))?;
                c.push(y);
            }
            components.push(c);
        }
        SimplicialMap::new(self.space.clone(), target.space.clone(), components)
    }
}

fn enumerate(
    membership: &[Vec<bool>],
    current: &[bool],
    prefix: &mut Vec<usize>,
    max_level: usize,
    out: &mut [Vec<Vec<usize>>],
) {
    for (i, row) in membership.iter().enumerate() {
        let next: Vec<bool> = current.iter().zip(row).map(|(&a, &b)| a && b).collect();
        if !next.iter().any(|&b| b) {
            continue;
        }
        prefix.push(i);
        out[prefix.len() - 1].push(prefix.clone());
        if prefix.len() <= max_level {
            enumerate(membership, &next, prefix, max_level, out);
        }
        prefix.pop();
    }
}

/// The nerve of `cover` truncated at `truncation`.
pub fn nerve(cover: &CoverSpec, truncation: usize) -> Result<SimplicialSpace> {
    Ok((*Nerve::build(cover, truncation)?.space).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cover(points: &[&str], sets: &[(&str, &[&str])]) -> CoverSpec {
        CoverSpec::new(
            points.iter().map(|s| s.to_string()).collect(),
            sets.iter()
                .map(|(n, m)| (n.to_string(), m.iter().map(|s| s.to_string()).collect()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_overlapping_sets() {
        let c = cover(&["x", "y", "z"], &[("A", &["x", "y"]), ("B", &["y", "z"])]);
        let s = nerve(&c, 1).unwrap();
        assert_eq!(s.ids(0), &["A", "B"]);
        assert_eq!(s.ids(1), &["A,A", "A,B", "B,A", "B,B"]);
        assert!(s.validate().passed());
    }

    #[test]
    fn disjoint_sets_drop_mixed_tuples() {
        let c = cover(&["x", "y"], &[("A", &["x"]), ("B", &["y"])]);
        let s = nerve(&c, 1).unwrap();
        assert_eq!(s.ids(1), &["A,A", "B,B"]);
    }

    #[test]
    fn triple_intersection_empty() {
        let c = cover(
            &["ab", "bc", "ca"],
            &[("A", &["ab", "ca"]), ("B", &["ab", "bc"]), ("C", &["bc", "ca"])],
        );
        let n = Nerve::build(&c, 2).unwrap();
        for t in &n.tuples[2] {
            let distinct: BTreeSet<_> = t.iter().collect();
            assert!(distinct.len() < 3);
        }
        assert!(n.space.validate().passed());
        assert!(n.space.validate_face_composites().passed());
    }

    #[test]
    fn front_and_back_faces_on_tuples() {
        let c = cover(&["p"], &[("A", &["p"]), ("B", &["p"]), ("C", &["p"])]);
        let n = Nerve::build(&c, 2).unwrap();
        let x = n.find(&[0, 1, 2]).unwrap();
        assert_eq!(n.space.front_face(2, 1).unwrap()[x], n.find(&[0, 1]).unwrap());
        assert_eq!(n.space.back_face(2, 1).unwrap()[x], n.find(&[1, 2]).unwrap());
    }

    #[test]
    fn corrupted_face_is_named() {
        let c = cover(&["p"], &[("A", &["p"]), ("B", &["p"])]);
        let n = Nerve::build(&c, 2).unwrap();
        let x = n.find(&[0, 1, 0]).unwrap();
        let bad = n.space.with_face_entry(2, 1, x, n.find(&[1, 1]).unwrap()).unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert!(report.mentions("∂_i∂_j"));
    }

    #[test]
    fn empty_cover_rejected() {
        let c = CoverSpec {
            points: vec![],
            sets: BTreeMap::new(),
        };
        assert!(matches!(nerve(&c, 1), Err(Error::Structural(_))));
    }
}
