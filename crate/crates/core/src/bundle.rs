//! JSON instance bundles.
//!
//! A bundle names spaces, maps, homotopies, twisted complexes, morphisms
//! and probe sets; later entries refer to earlier ones by name. Parsing
//! resolves every reference and checks shapes, but leaves mathematical
//! identities (simplicial laws, Maurer–Cartan) to the validators, so a
//! corrupted instance can still be loaded and reported on.
//!
//! Serialization is canonical: names are sorted, blocks are ordered by
//! `(p, q, simplex, degree)`, zero blocks are dropped and scalars are
//! printed in lowest terms. `to_json(parse(s))` is a fixed point.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ainf::ProbeSet;
use crate::cech::{BlockKey, GradedSheaf, HomElement};
use crate::error::{Error, Result};
use crate::linalg::{BaseRing, GradedModule, Matrix};
use crate::simplicial::{CoverSpec, Nerve, SimplicialHomotopy, SimplicialMap, SimplicialSpace};
use crate::twisted::{TwistedComplex, TwistedMorphism};

pub const FORMAT: &str = "twcx-bundle/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub format: String,
    pub ring: BaseRing,
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceDoc>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default)]
    pub homotopies: BTreeMap<String, HomotopyDoc>,
    #[serde(default)]
    pub twisted: BTreeMap<String, TwistedDoc>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismDoc>,
    #[serde(default)]
    pub probes: BTreeMap<String, ProbeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDoc {
    /// The nerve of a cover, truncated at `truncation`.
    Nerve { truncation: usize, cover: CoverSpec },
    /// Explicit operator tables.
    Explicit {
        truncation: usize,
        ids: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDoc {
    pub f: String,
    pub g: String,
    /// `h[p][i][x] = h_i^p(x)`.
    pub h: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedDoc {
    pub space: String,
    /// Per point of level 0, `(degree, rank)` pairs.
    pub modules: Vec<Vec<(i32, usize)>>,
    pub a: Vec<BlockDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: String,
    pub target: String,
    pub degree: i32,
    pub theta: Vec<BlockDoc>,
}

/// One matrix block; `simplex` is the simplex id at level `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub p: usize,
    pub q: i32,
    pub simplex: String,
    pub degree: i32,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries in canonical scalar syntax.
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeDoc {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<String>,
}

/// A resolved bundle. Objects are shared by `Arc`, so a morphism's
/// endpoints are pointer-identical to the named twisted complexes.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub ring: BaseRing,
    pub spaces: BTreeMap<String, (Arc<SimplicialSpace>, Option<CoverSpec>)>,
    pub maps: BTreeMap<String, (Arc<SimplicialMap>, String, String)>,
    pub homotopies: BTreeMap<String, (Arc<SimplicialHomotopy>, String, String)>,
    pub twisted: BTreeMap<String, (Arc<TwistedComplex>, String)>,
    pub morphisms: BTreeMap<String, (TwistedMorphism, String, String)>,
    pub probes: BTreeMap<String, ProbeDoc>,
}

fn lookup<'a, T>(table: &'a BTreeMap<String, T>, name: &str, path: &str, kind: &str) -> Result<&'a T> {
    table
        .get(name)
        .ok_or_else(|| Error::parse(path, format!("unknown {kind} {name:?}")))
}

impl Bundle {
    pub fn new(ring: BaseRing) -> Self {
        Bundle {
            ring,
            spaces: BTreeMap::new(),
            maps: BTreeMap::new(),
            homotopies: BTreeMap::new(),
            twisted: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            probes: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: BundleDoc = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Bundle::from_doc(&doc)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Bundle::parse(&text)
    }

    pub fn from_doc(doc: &BundleDoc) -> Result<Self> {
        if doc.format != FORMAT {
            return Err(Error::parse(
                "format",
                format!("expected {FORMAT:?}, found {:?}", doc.format),
            ));
        }
        let ring = match doc.ring {
            BaseRing::PrimeField { p } => BaseRing::prime_field(p).map_err(|e| Error::parse("ring", e.to_string()))?,
            r => r,
        };
        let mut b = Bundle::new(ring);
        for (name, s) in &doc.spaces {
            let path = format!("spaces.{name}");
            let wrap = |e: Error| Error::parse(&path, e.to_string());
            let entry = match s {
                SpaceDoc::Nerve { truncation, cover } => (
                    Nerve::build(cover, *truncation).map_err(wrap)?.space,
                    Some(cover.clone()),
                ),
                SpaceDoc::Explicit {
                    truncation,
                    ids,
                    faces,
                    degeneracies,
                } => {
                    let space = SimplicialSpace::new(*truncation, ids.clone(), faces.clone(), degeneracies.clone());
                    (Arc::new(space.map_err(wrap)?), None)
                }
            };
            b.spaces.insert(name.clone(), entry);
        }
        for (name, m) in &doc.maps {
            let path = format!("maps.{name}");
            let src = &lookup(&b.spaces, &m.source, &path, "space")?.0;
            let tgt = &lookup(&b.spaces, &m.target, &path, "space")?.0;
            let map = SimplicialMap::new(src.clone(), tgt.clone(), m.components.clone())
                .map_err(|e| Error::parse(&path, e.to_string()))?;
            b.maps
                .insert(name.clone(), (Arc::new(map), m.source.clone(), m.target.clone()));
        }
        for (name, h) in &doc.homotopies {
            let path = format!("homotopies.{name}");
            let f = lookup(&b.maps, &h.f, &path, "map")?.0.clone();
            let g = lookup(&b.maps, &h.g, &path, "map")?.0.clone();
            let homotopy =
                SimplicialHomotopy::new(f, g, h.h.clone()).map_err(|e| Error::parse(&path, e.to_string()))?;
            b.homotopies
                .insert(name.clone(), (Arc::new(homotopy), h.f.clone(), h.g.clone()));
        }
        for (name, t) in &doc.twisted {
            let path = format!("twisted.{name}");
            let space = lookup(&b.spaces, &t.space, &path, "space")?.0.clone();
            let modules = t
                .modules
                .iter()
                .map(|pairs| GradedModule::new(pairs.iter().copied()))
                .collect();
            let sheaf =
                Arc::new(GradedSheaf::new(ring, space, modules).map_err(|e| Error::parse(&path, e.to_string()))?);
            let a = read_blocks(&t.a, sheaf.clone(), sheaf.clone(), &format!("{path}.a"))?;
            let tw = TwistedComplex::candidate(sheaf, a).map_err(|e| Error::parse(&path, e.to_string()))?;
            b.twisted.insert(name.clone(), (Arc::new(tw), t.space.clone()));
        }
        for (name, m) in &doc.morphisms {
            let path = format!("morphisms.{name}");
            let src = lookup(&b.twisted, &m.source, &path, "twisted complex")?.0.clone();
            let tgt = lookup(&b.twisted, &m.target, &path, "twisted complex")?.0.clone();
            let theta = read_blocks(
                &m.theta,
                src.sheaf().clone(),
                tgt.sheaf().clone(),
                &format!("{path}.theta"),
            )?;
            let u = TwistedMorphism::new(src, tgt, m.degree, theta).map_err(|e| Error::parse(&path, e.to_string()))?;
            b.morphisms
                .insert(name.clone(), (u, m.source.clone(), m.target.clone()));
        }
        for (name, p) in &doc.probes {
            let path = format!("probes.{name}");
            for o in &p.objects {
                lookup(&b.twisted, o, &path, "twisted complex")?;
            }
            for m in &p.morphisms {
                lookup(&b.morphisms, m, &path, "morphism")?;
            }
            b.probes.insert(name.clone(), p.clone());
        }
        Ok(b)
    }

    pub fn to_doc(&self) -> BundleDoc {
        let spaces = self
            .spaces
            .iter()
            .map(|(name, (space, cover))| {
                let doc = match cover {
                    Some(cover) => SpaceDoc::Nerve {
                        truncation: space.truncation(),
                        cover: cover.clone(),
                    },
                    None => explicit_space(space),
                };
                (name.clone(), doc)
            })
            .collect();
        let maps = self
            .maps
            .iter()
            .map(|(name, (m, s, t))| {
                let doc = MapDoc {
                    source: s.clone(),
                    target: t.clone(),
                    components: m.components().to_vec(),
                };
                (name.clone(), doc)
            })
            .collect();
        let homotopies = self
            .homotopies
            .iter()
            .map(|(name, (h, f, g))| {
                let doc = HomotopyDoc {
                    f: f.clone(),
                    g: g.clone(),
                    h: h.data().to_vec(),
                };
                (name.clone(), doc)
            })
            .collect();
        let twisted = self
            .twisted
            .iter()
            .map(|(name, (t, space))| {
                let doc = TwistedDoc {
                    space: space.clone(),
                    modules: t.sheaf().modules().iter().map(|m| m.degrees().collect()).collect(),
                    a: write_blocks(t.a()),
                };
                (name.clone(), doc)
            })
            .collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|(name, (u, s, t))| {
                let doc = MorphismDoc {
                    source: s.clone(),
                    target: t.clone(),
                    degree: u.degree(),
                    theta: write_blocks(u.theta()),
                };
                (name.clone(), doc)
            })
            .collect();
        BundleDoc {
            format: FORMAT.to_string(),
            ring: self.ring,
            spaces,
            maps,
            homotopies,
            twisted,
            morphisms,
            probes: self.probes.clone(),
        }
    }

    /// Pretty-printed canonical JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("bundle documents always serialize");
        s.push('\n');
        s
    }

    pub fn space(&self, name: &str) -> Result<&Arc<SimplicialSpace>> {
        Ok(&lookup(&self.spaces, name, "spaces", "space")?.0)
    }

    pub fn homotopy(&self, name: &str) -> Result<&Arc<SimplicialHomotopy>> {
        Ok(&lookup(&self.homotopies, name, "homotopies", "homotopy")?.0)
    }

    pub fn twisted_complex(&self, name: &str) -> Result<&Arc<TwistedComplex>> {
        Ok(&lookup(&self.twisted, name, "twisted", "twisted complex")?.0)
    }

    pub fn morphism(&self, name: &str) -> Result<&TwistedMorphism> {
        Ok(&lookup(&self.morphisms, name, "morphisms", "morphism")?.0)
    }

    /// The named probe, resolved to shared objects.
    pub fn probe(&self, name: &str) -> Result<ProbeSet> {
        let doc = lookup(&self.probes, name, "probes", "probe")?;
        let objects = doc.objects.iter().map(|o| self.twisted[o].0.clone()).collect();
        let morphisms = doc.morphisms.iter().map(|m| self.morphisms[m].0.clone()).collect();
        Ok(ProbeSet::new(objects, morphisms))
    }

    /// Name of a twisted complex held by this bundle, by pointer.
    pub fn name_of(&self, t: &Arc<TwistedComplex>) -> Option<&str> {
        self.twisted
            .iter()
            .find(|(_, (x, _))| Arc::ptr_eq(x, t))
            .map(|(n, _)| n.as_str())
    }
}

/// The operator tables of `space`.
pub fn explicit_space(space: &SimplicialSpace) -> SpaceDoc {
    SpaceDoc::Explicit {
        truncation: space.truncation(),
        ids: (0..=space.truncation()).map(|n| space.ids(n).to_vec()).collect(),
        faces: space.face_data().to_vec(),
        degeneracies: space.degeneracy_data().to_vec(),
    }
}

pub fn write_blocks(u: &HomElement) -> Vec<BlockDoc> {
    let space = u.source().space().clone();
    u.blocks()
        .map(|(k, m)| BlockDoc {
            p: k.p,
            q: k.q,
            simplex: space.id(k.p, k.x).to_string(),
            degree: k.n,
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(ToString::to_string).collect(),
        })
        .collect()
}

pub fn read_blocks(
    docs: &[BlockDoc],
    source: Arc<GradedSheaf>,
    target: Arc<GradedSheaf>,
    path: &str,
) -> Result<HomElement> {
    let ring = source.ring();
    let space = source.space().clone();
    let mut out = HomElement::zero(source, target);
    for (i, b) in docs.iter().enumerate() {
        let here = format!("{path}[{i}]");
        if b.p > space.truncation() {
            return Err(Error::parse(here, format!("level {} exceeds the truncation", b.p)));
        }
        let x = space
            .find(b.p, &b.simplex)
            .ok_or_else(|| Error::parse(&here, format!("no {}-simplex {:?}", b.p, b.simplex)))?;
        if b.entries.len() != b.rows * b.cols {
            return Err(Error::parse(
                &here,
                format!("{} entries for a {}x{} block", b.entries.len(), b.rows, b.cols),
            ));
        }
        let mut rows = Vec::with_capacity(b.rows);
        for r in 0..b.rows {
            let row = b.entries[r * b.cols..(r + 1) * b.cols]
                .iter()
                .map(|s| ring.parse_scalar(s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::parse(&here, e.to_string()))?;
            rows.push(row);
        }
        let m = Matrix::from_rows(ring, b.cols, rows).map_err(|e| Error::parse(&here, e.to_string()))?;
        let key = BlockKey {
            p: b.p,
            q: b.q,
            x,
            n: b.degree,
        };
        out.add_block(key, &m).map_err(|e| Error::parse(&here, e.to_string()))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const POINT: &str = r#"{
      "format": "twcx-bundle/1",
      "ring": {"kind": "rationals"},
      "spaces": {"pt": {"kind": "nerve", "truncation": 2,
                        "cover": {"points": ["p"], "sets": {"A": ["p"]}}}},
      "twisted": {"E": {"space": "pt", "modules": [[[0, 1], [1, 1]]],
        "a": [
          {"p": 0, "q": 1, "simplex": "A", "degree": 0, "rows": 1, "cols": 1, "entries": ["2/4"]},
          {"p": 1, "q": 0, "simplex": "A,A", "degree": 0, "rows": 1, "cols": 1, "entries": ["1"]},
          {"p": 1, "q": 0, "simplex": "A,A", "degree": 1, "rows": 1, "cols": 1, "entries": ["1"]}
        ]}},
      "probes": {"P": {"objects": ["E"]}}
    }"#;

    #[test]
    fn round_trip_is_canonical_and_idempotent() {
        let b = Bundle::parse(POINT).unwrap();
        let once = b.to_json();
        assert!(once.contains("\"1/2\""));
        let twice = Bundle::parse(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }

    #[test]
    fn unknown_reference_names_its_path() {
        let bad = POINT.replace("\"space\": \"pt\"", "\"space\": \"nowhere\"");
        match Bundle::parse(&bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "twisted.E"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_line() {
        match Bundle::parse("{\n  \"format\": }") {
            Err(Error::Parse { path, .. }) => assert!(path.starts_with("line 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_block_shape_is_a_parse_error() {
        let bad = POINT.replace(
            "\"rows\": 1, \"cols\": 1, \"entries\": [\"2/4\"]",
            "\"rows\": 2, \"cols\": 1, \"entries\": [\"1\", \"0\"]",
        );
        assert!(matches!(Bundle::parse(&bad), Err(Error::Parse { .. })));
    }
}
