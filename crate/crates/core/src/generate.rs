//! Seeded random instances: two covers, a homotopy between the induced maps
//! of nerves, gauge-generated twisted complexes and random morphisms.
//!
//! Target cover `V`; source sets `U_i ⊆ V_{α(i)} ∩ V_{β(i)}`. The map
//! `H : N(U) × Δ¹ → N(V)` sends `((i_0 … i_p), σ)` to the tuple with
//! `α(i_j)` where `σ(j) = 0` and `β(i_j)` where `σ(j) = 1`; its
//! restriction to the two ends gives `f` and `g`, and the homotopy is read
//! off the cylinder.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ainf::{HomotopyPhi, ProbeSet};
use crate::bundle::{Bundle, ProbeDoc};
use crate::cech::{gauge_transform, invert_graded, BlockKey, GradedSheaf, HomElement};
use crate::error::{Error, Result};
use crate::linalg::{BaseRing, ChainComplex, GradedModule, Matrix};
use crate::random::{self, Rng64};
use crate::simplicial::{
    cylinder, homotopy_from_cylinder, CoverSpec, Cylinder, CylinderOrientation, Nerve, SimplicialMap,
};
use crate::twisted::{pullback_type, TwistedComplex, TwistedMorphism};
use crate::verify::validate_bundle;

/// Size parameters. Defaults stay well inside the documented bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateParams {
    pub ring: BaseRing,
    pub points: usize,
    /// Sets of the target cover, at most 6.
    pub sets: usize,
    /// Sets of the source cover, at most 6.
    pub source_sets: usize,
    /// At most 5, and at least `amplitude + 2`.
    pub truncation: usize,
    /// Per-degree rank of the base complex, at most 4.
    pub max_rank: usize,
    /// Degree span of the base complex, at most 3.
    pub amplitude: usize,
}

impl Default for GenerateParams {
    fn default() -> Self {
        GenerateParams {
            ring: BaseRing::Rationals,
            points: 4,
            sets: 3,
            source_sets: 2,
            truncation: 3,
            max_rank: 2,
            amplitude: 1,
        }
    }
}

impl GenerateParams {
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Structural(m));
        if self.sets == 0 || self.sets > 6 || self.source_sets == 0 || self.source_sets > 6 {
            return bad(format!(
                "cover sizes {} and {} must lie in 1..=6",
                self.sets, self.source_sets
            ));
        }
        if self.points == 0 || self.points > 12 {
            return bad(format!("{} points; expected 1..=12", self.points));
        }
        if self.truncation > 5 {
            return bad(format!("truncation {} exceeds 5", self.truncation));
        }
        if self.max_rank < 2 || self.max_rank > 4 {
            return bad(format!("rank bound {} must lie in 2..=4", self.max_rank));
        }
        if self.amplitude > 3 {
            return bad(format!("amplitude {} exceeds 3", self.amplitude));
        }
        if self.truncation < self.amplitude + 2 {
            return bad(format!(
                "truncation {} is below amplitude + 2 = {}",
                self.truncation,
                self.amplitude + 2
            ));
        }
        Ok(())
    }
}

/// A generated instance and the facts the generator planted in it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub bundle: Bundle,
    pub orientation: CylinderOrientation,
    /// A closed degree-0 morphism that is a weak equivalence.
    pub weak_equivalence: String,
    /// A closed degree-0 morphism that is not.
    pub non_equivalence: String,
}

impl Generated {
    pub fn probe(&self) -> ProbeSet {
        self.bundle.probe("P").expect("generator always emits probe P")
    }

    pub fn phi(&self) -> HomotopyPhi {
        HomotopyPhi::new(self.bundle.homotopy("h").expect("generator always emits h").clone())
    }
}

const DENSITY: f64 = 0.6;

/// `U` with `U_i ⊆ V_{α(i)} ∩ V_{β(i)}`, and the maps `α`, `β`. The first
/// source set uses two distinct target sets whenever any two intersect.
fn source_cover(v: &CoverSpec, sets: usize, rng: &mut Rng64) -> (CoverSpec, Vec<usize>, Vec<usize>) {
    let members: Vec<&Vec<String>> = v.sets.values().collect();
    let meet =
        |a: usize, b: usize| -> Vec<String> { members[a].iter().filter(|p| members[b].contains(p)).cloned().collect() };
    let (mut alpha, mut beta, mut chosen) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..sets {
        let a = rng.gen_range(0..members.len());
        let partners: Vec<usize> = (0..members.len())
            .filter(|&b| !meet(a, b).is_empty() && (i > 0 || b != a))
            .collect();
        let b = partners.choose(rng).copied().unwrap_or(a);
        let common = meet(a, b);
        let mut subset: Vec<String> = common.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        if subset.is_empty() {
            subset.push(common.choose(rng).expect("intersection is non-empty").clone());
        }
        alpha.push(a);
        beta.push(b);
        chosen.push(subset);
    }
    let points: Vec<String> = v
        .points
        .iter()
        .filter(|p| chosen.iter().any(|s| s.contains(p)))
        .cloned()
        .collect();
    let sets = chosen
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("T{i}"), s))
        .collect();
    (CoverSpec { points, sets }, alpha, beta)
}

/// `H((i_0 … i_n), σ)` on the cylinder over `N(U)`.
fn cylinder_map(cyl: &Cylinder, u: &Nerve, v: &Nerve, alpha: &[usize], beta: &[usize]) -> Result<SimplicialMap> {
    let mut components = Vec::new();
    for n in 0..=cyl.space.truncation() {
        let mut c = Vec::with_capacity(cyl.space.level_size(n));
        for e in 0..cyl.space.level_size(n) {
            let (x, zeros) = Cylinder::split(n, e);
            let image: Vec<usize> = u.tuples[n][x]
                .iter()
                .enumerate()
                .map(|(j, &i)| if j < zeros { alpha[i] } else { beta[i] })
                .collect();
            let y = v
                .find(&image)
                .ok_or_else(|| Error::Verification(format!("cylinder image {image:?} misses the target nerve")))?;
            c.push(y);
        }
        components.push(c);
    }
    SimplicialMap::new(cyl.space.clone(), v.space.clone(), components)
}

/// A complex with non-zero homology in some degree.
fn complex_with_homology(ring: BaseRing, lo: i32, hi: i32, max_rank: usize, rng: &mut Rng64) -> Result<ChainComplex> {
    for _ in 0..16 {
        let c = random::complex(ring, lo, hi, max_rank, rng)?;
        if !c.is_acyclic()? {
            return Ok(c);
        }
    }
    Ok(ChainComplex::zero_differential(ring, GradedModule::new([(lo, 1)])))
}

/// The constant endomorphism projecting `C_1 ⊕ C_2` onto `C_1`.
fn projection(sheaf: &Arc<GradedSheaf>, c1: &GradedModule) -> Result<HomElement> {
    let ring = sheaf.ring();
    let mut e = HomElement::zero(sheaf.clone(), sheaf.clone());
    for y in 0..sheaf.space().level_size(0) {
        for (n, r) in sheaf.module(y).degrees() {
            let keep = c1.rank(n);
            let m = Matrix::from_fn(
                ring,
                r,
                r,
                |i, j| if i == j && i < keep { ring.one() } else { ring.zero() },
            );
            e.add_block(BlockKey { p: 0, q: 0, x: y, n }, &m)?;
        }
    }
    Ok(e)
}

pub fn generate(seed: u64, params: &GenerateParams) -> Result<Generated> {
    params.check()?;
    let ring = params.ring;
    let big_n = params.truncation;
    let mut rng = random::rng(seed);

    let v_cover = random::cover(params.points, params.sets, &mut rng);
    let (u_cover, alpha, beta) = source_cover(&v_cover, params.source_sets, &mut rng);
    let v = Nerve::build(&v_cover, big_n)?;
    let u = Nerve::build(&u_cover, big_n)?;
    let cyl = cylinder(u.space.clone())?;
    let big_h = cylinder_map(&cyl, &u, &v, &alpha, &beta)?;
    let (h, orientation) = homotopy_from_cylinder(&cyl, &big_h)?;

    let lo = -rng.gen_range(0..=params.amplitude as i32);
    let hi = lo + params.amplitude as i32;
    let half = params.max_rank / 2;
    let c1 = random::complex(ring, lo, hi, half, &mut rng)?;
    let c2 = complex_with_homology(ring, lo, hi, params.max_rank - half, &mut rng)?;
    let base = pullback_type(v.space.clone(), &c1.direct_sum(&c2))?;
    let sheaf = base.sheaf().clone();
    let u1 = random::gauge(&sheaf, &mut rng, DENSITY)?;
    let u2 = random::gauge(&sheaf, &mut rng, DENSITY)?;
    let e1 = Arc::new(TwistedComplex::new(sheaf.clone(), gauge_transform(&u1, base.a())?)?);
    let e2 = Arc::new(TwistedComplex::new(sheaf.clone(), gauge_transform(&u2, base.a())?)?);

    let u1_inv = invert_graded(&u1)?;
    let weq = u2.compose_truncated(&u1_inv)?;
    let nweq = u2
        .compose_truncated(&projection(&sheaf, c1.module())?)?
        .compose_truncated(&u1_inv)?;
    let mut morphisms: BTreeMap<String, TwistedMorphism> = BTreeMap::new();
    morphisms.insert("weq".into(), TwistedMorphism::new(e1.clone(), e2.clone(), 0, weq)?);
    morphisms.insert("nweq".into(), TwistedMorphism::new(e1.clone(), e2.clone(), 0, nweq)?);
    let objects = [("E1", &e1), ("E2", &e2)];
    for deg in [-1, 0, 1] {
        for (s, t) in [(0, 1), (1, 0), (0, 0)] {
            let (src, tgt) = (objects[s].1.clone(), objects[t].1.clone());
            let theta = random::hom_element(src.sheaf(), tgt.sheaf(), deg, 0..=big_n, &mut rng, DENSITY)?;
            let tag = if deg < 0 {
                format!("m{}", -deg)
            } else {
                format!("p{deg}")
            };
            let name = format!("r{tag}_{}{}", objects[s].0, objects[t].0);
            let u = TwistedMorphism::new(src, tgt, deg, theta)?;
            if deg < 1 {
                // Boundaries are closed of one degree higher.
                morphisms.insert(format!("d{name}"), u.differential()?);
            }
            morphisms.insert(name, u);
        }
    }
    for name in ["weq", "nweq"] {
        if !morphisms[name].is_closed()? {
            return Err(Error::Verification(format!("planted morphism {name} is not closed")));
        }
    }

    let mut b = Bundle::new(ring);
    b.spaces.insert("U".into(), (u.space.clone(), Some(u_cover)));
    b.spaces.insert("V".into(), (v.space.clone(), Some(v_cover)));
    b.maps.insert("f".into(), (h.f().clone(), "U".into(), "V".into()));
    b.maps.insert("g".into(), (h.g().clone(), "U".into(), "V".into()));
    let h = Arc::new(h);
    b.homotopies.insert("h".into(), (h, "f".into(), "g".into()));
    for (name, t) in objects {
        b.twisted.insert(name.into(), (t.clone(), "V".into()));
    }
    let names: Vec<String> = morphisms.keys().cloned().collect();
    for (name, m) in morphisms {
        let (s, t) = (name_of(&b, m.source()), name_of(&b, m.target()));
        b.morphisms.insert(name, (m, s, t));
    }
    b.probes.insert(
        "P".into(),
        ProbeDoc {
            objects: vec!["E1".into(), "E2".into()],
            morphisms: names,
        },
    );

    let report = validate_bundle(&b)?;
    if !report.passed {
        let first = report.failures().next().map(|c| c.name.clone()).unwrap_or_default();
        return Err(Error::Verification(format!(
            "generated bundle fails its self-check: {first}"
        )));
    }
    Ok(Generated {
        bundle: b,
        orientation,
        weak_equivalence: "weq".into(),
        non_equivalence: "nweq".into(),
    })
}

fn name_of(b: &Bundle, t: &Arc<TwistedComplex>) -> String {
    b.name_of(t).expect("endpoint registered").to_string()
}

/// Parameters for the `i`-th member of a seeded corpus: sizes vary with
/// `i` but stay small enough for exhaustive checks.
pub fn corpus_params(ring: BaseRing, i: u64) -> GenerateParams {
    let amplitude = (i % 3) as usize;
    GenerateParams {
        ring,
        points: 3 + (i % 3) as usize,
        sets: 2 + (i % 2) as usize,
        source_sets: 1 + (i % 3) as usize,
        truncation: (amplitude + 2).max(3),
        max_rank: 2 + (i % 2) as usize,
        amplitude,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bundle() {
        let p = GenerateParams::default();
        let a = generate(7, &p).unwrap().bundle.to_json();
        let b = generate(7, &p).unwrap().bundle.to_json();
        assert_eq!(a, b);
        assert_ne!(a, generate(8, &p).unwrap().bundle.to_json());
    }

    #[test]
    fn generated_bundle_round_trips() {
        let g = generate(1, &GenerateParams::default()).unwrap();
        let text = g.bundle.to_json();
        assert_eq!(Bundle::parse(&text).unwrap().to_json(), text);
    }

    #[test]
    fn parameters_out_of_bounds_are_refused() {
        let p = GenerateParams {
            truncation: 6,
            ..GenerateParams::default()
        };
        assert!(generate(0, &p).unwrap_err().is_structural());
        let p = GenerateParams {
            amplitude: 2,
            truncation: 3,
            ..GenerateParams::default()
        };
        assert!(generate(0, &p).is_err());
    }

    #[test]
    fn minimal_sizes_validate() {
        let p = GenerateParams {
            points: 1,
            sets: 1,
            source_sets: 1,
            truncation: 2,
            max_rank: 2,
            amplitude: 0,
            ring: BaseRing::Rationals,
        };
        generate(0, &p).unwrap();
    }
}
