//! The verification suites behind the command-line subcommands.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::ainf::{check_phi, objectwise_inverse, verify_quasi_inverse, HomotopyPhi, Prenat};
use crate::bundle::{write_blocks, BlockDoc, Bundle};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::simplicial::SimplicialSpace;
use crate::twisted::{ho_invert, is_weak_equivalence, TwistedMorphism};
use crate::validation::Violation;

/// Renders a violation with the simplex id when it names one.
fn locate_in(space: &SimplicialSpace) -> impl Fn(&Violation) -> String + '_ {
    move |v| {
        let id = if v.level <= space.truncation() && v.element < space.level_size(v.level) {
            space.id(v.level, v.element).to_string()
        } else {
            format!("#{}", v.element)
        };
        format!(
            "{} at level {} indices {:?} simplex {id}",
            v.identity, v.level, v.indices
        )
    }
}

fn plain(v: &Violation) -> String {
    v.to_string()
}

/// Every validator on every named entry of the bundle.
pub fn validate_bundle(b: &Bundle) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("validate", None);
    for (name, (space, _)) in &b.spaces {
        let mut v = space.validate();
        v.merge(space.validate_face_composites());
        r.validation(format!("space {name}: simplicial identities"), &v, locate_in(space));
    }
    for (name, (map, _, _)) in &b.maps {
        r.validation(
            format!("map {name}: commutes with faces and degeneracies"),
            &map.validate(),
            locate_in(map.source()),
        );
    }
    for (name, (h, _, _)) in &b.homotopies {
        r.validation(
            format!("homotopy {name}: homotopy identities"),
            &h.validate(),
            locate_in(h.source()),
        );
    }
    let mut maurer_cartan = BTreeMap::new();
    for (name, (t, _)) in &b.twisted {
        let residual = t.mc_residual()?;
        r.zero(format!("twisted {name}: Maurer–Cartan residual"), &residual);
        let ok = residual.is_zero();
        maurer_cartan.insert(name.clone(), ok);
        if !ok {
            r.info(
                format!("twisted {name}: non-degeneracy"),
                false,
                "skipped: not a Maurer–Cartan element",
            );
            continue;
        }
        let nd = t.check_nondegenerate()?;
        let bad = nd.entries.iter().find(|e| e.degenerate && !e.quasi_isomorphism);
        r.boolean(
            format!("twisted {name}: a^(1,0) quasi-isomorphism at degenerate 1-simplices"),
            nd.passed(),
            bad.map(|e| format!("simplex {}", e.simplex)),
        );
        let others = nd.entries.iter().filter(|e| !e.degenerate).count();
        let good = nd
            .entries
            .iter()
            .filter(|e| !e.degenerate && e.quasi_isomorphism)
            .count();
        r.info(
            format!("twisted {name}: a^(1,0) at other 1-simplices"),
            nd.all_simplices_pass(),
            format!("{good} of {others} are quasi-isomorphisms"),
        );
    }
    for (name, (u, s, t)) in &b.morphisms {
        if !(maurer_cartan[s] && maurer_cartan[t]) {
            r.info(
                format!("morphism {name}: d² = 0"),
                false,
                "skipped: an endpoint is not Maurer–Cartan",
            );
            continue;
        }
        let dd = u.differential()?.differential()?;
        r.zero(format!("morphism {name}: d² = 0"), dd.theta());
    }
    Ok(r)
}

/// Components of `Φ` on a probe, keyed by bundle names.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PhiComponents {
    pub phi0: BTreeMap<String, Vec<BlockDoc>>,
    pub phi1: BTreeMap<String, Vec<BlockDoc>>,
}

/// Builds `Φ` from the named homotopy and runs every check on the named probe.
pub fn phi_bundle(
    b: &Bundle,
    homotopy: &str,
    probe: &str,
    max_level: usize,
) -> Result<(VerificationReport, PhiComponents)> {
    let h = b.homotopy(homotopy)?.clone();
    let p = b.probe(probe)?;
    let mut r = VerificationReport::new("phi", None);
    let hv = h.validate();
    r.validation(
        format!("homotopy {homotopy}: homotopy identities"),
        &hv,
        locate_in(h.source()),
    );
    if !hv.passed() {
        return Ok((r, PhiComponents::default()));
    }
    let (phi, rep) = check_phi(&h, &p, max_level)?;
    r.validation("dΦ_0(E) = 0", &rep.closed_level0, plain);
    r.validation("level-one identity for Φ_1", &rep.level_one, plain);
    r.validation("level-two identity for Φ_1", &rep.level_two, plain);
    r.validation(format!("d^∞Φ = 0 at levels 0..={max_level}"), &rep.dinf_closed, plain);
    r.validation("Φ_0(E) is a weak equivalence", &rep.weak_equivalence, plain);
    r.info(
        "strict naturality of Φ_0",
        rep.naturality_defects == 0,
        format!(
            "{} of {} probe morphisms have a non-zero defect",
            rep.naturality_defects,
            p.morphisms.len()
        ),
    );
    let prenat: Arc<dyn Prenat> = phi.clone();
    let inverse = objectwise_inverse(prenat.as_ref(), &p.objects)?;
    r.boolean(
        "homotopy inverse of Φ_0(E) exists for every object",
        inverse.exists(),
        inverse
            .failure
            .map(|i| format!("object {}", b.name_of(&p.objects[i]).unwrap_or("?"))),
    );
    if inverse.exists() {
        let (psi, eta, omega) = inverse.assemble(prenat.as_ref())?;
        for row in verify_quasi_inverse(prenat, psi, eta, omega, &p, &p, 2)? {
            let name = format!("quasi-inverse {} at level {}", row.equation, row.level);
            if row.level == 0 {
                r.validation(name, &row.report, plain);
            } else {
                let note = format!(
                    "{} of {} chains fail with objectwise witnesses",
                    row.report.failed, row.report.checked
                );
                r.info(name, row.report.passed(), note);
            }
        }
    }
    let names = &b.probes[probe];
    let mut comps = PhiComponents::default();
    for (name, x) in names.objects.iter().zip(&p.objects) {
        comps.phi0.insert(name.clone(), write_blocks(phi.phi0(x)?.theta()));
    }
    for (name, u) in names.morphisms.iter().zip(&p.morphisms) {
        comps.phi1.insert(name.clone(), write_blocks(phi.phi1(u)?.theta()));
    }
    Ok((r, comps))
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessDoc {
    pub psi: Vec<BlockDoc>,
    pub eta: Vec<BlockDoc>,
    pub omega: Vec<BlockDoc>,
}

/// Searches for a homotopy inverse of the named degree-0 morphism.
pub fn ho_invert_bundle(b: &Bundle, morphism: &str) -> Result<(VerificationReport, Option<WitnessDoc>)> {
    let u = b.morphism(morphism)?;
    ho_invert_report(u, morphism)
}

pub fn ho_invert_report(u: &TwistedMorphism, name: &str) -> Result<(VerificationReport, Option<WitnessDoc>)> {
    let mut r = VerificationReport::new("ho-invert", None);
    if u.degree() != 0 {
        return Err(Error::Structural(format!(
            "morphism {name} has degree {}, expected 0",
            u.degree()
        )));
    }
    let closed = u.is_closed()?;
    r.boolean(format!("morphism {name} is closed"), closed, None);
    if !closed {
        return Ok((r, None));
    }
    let weak = is_weak_equivalence(u)?;
    let found = ho_invert(u)?;
    r.info(
        format!("morphism {name} is invertible in the homotopy category"),
        found.is_some(),
        if found.is_some() {
            "witness found"
        } else {
            "infeasible: no homotopy inverse exists"
        },
    );
    r.boolean(
        "ho_invert agrees with the pointwise quasi-isomorphism test",
        found.is_some() == weak,
        None,
    );
    let witness = match found {
        Some(w) => {
            r.boolean("witness residuals vanish", w.verify(u)?, None);
            Some(WitnessDoc {
                psi: write_blocks(w.psi.theta()),
                eta: write_blocks(w.eta.theta()),
                omega: write_blocks(w.omega.theta()),
            })
        }
        None => None,
    };
    Ok((r, witness))
}

/// `Φ` for the only homotopy in the bundle, if there is exactly one.
pub fn sole_homotopy(b: &Bundle) -> Result<&str> {
    let mut it = b.homotopies.keys();
    match (it.next(), it.next()) {
        (Some(n), None) => Ok(n),
        _ => Err(Error::Structural("bundle has several homotopies; name one".into())),
    }
}

/// The transformation for a named homotopy, for callers that need the
/// components directly.
pub fn phi_of(b: &Bundle, homotopy: &str) -> Result<HomotopyPhi> {
    Ok(HomotopyPhi::new(b.homotopy(homotopy)?.clone()))
}

/// A short end-to-end run: generated instances pass every suite, planted
/// non-equivalences are refused, and each sign mutation is caught.
pub fn selftest(seed: u64) -> Result<VerificationReport> {
    use crate::generate::{corpus_params, generate};
    use crate::linalg::BaseRing;
    use crate::mutation::{with_mutation, Mutation};

    let mut r = VerificationReport::new("selftest", Some(seed));
    for i in 0..3u64 {
        let ring = if i == 2 {
            BaseRing::PrimeField { p: 101 }
        } else {
            BaseRing::Rationals
        };
        let g = generate(seed.wrapping_add(i), &corpus_params(ring, i))?;
        let tag = format!("instance {i} ({ring})");
        r.boolean(format!("{tag}: validate"), validate_bundle(&g.bundle)?.passed, None);
        let (phi, _) = phi_bundle(&g.bundle, "h", "P", 3)?;
        r.boolean(
            format!("{tag}: phi"),
            phi.passed,
            phi.failures().next().map(|c| c.name.clone()),
        );
        let (_, w) = ho_invert_bundle(&g.bundle, &g.weak_equivalence)?;
        r.boolean(
            format!("{tag}: planted weak equivalence is invertible"),
            w.is_some(),
            None,
        );
        let (_, w) = ho_invert_bundle(&g.bundle, &g.non_equivalence)?;
        r.boolean(format!("{tag}: planted non-equivalence is refused"), w.is_none(), None);
    }
    let g = generate(seed, &corpus_params(BaseRing::Rationals, 1))?;
    let detected = |m: Mutation, phi: bool| {
        with_mutation(m, || {
            let outcome = if phi {
                phi_bundle(&g.bundle, "h", "P", 2).map(|(rep, _)| rep.passed)
            } else {
                validate_bundle(&g.bundle).map(|rep| rep.passed)
            };
            !matches!(outcome, Ok(true))
        })
    };
    r.boolean(
        "composition sign mutation is detected",
        detected(Mutation::ComposeSign, false),
        None,
    );
    r.boolean(
        "δ sign mutation is detected",
        detected(Mutation::DeltaSign, false),
        None,
    );
    r.boolean(
        "Φ_1 sign mutation is detected",
        detected(Mutation::Phi1Sign, true),
        None,
    );
    Ok(r)
}
