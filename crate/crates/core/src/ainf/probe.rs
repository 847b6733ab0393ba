use std::sync::Arc;

use serde::Serialize;

use super::dinf::{Convention, DInfinity};
use super::homotopy::HomotopyPhi;
use super::prenat::{Composite, IdentityPrenat, ObjectwisePrenat, Prenat};
use crate::error::Result;
use crate::simplicial::SimplicialHomotopy;
use crate::twisted::{ho_invert, is_weak_equivalence, same_object, HoInverse, TwistedComplex, TwistedMorphism};
use crate::validation::ValidationReport;

/// Upper bound on the number of chains evaluated per level.
pub const DEFAULT_CHAIN_CAP: usize = 64;

/// A finite set of objects and morphisms on which transformations are
/// evaluated. Every morphism endpoint is expected among `objects`.
#[derive(Clone, Debug, Default)]
pub struct ProbeSet {
    pub objects: Vec<Arc<TwistedComplex>>,
    pub morphisms: Vec<TwistedMorphism>,
    pub chain_cap: usize,
}

impl ProbeSet {
    pub fn new(objects: Vec<Arc<TwistedComplex>>, morphisms: Vec<TwistedMorphism>) -> Self {
        ProbeSet {
            objects,
            morphisms,
            chain_cap: DEFAULT_CHAIN_CAP,
        }
    }

    /// Composable chains of length `l` (`chain[0] = u_1`) in lexicographic
    /// order of morphism indices, at most `chain_cap` of them.
    pub fn chains(&self, l: usize) -> Vec<Vec<TwistedMorphism>> {
        let mut out = Vec::new();
        if l == 0 {
            return out;
        }
        let mut stack: Vec<usize> = Vec::with_capacity(l);
        self.extend(&mut stack, l, &mut out);
        out
    }

    fn extend(&self, stack: &mut Vec<usize>, l: usize, out: &mut Vec<Vec<TwistedMorphism>>) {
        if out.len() >= self.chain_cap {
            return;
        }
        if stack.len() == l {
            out.push(stack.iter().map(|&i| self.morphisms[i].clone()).collect());
            return;
        }
        for (i, u) in self.morphisms.iter().enumerate() {
            let fits = match stack.last() {
                Some(&j) => same_object(self.morphisms[j].target(), u.source()),
                None => true,
            };
            if fits {
                stack.push(i);
                self.extend(stack, l, out);
                stack.pop();
            }
        }
    }
}

/// `(d^∞Φ)^l = 0` on every probe object (`l = 0`) and chain (`1 ≤ l ≤ max_level`).
pub fn verify_closed(
    phi: Arc<dyn Prenat>,
    probe: &ProbeSet,
    max_level: usize,
    convention: Convention,
) -> Result<ValidationReport> {
    vanishes(&DInfinity::new(phi, convention), probe, max_level, "d^∞Φ = 0")
}

/// `d^∞(d^∞Φ) = 0` on the probe.
pub fn dinf_squared(
    phi: Arc<dyn Prenat>,
    probe: &ProbeSet,
    max_level: usize,
    convention: Convention,
) -> Result<ValidationReport> {
    let once: Arc<dyn Prenat> = Arc::new(DInfinity::new(phi, convention));
    vanishes(&DInfinity::new(once, convention), probe, max_level, "d^∞∘d^∞ = 0")
}

fn vanishes(p: &dyn Prenat, probe: &ProbeSet, max_level: usize, name: &str) -> Result<ValidationReport> {
    let mut r = ValidationReport::new();
    for (i, x) in probe.objects.iter().enumerate() {
        r.check(p.level0(x)?.is_zero(), || name.to_string(), 0, &[], i);
    }
    for l in 1..=max_level {
        for (c, chain) in probe.chains(l).iter().enumerate() {
            r.check(p.level(chain)?.is_zero(), || name.to_string(), l, &[], c);
        }
    }
    Ok(r)
}

/// Agreement of two transformations with the same functors on the probe.
pub fn agree(
    a: &dyn Prenat,
    b: &dyn Prenat,
    probe: &ProbeSet,
    max_level: usize,
    name: &str,
) -> Result<ValidationReport> {
    let mut r = ValidationReport::new();
    for (i, x) in probe.objects.iter().enumerate() {
        r.check(
            a.level0(x)?.sub(&b.level0(x)?)?.is_zero(),
            || name.to_string(),
            0,
            &[],
            i,
        );
    }
    for l in 1..=max_level {
        for (c, chain) in probe.chains(l).iter().enumerate() {
            r.check(
                a.level(chain)?.sub(&b.level(chain)?)?.is_zero(),
                || name.to_string(),
                l,
                &[],
                c,
            );
        }
    }
    Ok(r)
}

/// Residual of one quasi-inverse equation at one level.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiInverseLevel {
    pub equation: String,
    pub level: usize,
    pub report: ValidationReport,
}

/// `Ψ∘Φ − id_F = d^∞η` and `Φ∘Ψ − id_G = d^∞ω`, evaluated separately at
/// each level `0..=max_level`.
pub fn verify_quasi_inverse(
    phi: Arc<dyn Prenat>,
    psi: Arc<dyn Prenat>,
    eta: Arc<dyn Prenat>,
    omega: Arc<dyn Prenat>,
    source_probe: &ProbeSet,
    target_probe: &ProbeSet,
    max_level: usize,
) -> Result<Vec<QuasiInverseLevel>> {
    let mut out = Vec::new();
    let equations = [
        ("ΨΦ − id = d^∞η", psi.clone(), phi.clone(), eta, source_probe),
        ("ΦΨ − id = d^∞ω", phi, psi, omega, target_probe),
    ];
    for (name, outer, inner, witness, probe) in equations {
        let id = IdentityPrenat::new(inner.source().clone());
        let composite = Composite::new(outer, inner)?;
        let d = DInfinity::new(witness, Convention::Verbatim);
        for level in 0..=max_level {
            let mut report = ValidationReport::new();
            if level == 0 {
                for (i, x) in probe.objects.iter().enumerate() {
                    let lhs = composite.level0(x)?.sub(&id.level0(x)?)?;
                    report.check(lhs.sub(&d.level0(x)?)?.is_zero(), || name.to_string(), 0, &[], i);
                }
            } else {
                for (c, chain) in probe.chains(level).iter().enumerate() {
                    let lhs = composite.level(chain)?.sub(&id.level(chain)?)?;
                    report.check(lhs.sub(&d.level(chain)?)?.is_zero(), || name.to_string(), level, &[], c);
                }
            }
            out.push(QuasiInverseLevel {
                equation: name.to_string(),
                level,
                report,
            });
        }
    }
    Ok(out)
}

/// `(Ψ, η, ω)`: an inverse candidate and the two homotopy witnesses.
pub type InverseTriple = (Arc<dyn Prenat>, Arc<dyn Prenat>, Arc<dyn Prenat>);

/// Per-object homotopy inverse of `Φ^0_X`, or the first object where none
/// exists.
pub struct ObjectwiseInverse {
    pub certificates: Vec<(Arc<TwistedComplex>, HoInverse)>,
    pub failure: Option<usize>,
}

impl ObjectwiseInverse {
    pub fn exists(&self) -> bool {
        self.failure.is_none()
    }

    /// Level-0 transformations `(Ψ, η, ω)` assembled from the certificates.
    pub fn assemble(&self, phi: &dyn Prenat) -> Result<InverseTriple> {
        let (f, g) = (phi.source().clone(), phi.target().clone());
        let pick = |sel: fn(&HoInverse) -> &TwistedMorphism| {
            self.certificates
                .iter()
                .map(|(x, c)| (x.clone(), sel(c).clone()))
                .collect::<Vec<_>>()
        };
        let psi = ObjectwisePrenat::new(g.clone(), f.clone(), 0, pick(|c| &c.psi))?;
        let eta = ObjectwisePrenat::new(f.clone(), f, -1, pick(|c| &c.eta))?;
        let omega = ObjectwisePrenat::new(g.clone(), g, -1, pick(|c| &c.omega))?;
        Ok((Arc::new(psi), Arc::new(eta), Arc::new(omega)))
    }
}

/// Runs `ho_invert` on `Φ^0_X` for every object.
pub fn objectwise_inverse(phi: &dyn Prenat, objects: &[Arc<TwistedComplex>]) -> Result<ObjectwiseInverse> {
    let mut certificates = Vec::new();
    for (i, x) in objects.iter().enumerate() {
        match ho_invert(&phi.level0(x)?)? {
            Some(c) => certificates.push((x.clone(), c)),
            None => {
                return Ok(ObjectwiseInverse {
                    certificates,
                    failure: Some(i),
                })
            }
        }
    }
    Ok(ObjectwiseInverse {
        certificates,
        failure: None,
    })
}

/// Every check attached to the transformation induced by a homotopy.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PhiReport {
    /// `dΦ_0(E) = 0` for every object.
    pub closed_level0: ValidationReport,
    /// The level-one identity relating `Φ_1`, `Φ_0` and the pullbacks.
    pub level_one: ValidationReport,
    /// The level-two identity relating `Φ_1` and composition.
    pub level_two: ValidationReport,
    /// `(d^∞Φ)^l = 0` for `l ≤ max_level`.
    pub dinf_closed: ValidationReport,
    /// `Φ_0(E)` is a weak equivalence for every object.
    pub weak_equivalence: ValidationReport,
    /// Objects where strict naturality of `Φ_0` fails.
    pub naturality_defects: usize,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.closed_level0.passed()
            && self.level_one.passed()
            && self.level_two.passed()
            && self.dinf_closed.passed()
            && self.weak_equivalence.passed()
    }
}

/// Builds `Φ` from `h` and checks it on the probe.
pub fn check_phi(
    h: &Arc<SimplicialHomotopy>,
    probe: &ProbeSet,
    max_level: usize,
) -> Result<(Arc<HomotopyPhi>, PhiReport)> {
    let phi = Arc::new(HomotopyPhi::new(h.clone()));
    let mut rep = PhiReport::default();
    for (i, x) in probe.objects.iter().enumerate() {
        rep.closed_level0
            .check(phi.closedness_residual(x)?.is_zero(), || "dΦ_0 = 0".into(), 0, &[], i);
        rep.weak_equivalence.check(
            is_weak_equivalence(&phi.phi0(x)?)?,
            || "Φ_0 weak equivalence".into(),
            0,
            &[],
            i,
        );
    }
    for (i, u) in probe.morphisms.iter().enumerate() {
        rep.level_one.check(
            phi.level_one_residual(u)?.is_zero(),
            || "level-one identity".into(),
            1,
            &[i],
            i,
        );
        if !phi.naturality_defect(u)?.is_zero() {
            rep.naturality_defects += 1;
        }
    }
    for (c, chain) in probe.chains(2).iter().enumerate() {
        rep.level_two.check(
            phi.level_two_residual(&chain[1], &chain[0])?.is_zero(),
            || "level-two identity".into(),
            2,
            &[],
            c,
        );
    }
    let as_prenat: Arc<dyn Prenat> = phi.clone();
    rep.dinf_closed = verify_closed(as_prenat, probe, max_level, Convention::Verbatim)?;
    Ok((phi, rep))
}
