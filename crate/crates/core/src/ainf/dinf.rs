use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::functor::Pullback;
use super::prenat::{chain_degree, chain_ends, eval, Prenat};
use crate::error::Result;
use crate::linalg::sign_positive;
use crate::twisted::{TwistedComplex, TwistedMorphism};

/// Sign convention for `d^∞`.
///
/// `Verbatim` is the five-term formula exactly as printed. It agrees with
/// `Corrected` for transformations of degree 0, but does not square to
/// zero: at level 1 the term `dΦ^1(du)` survives with coefficient `−2`.
/// `Corrected` is the conjugate of the Hochschild differential on
/// `Hom(T(C), D)` and satisfies `d^∞∘d^∞ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Verbatim,
    Corrected,
}

/// Signs of the non-leading terms for `Φ` of degree `n` at a chain
/// `u_l … u_1`.
struct Signs {
    convention: Convention,
    n: i64,
    degrees: Vec<i64>,
}

impl Signs {
    fn l(&self) -> i64 {
        self.degrees.len() as i64
    }

    fn total(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// Sign of `G(u_l) Φ^{l−1}(u_{l−1} … u_1)`.
    fn left(&self) -> bool {
        let ul = *self.degrees.last().expect("non-empty chain");
        match self.convention {
            Convention::Verbatim => sign_positive(ul - 1),
            Convention::Corrected => sign_positive((self.n + 1) * (ul + 1)),
        }
    }

    /// Sign of `Φ^{l−1}(u_l … u_2) F(u_1)`.
    fn right(&self) -> bool {
        let u1 = self.degrees[0];
        match self.convention {
            Convention::Verbatim => sign_positive(self.n * u1 - self.total() + self.l() - 1),
            Convention::Corrected => sign_positive(self.total() + self.l() + self.n + 1),
        }
    }

    /// Sign of the terms acting at position `i` (1-based): `du_i` and
    /// `u_{i+1}u_i`.
    fn inner(&self, i: usize) -> bool {
        let above: i64 = self.degrees[i..].iter().sum();
        let base = above + self.l() - i as i64 + 1;
        match self.convention {
            Convention::Verbatim => sign_positive(base),
            Convention::Corrected => sign_positive(base + self.n),
        }
    }
}

/// `d^∞Φ`, of degree `n + 1`.
pub struct DInfinity {
    inner: Arc<dyn Prenat>,
    convention: Convention,
}

impl DInfinity {
    pub fn new(inner: Arc<dyn Prenat>, convention: Convention) -> Self {
        DInfinity { inner, convention }
    }
}

impl Prenat for DInfinity {
    fn degree(&self) -> i32 {
        self.inner.degree() + 1
    }

    fn source(&self) -> &Pullback {
        self.inner.source()
    }

    fn target(&self) -> &Pullback {
        self.inner.target()
    }

    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        self.inner.level0(x)?.differential()
    }

    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
        let (x0, _) = chain_ends(us)?;
        let l = us.len();
        let phi = self.inner.as_ref();
        let signs = Signs {
            convention: self.convention,
            n: phi.degree() as i64,
            degrees: us.iter().map(|u| u.degree() as i64).collect(),
        };
        let mut acc = phi.level(us)?.differential()?;
        let below = if l == 1 { x0.clone() } else { us[l - 2].target().clone() };
        let left = self
            .target()
            .morphism(&us[l - 1])?
            .compose(&eval(phi, &below, &us[..l - 1])?)?;
        acc = acc.add(&left.signed(signs.left()))?;
        let above = us[0].target().clone();
        let right = eval(phi, &above, &us[1..])?.compose(&self.source().morphism(&us[0])?)?;
        acc = acc.add(&right.signed(signs.right()))?;
        for i in 1..=l {
            let mut vs = us.to_vec();
            vs[i - 1] = us[i - 1].differential()?;
            acc = acc.add(&phi.level(&vs)?.signed(signs.inner(i)))?;
        }
        for i in 1..l {
            let mut vs: Vec<TwistedMorphism> = Vec::with_capacity(l - 1);
            vs.extend_from_slice(&us[..i - 1]);
            vs.push(us[i].compose(&us[i - 1])?);
            vs.extend_from_slice(&us[i + 1..]);
            acc = acc.add(&phi.level(&vs)?.signed(signs.inner(i)))?;
        }
        debug_assert_eq!(acc.degree(), phi.degree() + 1 - l as i32 + chain_degree(us));
        Ok(acc)
    }
}
