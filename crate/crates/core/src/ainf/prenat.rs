use std::sync::Arc;

use super::functor::Pullback;
use crate::error::{Error, Result};
use crate::random::{self, Rng64};
use crate::twisted::{same_object, TwistedComplex, TwistedMorphism};

/// An A∞-prenatural transformation `Φ : F ⇒ G` of degree `n`, evaluated
/// extensionally.
///
/// `level(us)` is `Φ^l(u_l ⊗ … ⊗ u_1)` with `us[0] = u_1`, a morphism
/// `F X_0 → G X_l` of degree `n − l + Σ|u_i|`.
pub trait Prenat: Send + Sync {
    fn degree(&self) -> i32;
    fn source(&self) -> &Pullback;
    fn target(&self) -> &Pullback;
    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism>;
    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism>;
}

/// Checks that `us` is a composable chain and returns `(X_0, X_l)`.
pub fn chain_ends(us: &[TwistedMorphism]) -> Result<(Arc<TwistedComplex>, Arc<TwistedComplex>)> {
    let (first, last) = match (us.first(), us.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::structural("empty morphism chain")),
    };
    for w in us.windows(2) {
        if !same_object(w[0].target(), w[1].source()) {
            return Err(Error::structural("morphism chain is not composable"));
        }
    }
    Ok((first.source().clone(), last.target().clone()))
}

pub fn chain_degree(us: &[TwistedMorphism]) -> i32 {
    us.iter().map(TwistedMorphism::degree).sum()
}

/// The zero value of `Φ^l(us)` with the correct endpoints and degree.
pub fn zero_value(p: &dyn Prenat, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
    let (x0, xl) = chain_ends(us)?;
    let degree = p.degree() - us.len() as i32 + chain_degree(us);
    Ok(TwistedMorphism::zero(
        p.source().object(&x0)?,
        p.target().object(&xl)?,
        degree,
    ))
}

/// `Φ^{l}` for `l ≥ 0`, dispatching to `level0` for the empty chain at `x`.
pub(crate) fn eval(p: &dyn Prenat, x: &Arc<TwistedComplex>, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
    if us.is_empty() {
        p.level0(x)
    } else {
        p.level(us)
    }
}

/// `id_F`: identity at level 0, zero above.
pub struct IdentityPrenat {
    functor: Pullback,
}

impl IdentityPrenat {
    pub fn new(functor: Pullback) -> Self {
        IdentityPrenat { functor }
    }
}

impl Prenat for IdentityPrenat {
    fn degree(&self) -> i32 {
        0
    }
    fn source(&self) -> &Pullback {
        &self.functor
    }
    fn target(&self) -> &Pullback {
        &self.functor
    }
    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        Ok(TwistedMorphism::identity(self.functor.object(x)?))
    }
    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
        zero_value(self, us)
    }
}

/// Given level-0 components on a finite object list, zero above.
pub struct ObjectwisePrenat {
    source: Pullback,
    target: Pullback,
    degree: i32,
    components: Vec<(Arc<TwistedComplex>, TwistedMorphism)>,
}

impl ObjectwisePrenat {
    pub fn new(
        source: Pullback,
        target: Pullback,
        degree: i32,
        components: Vec<(Arc<TwistedComplex>, TwistedMorphism)>,
    ) -> Result<Self> {
        for (x, c) in &components {
            if c.degree() != degree {
                return Err(Error::structural("objectwise component has the wrong degree"));
            }
            if !same_object(c.source(), &source.object(x)?) || !same_object(c.target(), &target.object(x)?) {
                return Err(Error::structural("objectwise component has the wrong endpoints"));
            }
        }
        Ok(ObjectwisePrenat {
            source,
            target,
            degree,
            components,
        })
    }
}

impl Prenat for ObjectwisePrenat {
    fn degree(&self) -> i32 {
        self.degree
    }
    fn source(&self) -> &Pullback {
        &self.source
    }
    fn target(&self) -> &Pullback {
        &self.target
    }
    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        self.components
            .iter()
            .find(|(k, _)| same_object(k, x))
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::structural("object outside the prenatural transformation's domain"))
    }
    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
        zero_value(self, us)
    }
}

/// `Ψ∘Φ` for degree-0 `Φ : F ⇒ G`, `Ψ : G ⇒ H`:
/// `(Ψ∘Φ)^l = Σ_{k=1}^{l−1} Ψ^{l−k}Φ^k + Ψ^lΦ^0_{X_0} + Ψ^0_{X_l}Φ^l`.
pub struct Composite {
    outer: Arc<dyn Prenat>,
    inner: Arc<dyn Prenat>,
}

impl Composite {
    pub fn new(outer: Arc<dyn Prenat>, inner: Arc<dyn Prenat>) -> Result<Self> {
        if outer.degree() != 0 || inner.degree() != 0 {
            return Err(Error::structural("composition is defined for degree-0 transformations"));
        }
        if outer.source() != inner.target() {
            return Err(Error::structural("composite: middle functors differ"));
        }
        Ok(Composite { outer, inner })
    }
}

impl Prenat for Composite {
    fn degree(&self) -> i32 {
        0
    }
    fn source(&self) -> &Pullback {
        self.inner.source()
    }
    fn target(&self) -> &Pullback {
        self.outer.target()
    }
    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        self.outer.level0(x)?.compose(&self.inner.level0(x)?)
    }
    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
        let (x0, xl) = chain_ends(us)?;
        let l = us.len();
        let mut acc = self.outer.level(us)?.compose(&self.inner.level0(&x0)?)?;
        acc = acc.add(&self.outer.level0(&xl)?.compose(&self.inner.level(us)?)?)?;
        for k in 1..l {
            let t = self.outer.level(&us[k..])?.compose(&self.inner.level(&us[..k])?)?;
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

/// `(X, M_X)` for each object of the domain.
type Table = Vec<(Arc<TwistedComplex>, TwistedMorphism)>;

/// A random multilinear transformation of degree `n`:
/// `Φ^l(u_l…u_1) = Σ_{j=0}^{l} G(u_l)…G(u_{j+1}) M^{(l,j)}_{X_j} F(u_j)…F(u_1)`
/// with random `M^{(l,j)}_X : FX → GX` of degree `n − l`.
pub struct RandomPrenat {
    source: Pullback,
    target: Pullback,
    degree: i32,
    /// `tables[l][j]` lists `(X, M^{(l,j)}_X)`.
    tables: Vec<Vec<Table>>,
}

impl RandomPrenat {
    pub fn new(
        source: Pullback,
        target: Pullback,
        degree: i32,
        objects: &[Arc<TwistedComplex>],
        max_level: usize,
        rng: &mut Rng64,
        density: f64,
    ) -> Result<Self> {
        let mut tables = Vec::new();
        for l in 0..=max_level {
            let mut row = Vec::new();
            for _ in 0..=l {
                let mut col = Vec::new();
                for x in objects {
                    let (fx, gx) = (source.object(x)?, target.object(x)?);
                    let d = degree - l as i32;
                    let top = fx.truncation();
                    let m = random::hom_element(fx.sheaf(), gx.sheaf(), d, 0..=top, rng, density)?;
                    col.push((x.clone(), TwistedMorphism::new(fx, gx, d, m)?));
                }
                row.push(col);
            }
            tables.push(row);
        }
        Ok(RandomPrenat {
            source,
            target,
            degree,
            tables,
        })
    }

    fn table(&self, l: usize, j: usize, x: &Arc<TwistedComplex>) -> Result<&TwistedMorphism> {
        let row = self
            .tables
            .get(l)
            .ok_or_else(|| Error::structural(format!("random transformation has no level {l}")))?;
        row[j]
            .iter()
            .find(|(k, _)| same_object(k, x))
            .map(|(_, m)| m)
            .ok_or_else(|| Error::structural("object outside the random transformation's domain"))
    }
}

impl Prenat for RandomPrenat {
    fn degree(&self) -> i32 {
        self.degree
    }
    fn source(&self) -> &Pullback {
        &self.source
    }
    fn target(&self) -> &Pullback {
        &self.target
    }
    fn level0(&self, x: &Arc<TwistedComplex>) -> Result<TwistedMorphism> {
        Ok(self.table(0, 0, x)?.clone())
    }
    fn level(&self, us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
        chain_ends(us)?;
        let l = us.len();
        let mut acc = zero_value(self, us)?;
        for j in 0..=l {
            let xj = if j == 0 { us[0].source() } else { us[j - 1].target() };
            let mut t = self.table(l, j, xj)?.clone();
            for u in us[..j].iter().rev() {
                t = t.compose(&self.source.morphism(u)?)?;
            }
            for u in &us[j..] {
                t = self.target.morphism(u)?.compose(&t)?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

/// `u_l ⋯ u_1` for a chain with `us[0] = u_1`.
pub fn compose_chain(us: &[TwistedMorphism]) -> Result<TwistedMorphism> {
    let mut it = us.iter();
    let mut acc = it.next().ok_or_else(|| Error::structural("empty chain"))?.clone();
    for u in it {
        acc = u.compose(&acc)?;
    }
    Ok(acc)
}
