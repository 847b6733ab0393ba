use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::{check_same, HomElement};
use super::sheaf::GradedSheaf;
use crate::error::{Error, Result};
use crate::linalg::{sign_positive, Matrix};
use crate::mutation::{active, Mutation};

/// Address of one vector of a module-type cochain: the component `c^{p,q}`
/// at simplex `x`, a vector in `E^q` at the first vertex of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectionKey {
    pub p: usize,
    pub q: i32,
    pub x: usize,
}

/// An element of `C^•(U, E^•)`, stored as column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechSection {
    sheaf: Arc<GradedSheaf>,
    blocks: BTreeMap<SectionKey, Matrix>,
}

impl CechSection {
    pub fn zero(sheaf: Arc<GradedSheaf>) -> Self {
        CechSection {
            sheaf,
            blocks: BTreeMap::new(),
        }
    }

    pub fn from_blocks(
        sheaf: Arc<GradedSheaf>,
        blocks: impl IntoIterator<Item = (SectionKey, Matrix)>,
    ) -> Result<Self> {
        let mut out = CechSection::zero(sheaf);
        for (k, v) in blocks {
            out.add_block(k, &v)?;
        }
        Ok(out)
    }

    pub fn sheaf(&self) -> &Arc<GradedSheaf> {
        &self.sheaf
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&SectionKey, &Matrix)> {
        self.blocks.iter()
    }

    pub fn get(&self, key: &SectionKey) -> Option<&Matrix> {
        self.blocks.get(key)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add_block(&mut self, key: SectionKey, v: &Matrix) -> Result<()> {
        let space = self.sheaf.space();
        if key.p > space.truncation() || key.x >= space.level_size(key.p) {
            return Err(Error::structural("section block outside the space"));
        }
        let rank = self.sheaf.rank(space.first_vertex(key.p, key.x), key.q);
        if v.shape() != (rank, 1) {
            return Err(Error::structural(format!(
                "section vector has shape {:?}, expected ({rank}, 1)",
                v.shape()
            )));
        }
        self.add_unchecked(key, v);
        Ok(())
    }

    fn add_unchecked(&mut self, key: SectionKey, v: &Matrix) {
        if v.is_zero() {
            return;
        }
        match self.blocks.get_mut(&key) {
            Some(e) => {
                e.add_assign_ref(v);
                if e.is_zero() {
                    self.blocks.remove(&key);
                }
            }
            None => {
                self.blocks.insert(key, v.clone());
            }
        }
    }

    pub fn add(&self, other: &CechSection) -> Result<CechSection> {
        check_same(&self.sheaf, &other.sheaf, "section sum")?;
        let mut out = self.clone();
        for (k, v) in &other.blocks {
            out.add_unchecked(*k, v);
        }
        Ok(out)
    }

    pub fn signed(&self, positive: bool) -> CechSection {
        if positive {
            return self.clone();
        }
        CechSection {
            sheaf: self.sheaf.clone(),
            blocks: self.blocks.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    /// `(u·c)^{p+r,q+s} = (−1)^{qr} (ρ^*u^{p,q})(τ^*c^{r,s})`, truncated.
    pub fn act(u: &HomElement, c: &CechSection) -> Result<CechSection> {
        check_same(u.source(), &c.sheaf, "action")?;
        let space = c.sheaf.space().clone();
        let big_n = space.truncation();
        let drop_sign = active(Mutation::ComposeSign);
        let mut out = CechSection::zero(u.target().clone());
        for &(p, q) in &u.bidegrees() {
            for (ck, v) in &c.blocks {
                let (r, s) = (ck.p, ck.q);
                let level = p + r;
                if level > big_n {
                    continue;
                }
                let positive = drop_sign || sign_positive(q as i64 * r as i64);
                for z in 0..space.level_size(level) {
                    if space.tau(level, r, z) != ck.x {
                        continue;
                    }
                    let xu = space.rho(level, p, z);
                    let key = super::element::BlockKey { p, q, x: xu, n: s };
                    if let Some(m) = u.get(&key) {
                        out.add_unchecked(
                            SectionKey {
                                p: level,
                                q: q + s,
                                x: z,
                            },
                            &(m * v).signed(positive),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(δc)^{p+1,q} = Σ_{k=1}^{p+1} (−1)^k ∂_k^* c^{p,q}`, truncated.
    pub fn delta_truncated(&self) -> CechSection {
        let space = self.sheaf.space().clone();
        let big_n = space.truncation();
        let flip = active(Mutation::DeltaSign);
        let mut out = CechSection::zero(self.sheaf.clone());
        for (k, v) in &self.blocks {
            let p = k.p;
            if p + 1 > big_n {
                continue;
            }
            for z in 0..space.level_size(p + 1) {
                for i in 1..=p + 1 {
                    if space.face(p + 1, i)[z] == k.x {
                        let positive = sign_positive(i as i64) != flip;
                        out.add_unchecked(SectionKey { p: p + 1, q: k.q, x: z }, &v.clone().signed(positive));
                    }
                }
            }
        }
        out
    }
}
