use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::simplicial::SimplicialMap;
use crate::twisted::{TwistedComplex, TwistedMorphism};

/// `(X, f^*X)` pairs already computed.
type Memo = Vec<(Arc<TwistedComplex>, Arc<TwistedComplex>)>;

/// The dg-functor `f^* : Tw(V) → Tw(U)`.
///
/// Pulled-back objects are memoised by pointer so that morphisms between
/// the same objects share endpoint allocations. Clones share the memo.
#[derive(Clone, Debug)]
pub struct Pullback {
    map: Arc<SimplicialMap>,
    cache: Arc<Mutex<Memo>>,
}

impl PartialEq for Pullback {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.map, &other.map) || self.map == other.map
    }
}

impl Pullback {
    pub fn new(map: Arc<SimplicialMap>) -> Self {
        Pullback {
            map,
            cache: Arc::new(Mutex::new(Vec::new())),
        }
    }

    pub fn map(&self) -> &Arc<SimplicialMap> {
        &self.map
    }

    pub fn object(&self, x: &Arc<TwistedComplex>) -> Result<Arc<TwistedComplex>> {
        let mut cache = self.cache.lock().expect("functor cache poisoned");
        if let Some((_, y)) = cache.iter().find(|(k, _)| Arc::ptr_eq(k, x)) {
            return Ok(y.clone());
        }
        if !Arc::ptr_eq(x.sheaf().space(), self.map.target()) && **x.sheaf().space() != **self.map.target() {
            return Err(Error::structural("object does not live on the functor's source space"));
        }
        let y = Arc::new(x.pullback(&self.map)?);
        cache.push((x.clone(), y.clone()));
        Ok(y)
    }

    pub fn morphism(&self, u: &TwistedMorphism) -> Result<TwistedMorphism> {
        let source = self.object(u.source())?;
        let target = self.object(u.target())?;
        u.pullback_into(&self.map, source, target)
    }
}
