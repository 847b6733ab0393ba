//! Seeded random instances. All randomness flows from a `ChaCha8Rng`
//! seeded with a single `u64`, so every construction is reproducible.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::{BlockKey, GradedSheaf, HomElement};
use crate::error::Result;
use crate::linalg::{BaseRing, ChainComplex, GradedModule, Matrix, Scalar};
use crate::simplicial::{CoverSpec, SimplicialSpace};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small integer in `-2..=2`, zero with probability about `1 − density`.
pub fn scalar(ring: BaseRing, rng: &mut Rng64, density: f64) -> Scalar {
    if rng.gen_bool(density) {
        ring.from_i64(rng.gen_range(-2..=2))
    } else {
        ring.zero()
    }
}

pub fn matrix(ring: BaseRing, rows: usize, cols: usize, rng: &mut Rng64, density: f64) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| scalar(ring, rng, density))
}

/// A unimodular matrix: unit lower-triangular times upper-triangular with
/// `±1` diagonal, so the inverse stays small.
pub fn invertible(ring: BaseRing, n: usize, rng: &mut Rng64) -> Matrix {
    let lower = Matrix::from_fn(ring, n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => ring.from_i64(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Equal => ring.one(),
        std::cmp::Ordering::Less => ring.zero(),
    });
    let upper = Matrix::from_fn(ring, n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => ring.from_i64(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Equal => ring.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 }),
        std::cmp::Ordering::Greater => ring.zero(),
    });
    &lower * &upper
}

/// A random bounded complex in degrees `lo..=hi` with ranks at most
/// `max_rank`. Built as a change of basis of a split complex, so every
/// differential rank is chosen explicitly and homology is usually nonzero.
pub fn complex(ring: BaseRing, lo: i32, hi: i32, max_rank: usize, rng: &mut Rng64) -> Result<ChainComplex> {
    let ranks: BTreeMap<i32, usize> = (lo..=hi).map(|n| (n, rng.gen_range(1..=max_rank))).collect();
    // rank of d_n, bounded by what is left in degree n after d_{n−1}.
    let mut d_rank = BTreeMap::new();
    let mut incoming = 0;
    for n in lo..=hi {
        let available = ranks[&n] - incoming;
        let next = if n < hi { ranks[&(n + 1)] } else { 0 };
        let r = rng.gen_range(0..=available.min(next));
        d_rank.insert(n, r);
        incoming = r;
    }
    let module = GradedModule::new(ranks.clone());
    let bases: BTreeMap<i32, Matrix> = ranks.iter().map(|(&n, &r)| (n, invertible(ring, r, rng))).collect();
    let mut differential = BTreeMap::new();
    let mut incoming = 0;
    for n in lo..hi {
        let r = d_rank[&n];
        // Standard form: the last r basis vectors of degree n map onto the
        // first r basis vectors of degree n+1 (which are not themselves
        // boundaries' sources).
        let (src, tgt) = (ranks[&n], ranks[&(n + 1)]);
        let std = Matrix::from_fn(ring, tgt, src, |i, j| {
            if i < r && j + r >= src && j + r - src == i && j >= incoming {
                ring.one()
            } else {
                ring.zero()
            }
        });
        let g_inv = bases[&n].inverse().expect("unimodular");
        differential.insert(n, &(&bases[&(n + 1)] * &std) * &g_inv);
        incoming = r;
    }
    let c = ChainComplex::new(ring, module, differential)?;
    c.check_square_zero()?;
    Ok(c)
}

/// A random total-degree element with one random piece `(k, total − k)` per
/// level `k` in `levels`.
pub fn hom_element(
    source: &Arc<GradedSheaf>,
    target: &Arc<GradedSheaf>,
    total: i32,
    levels: std::ops::RangeInclusive<usize>,
    rng: &mut Rng64,
    density: f64,
) -> Result<HomElement> {
    let ring = source.ring();
    let space = source.space().clone();
    let mut out = HomElement::zero(source.clone(), target.clone());
    for k in levels {
        if k > space.truncation() {
            break;
        }
        let q = total - k as i32;
        for x in 0..space.level_size(k) {
            let (from, to) = (space.last_vertex(k, x), space.first_vertex(k, x));
            for (n, cols) in source.module(from).degrees() {
                let rows = target.rank(to, n + q);
                if rows > 0 {
                    out.add_block(BlockKey { p: k, q, x, n }, &matrix(ring, rows, cols, rng, density))?;
                }
            }
        }
    }
    Ok(out)
}

/// An invertible total-degree-0 endomorphism: unimodular `(0,0)` blocks
/// plus random higher pieces.
pub fn gauge(sheaf: &Arc<GradedSheaf>, rng: &mut Rng64, density: f64) -> Result<HomElement> {
    let ring = sheaf.ring();
    let space = sheaf.space().clone();
    let mut u = hom_element(sheaf, sheaf, 0, 1..=space.truncation(), rng, density)?;
    for y in 0..space.level_size(0) {
        for (n, r) in sheaf.module(y).degrees() {
            u.add_block(BlockKey { p: 0, q: 0, x: y, n }, &invertible(ring, r, rng))?;
        }
    }
    Ok(u)
}

/// A random cover of `points` points by `sets` non-empty subsets.
pub fn cover(points: usize, sets: usize, rng: &mut Rng64) -> CoverSpec {
    let names: Vec<String> = (0..points).map(|i| format!("p{i}")).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sets];
    // Every point lands somewhere; sets also pick up random extra points.
    let mut order: Vec<usize> = (0..points).collect();
    order.shuffle(rng);
    for (i, &pt) in order.iter().enumerate() {
        let s = if i < sets { i } else { rng.gen_range(0..sets) };
        members[s].push(pt);
    }
    for m in members.iter_mut() {
        for pt in 0..points {
            if rng.gen_bool(0.3) && !m.contains(&pt) {
                m.push(pt);
            }
        }
        m.sort_unstable();
    }
    let sets = members
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("S{i}"), m.into_iter().map(|p| names[p].clone()).collect()))
        .collect();
    CoverSpec { points: names, sets }
}

/// The one-point space, for tests.
pub fn point(truncation: usize) -> Arc<SimplicialSpace> {
    Arc::new(SimplicialSpace::point(truncation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invertible_has_inverse() {
        let mut r = rng(5);
        for n in 0..5 {
            assert!(invertible(BaseRing::Rationals, n, &mut r).inverse().is_some());
        }
    }

    #[test]
    fn random_complexes_square_to_zero_with_euler_check() {
        let mut r = rng(11);
        for _ in 0..20 {
            let c = complex(BaseRing::Rationals, -1, 2, 4, &mut r).unwrap();
            let h = c.homology_dims().unwrap();
            let chi: i64 = h
                .iter()
                .map(|(&d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
                .sum();
            assert_eq!(chi, c.module().euler_characteristic());
        }
    }

    #[test]
    fn cover_covers_and_is_seeded() {
        let a = cover(5, 3, &mut rng(1));
        let b = cover(5, 3, &mut rng(1));
        assert_eq!(a, b);
        a.check().unwrap();
    }
}
