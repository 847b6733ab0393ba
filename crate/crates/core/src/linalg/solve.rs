use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::scalar::{BaseRing, Scalar};
use crate::error::{Error, Result};

/// Finds `x` with `A·x = b`, or `None` when `b` is not in the image of `A`.
///
/// The answer is deterministic: free variables are set to zero and the
/// pivot variables are read off the reduced echelon form of `[A | b]`.
pub fn solve_affine(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if a.rows() != b.len() {
        return Err(Error::structural(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let ring = a.ring();
    if let Some(s) = b.iter().find(|s| s.ring() != ring) {
        return Err(Error::structural(format!(
            "right-hand side entry from {} for a matrix over {ring}",
            s.ring()
        )));
    }
    let rhs = Matrix::column(ring, b.to_vec());
    let aug = Matrix::block(ring, &[a.rows()], &[a.cols(), 1], &[vec![Some(a), Some(&rhs)]]);
    let ech = aug.echelon();
    if ech.pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![ring.zero(); a.cols()];
    for (r, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.rref.get(r, a.cols()).clone();
    }
    Ok(Some(x))
}

/// Incrementally assembled sparse linear system `A·x = b`.
///
/// Rows are addressed by caller-chosen keys so that equations produced by
/// evaluating a linear operator on basis vectors can be merged into a
/// single row per output coordinate.
#[derive(Clone, Debug)]
pub struct LinearSystem<K: Ord> {
    ring: BaseRing,
    unknowns: usize,
    rows: BTreeMap<K, (BTreeMap<usize, Scalar>, Scalar)>,
}

impl<K: Ord + Clone> LinearSystem<K> {
    pub fn new(ring: BaseRing, unknowns: usize) -> Self {
        LinearSystem {
            ring,
            unknowns,
            rows: BTreeMap::new(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    /// Adds `coeff · x[unknown]` to the left side of row `key`.
    pub fn add_coefficient(&mut self, key: K, unknown: usize, coeff: &Scalar) {
        assert!(unknown < self.unknowns, "unknown index out of range");
        if coeff.is_zero() {
            return;
        }
        let zero = self.ring.zero();
        let (row, _) = self.rows.entry(key).or_insert_with(|| (BTreeMap::new(), zero));
        let entry = row.entry(unknown).or_insert_with(|| coeff.ring().zero());
        *entry = &*entry + coeff;
    }

    /// Adds `value` to the right side of row `key`.
    pub fn add_rhs(&mut self, key: K, value: &Scalar) {
        if value.is_zero() {
            return;
        }
        let zero = self.ring.zero();
        let (_, rhs) = self.rows.entry(key).or_insert_with(|| (BTreeMap::new(), zero));
        *rhs = &*rhs + value;
    }

    pub fn solve(&self) -> Result<Option<Vec<Scalar>>> {
        let n = self.rows.len();
        let mut a = Matrix::zeros(self.ring, n, self.unknowns);
        let mut b = Vec::with_capacity(n);
        for (i, (row, rhs)) in self.rows.values().enumerate() {
            for (&j, v) in row {
                a.set(i, j, v.clone());
            }
            b.push(rhs.clone());
        }
        solve_affine(&a, &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let q = BaseRing::Rationals;
        let a = Matrix::identity(q, 2);
        let x = solve_affine(&a, &[q.from_i64(1), q.from_i64(2)]).unwrap().unwrap();
        assert_eq!(x, vec![q.from_i64(1), q.from_i64(2)]);
    }

    #[test]
    fn zero_map_has_no_preimage_of_nonzero() {
        let q = BaseRing::Rationals;
        let a = Matrix::zeros(q, 2, 2);
        assert!(solve_affine(&a, &[q.from_i64(1), q.from_i64(0)]).unwrap().is_none());
        assert!(solve_affine(&a, &[q.from_i64(0), q.from_i64(0)]).unwrap().is_some());
    }

    #[test]
    fn shape_mismatch_is_structural() {
        let q = BaseRing::Rationals;
        let a = Matrix::identity(q, 2);
        assert!(matches!(solve_affine(&a, &[q.from_i64(1)]), Err(Error::Structural(_))));
    }

    #[test]
    fn sparse_system_merges_rows() {
        let f = BaseRing::prime_field(5).unwrap();
        let mut sys = LinearSystem::new(f, 2);
        sys.add_coefficient("r", 0, &f.from_i64(1));
        sys.add_coefficient("r", 0, &f.from_i64(1));
        sys.add_rhs("r", &f.from_i64(4));
        sys.add_coefficient("s", 1, &f.from_i64(3));
        let x = sys.solve().unwrap().unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(0)]);
    }
}
