//! Dense exact matrices. Matrices act on column vectors; `g * f` applies
//! `f` first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{content_gcd, mul_mod, rational_parts, BaseRing, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl Matrix {
    pub fn zeros(ring: BaseRing, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_fn(ring: BaseRing, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    /// Builds a matrix from rows; every row must have `cols` entries from `ring`.
    pub fn from_rows(ring: BaseRing, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::structural(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for s in row {
                if s.ring() != ring {
                    return Err(Error::structural(format!(
                        "entry from {} in a matrix over {ring}",
                        s.ring()
                    )));
                }
                data.push(s);
            }
        }
        Ok(Matrix {
            ring,
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(ring: BaseRing, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix::from_fn(ring, rows, cols, |i, j| ring.from_i64(entries[i * cols + j]))
    }

    pub fn column(ring: BaseRing, v: Vec<Scalar>) -> Self {
        let rows = v.len();
        Matrix {
            ring,
            rows,
            cols: 1,
            data: v,
        }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Multiplies by ±1.
    pub fn signed(self, positive: bool) -> Matrix {
        if positive {
            self
        } else {
            -self
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &Matrix) {
        assert_eq!(self.shape(), rhs.shape(), "matrix shape mismatch in addition");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            if !b.is_zero() {
                *a = &*a + b;
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Places `blocks[i][j]` at block position `(i, j)`; row heights and
    /// column widths are given explicitly so zero-size blocks are allowed.
    pub fn block(ring: BaseRing, heights: &[usize], widths: &[usize], blocks: &[Vec<Option<&Matrix>>]) -> Matrix {
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut r0 = 0;
        for (bi, h) in heights.iter().enumerate() {
            let mut c0 = 0;
            for (bj, w) in widths.iter().enumerate() {
                if let Some(m) = blocks[bi][bj] {
                    assert_eq!(m.shape(), (*h, *w), "block shape");
                    for i in 0..*h {
                        for j in 0..*w {
                            out.set(r0 + i, c0 + j, m.get(i, j).clone());
                        }
                    }
                }
                c0 += w;
            }
            r0 += h;
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::block(
            self.ring,
            &[n],
            &[n, n],
            &[vec![Some(self), Some(&Matrix::identity(self.ring, n))]],
        );
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(self.ring, n, n, |i, j| ech.rref.get(i, n + j).clone()))
    }

    /// A basis of the null space, one column per vector.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.ring.zero(); self.cols];
            v[free] = self.ring.one();
            for (r, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = -ech.rref.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Reduced row echelon form.
    ///
    /// Pivots are chosen as the first nonzero entry of the current column,
    /// scanning rows top to bottom. Over ℚ rows are kept as primitive
    /// integer vectors during elimination (fraction-free), and only the
    /// final normalization divides by the pivots.
    pub fn echelon(&self) -> Echelon {
        match self.ring {
            BaseRing::Rationals => self.echelon_rational(),
            BaseRing::PrimeField { p } => self.echelon_modular(p),
        }
    }

    fn echelon_rational(&self) -> Echelon {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows).map(|i| integer_row(self.row(i))).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, found);
            let (before, rest) = rows.split_at_mut(r);
            let (pivot_row, after) = rest.split_first_mut().unwrap();
            let pv = pivot_row[c].clone();
            for other in before.iter_mut().chain(after.iter_mut()) {
                if other[c].is_zero() {
                    continue;
                }
                let ov = other[c].clone();
                for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                    if y.is_zero() {
                        *x = &*x * &pv;
                    } else {
                        *x = &*x * &pv - &ov * y;
                    }
                }
                make_primitive(other);
            }
            pivots.push(c);
            r += 1;
        }
        let mut rref = Matrix::zeros(self.ring, self.rows, self.cols);
        for (i, row) in rows.iter().enumerate() {
            let lead = pivots.get(i).map(|&c| row[c].clone()).unwrap_or_else(BigInt::one);
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    rref.set(i, j, Scalar::Rational(BigRational::new(v.clone(), lead.clone())));
                }
            }
        }
        Echelon { rref, pivots }
    }

    fn echelon_modular(&self, p: u64) -> Echelon {
        let mut rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|s| match s {
                        Scalar::Modular { value, .. } => *value,
                        Scalar::Rational(_) => unreachable!("rational entry in GF(p) matrix"),
                    })
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, found);
            let inv = self.ring.from_i64(rows[r][c] as i64).inv().unwrap();
            let inv = match inv {
                Scalar::Modular { value, .. } => value,
                Scalar::Rational(_) => unreachable!(),
            };
            for x in rows[r].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            let (before, rest) = rows.split_at_mut(r);
            let (pivot_row, after) = rest.split_first_mut().unwrap();
            for other in before.iter_mut().chain(after.iter_mut()) {
                let f = other[c];
                if f == 0 {
                    continue;
                }
                for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                    if *y != 0 {
                        *x = (*x + p - mul_mod(f, *y, p)) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut rref = Matrix::zeros(self.ring, self.rows, self.cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rref.set(i, j, Scalar::Modular { value: v, modulus: p });
            }
        }
        Echelon { rref, pivots }
    }
}

/// Result of [`Matrix::echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Matrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for s in row {
        if let Scalar::Rational(r) = s {
            let (_, d) = rational_parts(r);
            if !d.is_one() {
                lcm = num_integer::Integer::lcm(&lcm, d);
            }
        }
    }
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|s| match s {
            Scalar::Rational(r) => {
                let (n, d) = rational_parts(r);
                n * (&lcm / d)
            }
            Scalar::Modular { .. } => unreachable!("modular entry in rational matrix"),
        })
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = content_gcd(row);
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    debug_assert!(row.iter().all(|x| x.abs() >= BigInt::zero()));
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch in product");
        self.mul_unchecked(rhs)
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix shape mismatch in subtraction");
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(mut self) -> Matrix {
        for v in self.data.iter_mut() {
            if !v.is_zero() {
                *v = -&*v;
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_over_both_rings() {
        for ring in [BaseRing::Rationals, BaseRing::prime_field(101).unwrap()] {
            let m = Matrix::from_i64(ring, 2, 2, &[2, 1, 1, 1]);
            let inv = m.inverse().unwrap();
            assert!((&m * &inv).is_identity());
            let singular = Matrix::from_i64(ring, 2, 2, &[1, 2, 2, 4]);
            assert!(singular.inverse().is_none());
        }
    }

    #[test]
    fn rank_and_kernel() {
        let q = BaseRing::Rationals;
        let m = Matrix::from_i64(q, 2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let col = Matrix::column(q, v);
            assert!((&m * &col).is_zero());
        }
    }

    #[test]
    fn empty_shapes_are_zero_maps() {
        let q = BaseRing::Rationals;
        let a = Matrix::zeros(q, 0, 3);
        let b = Matrix::zeros(q, 3, 0);
        assert_eq!((&b * &a).shape(), (3, 3));
        assert!((&b * &a).is_zero());
        assert_eq!((&a * &b).shape(), (0, 0));
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel().len(), 3);
    }

    #[test]
    fn rational_echelon_normalizes_pivots() {
        let q = BaseRing::Rationals;
        let m = Matrix::from_fn(q, 2, 2, |i, j| {
            q.parse_scalar(["1/2", "1/3", "1/4", "1/5"][i * 2 + j]).unwrap()
        });
        let e = m.echelon();
        assert_eq!(e.pivots, vec![0, 1]);
        assert!(e.rref.is_identity());
    }

    /// Determinant by permutation expansion; exact for the tiny sizes used.
    fn det(m: &[Vec<i64>]) -> i128 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod: i128 = (0..n).map(|i| m[i][p[i]] as i128).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|b| b.count_ones() as usize == k)
            .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
            .collect()
    }

    /// Rank over ℚ as the size of the largest non-vanishing minor.
    fn rank_by_minors(rows: usize, cols: usize, e: &[i64]) -> usize {
        (1..=rows.min(cols))
            .rev()
            .find(|&k| {
                subsets(rows, k).iter().any(|r| {
                    subsets(cols, k).iter().any(|c| {
                        let minor: Vec<Vec<i64>> = r
                            .iter()
                            .map(|&i| c.iter().map(|&j| e[i * cols + j]).collect())
                            .collect();
                        det(&minor) != 0
                    })
                })
            })
            .unwrap_or(0)
    }

    fn small_matrix() -> impl proptest::strategy::Strategy<Value = (usize, usize, Vec<i64>)> {
        use proptest::prelude::*;
        (0usize..=4, 0usize..=4).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-2i64..=2, r * c)))
    }

    proptest::proptest! {
        #[test]
        fn rank_matches_minor_oracle((r, c, e) in small_matrix()) {
            let m = Matrix::from_i64(BaseRing::Rationals, r, c, &e);
            proptest::prop_assert_eq!(m.rank(), rank_by_minors(r, c, &e));
            proptest::prop_assert_eq!(m.kernel().len(), c - m.rank());
            proptest::prop_assert_eq!(m.transpose().rank(), m.rank());
        }

        #[test]
        fn solve_finds_preimages_and_refuses_the_rest((r, c, e) in small_matrix(), x in proptest::collection::vec(-2i64..=2, 4), p in proptest::bool::ANY) {
            let ring = if p { BaseRing::prime_field(101).unwrap() } else { BaseRing::Rationals };
            let a = Matrix::from_i64(ring, r, c, &e);
            let x = Matrix::from_i64(ring, c, 1, &x[..c]);
            let b: Vec<Scalar> = (&a * &x).entries().to_vec();
            let y = crate::linalg::solve_affine(&a, &b).unwrap().expect("b lies in the image");
            let ay = &a * &Matrix::column(ring, y);
            proptest::prop_assert_eq!(ay.entries(), &b[..]);
            // A vector outside the image is refused.
            if a.rank() < r {
                let mut found = None;
                for i in 0..r {
                    let mut v = vec![ring.zero(); r];
                    v[i] = ring.one();
                    let col = Matrix::column(ring, v.clone());
                    let aug = Matrix::block(ring, &[r], &[c, 1], &[vec![Some(&a), Some(&col)]]);
                    if aug.rank() > a.rank() {
                        found = Some(v);
                        break;
                    }
                }
                let v = found.expect("a unit vector escapes a proper image");
                proptest::prop_assert!(crate::linalg::solve_affine(&a, &v).unwrap().is_none());
            }
        }
    }
}
