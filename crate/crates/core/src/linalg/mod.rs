//! Dense exact linear algebra over any [`Field`].

mod bareiss;
mod gauss;

pub use bareiss::{bareiss_rank, clear_denominators};
pub use gauss::{det, gauss_rank, inverse, pivot_form, rank, rank_profile, solve, PivotForm};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};

/// Row-major dense matrix. `zero` fixes the field context (cyclotomic index,
/// modulus) so that empty matrices still know where they live.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    zero: T,
}

impl<T: Clone> Mat<T> {
    pub fn filled(rows: usize, cols: usize, v: &T, zero: &T) -> Self {
        Mat { rows, cols, data: vec![v.clone(); rows * cols], zero: zero.clone() }
    }

    pub fn from_fn(rows: usize, cols: usize, zero: &T, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data, zero: zero.clone() }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, zero: &T) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect(), zero: zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, &self.zero, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), &self.zero, |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// The contiguous block `[r0, r0+nr) × [c0, c0+nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Mat::from_fn(nr, nc, &self.zero, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn map<U: Clone>(&self, zero: &U, mut f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect(), zero: zero.clone() }
    }

    pub fn try_map<U: Clone>(&self, zero: &U, mut f: impl FnMut(&T) -> Option<U>) -> Option<Mat<U>> {
        let data: Option<Vec<U>> = self.data.iter().map(&mut f).collect();
        Some(Mat { rows: self.rows, cols: self.cols, data: data?, zero: zero.clone() })
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize, zero: &F) -> Self {
        let z = zero.zero_like();
        Mat::filled(rows, cols, &z, &z)
    }

    pub fn identity(n: usize, zero: &F) -> Self {
        let z = zero.zero_like();
        let one = z.one_like();
        Mat::from_fn(n, n, &z, |i, j| if i == j { one.clone() } else { z.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Mat::from_fn(self.rows, self.cols, &self.zero, |i, j| self.get(i, j).add(rhs.get(i, j))))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Mat::from_fn(self.rows, self.cols, &self.zero, |i, j| self.get(i, j).sub(rhs.get(i, j))))
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(&self.zero, |x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(&self.zero, |x| x.neg())
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, rhs.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[F], m: &Self) -> Vec<F> {
        let mut out = vec![m.zero.clone(); m.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = m.get(k, j);
                if !b.is_zero() {
                    *o = o.add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.zero.clone();
                for (j, b) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (br, bc) = (rhs.rows, rhs.cols);
        Mat::from_fn(self.rows * br, self.cols * bc, &self.zero, |i, j| {
            let a = self.get(i / br, j / bc);
            if a.is_zero() {
                self.zero.clone()
            } else {
                a.mul(rhs.get(i % br, j % bc))
            }
        })
    }

    /// Assembles a block matrix; blocks in one block-row share their row count
    /// and blocks in one block-column share their column count.
    pub fn block_assemble(blocks: &[Vec<Mat<F>>]) -> Result<Self> {
        let Some(first) = blocks.first().and_then(|r| r.first()) else {
            return Err(Error::Shape("no blocks".into()));
        };
        let zero = first.zero.clone();
        let nbc = blocks[0].len();
        if blocks.iter().any(|r| r.len() != nbc) {
            return Err(Error::Shape("ragged block rows".into()));
        }
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        for (bi, r) in blocks.iter().enumerate() {
            for (bj, b) in r.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::Shape(format!("block ({bi},{bj}) has the wrong shape")));
                }
            }
        }
        let total_r: usize = heights.iter().sum();
        let total_c: usize = widths.iter().sum();
        let mut out = Mat::zeros(total_r, total_c, &zero);
        let mut r0 = 0;
        for (bi, r) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in r.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }
}

/// Embeds a rational matrix into the field of `proto`.
pub fn lift<F: Field>(a: &Mat<Rational>, proto: &F) -> Mat<F> {
    let z = proto.zero_like();
    a.map(&z, |q| z.from_rational(q))
}

/// `A ⊗ I_d` for a rational matrix A, over the field of `proto`.
pub fn tensor_with_identity<F: Field>(a: &Mat<Rational>, d: usize, proto: &F) -> Mat<F> {
    lift(a, proto).kron(&Mat::identity(d, proto))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), &rat(0)).unwrap()
    }

    #[test]
    fn kron_with_identity() {
        let a = q(&[&[0, 1], &[0, 0]]);
        let k = tensor_with_identity(&a, 2, &rat(0));
        assert_eq!(k, q(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]));
        assert_eq!(tensor_with_identity(&a, 1, &rat(0)), a);
        let e = q(&[&[1, 0], &[0, 0]]);
        assert_eq!(rank(&tensor_with_identity(&e, 3, &rat(0))), 3);
    }

    #[test]
    fn kron_is_multiplicative() {
        let a = q(&[&[1, 2], &[3, -1]]);
        let b = q(&[&[0, 1], &[5, 2]]);
        let lhs = tensor_with_identity(&a, 3, &rat(0)).mul(&tensor_with_identity(&b, 3, &rat(0))).unwrap();
        assert_eq!(lhs, tensor_with_identity(&a.mul(&b).unwrap(), 3, &rat(0)));
    }

    #[test]
    fn block_shapes_are_checked() {
        let a = q(&[&[1]]);
        let b = q(&[&[1, 2]]);
        assert!(Mat::block_assemble(&[vec![a.clone(), b.clone()]]).is_ok());
        assert!(Mat::block_assemble(&[vec![a.clone()], vec![b]]).is_err());
        assert!(Mat::<Rational>::block_assemble(&[]).is_err());
    }
}
