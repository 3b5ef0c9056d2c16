use std::ops::{Add, Deref, DerefMut, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{LseError, Result};
use crate::scalar::Real;

/// Dense real matrix stored in column-major order, so that the storage
/// itself is `vec(M)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Dense real vector.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DenseVector<T>(Vec<T>);

fn check_finite<T: Real>(what: &'static str, data: &[T]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(LseError::NonFinite { what, index }),
        None => Ok(()),
    }
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Builds a matrix from column-major entries, rejecting NaN and infinities.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LseError::dim(
                "DenseMatrix::from_col_major",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        check_finite("matrix", &data)?;
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn from_row_major(rows: usize, cols: usize, data: &[T]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LseError::dim(
                "DenseMatrix::from_row_major",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        check_finite("matrix", data)?;
        Ok(Self::from_fn(rows, cols, |i, j| data[i * cols + j]))
    }

    /// Row-major literal constructor for small fixed matrices.
    ///
    /// Panics on a length mismatch or non-finite entry.
    pub fn from_rows<const C: usize>(rows: &[[T; C]]) -> Self {
        let flat: Vec<T> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_row_major(rows.len(), C, &flat).expect("invalid matrix literal")
    }

    /// Matrix with `v` on the diagonal.
    pub fn diag_of(v: &[T]) -> Self {
        let mut m = Self::zeros(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Column-major storage, i.e. `vec(self)`.
    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> DenseVector<T> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn column(&self, j: usize) -> DenseVector<T> {
        DenseVector(self.col(j).to_vec())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Entrywise absolute value `|M|`.
    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// Copy of the block starting at `(r0, c0)` with shape `nr x nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &DenseMatrix<T>) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of range"
        );
        for j in 0..src.cols {
            for i in 0..src.rows {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[T]) -> DenseVector<T> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        let mut out = vec![T::zero(); self.rows];
        for (j, &vj) in v.iter().enumerate() {
            if vj == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.col(j)) {
                *o += a * vj;
            }
        }
        DenseVector(out)
    }

    /// `selfᵀ * v`.
    pub fn tr_mul_vec(&self, v: &[T]) -> DenseVector<T> {
        assert_eq!(self.rows, v.len(), "tr_mul_vec dimension mismatch");
        (0..self.cols).map(|j| dot(self.col(j), v)).collect()
    }

    pub fn matmul(&self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for k in 0..self.cols {
                let b = rhs[(k, j)];
                if b == T::zero() {
                    continue;
                }
                for (o, &a) in dst.iter_mut().zip(&self.data[k * self.rows..(k + 1) * self.rows]) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `selfᵀ * rhs` without forming the transpose.
    pub fn tr_matmul(&self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.rows, rhs.rows, "tr_matmul dimension mismatch");
        Self::from_fn(self.cols, rhs.cols, |i, j| dot(self.col(i), rhs.col(j)))
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut out = Self::zeros(self.rows + other.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, other);
        out
    }

    /// `[self, other]`
    pub fn hstack(&self, other: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &DenseMatrix<T>) -> T {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Converts the scalar type, e.g. `f64 -> f32`.
    pub fn cast<U: Real>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl<T: Real> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn mul(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn add(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn sub(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn neg(self) -> DenseMatrix<T> {
        self.map(|v| -v)
    }
}

#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

impl<T: Real> DenseVector<T> {
    pub fn zeros(n: usize) -> Self {
        DenseVector(vec![T::zero(); n])
    }

    /// `i`-th canonical basis vector of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = T::one();
        v
    }

    /// Wraps `data`, rejecting NaN and infinities.
    pub fn new(data: Vec<T>) -> Result<Self> {
        check_finite("vector", &data)?;
        Ok(DenseVector(data))
    }

    pub fn from_slice(data: &[T]) -> Self {
        DenseVector(data.to_vec())
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn dot(&self, other: &[T]) -> T {
        dot(&self.0, other)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        self.0.iter().map(|&v| f(v)).collect()
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// Hadamard product.
    pub fn hadamard(&self, other: &[T]) -> Self {
        assert_eq!(self.len(), other.len(), "hadamard length mismatch");
        self.0.iter().zip(other).map(|(&a, &b)| a * b).collect()
    }

    /// Sub-vector `[start, start + len)`.
    pub fn segment(&self, start: usize, len: usize) -> Self {
        DenseVector(self.0[start..start + len].to_vec())
    }

    /// Concatenation `[self; other]`.
    pub fn concat(&self, other: &[T]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        DenseVector(v)
    }

    /// `n x 1` matrix view of the vector.
    pub fn to_column(&self) -> DenseMatrix<T> {
        DenseMatrix {
            rows: self.len(),
            cols: 1,
            data: self.0.clone(),
        }
    }

    pub fn max_abs_diff(&self, other: &[T]) -> T {
        assert_eq!(self.len(), other.len(), "max_abs_diff length mismatch");
        self.0
            .iter()
            .zip(other)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn cast<U: Real>(&self) -> DenseVector<U> {
        self.0.iter().map(|v| U::lit(v.to_f64_lossy())).collect()
    }
}

impl<T> Deref for DenseVector<T> {
    type Target = [T];

    #[inline]
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for DenseVector<T> {
    #[inline]
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

impl<T> FromIterator<T> for DenseVector<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        DenseVector(iter.into_iter().collect())
    }
}

impl<T> From<Vec<T>> for DenseVector<T> {
    fn from(v: Vec<T>) -> Self {
        DenseVector(v)
    }
}

impl<T: Real> Add<&[T]> for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn add(self, rhs: &[T]) -> DenseVector<T> {
        assert_eq!(self.len(), rhs.len(), "add length mismatch");
        self.iter().zip(rhs).map(|(&a, &b)| a + b).collect()
    }
}

impl<T: Real> Sub<&[T]> for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn sub(self, rhs: &[T]) -> DenseVector<T> {
        assert_eq!(self.len(), rhs.len(), "sub length mismatch");
        self.iter().zip(rhs).map(|(&a, &b)| a - b).collect()
    }
}

impl<T: Real> Add for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn add(self, rhs: &DenseVector<T>) -> DenseVector<T> {
        self + &rhs[..]
    }
}

impl<T: Real> Sub for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn sub(self, rhs: &DenseVector<T>) -> DenseVector<T> {
        self - &rhs[..]
    }
}

impl<T: Real> Neg for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn neg(self) -> DenseVector<T> {
        self.map(|v| -v)
    }
}
