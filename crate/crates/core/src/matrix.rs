//! Dense row-major matrices and the small amount of linear algebra the
//! matching pipeline needs beyond eigendecomposition: products, transposes
//! and LU solves over real or complex scalars.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionError {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionError {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Largest absolute entry (`‖M‖_max`), zero for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `self · other`.
    pub fn matmul(&self, other: &Matrix) -> Self {
        gemm(self, false, other, false)
    }

    /// `self · otherᵀ`.
    pub fn matmul_t(&self, other: &Matrix) -> Self {
        gemm(self, false, other, true)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius inner product `⟨self, other⟩`.
    pub fn dot(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn gemm(a: &Matrix, a_t: bool, b: &Matrix, b_t: bool) -> Matrix {
    let (m, k, rsa, csa) = if a_t {
        (a.cols, a.rows, 1, a.cols)
    } else {
        (a.rows, a.cols, a.cols, 1)
    };
    let (kb, n, rsb, csb) = if b_t {
        (b.cols, b.rows, 1, b.cols)
    } else {
        (b.rows, b.cols, b.cols, 1)
    };
    assert_eq!(k, kb, "inner dimensions differ");
    let mut c = Matrix::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return c;
    }
    // SAFETY: the strides and extents above describe exactly the buffers of
    // `a`, `b` and `c`, which do not alias.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.data.as_ptr(),
            rsa as isize,
            csa as isize,
            b.data.as_ptr(),
            rsb as isize,
            csb as isize,
            0.0,
            c.data.as_mut_ptr(),
            n as isize,
            1,
        );
    }
    c
}

/// Dense real symmetric matrix. Symmetry is exact: construction rejects any
/// matrix with `m[i][j] != m[j][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "expected a square matrix, found {}x{}",
                m.rows, m.cols
            )));
        }
        if m.rows == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        let n = m.rows;
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds a symmetric matrix from the upper triangle produced by `f(i, j)`
    /// with `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_upper(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_upper(n, |_, _| 0.0)
    }

    pub fn n(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(c))
    }

    /// Copy with all entries in row and column `j` set to zero (the minor
    /// `A^{(j)}` embedded back into `n × n`).
    pub fn without_index(&self, j: usize) -> Self {
        let n = self.n();
        let mut m = self.0.clone();
        for k in 0..n {
            m[(j, k)] = 0.0;
            m[(k, j)] = 0.0;
        }
        Self(m)
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Dense complex square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Assembles `re + i·im` from two real square matrices of equal size.
    pub fn from_parts(re: &Matrix, im: &Matrix) -> Self {
        assert!(re.is_square() && re.rows() == im.rows() && im.is_square());
        let data = re
            .as_slice()
            .iter()
            .zip(im.as_slice())
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        Self { n: re.rows(), data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn re(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self[(i, j)].re)
    }

    pub fn im(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self[(i, j)].im)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn row_sums(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Naive product; intended for the small matrices used in identity checks.
    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Scalars admitted by the dense LU solver.
pub trait LuScalar:
    Copy
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::SubAssign
{
    fn magnitude(self) -> f64;
}

impl LuScalar for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl LuScalar for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Solves `M · X = B` in place by Gaussian elimination with partial
/// pivoting. `m` is `n × n` and `rhs` is `n × k`, both row-major. On return
/// `rhs` holds the solution.
pub fn lu_solve_in_place<T: LuScalar>(
    n: usize,
    m: &mut [T],
    rhs: &mut [T],
    k: usize,
) -> Result<()> {
    assert_eq!(m.len(), n * n);
    assert_eq!(rhs.len(), n * k);
    let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.magnitude()));
    let tiny = scale * f64::EPSILON * 1e-3;
    for col in 0..n {
        let (piv, pmag) =
            (col..n)
                .map(|r| (r, m[r * n + col].magnitude()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if !(pmag > tiny) {
            return Err(Error::NumericalFailure(format!(
                "singular pivot in column {col}"
            )));
        }
        if piv != col {
            for j in 0..n {
                m.swap(piv * n + j, col * n + j);
            }
            for j in 0..k {
                rhs.swap(piv * k + j, col * k + j);
            }
        }
        let (top, bottom) = m.split_at_mut((col + 1) * n);
        let prow = &top[col * n..(col + 1) * n];
        let pivot = prow[col];
        let (rtop, rbottom) = rhs.split_at_mut((col + 1) * k);
        let prhs = &rtop[col * k..(col + 1) * k];
        for (r, row) in bottom.chunks_exact_mut(n).enumerate() {
            let factor = row[col] / pivot;
            if factor.magnitude() == 0.0 {
                continue;
            }
            for (x, &p) in row[col..].iter_mut().zip(&prow[col..]) {
                *x -= factor * p;
            }
            let rrow = &mut rbottom[r * k..(r + 1) * k];
            for (x, &p) in rrow.iter_mut().zip(prhs) {
                *x -= factor * p;
            }
        }
    }
    for col in (0..n).rev() {
        let pivot = m[col * n + col];
        for j in 0..k {
            rhs[col * k + j] = rhs[col * k + j] / pivot;
        }
        let (above, cur) = rhs.split_at_mut(col * k);
        let srow = &cur[..k];
        for r in 0..col {
            let factor = m[r * n + col];
            if factor.magnitude() == 0.0 {
                continue;
            }
            for (x, &s) in above[r * k..(r + 1) * k].iter_mut().zip(srow) {
                *x -= factor * s;
            }
        }
    }
    Ok(())
}

/// Solves the real system `m · x = b` for a single right-hand side.
pub fn solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if !m.is_square() || m.rows() != b.len() {
        return Err(Error::DimensionError {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let mut work = m.as_slice().to_vec();
    let mut x = b.to_vec();
    lu_solve_in_place(m.rows(), &mut work, &mut x, 1)?;
    Ok(x)
}

/// Solves `(a - z·I) x = b` over the complex numbers.
pub fn solve_shifted(a: &SymMatrix, z: Complex64, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.n();
    if b.len() != n {
        return Err(Error::DimensionError {
            expected: n,
            found: b.len(),
        });
    }
    let mut work: Vec<Complex64> = a
        .as_matrix()
        .as_slice()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    for i in 0..n {
        work[i * n + i] -= z;
    }
    let mut x = b.to_vec();
    lu_solve_in_place(n, &mut work, &mut x, 1)?;
    Ok(x)
}
