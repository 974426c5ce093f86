//! Dense symmetric eigendecomposition.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! method with Wilkinson-style shifts (the EISPACK `tred2`/`tql2` pair). Both
//! phases run on the transpose of the usual working array so that every inner
//! loop walks contiguous memory: for a row-major symmetric input the
//! transpose is the input itself, and the Givens rotations of the QL phase
//! act on eigenvector rows instead of columns.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};

/// Maximum QL iterations spent on a single eigenvalue.
const MAX_QL_ITERATIONS: usize = 64;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
///
/// Column `k` of [`EigenDecomp::vectors`] is the unit eigenvector belonging to
/// `values[k]`. Each eigenvector is signed so that its entry of largest
/// magnitude is positive (lowest index on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    values: Vec<f64>,
    vectors: Matrix,
}

impl EigenDecomp {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as columns.
    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `⟨v_k, 𝟙⟩` for every eigenvector.
    pub fn ones_projections(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for i in 0..n {
            for (o, v) in out.iter_mut().zip(self.vectors.row(i)) {
                *o += v;
            }
        }
        out
    }

    /// `Σ_k f(λ_k) v_k v_kᵀ`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.n();
        let weights: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let scaled = Matrix::from_fn(n, n, |i, k| self.vectors[(i, k)] * weights[k]);
        scaled.matmul_t(&self.vectors)
    }

    /// `Σ_k λ_k v_k v_kᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        self.spectral_map(|l| l)
    }

    /// Largest `|λ_k|`.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, l| acc.max(l.abs()))
    }
}

/// Eigendecomposition of a dense symmetric matrix.
pub fn eig_sym(a: &SymMatrix) -> Result<EigenDecomp> {
    if !a.as_matrix().is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let n = a.n();
    // Working array W = Vᵀ; the input is symmetric so W starts as A.
    let mut w = a.as_matrix().as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut w, &mut d, &mut e);
    ql_implicit(n, &mut w, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let row = &w[k * n..(k + 1) * n];
        let sign = sign_for(row);
        for (i, &x) in row.iter().enumerate() {
            vectors[(i, col)] = sign * x;
        }
    }
    Ok(EigenDecomp { values, vectors })
}

/// Spectral norm `max_k |λ_k|`.
pub fn spectral_norm(a: &SymMatrix) -> Result<f64> {
    Ok(eig_sym(a)?.spectral_norm())
}

fn sign_for(v: &[f64]) -> f64 {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Householder tridiagonalization. On exit `d` holds the diagonal, `e[1..]`
/// the subdiagonal, and row `k` of `w` the `k`-th column of the accumulated
/// orthogonal transform.
fn tridiagonalize(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = w[at(j, n - 1)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &x in &d[..i] {
            scale += x.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[at(j, i - 1)];
                w[at(j, i)] = 0.0;
                w[at(i, j)] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for x in &mut e[..i] {
                *x = 0.0;
            }
            for j in 0..i {
                f = d[j];
                w[at(i, j)] = f;
                let row = &w[at(j, 0)..at(j, 0) + n];
                g = e[j] + row[j] * f;
                for k in (j + 1)..i {
                    g += row[k] * d[k];
                    e[k] += row[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let fj = d[j];
                let gj = e[j];
                let row = &mut w[at(j, 0)..at(j, 0) + n];
                for k in j..i {
                    row[k] -= fj * e[k] + gj * d[k];
                }
                d[j] = row[i - 1];
                row[i] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n.saturating_sub(1) {
        w[at(i, n - 1)] = w[at(i, i)];
        w[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            let (head, tail) = w.split_at_mut(at(i + 1, 0));
            let pivot_row = &tail[..=i];
            for k in 0..=i {
                d[k] = pivot_row[k] / h;
            }
            for j in 0..=i {
                let row = &mut head[at(j, 0)..at(j, 0) + i + 1];
                let g: f64 = pivot_row.iter().zip(row.iter()).map(|(a, b)| a * b).sum();
                for (x, &dk) in row.iter_mut().zip(&d[..=i]) {
                    *x -= g * dk;
                }
            }
        }
        for k in 0..=i {
            w[at(i + 1, k)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = w[at(j, n - 1)];
        w[at(j, n - 1)] = 0.0;
    }
    w[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on the tridiagonal `(d, e)`, applying the rotations
/// to the rows of `w`.
fn ql_implicit(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] == 0 so the search always stops inside the array.
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NumericalFailure(format!(
                        "QL iteration did not converge for eigenvalue {l}"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in &mut d[(l + 2)..n] {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let vi = &mut lo[i * n..];
                    let vi1 = &mut hi[..n];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let hk = *b;
                        *b = s * *a + c * hk;
                        *a = c * *a - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
