//! Dense KKT oracles for the two quadratic relaxations.
//!
//! Both minimize `‖AX − XB‖²_F + η²‖X‖²_F`; the regularized program fixes
//! the total mass `𝟙ᵀX𝟙 = n`, the row-constrained program fixes every row sum
//! `X𝟙 = 𝟙`. They are solved directly on the `n²` vectorized unknowns
//! (row-major, `x[i·n + j] = X_ij`) without any spectral information, so they
//! serve as independent references for the eigen-alignment formulas.

use crate::error::{Error, Result};
use crate::matrix::{lu_solve_in_place, solve, Matrix, SymMatrix};
use crate::similarity::{check_inputs, Method, SimilarityMatrix};

/// Largest dimension the dense oracles accept.
pub const KKT_MAX_N: usize = 64;

/// Rows of the linear map `L(X) = AX − XB` as sparse `(column, value)` lists.
fn commutator_rows(a: &SymMatrix, b: &SymMatrix) -> Vec<Vec<(usize, f64)>> {
    let n = a.n();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = Vec::with_capacity(2 * n);
            // (AX)_ij = Σ_k A_ik X_kj
            for k in 0..n {
                if a[(i, k)] != 0.0 {
                    row.push((k * n + j, a[(i, k)]));
                }
            }
            // (XB)_ij = Σ_k X_ik B_kj
            for k in 0..n {
                if b[(k, j)] != 0.0 {
                    row.push((i * n + k, -b[(k, j)]));
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Hessian-like normal matrix `LᵀL + η²I` of size `n² × n²`.
fn normal_matrix(a: &SymMatrix, b: &SymMatrix, eta: f64) -> Matrix {
    let n2 = a.n() * a.n();
    let mut m = Matrix::zeros(n2, n2);
    for row in commutator_rows(a, b) {
        for &(c1, v1) in &row {
            for &(c2, v2) in &row {
                m[(c1, c2)] += v1 * v2;
            }
        }
    }
    for k in 0..n2 {
        m[(k, k)] += eta * eta;
    }
    m
}

fn check_size(n: usize) -> Result<()> {
    if n > KKT_MAX_N {
        return Err(Error::SizeError {
            n,
            limit: KKT_MAX_N,
        });
    }
    Ok(())
}

/// Solution of `min ‖AX − XB‖² + η²‖X‖²` subject to `𝟙ᵀX𝟙 = n`.
///
/// Stationarity gives `(LᵀL + η²I)x = c·𝟙`; the multiplier `c` is fixed by
/// the constraint.
pub fn kkt_oracle_regqp(a: &SymMatrix, b: &SymMatrix, eta: f64) -> Result<SimilarityMatrix> {
    check_inputs(a, b, eta)?;
    let n = a.n();
    check_size(n)?;
    let m = normal_matrix(a, b, eta);
    let y = solve(&m, &vec![1.0; n * n])?;
    let total: f64 = y.iter().sum();
    if !(total.abs() > 0.0) {
        return Err(Error::NumericalFailure(
            "degenerate total-sum multiplier".into(),
        ));
    }
    let c = n as f64 / total;
    let x = Matrix::from_vec(n, n, y.into_iter().map(|v| v * c).collect())?;
    SimilarityMatrix::new(x, Method::KktRegQp, eta)
}

/// Solution of `min ‖AX − XB‖² + η²‖X‖²` subject to `X𝟙 = 𝟙`, from the
/// saddle-point system `[2(LᵀL+η²I), Cᵀ; C, 0]·[x; ν] = [0; 𝟙]`.
pub fn kkt_oracle_rowqp(a: &SymMatrix, b: &SymMatrix, eta: f64) -> Result<SimilarityMatrix> {
    check_inputs(a, b, eta)?;
    let n = a.n();
    check_size(n)?;
    let n2 = n * n;
    let dim = n2 + n;
    let m = normal_matrix(a, b, eta);
    let mut kkt = vec![0.0; dim * dim];
    for r in 0..n2 {
        for (c, &v) in m.row(r).iter().enumerate() {
            kkt[r * dim + c] = 2.0 * v;
        }
    }
    // Constraint i: Σ_j X_ij = 1.
    for i in 0..n {
        for j in 0..n {
            let var = i * n + j;
            kkt[(n2 + i) * dim + var] = 1.0;
            kkt[var * dim + n2 + i] = 1.0;
        }
    }
    let mut rhs = vec![0.0; dim];
    for v in &mut rhs[n2..] {
        *v = 1.0;
    }
    lu_solve_in_place(dim, &mut kkt, &mut rhs, 1)?;
    rhs.truncate(n2);
    let x = Matrix::from_vec(n, n, rhs)?;
    SimilarityMatrix::new(x, Method::KktRowQp, eta)
}
