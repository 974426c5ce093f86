use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Matrix, SymMatrix};
use crate::spectral::eigen::{eig_sym, EigenDecomp};

/// Distance below which a real shift is treated as hitting an eigenvalue.
const SINGULAR_SHIFT_TOL: f64 = 1e-14;

/// Resolvent `R_A(z) = (A - zI)^{-1}`.
pub fn resolvent(a: &SymMatrix, z: Complex64) -> Result<ComplexMatrix> {
    let eig = eig_sym(a)?;
    resolvent_from_eigen(&eig, z)
}

/// Resolvent assembled from a precomputed eigendecomposition as
/// `Σ_k v_k v_kᵀ / (λ_k − z)`.
pub fn resolvent_from_eigen(eig: &EigenDecomp, z: Complex64) -> Result<ComplexMatrix> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidMatrix(format!("non-finite shift {z}")));
    }
    if z.im == 0.0 {
        if let Some(&l) = eig
            .values()
            .iter()
            .find(|&&l| (l - z.re).abs() <= SINGULAR_SHIFT_TOL)
        {
            return Err(Error::SingularShift(l));
        }
    }
    let n = eig.n();
    let v = eig.vectors();
    let weights: Vec<Complex64> = eig
        .values()
        .iter()
        .map(|&l| 1.0 / (Complex64::new(l, 0.0) - z))
        .collect();
    let scaled_re = Matrix::from_fn(n, n, |i, k| v[(i, k)] * weights[k].re);
    let re = scaled_re.matmul_t(v);
    let im = if z.im == 0.0 {
        Matrix::zeros(n, n)
    } else {
        let scaled_im = Matrix::from_fn(n, n, |i, k| v[(i, k)] * weights[k].im);
        scaled_im.matmul_t(v)
    };
    // The two products are symmetric up to rounding; mirror the upper triangle
    // so that Rᵀ = R holds exactly.
    let mut out = ComplexMatrix::from_parts(&re, &im);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = out[(i, j)];
            out[(j, i)] = x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Entrywise `(A − zI)·R − I` computed directly from the matrix.
    fn inverse_residual(a: &SymMatrix, z: Complex64, r: &ComplexMatrix) -> f64 {
        let n = a.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0, 0.0);
                for k in 0..n {
                    let aik = if i == k {
                        c(a[(i, k)], 0.0) - z
                    } else {
                        c(a[(i, k)], 0.0)
                    };
                    s += aik * r[(k, j)];
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    fn sample_matrix(n: usize) -> SymMatrix {
        SymMatrix::from_upper(n, |i, j| {
            (((i + 1) * (j + 3) * 7919) % 101) as f64 / 101.0 - 0.5
        })
        .unwrap()
    }

    #[test]
    fn scalar_zero_at_i() {
        let r = resolvent(&SymMatrix::zeros(1).unwrap(), c(0.0, 1.0)).unwrap();
        assert!((r[(0, 0)] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_real_shift() {
        let r = resolvent(&SymMatrix::diagonal(&[1.0, 2.0]).unwrap(), c(0.0, 0.0)).unwrap();
        assert!((r[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((r[(1, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(r[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn shift_on_eigenvalue_is_singular() {
        let a = SymMatrix::diagonal(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            resolvent(&a, c(2.0, 0.0)),
            Err(Error::SingularShift(_))
        ));
    }

    #[test]
    fn inverse_and_symmetry() {
        let a = sample_matrix(7);
        for z in [c(1.0, 1.0), c(-0.3, 0.05), c(4.0, 0.0)] {
            let r = resolvent(&a, z).unwrap();
            assert!(inverse_residual(&a, z, &r) <= 1e-9);
            assert!(r.max_abs_diff(&r.transpose()) <= 1e-10);
        }
    }

    #[test]
    fn ward_identity_on_four_by_four() {
        let a = sample_matrix(4);
        let z = c(1.0, 1.0);
        let r = resolvent(&a, z).unwrap();
        let lhs = r.matmul(&r.conj());
        let rhs = ComplexMatrix::from_fn(4, |i, j| c(r[(i, j)].im / z.im, 0.0));
        assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
    }

    #[test]
    fn conjugate_symmetry() {
        let a = sample_matrix(6);
        let z = c(0.4, -0.7);
        let r = resolvent(&a, z).unwrap();
        let rc = resolvent(&a, z.conj()).unwrap();
        assert!(r.conj().max_abs_diff(&rc) <= 1e-10);
    }
}
