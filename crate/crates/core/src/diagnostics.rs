//! Measured counterparts of the recovery guarantees: diagonal dominance of
//! the similarity matrix relabeled by the truth, the predicted size of its
//! true-pair entries, and resolvent deviations from the semicircle law.
//!
//! Nothing here passes or fails; reports carry raw margins and errors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::models::Permutation;
use crate::similarity::SimilarityMatrix;
use crate::spectral::{resolvent, stieltjes_m0};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceReport {
    /// `min_k X[k][π(k)]`.
    pub min_true: f64,
    /// `max_{k, ℓ≠π(k)} X[k][ℓ]`; `−∞` when there are no off-truth entries.
    pub max_off: f64,
    pub margin: f64,
    pub separated: bool,
    /// `(1−σ²)/η`, or `4(1−σ²)/(πη)` for the row-constrained solution.
    pub pred_diag: f64,
    /// Mean true-pair score, multiplied by `n` when constrained.
    pub diag_mean: f64,
    pub diag_rel_err: f64,
}

/// Diagonal-dominance report for `x` relabeled by `truth`.
///
/// `constrained` selects the row-constrained normalization, whose true-pair
/// entries are compared after multiplying by `n`.
pub fn dominance_report(
    x: &SimilarityMatrix,
    truth: &Permutation,
    sigma: f64,
    constrained: bool,
) -> Result<DominanceReport> {
    let n = x.n();
    if truth.len() != n {
        return Err(Error::DimensionError {
            expected: n,
            found: truth.len(),
        });
    }
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::ParamError(format!(
            "sigma = {sigma} must lie in [0, 1]"
        )));
    }
    let m = x.entries();
    let mut min_true = f64::INFINITY;
    let mut max_off = f64::NEG_INFINITY;
    let mut diag_sum = 0.0;
    for k in 0..n {
        let t = truth.apply(k);
        let row = m.row(k);
        min_true = min_true.min(row[t]);
        diag_sum += row[t];
        for (l, &val) in row.iter().enumerate() {
            if l != t {
                max_off = max_off.max(val);
            }
        }
    }
    let margin = min_true - max_off;
    let eta = x.eta();
    let signal = 1.0 - sigma * sigma;
    let (pred_diag, diag_mean) = if constrained {
        (4.0 * signal / (PI * eta), diag_sum)
    } else {
        (signal / eta, diag_sum / n as f64)
    };
    let diag_rel_err = if pred_diag > 0.0 {
        (diag_mean - pred_diag).abs() / pred_diag
    } else {
        f64::INFINITY
    };
    Ok(DominanceReport {
        min_true,
        max_off,
        margin,
        separated: margin > 0.0,
        pred_diag,
        diag_mean,
        diag_rel_err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLawReport {
    pub z: Complex64,
    /// `max_{j≠k} |R_jk|`.
    pub entrywise_off_max: f64,
    /// `max_j |R_jj − m0(z)|`.
    pub entrywise_diag_max: f64,
    /// `max_j |e_jᵀ R 𝟙|`.
    pub rowsum_max: f64,
    /// `|𝟙ᵀR𝟙 − n·m0(z)| / n`.
    pub totalsum_err: f64,
}

fn require_off_axis(z: Complex64) -> Result<()> {
    if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::ParamError(format!(
            "spectral argument {z} must have nonzero imaginary part"
        )));
    }
    Ok(())
}

/// Entrywise, row-sum and total-sum deviations of `R_A(z)` from the
/// semicircle prediction.
pub fn locallaw_report(a: &SymMatrix, z: Complex64) -> Result<LocalLawReport> {
    require_off_axis(z)?;
    let m0 = stieltjes_m0(z)?;
    let r = resolvent(a, z)?;
    let n = a.n();
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    let mut rowsum: f64 = 0.0;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let row = r.row(j);
        let mut s = Complex64::new(0.0, 0.0);
        for (k, x) in row.iter().enumerate() {
            s += x;
            if k == j {
                diag = diag.max((x - m0).norm());
            } else {
                off = off.max(x.norm());
            }
        }
        rowsum = rowsum.max(s.norm());
        total += s;
    }
    Ok(LocalLawReport {
        z,
        entrywise_off_max: off,
        entrywise_diag_max: diag,
        rowsum_max: rowsum,
        totalsum_err: (total - m0 * n as f64).norm() / n as f64,
    })
}

/// `|n⁻¹ Tr R_A(z) − m0(z)|`.
pub fn trace_m0_check(a: &SymMatrix, z: Complex64) -> Result<f64> {
    require_off_axis(z)?;
    let r = resolvent(a, z)?;
    let m0 = stieltjes_m0(z)?;
    Ok((r.trace() / a.n() as f64 - m0).norm())
}
