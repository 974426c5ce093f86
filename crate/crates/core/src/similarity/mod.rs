//! Similarity matrices from pairwise eigen-alignments.
//!
//! For `A = Σ λ_i v_i v_iᵀ` and `B = Σ μ_j w_j w_jᵀ`, both spectral methods
//! share the Cauchy kernel `1/((λ_i − μ_j)² + η²)` weighted by the all-ones
//! projections `⟨v_i, 𝟙⟩⟨w_j, 𝟙⟩`:
//!
//! * GRAMPA: `X = Σ η/((λ_i−μ_j)²+η²) · v_i v_iᵀ J w_j w_jᵀ`, proportional to
//!   the minimizer of `‖AX − XB‖²_F + η²‖X‖²_F` under `𝟙ᵀX𝟙 = n`.
//! * Row-constrained QP: the minimizer of the same objective under `X𝟙 = 𝟙`,
//!   which reweights eigenvalue `λ_i` by `1/τ_i`, with
//!   `τ_i = Σ_j ⟨w_j,𝟙⟩²/((λ_i−μ_j)²+η²)`.
//!
//! Both are assembled as `V·K·Wᵀ` after the two eigendecompositions.

mod contour;
mod kkt;

pub use contour::{grampa_contour, rowqp_contour, ContourSpec, Orientation};
pub use kkt::{kkt_oracle_regqp, kkt_oracle_rowqp, KKT_MAX_N};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};
use crate::spectral::{eig_sym, EigenDecomp};

/// Which construction produced a similarity matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Grampa,
    RowQp,
    GrampaContour,
    RowQpContour,
    KktRegQp,
    KktRowQp,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Grampa => "grampa",
            Self::RowQp => "rowqp",
            Self::GrampaContour => "grampa_contour",
            Self::RowQpContour => "rowqp_contour",
            Self::KktRegQp => "kkt_regqp",
            Self::KktRowQp => "kkt_rowqp",
        }
    }

    /// Whether the construction enforces unit row sums.
    pub fn is_row_constrained(&self) -> bool {
        matches!(self, Self::RowQp | Self::RowQpContour | Self::KktRowQp)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "grampa" => Self::Grampa,
            "rowqp" => Self::RowQp,
            "grampa_contour" => Self::GrampaContour,
            "rowqp_contour" => Self::RowQpContour,
            "kkt_regqp" => Self::KktRegQp,
            "kkt_rowqp" => Self::KktRowQp,
            other => return Err(Error::ParamError(format!("unknown method `{other}`"))),
        })
    }
}

/// An `n × n` score matrix; rows index vertices of `A`, columns vertices of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    entries: Matrix,
    method: Method,
    eta: f64,
}

impl SimilarityMatrix {
    pub fn new(entries: Matrix, method: Method, eta: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionError {
                expected: entries.rows(),
                found: entries.cols(),
            });
        }
        if !entries.is_finite() {
            return Err(Error::InvalidMatrix("non-finite similarity entry".into()));
        }
        Ok(Self {
            entries,
            method,
            eta,
        })
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_entries(self) -> Matrix {
        self.entries
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `max_i |Σ_j X_ij − 1|`.
    pub fn row_sum_defect(&self) -> f64 {
        self.entries
            .row_sums()
            .iter()
            .fold(0.0, |acc, s| acc.max((s - 1.0).abs()))
    }
}

pub(crate) fn check_inputs(a: &SymMatrix, b: &SymMatrix, eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::ParamError(format!("eta = {eta} must be positive")));
    }
    if a.n() != b.n() {
        return Err(Error::DimensionError {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// GRAMPA similarity matrix.
pub fn grampa(a: &SymMatrix, b: &SymMatrix, eta: f64) -> Result<SimilarityMatrix> {
    check_inputs(a, b, eta)?;
    grampa_from_eigen(&eig_sym(a)?, &eig_sym(b)?, eta)
}

/// Row-sum-constrained QP solution `X^c` (every row sums to one).
pub fn rowqp(a: &SymMatrix, b: &SymMatrix, eta: f64) -> Result<SimilarityMatrix> {
    check_inputs(a, b, eta)?;
    rowqp_from_eigen(&eig_sym(a)?, &eig_sym(b)?, eta)
}

/// GRAMPA from precomputed eigendecompositions of `A` and `B`.
pub fn grampa_from_eigen(ea: &EigenDecomp, eb: &EigenDecomp, eta: f64) -> Result<SimilarityMatrix> {
    check_eigen(ea, eb, eta)?;
    let kernel = cauchy_kernel(ea, eb, eta);
    let da = ea.ones_projections();
    let eb1 = eb.ones_projections();
    let n = ea.n();
    let k = Matrix::from_fn(n, n, |i, j| eta * kernel[(i, j)] * da[i] * eb1[j]);
    let x = ea.vectors().matmul(&k).matmul_t(eb.vectors());
    SimilarityMatrix::new(x, Method::Grampa, eta)
}

/// Row-constrained QP solution from precomputed eigendecompositions.
pub fn rowqp_from_eigen(ea: &EigenDecomp, eb: &EigenDecomp, eta: f64) -> Result<SimilarityMatrix> {
    check_eigen(ea, eb, eta)?;
    let kernel = cauchy_kernel(ea, eb, eta);
    let da = ea.ones_projections();
    let eb1 = eb.ones_projections();
    let tau = tau_weights(&kernel, &eb1);
    let n = ea.n();
    let k = Matrix::from_fn(n, n, |i, j| kernel[(i, j)] * da[i] * eb1[j] / tau[i]);
    let x = ea.vectors().matmul(&k).matmul_t(eb.vectors());
    SimilarityMatrix::new(x, Method::RowQp, eta)
}

/// `τ_i = Σ_j ⟨w_j,𝟙⟩² / ((λ_i − μ_j)² + η²)`.
pub fn tau(ea: &EigenDecomp, eb: &EigenDecomp, eta: f64) -> Vec<f64> {
    tau_weights(&cauchy_kernel(ea, eb, eta), &eb.ones_projections())
}

fn tau_weights(kernel: &Matrix, eb1: &[f64]) -> Vec<f64> {
    (0..kernel.rows())
        .map(|i| kernel.row(i).iter().zip(eb1).map(|(k, e)| k * e * e).sum())
        .collect()
}

/// `1/((λ_i − μ_j)² + η²)`.
fn cauchy_kernel(ea: &EigenDecomp, eb: &EigenDecomp, eta: f64) -> Matrix {
    let n = ea.n();
    let eta2 = eta * eta;
    Matrix::from_fn(n, n, |i, j| {
        let gap = ea.values()[i] - eb.values()[j];
        1.0 / (gap * gap + eta2)
    })
}

fn check_eigen(ea: &EigenDecomp, eb: &EigenDecomp, eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::ParamError(format!("eta = {eta} must be positive")));
    }
    if ea.n() != eb.n() {
        return Err(Error::DimensionError {
            expected: ea.n(),
            found: eb.n(),
        });
    }
    Ok(())
}
