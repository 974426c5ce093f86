//! One matching run: similarity construction followed by rounding.

use specmatch_core::rounding::{argmax_round, brute_force_round, greedy_round, lap_round};
use specmatch_core::similarity::{
    grampa, grampa_contour, kkt_oracle_regqp, kkt_oracle_rowqp, rowqp, rowqp_contour, ContourSpec,
    Method,
};
use specmatch_core::{Error, Matching, Matrix, Result, SimilarityMatrix, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rounder {
    Lap,
    Greedy,
    Argmax,
    BruteForce,
}

impl Rounder {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Lap => "lap",
            Self::Greedy => "greedy",
            Self::Argmax => "argmax",
            Self::BruteForce => "brute_force",
        }
    }

    pub fn round(&self, x: &Matrix) -> Result<Matching> {
        match self {
            Self::Lap => lap_round(x),
            Self::Greedy => greedy_round(x),
            Self::Argmax => argmax_round(x),
            Self::BruteForce => brute_force_round(x),
        }
    }
}

impl std::fmt::Display for Rounder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Rounder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lap" => Self::Lap,
            "greedy" => Self::Greedy,
            "argmax" => Self::Argmax,
            "brute_force" => Self::BruteForce,
            other => return Err(Error::ParamError(format!("unknown rounder `{other}`"))),
        })
    }
}

/// Similarity matrix of `(a, b)` by the requested construction.
pub fn similarity(
    method: Method,
    a: &SymMatrix,
    b: &SymMatrix,
    eta: f64,
) -> Result<SimilarityMatrix> {
    match method {
        Method::Grampa => grampa(a, b, eta),
        Method::RowQp => rowqp(a, b, eta),
        Method::GrampaContour => grampa_contour(a, b, eta, &ContourSpec::for_eta(eta)),
        Method::RowQpContour => rowqp_contour(a, b, eta, &ContourSpec::for_eta(eta)),
        Method::KktRegQp => kkt_oracle_regqp(a, b, eta),
        Method::KktRowQp => kkt_oracle_rowqp(a, b, eta),
    }
}
