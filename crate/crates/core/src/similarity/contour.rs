//! Resolvent contour-integral representations of the similarity matrices.
//!
//! With `Γ` the rectangle with vertices `±re_max ± i·im_half` traversed
//! counterclockwise and `‖A‖ ≤ 2.5`,
//!
//! ```text
//! X   = (1/2π) Re ∮_Γ        R_A(z) J R_B(z + iη) dz
//! X^c = (1/2π) Re ∮_Γ F(z) · R_A(z) J R_B(z + iη) dz,
//! F(z) = 2i / (𝟙ᵀR_B(z+iη)𝟙 − 𝟙ᵀR_B(z−iη)𝟙).
//! ```
//!
//! Because `J = 𝟙𝟙ᵀ` and resolvents of symmetric matrices are symmetric, the
//! integrand is the rank-one matrix `(R_A(z)𝟙)(R_B(z+iη)𝟙)ᵀ`; each node costs
//! a few shifted linear solves and no eigendecomposition, which keeps this
//! route independent of the spectral formulas it cross-checks.
//!
//! Each side is integrated with the composite midpoint rule. On a polygon the
//! midpoint rule is only second order because the endpoint terms of the
//! Euler–Maclaurin expansion do not cancel at the corners; by default those
//! terms are added back from derivatives at the four vertices, which makes
//! the rule fourth order.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{solve_shifted, Matrix, SymMatrix};
use crate::similarity::{check_inputs, Method, SimilarityMatrix};
use crate::spectral::spectral_norm;

/// Largest `‖A‖` for which the representation is valid.
pub const NORM_BOUND: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    CounterClockwise,
    Clockwise,
}

/// Rectangular contour and its midpoint-rule discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub re_max: f64,
    pub im_half: f64,
    pub points_per_side: usize,
    pub orientation: Orientation,
    /// Add the endpoint terms that make the per-side midpoint rule
    /// fourth-order; without them the corners leave an `O(h²)` error.
    pub corner_correction: bool,
}

impl ContourSpec {
    /// Default contour for bandwidth `eta`: vertices `±3 ± iη/2`, 256 nodes
    /// per side.
    pub fn for_eta(eta: f64) -> Self {
        Self {
            re_max: 3.0,
            im_half: eta / 2.0,
            points_per_side: 256,
            orientation: Orientation::CounterClockwise,
            corner_correction: true,
        }
    }

    pub fn with_points(mut self, points_per_side: usize) -> Self {
        self.points_per_side = points_per_side;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_corner_correction(mut self, on: bool) -> Self {
        self.corner_correction = on;
        self
    }

    fn validate(&self, eta: f64) -> Result<()> {
        if self.points_per_side < 16 {
            return Err(Error::ParamError(format!(
                "points_per_side = {} must be at least 16",
                self.points_per_side
            )));
        }
        if !(self.re_max > NORM_BOUND) {
            return Err(Error::ParamError(format!(
                "re_max = {} must exceed {NORM_BOUND}",
                self.re_max
            )));
        }
        if !(self.im_half > 0.0 && self.im_half < eta) {
            return Err(Error::ParamError(format!(
                "im_half = {} must lie in (0, eta)",
                self.im_half
            )));
        }
        Ok(())
    }

    /// Quadrature nodes `z_k` with complex weights `dz_k`.
    /// Vertices in traversal order.
    pub fn corners(&self) -> [Complex64; 4] {
        let (r, h) = (self.re_max, self.im_half);
        let mut corners = [
            Complex64::new(r, -h),
            Complex64::new(r, h),
            Complex64::new(-r, h),
            Complex64::new(-r, -h),
        ];
        if self.orientation == Orientation::Clockwise {
            corners.reverse();
        }
        corners
    }

    pub fn nodes(&self) -> Vec<(Complex64, Complex64)> {
        let corners = self.corners();
        let m = self.points_per_side;
        let mut out = Vec::with_capacity(4 * m);
        for side in 0..4 {
            let start = corners[side];
            let end = corners[(side + 1) % 4];
            let step = (end - start) / m as f64;
            for k in 0..m {
                out.push((start + step * (k as f64 + 0.5), step));
            }
        }
        out
    }
}

fn check_norm(a: &SymMatrix) -> Result<()> {
    let norm = spectral_norm(a)?;
    if norm > NORM_BOUND {
        return Err(Error::NormBoundViolated {
            norm,
            bound: NORM_BOUND,
        });
    }
    Ok(())
}

fn ones(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); n]
}

/// Integrand factors at `z`: `u = R_A(z)𝟙`, `v = R_B(z+iη)𝟙` and the scalar
/// weight `F(z)` (1 when unweighted), with their `z`-derivatives when
/// `derivatives` is set.
struct Node {
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    w: Complex64,
    du: Vec<Complex64>,
    dv: Vec<Complex64>,
    dw: Complex64,
}

fn node(
    a: &SymMatrix,
    b: &SymMatrix,
    eta: f64,
    z: Complex64,
    weighted: bool,
    derivatives: bool,
) -> Result<Node> {
    let n = a.n();
    let shift = Complex64::new(0.0, eta);
    let one = ones(n);
    let u = solve_shifted(a, z, &one)?;
    let v = solve_shifted(b, z + shift, &one)?;
    // d/dz R(z)𝟙 = R(z)²𝟙.
    let (du, dv) = if derivatives {
        (solve_shifted(a, z, &u)?, solve_shifted(b, z + shift, &v)?)
    } else {
        (Vec::new(), Vec::new())
    };
    let (mut w, mut dw) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    if weighted {
        let lower = solve_shifted(b, z - shift, &one)?;
        let denom: Complex64 = v.iter().sum::<Complex64>() - lower.iter().sum::<Complex64>();
        if denom.norm() < 1e-12 {
            return Err(Error::NumericalFailure(format!(
                "vanishing F(z) denominator at z = {z}"
            )));
        }
        let two_i = Complex64::new(0.0, 2.0);
        w = two_i / denom;
        if derivatives {
            // 𝟙ᵀR²𝟙 = (R𝟙)ᵀ(R𝟙) for symmetric R.
            let d_upper: Complex64 = v.iter().map(|x| x * x).sum();
            let d_lower: Complex64 = lower.iter().map(|x| x * x).sum();
            dw = -two_i * (d_upper - d_lower) / (denom * denom);
        }
    }
    Ok(Node {
        u,
        v,
        w,
        du,
        dv,
        dw,
    })
}

/// Adds `Re(c · u vᵀ)` into the row-major accumulator.
fn add_rank_one(acc: &mut [f64], c: Complex64, u: &[Complex64], v: &[Complex64]) {
    let n = u.len();
    for i in 0..n {
        let cu = c * u[i];
        let row = &mut acc[i * n..(i + 1) * n];
        for (x, vj) in row.iter_mut().zip(v) {
            *x += cu.re * vj.re - cu.im * vj.im;
        }
    }
}

fn integrate(
    a: &SymMatrix,
    b: &SymMatrix,
    eta: f64,
    spec: &ContourSpec,
    weighted: bool,
) -> Result<Matrix> {
    let n = a.n();
    let mut acc_re = vec![0.0; n * n];
    for (z, dz) in spec.nodes() {
        let p = node(a, b, eta, z, weighted, false)?;
        add_rank_one(&mut acc_re, p.w * dz, &p.u, &p.v);
    }
    if spec.corner_correction {
        // Euler–Maclaurin: each side's midpoint sum misses
        // (δ²/24)·(f'(end) − f'(start)), with δ the complex step.
        let corners = spec.corners();
        let m = spec.points_per_side as f64;
        for (k, &c) in corners.iter().enumerate() {
            let prev = corners[(k + 3) % 4];
            let next = corners[(k + 1) % 4];
            let d_in = (c - prev) / m;
            let d_out = (next - c) / m;
            let coef = (d_in * d_in - d_out * d_out) / 24.0;
            let p = node(a, b, eta, c, weighted, true)?;
            // f' = w'·u vᵀ + w·(u' vᵀ + u v'ᵀ)
            add_rank_one(&mut acc_re, coef * p.dw, &p.u, &p.v);
            add_rank_one(&mut acc_re, coef * p.w, &p.du, &p.v);
            add_rank_one(&mut acc_re, coef * p.w, &p.u, &p.dv);
        }
    }
    let scale = 1.0 / (2.0 * PI);
    Matrix::from_vec(n, n, acc_re.into_iter().map(|x| x * scale).collect())
}

/// GRAMPA similarity matrix by contour quadrature.
pub fn grampa_contour(
    a: &SymMatrix,
    b: &SymMatrix,
    eta: f64,
    spec: &ContourSpec,
) -> Result<SimilarityMatrix> {
    check_inputs(a, b, eta)?;
    spec.validate(eta)?;
    check_norm(a)?;
    let x = integrate(a, b, eta, spec, false)?;
    SimilarityMatrix::new(x, Method::GrampaContour, eta)
}

/// Row-constrained QP solution by contour quadrature.
pub fn rowqp_contour(
    a: &SymMatrix,
    b: &SymMatrix,
    eta: f64,
    spec: &ContourSpec,
) -> Result<SimilarityMatrix> {
    check_inputs(a, b, eta)?;
    spec.validate(eta)?;
    check_norm(a)?;
    let x = integrate(a, b, eta, spec, true)?;
    SimilarityMatrix::new(x, Method::RowQpContour, eta)
}
