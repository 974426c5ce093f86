//! Semicircle law: density and Stieltjes transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Semicircle density `ρ(x) = √(4 − x²)/(2π)` on `[−2, 2]`, zero elsewhere.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() <= 2.0 {
        (4.0 - x * x).max(0.0).sqrt() / (2.0 * PI)
    } else {
        0.0
    }
}

/// Stieltjes transform of the semicircle law,
/// `m0(z) = (−z + √(z²−4))/2` with `√(z²−4) = √(z−2)·√(z+2)` (principal
/// roots), so the branch cut is `[−2, 2]` and `√(z²−4) ~ z` at infinity.
pub fn stieltjes_m0(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re.abs() <= 2.0 {
        return Err(Error::BranchCutViolation { re: z.re, im: z.im });
    }
    let s = (z - 2.0).sqrt() * (z + 2.0).sqrt();
    let plus = -z + s;
    let minus = -z - s;
    // The two roots multiply to 1; evaluate the large one and invert when the
    // direct form cancels.
    if plus.norm() >= minus.norm() {
        Ok(plus / 2.0)
    } else {
        Ok(2.0 / minus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    /// Limit from the upper half-plane.
    Plus,
    /// Limit from the lower half-plane.
    Minus,
}

/// Boundary values `m0±(x)` of the Stieltjes transform on `[−2, 2]`.
pub fn m0_boundary(x: f64, side: BoundarySide) -> Result<Complex64> {
    if !(x.abs() <= 2.0) {
        return Err(Error::DomainError(x));
    }
    let m = Complex64::new(-x / 2.0, (4.0 - x * x).max(0.0).sqrt() / 2.0);
    Ok(match side {
        BoundarySide::Plus => m,
        BoundarySide::Minus => m.conj(),
    })
}
