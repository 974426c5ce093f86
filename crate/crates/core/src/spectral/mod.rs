//! Spectral bedrock: symmetric eigendecomposition, resolvents and the
//! semicircle Stieltjes transform.

mod eigen;
mod resolvent;
mod stieltjes;

pub use eigen::{eig_sym, spectral_norm, EigenDecomp};
pub use resolvent::{resolvent, resolvent_from_eigen};
pub use stieltjes::{m0_boundary, semicircle_density, stieltjes_m0, BoundarySide};
