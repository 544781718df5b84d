//! Floating-point kernel: quaternions, complex matrices, 4D grids, contour
//! integrals, finite differences and deterministic reductions.

mod calculus;
mod grid;
mod matrix;
mod quaternion;
pub mod reduce;

pub use calculus::{contour_integrate, finite_diff, gauss_legendre, integrate_gl, richardson_diff, Contour};
pub use grid::Grid4D;
pub use matrix::{
    anti_hermitian_defect, c, commutator, frobenius, hermitian_inv_sqrt, kernel_frame, matrix_serde, real_matrix, scale,
    unitarity_defect, ComplexMatrix, DEFAULT_KERNEL_TOL,
};
pub use quaternion::Quaternion;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("singular value {singular_value:e} is within a factor 10 of the kernel threshold {threshold:e}")]
    ToleranceAmbiguous { singular_value: f64, threshold: f64 },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
