//! Exact integer and rational linear algebra.
//!
//! Everything downstream (lattices of cones, coefficient spaces, boundary
//! ranks) goes through this module. Matrices are dense; subspaces are always
//! compared through their reduced column echelon basis.

mod lattice;
mod qmat;
mod snf;

pub use lattice::{
    gcd_of, is_saturated_basis, primitive, quotient_lattice, to_qmat, unimodular_inverse,
    QuotientData,
};
pub use qmat::{
    echelon_coords, echelon_coords_unchecked, int, rank_kernel_image, QMat, RankKernelImage,
};
pub use snf::{smith_normal_form, IntMat, SnfResult};

/// Arbitrary-precision rational scalar, always in lowest terms.
pub type Rat = num_rational::BigRational;
