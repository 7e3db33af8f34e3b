//! Quaternion arithmetic in B = (−1, −23), integral lattices, short-vector
//! enumeration and the 2-adic splitting.

pub mod enumerate;
pub mod lattice;
pub mod quaternion;
pub mod split;

pub use enumerate::{lll_reduce, short_vectors, vectors_of_value, Form};
pub use lattice::{gram_det, maximal_order, maximal_order_basis, QLattice};
pub use quaternion::{rat, rint, Quaternion};
pub use split::{hensel_sqrt, split_order, two_adic_split, Mat2, TwoAdicSplitting};

/// Multiply two quaternions.
pub fn multiply(a: &Quaternion, b: &Quaternion) -> Quaternion {
    a * b
}
