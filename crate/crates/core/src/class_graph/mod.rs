//! Ideal classes of the maximal order, Brandt matrices and their Hecke
//! eigenfunctions with values in Q(√5).

pub mod algnum;
pub mod brandt;
pub mod classes;

pub use algnum::AlgNum;
pub use brandt::{brandt, eigenfunctions, sigma1, theta_table, BrandtMatrix, EigenFn, EigenFns, ThetaTable};
pub use classes::{build_class_set, CharFrame, ClassRecord, ClassSet, Ternary};
pub mod verify;

pub use verify::{verify_brandt, verify_class_set, COMMUTING_SET};
