//! q-expansions: the Jacobi theta series, signed ternary representation
//! numbers μ_D, the orbital/theta coefficient identity, the Shimura T(9)
//! recurrence and arithmetic variance sums.

mod mu;
mod seesaw;
mod series;
mod t9;
mod variance;

pub use mu::{class_mu_table, class_mu_table_naive, mu_measure, MuMeasure, MU_DMAX_LIMIT};
pub use seesaw::{
    orbital_side, orbital_sums, seesaw_check, seesaw_scalar_analytic, seesaw_scalar_derived, theta_side,
    SeesawSides,
};
pub use series::{full_theta_coeffs, int_to_alg, int_to_rational, jacobi_coeffs, Coeff, CoeffSeries, SeriesMeta};
pub use t9::{fit_t9, shimura_t9_check, shimura_t9_check_with, t9_residual, T9Fit};
pub use variance::{arith_variance, arith_variance_report, arith_variance_with, default_checkpoints, resolve_pairing, ArithVariance, VarianceCheckpoint};
