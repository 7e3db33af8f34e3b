//! Fourier analysis on M₂(Z/2^N) with exact cyclotomic values, and the 2-adic
//! Schwartz-function inner products and spherical local integrals.

mod cyclo;
mod matfn;
mod schwartz;
mod ugly;

pub use cyclo::CycInt;
pub use matfn::{
    conjugacy_orbits, conjugation_sum, conjugation_sum_naive, ft_m2, ft_m2_naive, gl2_generators, gl2_order,
    pack, unpack, FiniteMatFn,
};
pub use ugly::{eta_ab, phi0_times4, phi_prime, sigma, ugly_data, verify_ugly_lemma, UglyData};
pub use schwartz::{
    cartan_volume, ft_b0, ft_b0_norm_sq, local_integral_closed_forms, local_integral_correlations,
    local_integral_unramified, local_l_factor, macdonald_xi, phi_hat_ip_closed_form, plancherel_b0, schwartz_ip,
    verify_local_integrals, zeta2_at_2, SchwartzB0, SchwartzB2, MAX_CELLS, TRUNCATION,
};
