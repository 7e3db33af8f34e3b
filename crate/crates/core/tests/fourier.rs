use proptest::prelude::*;
use quatvar::finite_fourier::{
    cartan_volume, conjugacy_orbits, conjugation_sum, conjugation_sum_naive, ft_m2, ft_m2_naive, gl2_order,
    local_integral_closed_forms, local_integral_correlations, local_integral_unramified, macdonald_xi,
    phi_hat_ip_closed_form, plancherel_b0, schwartz_ip, unpack, verify_local_integrals, verify_ugly_lemma, CycInt,
    FiniteMatFn, SchwartzB2,
};
use quatvar::quat_core::rat;
use quatvar::quat_core::split::m2_det;

fn int_fn(n: u32) -> impl Strategy<Value = FiniteMatFn> {
    prop::collection::vec(-3i64..4, 1usize << (4 * n)).prop_map(move |v| FiniteMatFn::from_int_fn(n, |x| v[quatvar::finite_fourier::pack(x, n)]))
}

fn sq_norm(f: &FiniteMatFn) -> CycInt {
    let mut t = CycInt::zero(f.n);
    for v in &f.values {
        t = &t + &(v * &v.conj());
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_transform_matches_definition(f in int_fn(2)) {
        prop_assert_eq!(ft_m2(&f), ft_m2_naive(&f));
    }

    #[test]
    fn inversion_and_parseval(f in int_fn(2)) {
        let ff = ft_m2(&ft_m2(&f));
        prop_assert_eq!(ff, f.reflect().scale(256));
        let lhs = sq_norm(&ft_m2(&f));
        prop_assert_eq!(lhs, sq_norm(&f).scale(256));
    }

    #[test]
    fn linear(f in int_fn(1), g in int_fn(1), s in -5i64..5) {
        prop_assert_eq!(ft_m2(&f.scale(s).add(&g)), ft_m2(&f).scale(s).add(&ft_m2(&g)));
    }
}

#[test]
fn transform_of_delta_is_one() {
    let d = FiniteMatFn::from_int_fn(3, |x| (x == &[0, 0, 0, 0]) as i64);
    assert!(ft_m2(&d).values.iter().all(|v| v.as_int() == Some(1)));
}

#[test]
fn orbit_sizes() {
    for n in 1..=2 {
        let (_, orbits) = conjugacy_orbits(n);
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        assert_eq!(total, 1 << (4 * n));
        for o in &orbits {
            assert_eq!(gl2_order(n) % o.len() as u64, 0);
            let d = m2_det(&unpack(o[0] as usize, n), n);
            assert!(o.iter().all(|&i| m2_det(&unpack(i as usize, n), n) == d));
        }
    }
    // GL₂(F₂) ≅ S₃
    assert_eq!(gl2_order(1), 6);
    assert_eq!(gl2_order(2), 96);
}

#[test]
fn conjugation_sums_agree() {
    let f: Vec<i64> = (0..256).map(|i| ((i * 37 + 11) % 7) as i64 - 3).collect();
    assert_eq!(conjugation_sum(&f, 2), conjugation_sum_naive(&f, 2));
}

#[test]
fn ugly_lemma() {
    for n in 2..=3 {
        let r = verify_ugly_lemma(n).unwrap();
        assert!(r.passed(), "N = {n}: {:?}", r.first_failure);
    }
}

#[test]
fn trace_zero_plancherel() {
    // ⟨β, β′⟩ has discriminant 2 on Z₂³, so the self-dual measure is
    // 2^{1/2}dp dq dr and the transform doubles the norm
    let (a, b) = plancherel_b0();
    assert_eq!(a, rat(1, 1));
    assert_eq!(b, rat(2, 1));
}

#[test]
fn maximal_order_ip() {
    // ⟨Ad(a(2^n))1, 1⟩ = vol(M₂(Z₂) ∩ a(2^n)M₂(Z₂)a(2^n)⁻¹) = 2^{−n}
    let f = SchwartzB2::maximal_order(1, 1);
    for n in 0..6 {
        assert_eq!(schwartz_ip(n, &f, &f).unwrap(), rat(1, 1 << n));
    }
}

#[test]
fn phi_hat_ip() {
    let f = SchwartzB2::phi_hat();
    let g = f.refine();
    for n in 0..7 {
        assert_eq!(schwartz_ip(n, &f, &f).unwrap(), phi_hat_ip_closed_form(n), "n = {n}");
        assert_eq!(schwartz_ip(n, &g, &g).unwrap(), phi_hat_ip_closed_form(n), "refined n = {n}");
    }
    assert!(schwartz_ip(0, &f, &SchwartzB2::maximal_order(1, 1)).is_err());
}

#[test]
fn cartan_volumes_count_neighbors() {
    // K a(2^n) K / K ↔ vertices at distance n from the root of the 3-regular tree
    for n in 0..10u32 {
        let count = quatvar::class_graph::classes::lines(n).len() as f64;
        assert_eq!(cartan_volume(n), if n == 0 { 1.0 } else { count });
    }
}

#[test]
fn spherical_function_is_an_eigenfunction() {
    let s5 = 5f64.sqrt();
    for a2 in [(s5 - 1.0) / 2.0, (-s5 - 1.0) / 2.0, 0.3, -2.5] {
        assert!((macdonald_xi(a2, 0) - 1.0).abs() < 1e-15);
        assert!((3.0 * macdonald_xi(a2, 1) - a2).abs() < 1e-14);
        for n in 1..30 {
            let lhs = a2 * macdonald_xi(a2, n);
            let rhs = macdonald_xi(a2, n - 1) + 2.0 * macdonald_xi(a2, n + 1);
            assert!((lhs - rhs).abs() < 1e-12, "a2 = {a2}, n = {n}");
        }
    }
}

#[test]
fn local_integrals() {
    let r = verify_local_integrals(1e-9).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure);
    // independent geometric sum: Σ_n vol·2^{−n}·Ξ(n)
    let a2 = (5f64.sqrt() - 1.0) / 2.0;
    let direct: f64 = (0..400).map(|n| cartan_volume(n) * 0.5f64.powi(n as i32) * macdonald_xi(a2, n)).sum();
    let (i0, i) = local_integral_closed_forms(a2);
    assert!((direct - i0).abs() < 1e-12);
    assert!((local_integral_unramified(a2).unwrap() - i0).abs() < 1e-10);
    assert!((local_integral_correlations(a2).unwrap() - i).abs() < 1e-10);
}
