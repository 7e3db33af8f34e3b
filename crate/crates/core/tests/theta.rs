use proptest::prelude::*;
use quatvar::class_graph::{build_class_set, eigenfunctions, theta_table, AlgNum, ClassSet, EigenFns};
use quatvar::constants::Pairing;
use quatvar::quat_core::Form;
use quatvar::theta_q::{
    arith_variance_report, arith_variance_with, class_mu_table_naive, full_theta_coeffs, jacobi_coeffs,
    mu_measure, orbital_side, orbital_sums, seesaw_check, seesaw_scalar_derived, shimura_t9_check_with,
    theta_side, CoeffSeries, MuMeasure, SeriesMeta,
};
use std::sync::OnceLock;

struct Fixture {
    cs: ClassSet,
    eig: EigenFns,
    mu: MuMeasure,
}

fn fx() -> &'static Fixture {
    static S: OnceLock<Fixture> = OnceLock::new();
    S.get_or_init(|| {
        let cs = build_class_set().unwrap();
        let t = theta_table(&cs, 30);
        let eig = eigenfunctions(&cs, &t).unwrap();
        let mu = mu_measure(&cs, 9 * 120).unwrap();
        Fixture { cs, eig, mu }
    })
}

#[test]
fn mu_matches_box_enumeration() {
    let f = fx();
    for (e, c) in f.cs.classes.iter().enumerate() {
        assert_eq!(class_mu_table_naive(&c.ternary, 200), f.mu.per_class[e][..=200].to_vec());
    }
}

#[test]
fn mu_from_sublattice_thetas() {
    // Σχ_i = 3 on the common kernel {a ≡ b ≡ c mod 2} and −1 off it,
    // so mu = 4·θ_{kernel} − θ_{S⁰}
    let f = fx();
    for (e, c) in f.cs.classes.iter().enumerate() {
        let g = &c.ternary.gram;
        let basis = [[1i64, 1, 1], [0, 2, 0], [0, 0, 2]];
        let sub: Vec<Vec<i64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let mut s = 0;
                        for k in 0..3 {
                            for l in 0..3 {
                                s += basis[i][k] * g[k][l] * basis[j][l];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let full = Form::new(g).unwrap().theta_counts(500);
        let kern = Form::new(&sub).unwrap().theta_counts(500);
        for d in 0..=500 {
            assert_eq!(f.mu.per_class[e][d], 4 * kern[d] as i64 - full[d] as i64, "class {e}, D = {d}");
        }
    }
}

#[test]
fn mu_support_and_constant_term() {
    let f = fx();
    for t in &f.mu.per_class {
        assert_eq!(t[0], 3);
        for (d, &v) in t.iter().enumerate() {
            if v != 0 {
                assert!(d % 4 == 0 || d % 4 == 3, "D = {d}");
            }
        }
    }
    for k in 0..2 {
        let m = f.mu.combine(&f.eig.psi(k).psi);
        assert!(m[0].is_zero());
    }
}

#[test]
fn float_and_exact_combinations_agree() {
    let f = fx();
    let psi = &f.eig.psi(0).psi;
    let exact = f.mu.combine(psi);
    let float = f.mu.combine_f64(&psi.iter().map(|x| x.to_f64()).collect::<Vec<_>>());
    for (a, b) in exact.iter().zip(&float) {
        assert!((a.to_f64() - b).abs() < 1e-9);
    }
}

#[test]
fn seesaw_scalars() {
    let f = fx();
    for n in [2u32, 3] {
        let r = seesaw_check(&f.cs, &f.eig, n, &[0, 1], 99).unwrap();
        assert!(r.passed(), "N = {n}: {:?}", r.first_failure);
        assert_eq!(r.data["scalar"], serde_json::json!(format!("{}", seesaw_scalar_derived(n))));
    }
    assert!(seesaw_check(&f.cs, &f.eig, 4, &[0], 99).is_err());
}

#[test]
fn seesaw_coefficients_by_hand() {
    // recompute the identity at N = 2 for odd n ≤ 45 with an explicit theta sum
    let f = fx();
    let orb = orbital_sums(&f.cs, 2, 4, 45).unwrap();
    for k in 0..2 {
        let psi = &f.eig.psi(k).psi;
        let lhs = orbital_side(&orb, psi, &f.cs.weights());
        let mu = f.mu.combine(psi);
        let via_series = theta_side(&f.mu, psi, 2, 45, false);
        for n in (1..=45usize).step_by(2) {
            let mut rhs = AlgNum::zero();
            let mut m = -7i64;
            while m <= 7 {
                let r = n as i64 - m * m;
                if r >= 0 {
                    rhs = &rhs + &mu[r as usize];
                }
                m += 1;
            }
            assert_eq!(lhs[n], &rhs * &AlgNum::from_int(seesaw_scalar_derived(2)), "k = {k}, n = {n}");
            assert_eq!(via_series[n], rhs);
        }
    }
}

#[test]
fn t9_recurrence() {
    let f = fx();
    let r = shimura_t9_check_with(&f.mu, &f.eig, &[0, 1], 120).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure);
    // a(9D) + (−D/3)·a(D) + 3a(D/9) = a_3·a(D), checked without the fit
    for k in 0..2 {
        let e = f.eig.psi(k);
        let a = f.mu.combine(&e.psi);
        let a3 = &e.a[&3];
        for d in 1..=120usize {
            let leg = match (-(d as i64)).rem_euclid(3) {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            let mut lhs = &a[9 * d] + &(&a[d] * &AlgNum::from_int(leg));
            if d % 9 == 0 {
                lhs = &lhs + &(&a[d / 9] * &AlgNum::from_int(3));
            }
            assert_eq!(lhs, a3 * &a[d], "k = {k}, D = {d}");
        }
    }
    assert!(shimura_t9_check_with(&f.mu, &f.eig, &[0], 10).is_err());
    assert!(shimura_t9_check_with(&f.mu, &f.eig, &[0], 500).is_err());
}

#[test]
fn variance_small_x() {
    let f = fx();
    let av = arith_variance_with(&f.mu, &f.eig, 1000, &[100, 1000]).unwrap();
    let cp = av.checkpoints.last().unwrap();
    assert!(cp.s[0][0] > 0.0 && cp.s[1][1] > 0.0);
    assert_eq!(cp.s[0][1], cp.s[1][0]);
    assert!(cp.s[0][1].abs() <= cp.s[0][0].max(cp.s[1][1]));
    assert_eq!(cp.pairing, Pairing::Direct);
    let r = arith_variance_report(&av, 1000, None, 0.5, 1.0);
    assert!(r.passed(), "{:?}", r.first_failure);
    assert!(arith_variance_with(&f.mu, &f.eig, 5000, &[5000]).is_err());
}

fn meta() -> SeriesMeta {
    SeriesMeta { object: "test".into(), index: None, dilation: 1 }
}

fn series() -> impl Strategy<Value = CoeffSeries<i64>> {
    (prop::collection::vec(-5i64..6, 1..30), 5u64..40).prop_map(|(v, m)| CoeffSeries::from_dense(&v, m, meta()))
}

proptest! {
    #[test]
    fn cauchy_product_ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).coeffs, b.mul(&a).coeffs);
        prop_assert_eq!(a.mul(&b).mul(&c).coeffs, a.mul(&b.mul(&c)).coeffs);
        prop_assert_eq!(a.mul(&b.add(&c)).coeffs, a.mul(&b).add(&a.mul(&c)).coeffs);
    }

    #[test]
    fn dilation_composes(a in series(), d1 in 1u64..5, d2 in 1u64..5) {
        let x = a.dilate(d1, 400).dilate(d2, 400);
        let y = a.dilate(d1 * d2, 400);
        prop_assert_eq!(&x.coeffs, &y.coeffs);
        prop_assert_eq!(x.max_exp, y.max_exp);
        prop_assert_eq!(x.meta.dilation, d1 * d2);
    }
}

#[test]
fn theta_squares() {
    // r₂(n) for sums of two squares
    let t = full_theta_coeffs(50);
    let t2 = t.mul(&t);
    for (n, r) in [(0u64, 1i64), (1, 4), (2, 4), (3, 0), (5, 8), (25, 12), (50, 12)] {
        assert_eq!(t2.get(n), r);
    }
    let j = jacobi_coeffs(50);
    assert_eq!(j.get(1), 2);
    assert_eq!(j.get(9), 2);
    assert_eq!(j.get(4), 0);
    assert_eq!(j.get(0), 0);
}
