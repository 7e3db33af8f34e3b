use quatvar::constants::{
    a2_branches, arith_variance_target, constants_table, kappa0, kappa1, lambda2, p_poly, product_constant,
    rallis_constant_check, v_infinity, zeta_s_at_2, Pairing, L_VALUES,
};
use std::f64::consts::PI;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn kappa_values() {
    // ζ(2)(1 − 2⁻²)(1 − 23⁻²), ζ₂(1) = 2, ζ₂₃(1) = 23/22
    let zs = PI * PI / 6.0 * 0.75 * (1.0 - 1.0 / 529.0);
    let k1 = 1.0 / (16.0 * PI * PI * zs * 2.0 * (23.0 / 22.0));
    assert!(close(zeta_s_at_2(), zs, 1e-14));
    assert!(close(kappa1().value, k1, 1e-13));
    assert!(close(kappa1().value, 23.0 / (96.0 * PI.powi(4)), 1e-14));
    let k0 = kappa0().value;
    assert!(close(k0 * k0, 24.0 * PI.powi(4) / 23.0, 1e-14));
    assert!(close(1.0 / (4.0 * k0 * k0), k1, 1e-13));
}

#[test]
fn p_at_branches() {
    // a₂ = (−1 ± √5)/2
    let s5 = 5f64.sqrt();
    let a = a2_branches();
    assert!((a[0].to_f64() - (s5 - 1.0) / 2.0).abs() < 1e-15);
    assert!((a[1].to_f64() + (s5 + 1.0) / 2.0).abs() < 1e-15);
    // P(a₂/√2) = π²(15 − 4a₂)/69
    for x in a {
        let a2 = x.to_f64();
        assert!(close(p_poly(lambda2(a2)), PI * PI * (15.0 - 4.0 * a2) / 69.0, 1e-14));
        assert!(close(product_constant(lambda2(a2)), p_poly(lambda2(a2)), 1e-12));
    }
}

#[test]
fn rallis_chain() {
    let r = rallis_constant_check().unwrap();
    assert!(r.passed(), "{:?}", r.first_failure);
    assert_eq!(r.cases_total, 48);
    assert!(close(r.data["literal_discrepancy_factor"].as_f64().unwrap(), 8.0 / 3.0, 1e-14));
    for b in r.data["branches"].as_array().unwrap() {
        assert!(close(b["literal_over_P"].as_f64().unwrap(), 0.375, 1e-9));
    }
}

#[test]
fn v_infinity_needs_pairing() {
    assert!(v_infinity(0, 0, None).is_err());
    assert_eq!(v_infinity(0, 1, None).unwrap(), 0.0);
    assert!(v_infinity(2, 0, Some(Pairing::Direct)).is_err());
    let d = v_infinity(0, 0, Some(Pairing::Direct)).unwrap();
    let s = v_infinity(0, 0, Some(Pairing::Swapped)).unwrap();
    assert!(close(d / s, L_VALUES[0].0 / L_VALUES[1].0, 1e-14));
    assert_eq!("swapped".parse::<Pairing>().unwrap(), Pairing::Swapped);
    assert!("other".parse::<Pairing>().is_err());
}

#[test]
fn variance_targets() {
    // 2V/(κ₀²/(16π))
    let k0sq = 24.0 * PI.powi(4) / 23.0;
    for k in 0..2 {
        let v = v_infinity(k, k, Some(Pairing::Direct)).unwrap();
        let t = arith_variance_target(k, k, Some(Pairing::Direct)).unwrap();
        assert!(close(t, 32.0 * PI * v / k0sq, 1e-13));
    }
    let t0 = arith_variance_target(0, 0, Some(Pairing::Direct)).unwrap();
    let t1 = arith_variance_target(1, 1, Some(Pairing::Direct)).unwrap();
    assert!(close(t0, 0.9783, 1e-3));
    assert!(close(t1, 1.3670, 1e-3));
}

#[test]
fn table_serializes() {
    let t = serde_json::to_value(constants_table()).unwrap();
    assert_eq!(t["theta_norm_sq"], 0.5);
    assert_eq!(t["i_inf"], 0.25);
    assert!(close(t["i_23"].as_f64().unwrap(), 2.0 / 23.0, 1e-15));
    assert_eq!(t["lmfdb_l"].as_array().unwrap().len(), 2);
}
