use super::matfn::{conjugation_sum, ft_m2, gl2_order, side, unpack, FiniteMatFn};
use crate::error::{Error, Result};
use crate::quat_core::split::{m2_trace, mask, Mat2};
use crate::report::Report;
use crate::tree_fix::{fix_sharp, TorsionAction};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

#[inline]
fn in_p(x: u64, k: u32, n: u32) -> bool {
    x & mask(k.min(n)) == 0
}

#[inline]
fn unit(x: u64) -> bool {
    x & 1 == 1
}

/// Indicator of [[o^×, p^a], [p^b, o^×]].
pub fn eta_ab(x: &Mat2, a: u32, b: u32, n: u32) -> i64 {
    (unit(x[0]) && unit(x[3]) && in_p(x[1], a, n) && in_p(x[2], b, n)) as i64
}

/// 4Φ⁰ = 4η_{−N..N} − 2η_{−N..N−1} − 2η_{−N+1..N} + η_{−N+1..N−1}.
pub fn phi0_times4(x: &Mat2, n: u32) -> i64 {
    4 * eta_ab(x, n, n, n) - 2 * eta_ab(x, n, n - 1, n) - 2 * eta_ab(x, n - 1, n, n) + eta_ab(x, n - 1, n - 1, n)
}

/// Indicator of S(a, b) = [[p^a, o^×], [o^×, p^b]].
pub fn sigma(x: &Mat2, a: u32, b: u32, n: u32) -> i64 {
    (in_p(x[0], a, n) && unit(x[1]) && unit(x[2]) && in_p(x[3], b, n)) as i64
}

/// Φ′: supported on [[v + 2^{N−2}x, 2^{N−1}y], [2^{N−1}z, v − 2^{N−2}x]] with v a
/// unit, where it equals (−1)^{x+y} + (−1)^{y+z} + (−1)^{x+z}.
pub fn phi_prime(t: &Mat2, n: u32) -> i64 {
    let m = mask(n);
    let d = t[0].wrapping_sub(t[3]) & m;
    let h = n - 1;
    if !unit(t[0]) || !in_p(d, h, n) || !in_p(t[1], h, n) || !in_p(t[2], h, n) {
        return 0;
    }
    let bit = |v: u64| ((v >> h) & 1) as i64;
    let (x, y, z) = (bit(d), bit(t[1]), bit(t[2]));
    let s = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    s(x + y) + s(y + z) + s(x + z)
}

/// x mod 2 in E₁ ⊔ E₂ ⊔ E₃.
fn in_e(x: &Mat2) -> bool {
    let r = x.map(|v| v & 1);
    matches!(r, [0, 1, 1, 0] | [1, 1, 0, 1] | [1, 0, 1, 1])
}

/// 2·1_{tr ∈ p^N} − 1_{tr ∈ p^{N−1}}, restricted to E.
fn trace_profile(x: &Mat2, n: u32) -> i64 {
    if !in_e(x) {
        return 0;
    }
    let t = m2_trace(x, n);
    2 * in_p(t, n, n) as i64 - in_p(t, n - 1, n) as i64
}

/// Single constant c with f = c·g on a common support; None if the zero sets
/// differ or the ratio varies.
fn proportional(f: &[i64], g: &[i64]) -> Option<BigRational> {
    let mut ratio: Option<BigRational> = None;
    for (a, b) in f.iter().zip(g) {
        match (*a == 0, *b == 0) {
            (true, true) => continue,
            (false, false) => {}
            _ => return None,
        }
        let r = BigRational::new(BigInt::from(*a), BigInt::from(*b));
        match &ratio {
            None => ratio = Some(r),
            Some(q) if *q != r => return None,
            _ => {}
        }
    }
    ratio
}

fn table(n: u32, f: impl Fn(&Mat2) -> i64) -> Vec<i64> {
    (0..1usize << (4 * n)).map(|i| f(&unpack(i, n))).collect()
}

#[derive(Clone, Debug)]
pub struct UglyData {
    /// Φ = Σ_g Φ⁰(g⁻¹·g) as integers scaled by 4.
    pub phi_times4: Vec<i64>,
    pub phi_prime: Vec<i64>,
    /// Φ/Φ′ on the common support.
    pub c_n: Option<BigRational>,
}

/// Conjugation-summed Φ, Φ′ and their ratio at level N.
pub fn ugly_data(n: u32) -> Result<UglyData> {
    if n < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    let phi0 = table(n, |x| phi0_times4(x, n));
    let phi_times4 = conjugation_sum(&phi0, n);
    let phi_prime = table(n, |x| phi_prime(x, n));
    let c_n = proportional(&phi_times4, &phi_prime).map(|c| c / BigRational::from_integer(4.into()));
    Ok(UglyData { phi_times4, phi_prime, c_n })
}

/// Proportionality Φ = c_N Φ′, the transform identity for Φ⁰, the trace
/// profile of FΦ and FΦ′, the anchor 3·2^{2N−4}, and agreement with Fix♯.
pub fn verify_ugly_lemma(n: u32) -> Result<Report> {
    let mut r = Report::new("fourier", json!({ "N": n }));
    let q4 = 1usize << (4 * n);

    // 2^{−2N} F(Φ⁰) = σ_{N,N} − ½σ_{N−1,N} − ½σ_{N,N−1} + ¼σ_{N−1,N−1}
    let phi0 = FiniteMatFn::from_int_fn(n, |x| phi0_times4(x, n));
    let fphi0 = ft_m2(&phi0);
    let want = FiniteMatFn::from_int_fn(n, |x| {
        (4 * sigma(x, n, n, n) - 2 * sigma(x, n - 1, n, n) - 2 * sigma(x, n, n - 1, n)
            + sigma(x, n - 1, n - 1, n))
            << (2 * n)
    });
    let bad = (0..q4).filter(|&i| fphi0.values[i] != want.values[i]).count();
    r.case(bad == 0, || json!({ "identity": "transform of Phi0", "mismatches": bad }));

    let d = ugly_data(n)?;
    let c_n = d.c_n.clone();
    r.case(c_n.is_some(), || json!({ "identity": "Phi proportional to Phi'" }));
    let support = d.phi_prime.iter().filter(|&&v| v != 0).count();

    // transform side: FΦ and FΦ′ both multiples of the trace profile on E
    let profile = table(n, |x| trace_profile(x, n));
    let fphi = ft_m2(&FiniteMatFn {
        n,
        values: d.phi_times4.iter().map(|&v| super::CycInt::from_int(n, v)).collect(),
    })
    .as_ints();
    let fphi_prime = ft_m2(&FiniteMatFn::from_int_fn(n, |x| phi_prime(x, n))).as_ints();
    let c_f = fphi.as_ref().and_then(|v| proportional(v, &profile));
    let c_fp = fphi_prime.as_ref().and_then(|v| proportional(v, &profile));
    r.case(c_f.is_some() && c_fp.is_some(), || {
        json!({ "identity": "trace profile of F Phi and F Phi'" })
    });

    // anchor at the identity
    let g = gl2_order(n);
    let one: Mat2 = [1, 0, 0, 1];
    let idx = super::matfn::pack(&one, n);
    let anchor = 3i64 << (2 * n - 4);
    let tree_anchor = fix_sharp(&TorsionAction::new(one, n), n)?;
    let fourier_anchor = BigRational::new(
        BigInt::from(6i64 << (2 * n - 2)) * d.phi_times4[idx],
        BigInt::from(8 * g),
    );
    r.case(
        fourier_anchor == BigRational::from_integer(anchor.into()) && tree_anchor == 2 * anchor,
        || json!({ "identity": "anchor", "tree": tree_anchor, "fourier": fourier_anchor.to_string() }),
    );

    // tree route: |G|·Fix♯(x) = 6·2^{2N−2}·Φ(x) wherever x has a unit diagonal
    let mut tree_bad = 0usize;
    let mut tree_cases = 0usize;
    for i in 0..q4 {
        let x = unpack(i, n);
        if !unit(x[0]) || !unit(x[3]) {
            continue;
        }
        tree_cases += 1;
        let fs = fix_sharp(&TorsionAction::new(x, n), n)? as i128;
        let lhs = 4 * g as i128 * fs;
        let rhs = (6i128 << (2 * n - 2)) * d.phi_times4[i] as i128;
        if lhs != rhs {
            tree_bad += 1;
        }
    }
    r.case(tree_bad == 0, || json!({ "identity": "tree route", "mismatches": tree_bad }));

    let expected_c = BigRational::from_integer(BigInt::from(1u64) << (4 * n - 5));
    r.set("c_N", json!(c_n.as_ref().map(|c| c.to_string())));
    r.set("c_N_closed_form", json!(expected_c.to_string()));
    r.case(c_n.as_ref() == Some(&expected_c), || json!({ "identity": "c_N = 2^(4N-5)" }));
    r.set("support_size", json!(support));
    r.set("anchor", json!(anchor));
    r.set("tree_points", json!(tree_cases));
    r.set("transform_constants", json!({
        "F_Phi": c_f.map(|c| (c / BigRational::from_integer(4.into())).to_string()),
        "F_Phi_prime": c_fp.map(|c| c.to_string()),
    }));
    r.set("group_order", json!(g));
    r.set("side", json!(side(n)));
    Ok(r)
}
