use super::{chi_coords, chi_sum, eta, fix_sharp, torsion_level, TorsionAction};
use crate::class_graph::{ClassRecord, ClassSet};
use crate::error::Result;
use crate::quat_core::{rat, Form, Quaternion};
use crate::report::Report;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

const RESIDUES: [[i64; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

/// χ_i = η_j η_k for every residue class of S⁰/2S⁰ in every class, with η
/// read off from two different lifts.
pub fn verify_triples_agree(cs: &ClassSet) -> Result<Report> {
    let mut r = Report::new("triples", json!({}));
    for (e, class) in cs.classes.iter().enumerate() {
        let t = &class.ternary;
        for c in RESIDUES {
            let chi = chi_coords(&c);
            let eta0 = eta(t, &class.split, &c, 0)?;
            let eta1 = eta(t, &class.split, &c, 1)?;
            let shape = t.rho_mod4(&c);
            let want = [
                c[0] as u64 & 3,
                (2 * c[1]) as u64 & 3,
                (2 * c[2]) as u64 & 3,
                (-c[0]) as u64 & 3,
            ];
            let agree = (0..3).all(|i| chi[i] == eta0[(i + 1) % 3] * eta0[(i + 2) % 3]);
            r.case(agree && eta0 == eta1 && shape == want, || {
                json!({ "class": e, "beta": c, "chi": chi, "eta": eta0, "eta_alt": eta1, "rho_mod4": shape })
            });
        }
    }
    Ok(r)
}

fn action_of(class: &ClassRecord, c: &[i64; 3], level: u32) -> Result<TorsionAction> {
    TorsionAction::from_order_coords(&class.split, &class.ternary.order_coords(c), level)
}

/// Is α ∈ Z + 2^e S⁰?
fn in_support(class: &ClassRecord, alpha: &Quaternion, e: u32) -> bool {
    let tr = alpha.trd();
    if !tr.is_integer() || tr.to_integer() % 2 != BigInt::zero() {
        return false;
    }
    let t = tr / rat(2, 1);
    let beta = alpha - &Quaternion::scalar(t);
    match class.ternary.coords(&beta) {
        Some(c) => c.iter().all(|x| x.rem_euclid(1 << e) == 0),
        None => false,
    }
}

/// Fix♯(m + 2^{N−2}β) = 2^{2N−3} Σχ_i(β) over residues β and m ∈ {0..3} in
/// every class; random lifts of β; vanishing off Z + 2^{N−2}S⁰ on `samples`
/// random elements per class.
pub fn verify_local_pushforward(cs: &ClassSet, n: u32, samples: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new("fix-prop", json!({ "N": n, "samples": samples, "seed": seed }));
    if !(2..=6).contains(&n) {
        return Err(crate::Error::InvalidArgument(format!("N = {n} outside 2..=6")));
    }
    let level = torsion_level(n);
    let scale = 1i64 << (n - 2);
    let factor = 1i64 << (2 * n - 3);
    for (e, class) in cs.classes.iter().enumerate() {
        for c in RESIDUES {
            let b = action_of(class, &c, level)?.scale(scale);
            for m in 0..4 {
                let lhs = fix_sharp(&b.add_scalar(m), n)?;
                let rhs = factor * chi_sum(&c);
                r.case(lhs == rhs, || json!({ "class": e, "beta": c, "m": m, "lhs": lhs, "rhs": rhs }));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lift_fail = None;
    let mut lift_cases = 0u64;
    for (e, class) in cs.classes.iter().enumerate() {
        for c in RESIDUES {
            let d: [i64; 3] = std::array::from_fn(|t| c[t] + 2 * rng.gen_range(-5..=5));
            let m: i64 = rng.gen_range(-20..=20);
            let lhs = fix_sharp(&action_of(class, &d, level)?.scale(scale).add_scalar(m), n)?;
            let rhs = factor * chi_sum(&d);
            lift_cases += 1;
            if lhs != rhs && lift_fail.is_none() {
                lift_fail = Some(json!({ "class": e, "beta": d, "m": m, "lhs": lhs, "rhs": rhs }));
            }
        }
    }

    let mut support_fail = None;
    let mut support_cases = 0u64;
    for (e, class) in cs.classes.iter().enumerate() {
        let mut done = 0;
        while done < samples {
            let x: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-16..=16));
            let alpha = class.left_order.element(&x);
            if in_support(class, &alpha, n - 2) {
                continue;
            }
            done += 1;
            support_cases += 1;
            let v = fix_sharp(&TorsionAction::from_order_coords(&class.split, &x, level)?, n)?;
            if v != 0 && support_fail.is_none() {
                support_fail = Some(json!({ "class": e, "coords": x, "fix_sharp": v }));
            }
        }
    }
    r.set("random_lifts", json!({ "cases": lift_cases, "first_failure": lift_fail }));
    r.set("off_support", json!({ "cases": support_cases, "first_failure": support_fail }));
    for f in [lift_fail, support_fail].into_iter().flatten() {
        r.case(false, || f);
        r.cases_total -= 1;
    }
    r.set("factor", json!(factor));
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct MeanStats {
    pub n: u32,
    /// (1/2) Σ_{α ∈ R_E, nrd α = 1} Fix♯(α, N) per class.
    pub per_class: Vec<i64>,
    /// Σ_E per_class(E) / w_E.
    pub total: BigRational,
}

pub fn mean_statistics(cs: &ClassSet, n: u32) -> Result<(Report, MeanStats)> {
    let level = torsion_level(n);
    let expect = 3i64 << (2 * n - 3);
    let mut r = Report::new("mean", json!({ "N": n }));
    let per: Vec<Result<(i64, bool)>> = cs
        .classes
        .par_iter()
        .map(|class| {
            let form = Form::new(&class.order_gram)?;
            let mut units = Vec::new();
            form.for_each(1, |v, q| {
                if q == 1 {
                    units.push(v.to_vec());
                }
            });
            let one = class.left_order.coords(&Quaternion::one()).unwrap();
            let one: Vec<i64> = one.iter().map(crate::linalg::to_i64).collect();
            let minus: Vec<i64> = one.iter().map(|x| -x).collect();
            let mut sum = 0i64;
            let mut others_zero = true;
            for u in &units {
                let f = fix_sharp(&TorsionAction::from_order_coords(&class.split, u, level)?, n)?;
                sum += f;
                if *u != one && *u != minus && f != 0 {
                    others_zero = false;
                }
            }
            Ok((sum / 2, others_zero))
        })
        .collect();
    let mut per_class = Vec::new();
    let mut total = BigRational::zero();
    for (e, (p, class)) in per.into_iter().zip(&cs.classes).enumerate() {
        let (v, others_zero) = p?;
        r.case(v == expect && others_zero, || {
            json!({ "class": e, "value": v, "expected": expect, "nontrivial_units_vanish": others_zero })
        });
        total += BigRational::new(BigInt::from(v), BigInt::from(class.w));
        per_class.push(v);
    }
    let formula = BigRational::new(BigInt::from(3i64 << (2 * n)), BigInt::from(8)) * rat(11, 6);
    r.case(total == formula && total.is_integer(), || {
        json!({ "F_N": total.to_string(), "expected": formula.to_string() })
    });
    r.set("per_class", json!(per_class));
    r.set("F_N", json!(total.to_string()));
    Ok((r, MeanStats { n, per_class, total }))
}

/// Fix_{N,N} and Fix♯ at m + 2^{N−2}β for every class, residue β and m ∈ {0..3}.
pub fn pushforward_table(cs: &ClassSet, n: u32, level: u32) -> Result<Vec<serde_json::Value>> {
    if n < 2 {
        return Err(crate::Error::InvalidArgument("N must be at least 2".into()));
    }
    let scale = 1i64 << (n - 2);
    let mut rows = Vec::new();
    for (e, class) in cs.classes.iter().enumerate() {
        for c in RESIDUES {
            let b = action_of(class, &c, level)?.scale(scale);
            for m in 0..4 {
                let a = b.add_scalar(m);
                rows.push(json!({
                    "class": e,
                    "beta": c,
                    "m": m,
                    "fix": super::fix_count(&a, n, n)?,
                    "fix_sharp": fix_sharp(&a, n)?,
                    "chi_sum": chi_sum(&c),
                }));
            }
        }
    }
    Ok(rows)
}
