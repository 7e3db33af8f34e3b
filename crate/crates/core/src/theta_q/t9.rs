use crate::class_graph::{AlgNum, ClassSet, EigenFns};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;

use super::mu::{mu_measure, MuMeasure};

/// Legendre symbol (x/3).
fn legendre3(x: i64) -> i64 {
    match x.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Parameters of a(9D) + t·(−D/3)·a(D) + 3·a(D/9) = c·a(D).
#[derive(Clone, Debug)]
pub struct T9Fit {
    pub twist: AlgNum,
    pub eigenvalue: AlgNum,
    /// The two D used for the fit.
    pub fitted_on: [u64; 2],
}

fn row(a: &[AlgNum], d: u64) -> ([AlgNum; 2], AlgNum) {
    let ad = &a[d as usize];
    let e = legendre3(-(d as i64));
    let rhs = &a[9 * d as usize] + &(if d.is_multiple_of(9) { &a[(d / 9) as usize] * &AlgNum::from_int(3) } else { AlgNum::zero() });
    // c·a(D) − t·(−D/3)·a(D) = a(9D) + 3a(D/9)
    ([ad.clone(), ad * &AlgNum::from_int(-e)], rhs)
}

/// Solve for (c, t) from the first pair of D giving an invertible system.
pub fn fit_t9(a: &[AlgNum], dmax: u64) -> Result<T9Fit> {
    let rows: Vec<(u64, [AlgNum; 2], AlgNum)> = (1..=dmax)
        .filter(|&d| !a[d as usize].is_zero())
        .map(|d| {
            let (r, b) = row(a, d);
            (d, r, b)
        })
        .collect();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (d1, r1, b1) = &rows[i];
            let (d2, r2, b2) = &rows[j];
            let det = &(&r1[0] * &r2[1]) - &(&r1[1] * &r2[0]);
            if det.is_zero() {
                continue;
            }
            let c = &(&(b1 * &r2[1]) - &(&r1[1] * b2)) / &det;
            let t = &(&(&r1[0] * b2) - &(b1 * &r2[0])) / &det;
            return Ok(T9Fit {
                twist: t,
                eigenvalue: c,
                fitted_on: [*d1, *d2],
            });
        }
    }
    Err(Error::Internal("no invertible pair of equations for the T(9) fit".into()))
}

pub fn t9_residual(a: &[AlgNum], fit: &T9Fit, d: u64) -> AlgNum {
    let ([x, y], b) = row(a, d);
    &(&(&x * &fit.eigenvalue) + &(&y * &fit.twist)) - &b
}

/// Fit-then-verify check of the T(9) eigen-recurrence on D ↦ μ_D(Ψ_k) for
/// D ≤ dmax (using μ up to 9·dmax), for each k in `ks`.
pub fn shimura_t9_check(cs: &ClassSet, eig: &EigenFns, ks: &[usize], dmax: u64) -> Result<Report> {
    let mu = mu_measure(cs, 9 * dmax)?;
    shimura_t9_check_with(&mu, eig, ks, dmax)
}

pub fn shimura_t9_check_with(mu: &MuMeasure, eig: &EigenFns, ks: &[usize], dmax: u64) -> Result<Report> {
    if dmax < 50 {
        return Err(Error::InvalidArgument("T(9) check needs dmax ≥ 50".into()));
    }
    if mu.dmax < 9 * dmax {
        return Err(Error::InvalidArgument("μ table too short for the T(9) check".into()));
    }
    let mut report = Report::new("t9", json!({"k": ks.iter().map(|k| k + 1).collect::<Vec<_>>(), "dmax": dmax}));
    let mut ratio: Option<AlgNum> = None;
    let mut fits = Vec::new();
    for &k in ks {
        let f = eig.psi(k);
        let a = mu.combine(&f.psi);
        let fit = fit_t9(&a, dmax)?;
        let unit_twist = fit.twist == AlgNum::one() || fit.twist == AlgNum::from_int(-1);
        report.case(unit_twist, || json!({"k": k + 1, "twist": fit.twist}));
        let mut nonzero = 0;
        for d in 1..=dmax {
            let r = t9_residual(&a, &fit, d);
            if !a[d as usize].is_zero() || !a[9 * d as usize].is_zero() {
                nonzero += 1;
            }
            report.case(r.is_zero(), || json!({"k": k + 1, "D": d, "residual": r}));
        }
        let a3 = f
            .a
            .get(&3)
            .ok_or_else(|| Error::Internal("eigenvalue a_3 missing".into()))?;
        let q = &fit.eigenvalue / a3;
        let same = match &ratio {
            None => {
                ratio = Some(q.clone());
                true
            }
            Some(r0) => *r0 == q,
        };
        report.case(same, || json!({"k": k + 1, "eigenvalue_over_a3": q}));
        fits.push(json!({
            "k": k + 1,
            "twist": fit.twist.to_string(),
            "eigenvalue": fit.eigenvalue.to_string(),
            "a3": a3.to_string(),
            "eigenvalue_over_a3": q.to_string(),
            "fitted_on": fit.fitted_on,
            "nontrivial_D": nonzero,
        }));
    }
    report.set("fits", json!(fits));
    if let Some(r) = ratio {
        report.set("eigenvalue_over_a3", json!(r.to_string()));
    }
    Ok(report)
}
