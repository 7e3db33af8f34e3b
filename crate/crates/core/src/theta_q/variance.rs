use crate::class_graph::{ClassSet, EigenFns};
use crate::constants::{arith_variance_target, Pairing};
use crate::error::{Error, Result};
use crate::report::Report;
use serde::Serialize;
use serde_json::json;

use super::mu::{mu_measure, MuMeasure, MU_DMAX_LIMIT};

#[derive(Clone, Debug, Serialize)]
pub struct VarianceCheckpoint {
    pub x: u64,
    /// S[k][l]
    pub s: [[f64; 2]; 2],
    /// Pairing closest to the diagonal at this x.
    pub pairing: Pairing,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArithVariance {
    pub xmax: u64,
    pub checkpoints: Vec<VarianceCheckpoint>,
    /// Target matrices per pairing.
    pub targets: Vec<(Pairing, [[f64; 2]; 2])>,
}

pub fn default_checkpoints(xmax: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [1_000u64, 10_000, 100_000, 1_000_000, 10_000_000]
        .into_iter()
        .filter(|&x| x < xmax)
        .collect();
    out.push(xmax);
    out
}

fn target_matrix(p: Pairing) -> [[f64; 2]; 2] {
    std::array::from_fn(|k| std::array::from_fn(|l| arith_variance_target(k, l, Some(p)).unwrap()))
}

/// Sum of squared log-ratios of the diagonal against a target.
fn misfit(s: &[[f64; 2]; 2], t: &[[f64; 2]; 2]) -> f64 {
    (0..2).map(|k| (s[k][k] / t[k][k]).ln().powi(2)).sum()
}

pub fn resolve_pairing(s: &[[f64; 2]; 2]) -> Pairing {
    let d = misfit(s, &target_matrix(Pairing::Direct));
    let w = misfit(s, &target_matrix(Pairing::Swapped));
    if d <= w {
        Pairing::Direct
    } else {
        Pairing::Swapped
    }
}

/// S_kl(x) = (1/x) Σ_{0<D<x} μ_D(Ψ_k) μ_D(Ψ_l)/√D for unit-norm Ψ.
pub fn arith_variance(cs: &ClassSet, eig: &EigenFns, xmax: u64, checkpoints: &[u64]) -> Result<ArithVariance> {
    if !(2..=MU_DMAX_LIMIT).contains(&xmax) {
        return Err(Error::InvalidArgument(format!("xmax must lie in [2, {MU_DMAX_LIMIT}]")));
    }
    let mu = mu_measure(cs, xmax - 1)?;
    arith_variance_with(&mu, eig, xmax, checkpoints)
}

pub fn arith_variance_with(mu: &MuMeasure, eig: &EigenFns, xmax: u64, checkpoints: &[u64]) -> Result<ArithVariance> {
    if mu.dmax + 1 < xmax {
        return Err(Error::InvalidArgument("μ table too short".into()));
    }
    let vals: Vec<Vec<f64>> = (0..2)
        .map(|k| {
            let f = eig.psi(k);
            let norm = f.norm_sq.to_f64().sqrt();
            let psi: Vec<f64> = f.psi.iter().map(|x| x.to_f64() / norm).collect();
            mu.combine_f64(&psi)
        })
        .collect();
    let mut cps: Vec<u64> = checkpoints.iter().copied().filter(|&x| x <= xmax).collect();
    cps.sort_unstable();
    cps.dedup();
    let mut acc = [[0f64; 2]; 2];
    let mut out = Vec::new();
    let mut next = cps.iter().peekable();
    for d in 1..xmax {
        let r = 1.0 / (d as f64).sqrt();
        let (a, b) = (vals[0][d as usize], vals[1][d as usize]);
        acc[0][0] += a * a * r;
        acc[0][1] += a * b * r;
        acc[1][1] += b * b * r;
        while let Some(&&x) = next.peek() {
            if x != d + 1 {
                break;
            }
            next.next();
            let xf = x as f64;
            let s = [[acc[0][0] / xf, acc[0][1] / xf], [acc[0][1] / xf, acc[1][1] / xf]];
            out.push(VarianceCheckpoint {
                x,
                s,
                pairing: resolve_pairing(&s),
            });
        }
    }
    Ok(ArithVariance {
        xmax,
        checkpoints: out,
        targets: Pairing::ALL.iter().map(|&p| (p, target_matrix(p))).collect(),
    })
}

impl ArithVariance {
    pub fn at(&self, x: u64) -> Option<&VarianceCheckpoint> {
        self.checkpoints.iter().find(|c| c.x == x)
    }

    pub fn target(&self, p: Pairing) -> [[f64; 2]; 2] {
        self.targets.iter().find(|(q, _)| *q == p).unwrap().1
    }
}

/// Off-diagonal bound at `x_small`; with `x_large`, diagonal within `rel_tol`
/// of the target under the pairing resolved there, and the same pairing at
/// both scales.
pub fn arith_variance_report(av: &ArithVariance, x_small: u64, x_large: Option<u64>, off_ratio: f64, rel_tol: f64) -> Report {
    let mut report = Report::new(
        "arithvar",
        json!({"xmax": av.xmax, "x_small": x_small, "x_large": x_large, "off_ratio": off_ratio, "rel_tol": rel_tol}),
    );
    match av.at(x_small) {
        None => report.case(false, || json!({"missing_checkpoint": x_small})),
        Some(c) => {
            let bound = off_ratio * (c.s[0][0] * c.s[1][1]).sqrt();
            report.case(c.s[0][1].abs() <= bound, || json!({"x": c.x, "s12": c.s[0][1], "bound": bound}));
            report.case(c.s[0][0] > 0.0 && c.s[1][1] > 0.0, || json!({"x": c.x, "diag": [c.s[0][0], c.s[1][1]]}));
        }
    }
    if let Some(xl) = x_large {
        match (av.at(x_small), av.at(xl)) {
            (Some(cs), Some(cl)) => {
                report.case(cs.pairing == cl.pairing, || {
                    json!({"pairing_small": cs.pairing, "pairing_large": cl.pairing})
                });
                let t = av.target(cl.pairing);
                for k in 0..2 {
                    let rel = (cl.s[k][k] - t[k][k]).abs() / t[k][k];
                    report.case(rel <= rel_tol, || json!({"x": xl, "k": k + 1, "S": cl.s[k][k], "target": t[k][k], "rel": rel}));
                }
                report.set("pairing", json!(cl.pairing));
            }
            _ => report.case(false, || json!({"missing_checkpoint": xl})),
        }
    }
    report.set("checkpoints", json!(av.checkpoints));
    report.set("targets", json!(av.targets));
    report
}
