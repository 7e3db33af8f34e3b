use crate::class_graph::{AlgNum, ClassSet, Ternary};
use crate::error::{Error, Result};
use crate::quat_core::{lll_reduce, Form};
use crate::tree_fix::chi_sum;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::series::{CoeffSeries, SeriesMeta};

/// Largest D accepted by `mu_measure`.
pub const MU_DMAX_LIMIT: u64 = 10_000_000;

/// Signed representation numbers of the ternary lattices S_E⁰.
#[derive(Clone, Debug)]
pub struct MuMeasure {
    pub dmax: u64,
    pub weights: Vec<u32>,
    /// per_class[E][D] = Σ_{β ∈ S_E⁰, nrd β = D} (χ₁ + χ₂ + χ₃)(β)
    pub per_class: Vec<Vec<i64>>,
}

/// Σ_{nrd β ≤ dmax} Σ χ_i(β) q^{nrd β} on one ternary lattice.
pub fn class_mu_table(t: &Ternary, dmax: u64) -> Result<Vec<i64>> {
    let (reduced, u) = lll_reduce(&t.gram);
    let form = Form::new(&reduced)?;
    let bound = dmax as i64;
    let len = dmax as usize + 1;
    let outers: Vec<i64> = form.outer_range(bound).collect();
    let table = outers
        .par_iter()
        .fold(
            || vec![0i64; len],
            |mut acc, &outer| {
                form.for_each_with_outer(bound, outer, &mut |v, q| {
                    let c: [i64; 3] = std::array::from_fn(|i| u[i][0] * v[0] + u[i][1] * v[1] + u[i][2] * v[2]);
                    acc[q as usize] += chi_sum(&c);
                });
                acc
            },
        )
        .reduce(
            || vec![0i64; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(table)
}

pub fn mu_measure(cs: &ClassSet, dmax: u64) -> Result<MuMeasure> {
    if dmax > MU_DMAX_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "dmax = {dmax} exceeds the limit {MU_DMAX_LIMIT}"
        )));
    }
    let per_class = cs
        .classes
        .iter()
        .map(|c| class_mu_table(&c.ternary, dmax))
        .collect::<Result<Vec<_>>>()?;
    Ok(MuMeasure {
        dmax,
        weights: cs.weights(),
        per_class,
    })
}

impl MuMeasure {
    /// μ_D(Ψ) = Σ_E Ψ(E)·mu[E][D]/w_E for D ≤ dmax.
    pub fn combine(&self, psi: &[AlgNum]) -> Vec<AlgNum> {
        let coeffs: Vec<AlgNum> = psi
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| p.scale(&BigRational::new(BigInt::from(1), BigInt::from(w))))
            .collect();
        (0..=self.dmax as usize)
            .into_par_iter()
            .map(|d| {
                let mut s = AlgNum::zero();
                for (c, t) in coeffs.iter().zip(&self.per_class) {
                    if t[d] != 0 {
                        s = &s + &c.scale(&BigRational::from_integer(BigInt::from(t[d])));
                    }
                }
                s
            })
            .collect()
    }

    pub fn combine_f64(&self, psi: &[f64]) -> Vec<f64> {
        let coeffs: Vec<f64> = psi.iter().zip(&self.weights).map(|(p, &w)| p / w as f64).collect();
        (0..=self.dmax as usize)
            .map(|d| coeffs.iter().zip(&self.per_class).map(|(c, t)| c * t[d] as f64).sum())
            .collect()
    }

    pub fn series(&self, psi: &[AlgNum], index: usize) -> CoeffSeries<AlgNum> {
        let meta = SeriesMeta {
            object: "mu".into(),
            index: Some(index),
            dilation: 1,
        };
        CoeffSeries::from_dense(&self.combine(psi), self.dmax, meta)
    }

    pub fn class_series(&self, e: usize) -> CoeffSeries<i64> {
        let meta = SeriesMeta {
            object: "mu_class".into(),
            index: Some(e),
            dilation: 1,
        };
        CoeffSeries::from_dense(&self.per_class[e], self.dmax, meta)
    }
}

/// Box enumeration in the adapted coordinates, for cross-checks.
pub fn class_mu_table_naive(t: &Ternary, dmax: u64) -> Vec<i64> {
    let mut out = vec![0i64; dmax as usize + 1];
    let g = &t.gram;
    // |v_i|² ≤ 2·dmax·(G⁻¹)_ii
    let gq: crate::linalg::QMat = g
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let inv = crate::linalg::inverse_q(&gq).expect("Gram is nondegenerate");
    let radius: Vec<i64> = (0..3)
        .map(|i| {
            use num_traits::ToPrimitive;
            (2.0 * dmax as f64 * inv[i][i].to_f64().unwrap()).sqrt().floor() as i64 + 1
        })
        .collect();
    for a in -radius[0]..=radius[0] {
        for b in -radius[1]..=radius[1] {
            for c in -radius[2]..=radius[2] {
                let v = [a, b, c];
                let mut s: i128 = 0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += g[i][j] as i128 * v[i] as i128 * v[j] as i128;
                    }
                }
                let q = (s / 2) as u64;
                if q <= dmax {
                    out[q as usize] += chi_sum(&v);
                }
            }
        }
    }
    out
}
