use super::algnum::{null_vector, AlgNum};
use super::classes::ClassSet;
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::quat_core::{lattice::rational_sqrt, Form};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct BrandtMatrix {
    pub n: u64,
    pub entries: QMat,
}

/// Representation numbers r_EF(n) of nrd/(N_E N_F) on I_E·Ī_F for n ≤ nmax.
pub struct ThetaTable {
    pub nmax: u64,
    /// counts[e][f][n]
    pub counts: Vec<Vec<Vec<u64>>>,
}

pub fn theta_table(cs: &ClassSet, nmax: u64) -> ThetaTable {
    let h = cs.len();
    let mut counts = vec![vec![Vec::new(); h]; h];
    for e in 0..h {
        for f in e..h {
            let ce = &cs.classes[e];
            let cf = &cs.classes[f];
            let l = ce.ideal.mul(&cf.ideal.conj());
            let scale = BigRational::from_integer(&ce.ideal_norm * &cf.ideal_norm);
            let g = l.gram_scaled_int(&scale).expect("ideal product Gram not integral");
            let form = Form::new(&g).expect("positive definite");
            let t = form.theta_counts(nmax as i64);
            counts[e][f] = t.clone();
            counts[f][e] = t;
        }
    }
    ThetaTable { nmax, counts }
}

impl ThetaTable {
    /// B(n)_{EF} = r_EF(n) / (2 w_F).
    pub fn brandt(&self, cs: &ClassSet, n: u64) -> Result<BrandtMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument("Brandt index must be positive".into()));
        }
        if n > self.nmax {
            return Err(Error::InvalidArgument(format!("n = {n} beyond table bound {}", self.nmax)));
        }
        let h = cs.len();
        let entries = (0..h)
            .map(|e| {
                (0..h)
                    .map(|f| {
                        BigRational::new(
                            BigInt::from(self.counts[e][f][n as usize]),
                            BigInt::from(2 * cs.classes[f].w),
                        )
                    })
                    .collect()
            })
            .collect();
        Ok(BrandtMatrix { n, entries })
    }
}

pub fn brandt(cs: &ClassSet, n: u64) -> Result<BrandtMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("Brandt index must be positive".into()));
    }
    theta_table(cs, n).brandt(cs, n)
}

impl BrandtMatrix {
    pub fn row_sums(&self) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|r| r.iter().fold(BigRational::zero(), |a, x| a + x))
            .collect()
    }

    pub fn mul(&self, other: &BrandtMatrix) -> QMat {
        linalg::mat_mul_q(&self.entries, &other.entries)
    }

    pub fn commutes_with(&self, other: &BrandtMatrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// D·B symmetric for D = diag(1/w).
    pub fn is_weighted_self_adjoint(&self, w: &[u32]) -> bool {
        let h = self.entries.len();
        (0..h).all(|i| {
            (0..h).all(|j| {
                let a = &self.entries[i][j] / BigRational::from_integer(BigInt::from(w[i]));
                let b = &self.entries[j][i] / BigRational::from_integer(BigInt::from(w[j]));
                a == b
            })
        })
    }

    pub fn trace(&self) -> BigRational {
        (0..self.entries.len()).fold(BigRational::zero(), |a, i| a + &self.entries[i][i])
    }

    pub fn apply(&self, v: &[AlgNum]) -> Vec<AlgNum> {
        self.entries
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(AlgNum::zero(), |acc, (x, y)| {
                    &acc + &y.scale(x)
                })
            })
            .collect()
    }
}

pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

#[derive(Clone, Debug)]
pub struct EigenFn {
    /// Unnormalized values on the classes.
    pub psi: Vec<AlgNum>,
    /// Σ Ψ(E)² / w_E
    pub norm_sq: AlgNum,
    /// Hecke eigenvalues a_n, T_n Ψ = a_n Ψ.
    pub a: BTreeMap<u64, AlgNum>,
}

#[derive(Clone, Debug)]
pub struct EigenFns {
    pub fns: [EigenFn; 2],
    /// Monic quadratic x² + c1 x + c0 cutting out the nontrivial B(2) eigenvalues, as [c0, c1].
    pub quadratic: [BigRational; 2],
}

impl EigenFns {
    pub fn psi(&self, k: usize) -> &EigenFn {
        &self.fns[k]
    }
}

/// Roots of x² + c1 x + c0 in Q(√5), larger real root first.
fn quadratic_roots(c0: &BigRational, c1: &BigRational) -> Result<[AlgNum; 2]> {
    let four = BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    let disc = c1 * c1 - &four * c0;
    let half_neg_c1 = -c1 / &two;
    if let Some(r) = rational_sqrt(&disc) {
        let r = r / &two;
        return Ok([
            AlgNum::from_rational(&half_neg_c1 + &r),
            AlgNum::from_rational(&half_neg_c1 - &r),
        ]);
    }
    let five = BigRational::from_integer(5.into());
    let b = rational_sqrt(&(&disc / &five))
        .ok_or_else(|| Error::Internal(format!("discriminant {disc} is not in Q(√5)")))?;
    let b = b.abs() / &two;
    Ok([
        AlgNum::new(half_neg_c1.clone(), b.clone()),
        AlgNum::new(half_neg_c1, -b),
    ])
}

/// Hecke eigenfunctions orthogonal to the constants, with eigenvalues a_n for
/// every n ≤ table bound.
pub fn eigenfunctions(cs: &ClassSet, table: &ThetaTable) -> Result<EigenFns> {
    let b2 = table.brandt(cs, 2)?;
    let cp = linalg::charpoly_q(&b2.entries);
    // divide by (x − 3): synthetic division of the cubic
    if cp.len() != 4 {
        return Err(Error::Unsupported("eigenfunctions expect three classes".into()));
    }
    let three = BigRational::from_integer(3.into());
    let q1 = &cp[2] + &three; // x² + q1 x + q0
    let q0 = &cp[1] + &three * &q1;
    let rem = &cp[0] + &three * &q0;
    if !rem.is_zero() {
        return Err(Error::Internal("3 is not an eigenvalue of B(2)".into()));
    }
    let roots = quadratic_roots(&q0, &q1)?;
    let w: Vec<u32> = cs.weights();
    let h = cs.len();
    let mut fns = Vec::new();
    for lam in roots.iter() {
        let m: Vec<Vec<AlgNum>> = (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| {
                        let e = AlgNum::from_rational(b2.entries[i][j].clone());
                        if i == j {
                            &e - lam
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        let psi = null_vector(&m).ok_or_else(|| Error::Internal("eigenspace is not a line".into()))?;
        let mut norm_sq = AlgNum::zero();
        for (x, wi) in psi.iter().zip(&w) {
            norm_sq = &norm_sq + &(x * x).scale(&BigRational::new(BigInt::one(), BigInt::from(*wi)));
        }
        let mut a = BTreeMap::new();
        let e0 = psi.iter().position(|x| !x.is_zero()).unwrap();
        for n in 1..=table.nmax {
            let bn = table.brandt(cs, n)?;
            let img = bn.apply(&psi);
            let an = &img[e0] / &psi[e0];
            for (y, x) in img.iter().zip(&psi) {
                if y != &(x * &an) {
                    return Err(Error::Internal(format!("Ψ is not an eigenvector of B({n})")));
                }
            }
            a.insert(n, an);
        }
        fns.push(EigenFn { psi, norm_sq, a });
    }
    let f1 = fns.pop().unwrap();
    let f0 = fns.pop().unwrap();
    Ok(EigenFns {
        fns: [f0, f1],
        quadratic: [q0, q1],
    })
}

/// Weighted inner product Σ f(E) g(E) / w_E.
pub fn weighted_ip(f: &[AlgNum], g: &[AlgNum], w: &[u32]) -> AlgNum {
    let mut s = AlgNum::zero();
    for ((x, y), wi) in f.iter().zip(g).zip(w) {
        s = &s + &(x * y).scale(&BigRational::new(BigInt::one(), BigInt::from(*wi)));
    }
    s
}

pub fn weighted_mean(f: &[AlgNum], w: &[u32]) -> AlgNum {
    let ones = vec![AlgNum::one(); f.len()];
    weighted_ip(f, &ones, w)
}
