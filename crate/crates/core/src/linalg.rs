//! Small exact linear algebra over Z and Q: Hermite normal form, kernels, solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are in echelon form with positive pivots and entries above
/// each pivot reduced into [0, pivot). Zero rows are dropped.
pub fn hnf(rows: &[Vec<BigInt>]) -> IMat {
    if rows.is_empty() {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut m: IMat = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: IMat = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..ncols {
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&r| !m[r][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| m[r][col].abs()).unwrap();
            let pv = m[p][col].clone();
            for &r in &nz {
                if r == p {
                    continue;
                }
                let q = m[r][col].div_floor(&pv);
                if q.is_zero() {
                    continue;
                }
                let prow = m[p].clone();
                for (x, y) in m[r].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
            m.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
        if let Some(r) = (0..m.len()).find(|&r| !m[r][col].is_zero()) {
            let mut row = m.remove(r);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(row);
            pivots.push(col);
        }
    }
    for i in 0..out.len() {
        let c = pivots[i];
        let p = out[i][c].clone();
        for k in 0..i {
            let q = out[k][c].div_floor(&p);
            if !q.is_zero() {
                let row = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(row.iter()) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// Basis of {x ∈ Z^n : Σ f_i x_i = 0}.
pub fn integer_kernel(f: &[BigInt]) -> IMat {
    let n = f.len();
    // Column operations on f tracked in a unimodular U, columns of U stored as rows.
    let mut v: Vec<BigInt> = f.to_vec();
    let mut u: IMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| v[i].abs()).unwrap();
        for &i in &nz {
            if i == p {
                continue;
            }
            let q = v[i].div_floor(&v[p]);
            let vp = v[p].clone();
            v[i] -= &q * &vp;
            let up = u[p].clone();
            for (x, y) in u[i].iter_mut().zip(up.iter()) {
                *x -= &q * y;
            }
        }
    }
    let ker: IMat = (0..n).filter(|&i| v[i].is_zero()).map(|i| u[i].clone()).collect();
    hnf(&ker)
}

pub fn qmat_from_int(m: &[Vec<BigInt>]) -> QMat {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

pub fn det_q(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

pub fn det_i(m: &[Vec<BigInt>]) -> BigInt {
    let d = det_q(&qmat_from_int(m));
    d.to_integer()
}

pub fn inverse_q(m: &[Vec<BigRational>]) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut inv: QMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let pv = a[c][c].recip();
        for k in 0..n {
            a[c][k] *= &pv;
            inv[c][k] *= &pv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
                let t = &f * &inv[c][k];
                inv[r][k] -= t;
            }
        }
    }
    Some(inv)
}

pub fn mat_mul_q(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> QMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for t in 0..k {
                        s += &a[i][t] * &b[t][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul_q(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m[0].len();
    (0..cols)
        .map(|j| {
            let mut s = BigRational::zero();
            for (i, x) in v.iter().enumerate() {
                s += x * &m[i][j];
            }
            s
        })
        .collect()
}

/// Characteristic polynomial coefficients [c0, c1, ..., cn] (monic, cn = 1)
/// by the Faddeev–LeVerrier recursion.
pub fn charpoly_q(m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let ident: QMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let mut mk: QMat = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1} I
        let mut next = mat_mul_q(m, &mk);
        for i in 0..n {
            next[i][i] += &coeffs[n - k + 1] * &ident[i][i];
        }
        let am = mat_mul_q(m, &next);
        let mut tr = BigRational::zero();
        for (i, row) in am.iter().enumerate() {
            tr += &row[i];
        }
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
        mk = next;
    }
    coeffs
}

pub fn is_integral(x: &BigRational) -> bool {
    x.denom().is_one()
}

pub fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("integer exceeds i64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_small() {
        let h = hnf(&im(&[&[2, 4], &[3, 1], &[0, 5]]));
        assert_eq!(h, im(&[&[1, 2], &[0, 5]]));
        let h = hnf(&im(&[&[4, 2], &[0, 6]]));
        assert_eq!(h, im(&[&[4, 2], &[0, 6]]));
        assert_eq!(hnf(&h), h);
    }

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel(&[BigInt::from(2), BigInt::from(3), BigInt::from(0), BigInt::from(-6)]);
        assert_eq!(k.len(), 3);
        for r in &k {
            let s: BigInt = &r[0] * 2 + &r[1] * 3 - &r[3] * 6;
            assert!(s.is_zero());
        }
        // index 1 in the full kernel: the kernel lattice is saturated
        let mut m = k.clone();
        m.push(vec![BigInt::from(-1), BigInt::from(1), BigInt::from(0), BigInt::from(0)]);
        assert_eq!(det_i(&m).abs(), BigInt::one());
    }

    #[test]
    fn charpoly_diag() {
        let m: QMat = vec![
            vec![BigRational::from_integer(2.into()), BigRational::zero()],
            vec![BigRational::zero(), BigRational::from_integer(3.into())],
        ];
        let c = charpoly_q(&m);
        assert_eq!(c[0], BigRational::from_integer(6.into()));
        assert_eq!(c[1], BigRational::from_integer((-5).into()));
    }
}
