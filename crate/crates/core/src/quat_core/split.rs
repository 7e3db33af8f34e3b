//! The splitting B ⊗ Q₂ ≅ M₂(Q₂) and its reductions modulo 2^M.

use super::lattice::QLattice;
use super::quaternion::Quaternion;
use crate::error::{Error, Result};
use crate::linalg;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// 2×2 matrix [[a, b], [c, d]] stored as [a, b, c, d], entries reduced mod 2^M.
pub type Mat2 = [u64; 4];

#[inline]
pub fn mask(m: u32) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

#[inline]
pub fn m2_mul(x: &Mat2, y: &Mat2, m: u32) -> Mat2 {
    let k = mask(m);
    [
        x[0].wrapping_mul(y[0]).wrapping_add(x[1].wrapping_mul(y[2])) & k,
        x[0].wrapping_mul(y[1]).wrapping_add(x[1].wrapping_mul(y[3])) & k,
        x[2].wrapping_mul(y[0]).wrapping_add(x[3].wrapping_mul(y[2])) & k,
        x[2].wrapping_mul(y[1]).wrapping_add(x[3].wrapping_mul(y[3])) & k,
    ]
}

#[inline]
pub fn m2_add(x: &Mat2, y: &Mat2, m: u32) -> Mat2 {
    let k = mask(m);
    std::array::from_fn(|t| x[t].wrapping_add(y[t]) & k)
}

#[inline]
pub fn m2_scale(x: &Mat2, s: i64, m: u32) -> Mat2 {
    let k = mask(m);
    let s = s as u64;
    std::array::from_fn(|t| x[t].wrapping_mul(s) & k)
}

#[inline]
pub fn m2_det(x: &Mat2, m: u32) -> u64 {
    x[0].wrapping_mul(x[3]).wrapping_sub(x[1].wrapping_mul(x[2])) & mask(m)
}

#[inline]
pub fn m2_trace(x: &Mat2, m: u32) -> u64 {
    x[0].wrapping_add(x[3]) & mask(m)
}

#[inline]
pub fn m2_reduce(x: &Mat2, m: u32) -> Mat2 {
    x.map(|e| e & mask(m))
}

pub fn m2_identity() -> Mat2 {
    [1, 0, 0, 1]
}

/// Reduce an integer (possibly negative) mod 2^m.
pub fn red_i64(x: i64, m: u32) -> u64 {
    (x as u64) & mask(m)
}

/// Reduce a 2-integral rational mod 2^m. None if the denominator is even.
pub fn red_rational(x: &BigRational, m: u32) -> Option<u64> {
    let d = x.denom();
    if d.is_even() {
        return None;
    }
    let modulus = BigInt::one() << m;
    let inv = mod_inverse(&d.mod_floor(&modulus), &modulus)?;
    let v = (x.numer() * inv).mod_floor(&modulus);
    v.to_u64()
}

fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(n);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(n))
}

/// Residue s with s² ≡ a (mod 2^m) on the 2-adic branch s ≡ 3 (mod 8).
///
/// The returned residue is the reduction of a fixed 2-adic root, so results at
/// different precisions agree after reduction.
pub fn hensel_sqrt(a: i64, m: u32) -> Result<u64> {
    if a.rem_euclid(8) != 1 {
        return Err(Error::InvalidArgument(format!("{a} is not a 2-adic square")));
    }
    if m > 120 {
        return Err(Error::InvalidArgument("precision too large".into()));
    }
    let target = a as i128;
    let mut s: i128 = 3;
    if (s * s - target).rem_euclid(16) != 0 {
        // the 2-adic roots lie in the classes ±1 mod 8 instead
        s = 1;
    }
    // lift through precision 2^(m+1); later corrections only touch bits ≥ m
    let top = m.max(4);
    for k in 3..=top {
        let modk1: i128 = 1i128 << (k + 1);
        if (s * s - target).rem_euclid(modk1) != 0 {
            s += 1i128 << (k - 1);
        }
    }
    let modulus = 1i128 << m;
    Ok(s.rem_euclid(modulus) as u64)
}

fn v2(x: &BigRational) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    let tz = |n: &BigInt| n.trailing_zeros().unwrap_or(0) as i64;
    tz(x.numer()) - tz(x.denom())
}

type QVec2 = [BigRational; 2];
type QMat2 = [[BigRational; 2]; 2];

fn rho_rational(x: &Quaternion, s: &BigRational) -> QMat2 {
    let c = &x.c;
    [
        [&c[0] + s * &c[2], -c[1].clone() + s * &c[3]],
        [&c[1] + s * &c[3], &c[0] - s * &c[2]],
    ]
}

fn apply(m: &QMat2, v: &QVec2) -> QVec2 {
    [
        &m[0][0] * &v[0] + &m[0][1] * &v[1],
        &m[1][0] * &v[0] + &m[1][1] * &v[1],
    ]
}

/// Z₂-echelon basis of the Z₂-span of the vectors.
fn echelon2(vs: &[QVec2]) -> [QVec2; 2] {
    let mut rest: Vec<QVec2> = vs.to_vec();
    let mut out: Vec<QVec2> = Vec::new();
    for coord in 0..2 {
        let best = rest
            .iter()
            .enumerate()
            .filter(|(_, v)| !v[coord].is_zero())
            .min_by_key(|(_, v)| v2(&v[coord]))
            .map(|(i, _)| i)
            .expect("vectors do not span Q2^2");
        let p = rest.remove(best);
        for w in rest.iter_mut() {
            if w[coord].is_zero() {
                continue;
            }
            let f = &w[coord] / &p[coord];
            w[0] = &w[0] - &f * &p[0];
            w[1] = &w[1] - &f * &p[1];
        }
        out.push(p);
    }
    [out[0].clone(), out[1].clone()]
}

fn covol_v2(b: &[QVec2; 2]) -> i64 {
    let d = &b[0][0] * &b[1][1] - &b[0][1] * &b[1][0];
    v2(&d)
}

/// A ring map from a lattice basis of an order into M₂(Z/2^M).
#[derive(Clone, Debug)]
pub struct TwoAdicSplitting {
    pub precision: u32,
    /// images[t] is the image of the t-th basis element of `order`.
    pub images: Vec<Mat2>,
    /// s with s² ≡ −23 (mod 2^M), s ≡ 3 (mod 8).
    pub two_adic_sqrt_m23: u64,
    pub order: QLattice,
}

/// Split the maximal order at precision M (M ≥ 3).
pub fn two_adic_split(m: u32) -> Result<TwoAdicSplitting> {
    split_order(&super::lattice::maximal_order(), m)
}

/// Splitting adapted to `order`: i ↦ [[0,−1],[1,0]], j ↦ diag(s,−s),
/// conjugated so that `order` lands in M₂(Z₂).
pub fn split_order(order: &QLattice, m: u32) -> Result<TwoAdicSplitting> {
    if m < 3 {
        return Err(Error::InvalidArgument("precision must be at least 3".into()));
    }
    let internal = m + 24;
    let s_int = hensel_sqrt(super::quaternion::ALG_B, internal)?;
    let s = BigRational::from_integer(BigInt::from(s_int));
    let basis = order.basis();
    let rhos: Vec<QMat2> = basis.iter().map(|b| rho_rational(b, &s)).collect();

    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut lat: [QVec2; 2] = [[one.clone(), zero.clone()], [zero, one]];
    let cap = 16;
    let mut rounds = 0;
    loop {
        let mut gens: Vec<QVec2> = lat.to_vec();
        for r in &rhos {
            for v in &lat {
                gens.push(apply(r, v));
            }
        }
        let next = echelon2(&gens);
        let stable = covol_v2(&next) == covol_v2(&lat);
        lat = next;
        if stable {
            break;
        }
        rounds += 1;
        if rounds > cap {
            return Err(Error::Stabilization(cap));
        }
    }
    // P has the lattice basis as columns; conjugate ρ by P.
    let p: QMat2 = [
        [lat[0][0].clone(), lat[1][0].clone()],
        [lat[0][1].clone(), lat[1][1].clone()],
    ];
    let det = &p[0][0] * &p[1][1] - &p[0][1] * &p[1][0];
    let pinv: QMat2 = [
        [&p[1][1] / &det, -(&p[0][1] / &det)],
        [-(&p[1][0] / &det), &p[0][0] / &det],
    ];
    let mut images = Vec::with_capacity(4);
    for r in &rhos {
        let mut out = [0u64; 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut e = BigRational::zero();
                for k in 0..2 {
                    for l in 0..2 {
                        e += &pinv[i][k] * &r[k][l] * &p[l][j];
                    }
                }
                out[2 * i + j] = red_rational(&e, m).ok_or_else(|| {
                    Error::Internal("order image is not 2-integral after base change".into())
                })?;
            }
        }
        images.push(out);
    }
    Ok(TwoAdicSplitting {
        precision: m,
        images,
        two_adic_sqrt_m23: s_int & mask(m),
        order: order.clone(),
    })
}

impl TwoAdicSplitting {
    /// Image of Σ c_t b_t.
    pub fn image(&self, coords: &[i64]) -> Mat2 {
        let m = self.precision;
        let mut acc = [0u64; 4];
        for (c, img) in coords.iter().zip(&self.images) {
            acc = m2_add(&acc, &m2_scale(img, *c, m), m);
        }
        acc
    }

    pub fn image_of(&self, x: &Quaternion) -> Result<Mat2> {
        let c = self
            .order
            .coords(x)
            .ok_or_else(|| Error::NotInLattice(x.to_string()))?;
        let c: Vec<i64> = c.iter().map(linalg::to_i64).collect();
        Ok(self.image(&c))
    }

    /// Reduce to a lower precision.
    pub fn reduce(&self, m: u32) -> TwoAdicSplitting {
        assert!(m <= self.precision);
        TwoAdicSplitting {
            precision: m,
            images: self.images.iter().map(|x| m2_reduce(x, m)).collect(),
            two_adic_sqrt_m23: self.two_adic_sqrt_m23 & mask(m),
            order: self.order.clone(),
        }
    }

    /// Checks the multiplication table, det = nrd and trace = trd mod 2^M.
    pub fn verify(&self) -> bool {
        let m = self.precision;
        let b = self.order.basis();
        for (x, ix) in b.iter().zip(&self.images) {
            let n = x.nrd();
            let t = x.trd();
            if red_rational(&n, m) != Some(m2_det(ix, m)) || red_rational(&t, m) != Some(m2_trace(ix, m)) {
                return false;
            }
            for (y, iy) in b.iter().zip(&self.images) {
                let Ok(img) = self.image_of(&(x * y)) else {
                    return false;
                };
                if img != m2_mul(ix, iy, m) {
                    return false;
                }
            }
        }
        let s = self.two_adic_sqrt_m23 as u128;
        let modulus = 1u128 << m;
        (s * s) % modulus == ((-23i128).rem_euclid(modulus as i128)) as u128
    }
}

/// Signed representative in (−2^{m−1}, 2^{m−1}].
pub fn signed(x: u64, m: u32) -> i64 {
    let x = x & mask(m);
    let half = 1u64 << (m - 1);
    if x > half {
        x as i64 - (1i64 << m)
    } else {
        x as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hensel_mod_64() {
        let s = hensel_sqrt(-23, 6).unwrap();
        assert_eq!((s * s) % 64, 41);
        assert_eq!(s % 8, 3);
        // exhaustive oracle: the residues mod 64 squaring to 41 that are 3 mod 8
        let roots: Vec<u64> = (0..64).filter(|x| (x * x) % 64 == 41 && x % 8 == 3).collect();
        assert!(roots.contains(&s));
    }

    #[test]
    fn hensel_consistent() {
        let hi = hensel_sqrt(-23, 40).unwrap();
        for m in 3..40 {
            assert_eq!(hensel_sqrt(-23, m).unwrap(), hi & mask(m));
        }
    }

    #[test]
    fn i_squared() {
        let sp = two_adic_split(8).unwrap();
        let i = sp.image_of(&Quaternion::i()).unwrap();
        let sq = m2_mul(&i, &i, 8);
        assert_eq!(sq, [255, 0, 0, 255]);
        assert!(sp.verify());
    }
}
