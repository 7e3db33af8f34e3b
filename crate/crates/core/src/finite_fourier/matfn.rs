use super::cyclo::CycInt;
use crate::quat_core::split::{m2_det, m2_mul, mask, Mat2};
use rayon::prelude::*;

/// Function M₂(Z/2^N) → Z[ζ_{2^N}], indexed by the packed entries
/// ((x11·q + x12)·q + x21)·q + x22 with q = 2^N.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMatFn {
    pub n: u32,
    pub values: Vec<CycInt>,
}

pub fn side(n: u32) -> usize {
    1 << n
}

#[inline]
pub fn pack(x: &Mat2, n: u32) -> usize {
    let q = side(n);
    let m = mask(n);
    (((x[0] & m) as usize * q + (x[1] & m) as usize) * q + (x[2] & m) as usize) * q + (x[3] & m) as usize
}

#[inline]
pub fn unpack(i: usize, n: u32) -> Mat2 {
    let q = side(n);
    [(i / (q * q * q)) as u64, (i / (q * q) % q) as u64, (i / q % q) as u64, (i % q) as u64]
}

impl FiniteMatFn {
    pub fn from_int_fn<F: Fn(&Mat2) -> i64 + Sync>(n: u32, f: F) -> Self {
        let size = 1usize << (4 * n);
        let values = (0..size)
            .into_par_iter()
            .map(|i| CycInt::from_int(n, f(&unpack(i, n))))
            .collect();
        FiniteMatFn { n, values }
    }

    pub fn zero(n: u32) -> Self {
        Self::from_int_fn(n, |_| 0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, x: &Mat2) -> &CycInt {
        &self.values[pack(x, self.n)]
    }

    /// Integer values, if every value is a rational integer.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.values.iter().map(|v| v.as_int()).collect()
    }

    pub fn scale(&self, s: i64) -> Self {
        FiniteMatFn {
            n: self.n,
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FiniteMatFn {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// x ↦ f(−x)
    pub fn reflect(&self) -> Self {
        let n = self.n;
        let m = mask(n);
        let values = (0..self.len())
            .map(|i| {
                let x = unpack(i, n);
                self.values[pack(&x.map(|e| e.wrapping_neg() & m), n)].clone()
            })
            .collect();
        FiniteMatFn { n, values }
    }
}

/// One-dimensional DFT g ↦ Σ_v g(v) ζ^{uv} along the axis with the given stride.
fn dft_axis(vals: &[CycInt], n: u32, stride: usize) -> Vec<CycInt> {
    let q = side(n);
    let size = vals.len();
    let mut out = vec![CycInt::zero(n); size];
    out.par_iter_mut().enumerate().for_each(|(idx, o)| {
        let u = (idx / stride) % q;
        let base = idx - u * stride;
        for v in 0..q {
            let x = &vals[base + v * stride];
            if !x.is_zero() {
                o.add_shifted(x, (u * v) as i64);
            }
        }
    });
    out
}

/// Ff(x) = Σ_y f(y) ζ^{(x,y)} with (x, y) = det(x + y) − det x − det y.
pub fn ft_m2(f: &FiniteMatFn) -> FiniteMatFn {
    let n = f.n;
    let q = side(n);
    let mut t = f.values.clone();
    for stride in [q * q * q, q * q, q, 1] {
        t = dft_axis(&t, n, stride);
    }
    // (x, y) = x11 y22 + x22 y11 − x12 y21 − x21 y12
    let m = mask(n);
    let values = (0..f.len())
        .into_par_iter()
        .map(|i| {
            let x = unpack(i, n);
            let u = [x[3], x[2].wrapping_neg() & m, x[1].wrapping_neg() & m, x[0]];
            t[pack(&u, n)].clone()
        })
        .collect();
    FiniteMatFn { n, values }
}

/// Reference transform by the defining sum; quadratic cost.
pub fn ft_m2_naive(f: &FiniteMatFn) -> FiniteMatFn {
    let n = f.n;
    let m = mask(n);
    let values = (0..f.len())
        .into_par_iter()
        .map(|i| {
            let x = unpack(i, n);
            let mut acc = CycInt::zero(n);
            for (j, v) in f.values.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let y = unpack(j, n);
                let s: [u64; 4] = std::array::from_fn(|t| x[t].wrapping_add(y[t]) & m);
                let e = m2_det(&s, n).wrapping_sub(m2_det(&x, n)).wrapping_sub(m2_det(&y, n)) & m;
                acc.add_shifted(v, e as i64);
            }
            acc
        })
        .collect();
    FiniteMatFn { n, values }
}

pub fn gl2_order(n: u32) -> u64 {
    6u64 << (4 * (n - 1))
}

fn inv_unit(u: u64, n: u32) -> u64 {
    let m = mask(n);
    (1..=m).step_by(2).find(|&v| u.wrapping_mul(v) & m == 1).unwrap()
}

/// Generators of GL₂(Z/2^N) with their inverses.
pub fn gl2_generators(n: u32) -> Vec<(Mat2, Mat2)> {
    let m = mask(n);
    let neg = |x: u64| x.wrapping_neg() & m;
    let five = 5 & m;
    vec![
        ([1, 1, 0, 1], [1, neg(1), 0, 1]),
        ([1, 0, 1, 1], [1, 0, neg(1), 1]),
        ([neg(1), 0, 0, 1], [neg(1), 0, 0, 1]),
        ([five, 0, 0, 1], [inv_unit(five, n), 0, 0, 1]),
    ]
}

/// Conjugacy orbits of GL₂(Z/2^N) on M₂(Z/2^N): orbit id per packed point and
/// the orbits in order of their least element.
pub fn conjugacy_orbits(n: u32) -> (Vec<u32>, Vec<Vec<u32>>) {
    let size = 1usize << (4 * n);
    let gens = gl2_generators(n);
    let mut id = vec![u32::MAX; size];
    let mut orbits = Vec::new();
    for start in 0..size {
        if id[start] != u32::MAX {
            continue;
        }
        let o = orbits.len() as u32;
        let mut members = vec![start as u32];
        id[start] = o;
        let mut k = 0;
        while k < members.len() {
            let x = unpack(members[k] as usize, n);
            for (g, gi) in &gens {
                let y = pack(&m2_mul(&m2_mul(g, &x, n), gi, n), n);
                if id[y] == u32::MAX {
                    id[y] = o;
                    members.push(y as u32);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        orbits.push(members);
    }
    (id, orbits)
}

/// Σ_{g ∈ GL₂} f(g⁻¹xg), computed orbitwise as |G|/|O|·Σ_O f.
pub fn conjugation_sum(f: &[i64], n: u32) -> Vec<i64> {
    let (id, orbits) = conjugacy_orbits(n);
    let g = gl2_order(n) as i64;
    let sums: Vec<i64> = orbits
        .iter()
        .map(|o| {
            let s: i64 = o.iter().map(|&i| f[i as usize]).sum();
            s * (g / o.len() as i64)
        })
        .collect();
    id.iter().map(|&o| sums[o as usize]).collect()
}

/// Same sum over every group element; for small N.
pub fn conjugation_sum_naive(f: &[i64], n: u32) -> Vec<i64> {
    let size = 1usize << (4 * n);
    let group: Vec<Mat2> = (0..size)
        .map(|i| unpack(i, n))
        .filter(|g| m2_det(g, n) % 2 == 1)
        .collect();
    (0..size)
        .into_par_iter()
        .map(|i| {
            let x = unpack(i, n);
            group
                .iter()
                .map(|g| {
                    let d = m2_det(g, n);
                    let di = inv_unit(d, n);
                    let m = mask(n);
                    let gi = [
                        g[3].wrapping_mul(di) & m,
                        g[1].wrapping_neg().wrapping_mul(di) & m,
                        g[2].wrapping_neg().wrapping_mul(di) & m,
                        g[0].wrapping_mul(di) & m,
                    ];
                    f[pack(&m2_mul(&m2_mul(&gi, &x, n), g, n), n)]
                })
                .sum()
        })
        .collect()
}
