use crate::error::{Error, Result};
use crate::linalg::{self, IMat};
use crate::quat_core::split::{self, signed, Mat2};
use crate::quat_core::{maximal_order, split_order, Form, QLattice, Quaternion, TwoAdicSplitting};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Precision of the per-class splittings kept in the class set.
pub const SPLIT_PRECISION: u32 = 16;

/// Ternary lattice S⁰ = trace-zero part of Z + 2R_E, in an adapted basis ℓ.
#[derive(Clone, Debug)]
pub struct Ternary {
    /// trd(ℓ_i ℓ̄_j); the form value of v is vᵀ gram v / 2 = nrd.
    pub gram: Vec<Vec<i64>>,
    pub basis: [Quaternion; 3],
    pub frame: CharFrame,
}

/// Mod-4 matrix model of S⁰: ρ(ℓ(x, y, z)) ≡ [[x, 2y], [2z, −x]] (mod 4).
#[derive(Clone, Debug)]
pub struct CharFrame {
    /// Coordinates of ℓ_i in the basis of the left order.
    pub order_coords: [[i64; 4]; 3],
    /// ρ(ℓ_i) mod 4.
    pub rho_mod4: [Mat2; 3],
    /// Lines of (Z/2)² generating the order-2 subgroups v₁, v₂, v₃.
    pub child_labels: [[u64; 2]; 3],
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub ideal: QLattice,
    pub ideal_norm: BigInt,
    pub left_order: QLattice,
    pub w: u32,
    /// trd Gram of the left order (form value = nrd).
    pub order_gram: Vec<Vec<i64>>,
    pub split: TwoAdicSplitting,
    pub ternary: Ternary,
}

#[derive(Clone, Debug)]
pub struct ClassSet {
    pub order: QLattice,
    pub classes: Vec<ClassRecord>,
    pub mass: BigRational,
}

fn int_gram(l: &QLattice, scale: &BigInt) -> Vec<Vec<i64>> {
    l.gram_scaled_int(&BigRational::from_integer(scale.clone()))
        .expect("scaled Gram is not integral")
}

/// Right ideal {x ∈ R : ρ(x) has image in C} for the cyclic subgroup C of
/// (Z/2^k)² generated by `g`.
pub fn ideal_for_line(r: &QLattice, sp: &TwoAdicSplitting, g: [u64; 2], k: u32) -> QLattice {
    assert!(k <= sp.precision);
    let basis = r.basis();
    if k == 0 {
        return r.clone();
    }
    // α with ρ(α) ≡ [[g0, 0], [g1, 0]] (mod 2^k); then I = αR + 2^k R.
    let p = sp.precision;
    let a: IMat = sp
        .images
        .iter()
        .map(|img| img.iter().map(|&e| BigInt::from(signed(e, p))).collect())
        .collect();
    let inv = linalg::inverse_q(&linalg::qmat_from_int(&a)).expect("order images not independent");
    let target: Vec<BigRational> = [g[0], 0, g[1], 0]
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    let c = linalg::vec_mul_q(&target, &inv);
    let coords: Vec<i64> = c
        .iter()
        .map(|x| split::red_rational(x, k).expect("odd determinant expected") as i64)
        .collect();
    let alpha = r.element(&coords);
    let two_k = BigRational::from_integer(BigInt::one() << k);
    let mut gens: Vec<Quaternion> = basis.iter().map(|b| &alpha * b).collect();
    gens.extend(basis.iter().map(|b| b.scale(&two_k)));
    QLattice::from_generators(&gens)
}

/// Cyclic subgroups of (Z/2^k)² of order 2^k, as generators (1, t) or (2u, 1).
pub fn lines(k: u32) -> Vec<[u64; 2]> {
    let n = 1u64 << k;
    let mut out: Vec<[u64; 2]> = (0..n).map(|t| [1, t]).collect();
    if k > 0 {
        out.extend((0..n / 2).map(|u| [2 * u, 1]));
    }
    out
}

/// I ~ J iff J·Ī contains an element of reduced norm nrd(I)·nrd(J).
pub fn equivalent(i: &QLattice, ni: &BigInt, j: &QLattice, nj: &BigInt) -> bool {
    let l = j.mul(&i.conj());
    let g = int_gram(&l, &(ni * nj));
    let form = Form::new(&g).expect("ideal form");
    let mut found = false;
    form.for_each(1, |_, q| {
        if q == 1 {
            found = true;
        }
    });
    found
}

pub fn left_order(i: &QLattice, ni: &BigInt) -> QLattice {
    i.mul(&i.conj()).scale(&BigRational::new(BigInt::one(), ni.clone()))
}

pub fn unit_count(gram: &[Vec<i64>]) -> usize {
    let form = Form::new(gram).expect("order form");
    let mut n = 0;
    form.for_each(1, |_, q| {
        if q == 1 {
            n += 1
        }
    });
    n
}

fn mass_target(p: i64) -> BigRational {
    BigRational::new(BigInt::from(p - 1), BigInt::from(12))
}

/// Ideal classes of the maximal order by a walk over 2-power neighbors,
/// stopping when the mass formula is saturated.
pub fn build_class_set() -> Result<ClassSet> {
    let r = maximal_order();
    let sp = split_order(&r, SPLIT_PRECISION)?;
    let target = mass_target(23);
    let mut found: Vec<(QLattice, BigInt, QLattice, u32)> = Vec::new();
    let mut mass = BigRational::zero();
    'outer: for k in 0..=8u32 {
        for g in lines(k) {
            let ideal = ideal_for_line(&r, &sp, g, k);
            let n = BigInt::one() << k;
            debug_assert_eq!(ideal.norm_relative_to(&r), BigRational::from_integer(n.clone()));
            if found.iter().any(|(j, nj, _, _)| equivalent(&ideal, &n, j, nj)) {
                continue;
            }
            let lo = left_order(&ideal, &n);
            let units = unit_count(&int_gram(&lo, &BigInt::one()));
            let w = (units / 2) as u32;
            mass += BigRational::new(BigInt::one(), BigInt::from(w));
            found.push((ideal, n, lo, w));
            if mass == target {
                break 'outer;
            }
            if mass > target {
                return Err(Error::Internal("mass exceeded the mass formula".into()));
            }
        }
    }
    if mass != target {
        return Err(Error::Internal("class walk did not reach the full mass".into()));
    }
    found.sort_by_key(|a| (a.3, a.0.sort_key()));
    let mut classes = Vec::new();
    for (ideal, n, lo, w) in found {
        let split = split_order(&lo, SPLIT_PRECISION)?;
        let ternary = ternary_lattice(&lo, &split)?;
        classes.push(ClassRecord {
            order_gram: int_gram(&lo, &BigInt::one()),
            ideal,
            ideal_norm: n,
            left_order: lo,
            w,
            split,
            ternary,
        });
    }
    Ok(ClassSet { order: r, classes, mass })
}

/// Column operations over Z/4 reducing `t` to the identity; returns the
/// integral unimodular matrix U with t·U ≡ I (mod 4).
fn lift_inverse_mod4(t: &[[i64; 3]; 3]) -> Result<[[i64; 3]; 3]> {
    let mut t = *t;
    let mut u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let m4 = |x: i64| x.rem_euclid(4);
    for r in 0..3 {
        let j = (r..3)
            .find(|&j| m4(t[r][j]) % 2 == 1)
            .ok_or_else(|| Error::Internal("coordinate matrix not invertible mod 2".into()))?;
        if j != r {
            for row in t.iter_mut().chain(u.iter_mut()) {
                row.swap(r, j);
            }
        }
        if m4(t[r][r]) == 3 {
            for row in t.iter_mut().chain(u.iter_mut()) {
                row[r] = -row[r];
            }
        }
        for j in 0..3 {
            if j == r {
                continue;
            }
            let f = m4(t[r][j]);
            if f != 0 {
                for row in t.iter_mut().chain(u.iter_mut()) {
                    row[j] -= f * row[r];
                }
            }
        }
    }
    for (r, row) in t.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            if m4(x) != i64::from(r == c) {
                return Err(Error::Internal("mod-4 reduction failed".into()));
            }
        }
    }
    Ok(u)
}

/// (a, b, c) with ρ(β) = [[a, 2b], [2c, −a]], as signed integers.
fn abc(img: &Mat2, m: u32) -> Result<[i64; 3]> {
    let (a, b2, c2) = (signed(img[0], m), signed(img[1], m), signed(img[2], m));
    if split::m2_trace(img, m) != 0 {
        return Err(Error::Internal("element of S⁰ has nonzero trace".into()));
    }
    if b2 % 2 != 0 || c2 % 2 != 0 {
        return Err(Error::Internal("element of S⁰ has odd off-diagonal".into()));
    }
    Ok([a, b2 / 2, c2 / 2])
}

pub fn ternary_lattice(order: &QLattice, sp: &TwoAdicSplitting) -> Result<Ternary> {
    let ob = order.basis();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut gens = vec![Quaternion::one()];
    gens.extend(ob.iter().map(|b| b.scale(&two)));
    let s = QLattice::from_generators(&gens);
    let sb = s.basis();
    let tr: Vec<BigInt> = sb.iter().map(|b| b.trd().to_integer()).collect();
    let ker = linalg::integer_kernel(&tr);
    let beta: Vec<Quaternion> = ker
        .iter()
        .map(|row| {
            let mut acc = Quaternion::zero();
            for (c, b) in row.iter().zip(&sb) {
                acc = &acc + &b.scale(&BigRational::from_integer(c.clone()));
            }
            acc
        })
        .collect();
    let m = sp.precision;
    let mut t = [[0i64; 3]; 3];
    for (i, b) in beta.iter().enumerate() {
        let v = abc(&sp.image_of(b)?, m)?;
        for r in 0..3 {
            t[r][i] = v[r];
        }
    }
    let u = lift_inverse_mod4(&t)?;
    let basis: [Quaternion; 3] = std::array::from_fn(|i| {
        let mut acc = Quaternion::zero();
        for (j, b) in beta.iter().enumerate() {
            acc = &acc + &b.scale(&BigRational::from_integer(BigInt::from(u[j][i])));
        }
        acc
    });
    let gram: Vec<Vec<i64>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| linalg::to_i64(&basis[i].pair(&basis[j]).to_integer()))
                .collect()
        })
        .collect();
    let mut order_coords = [[0i64; 4]; 3];
    let mut rho_mod4 = [[0u64; 4]; 3];
    for i in 0..3 {
        let c = order
            .coords(&basis[i])
            .ok_or_else(|| Error::Internal("S⁰ not inside the order".into()))?;
        order_coords[i] = std::array::from_fn(|t| linalg::to_i64(&c[t]));
        rho_mod4[i] = split::m2_reduce(&sp.image(&order_coords[i]), 2);
    }
    Ok(Ternary {
        gram,
        basis,
        frame: CharFrame {
            order_coords,
            rho_mod4,
            child_labels: [[1, 1], [1, 0], [0, 1]],
        },
    })
}

impl Ternary {
    pub fn element(&self, c: &[i64; 3]) -> Quaternion {
        let mut acc = Quaternion::zero();
        for (x, b) in c.iter().zip(&self.basis) {
            acc = &acc + &b.scale(&BigRational::from_integer(BigInt::from(*x)));
        }
        acc
    }

    /// Coordinates in the adapted basis, if β ∈ S⁰.
    pub fn coords(&self, beta: &Quaternion) -> Option<[i64; 3]> {
        if !beta.trd().is_zero() {
            return None;
        }
        let g: linalg::QMat = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let inv = linalg::inverse_q(&g)?;
        let rhs: Vec<BigRational> = self.basis.iter().map(|b| b.pair(beta)).collect();
        let c = linalg::vec_mul_q(&rhs, &inv);
        if !c.iter().all(linalg::is_integral) {
            return None;
        }
        let c: [i64; 3] = std::array::from_fn(|t| linalg::to_i64(&c[t].to_integer()));
        (self.element(&c) == *beta).then_some(c)
    }

    /// Mod-4 model of ℓ(c) from the frame: [[x, 2y], [2z, −x]] (mod 4).
    pub fn rho_mod4(&self, c: &[i64; 3]) -> Mat2 {
        let mut acc = [0u64; 4];
        for (x, r) in c.iter().zip(&self.frame.rho_mod4) {
            acc = split::m2_add(&acc, &split::m2_scale(r, *x, 2), 2);
        }
        acc
    }

    /// Coordinates of ℓ(c) in the basis of the left order.
    pub fn order_coords(&self, c: &[i64; 3]) -> [i64; 4] {
        let oc = &self.frame.order_coords;
        std::array::from_fn(|t| c[0] * oc[0][t] + c[1] * oc[1][t] + c[2] * oc[2][t])
    }
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.w).collect()
    }
}
