use super::quaternion::{rat, Quaternion};
use crate::linalg::{self, IMat, QMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Rank-4 lattice in B: rows of `basis` over the common denominator `den`,
/// in the coordinates (1, i, j, k). `from_generators` yields the Hermite normal
/// form; `from_basis` keeps the given basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QLattice {
    basis: [[BigInt; 4]; 4],
    den: BigInt,
}

#[derive(Serialize)]
pub struct LatticeJson {
    pub basis: Vec<Vec<String>>,
    pub den: String,
}

impl QLattice {
    /// Lattice spanned by the given elements; they must span B over Q.
    pub fn from_generators(gens: &[Quaternion]) -> QLattice {
        let mut den = BigInt::one();
        for g in gens {
            den = den.lcm(&g.denominator());
        }
        let rows: IMat = gens
            .iter()
            .map(|g| {
                g.c.iter()
                    .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let h = linalg::hnf(&rows);
        assert_eq!(h.len(), 4, "generators do not span a full-rank lattice");
        Self::normalize(h, den)
    }

    /// Lattice with exactly this basis (must be linearly independent).
    pub fn from_basis(b: &[Quaternion; 4]) -> QLattice {
        let mut den = BigInt::one();
        for g in b {
            den = den.lcm(&g.denominator());
        }
        let rows: IMat = b
            .iter()
            .map(|g| {
                g.c.iter()
                    .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        assert!(!linalg::det_i(&rows).is_zero(), "basis is linearly dependent");
        QLattice {
            basis: std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].clone())),
            den,
        }
    }

    /// Canonical Hermite-normal-form representative of the same lattice.
    pub fn hnf(&self) -> QLattice {
        let rows: IMat = self.basis.iter().map(|r| r.to_vec()).collect();
        Self::normalize(linalg::hnf(&rows), self.den.clone())
    }

    pub fn same_lattice(&self, other: &QLattice) -> bool {
        self.hnf() == other.hnf()
    }

    fn normalize(h: IMat, den: BigInt) -> QLattice {
        let mut g = den.clone();
        for r in &h {
            for x in r {
                g = g.gcd(x);
            }
        }
        let den = &den / &g;
        let rows: IMat = h.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect();
        let rows = linalg::hnf(&rows);
        QLattice {
            basis: std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].clone())),
            den,
        }
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn basis_int(&self) -> &[[BigInt; 4]; 4] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Quaternion> {
        self.basis
            .iter()
            .map(|r| Quaternion::from_scaled(r, &self.den))
            .collect()
    }

    fn basis_q(&self) -> QMat {
        self.basis()
            .into_iter()
            .map(|q| q.c.to_vec())
            .collect()
    }

    /// Gram matrix of ⟨x, y⟩ = trd(x ȳ) on the basis.
    pub fn gram(&self) -> QMat {
        let b = self.basis();
        (0..4)
            .map(|i| (0..4).map(|j| b[i].pair(&b[j])).collect())
            .collect()
    }

    /// Integer Gram of trd(x ȳ)/scale; None if not integral.
    pub fn gram_scaled_int(&self, scale: &BigRational) -> Option<Vec<Vec<i64>>> {
        let g = self.gram();
        let mut out = vec![vec![0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = &g[i][j] / scale;
                if !linalg::is_integral(&v) {
                    return None;
                }
                out[i][j] = linalg::to_i64(&v.to_integer());
            }
        }
        Some(out)
    }

    /// Coordinates of x in the basis, if x lies in the lattice.
    pub fn coords(&self, x: &Quaternion) -> Option<[BigInt; 4]> {
        let inv = linalg::inverse_q(&self.basis_q())?;
        let c = linalg::vec_mul_q(&x.c, &inv);
        if c.iter().all(linalg::is_integral) {
            Some(std::array::from_fn(|t| c[t].to_integer()))
        } else {
            None
        }
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_lattice(&self, other: &QLattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    pub fn element(&self, c: &[i64]) -> Quaternion {
        let b = self.basis();
        let mut acc = Quaternion::zero();
        for (x, bi) in c.iter().zip(b.iter()) {
            acc = &acc + &bi.scale(&rat(*x, 1));
        }
        acc
    }

    /// Lattice spanned by all products x·y.
    pub fn mul(&self, other: &QLattice) -> QLattice {
        let a = self.basis();
        let b = other.basis();
        let mut gens = Vec::with_capacity(16);
        for x in &a {
            for y in &b {
                gens.push(x * y);
            }
        }
        QLattice::from_generators(&gens)
    }

    pub fn conj(&self) -> QLattice {
        let gens: Vec<Quaternion> = self.basis().iter().map(|x| x.conj()).collect();
        QLattice::from_generators(&gens)
    }

    pub fn scale(&self, r: &BigRational) -> QLattice {
        let gens: Vec<Quaternion> = self.basis().iter().map(|x| x.scale(r)).collect();
        QLattice::from_generators(&gens)
    }

    /// Covolume relative to Z⟨1, i, j, k⟩.
    pub fn covolume(&self) -> BigRational {
        let d = linalg::det_i(&self.basis.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        BigRational::new(d.abs(), self.den.pow(4))
    }

    /// Reduced norm of the lattice relative to an order O containing it up to
    /// scaling: sqrt of the covolume ratio.
    pub fn norm_relative_to(&self, order: &QLattice) -> BigRational {
        let ratio = self.covolume() / order.covolume();
        rational_sqrt(&ratio).expect("covolume ratio is not a square")
    }

    pub fn is_ring_closed(&self) -> bool {
        let b = self.basis();
        b.iter().all(|x| b.iter().all(|y| self.contains(&(x * y))))
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            basis: self
                .basis
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
            den: self.den.to_string(),
        }
    }

    /// Sort key: canonical HNF entries.
    pub fn sort_key(&self) -> Vec<BigInt> {
        let h = self.hnf();
        let mut k = vec![h.den.clone()];
        for r in &h.basis {
            k.extend(r.iter().cloned());
        }
        k
    }
}

pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// The maximal order with basis {1, i, (i+j)/2, (1+k)/2}.
pub fn maximal_order() -> QLattice {
    let b = maximal_order_basis();
    QLattice::from_basis(&[b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()])
}

/// The declared basis of the maximal order, in its documented order.
pub fn maximal_order_basis() -> Vec<Quaternion> {
    let h = rat(1, 2);
    vec![
        Quaternion::one(),
        Quaternion::i(),
        (Quaternion::i() + Quaternion::j()).scale(&h),
        (Quaternion::one() + Quaternion::k()).scale(&h),
    ]
}

/// Determinant of the trd(x ȳ) Gram matrix.
pub fn gram_det(l: &QLattice) -> BigRational {
    linalg::det_q(&l.gram())
}
