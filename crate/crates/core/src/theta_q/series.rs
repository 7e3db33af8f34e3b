use crate::class_graph::AlgNum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Coefficient ring for truncated q-series.
pub trait Coeff: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coeff for AlgNum {
    fn zero() -> Self {
        AlgNum::zero()
    }
    fn is_zero(&self) -> bool {
        AlgNum::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Where a series came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SeriesMeta {
    pub object: String,
    /// Class index or eigenfunction index, when relevant.
    pub index: Option<usize>,
    /// Exponents have been multiplied by this factor.
    pub dilation: u64,
}

/// Σ a_n q^n truncated at `max_exp` (inclusive). Missing keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSeries<T: Coeff> {
    pub coeffs: BTreeMap<u64, T>,
    pub max_exp: u64,
    pub meta: SeriesMeta,
}

impl<T: Coeff> CoeffSeries<T> {
    pub fn new(max_exp: u64, meta: SeriesMeta) -> Self {
        CoeffSeries {
            coeffs: BTreeMap::new(),
            max_exp,
            meta,
        }
    }

    pub fn from_dense(values: &[T], max_exp: u64, meta: SeriesMeta) -> Self {
        let mut s = Self::new(max_exp, meta);
        for (n, v) in values.iter().enumerate().take(max_exp as usize + 1) {
            s.set(n as u64, v.clone());
        }
        s
    }

    pub fn get(&self, n: u64) -> T {
        self.coeffs.get(&n).cloned().unwrap_or_else(T::zero)
    }

    /// Sets a_n; exponents beyond the bound are dropped.
    pub fn set(&mut self, n: u64, v: T) {
        if n > self.max_exp {
            return;
        }
        if v.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let max_exp = self.max_exp.min(other.max_exp);
        let mut out = Self::new(max_exp, self.meta.clone());
        for (&n, v) in self.coeffs.range(..=max_exp) {
            out.set(n, v.clone());
        }
        for (&n, v) in other.coeffs.range(..=max_exp) {
            let s = out.get(n).add(v);
            out.set(n, s);
        }
        out
    }

    /// Cauchy product, truncated at the smaller bound.
    pub fn mul(&self, other: &Self) -> Self {
        let max_exp = self.max_exp.min(other.max_exp);
        let meta = SeriesMeta {
            object: format!("({})·({})", self.meta.object, other.meta.object),
            index: None,
            dilation: 1,
        };
        let mut out = Self::new(max_exp, meta);
        for (&a, x) in self.coeffs.range(..=max_exp) {
            for (&b, y) in other.coeffs.range(..=max_exp - a) {
                let s = out.get(a + b).add(&x.mul(y));
                out.set(a + b, s);
            }
        }
        out
    }

    /// f(q) ↦ f(q^d), truncated at `max_exp`. Exponents up to
    /// d·(self.max_exp + 1) − 1 are determined.
    pub fn dilate(&self, d: u64, max_exp: u64) -> Self {
        assert!(d > 0);
        let mut meta = self.meta.clone();
        meta.dilation = meta.dilation.max(1) * d;
        let known = (self.max_exp + 1).saturating_mul(d) - 1;
        let mut out = Self::new(max_exp.min(known), meta);
        for (&n, v) in &self.coeffs {
            out.set(n * d, v.clone());
        }
        out
    }
}

/// Σ_{m ∈ Z} q^{m²}.
pub fn full_theta_coeffs(max_exp: u64) -> CoeffSeries<i64> {
    let meta = SeriesMeta {
        object: "theta_full".into(),
        index: None,
        dilation: 1,
    };
    let mut s = CoeffSeries::new(max_exp, meta);
    s.set(0, 1);
    let mut m = 1u64;
    while m * m <= max_exp {
        s.set(m * m, 2);
        m += 1;
    }
    s
}

/// Σ_{m odd} q^{m²}: coefficient 2 at each odd square.
pub fn jacobi_coeffs(max_exp: u64) -> CoeffSeries<i64> {
    let meta = SeriesMeta {
        object: "theta".into(),
        index: None,
        dilation: 1,
    };
    let mut s = CoeffSeries::new(max_exp, meta);
    let mut m = 1u64;
    while m * m <= max_exp {
        s.set(m * m, 2);
        m += 2;
    }
    s
}

pub fn int_to_rational(s: &CoeffSeries<i64>) -> CoeffSeries<BigRational> {
    CoeffSeries {
        coeffs: s
            .coeffs
            .iter()
            .map(|(&n, &v)| (n, BigRational::from_integer(BigInt::from(v))))
            .collect(),
        max_exp: s.max_exp,
        meta: s.meta.clone(),
    }
}

pub fn int_to_alg(s: &CoeffSeries<i64>) -> CoeffSeries<AlgNum> {
    CoeffSeries {
        coeffs: s.coeffs.iter().map(|(&n, &v)| (n, AlgNum::from_int(v))).collect(),
        max_exp: s.max_exp,
        meta: s.meta.clone(),
    }
}
