use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// a + b√5 with rational a, b.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgNum {
    pub a: BigRational,
    pub b: BigRational,
}

pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl AlgNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        AlgNum { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        AlgNum { a, b: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// √5
    pub fn sqrt5() -> Self {
        AlgNum {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        AlgNum {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(5.into()) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(AlgNum {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        AlgNum {
            a: &self.a * r,
            b: &self.b * r,
        }
    }

    /// Value under the real embedding with √5 > 0.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap() + self.b.to_f64().unwrap() * 5f64.sqrt()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl Add for &AlgNum {
    type Output = AlgNum;
    fn add(self, y: &AlgNum) -> AlgNum {
        AlgNum {
            a: &self.a + &y.a,
            b: &self.b + &y.b,
        }
    }
}

impl Add for AlgNum {
    type Output = AlgNum;
    fn add(self, y: AlgNum) -> AlgNum {
        &self + &y
    }
}

impl Sub for &AlgNum {
    type Output = AlgNum;
    fn sub(self, y: &AlgNum) -> AlgNum {
        AlgNum {
            a: &self.a - &y.a,
            b: &self.b - &y.b,
        }
    }
}

impl Sub for AlgNum {
    type Output = AlgNum;
    fn sub(self, y: AlgNum) -> AlgNum {
        &self - &y
    }
}

impl Mul for &AlgNum {
    type Output = AlgNum;
    fn mul(self, y: &AlgNum) -> AlgNum {
        let five = BigRational::from_integer(5.into());
        AlgNum {
            a: &self.a * &y.a + five * &self.b * &y.b,
            b: &self.a * &y.b + &self.b * &y.a,
        }
    }
}

impl Mul for AlgNum {
    type Output = AlgNum;
    fn mul(self, y: AlgNum) -> AlgNum {
        &self * &y
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &AlgNum {
    type Output = AlgNum;
    fn div(self, y: &AlgNum) -> AlgNum {
        self * &y.inverse().expect("division by zero in Q(√5)")
    }
}

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum { a: -self.a, b: -self.b }
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return match () {
                _ if self.b.is_one() => write!(f, "√5"),
                _ if (-&self.b).is_one() => write!(f, "-√5"),
                _ => write!(f, "{}√5", self.b),
            };
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let ab = self.b.abs();
        if ab.is_one() {
            write!(f, "{} {} √5", self.a, sign)
        } else {
            write!(f, "{} {} {}√5", self.a, sign, ab)
        }
    }
}

impl Serialize for AlgNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgNum", 2)?;
        st.serialize_field("a", &rat_string(&self.a))?;
        st.serialize_field("b", &rat_string(&self.b))?;
        st.end()
    }
}

/// Null vector of a square matrix of rank n−1 over Q(√5), scaled so that its
/// first nonzero entry is 1.
pub fn null_vector(m: &[Vec<AlgNum>]) -> Option<Vec<AlgNum>> {
    let n = m.len();
    let mut a: Vec<Vec<AlgNum>> = m.to_vec();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].inverse().unwrap();
        for k in 0..n {
            a[row][k] = &a[row][k] * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..n {
                    let t = &f * &a[row][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    if free.len() != 1 {
        return None;
    }
    let f = free[0];
    let mut v = vec![AlgNum::zero(); n];
    v[f] = AlgNum::one();
    for (r, &c) in pivot_cols.iter().enumerate() {
        v[c] = -a[r][f].clone();
    }
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    let inv = lead.inverse()?;
    Some(v.iter().map(|x| x * &inv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat_core::rat;

    #[test]
    fn field_ops() {
        let phi = AlgNum::new(rat(1, 2), rat(1, 2));
        // φ² = φ + 1
        assert_eq!(&phi * &phi, &phi + &AlgNum::one());
        assert_eq!(&(&phi * &phi.inverse().unwrap()), &AlgNum::one());
        assert_eq!(phi.norm(), rat(-1, 1));
        assert_eq!(phi.trace(), rat(1, 1));
        let x = AlgNum::new(rat(3, 7), rat(-2, 5));
        assert_eq!((&phi * &x).conj(), &phi.conj() * &x.conj());
    }

    #[test]
    fn json_shape() {
        let x = AlgNum::new(rat(-1, 2), rat(1, 2));
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"a":"-1/2","b":"1/2"}"#);
    }
}
