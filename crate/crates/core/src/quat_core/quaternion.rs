use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// i² = A, j² = B in the presentation (A, B) = (−1, −23).
pub const ALG_A: i64 = -1;
pub const ALG_B: i64 = -23;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// x0 + x1·i + x2·j + x3·k with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quaternion {
    pub c: [BigRational; 4],
}

impl Quaternion {
    pub fn new(c: [BigRational; 4]) -> Self {
        Quaternion { c }
    }

    pub fn from_ints(x: [i64; 4]) -> Self {
        Quaternion { c: x.map(rint) }
    }

    /// Coefficients given as numerators over a common denominator.
    pub fn from_scaled(x: &[BigInt; 4], den: &BigInt) -> Self {
        Quaternion {
            c: std::array::from_fn(|t| BigRational::new(x[t].clone(), den.clone())),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints([0; 4])
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn i() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    pub fn j() -> Self {
        Self::from_ints([0, 0, 1, 0])
    }

    pub fn k() -> Self {
        Self::from_ints([0, 0, 0, 1])
    }

    pub fn scalar(r: BigRational) -> Self {
        Quaternion {
            c: [r, BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn conj(&self) -> Self {
        Quaternion {
            c: [
                self.c[0].clone(),
                -self.c[1].clone(),
                -self.c[2].clone(),
                -self.c[3].clone(),
            ],
        }
    }

    pub fn trd(&self) -> BigRational {
        &self.c[0] + &self.c[0]
    }

    pub fn nrd(&self) -> BigRational {
        let a = rint(ALG_A);
        let b = rint(ALG_B);
        &self.c[0] * &self.c[0] - &a * &self.c[1] * &self.c[1] - &b * &self.c[2] * &self.c[2]
            + &a * &b * &self.c[3] * &self.c[3]
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Quaternion {
            c: std::array::from_fn(|t| &self.c[t] * r),
        }
    }

    /// Inverse of a nonzero element, x̄ / nrd(x).
    pub fn inverse(&self) -> Option<Self> {
        let n = self.nrd();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    /// Bilinear form trd(x ȳ).
    pub fn pair(&self, other: &Quaternion) -> BigRational {
        (self * &other.conj()).trd()
    }

    /// Smallest positive integer d with d·x integral.
    pub fn denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for x in &self.c {
            d = num_integer::lcm(d, x.denom().clone());
        }
        d
    }
}

impl<'a> Mul<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn mul(self, y: &'a Quaternion) -> Quaternion {
        let x = &self.c;
        let y = &y.c;
        let a = rint(ALG_A);
        let b = rint(ALG_B);
        let ab = &a * &b;
        Quaternion {
            c: [
                &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
                &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2],
                &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1],
                &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
            ],
        }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, y: Quaternion) -> Quaternion {
        &self * &y
    }
}

impl<'a> Add<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn add(self, y: &'a Quaternion) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| &self.c[t] + &y.c[t]),
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, y: Quaternion) -> Quaternion {
        &self + &y
    }
}

impl<'a> Sub<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn sub(self, y: &'a Quaternion) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| &self.c[t] - &y.c[t]),
        }
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, y: Quaternion) -> Quaternion {
        &self - &y
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion {
            c: self.c.map(|x| -x),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (x, n) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, "{}", if x.is_negative() { " - " } else { " + " })?;
            } else if x.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let ax = x.abs();
            if n.is_empty() || !ax.is_one() {
                write!(f, "{}", ax)?;
            }
            write!(f, "{}", n)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
