use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of Z[ζ] for ζ a primitive 2^N-th root of unity, stored modulo
/// x^{2^{N−1}} + 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycInt {
    n: u32,
    c: Vec<i64>,
}

impl CycInt {
    pub fn zero(n: u32) -> Self {
        assert!(n >= 1);
        CycInt {
            n,
            c: vec![0; 1 << (n - 1)],
        }
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = v;
        z
    }

    /// ζ^k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.add_zeta_multiple(1, k);
        z
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_int(&self) -> Option<i64> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    /// self += v·ζ^k
    #[inline]
    pub fn add_zeta_multiple(&mut self, v: i64, k: i64) {
        let half = self.c.len() as i64;
        let k = k.rem_euclid(2 * half);
        if k < half {
            self.c[k as usize] += v;
        } else {
            self.c[(k - half) as usize] -= v;
        }
    }

    /// self += x·ζ^k
    pub fn add_shifted(&mut self, x: &CycInt, k: i64) {
        for (i, &v) in x.c.iter().enumerate() {
            if v != 0 {
                self.add_zeta_multiple(v, k + i as i64);
            }
        }
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> Self {
        let mut z = Self::zero(self.n);
        for (i, &v) in self.c.iter().enumerate() {
            z.add_zeta_multiple(v, -(i as i64));
        }
        z
    }

    pub fn scale(&self, s: i64) -> Self {
        CycInt {
            n: self.n,
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, y: &CycInt) -> CycInt {
        CycInt {
            n: self.n,
            c: self.c.iter().zip(&y.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, y: &CycInt) -> CycInt {
        CycInt {
            n: self.n,
            c: self.c.iter().zip(&y.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, y: &CycInt) -> CycInt {
        let mut z = CycInt::zero(self.n);
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                z.add_shifted(&y.scale(a), i as i64);
            }
        }
        z
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, v)| match i {
                0 => v.to_string(),
                1 => format!("{v}ζ"),
                _ => format!("{v}ζ^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
