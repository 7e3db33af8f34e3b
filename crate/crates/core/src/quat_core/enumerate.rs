//! Fincke–Pohst enumeration of lattice points of bounded norm.
//!
//! Forms are given by an even integer Gram matrix `b`; the value of `v` is
//! Q(v) = vᵀ b v / 2. Floating point only bounds the search box; every
//! reported point is checked in exact integer arithmetic.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Form {
    b: Vec<Vec<i64>>,
    n: usize,
    // Cholesky-style data: Q(v) = Σ qd[i] (v_i + Σ_{j>i} qu[i][j] v_j)²
    qd: Vec<f64>,
    qu: Vec<Vec<f64>>,
}

impl Form {
    pub fn new(b: &[Vec<i64>]) -> Result<Form> {
        let n = b.len();
        for (i, row) in b.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument("Gram matrix is not square".into()));
            }
            if row[i] % 2 != 0 {
                return Err(Error::InvalidArgument("Gram matrix must have even diagonal".into()));
            }
            for j in 0..n {
                if b[j][i] != row[j] {
                    return Err(Error::InvalidArgument("Gram matrix is not symmetric".into()));
                }
            }
        }
        let mut q: Vec<Vec<f64>> = b
            .iter()
            .map(|r| r.iter().map(|&x| x as f64 / 2.0).collect())
            .collect();
        for i in 0..n {
            if q[i][i] <= 0.0 {
                return Err(Error::InvalidArgument("Gram matrix is not positive definite".into()));
            }
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        let qd = (0..n).map(|i| q[i][i]).collect();
        let qu = (0..n)
            .map(|i| (0..n).map(|j| if j > i { q[i][j] } else { 0.0 }).collect())
            .collect();
        Ok(Form { b: b.to_vec(), n, qd, qu })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// Exact Q(v).
    pub fn value(&self, v: &[i64]) -> i64 {
        let mut s: i128 = 0;
        for i in 0..self.n {
            let mut t: i128 = 0;
            for j in 0..self.n {
                t += self.b[i][j] as i128 * v[j] as i128;
            }
            s += t * v[i] as i128;
        }
        (s / 2) as i64
    }

    fn slack(bound: i64) -> f64 {
        1e-7 * (1.0 + bound as f64)
    }

    /// Range of the last coordinate over all vectors with Q ≤ bound.
    pub fn outer_range(&self, bound: i64) -> std::ops::RangeInclusive<i64> {
        if bound < 0 {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        let i = self.n - 1;
        let r = ((bound as f64 + Self::slack(bound)) / self.qd[i]).sqrt();
        (-r.floor() as i64)..=(r.floor() as i64)
    }

    /// Calls `f(v, Q(v))` for every v with Q(v) ≤ bound, in a fixed order
    /// (last coordinate outermost, each coordinate ascending).
    pub fn for_each<F: FnMut(&[i64], i64)>(&self, bound: i64, mut f: F) {
        for outer in self.outer_range(bound) {
            self.for_each_with_outer(bound, outer, &mut f);
        }
    }

    /// As `for_each`, restricted to vectors whose last coordinate is `outer`.
    pub fn for_each_with_outer<F: FnMut(&[i64], i64)>(&self, bound: i64, outer: i64, f: &mut F) {
        if bound < 0 {
            return;
        }
        let n = self.n;
        let mut v = vec![0i64; n];
        v[n - 1] = outer;
        let i = n - 1;
        let t = bound as f64 + Self::slack(bound) - self.qd[i] * (outer as f64).powi(2);
        if t < 0.0 {
            return;
        }
        if n == 1 {
            let q = self.value(&v);
            if q <= bound {
                f(&v, q);
            }
            return;
        }
        self.recurse(bound, i - 1, t, &mut v, f);
    }

    fn recurse<F: FnMut(&[i64], i64)>(&self, bound: i64, i: usize, t: f64, v: &mut [i64], f: &mut F) {
        let n = self.n;
        let mut c = 0.0;
        for j in i + 1..n {
            c -= self.qu[i][j] * v[j] as f64;
        }
        let r = (t.max(0.0) / self.qd[i]).sqrt();
        let lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        if i == 0 {
            // Exact evaluation: vᵀbv = b00 x² + 2 x L + C
            let mut l: i128 = 0;
            let mut cc: i128 = 0;
            for j in 1..n {
                l += self.b[0][j] as i128 * v[j] as i128;
                let mut s: i128 = 0;
                for k in 1..n {
                    s += self.b[j][k] as i128 * v[k] as i128;
                }
                cc += s * v[j] as i128;
            }
            let b00 = self.b[0][0] as i128;
            let lim = 2 * bound as i128;
            for x in lo..=hi {
                let xx = x as i128;
                let q2 = b00 * xx * xx + 2 * xx * l + cc;
                if q2 <= lim {
                    v[0] = x;
                    f(v, (q2 / 2) as i64);
                }
            }
            v[0] = 0;
            return;
        }
        for x in lo..=hi {
            let d = x as f64 - c;
            let tt = t - self.qd[i] * d * d;
            if tt < 0.0 {
                continue;
            }
            v[i] = x;
            self.recurse(bound, i - 1, tt, v, f);
        }
        v[i] = 0;
    }

    /// Representation counts r(0..=bound).
    pub fn theta_counts(&self, bound: i64) -> Vec<u64> {
        let mut out = vec![0u64; (bound.max(-1) + 1) as usize];
        self.for_each(bound, |_, q| out[q as usize] += 1);
        out
    }
}

fn congruence(g: &[Vec<i64>], u: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut s: i128 = 0;
                    for i in 0..n {
                        for j in 0..n {
                            s += u[i][a] as i128 * g[i][j] as i128 * u[j][b] as i128;
                        }
                    }
                    i64::try_from(s).expect("reduced Gram overflows i64")
                })
                .collect()
        })
        .collect()
}

/// LLL reduction (δ = 0.99) of a positive definite Gram matrix. Returns the
/// reduced Gram Uᵀ g U and the unimodular U whose columns are the new basis
/// vectors in the old coordinates.
pub fn lll_reduce(g: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = g.len();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let gso = |h: &[Vec<i64>]| {
        let mut mu = vec![vec![0f64; n]; n];
        let mut bb = vec![0f64; n];
        for i in 0..n {
            for j in 0..i {
                let mut v = h[i][j] as f64;
                for k in 0..j {
                    v -= mu[j][k] * mu[i][k] * bb[k];
                }
                mu[i][j] = v / bb[j];
            }
            let mut v = h[i][i] as f64;
            for k in 0..i {
                v -= mu[i][k] * mu[i][k] * bb[k];
            }
            bb[i] = v;
        }
        (mu, bb)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n {
        guard += 1;
        assert!(guard < 100_000, "LLL did not terminate");
        for j in (0..k).rev() {
            let h = congruence(g, &u);
            let (mu, _) = gso(&h);
            let r = mu[k][j].round() as i64;
            if r != 0 {
                for row in u.iter_mut() {
                    row[k] -= r * row[j];
                }
            }
        }
        let h = congruence(g, &u);
        let (mu, bb) = gso(&h);
        if bb[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bb[k - 1] {
            k += 1;
        } else {
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        }
    }
    (congruence(g, &u), u)
}

/// All v with Q(v) ≤ bound, each once, sorted lexicographically.
pub fn short_vectors(gram: &[Vec<i64>], bound: i64) -> Result<Vec<(Vec<i64>, i64)>> {
    let form = Form::new(gram)?;
    let mut out = Vec::new();
    form.for_each(bound, |v, q| out.push((v.to_vec(), q)));
    out.sort();
    Ok(out)
}

/// Vectors with Q(v) exactly equal to `value`, sorted lexicographically.
pub fn vectors_of_value(gram: &[Vec<i64>], value: i64) -> Result<Vec<Vec<i64>>> {
    let form = Form::new(gram)?;
    let mut out = Vec::new();
    form.for_each(value, |v, q| {
        if q == value {
            out.push(v.to_vec())
        }
    });
    out.sort();
    Ok(out)
}
