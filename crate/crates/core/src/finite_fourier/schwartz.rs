use super::cyclo::CycInt;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use crate::report::Report;
use serde_json::json;

/// Schwartz–Bruhat function on B₂ = M₂(Q₂) supported on 2^{−a}M₂(Z₂) and
/// constant on cosets of 2^b M₂(Z₂). Values are table/den, indexed by
/// X = 2^a x mod 2^{a+b} packed as in `pack`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzB2 {
    pub a: u32,
    pub b: u32,
    pub table: Vec<i64>,
    pub den: i64,
}

fn idx4(x: [u64; 4], k: u32) -> usize {
    let m = (1u64 << k) - 1;
    x.iter().fold(0usize, |acc, &v| (acc << k) | (v & m) as usize)
}

impl SchwartzB2 {
    pub fn from_fn(a: u32, b: u32, den: i64, f: impl Fn([u64; 4]) -> i64) -> Self {
        let k = a + b;
        let q = 1u64 << k;
        let mut table = vec![0; 1 << (4 * k)];
        for x0 in 0..q {
            for x1 in 0..q {
                for x2 in 0..q {
                    for x3 in 0..q {
                        let x = [x0, x1, x2, x3];
                        table[idx4(x, k)] = f(x);
                    }
                }
            }
        }
        SchwartzB2 { a, b, table, den }
    }

    /// 1_{M₂(Z₂)} at the given scales.
    pub fn maximal_order(a: u32, b: u32) -> Self {
        let m = (1u64 << a) - 1;
        Self::from_fn(a, b, 1, |x| x.iter().all(|&v| v & m == 0) as i64)
    }

    /// φ/κ₀: 1_{o^×}(m)·2^{−3}Σ_i χ_i(4β) for x = m + β, m = tr(x)/2.
    pub fn phi_hat() -> Self {
        // X = 4x mod 16
        Self::from_fn(2, 2, 8, |x| {
            let (x11, x12, x21, x22) = (x[0] as i64, x[1] as i64, x[2] as i64, x[3] as i64);
            if (x11 + x22).rem_euclid(16) != 8 {
                return 0;
            }
            if x12 % 2 != 0 || x21 % 2 != 0 {
                return 0;
            }
            let a = ((x11 - x22) / 2).rem_euclid(2);
            let b = (x12 / 2).rem_euclid(2);
            let c = (x21 / 2).rem_euclid(2);
            let s = |e: i64| if e % 2 == 0 { 1 } else { -1 };
            s(b + c) + s(a + c) + s(a + b)
        })
    }

    /// Same function at scales (a+1, b+1).
    pub fn refine(&self) -> Self {
        let k = self.a + self.b;
        Self::from_fn(self.a + 1, self.b + 1, self.den, |x| {
            // X' = 2^{a+1}x mod 2^{k+2}; need 2 | X' and X = X'/2 mod 2^k
            if x.iter().any(|&v| v & 1 == 1) {
                return 0;
            }
            self.table[idx4(x.map(|v| v >> 1), k)]
        })
    }

    pub fn value(&self, x: [u64; 4]) -> BigRational {
        BigRational::new(BigInt::from(self.table[idx4(x, self.a + self.b)]), BigInt::from(self.den))
    }
}

/// ⟨Ad(a(2^n)) f₁, f₂⟩ with vol(M₂(Z₂)) = 1, Ad(g)f(x) = f(g⁻¹xg).
///
/// With x = 2^{−a}X, the integrand is constant on cells where X11, X21, X22 run
/// mod 2^{a+b} and x12 = 2^{n−a}u with u mod 2^{a+b}; each cell has measure
/// 2^{−4b−n}.
pub fn schwartz_ip(n: u32, f1: &SchwartzB2, f2: &SchwartzB2) -> Result<BigRational> {
    if f1.a != f2.a || f1.b != f2.b {
        return Err(Error::InvalidArgument("Schwartz functions at different scales".into()));
    }
    let s = ip_integer_sum(n, f1, f2);
    Ok(BigRational::new(
        BigInt::from(s),
        BigInt::from(f1.den * f2.den) << (4 * f1.b + n),
    ))
}

fn ip_integer_sum(n: u32, f1: &SchwartzB2, f2: &SchwartzB2) -> i128 {
    let k = f1.a + f1.b;
    let q = 1u64 << k;
    let m = q - 1;
    let sh = |v: u64| if n >= 64 { 0 } else { (v << n) & m };
    (0..q)
        .into_par_iter()
        .map(|x11| {
            let mut acc = 0i128;
            for u in 0..q {
                for x21 in 0..q {
                    for x22 in 0..q {
                        let v2 = f2.table[idx4([x11, sh(u), x21, x22], k)];
                        if v2 == 0 {
                            continue;
                        }
                        let v1 = f1.table[idx4([x11, u, sh(x21), x22], k)];
                        acc += (v1 as i128) * (v2 as i128);
                    }
                }
            }
            acc
        })
        .sum()
}

/// Closed form 2^{−4}(2·1_{n=0} + 2^{−n}) for φ/κ₀.
pub fn phi_hat_ip_closed_form(n: u32) -> BigRational {
    let two_n = BigRational::new(BigInt::one(), BigInt::one() << n);
    let base = if n == 0 { BigRational::from_integer(2.into()) } else { BigRational::zero() };
    (base + two_n) / BigRational::from_integer(16.into())
}

/// vol(K a(2^n) K) for Haar measure with vol(K) = 1.
pub fn cartan_volume(n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        3.0 * 2f64.powi(n as i32 - 1)
    }
}

/// Normalized spherical function Ξ(a(2^n)) of PGL₂(Q₂) with T₂-eigenvalue a₂,
/// by the Macdonald formula
/// Ξ(n) = 2^{−n/2}(U_n(t) − ½U_{n−2}(t))/(1 + ½), t = a₂/(2√2).
pub fn macdonald_xi(a2: f64, n: u32) -> f64 {
    let t = a2 / (2.0 * 2f64.sqrt());
    // U_{−2} = −1, U_{−1} = 0, U_{k+1} = 2t U_k − U_{k−1}
    let mut u_prev2 = -1.0;
    let mut u_prev = 0.0;
    let mut u = 1.0;
    for _ in 0..n {
        let next = 2.0 * t * u - u_prev;
        u_prev2 = u_prev;
        u_prev = u;
        u = next;
    }
    let u_nm2 = if n == 0 { -1.0 } else if n == 1 { 0.0 } else { u_prev2 };
    2f64.powf(-(n as f64) / 2.0) * (u - 0.5 * u_nm2) / 1.5
}

/// L₂(Ψ, ½) = (1 − λ(2)/√2 + ½)⁻¹ with λ(2) = a₂/√2.
pub fn local_l_factor(a2: f64) -> f64 {
    1.0 / (1.0 - a2 / 2.0 + 0.5)
}

/// ζ₂(2) = (1 − ¼)⁻¹.
pub fn zeta2_at_2() -> f64 {
    4.0 / 3.0
}

pub const TRUNCATION: f64 = 1e-12;
pub const MAX_CELLS: u32 = 200;

fn cartan_sum(a2: f64, ip: impl Fn(u32) -> f64) -> Result<f64> {
    let mut total = 0.0;
    for n in 0..=MAX_CELLS {
        let w = cartan_volume(n) * ip(n);
        total += w * macdonald_xi(a2, n);
        // |U_n(t)| ≤ n + 1 for tempered t, so this bounds the increment
        let envelope = w.abs() * 2f64.powf(-(n as f64) / 2.0) * (n as f64 + 2.0);
        if envelope < TRUNCATION {
            return Ok(total);
        }
    }
    Err(Error::NoConvergence(format!("Cartan sum did not converge for a2 = {a2}")))
}

/// ∫_G ⟨Ad(g)1_{M₂(Z₂)}, 1_{M₂(Z₂)}⟩ Ξ(g) dg, truncated.
pub fn local_integral_unramified(a2: f64) -> Result<f64> {
    let f = SchwartzB2::maximal_order(1, 1);
    let stable = stable_ip_table(&f);
    cartan_sum(a2, stable)
}

/// ∫_G ⟨Ad(g)φ̂, φ̂⟩ Ξ(g) dg with φ̂ = φ/κ₀, truncated.
pub fn local_integral_correlations(a2: f64) -> Result<f64> {
    let f = SchwartzB2::phi_hat();
    let stable = stable_ip_table(&f);
    cartan_sum(a2, stable)
}

/// n ↦ ⟨Ad(a(2^n))f, f⟩ as floats. The cell sums stop depending on n once
/// 2^n ≡ 0 mod 2^{a+b}, so only n ≤ a+b are summed explicitly.
fn stable_ip_table(f: &SchwartzB2) -> impl Fn(u32) -> f64 {
    let k = f.a + f.b;
    let sums: Vec<i128> = (0..=k).map(|n| ip_integer_sum(n, f, f)).collect();
    let den = (f.den * f.den) as f64 * 2f64.powi(4 * f.b as i32);
    move |n| sums[n.min(k) as usize] as f64 / den / 2f64.powi(n as i32)
}

/// Both truncated Cartan sums against their closed forms, for both branches
/// a₂ = (−1 ± √5)/2.
pub fn verify_local_integrals(tol: f64) -> Result<Report> {
    let mut r = Report::new("local-integrals", json!({"tol": tol, "truncation": TRUNCATION}));
    let s5 = 5f64.sqrt();
    let mut rows = Vec::new();
    for a2 in [(s5 - 1.0) / 2.0, (-s5 - 1.0) / 2.0] {
        let (i0, i) = local_integral_closed_forms(a2);
        let u = local_integral_unramified(a2)?;
        let c = local_integral_correlations(a2)?;
        r.case((u - i0).abs() < tol, || json!({"a2": a2, "unramified": u, "closed_form": i0}));
        r.case((c - i).abs() < tol, || json!({"a2": a2, "correlations": c, "closed_form": i}));
        rows.push(json!({"a2": a2, "unramified": u, "unramified_closed": i0, "correlations": c, "correlations_closed": i}));
    }
    r.set("branches", json!(rows));
    Ok(r)
}

/// Closed forms: L₂/ζ₂(2) and 2^{−4}(2 + L₂/ζ₂(2)).
pub fn local_integral_closed_forms(a2: f64) -> (f64, f64) {
    let i0 = local_l_factor(a2) / zeta2_at_2();
    (i0, (2.0 + i0) / 16.0)
}

/// Function on B₂⁰ ∋ [[p, q], [r, −p]] supported on 2^{−a}Z₂³, constant mod
/// 2^b Z₂³; integer table over (Z/2^{a+b})³.
#[derive(Clone, Debug)]
pub struct SchwartzB0 {
    pub a: u32,
    pub b: u32,
    pub table: Vec<i64>,
}

impl SchwartzB0 {
    pub fn from_fn(a: u32, b: u32, f: impl Fn([u64; 3]) -> i64) -> Self {
        let k = a + b;
        let q = 1u64 << k;
        let mut table = Vec::with_capacity(1 << (3 * k));
        for p in 0..q {
            for s in 0..q {
                for r in 0..q {
                    table.push(f([p, s, r]));
                }
            }
        }
        SchwartzB0 { a, b, table }
    }

    /// 1 on the trace-zero matrices of M₂(Z₂).
    pub fn trace_zero_order(a: u32, b: u32) -> Self {
        let m = (1u64 << a) - 1;
        Self::from_fn(a, b, |x| x.iter().all(|&v| v & m == 0) as i64)
    }

    /// ‖f‖² for dβ = dp dq dr.
    pub fn norm_sq(&self) -> BigRational {
        let s: i64 = self.table.iter().map(|v| v * v).sum();
        BigRational::new(BigInt::from(s), BigInt::one() << (3 * self.b))
    }
}

/// F″f(β) = ∫ f(β′) ψ(⟨β, β′⟩) dβ′ with ⟨β, β′⟩ = −(2pp′ + qr′ + rq′).
///
/// The result lives on p ∈ 2^{−b−1}Z₂ mod 2^{a−1}, q, r ∈ 2^{−b}Z₂ mod 2^a, with
/// values 2^{−3b}·S where S ∈ Z[ζ_{2^{a+b}}] is returned per output cell.
pub fn ft_b0(f: &SchwartzB0) -> Vec<CycInt> {
    let k = f.a + f.b;
    let q = 1usize << k;
    (0..q * q * q)
        .into_par_iter()
        .map(|o| {
            let (pp, qq, rr) = (o / (q * q), o / q % q, o % q);
            let mut acc = CycInt::zero(k);
            for (i, &v) in f.table.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let (p1, q1, r1) = (i / (q * q), i / q % q, i % q);
                let e = pp * p1 + qq * r1 + rr * q1;
                acc.add_zeta_multiple(v, -(e as i64));
            }
            acc
        })
        .collect()
}

/// ‖F″f‖² from the transform cells: each has measure 2^{−3a+1}.
pub fn ft_b0_norm_sq(f: &SchwartzB0) -> BigRational {
    let cells = ft_b0(f);
    let mut total = CycInt::zero(f.a + f.b);
    for c in &cells {
        total = &total + &(c * &c.conj());
    }
    let s = total.as_int().expect("Parseval sum is not rational");
    BigRational::new(BigInt::from(s), BigInt::one() << (6 * f.b + 3 * f.a - 1))
}

/// (‖f‖², ‖F″f‖²) for f = 1 on the trace-zero part of M₂(Z₂).
pub fn plancherel_b0() -> (BigRational, BigRational) {
    let f = SchwartzB0::trace_zero_order(1, 1);
    (f.norm_sq(), ft_b0_norm_sq(&f))
}
