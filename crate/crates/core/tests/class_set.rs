use num_bigint::BigInt;
use num_rational::BigRational;
use quatvar::class_graph::algnum::null_vector;
use quatvar::class_graph::brandt::weighted_ip;
use quatvar::class_graph::{
    build_class_set, eigenfunctions, sigma1, theta_table, verify_brandt, verify_class_set, AlgNum, ClassSet,
    ThetaTable,
};
use quatvar::linalg;
use quatvar::quat_core::rat;
use std::sync::OnceLock;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn setup() -> &'static (ClassSet, ThetaTable) {
    static S: OnceLock<(ClassSet, ThetaTable)> = OnceLock::new();
    S.get_or_init(|| {
        let cs = build_class_set().unwrap();
        let t = theta_table(&cs, 60);
        (cs, t)
    })
}

#[test]
fn three_classes_with_full_mass() {
    let (cs, _) = setup();
    assert_eq!(cs.len(), 3);
    assert_eq!(cs.mass, rat(11, 6));
    assert_eq!(cs.weights(), vec![1, 2, 3]);
    assert!(verify_class_set(cs).passed());
}

#[test]
fn ternary_determinants() {
    // S⁰ has index 8 in the trace-zero part of R, whose trd Gram has det 2·23²
    let (cs, _) = setup();
    for c in &cs.classes {
        let g: Vec<Vec<BigInt>> = c.ternary.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(linalg::det_i(&g), BigInt::from(16928));
    }
}

#[test]
fn row_sums() {
    let (cs, t) = setup();
    for n in 1..=t.nmax {
        let b = t.brandt(cs, n).unwrap();
        // at the ramified prime T_23 is an involution
        let expect = if n % 23 == 0 { sigma1(n / 23) } else { sigma1(n) };
        for s in b.row_sums() {
            assert_eq!(s, q(expect as i64), "n = {n}");
        }
    }
}

#[test]
fn brandt_report_passes() {
    let (cs, t) = setup();
    let r = verify_brandt(cs, t).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure);
}

#[test]
fn brandt_rejects_bad_index() {
    let (cs, t) = setup();
    assert!(t.brandt(cs, 0).is_err());
    assert!(t.brandt(cs, t.nmax + 1).is_err());
}

#[test]
fn hecke_recursion_at_two() {
    // T_{2^{k+1}} = T_2 T_{2^k} − 2 T_{2^{k−1}}
    let (cs, t) = setup();
    let b = |n| t.brandt(cs, n).unwrap().entries;
    for k in 1..5u32 {
        let lhs = b(1 << (k + 1));
        let prod = linalg::mat_mul_q(&b(2), &b(1 << k));
        let prev = b(1 << (k - 1));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(lhs[i][j], &prod[i][j] - &(q(2) * &prev[i][j]));
            }
        }
    }
}

#[test]
fn multiplicative_for_coprime_indices() {
    let (cs, t) = setup();
    let b = |n| t.brandt(cs, n).unwrap();
    for (m, n) in [(3u64, 5u64), (2, 7), (4, 9), (5, 11), (3, 19)] {
        assert_eq!(b(m).mul(&b(n)), b(m * n).entries, "{m}·{n}");
    }
}

/// h(d): reduced primitive forms of discriminant d < 0.
fn class_number(d: i64) -> i64 {
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

fn legendre(a: i64, p: i64) -> i64 {
    let r = a.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    let mut e = (p - 1) / 2;
    let mut base = r;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Eichler's trace formula for the maximal order ramified at p:
/// tr B(n) = Σ_{s² ≤ 4n} H_p(4n − s²).
fn eichler_trace(n: i64, p: i64) -> BigRational {
    let mut total = q(0);
    let mut s = 0i64;
    while s * s <= 4 * n {
        let mult = if s == 0 { 1 } else { 2 };
        let big_d = 4 * n - s * s;
        let h = if big_d == 0 {
            rat(p - 1, 24)
        } else {
            let mut acc = q(0);
            let mut f = 1;
            while f * f <= big_d {
                if big_d % (f * f) == 0 {
                    let d = -big_d / (f * f);
                    if d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1 {
                        let u = match d {
                            -3 => 3,
                            -4 => 2,
                            _ => 1,
                        };
                        let symbol = if f % p == 0 { 1 } else { legendre(d, p) };
                        acc += rat(class_number(d) * (1 - symbol), 2 * u);
                    }
                }
                f += 1;
            }
            acc
        };
        total += h * q(mult);
        s += 1;
    }
    total
}

#[test]
fn traces_match_eichler() {
    let (cs, t) = setup();
    for n in 1..=t.nmax {
        let tr = t.brandt(cs, n).unwrap().trace();
        assert_eq!(tr, eichler_trace(n as i64, 23), "n = {n}");
    }
}

#[test]
fn class_number_oracle() {
    assert_eq!(class_number(-3), 1);
    assert_eq!(class_number(-4), 1);
    assert_eq!(class_number(-23), 3);
    assert_eq!(class_number(-47), 5);
    assert_eq!(class_number(-20), 2);
}

#[test]
fn eigenfunctions_in_golden_field() {
    let (cs, t) = setup();
    let e = eigenfunctions(cs, t).unwrap();
    // nontrivial B(2) eigenvalues are the roots of x² + x − 1
    assert_eq!(e.quadratic, [q(-1), q(1)]);
    let f1 = e.psi(0);
    assert_eq!(
        f1.psi,
        vec![AlgNum::one(), AlgNum::new(q(-3), q(-1)), AlgNum::new(rat(3, 2), rat(3, 2))]
    );
    assert_eq!(f1.a[&2], AlgNum::new(rat(-1, 2), rat(1, 2)));
    assert_eq!(f1.norm_sq, AlgNum::new(rat(25, 2), rat(9, 2)));
    let f2 = e.psi(1);
    for (x, y) in f1.psi.iter().zip(&f2.psi) {
        assert_eq!(x.conj(), *y);
    }
    let w = cs.weights();
    assert!(weighted_ip(&f1.psi, &f2.psi, &w).is_zero());
    let ones = vec![AlgNum::one(); 3];
    assert!(weighted_ip(&f1.psi, &ones, &w).is_zero());
    assert!(weighted_ip(&f2.psi, &ones, &w).is_zero());
}

#[test]
fn ramanujan_bound() {
    let (cs, t) = setup();
    let e = eigenfunctions(cs, t).unwrap();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 29, 31, 37, 41, 43, 47, 53, 59] {
        for f in &e.fns {
            let a = f.a[&p].to_f64();
            assert!(a.abs() <= 2.0 * (p as f64).sqrt() + 1e-12, "p = {p}, a = {a}");
        }
    }
}

#[test]
fn hecke_multiplicativity_of_eigenvalues() {
    let (cs, t) = setup();
    let e = eigenfunctions(cs, t).unwrap();
    for f in &e.fns {
        for (m, n) in [(2u64, 3u64), (3, 5), (4, 7), (5, 9), (2, 29)] {
            assert_eq!(&f.a[&m] * &f.a[&n], f.a[&(m * n)]);
        }
        // a_{p²} = a_p² − p for p ∤ 23
        for p in [2u64, 3, 5, 7] {
            assert_eq!(f.a[&(p * p)], &(&f.a[&p] * &f.a[&p]) - &AlgNum::from_int(p as i64));
        }
    }
}

#[test]
fn null_vector_of_rank_deficient() {
    let m = vec![
        vec![AlgNum::from_int(1), AlgNum::from_int(2)],
        vec![AlgNum::from_int(2), AlgNum::from_int(4)],
    ];
    let v = null_vector(&m).unwrap();
    assert_eq!(v, vec![AlgNum::one(), AlgNum::new(rat(-1, 2), rat(0, 1))]);
}
