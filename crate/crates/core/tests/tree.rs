use proptest::prelude::*;
use quatvar::class_graph::{build_class_set, ClassSet};
use quatvar::quat_core::rat;
use quatvar::tree_fix::{
    chi_coords, cyclic_generators, fix_count, fix_sharp, mean_statistics, pair_count, pushforward_table,
    verify_local_pushforward, verify_triples_agree, TorsionAction,
};
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn cs() -> &'static ClassSet {
    static S: OnceLock<ClassSet> = OnceLock::new();
    S.get_or_init(|| build_class_set().unwrap())
}

const M: u32 = 5;


fn mul(a: [u64; 4], b: [u64; 4]) -> [u64; 4] {
    let m = (1u64 << M) - 1;
    [
        (a[0] * b[0] + a[1] * b[2]) & m,
        (a[0] * b[1] + a[1] * b[3]) & m,
        (a[2] * b[0] + a[3] * b[2]) & m,
        (a[2] * b[1] + a[3] * b[3]) & m,
    ]
}

fn inv_odd(d: u64) -> u64 {
    (1..1u64 << M).step_by(2).find(|x| (x * d) & ((1 << M) - 1) == 1).unwrap()
}

fn gl2_inverse(g: [u64; 4]) -> [u64; 4] {
    let m = (1u64 << M) - 1;
    let det = (g[0] * g[3]).wrapping_sub(g[1] * g[2]) & m;
    let di = inv_odd(det);
    let neg = |x: u64| (1u64 << M).wrapping_sub(x) & m;
    [(g[3] * di) & m, (neg(g[1]) * di) & m, (neg(g[2]) * di) & m, (g[0] * di) & m]
}

/// Cyclic subgroups of order 2^n in (Z/2^n)² as explicit element sets.
fn subgroups(n: u32) -> Vec<BTreeSet<[u64; 2]>> {
    let q = 1u64 << n;
    let mut seen = BTreeSet::new();
    for x in 0..q {
        for y in 0..q {
            if x % 2 == 0 && y % 2 == 0 {
                continue;
            }
            let s: BTreeSet<[u64; 2]> = (0..q).map(|k| [(k * x) % q, (k * y) % q]).collect();
            seen.insert(s.into_iter().collect::<Vec<_>>());
        }
    }
    seen.into_iter().map(|v| v.into_iter().collect()).collect()
}

/// Brute-force Fix_{n1,n2} from explicit subgroups.
fn fix_brute(a: [u64; 4], n1: u32, n2: u32) -> u64 {
    let stable_sets = |n: u32| -> Vec<BTreeSet<[u64; 2]>> {
        if n == 0 {
            return vec![BTreeSet::from([[0, 0]])];
        }
        let q = 1u64 << n;
        subgroups(n)
            .into_iter()
            .filter(|s| {
                s.iter().all(|v| {
                    let w = [(a[0] * v[0] + a[1] * v[1]) % q, (a[2] * v[0] + a[3] * v[1]) % q];
                    s.contains(&w)
                })
            })
            .collect()
    };
    let s1 = stable_sets(n1);
    let s2 = stable_sets(n2);
    let mut t = 0;
    for c1 in &s1 {
        for c2 in &s2 {
            // C₁ ∩ C₂ = 0 inside (Z/2^max)²: compare the 2-torsion points
            let lift = |c: &BTreeSet<[u64; 2]>, n: u32| -> BTreeSet<[u64; 2]> {
                let k = n1.max(n2) - n;
                c.iter().map(|v| [v[0] << k, v[1] << k]).collect()
            };
            let l1 = lift(c1, n1);
            let l2 = lift(c2, n2);
            if l1.intersection(&l2).count() == 1 {
                t += 1;
            }
        }
    }
    t
}

fn mat() -> impl Strategy<Value = [u64; 4]> {
    prop::array::uniform4(0u64..(1 << M))
}

fn gl2() -> impl Strategy<Value = [u64; 4]> {
    mat().prop_filter("odd determinant", |g| (g[0] * g[3] + g[1] * g[2]) % 2 == 1)
}

#[test]
fn generator_counts() {
    for n in 1..6 {
        assert_eq!(cyclic_generators(n).len() as u64, pair_count(n, 0));
        assert_eq!(subgroups(n.min(4)).len() as u64, pair_count(n.min(4), 0));
    }
    assert_eq!(pair_count(2, 2), 24);
    assert_eq!(pair_count(3, 2), 48);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fix_matches_brute_force(a in mat(), n1 in 0u32..4, n2 in 0u32..4) {
        let alpha = TorsionAction::new(a, M);
        prop_assert_eq!(fix_count(&alpha, n1, n2).unwrap(), fix_brute(a, n1, n2));
    }

    #[test]
    fn fix_is_conjugation_invariant(a in mat(), g in gl2(), n1 in 0u32..5, n2 in 0u32..5) {
        let conj = mul(mul(g, a), gl2_inverse(g));
        let x = TorsionAction::new(a, M);
        let y = TorsionAction::new(conj, M);
        prop_assert_eq!(fix_count(&x, n1, n2).unwrap(), fix_count(&y, n1, n2).unwrap());
    }

    #[test]
    fn fix_ignores_scalar_shift_and_unit_scale(a in mat(), t in -40i64..40, s in 0i64..16, n in 1u32..5) {
        let x = TorsionAction::new(a, M);
        let f = fix_count(&x, n, n).unwrap();
        prop_assert_eq!(fix_count(&x.add_scalar(t), n, n).unwrap(), f);
        prop_assert_eq!(fix_count(&x.scale(2 * s + 1), n, n).unwrap(), f);
        prop_assert!(f <= pair_count(n, n));
    }

    #[test]
    fn chi_is_a_character(a in prop::array::uniform3(-50i64..50), b in prop::array::uniform3(-50i64..50)) {
        let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let (x, y, z) = (chi_coords(&a), chi_coords(&b), chi_coords(&s));
        for i in 0..3 {
            prop_assert_eq!(z[i], x[i] * y[i]);
        }
        // χ₁χ₂χ₃ = 1
        prop_assert_eq!(x[0] * x[1] * x[2], 1);
    }
}

#[test]
fn scalar_fix_sharp() {
    for n in 1..5 {
        let id = TorsionAction::scalar(7, M);
        let expect = pair_count(n, n) as i64 - 2 * pair_count(n - 1, n) as i64 + pair_count(n - 1, n - 1) as i64;
        assert_eq!(fix_sharp(&id, n).unwrap(), expect);
    }
}

#[test]
fn triples_agree() {
    let r = verify_triples_agree(cs()).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure);
    assert_eq!(r.cases_total, 24);
}

#[test]
fn pushforward_by_level() {
    for n in 2..=4 {
        let r = verify_local_pushforward(cs(), n, 200, 7).unwrap();
        assert!(r.passed(), "N = {n}: {:?}", r.first_failure);
    }
}

#[test]
fn pushforward_rows_depend_only_on_chi() {
    // Fix♯ at m + 2^{N−2}β is a function of (m, Σχ(β))
    for n in 2..=3 {
        let rows = pushforward_table(cs(), n, n + 2).unwrap();
        let mut by_key = std::collections::BTreeMap::new();
        for r in &rows {
            let key = (r["m"].as_i64().unwrap(), r["chi_sum"].as_i64().unwrap());
            let v = r["fix_sharp"].as_i64().unwrap();
            assert_eq!(*by_key.entry(key).or_insert(v), v, "N = {n}, key {key:?}");
        }
    }
    assert!(pushforward_table(cs(), 1, 3).is_err());
}

#[test]
fn mean_statistics_values() {
    for (n, per, total) in [(2u32, 6i64, 11i64), (3, 24, 44), (4, 96, 176)] {
        let (r, s) = mean_statistics(cs(), n).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure);
        assert_eq!(s.per_class, vec![per; 3]);
        assert_eq!(s.total, rat(total, 1));
    }
}
