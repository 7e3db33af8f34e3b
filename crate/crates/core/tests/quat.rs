use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use quatvar::quat_core::split::{m2_det, m2_mul, m2_trace};
use quatvar::quat_core::{
    gram_det, hensel_sqrt, lll_reduce, maximal_order, maximal_order_basis, rat, short_vectors, two_adic_split,
    vectors_of_value, Form, Quaternion,
};

fn quat() -> impl Strategy<Value = Quaternion> {
    (prop::array::uniform4(-30i64..30), 1i64..7).prop_map(|(c, d)| {
        Quaternion::new(std::array::from_fn(|t| rat(c[t], d)))
    })
}

fn order_elt() -> impl Strategy<Value = (Vec<i64>, Quaternion)> {
    prop::collection::vec(-20i64..20, 4).prop_map(|c| {
        let b = maximal_order_basis();
        let mut x = Quaternion::zero();
        for (ci, bi) in c.iter().zip(&b) {
            x = x + bi.scale(&rat(*ci, 1));
        }
        (c, x)
    })
}

#[test]
fn relations() {
    let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
    assert_eq!(&i * &i, Quaternion::scalar(rat(-1, 1)));
    assert_eq!(&j * &j, Quaternion::scalar(rat(-23, 1)));
    assert_eq!(&i * &j, k);
    assert_eq!(&j * &i, -k.clone());
    assert_eq!(k.nrd(), rat(23, 1));
}

#[test]
fn maximal_order_discriminant() {
    let o = maximal_order();
    assert!(o.is_ring_closed());
    // det of the trd(xȳ) Gram matrix is disc² = 23²
    assert_eq!(gram_det(&o), rat(529, 1));
}

proptest! {
    #[test]
    fn nrd_is_multiplicative(x in quat(), y in quat()) {
        prop_assert_eq!((&x * &y).nrd(), x.nrd() * y.nrd());
    }

    #[test]
    fn conj_is_anti_involution(x in quat(), y in quat()) {
        prop_assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
        prop_assert_eq!(&x * &x.conj(), Quaternion::scalar(x.nrd()));
    }

    #[test]
    fn associative(x in quat(), y in quat(), z in quat()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn inverse(x in quat()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.inverse().unwrap(), Quaternion::one());
    }

    #[test]
    fn order_is_integral((_, x) in order_elt()) {
        prop_assert!(x.nrd().is_integer());
        prop_assert!(x.trd().is_integer());
        prop_assert!(maximal_order().contains(&x));
    }

    #[test]
    fn splitting_is_a_homomorphism((c, x) in order_elt(), (d, y) in order_elt()) {
        let s = two_adic_split(10).unwrap();
        let m = s.precision;
        let ix = s.image(&c);
        let iy = s.image(&d);
        prop_assert_eq!(s.image_of(&(&x * &y)).unwrap(), m2_mul(&ix, &iy, m));
        let md = |q: &BigRational| (q.to_integer() % BigInt::from(1u64 << m) + BigInt::from(1u64 << m)) % BigInt::from(1u64 << m);
        prop_assert_eq!(BigInt::from(m2_det(&ix, m)), md(&x.nrd()));
        prop_assert_eq!(BigInt::from(m2_trace(&ix, m)), md(&x.trd()));
    }

    #[test]
    fn hensel(m in 3u32..40) {
        let s = hensel_sqrt(-23, m).unwrap() as u128;
        let md = 1u128 << m;
        prop_assert_eq!((s * s) % md, (md - 23 % md) % md);
    }

    #[test]
    fn short_vectors_match_box(a in 1i64..6, b in 1i64..6, c in 1i64..6, x in -2i64..3, y in -2i64..3, z in -2i64..3, bound in 0i64..25) {
        // positive definite via a diagonally dominant even Gram
        let g = vec![
            vec![2 * a + 2 * (x.abs() + y.abs()), x, y],
            vec![x, 2 * b + 2 * (x.abs() + z.abs()), z],
            vec![y, z, 2 * c + 2 * (y.abs() + z.abs())],
        ];
        let f = Form::new(&g).unwrap();
        let mut brute = Vec::new();
        let r = 8;
        for v0 in -r..=r {
            for v1 in -r..=r {
                for v2 in -r..=r {
                    let v = [v0, v1, v2];
                    let q = f.value(&v);
                    if q <= bound {
                        brute.push((v.to_vec(), q));
                    }
                }
            }
        }
        brute.sort();
        prop_assert_eq!(short_vectors(&g, bound).unwrap(), brute);
    }

    #[test]
    fn lll_preserves_theta(a in 1i64..4, s in -40i64..40, t in -40i64..40) {
        // skew a reduced basis by a unimodular shear and reduce it back
        let base = [vec![2 * a, 1, 0], vec![1, 4, 1], vec![0, 1, 6]];
        let u = [[1, s, t], [0, 1, s], [0, 0, 1]];
        let g: Vec<Vec<i64>> = (0..3)
            .map(|i| (0..3).map(|j| {
                let mut acc = 0;
                for k in 0..3 { for l in 0..3 { acc += u[k][i] * base[k][l] * u[l][j]; } }
                acc
            }).collect())
            .collect();
        let (r, _) = lll_reduce(&g);
        prop_assert!(r.iter().all(|row| row.iter().all(|x| x.abs() <= 12)));
        let ta = Form::new(&g).unwrap().theta_counts(30);
        let tb = Form::new(&r).unwrap().theta_counts(30);
        prop_assert_eq!(ta, tb);
    }
}

#[test]
fn norm_form_of_order() {
    let o = maximal_order();
    let g: Vec<Vec<i64>> = o.gram().iter().map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect()).collect();
    // units of norm 1: ±1, ±i
    assert_eq!(vectors_of_value(&g, 1).unwrap().len(), 4);
    let t = Form::new(&g).unwrap().theta_counts(10);
    assert_eq!(t[0], 1);
    assert_eq!(t.iter().sum::<u64>(), short_vectors(&g, 10).unwrap().len() as u64);
}

#[test]
fn invalid_forms() {
    assert!(Form::new(&[vec![2, 1], vec![0, 2]]).is_err());
    assert!(Form::new(&[vec![2, 3], vec![3, 2]]).is_err());
    assert!(two_adic_split(2).is_err());
}
