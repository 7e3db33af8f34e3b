use super::brandt::{sigma1, ThetaTable};
use super::classes::ClassSet;
use crate::error::Result;
use crate::quat_core::rat;
use crate::report::Report;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use serde_json::json;

/// Three classes, mass 11/6, weights 1, 2, 3, and sane per-class data.
pub fn verify_class_set(cs: &ClassSet) -> Report {
    let mut r = Report::new("classset", json!({}));
    r.case(cs.len() == 3, || json!({"classes": cs.len()}));
    r.case(cs.mass == rat(11, 6), || json!({"mass": cs.mass.to_string()}));
    r.case(cs.weights() == vec![1, 2, 3], || json!({"weights": cs.weights()}));
    for (e, c) in cs.classes.iter().enumerate() {
        r.case(c.left_order.is_ring_closed(), || json!({"class": e, "left_order_closed": false}));
        r.case(c.split.verify(), || json!({"class": e, "splitting": false}));
    }
    r.set("mass", json!(cs.mass.to_string()));
    r.set("weights", json!(cs.weights()));
    r
}

pub const COMMUTING_SET: [u64; 8] = [1, 2, 3, 5, 7, 9, 15, 25];

/// Row sums, commutation, weighted self-adjointness and multiplicativity.
pub fn verify_brandt(cs: &ClassSet, table: &ThetaTable) -> Result<Report> {
    let mut r = Report::new("brandt", json!({"nmax": table.nmax}));
    let w = cs.weights();
    let b2 = table.brandt(cs, 2)?;
    for s in b2.row_sums() {
        r.case(s == rat(3, 1), || json!({"n": 2, "row_sum": s.to_string()}));
    }
    let mats = COMMUTING_SET
        .iter()
        .map(|&n| table.brandt(cs, n))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            r.case(mats[i].commutes_with(&mats[j]), || json!({"noncommuting": [mats[i].n, mats[j].n]}));
        }
    }
    for n in 1..=table.nmax {
        let b = table.brandt(cs, n)?;
        r.case(b.is_weighted_self_adjoint(&w), || json!({"n": n, "self_adjoint": false}));
        if n.gcd(&46) == 1 {
            let want = BigRational::from_integer(BigInt::from(sigma1(n)));
            for s in b.row_sums() {
                r.case(s == want, || json!({"n": n, "row_sum": s.to_string(), "sigma": sigma1(n)}));
            }
        }
    }
    // B(m)B(n) = B(mn) for coprime m, n
    for (m, n) in [(3u64, 5u64), (2, 3), (3, 7), (5, 7), (2, 9)] {
        if m * n > table.nmax {
            continue;
        }
        let lhs = table.brandt(cs, m)?.mul(&table.brandt(cs, n)?);
        r.case(lhs == table.brandt(cs, m * n)?.entries, || json!({"multiplicative": [m, n]}));
    }
    Ok(r)
}
