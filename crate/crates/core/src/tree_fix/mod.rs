//! Fixed-pair counts on the 2-adic tree, the characters χ and η on S⁰/2S⁰,
//! and the exact verifications built on them.

mod verify;

pub use verify::{mean_statistics, pushforward_table, verify_local_pushforward, verify_triples_agree, MeanStats};

use crate::class_graph::Ternary;
use crate::error::{Error, Result};
use crate::quat_core::split::{self, mask, Mat2};
use crate::quat_core::{Quaternion, TwoAdicSplitting};

/// Torsion level used for Fix computations at parameter N.
pub fn torsion_level(n: u32) -> u32 {
    n + 2
}

/// The action of α on (Z/2^M)² through the splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionAction {
    pub level: u32,
    pub matrix: Mat2,
}

impl TorsionAction {
    pub fn new(matrix: Mat2, level: u32) -> Self {
        TorsionAction {
            level,
            matrix: split::m2_reduce(&matrix, level),
        }
    }

    pub fn from_order_coords(sp: &TwoAdicSplitting, coords: &[i64], level: u32) -> Result<Self> {
        if level > sp.precision {
            return Err(Error::LevelTooLow {
                level: sp.precision,
                needed: level,
            });
        }
        Ok(Self::new(sp.image(coords), level))
    }

    pub fn from_quaternion(sp: &TwoAdicSplitting, x: &Quaternion, level: u32) -> Result<Self> {
        if level > sp.precision {
            return Err(Error::LevelTooLow {
                level: sp.precision,
                needed: level,
            });
        }
        Ok(Self::new(sp.image_of(x)?, level))
    }

    pub fn scalar(t: i64, level: u32) -> Self {
        let t = split::red_i64(t, level);
        TorsionAction { level, matrix: [t, 0, 0, t] }
    }

    pub fn add_scalar(&self, t: i64) -> Self {
        let s = split::red_i64(t, self.level);
        let m = self.matrix;
        Self::new([m[0].wrapping_add(s), m[1], m[2], m[3].wrapping_add(s)], self.level)
    }

    pub fn scale(&self, s: i64) -> Self {
        Self::new(split::m2_scale(&self.matrix, s, self.level), self.level)
    }

    pub fn det(&self) -> u64 {
        split::m2_det(&self.matrix, self.level)
    }

    pub fn trace(&self) -> u64 {
        split::m2_trace(&self.matrix, self.level)
    }
}

/// Label of a line of (Z/2)²: 0 ↔ ⟨(1,1)⟩, 1 ↔ ⟨(1,0)⟩, 2 ↔ ⟨(0,1)⟩.
pub const MOD2_LINES: [[u64; 2]; 3] = [[1, 1], [1, 0], [0, 1]];

fn mod2_label(g: [u64; 2]) -> usize {
    match (g[0] & 1, g[1] & 1) {
        (1, 1) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        _ => unreachable!("generator is not primitive"),
    }
}

/// Canonical generators of the cyclic subgroups of order 2^n in (Z/2^n)²:
/// (1, t) for t mod 2^n and (2u, 1) for u mod 2^{n−1}.
pub fn cyclic_generators(n: u32) -> Vec<[u64; 2]> {
    crate::class_graph::classes::lines(n)
}

#[inline]
fn stable(g: [u64; 2], a: &Mat2, n: u32) -> bool {
    // det[g, αg] = c g0² + (d − a) g0 g1 − b g1²
    let [g0, g1] = g;
    let v = a[2]
        .wrapping_mul(g0)
        .wrapping_mul(g0)
        .wrapping_add(a[3].wrapping_sub(a[0]).wrapping_mul(g0).wrapping_mul(g1))
        .wrapping_sub(a[1].wrapping_mul(g1).wrapping_mul(g1));
    v & mask(n) == 0
}

/// Stable subgroups of order 2^n, counted per mod-2 line.
fn stable_by_line(a: &Mat2, n: u32) -> [u64; 3] {
    let mut s = [0u64; 3];
    for g in cyclic_generators(n) {
        if stable(g, a, n) {
            s[mod2_label(g)] += 1;
        }
    }
    s
}

/// #{(C₁, C₂) : |C_i| = 2^{N_i}, C₁ ∩ C₂ = 0, αC_i ≤ C_i}.
pub fn fix_count(alpha: &TorsionAction, n1: u32, n2: u32) -> Result<u64> {
    let need = n1.max(n2);
    if alpha.level < need {
        return Err(Error::LevelTooLow {
            level: alpha.level,
            needed: need,
        });
    }
    let a = &alpha.matrix;
    Ok(match (n1, n2) {
        (0, 0) => 1,
        (0, n) | (n, 0) => stable_by_line(a, n).iter().sum(),
        _ => {
            let s1 = stable_by_line(a, n1);
            let s2 = stable_by_line(a, n2);
            let mut t = 0;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        t += s1[i] * s2[j];
                    }
                }
            }
            t
        }
    })
}

/// Fix_{N,N} − Fix_{N−1,N} − Fix_{N,N−1} + Fix_{N−1,N−1}.
pub fn fix_sharp(alpha: &TorsionAction, n: u32) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("fix_sharp needs N ≥ 1".into()));
    }
    let f = |a, b| fix_count(alpha, a, b).map(|x| x as i64);
    Ok(f(n, n)? - f(n - 1, n)? - f(n, n - 1)? + f(n - 1, n - 1)?)
}

/// |ℒ_{N₁,N₂}|, the number of independent pairs.
pub fn pair_count(n1: u32, n2: u32) -> u64 {
    let lines = |n: u32| if n == 0 { 1 } else { 3u64 << (n - 1) };
    match (n1, n2) {
        (0, _) | (_, 0) => lines(n1) * lines(n2),
        _ => 6u64 << (n1 + n2 - 2),
    }
}

pub type Signs = [i8; 3];

fn sign(e: i64) -> i8 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// (χ₁, χ₂, χ₃) at adapted coordinates (a, b, c).
pub fn chi_coords(c: &[i64; 3]) -> Signs {
    let [a, b, c] = *c;
    [sign(b + c), sign(a + c), sign(a + b)]
}

pub fn chi_sum(c: &[i64; 3]) -> i64 {
    chi_coords(c).iter().map(|&x| x as i64).sum()
}

/// χ(β) for β ∈ S⁰ of the given class.
pub fn chi(t: &Ternary, beta: &Quaternion) -> Result<Signs> {
    let c = t
        .coords(beta)
        .ok_or_else(|| Error::NotInLattice(format!("{beta} is not in S⁰")))?;
    Ok(chi_coords(&c))
}

/// (η₁, η₂, η₃)(β): the action of a lift α = t + β with odd reduced norm on
/// the two children of each neighbor v_i of the standard vertex; +1 when the
/// children are fixed, −1 when they are swapped.
pub fn eta(t: &Ternary, sp: &TwoAdicSplitting, c: &[i64; 3], shift: i64) -> Result<Signs> {
    let alpha = TorsionAction::from_order_coords(sp, &t.order_coords(c), 2)?;
    let x = c[0].rem_euclid(2);
    // nrd(t + β) ≡ t² − x² (mod 2) since nrd β ≡ −x² (mod 4)
    let lift = if x == 1 { 0 } else { 1 } + 2 * shift;
    let alpha = alpha.add_scalar(lift);
    if alpha.det() % 2 == 0 {
        return Err(Error::Internal("lift has even reduced norm".into()));
    }
    let mut out = [1i8; 3];
    for (i, g) in MOD2_LINES.iter().enumerate() {
        out[i] = if stable(*g, &alpha.matrix, 2) { 1 } else { -1 };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_counts() {
        let one = TorsionAction::scalar(1, 4);
        assert_eq!(fix_count(&one, 1, 1).unwrap(), 6);
        assert_eq!(fix_count(&one, 2, 2).unwrap(), 24);
        assert_eq!(fix_sharp(&one, 2).unwrap(), 6);
        for n1 in 0..4 {
            for n2 in 0..4 {
                assert_eq!(fix_count(&one, n1, n2).unwrap(), pair_count(n1, n2));
            }
        }
    }

    #[test]
    fn level_too_low() {
        let one = TorsionAction::scalar(1, 2);
        assert!(matches!(fix_count(&one, 3, 1), Err(Error::LevelTooLow { .. })));
    }

    #[test]
    fn characters() {
        assert_eq!(chi_coords(&[0, 0, 0]), [1, 1, 1]);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let s = chi_sum(&[a, b, c]);
                    assert!(s == 3 || s == -1);
                }
            }
        }
    }
}
