//! Koszul sign bookkeeping for the two presentations of an A∞-structure.
//!
//! Degrees passed in are always those of the presentation at hand:
//! unsuspended degrees for the `m` relations, suspended degrees (one less)
//! for the `b` relations and for the `m ↔ b` conversion.

use std::ops::Mul;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(exponent: i64) -> Self {
        if exponent.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn scalar(self) -> Scalar {
        Scalar::from_int(self.value())
    }

    pub fn apply(self, x: &Scalar) -> Scalar {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

fn sum(degrees: &[i32]) -> i64 {
    degrees.iter().map(|&d| d as i64).sum()
}

/// Sign of the term `m_k(a_1..a_j, m_l(..), ..)` in the unsuspended relation:
/// `(j+1)(l+1) + l(|a_1|+…+|a_j|)`.
pub fn sign_unsuspended(j: usize, l: usize, prefix_degrees: &[i32]) -> Sign {
    debug_assert_eq!(prefix_degrees.len(), j);
    let (j, l) = (j as i64, l as i64);
    Sign::from_parity((j + 1) * (l + 1) + l * sum(prefix_degrees))
}

/// Sign of the term `b_k(ā_1..ā_j, b_l(..), ..)` in the suspended relation.
pub fn sign_suspended(prefix_degrees: &[i32]) -> Sign {
    Sign::from_parity(sum(prefix_degrees))
}

/// Relates `b_k(s a_1, …, s a_k)` to `s m_k(a_1, …, a_k)`:
/// exponent `(k-1)|s a_1| + (k-2)|s a_2| + … + |s a_{k-1}|`.
pub fn suspension_sign(k: usize, suspended_degrees: &[i32]) -> Sign {
    debug_assert_eq!(suspended_degrees.len(), k);
    let e: i64 = suspended_degrees
        .iter()
        .take(k.saturating_sub(1))
        .enumerate()
        .map(|(i, &d)| (k - 1 - i) as i64 * d as i64)
        .sum();
    Sign::from_parity(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsuspended_examples() {
        assert_eq!(sign_unsuspended(0, 1, &[]), Sign::Plus);
        assert_eq!(sign_unsuspended(0, 2, &[]), Sign::Minus);
        assert_eq!(sign_unsuspended(1, 1, &[5]), Sign::Minus);
    }

    #[test]
    fn suspended_examples() {
        assert_eq!(sign_suspended(&[]), Sign::Plus);
        assert_eq!(sign_suspended(&[1]), Sign::Minus);
        assert_eq!(sign_suspended(&[1, 1]), Sign::Plus);
    }

    #[test]
    fn suspension_examples() {
        for d in -3..4 {
            assert_eq!(suspension_sign(1, &[d]), Sign::Plus);
        }
        for d in -3..4 {
            assert_eq!(suspension_sign(2, &[1, d]), Sign::Minus);
        }
        assert_eq!(suspension_sign(3, &[1, 1, 7]), Sign::Minus);
    }

    fn tuples(n: usize, lo: i32, hi: i32) -> Vec<Vec<i32>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (lo..=hi).map(move |d| {
                        let mut t = t.clone();
                        t.push(d);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Rewriting every term of the suspended relation through the suspension
    /// signs must reproduce the unsuspended relation up to one overall sign
    /// that depends only on the inputs, never on the term.
    #[test]
    fn relation_signs_agree_up_to_a_global_factor() {
        for n in 1..=6usize {
            for sus in tuples(n, -2, 3) {
                let mut global = None;
                for l in 1..=n {
                    let k = n + 1 - l;
                    for j in 0..k {
                        let inner = &sus[j..j + l];
                        let inner_out = inner.iter().sum::<i32>() + 1;
                        let mut outer = sus[..j].to_vec();
                        outer.push(inner_out);
                        outer.extend_from_slice(&sus[j + l..]);
                        let unsus: Vec<i32> = sus[..j].iter().map(|d| d + 1).collect();
                        let s = sign_suspended(&sus[..j])
                            * suspension_sign(l, inner)
                            * suspension_sign(k, &outer)
                            * sign_unsuspended(j, l, &unsus);
                        match global {
                            None => global = Some(s),
                            Some(g) => assert_eq!(g, s, "n={n} degrees={sus:?} k={k} l={l} j={j}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn suspension_round_trip_is_identity() {
        for k in 1..=5 {
            for t in tuples(k, -2, 3) {
                let s = suspension_sign(k, &t);
                assert_eq!(s * s, Sign::Plus);
            }
        }
    }
}
