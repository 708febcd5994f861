//! Closed-form invariants of orbit configuration spaces of `n` points in S³
//! under a free `ℤ_m` action.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Coefficients (index = degree) of `(1 + t³) · Π_{k=1}^{n−1} (1 + (mk − 1) t²)`.
pub fn poincare_polynomial(m: usize, n: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    for k in 1..n {
        let c = BigInt::from(m * k - 1);
        let mut next = vec![BigInt::zero(); poly.len() + 2];
        for (i, a) in poly.iter().enumerate() {
            next[i] += a;
            next[i + 2] += a * &c;
        }
        poly = next;
    }
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    poly
}

/// Evaluates a coefficient list at an integer.
pub fn evaluate(poly: &[BigInt], t: i64) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

/// `Σ_{k=1}^{n−1} (mk − 1)`.
pub fn h2_rank(m: usize, n: usize) -> u64 {
    (1..n as u64).map(|k| m as u64 * k - 1).sum()
}

/// `(n − 1)(mn − 2)/2`, the same sum in closed form.
pub fn h2_rank_closed(m: usize, n: usize) -> u64 {
    let (m, n) = (m as u64, n as u64);
    (n - 1) * (m * n - 2) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub family: String,
    pub order: BigInt,
}

/// π₁ bookkeeping: the deck group of the orbit configuration cover.
pub fn fundamental_group_summary(m: usize, n: usize, ordered: bool) -> GroupSummary {
    let base = BigInt::from(m).pow(n as u32);
    if ordered {
        let family = if n == 1 {
            format!("Z_{m}")
        } else {
            vec![format!("Z_{m}"); n].join(" x ")
        };
        GroupSummary {
            family,
            order: base,
        }
    } else {
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        GroupSummary {
            family: format!("S_{n} wr Z_{m}"),
            order: fact * base,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(poincare_polynomial(7, 1), ints(&[1, 0, 0, 1]));
        assert_eq!(poincare_polynomial(7, 2), ints(&[1, 0, 6, 1, 0, 6]));
        assert_eq!(poincare_polynomial(7, 3)[2], BigInt::from(19));
    }

    #[test]
    fn ranks_and_groups() {
        assert_eq!(h2_rank(7, 2), 6);
        assert_eq!(h2_rank(7, 10), 306);
        assert_eq!(h2_rank(5, 1), 0);
        assert_eq!(
            fundamental_group_summary(7, 2, true).order,
            BigInt::from(49)
        );
        assert_eq!(
            fundamental_group_summary(7, 2, false).order,
            BigInt::from(98)
        );
        assert_eq!(fundamental_group_summary(3, 1, true).family, "Z_3");
    }
}
