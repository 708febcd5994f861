//! Exact affine elimination and Fourier–Motzkin feasibility over ℚ.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};

use super::affine::{Affine, Q};

/// Reduced echelon solution of `eᵢ = 0`: each pivot parameter as an affine
/// form in the free ones. Pivots are chosen leftmost in `order`.
pub(crate) fn solve_affine(
    equations: &[Affine],
    order: &[String],
) -> Option<BTreeMap<String, Affine>> {
    let n = order.len();
    // Row layout: coefficients in `order`, then the constant.
    let mut rows: Vec<Vec<Q>> = equations
        .iter()
        .map(|e| {
            let mut r: Vec<Q> = order.iter().map(|p| e.coefficient(p)).collect();
            r.push(e.constant.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let c = rows[i][col].clone();
                for k in 0..=n {
                    let delta = &c * &rows[rank][k];
                    rows[i][k] -= delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut out = BTreeMap::new();
    for (i, &col) in pivots.iter().enumerate() {
        // x_col + Σ_free c·x + k = 0.
        let mut e = Affine::constant(-rows[i][n].clone());
        for (j, name) in order.iter().enumerate() {
            if j != col && !pivots.contains(&j) && !rows[i][j].is_zero() {
                e = e.add(&Affine::term(name, -rows[i][j].clone()));
            }
        }
        out.insert(order[col].clone(), e);
    }
    Some(out)
}

/// `coeffs · x ≤ bound`, or `<` when strict.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Ineq {
    pub coeffs: Vec<Q>,
    pub bound: Q,
    pub strict: bool,
}

impl Ineq {
    /// `lo ≤ e ≤ hi` as two inequalities in `vars`.
    pub fn between(e: &Affine, vars: &[String], lo: &Q, hi: &Q) -> [Ineq; 2] {
        let coeffs: Vec<Q> = vars.iter().map(|v| e.coefficient(v)).collect();
        let upper = Ineq {
            coeffs: coeffs.clone(),
            bound: hi - &e.constant,
            strict: false,
        };
        let lower = Ineq {
            coeffs: coeffs.iter().map(|c| -c).collect(),
            bound: &e.constant - lo,
            strict: false,
        };
        [upper, lower]
    }

    fn normalized(mut self) -> Ineq {
        let scale = self.coeffs.iter().map(|c| c.abs()).max();
        if let Some(s) = scale.filter(|s| !s.is_zero()) {
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.bound /= s;
        }
        self
    }
}

/// Eliminates variable `j`; `None` when a constant constraint fails.
fn eliminate(ineqs: Vec<Ineq>, j: usize) -> Option<Vec<Ineq>> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for i in ineqs {
        let c = i.coeffs[j].clone();
        if c.is_positive() {
            pos.push(i);
        } else if c.is_negative() {
            neg.push(i);
        } else {
            rest.push(i);
        }
    }
    for p in &pos {
        for n in &neg {
            let (a, b) = (p.coeffs[j].abs().recip(), n.coeffs[j].abs().recip());
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(x, y)| x * &a + y * &b)
                .collect();
            rest.push(Ineq {
                coeffs,
                bound: &p.bound * &a + &n.bound * &b,
                strict: p.strict || n.strict,
            });
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in rest {
        if i.coeffs.iter().all(Zero::is_zero) {
            let ok = if i.strict {
                i.bound.is_positive()
            } else {
                !i.bound.is_negative()
            };
            if !ok {
                return None;
            }
            continue;
        }
        let i = i.normalized();
        if seen.insert(i.clone()) {
            out.push(i);
        }
    }
    Some(out)
}

pub(crate) fn feasible(n: usize, ineqs: &[Ineq]) -> bool {
    let mut cur = ineqs.to_vec();
    for j in 0..n {
        match eliminate(cur, j) {
            Some(next) => cur = next,
            None => return false,
        }
    }
    // All coefficients are now zero; `eliminate` has checked the constants,
    // except when there were no variables at all.
    cur.iter().all(|i| {
        if i.strict {
            i.bound.is_positive()
        } else {
            !i.bound.is_negative()
        }
    })
}

/// Exact projection of a bounded nonempty polytope onto variable `i`.
pub(crate) fn project(n: usize, ineqs: &[Ineq], i: usize) -> Option<(Q, Q)> {
    let mut cur = ineqs.to_vec();
    for j in (0..n).filter(|&j| j != i) {
        cur = eliminate(cur, j)?;
    }
    let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
    for c in &cur {
        let a = &c.coeffs[i];
        let v = &c.bound / a;
        if a.is_positive() {
            hi = Some(match hi {
                Some(h) if h <= v => h,
                _ => v,
            });
        } else {
            lo = Some(match lo {
                Some(l) if l >= v => l,
                _ => v,
            });
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l <= h => Some((l, h)),
        _ => None,
    }
}

/// Indices of the inequalities that hold with equality on the whole
/// (nonempty) polytope.
pub(crate) fn implicit_equalities(n: usize, ineqs: &[Ineq]) -> Vec<usize> {
    (0..ineqs.len())
        .filter(|&k| {
            let mut probe = ineqs.to_vec();
            probe[k].strict = true;
            !feasible(n, &probe)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclosolve::affine::{q, qf};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn affine_solution() {
        let e = Affine::parse("4t - 1 - s").unwrap();
        let sol = solve_affine(&[e], &names(&["t", "s"])).unwrap();
        assert_eq!(sol["t"], Affine::parse("(1+s)/4").unwrap());
        let bad = [
            Affine::parse("t - s").unwrap(),
            Affine::parse("t - s - 1").unwrap(),
        ];
        assert!(solve_affine(&bad, &names(&["t", "s"])).is_none());
    }

    #[test]
    fn triangle() {
        // x ≥ 0, y ≥ 0, x + y ≤ 1.
        let v = names(&["x", "y"]);
        let mut c = Vec::new();
        c.extend(Ineq::between(&Affine::param("x"), &v, &q(0), &q(10)));
        c.extend(Ineq::between(&Affine::param("y"), &v, &q(0), &q(10)));
        c.extend(Ineq::between(
            &Affine::parse("x+y").unwrap(),
            &v,
            &q(-10),
            &q(1),
        ));
        assert!(feasible(2, &c));
        assert_eq!(project(2, &c, 0), Some((q(0), q(1))));
        assert!(implicit_equalities(2, &c).is_empty());
        c.extend(Ineq::between(
            &Affine::parse("x+y").unwrap(),
            &v,
            &q(1),
            &q(1),
        ));
        assert!(!implicit_equalities(2, &c).is_empty());
        c.extend(Ineq::between(
            &Affine::parse("x").unwrap(),
            &v,
            &qf(3, 2),
            &q(2),
        ));
        assert!(!feasible(2, &c));
    }
}
