//! Exact solution sets of congruence systems.
//!
//! An active equation `ζ^α u = ζ^β u` (with `u ≠ 0`) means `α − β = k·m`
//! for an integer `k`. Over a box only finitely many `k` are feasible, so
//! the solution set is a finite union of affine slices of the box, one per
//! vanishing pattern and choice of offsets.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chaincore::format_rational;

use super::affine::{ceil_int, floor_int, q, Affine, PhaseExponent, Q};
use super::polytope::{feasible, implicit_equalities, project, solve_affine, Ineq};
use super::system::{CongruenceSystem, MagnitudeKind};
use super::CycloError;

/// The integers `k` such that `θ₁ − θ₂ = k·m` somewhere in the box.
pub fn residue_range(
    theta1: &PhaseExponent,
    theta2: &PhaseExponent,
    bounds: &BTreeMap<String, (Q, Q)>,
) -> Result<Vec<i64>, CycloError> {
    if theta1.modulus != theta2.modulus {
        return Err(CycloError::Invalid(
            "phase exponents have different moduli".into(),
        ));
    }
    let m = q(theta1.modulus as i64);
    let (lo, hi) = theta1.exponent.sub(&theta2.exponent).range(bounds)?;
    // An affine form on a box takes every value between its extremes.
    let (a, b) = (ceil_int(&(lo / &m)), floor_int(&(hi / &m)));
    let (a, b) = (
        a.to_i64().expect("small offset"),
        b.to_i64().expect("small offset"),
    );
    Ok((a..=b).collect())
}

/// Magnitude of a variable on a solution branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Magnitude {
    Zero,
    Nonzero,
    /// Forced to modulus one by a sphere constraint.
    Unit,
    /// Not constrained by any equation.
    Free,
}

impl Magnitude {
    pub fn allows(&self, nonzero: bool) -> bool {
        match self {
            Magnitude::Zero => !nonzero,
            Magnitude::Nonzero | Magnitude::Unit => nonzero,
            Magnitude::Free => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Zero)
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Magnitude::Zero => "ZERO",
            Magnitude::Nonzero => "NONZERO",
            Magnitude::Unit => "UNIT",
            Magnitude::Free => "FREE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    /// Per equation: `k` with `θ₁ − θ₂ = k·m`, or `None` when the equation
    /// holds because its variable vanishes.
    pub offsets: Vec<Option<i64>>,
    pub pattern: BTreeMap<String, Magnitude>,
    /// Every parameter as an affine form in the free parameters.
    pub parametrization: BTreeMap<String, Affine>,
    pub free: Vec<String>,
    /// Exact range of every parameter over the slice.
    pub ranges: BTreeMap<String, (Q, Q)>,
    /// Dimension of the parameter slice; free parameters are independent.
    pub dimension: usize,
    /// `lo ≤ form ≤ hi` in the free parameters; together they cut out the slice.
    pub constraints: Vec<(Affine, Q, Q)>,
}

impl Branch {
    /// Whether a parameter point lies on this slice.
    pub fn contains_point(&self, point: &BTreeMap<String, Q>) -> bool {
        self.parametrization
            .iter()
            .all(|(p, e)| point.get(p).is_some_and(|v| *v == e.eval(point)))
            && self.constraints.iter().all(|(e, lo, hi)| {
                let v = e.eval(point);
                *lo <= v && v <= *hi
            })
    }

    /// The parameter point at given values of the free parameters.
    pub fn point_at(&self, free_values: &BTreeMap<String, Q>) -> BTreeMap<String, Q> {
        self.parametrization
            .iter()
            .map(|(p, e)| (p.clone(), e.eval(free_values)))
            .collect()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pat: Vec<String> = self
            .pattern
            .iter()
            .map(|(v, m)| format!("{v} {m}"))
            .collect();
        write!(f, "[{}]", pat.join(", "))?;
        for (p, e) in &self.parametrization {
            if !self.free.contains(p) {
                write!(f, "; {p} = {e}")?;
            }
        }
        for p in &self.free {
            let (lo, hi) = &self.ranges[p];
            write!(
                f,
                "; {p} in [{}, {}]",
                format_rational(lo),
                format_rational(hi)
            )?;
        }
        write!(f, "; dim {}", self.dimension)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub modulus: u32,
    pub branches: Vec<Branch>,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Whether some branch contains the point with the given vanishing data.
    pub fn covers(&self, point: &BTreeMap<String, Q>, nonzero: &BTreeMap<String, bool>) -> bool {
        self.branches.iter().any(|b| {
            b.pattern
                .iter()
                .all(|(v, m)| nonzero.get(v).is_none_or(|&nz| m.allows(nz)))
                && b.contains_point(point)
        })
    }
}

/// Direct check of a point against a system (box, kinds, spheres, equations).
pub fn satisfies(
    sys: &CongruenceSystem,
    point: &BTreeMap<String, Q>,
    nonzero: &BTreeMap<String, bool>,
) -> bool {
    let m = q(sys.modulus as i64);
    let in_box = sys
        .params
        .iter()
        .all(|(n, lo, hi)| point.get(n).is_some_and(|v| lo <= v && v <= hi));
    let kinds = sys
        .magnitudes
        .iter()
        .all(|(v, k)| match (k, nonzero.get(v)) {
            (MagnitudeKind::Zero, Some(true)) | (MagnitudeKind::Nonzero, Some(false)) => false,
            _ => true,
        });
    let spheres = sys
        .spheres
        .iter()
        .all(|g| g.iter().any(|v| nonzero.get(v).copied().unwrap_or(true)));
    let eqs = sys.equations.iter().all(|e| {
        let active = e
            .var
            .as_ref()
            .is_none_or(|v| nonzero.get(v).copied().unwrap_or(true));
        !active || (e.difference().eval(point) / &m).is_integer()
    });
    in_box && kinds && spheres && eqs
}

fn patterns(sys: &CongruenceSystem) -> Vec<BTreeMap<String, Magnitude>> {
    let used: Vec<&str> = sys
        .equations
        .iter()
        .filter_map(|e| e.var.as_deref())
        .collect();
    let mut out = vec![BTreeMap::new()];
    for (v, kind) in &sys.magnitudes {
        let choices: &[Magnitude] = match kind {
            MagnitudeKind::Zero => &[Magnitude::Zero],
            MagnitudeKind::Nonzero => &[Magnitude::Nonzero],
            MagnitudeKind::Free if used.contains(&v.as_str()) => {
                &[Magnitude::Zero, Magnitude::Nonzero]
            }
            MagnitudeKind::Free => &[Magnitude::Free],
        };
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut p = p.clone();
                    p.insert(v.clone(), *c);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .filter_map(|mut p| {
            for g in &sys.spheres {
                let alive: Vec<&String> = g.iter().filter(|v| !p[*v].is_zero()).collect();
                match alive.as_slice() {
                    [] => return None,
                    [only] => {
                        let only = (*only).clone();
                        p.insert(only, Magnitude::Unit);
                    }
                    _ => {}
                }
            }
            Some(p)
        })
        .collect()
}

fn box_constraints(
    sys: &CongruenceSystem,
    param: &BTreeMap<String, Affine>,
    free: &[String],
) -> (Vec<Ineq>, Vec<(String, bool)>) {
    let mut ineqs = Vec::new();
    let mut origin = Vec::new();
    for (p, lo, hi) in &sys.params {
        let [up, down] = Ineq::between(&param[p], free, lo, hi);
        ineqs.push(up);
        origin.push((p.clone(), true));
        ineqs.push(down);
        origin.push((p.clone(), false));
    }
    (ineqs, origin)
}

/// Full parametrization (free parameters map to themselves) and free list.
fn parametrize(
    sys: &CongruenceSystem,
    eqs: &[Affine],
) -> Option<(BTreeMap<String, Affine>, Vec<String>)> {
    let order = sys.param_names();
    let pivots = solve_affine(eqs, &order)?;
    let free: Vec<String> = order
        .iter()
        .filter(|p| !pivots.contains_key(*p))
        .cloned()
        .collect();
    let mut all = pivots;
    for p in &free {
        all.insert(p.clone(), Affine::param(p));
    }
    Some((all, free))
}

fn range_of(e: &Affine, free: &[String], ineqs: &[Ineq]) -> (Q, Q) {
    if e.is_constant() {
        return (e.constant.clone(), e.constant.clone());
    }
    // Adjoin y = e as the last variable and project onto it.
    let n = free.len();
    let mut ext: Vec<Ineq> = ineqs
        .iter()
        .map(|i| {
            let mut c = i.coeffs.clone();
            c.push(Q::zero());
            Ineq {
                coeffs: c,
                bound: i.bound.clone(),
                strict: i.strict,
            }
        })
        .collect();
    let mut names = free.to_vec();
    names.push("\u{0}y".to_string());
    let diff = Affine::param("\u{0}y").sub(e);
    ext.extend(Ineq::between(&diff, &names, &Q::zero(), &Q::zero()));
    project(n + 1, &ext, n).expect("slice is nonempty and bounded")
}

/// All solutions in the box, as disjoint branches.
pub fn solve_congruences(sys: &CongruenceSystem) -> Result<SolutionSet, CycloError> {
    sys.validate()?;
    let m = q(sys.modulus as i64);
    let bounds = sys.bounds();
    let mut branches = Vec::new();
    for pattern in patterns(sys) {
        let active: Vec<usize> = (0..sys.equations.len())
            .filter(|&i| {
                sys.equations[i]
                    .var
                    .as_ref()
                    .is_none_or(|v| !pattern[v].is_zero())
            })
            .collect();
        let mut combos: Vec<Vec<i64>> = vec![Vec::new()];
        for &i in &active {
            let e = &sys.equations[i];
            let ks = residue_range(&e.lhs, &e.rhs, &bounds)?;
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    ks.iter().map(move |&k| {
                        let mut c = c.clone();
                        c.push(k);
                        c
                    })
                })
                .collect();
        }
        for combo in combos {
            let mut eqs: Vec<Affine> = active
                .iter()
                .zip(&combo)
                .map(|(&i, &k)| {
                    sys.equations[i]
                        .difference()
                        .sub(&Affine::constant(&m * q(k)))
                })
                .collect();
            let Some((param, free)) = parametrize(sys, &eqs) else {
                continue;
            };
            let (ineqs, origin) = box_constraints(sys, &param, &free);
            if !feasible(free.len(), &ineqs) {
                continue;
            }
            // Pin the box faces the slice cannot leave, so the free
            // parameters span the slice's affine hull.
            let pinned = implicit_equalities(free.len(), &ineqs);
            let (param, free, ineqs) = if pinned.is_empty() {
                (param, free, ineqs)
            } else {
                for k in pinned {
                    let (p, upper) = &origin[k];
                    let (_, lo, hi) = sys.params.iter().find(|x| &x.0 == p).expect("declared");
                    eqs.push(Affine::param(p).sub(&Affine::constant(if *upper {
                        hi.clone()
                    } else {
                        lo.clone()
                    })));
                }
                let (param, free) =
                    parametrize(sys, &eqs).expect("pinning keeps the slice nonempty");
                let (ineqs, _) = box_constraints(sys, &param, &free);
                (param, free, ineqs)
            };
            let ranges = param
                .iter()
                .map(|(p, e)| (p.clone(), range_of(e, &free, &ineqs)))
                .collect();
            let constraints = sys
                .params
                .iter()
                .map(|(p, lo, hi)| (param[p].clone(), lo.clone(), hi.clone()))
                .collect();
            let mut offsets = vec![None; sys.equations.len()];
            for (&i, &k) in active.iter().zip(&combo) {
                offsets[i] = Some(k);
            }
            branches.push(Branch {
                offsets,
                pattern: pattern.clone(),
                parametrization: param,
                dimension: free.len(),
                free,
                ranges,
                constraints,
            });
        }
    }
    Ok(SolutionSet {
        modulus: sys.modulus,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclosolve::affine::qf;

    fn pe(s: &str) -> PhaseExponent {
        PhaseExponent::new(Affine::parse(s).unwrap(), 7).unwrap()
    }

    fn unit_box(names: &[&str]) -> BTreeMap<String, (Q, Q)> {
        names
            .iter()
            .map(|n| (n.to_string(), (q(0), q(1))))
            .collect()
    }

    #[test]
    fn residue_examples() {
        let b = unit_box(&["t", "s"]);
        assert_eq!(residue_range(&pe("4t"), &pe("1+s"), &b).unwrap(), vec![0]);
        assert_eq!(residue_range(&pe("3"), &pe("3"), &b).unwrap(), vec![0]);
        assert!(residue_range(&pe("t"), &pe("10+2s"), &b)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn pinned_slice_is_a_point() {
        // t − s = 1 on the unit square only at (1, 0).
        let sys = CongruenceSystem::new(7)
            .param("t", q(0), q(1))
            .param("s", q(0), q(1))
            .equation(
                Affine::parse("t").unwrap(),
                Affine::parse("1+s").unwrap(),
                None,
            );
        let sol = solve_congruences(&sys).unwrap();
        assert_eq!(sol.branches.len(), 1);
        let b = &sol.branches[0];
        assert_eq!(b.dimension, 0);
        assert_eq!(b.ranges["t"], (q(1), q(1)));
        assert_eq!(b.ranges["s"], (q(0), q(0)));
    }

    #[test]
    fn half_integer_offsets() {
        // 2t ≡ 2s + 6 with t,s ∈ [0,1]: 2(t − s) = −1.
        let sys = CongruenceSystem::new(7)
            .param("t", q(0), q(1))
            .param("s", q(0), q(1))
            .magnitude("x", MagnitudeKind::Nonzero)
            .equation(
                Affine::parse("2t").unwrap(),
                Affine::parse("6+2s").unwrap(),
                Some("x"),
            );
        let sol = solve_congruences(&sys).unwrap();
        assert_eq!(sol.branches.len(), 1);
        let b = &sol.branches[0];
        assert_eq!(b.parametrization["t"], Affine::parse("s - 1/2").unwrap());
        assert_eq!(b.ranges["s"], (qf(1, 2), q(1)));
        assert_eq!(b.dimension, 1);
    }
}
