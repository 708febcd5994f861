//! Parametrized patches of `S³ × S³` of graph type
//! `((z₁, z₂), (ζ^{φ₁} z₁, ζ^{φ₂} z₂))`.
//!
//! The first point ranges over the coordinates' domain (a unit complex
//! variable, a radial variable in `[0, 1]`, the constant 1, or zero), always
//! on the unit sphere. Two patches meet where the first points agree and
//! the phases agree on every nonvanishing coordinate.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::chaincore::format_rational;
use crate::cyclosolve::{
    q, solve_congruences, Affine, Branch, CongruenceSystem, Magnitude, MagnitudeKind, SolutionSet,
    Q,
};

use super::DualError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coord {
    Zero,
    One,
    /// A complex coordinate.
    Unit(String),
    /// A real coordinate in `[0, 1]`.
    Radial(String),
}

impl Coord {
    pub fn var(&self) -> Option<&str> {
        match self {
            Coord::Unit(v) | Coord::Radial(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coord::Zero)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Zero => f.write_str("0"),
            Coord::One => f.write_str("1"),
            Coord::Unit(v) | Coord::Radial(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPatch {
    pub name: String,
    pub modulus: u32,
    pub params: Vec<(String, Q, Q)>,
    pub coords: [Coord; 2],
    pub phases: [Affine; 2],
}

pub fn check_action(m: u32, q_: u32) -> Result<(), DualError> {
    if m < 2 {
        return Err(DualError::Invalid(format!(
            "order must be at least 2, got {m}"
        )));
    }
    if (q_ % m).gcd(&m) != 1 {
        return Err(DualError::Invalid(format!(
            "twist {q_} is not a unit modulo {m}"
        )));
    }
    Ok(())
}

impl ParamPatch {
    pub fn new(
        name: &str,
        modulus: u32,
        params: Vec<(String, Q, Q)>,
        coords: [Coord; 2],
        phases: [Affine; 2],
    ) -> Result<Self, DualError> {
        let p = ParamPatch {
            name: name.to_string(),
            modulus,
            params,
            coords,
            phases,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DualError> {
        if self.modulus < 2 {
            return Err(DualError::Invalid("modulus must be at least 2".into()));
        }
        if self.coords.iter().all(Coord::is_zero) || matches!(self.coords, [Coord::One, Coord::One])
        {
            return Err(DualError::Invalid(format!(
                "{}: first point is not on the unit sphere",
                self.name
            )));
        }
        if let (Some(a), Some(b)) = (self.coords[0].var(), self.coords[1].var()) {
            if a == b {
                return Err(DualError::Invalid(format!(
                    "{}: coordinates share variable {a}",
                    self.name
                )));
            }
        }
        for (n, lo, hi) in &self.params {
            if lo > hi {
                return Err(DualError::Invalid(format!(
                    "{}: empty box for {n}",
                    self.name
                )));
            }
        }
        for p in self.phases.iter().flat_map(|e| e.params()) {
            if !self.params.iter().any(|x| x.0 == p) {
                return Err(DualError::Invalid(format!(
                    "{}: phase uses undeclared parameter {p}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.params.len() + sphere_dimension(&self.coords)
    }

    /// `Δ_k = {(z, g^k z)}` for the action `(ζ, ζ^q)`.
    pub fn diagonal(k: u32, m: u32, q_: u32) -> Result<Self, DualError> {
        check_action(m, q_)?;
        let k = k % m;
        ParamPatch::new(
            &format!("Δ{k}"),
            m,
            Vec::new(),
            [Coord::Unit("x1".into()), Coord::Unit("x2".into())],
            [Affine::int(k as i64), Affine::int((q_ as i64) * k as i64)],
        )
    }

    /// The membrane swept by `Δ_{k−1}` to `Δ_k`:
    /// `((x₁, x₂), (ζ^{k−1+t} x₁, ζ^{q(k−1+t)} x₂))`, `t ∈ [0, 1]`.
    pub fn membrane(k: u32, m: u32, q_: u32) -> Result<Self, DualError> {
        check_action(m, q_)?;
        if k >= m {
            return Err(DualError::Invalid(format!(
                "membrane index {k} out of range for order {m}"
            )));
        }
        let tau = Affine::int(k as i64 - 1).add(&Affine::param("t"));
        ParamPatch::new(
            &format!("A{k}"),
            m,
            vec![("t".into(), q(0), q(1))],
            [Coord::Unit("x1".into()), Coord::Unit("x2".into())],
            [tau.clone(), tau.scale(&q(q_ as i64))],
        )
    }

    /// `((r, x), (ζ^{a t} r, ζ^{b t} x))` over the half-disc `r ≥ 0`, `t ∈ [0, 1]`.
    pub fn two_exponent_chain(a: i64, b: i64, m: u32) -> Result<Self, DualError> {
        ParamPatch::new(
            &format!("X[{a},{b}]"),
            m,
            vec![("t".into(), q(0), q(1))],
            [Coord::Radial("r".into()), Coord::Unit("x".into())],
            [Affine::term("t", q(a)), Affine::term("t", q(b))],
        )
    }

    /// `{(1, 0)} × S³`.
    pub fn slice(m: u32) -> Self {
        // The second point is arbitrary; as a graph patch it is only used
        // through `restrict_first`.
        ParamPatch {
            name: "S".into(),
            modulus: m,
            params: Vec::new(),
            coords: [Coord::One, Coord::Zero],
            phases: [Affine::default(), Affine::default()],
        }
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn rename_param(&self, old: &str, new: &str) -> Self {
        let map: BTreeMap<String, Affine> = [(old.to_string(), Affine::param(new))]
            .into_iter()
            .collect();
        let mut p = self.clone();
        for x in p.params.iter_mut() {
            if x.0 == old {
                x.0 = new.to_string();
            }
        }
        p.phases = [p.phases[0].substitute(&map), p.phases[1].substitute(&map)];
        p
    }

    /// All phases multiplied by `u`, i.e. `ζ` replaced by `ζ^u`.
    pub fn relabel(&self, u: i64) -> Self {
        let mut p = self.clone();
        p.phases = [p.phases[0].scale(&q(u)), p.phases[1].scale(&q(u))];
        p
    }

    /// The face where `param` sits at its lower or upper bound.
    pub fn param_face(&self, param: &str, upper: bool) -> Result<Self, DualError> {
        let (_, lo, hi) =
            self.params.iter().find(|x| x.0 == param).ok_or_else(|| {
                DualError::Invalid(format!("{} has no parameter {param}", self.name))
            })?;
        let v = if upper { hi.clone() } else { lo.clone() };
        let map: BTreeMap<String, Affine> = [(param.to_string(), Affine::constant(v.clone()))]
            .into_iter()
            .collect();
        let mut p = self.clone();
        p.params.retain(|x| x.0 != param);
        p.phases = [p.phases[0].substitute(&map), p.phases[1].substitute(&map)];
        p.name = format!("{}|{param}={}", self.name, format_rational(&v));
        Ok(p)
    }

    /// The face where radial coordinate `i` vanishes.
    pub fn radial_face(&self, i: usize) -> Result<Self, DualError> {
        let Coord::Radial(v) = &self.coords[i] else {
            return Err(DualError::Invalid(format!(
                "{}: coordinate {i} is not radial",
                self.name
            )));
        };
        let mut p = self.clone();
        p.name = format!("{}|{v}=0", self.name);
        p.coords[i] = Coord::Zero;
        p.validate()?;
        Ok(p)
    }

    /// Codimension-one faces: parameter bounds and vanishing radii.
    pub fn faces(&self) -> Result<Vec<(String, ParamPatch)>, DualError> {
        let mut out = Vec::new();
        for (n, lo, hi) in &self.params {
            out.push((
                format!("{n}={}", format_rational(lo)),
                self.param_face(n, false)?,
            ));
            out.push((
                format!("{n}={}", format_rational(hi)),
                self.param_face(n, true)?,
            ));
        }
        for i in 0..2 {
            if let Coord::Radial(v) = &self.coords[i] {
                out.push((format!("{v}=0"), self.radial_face(i)?));
            }
        }
        Ok(out)
    }

    /// The sub-patch whose first point has the given (constant) coordinates.
    pub fn restrict_first(&self, first: [Coord; 2]) -> Result<Self, DualError> {
        let mut p = self.clone();
        for i in 0..2 {
            match (&self.coords[i], &first[i]) {
                (Coord::Unit(_) | Coord::Radial(_), c @ (Coord::Zero | Coord::One)) => {
                    p.coords[i] = c.clone()
                }
                (a, b) if a == b => {}
                (a, b) => {
                    return Err(DualError::Invalid(format!(
                        "cannot restrict coordinate {a} to {b}"
                    )))
                }
            }
        }
        p.name = format!("{}∩S", self.name);
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for ParamPatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.coords;
        let second = |c: &Coord, e: &Affine| match c {
            Coord::Zero => "0".to_string(),
            _ if e.is_zero() => c.to_string(),
            Coord::One => format!("ζ^({e})"),
            _ => format!("ζ^({e}){c}"),
        };
        write!(
            f,
            "{}: (({a}, {b}), ({}, {}))",
            self.name,
            second(a, &self.phases[0]),
            second(b, &self.phases[1])
        )?;
        for (n, lo, hi) in &self.params {
            write!(
                f,
                ", {n} in [{}, {}]",
                format_rational(lo),
                format_rational(hi)
            )?;
        }
        Ok(())
    }
}

/// The action `(ζ, ζ^q)` of order `m`, with every phase scaled by `u`
/// (`ζ` replaced by `ζ^u`); all patches of one computation come from here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub m: u32,
    pub q: u32,
    pub u: i64,
}

impl Geometry {
    pub fn new(m: u32, q_: u32) -> Result<Self, DualError> {
        check_action(m, q_)?;
        Ok(Geometry { m, q: q_, u: 1 })
    }

    pub fn relabeled(self, u: i64) -> Result<Self, DualError> {
        if u.rem_euclid(self.m as i64).gcd(&(self.m as i64)) != 1 {
            return Err(DualError::Invalid(format!(
                "relabelling exponent {u} is not a unit modulo {}",
                self.m
            )));
        }
        Ok(Geometry {
            u: self.u * u,
            ..self
        })
    }

    pub fn diagonal(&self, l: u32) -> ParamPatch {
        ParamPatch::diagonal(l, self.m, self.q)
            .expect("action checked")
            .relabel(self.u)
    }

    pub fn diagonals(&self) -> Vec<ParamPatch> {
        (0..self.m).map(|l| self.diagonal(l)).collect()
    }

    pub fn membrane(&self, k: u32) -> ParamPatch {
        ParamPatch::membrane(k % self.m, self.m, self.q)
            .expect("action checked")
            .relabel(self.u)
    }

    pub fn chain(&self, a: i64, b: i64) -> ParamPatch {
        ParamPatch::two_exponent_chain(a, b, self.m)
            .expect("valid chain")
            .relabel(self.u)
    }

    pub fn slice(&self) -> ParamPatch {
        ParamPatch::slice(self.m)
    }
}

/// Dimension of the set of first points.
pub(crate) fn sphere_dimension(coords: &[Coord; 2]) -> usize {
    let live: Vec<&Coord> = coords.iter().filter(|c| !c.is_zero()).collect();
    match live.as_slice() {
        [Coord::Unit(_)] => 1,
        [_] => 0,
        _ => {
            let s: usize = live
                .iter()
                .map(|c| match c {
                    Coord::Unit(_) => 2,
                    Coord::Radial(_) => 1,
                    _ => 0,
                })
                .sum();
            s.saturating_sub(1)
        }
    }
}

/// The congruence system of `P ∩ Q`, with the merged first-point coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intersection {
    pub first: String,
    pub second: String,
    pub system: CongruenceSystem,
    pub coords: [Coord; 2],
}

fn merge(a: &Coord, b: &Coord) -> Option<(Coord, Option<(String, String)>)> {
    Some(match (a, b) {
        (Coord::Zero, Coord::One) | (Coord::One, Coord::Zero) => return None,
        (Coord::Zero, _) | (_, Coord::Zero) => (Coord::Zero, None),
        (Coord::One, _) | (_, Coord::One) => (Coord::One, None),
        (Coord::Unit(x), Coord::Unit(y)) => (Coord::Unit(x.clone()), Some((y.clone(), x.clone()))),
        (Coord::Radial(x), Coord::Unit(y) | Coord::Radial(y))
        | (Coord::Unit(x), Coord::Radial(y)) => {
            (Coord::Radial(x.clone()), Some((y.clone(), x.clone())))
        }
    })
}

/// `None` when the first points can never agree.
pub fn intersection_system(
    p: &ParamPatch,
    other: &ParamPatch,
) -> Result<Option<Intersection>, DualError> {
    if p.modulus != other.modulus {
        return Err(DualError::Invalid("patches have different moduli".into()));
    }
    for (n, ..) in &other.params {
        if p.params.iter().any(|x| &x.0 == n) {
            return Err(DualError::Invalid(format!(
                "{} and {} share parameter {n}",
                p.name, other.name
            )));
        }
    }
    let mut coords = [Coord::Zero, Coord::Zero];
    for i in 0..2 {
        let Some((c, _)) = merge(&p.coords[i], &other.coords[i]) else {
            return Ok(None);
        };
        coords[i] = c;
    }
    let mut sys = CongruenceSystem::new(p.modulus);
    for x in p.params.iter().chain(&other.params) {
        sys = sys.param(&x.0, x.1.clone(), x.2.clone());
    }
    let vars: Vec<&str> = coords.iter().filter_map(Coord::var).collect();
    let has_one = coords.iter().any(|c| *c == Coord::One);
    for v in &vars {
        // Beside the constant 1 on the unit sphere the other coordinate vanishes.
        sys = sys.magnitude(
            v,
            if has_one {
                MagnitudeKind::Zero
            } else {
                MagnitudeKind::Free
            },
        );
    }
    if !vars.is_empty() && !has_one {
        sys = sys.sphere(&vars);
    }
    for i in 0..2 {
        match &coords[i] {
            Coord::Zero => {}
            Coord::One => sys = sys.equation(p.phases[i].clone(), other.phases[i].clone(), None),
            c => sys = sys.equation(p.phases[i].clone(), other.phases[i].clone(), c.var()),
        }
    }
    Ok(Some(Intersection {
        first: p.name.clone(),
        second: other.name.clone(),
        system: sys,
        coords,
    }))
}

impl Intersection {
    pub fn solve(&self) -> Result<SolutionSet, DualError> {
        Ok(solve_congruences(&self.system)?)
    }

    /// The branch as a patch parametrized like the first patch `p`.
    pub fn piece(&self, p: &ParamPatch, branch: &Branch) -> Result<ParamPatch, DualError> {
        let mut coords = self.coords.clone();
        for c in coords.iter_mut() {
            if let Some(v) = c.var() {
                match branch.pattern.get(v) {
                    Some(Magnitude::Zero) => *c = Coord::Zero,
                    Some(Magnitude::Unit) if matches!(c, Coord::Radial(_)) => *c = Coord::One,
                    _ => {}
                }
            }
        }
        let phases = [
            p.phases[0].substitute(&branch.parametrization),
            p.phases[1].substitute(&branch.parametrization),
        ];
        let params = branch
            .free
            .iter()
            .map(|n| {
                (
                    n.clone(),
                    branch.ranges[n].0.clone(),
                    branch.ranges[n].1.clone(),
                )
            })
            .collect();
        if branch.free.len() > 1 {
            return Err(DualError::Unsupported(format!(
                "branch of {} ∩ {} has {} free parameters",
                self.first,
                self.second,
                branch.free.len()
            )));
        }
        ParamPatch::new(
            &format!("{}∩{}", self.first, self.second),
            p.modulus,
            params,
            coords,
            phases,
        )
    }
}

/// Whether every point of `inner` lies on `outer`, decided by the solver:
/// over the generic vanishing pattern of `inner`, the solution branches must
/// project onto the whole parameter box of `inner`.
pub fn contains(outer: &ParamPatch, inner: &ParamPatch) -> Result<bool, DualError> {
    if inner.params.len() > 1 {
        return Err(DualError::Unsupported(format!(
            "containment test for {} with several parameters",
            inner.name
        )));
    }
    let mut outer = outer.clone();
    for (n, ..) in &inner.params {
        if outer.params.iter().any(|x| &x.0 == n) {
            outer = outer.rename_param(n, &format!("{n}'"));
        }
    }
    let Some(mut inter) = intersection_system(inner, &outer)? else {
        return Ok(false);
    };
    for i in 0..2 {
        let ic = &inner.coords[i];
        let mc = &inter.coords[i];
        if ic.var().is_some() && mc.var().is_none() {
            return Ok(false);
        }
    }
    let live = inter.coords.iter().filter(|c| c.var().is_some()).count();
    if live == 2 {
        for (_, k) in inter.system.magnitudes.iter_mut() {
            *k = MagnitudeKind::Nonzero;
        }
    }
    inter.system.validate()?;
    let sol = inter.solve()?;
    let Some((name, lo, hi)) = inner.params.first() else {
        return Ok(!sol.is_empty());
    };
    let mut spans: Vec<(Q, Q)> = sol
        .branches
        .iter()
        .map(|b| b.ranges[name].clone())
        .collect();
    spans.sort();
    let mut reach = lo.clone();
    let mut started = false;
    for (a, b) in spans {
        if a > reach {
            break;
        }
        started = true;
        if b > reach {
            reach = b;
        }
    }
    Ok(started && &reach >= hi)
}

pub fn same_set(a: &ParamPatch, b: &ParamPatch) -> Result<bool, DualError> {
    Ok(contains(a, b)? && contains(b, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membrane_faces_lie_in_diagonals() {
        for (m, q_) in [(7, 2), (7, 1), (2, 1), (5, 3)] {
            for k in 0..m {
                let a = ParamPatch::membrane(k, m, q_).unwrap();
                let before = ParamPatch::diagonal((k + m - 1) % m, m, q_).unwrap();
                let after = ParamPatch::diagonal(k, m, q_).unwrap();
                assert!(
                    contains(&before, &a.param_face("t", false).unwrap()).unwrap(),
                    "{m},{q_},{k}"
                );
                assert!(
                    contains(&after, &a.param_face("t", true).unwrap()).unwrap(),
                    "{m},{q_},{k}"
                );
                let wrong = ParamPatch::diagonal((k + 1) % m, m, q_).unwrap();
                assert!(!contains(&wrong, &a.param_face("t", true).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn membrane_contains_its_slices() {
        let a = ParamPatch::membrane(2, 7, 2).unwrap();
        let s = a.restrict_first([Coord::One, Coord::Zero]).unwrap();
        assert!(contains(&a, &s.rename_param("t", "u")).unwrap());
        assert_eq!(s.dimension(), 1);
        assert_eq!(a.dimension(), 4);
        assert!(!contains(&s, &a.rename_param("t", "u")).unwrap());
    }

    #[test]
    fn invalid_patches() {
        assert!(ParamPatch::membrane(0, 6, 2).is_err());
        assert!(ParamPatch::membrane(7, 7, 2).is_err());
        assert!(ParamPatch::new(
            "bad",
            7,
            vec![],
            [Coord::Zero, Coord::Zero],
            Default::default()
        )
        .is_err());
        assert!(ParamPatch::new(
            "bad",
            7,
            vec![],
            [Coord::One, Coord::Zero],
            [Affine::param("t"), Affine::int(0)]
        )
        .is_err());
    }
}
