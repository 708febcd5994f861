//! Tangent frames of patches along an intersection, for transversality.
//!
//! At a first point with one vanishing coordinate, `T S³` is spanned by the
//! two real directions of the vanishing coordinate and the rotation of the
//! other. A patch maps a first-point direction `v` to `(v, ζ^φ v)`, and a
//! parameter `p` to `(0, i·∂φ/∂p·ζ^φ z)` up to the factor `2π/m`. Radial
//! coordinates contribute only their real direction.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclosolve::{
    q, tangent_rank, Affine, Branch, ComplexEntry, Magnitude, PhaseTerm, RankVerdict, TangentFrame,
    Q,
};

use super::patch::{Coord, Intersection, ParamPatch};
use super::DualError;

/// Phase parameter of the unit coordinate at the base point.
pub const ROTATION_PARAM: &str = "mu";

/// A first point with exactly one nonvanishing coordinate `ζ^μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    pub live: usize,
    pub phase: Affine,
}

fn term(re: i64, im: i64, e: Affine) -> PhaseTerm {
    PhaseTerm::new(q(re), q(im), e)
}

/// Tangent vectors of `patch` at the base point, with patch parameters
/// given as affine forms in the frame parameters.
pub fn patch_tangents(
    patch: &ParamPatch,
    at: &BTreeMap<String, Affine>,
    base: &BasePoint,
) -> Vec<[ComplexEntry; 4]> {
    let phases = [
        patch.phases[0].substitute(at),
        patch.phases[1].substitute(at),
    ];
    let dead = 1 - base.live;
    let mut dirs: Vec<(usize, PhaseTerm)> = Vec::new();
    match &patch.coords[dead] {
        Coord::Unit(_) => {
            dirs.push((dead, term(1, 0, Affine::default())));
            dirs.push((dead, term(0, 1, Affine::default())));
        }
        Coord::Radial(_) => dirs.push((dead, term(1, 0, Affine::default()))),
        Coord::Zero | Coord::One => {}
    }
    if let Coord::Unit(_) = &patch.coords[base.live] {
        dirs.push((base.live, term(0, 1, base.phase.clone())));
    }
    let mut out = Vec::new();
    for (i, t) in dirs {
        let mut v: [ComplexEntry; 4] = Default::default();
        let moved = PhaseTerm::new(t.re.clone(), t.im.clone(), t.exponent.add(&phases[i]));
        v[i] = vec![t];
        v[2 + i] = vec![moved];
        out.push(v);
    }
    for (name, ..) in &patch.params {
        let slope = patch.phases[base.live].coefficient(name);
        if slope.is_zero() {
            continue;
        }
        let mut v: [ComplexEntry; 4] = Default::default();
        v[2 + base.live] = vec![PhaseTerm::new(
            q(0),
            slope,
            phases[base.live].add(&base.phase),
        )];
        out.push(v);
    }
    out
}

/// The combined frame of `P` and `Q` along an intersection branch with one
/// vanishing first-point coordinate.
pub fn intersection_frame(
    p: &ParamPatch,
    other: &ParamPatch,
    inter: &Intersection,
    branch: &Branch,
) -> Result<TangentFrame, DualError> {
    let zero = |c: &Coord| match c.var() {
        Some(v) => branch.pattern.get(v).is_some_and(Magnitude::is_zero),
        None => c.is_zero(),
    };
    let dead: Vec<usize> = (0..2).filter(|&i| zero(&inter.coords[i])).collect();
    let [dead] = dead.as_slice() else {
        return Err(DualError::Unsupported(
            "frames need exactly one vanishing coordinate".into(),
        ));
    };
    let live = 1 - dead;
    let mut params: Vec<(String, Q, Q)> = branch
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
    let phase = match &inter.coords[live] {
        Coord::Unit(_) => {
            params.push((ROTATION_PARAM.into(), q(0), q(p.modulus as i64)));
            Affine::param(ROTATION_PARAM)
        }
        _ => Affine::default(),
    };
    let base = BasePoint { live, phase };
    let mut vectors = patch_tangents(p, &branch.parametrization, &base);
    vectors.extend(patch_tangents(other, &branch.parametrization, &base));
    Ok(TangentFrame {
        modulus: p.modulus,
        params,
        vectors,
    })
}

/// A transversality check: the frame and its rank verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transversality {
    pub name: String,
    pub expected: usize,
    pub frame: TangentFrame,
    pub verdict: RankVerdict,
}

pub fn transversality(
    name: &str,
    p: &ParamPatch,
    other: &ParamPatch,
    inter: &Intersection,
    branch: &Branch,
    budget: usize,
) -> Result<Transversality, DualError> {
    let frame = intersection_frame(p, other, inter, branch)?;
    // Transversal in the 6-manifold S³ × S³.
    let expected = 6;
    let verdict = tangent_rank(&frame, expected, budget)?;
    Ok(Transversality {
        name: name.to_string(),
        expected,
        frame,
        verdict,
    })
}
