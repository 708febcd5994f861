//! The intersection facts behind the `(7, 2)` product, each checked exactly.

use serde::{Deserialize, Serialize};

use crate::cyclosolve::{q, Affine, Magnitude};

use super::chain::{bounding_chain_x14, classify_faces, FaceVerdict};
use super::frames::transversality;
use super::patch::{intersection_system, same_set, Coord, Geometry, ParamPatch};
use super::pattern::pattern_for;
use super::DualError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub m: u32,
    pub q: u32,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> LemmaCheck {
    LemmaCheck {
        name: name.into(),
        passed,
        detail,
    }
}

/// Pattern, the piece `A1 ∩ A4`, the faces of `X14`, and `X14 ∩ A6`, `X14 ∩ A2`,
/// under the relabelling `u` of the `(7, 2)` action.
pub fn lemma_report(u: i64, budget: usize) -> Result<LemmaReport, DualError> {
    let g = Geometry::new(7, 2)?.relabeled(u)?;
    let mut checks = Vec::new();

    let pattern = pattern_for(&g)?;
    let offsets = pattern.offsets();
    checks.push(check(
        "pattern",
        offsets == vec![3, 4] && pattern.is_symmetric() && pattern.is_shift_invariant(),
        format!("A_k meets A_j off the diagonals iff j-k ∈ {offsets:?} (mod 7)"),
    ));

    // A1 ∩ A4 = {((0, x), (0, ζ^λ x)) : λ ∈ [0, 1]}.
    let a1 = g.membrane(1);
    let a4 = g.membrane(4).rename_param("t", "s");
    let inter = intersection_system(&a1, &a4)?.expect("first points are compatible");
    let sol = inter.solve()?;
    let expected = ParamPatch::new(
        "E",
        7,
        vec![("lambda".into(), q(0), q(1))],
        [Coord::Zero, Coord::Unit("x".into())],
        [Affine::default(), Affine::term("lambda", q(u))],
    )?;
    let mut relative = Vec::new();
    for b in &sol.branches {
        let piece = inter.piece(&a1, b)?;
        if !g
            .diagonals()
            .iter()
            .any(|d| super::patch::contains(d, &piece).unwrap_or(false))
        {
            relative.push((b.clone(), piece));
        }
    }
    match relative.as_slice() {
        [(b, piece)] => {
            let eq = same_set(piece, &expected)?;
            checks.push(check(
                "A1∩A4 piece",
                eq && piece.dimension() == 2,
                format!("{b}; dimension {}", piece.dimension()),
            ));
            let t = transversality("A1∩A4", &a1, &a4, &inter, b, budget)?;
            checks.push(check(
                "A1∩A4 transversal",
                t.verdict.is_certified(),
                format!("rank 6: {}", t.verdict.label()),
            ));
        }
        _ => checks.push(check(
            "A1∩A4 piece",
            false,
            format!("{} relative pieces", relative.len()),
        )),
    }

    let x14 = bounding_chain_x14(&g);
    let faces = classify_faces(&g, &x14)?;
    let want = [
        ("t=0", FaceVerdict::InDiagonal(0)),
        ("t=1", FaceVerdict::InDiagonal(4)),
        ("r=0", FaceVerdict::Intersection { k: 1, j: 4 }),
    ];
    let got: Vec<(&str, &FaceVerdict)> = faces
        .iter()
        .map(|f| (f.face.as_str(), &f.verdict))
        .collect();
    checks.push(check(
        "X14 boundary",
        got.len() == 3
            && want
                .iter()
                .zip(&got)
                .all(|((a, b), (c, d))| a == c && b == *d),
        format!("{got:?}"),
    ));

    let a6 = g.membrane(6).rename_param("t", "s");
    let empty = match intersection_system(&x14, &a6)? {
        None => true,
        Some(i) => i.solve()?.is_empty(),
    };
    checks.push(check(
        "X14∩A6",
        empty,
        if empty {
            "empty".into()
        } else {
            "nonempty".into()
        },
    ));

    let a2 = g.membrane(2).rename_param("t", "s");
    let slice = a2.restrict_first([Coord::One, Coord::Zero])?;
    let inter = intersection_system(&x14, &a2)?.expect("first points are compatible");
    let sol = inter.solve()?;
    match sol.branches.as_slice() {
        [b] => {
            let piece = inter.piece(&x14, b)?;
            let t_form = Affine::parse("1/4 + s/4").map_err(DualError::from)?;
            let shape = b.pattern.get("r") == Some(&Magnitude::Unit)
                && b.pattern.get("x") == Some(&Magnitude::Zero)
                && b.parametrization.get("t") == Some(&t_form)
                && b.ranges.get("s") == Some(&(q(0), q(1)));
            let eq = same_set(&piece, &slice)?;
            checks.push(check("X14∩A2 piece", shape && eq, format!("{b}")));
            let t = transversality("X14∩A2", &x14, &a2, &inter, b, budget)?;
            checks.push(check(
                "X14∩A2 transversal",
                t.verdict.is_certified(),
                format!("rank 6: {}", t.verdict.label()),
            ));
        }
        bs => checks.push(check(
            "X14∩A2 piece",
            false,
            format!("{} branches", bs.len()),
        )),
    }
    Ok(LemmaReport { m: 7, q: 2, checks })
}
