//! Bounding chains: patches whose faces lie on diagonals except for one face
//! equal to the relative piece of `A_k ∩ A_j`.

use serde::{Deserialize, Serialize};

use super::patch::{contains, same_set, Geometry, ParamPatch};
use super::pattern::{pattern_for, pieces, IntersectionPattern};
use super::DualError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceVerdict {
    InDiagonal(u32),
    /// Equal as a set to the relative piece of `A_k ∩ A_j`.
    Intersection {
        k: u32,
        j: u32,
    },
    Unmatched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceClass {
    pub face: String,
    pub patch: ParamPatch,
    pub verdict: FaceVerdict,
}

fn classify_face(
    g: &Geometry,
    pattern: &IntersectionPattern,
    face: &ParamPatch,
) -> Result<FaceVerdict, DualError> {
    for (l, d) in g.diagonals().iter().enumerate() {
        if contains(d, face)? {
            return Ok(FaceVerdict::InDiagonal(l as u32));
        }
    }
    for k in 0..g.m {
        for j in (k + 1)..g.m {
            if !pattern.meets(k, j) {
                continue;
            }
            let b = g.membrane(j).rename_param("t", "s");
            for p in pieces(g, &g.membrane(k), &b)? {
                if p.is_relative() && p.patch.params.len() <= 1 && same_set(&p.patch, face)? {
                    return Ok(FaceVerdict::Intersection { k, j });
                }
            }
        }
    }
    Ok(FaceVerdict::Unmatched)
}

/// Classification of every codimension-one face of `patch`.
pub fn classify_faces(g: &Geometry, patch: &ParamPatch) -> Result<Vec<FaceClass>, DualError> {
    let pattern = pattern_for(g)?;
    classify_with(g, &pattern, patch)
}

fn classify_with(
    g: &Geometry,
    pattern: &IntersectionPattern,
    patch: &ParamPatch,
) -> Result<Vec<FaceClass>, DualError> {
    patch
        .faces()?
        .into_iter()
        .map(|(face, p)| {
            Ok(FaceClass {
                verdict: classify_face(g, pattern, &p)?,
                face,
                patch: p,
            })
        })
        .collect()
}

/// Like [`classify_faces`], but an unmatched face is an error.
pub fn classify_boundary(g: &Geometry, patch: &ParamPatch) -> Result<Vec<FaceClass>, DualError> {
    let faces = classify_faces(g, patch)?;
    if let Some(f) = faces.iter().find(|f| f.verdict == FaceVerdict::Unmatched) {
        return Err(DualError::UnmatchedFace(format!(
            "{} of {}",
            f.face, patch.name
        )));
    }
    Ok(faces)
}

/// The chain with exponents `(4, 1)`, bounding `A1 ∩ A4` for `(7, 2)`.
pub fn bounding_chain_x14(g: &Geometry) -> ParamPatch {
    g.chain(4, 1).renamed("X14")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainSearch {
    Found {
        chain: ParamPatch,
        a: i64,
        b: i64,
        faces: Vec<FaceClass>,
    },
    SearchExhausted {
        k: u32,
        j: u32,
        bound: i64,
    },
}

/// First two-exponent chain, `a ∈ [0, m)` then `b ∈ [−bound, bound]`, whose
/// faces are diagonal except one equal to the relative piece of `A_k ∩ A_j`.
pub fn bounding_chain_search(
    g: &Geometry,
    k: u32,
    j: u32,
    bound: i64,
) -> Result<ChainSearch, DualError> {
    let pattern = pattern_for(g)?;
    let (k, j) = (k % g.m, j % g.m);
    let want = FaceVerdict::Intersection {
        k: k.min(j),
        j: k.max(j),
    };
    for a in 0..g.m as i64 {
        for b in -bound..=bound {
            let chain = g.chain(a, b).renamed(&format!("X{k}{j}"));
            let faces = classify_with(g, &pattern, &chain)?;
            let hits = faces.iter().filter(|f| f.verdict == want).count();
            let rest_diagonal = faces
                .iter()
                .all(|f| f.verdict == want || matches!(f.verdict, FaceVerdict::InDiagonal(_)));
            if hits == 1 && rest_diagonal {
                return Ok(ChainSearch::Found { chain, a, b, faces });
            }
        }
    }
    Ok(ChainSearch::SearchExhausted { k, j, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x14_faces() {
        let g = Geometry::new(7, 2).unwrap();
        let faces = classify_boundary(&g, &bounding_chain_x14(&g)).unwrap();
        let v: Vec<(&str, &FaceVerdict)> = faces
            .iter()
            .map(|f| (f.face.as_str(), &f.verdict))
            .collect();
        assert_eq!(
            v,
            vec![
                ("t=0", &FaceVerdict::InDiagonal(0)),
                ("t=1", &FaceVerdict::InDiagonal(4)),
                ("r=0", &FaceVerdict::Intersection { k: 1, j: 4 }),
            ]
        );
    }

    #[test]
    fn search_finds_x14_first() {
        let g = Geometry::new(7, 2).unwrap();
        match bounding_chain_search(&g, 4, 1, 7).unwrap() {
            ChainSearch::Found { a, b, .. } => assert_eq!((a, b), (4, 1)),
            other => panic!("{other:?}"),
        }
    }
}
