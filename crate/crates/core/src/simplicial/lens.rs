//! Equivariant models of S³ with the rotation action `(x₁, x₂) ↦ (ζx₁, ζ^q x₂)`.
//!
//! The base model is the join of two `N`-gons, where `N` is the least multiple
//! of `m` with `N ≥ 3`; the generator rotates the first polygon by `c = N/m`
//! steps and the second by `q·c` steps.

use serde::{Deserialize, Serialize};

use super::action::{quotient, GroupAction, Quotient};
use super::complex::{SimplicialComplex, SimplicialMap};
use super::construct::{join, polygon};
use super::subdivision::barycentric_subdivision;
use super::SimplicialError;

/// Which subdivision of the join carries the action in product pipelines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum S3Model {
    /// `sd(P_N * P_N)`.
    SubdividedJoin,
    /// `sd(P_N) * sd(P_N)`, about 36 times smaller in top simplices.
    JoinOfSubdivisions,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_params(m: usize, q: usize) -> Result<(), SimplicialError> {
    if m < 2 {
        return Err(SimplicialError::Invalid(format!(
            "order must be at least 2, got {m}"
        )));
    }
    if gcd(q % m, m) != 1 {
        return Err(SimplicialError::Invalid(format!(
            "twist {q} is not coprime to {m}"
        )));
    }
    Ok(())
}

/// Polygon size and step: `(N, c)` with `N = c·m ≥ 3`.
pub fn polygon_size(m: usize) -> (usize, usize) {
    let c = 3usize.div_ceil(m);
    (c * m, c)
}

fn rotation(n: usize, step: usize) -> Vec<u32> {
    (0..n).map(|v| ((v + step) % n) as u32).collect()
}

/// `P_N * P_N` with the `(1, q)` rotation of order `m`.
pub fn rotation_join(m: usize, q: usize) -> Result<GroupAction, SimplicialError> {
    check_params(m, q)?;
    let (n, c) = polygon_size(m);
    let p = polygon(n)?;
    let k = join(&p, &p);
    let mut g = rotation(n, c);
    g.extend(rotation(n, (q % m) * c).into_iter().map(|v| v + n as u32));
    GroupAction::new(k, SimplicialMap { vertex_map: g }, m)
}

/// A model of S³ on which every power of the generator is strictly
/// order-preserving on every simplex.
pub fn s3_with_action(m: usize, q: usize, model: S3Model) -> Result<GroupAction, SimplicialError> {
    match model {
        S3Model::SubdividedJoin => {
            let base = rotation_join(m, q)?;
            Ok(barycentric_subdivision(base.complex(), Some(&base))?
                .action
                .expect("action supplied"))
        }
        S3Model::JoinOfSubdivisions => {
            check_params(m, q)?;
            let (n, c) = polygon_size(m);
            let p = polygon(n)?;
            let side = |step: usize| -> Result<GroupAction, SimplicialError> {
                let a = GroupAction::new(
                    p.clone(),
                    SimplicialMap {
                        vertex_map: rotation(n, step),
                    },
                    m,
                )?;
                Ok(barycentric_subdivision(&p, Some(&a))?
                    .action
                    .expect("action supplied"))
            };
            let left = side(c)?;
            let right = side((q % m) * c)?;
            let k: SimplicialComplex = join(left.complex(), right.complex());
            let off = left.complex().vertex_bound() as u32;
            let mut g = left.generator().vertex_map.clone();
            g.extend(right.generator().vertex_map.iter().map(|&v| v + off));
            GroupAction::new(k, SimplicialMap { vertex_map: g }, m)
        }
    }
}

/// The lens space `L(m, q)` as the quotient of the rotation join.
pub fn lens_space(m: usize, q: usize) -> Result<Quotient, SimplicialError> {
    quotient(&rotation_join(m, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::CoefficientRing;

    #[test]
    fn model_sizes() {
        assert_eq!(polygon_size(2), (4, 2));
        assert_eq!(polygon_size(7), (7, 1));
        let a = s3_with_action(3, 1, S3Model::SubdividedJoin).unwrap();
        assert_eq!(a.complex().count(3), 9 * 24);
        let b = s3_with_action(3, 1, S3Model::JoinOfSubdivisions).unwrap();
        assert_eq!(b.complex().count(3), 36);
        assert_eq!(
            b.complex().homology(CoefficientRing::Integers).betti(),
            vec![1, 0, 0, 1]
        );
    }

    #[test]
    fn rejects_non_coprime_twist() {
        assert!(rotation_join(4, 2).is_err());
    }
}
