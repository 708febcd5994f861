//! Complement models by derived subdivision of offending simplices.
//!
//! A simplex is offending when all its vertices are removed but it does not
//! lie in a single removed piece. Stellar subdivision at every offending
//! simplex (largest first) makes the union of the pieces full; the complement
//! model is then the full subcomplex on the remaining vertices. Its simplices
//! are `ρ ∪ {b_σ₁, …, b_σⱼ}` where `ρ` avoids the removed vertices,
//! `σ₁ ⊋ … ⊋ σⱼ` are offending and `ρ ∪ σ₁` is a simplex of the input.
//! Offending simplices are closed under enlargement among removed simplices,
//! so the maximal ones arise from maximal input simplices and maximal chains
//! that drop one vertex at a time.

use rustc_hash::FxHashMap;

use super::complex::{sort_dedup_tuples, SimplicialComplex};
use super::SimplicialError;

/// Membership data for the removed pieces.
pub trait PieceOracle {
    /// Index of the removed piece containing vertex `v`.
    fn piece(&self, v: u32) -> Option<u32>;
    /// Whether the increasing tuple `s`, all of whose vertices lie in `piece`,
    /// is a simplex of that piece.
    fn piece_contains(&self, piece: u32, s: &[u32]) -> bool;
}

#[derive(Clone, Debug)]
pub struct ComplementModel {
    pub complex: SimplicialComplex,
    /// Input vertex for each of the first `kept_vertices.len()` vertices.
    pub kept_vertices: Vec<u32>,
    /// Offending simplex for each barycenter vertex, following the kept ones.
    pub barycenters: Vec<Vec<u32>>,
}

struct PieceList<'a> {
    piece_of: Vec<u32>,
    pieces: &'a [SimplicialComplex],
}

impl PieceOracle for PieceList<'_> {
    fn piece(&self, v: u32) -> Option<u32> {
        let p = self.piece_of[v as usize];
        (p != u32::MAX).then_some(p)
    }
    fn piece_contains(&self, piece: u32, s: &[u32]) -> bool {
        self.pieces[piece as usize].contains(s)
    }
}

/// Complement of vertex-disjoint subcomplexes of `K`.
pub fn complement_model(
    k: &SimplicialComplex,
    removed: &[SimplicialComplex],
) -> Result<ComplementModel, SimplicialError> {
    let mut piece_of = vec![u32::MAX; k.vertex_bound()];
    for (p, r) in removed.iter().enumerate() {
        for &v in r.vertices() {
            if v as usize >= k.vertex_bound() || !k.contains_vertex(v) {
                return Err(SimplicialError::Invalid(format!(
                    "removed vertex {v} is not in the complex"
                )));
            }
            if piece_of[v as usize] != u32::MAX {
                return Err(SimplicialError::Overlap(v));
            }
            piece_of[v as usize] = p as u32;
        }
        for d in 1..=r.dim().unwrap_or(0) {
            if let Some(s) = r.simplices(d).find(|s| !k.contains(s)) {
                return Err(SimplicialError::Invalid(format!(
                    "removed simplex {s:?} is not in the complex"
                )));
            }
        }
    }
    let oracle = PieceList {
        piece_of,
        pieces: removed,
    };
    let maximal = k.maximal_simplices();
    Ok(complement_model_streaming(
        k.vertex_bound(),
        |emit| maximal.iter().for_each(|s| emit(s)),
        &oracle,
    ))
}

fn is_offending(s: &[u32], oracle: &dyn PieceOracle) -> bool {
    let first = oracle
        .piece(s[0])
        .expect("only removed vertices are tested");
    if s.iter().any(|&v| oracle.piece(v) != Some(first)) {
        return true;
    }
    !oracle.piece_contains(first, s)
}

/// Complement model from a stream of the input's maximal simplices.
pub fn complement_model_streaming(
    vertex_bound: usize,
    for_each_maximal: impl FnOnce(&mut dyn FnMut(&[u32])),
    oracle: &dyn PieceOracle,
) -> ComplementModel {
    let bound = vertex_bound as u32;
    let mut bary: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
    let mut bary_list: Vec<Vec<u32>> = Vec::new();
    let mut by_dim: Vec<Vec<u32>> = Vec::new();
    let mut kept_seen = vec![false; vertex_bound];
    {
        let emit_simplex = |s: &[u32], by_dim: &mut Vec<Vec<u32>>| {
            if s.is_empty() {
                return;
            }
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].extend_from_slice(s);
        };
        let mut handle = |tau: &[u32]| {
            let mut rho: Vec<u32> = Vec::with_capacity(tau.len());
            let mut r: Vec<u32> = Vec::with_capacity(tau.len());
            for &v in tau {
                if oracle.piece(v).is_some() {
                    r.push(v);
                } else {
                    rho.push(v);
                    kept_seen[v as usize] = true;
                }
            }
            if r.len() < 2 || !is_offending(&r, oracle) {
                emit_simplex(&rho, &mut by_dim);
                return;
            }
            // Depth-first over chains that drop one vertex at a time.
            let mut chain_ids: Vec<u32> = Vec::new();
            let mut stack: Vec<(Vec<u32>, usize)> = vec![(r, 0)];
            let mut out = Vec::new();
            let mut bary_id = |s: &Vec<u32>| -> u32 {
                if let Some(&id) = bary.get(s) {
                    return id;
                }
                let id = bound + bary_list.len() as u32;
                bary.insert(s.clone(), id);
                bary_list.push(s.clone());
                id
            };
            chain_ids.push(bary_id(&stack[0].0));
            let mut had_child: Vec<bool> = vec![false];
            while let Some((set, next)) = stack.last_mut() {
                if *next < set.len() {
                    let i = *next;
                    *next += 1;
                    let child: Vec<u32> = set
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &v)| v)
                        .collect();
                    if child.len() >= 2 && is_offending(&child, oracle) {
                        *had_child.last_mut().expect("parallel to stack") = true;
                        chain_ids.push(bary_id(&child));
                        stack.push((child, 0));
                        had_child.push(false);
                    }
                } else {
                    if !had_child.pop().expect("parallel to stack") {
                        out.clear();
                        out.extend_from_slice(&rho);
                        out.extend_from_slice(&chain_ids);
                        out.sort_unstable();
                        emit_simplex(&out, &mut by_dim);
                    }
                    stack.pop();
                    chain_ids.pop();
                }
            }
        };
        for_each_maximal(&mut handle);
    }
    // Canonical ids: kept vertices in input order, then barycenters by
    // decreasing dimension and lexicographically.
    let kept_vertices: Vec<u32> = (0..bound).filter(|&v| kept_seen[v as usize]).collect();
    let mut new_id = vec![u32::MAX; vertex_bound + bary_list.len()];
    for (i, &v) in kept_vertices.iter().enumerate() {
        new_id[v as usize] = i as u32;
    }
    let mut order: Vec<usize> = (0..bary_list.len()).collect();
    order.sort_by(|&a, &b| {
        bary_list[b]
            .len()
            .cmp(&bary_list[a].len())
            .then_with(|| bary_list[a].cmp(&bary_list[b]))
    });
    for (rank, &b) in order.iter().enumerate() {
        new_id[vertex_bound + b] = (kept_vertices.len() + rank) as u32;
    }
    let barycenters: Vec<Vec<u32>> = order.iter().map(|&b| bary_list[b].clone()).collect();
    let total = kept_vertices.len() + barycenters.len();
    for (d, flat) in by_dim.iter_mut().enumerate() {
        for s in flat.chunks_exact_mut(d + 1) {
            for v in s.iter_mut() {
                *v = new_id[*v as usize];
            }
            s.sort_unstable();
        }
        let taken = std::mem::take(flat);
        *flat = sort_dedup_tuples(taken, d + 1);
    }
    let complex = SimplicialComplex::close_downward(total, by_dim);
    ComplementModel {
        complex,
        kept_vertices,
        barycenters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::CoefficientRing;
    use crate::simplicial::complex::SimplicialMap;
    use crate::simplicial::construct::{boundary_sphere, polygon};
    use crate::simplicial::product::{graph_subcomplex, staircase_product};

    #[test]
    fn sphere_minus_point() {
        let s = boundary_sphere(2);
        let pt = SimplicialComplex::from_maximal(4, vec![vec![0]]).unwrap();
        let c = complement_model(&s, &[pt]).unwrap();
        assert_eq!(
            c.complex
                .homology(CoefficientRing::Integers)
                .betti_trimmed(),
            vec![1]
        );
    }

    #[test]
    fn torus_minus_diagonal_is_annulus() {
        let p3 = polygon(3).unwrap();
        let t = staircase_product(&p3, &p3);
        let diag = graph_subcomplex(&p3, &p3, &SimplicialMap::identity(&p3)).unwrap();
        let c = complement_model(&t, &[diag]).unwrap();
        assert_eq!(
            c.complex
                .homology(CoefficientRing::Integers)
                .betti_trimmed(),
            vec![1, 1]
        );
    }

    #[test]
    fn overlapping_pieces_are_rejected() {
        let s = boundary_sphere(2);
        let a = SimplicialComplex::from_maximal(4, vec![vec![0, 1]]).unwrap();
        let b = SimplicialComplex::from_maximal(4, vec![vec![1, 2]]).unwrap();
        assert_eq!(
            complement_model(&s, &[a, b]).unwrap_err(),
            SimplicialError::Overlap(1)
        );
    }
}
