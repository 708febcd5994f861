//! Staircase (Eilenberg–Zilber) triangulations of products.
//!
//! Product vertex `(a, b)` gets index `a · |V_L| + b`, so the vertex order is
//! lexicographic and every staircase simplex is strictly increasing.

use super::complex::{SimplicialComplex, SimplicialMap};
use super::SimplicialError;

#[inline]
pub fn product_vertex(a: u32, b: u32, l_bound: usize) -> u32 {
    a * l_bound as u32 + b
}

/// Monotone lattice paths from `(0,0)` to `(p,q)`, as visited index pairs.
pub fn lattice_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    fn go(p: usize, q: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (i, j) = *path.last().expect("nonempty");
        if i == p && j == q {
            out.push(path.clone());
            return;
        }
        if i < p {
            path.push((i + 1, j));
            go(p, q, path, out);
            path.pop();
        }
        if j < q {
            path.push((i, j + 1));
            go(p, q, path, out);
            path.pop();
        }
    }
    go(p, q, &mut path, &mut out);
    out
}

/// Calls `emit` on every top simplex of the staircase product, pair by pair.
pub fn staircase_top_simplices(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    mut emit: impl FnMut(&[u32]),
) {
    let nl = l.vertex_bound();
    let mk = k.maximal_simplices();
    let ml = l.maximal_simplices();
    let mut paths_cache: Vec<Vec<Vec<Vec<(usize, usize)>>>> = Vec::new();
    let mut buf = Vec::new();
    for a in &mk {
        for b in &ml {
            let (p, q) = (a.len() - 1, b.len() - 1);
            if paths_cache.len() <= p {
                paths_cache.resize(p + 1, Vec::new());
            }
            if paths_cache[p].len() <= q {
                paths_cache[p].resize(q + 1, Vec::new());
            }
            if paths_cache[p][q].is_empty() {
                paths_cache[p][q] = lattice_paths(p, q);
            }
            for path in &paths_cache[p][q] {
                buf.clear();
                buf.extend(path.iter().map(|&(i, j)| product_vertex(a[i], b[j], nl)));
                emit(&buf);
            }
        }
    }
}

/// The staircase triangulation of `|K| × |L|`.
pub fn staircase_product(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let bound = k.vertex_bound() * l.vertex_bound();
    let mut by_dim: Vec<Vec<u32>> = Vec::new();
    staircase_top_simplices(k, l, |s| {
        let d = s.len() - 1;
        if by_dim.len() <= d {
            by_dim.resize(d + 1, Vec::new());
        }
        by_dim[d].extend_from_slice(s);
    });
    SimplicialComplex::close_downward(bound, by_dim)
}

/// The graph `{(v, f(v))}` of `f : K → L` as a subcomplex of the staircase product.
///
/// `f` must be simplicial and strictly increasing on every simplex of `K`;
/// otherwise the first offending simplex is returned as a witness.
pub fn graph_subcomplex(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    f: &SimplicialMap,
) -> Result<SimplicialComplex, SimplicialError> {
    f.check(k, l)?;
    if let Some(w) = f.order_witness(k) {
        return Err(SimplicialError::NotOrderPreserving(w));
    }
    let nl = l.vertex_bound();
    let maximal = k.maximal_simplices().into_iter().map(|s| {
        s.into_iter()
            .map(|v| product_vertex(v, f.apply(v), nl))
            .collect::<Vec<u32>>()
    });
    SimplicialComplex::from_maximal(k.vertex_bound() * nl, maximal)
}
