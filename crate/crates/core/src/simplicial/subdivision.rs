//! Barycentric subdivision with the dimension-major vertex order.
//!
//! A vertex of `sd(K)` is a simplex of `K`. Vertices are ordered first by the
//! dimension of that simplex; ties are broken by orbit index and then power
//! when an action is present, and by the lexicographic position otherwise.
//! Every simplex of `sd(K)` is a chain of strictly increasing dimensions, so
//! any dimension-preserving map is strictly increasing on it.

use super::action::GroupAction;
use super::complex::{SimplicialComplex, SimplicialMap};
use super::SimplicialError;

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// `(dimension, index)` in the original complex for each new vertex.
    pub vertex_simplex: Vec<(usize, usize)>,
    /// The induced action on the subdivision, when one was supplied.
    pub action: Option<GroupAction>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(n, &mut cur, &mut used, &mut out);
    out
}

/// Barycentric subdivision, optionally carrying a free action along.
pub fn barycentric_subdivision(
    k: &SimplicialComplex,
    action: Option<&GroupAction>,
) -> Result<Subdivision, SimplicialError> {
    let dims = k.dim().map_or(0, |d| d + 1);
    let mut offsets = vec![0usize; dims + 1];
    for d in 0..dims {
        offsets[d + 1] = offsets[d] + k.count(d);
    }
    let total = offsets[dims];
    // id_of[d][i]: new vertex id of the i-th d-simplex.
    let mut id_of: Vec<Vec<u32>> = (0..dims).map(|d| vec![u32::MAX; k.count(d)]).collect();
    let mut next_map: Option<Vec<u32>> = action.map(|_| vec![u32::MAX; total]);
    match action {
        None => {
            for d in 0..dims {
                for i in 0..k.count(d) {
                    id_of[d][i] = (offsets[d] + i) as u32;
                }
            }
        }
        Some(act) => {
            let m = act.order();
            let g = act.generator();
            for d in 0..dims {
                let mut orbit = 0usize;
                for i in 0..k.count(d) {
                    if id_of[d][i] != u32::MAX {
                        continue;
                    }
                    let mut cur = k.simplex(d, i).to_vec();
                    for power in 0..m {
                        let idx = k.index_of(&cur).ok_or_else(|| {
                            SimplicialError::Invalid(format!("image {cur:?} is not a simplex"))
                        })?;
                        if id_of[d][idx] != u32::MAX {
                            return Err(SimplicialError::NotFree(format!(
                                "simplex {:?} has an orbit shorter than {m}",
                                k.simplex(d, i)
                            )));
                        }
                        id_of[d][idx] = (offsets[d] + orbit * m + power) as u32;
                        cur = g.image(&cur);
                    }
                    if k.index_of(&cur) != Some(i) {
                        return Err(SimplicialError::NotFree(format!(
                            "generator has order other than {m}"
                        )));
                    }
                    orbit += 1;
                }
            }
            let nm = next_map.as_mut().expect("allocated with action");
            for d in 0..dims {
                for i in 0..k.count(d) {
                    let img = g.image(k.simplex(d, i));
                    let j = k.index_of(&img).expect("checked above");
                    nm[id_of[d][i] as usize] = id_of[d][j];
                }
            }
        }
    }
    let mut vertex_simplex = vec![(0usize, 0usize); total];
    for d in 0..dims {
        for i in 0..k.count(d) {
            vertex_simplex[id_of[d][i] as usize] = (d, i);
        }
    }
    let mut perm_cache: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut top: Vec<Vec<u32>> = Vec::new();
    let mut face = Vec::new();
    for s in k.maximal_simplices() {
        let n = s.len();
        if perm_cache.len() <= n {
            perm_cache.resize(n + 1, Vec::new());
        }
        if perm_cache[n].is_empty() {
            perm_cache[n] = permutations(n);
        }
        let d = n - 1;
        if top.len() <= d {
            top.resize(d + 1, Vec::new());
        }
        for p in &perm_cache[n] {
            for len in 1..=n {
                face.clear();
                face.extend(p[..len].iter().map(|&i| s[i]));
                face.sort_unstable();
                let idx = k.index_of(&face).expect("faces of a simplex are present");
                top[d].push(id_of[len - 1][idx]);
            }
        }
    }
    let complex = SimplicialComplex::close_downward(total, top);
    let action = match (action, next_map) {
        (Some(a), Some(map)) => Some(GroupAction::new(
            complex.clone(),
            SimplicialMap { vertex_map: map },
            a.order(),
        )?),
        _ => None,
    };
    Ok(Subdivision {
        complex,
        vertex_simplex,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::CoefficientRing;
    use crate::simplicial::construct::{boundary_sphere, join, polygon, simplex};

    #[test]
    fn sd_of_triangle() {
        let sd = barycentric_subdivision(&simplex(2), None).unwrap();
        assert_eq!(sd.complex.count(0), 7);
        assert_eq!(sd.complex.count(2), 6);
    }

    #[test]
    fn sd_preserves_homology() {
        let s = boundary_sphere(2);
        let sd = barycentric_subdivision(&s, None).unwrap();
        assert_eq!(
            sd.complex.homology(CoefficientRing::Integers).betti(),
            vec![1, 0, 1]
        );
    }

    #[test]
    fn subdivided_rotation_is_order_preserving() {
        let p = polygon(7).unwrap();
        let k = join(&p, &p);
        let g: Vec<u32> = (0..14)
            .map(|v| {
                if v < 7 {
                    (v + 1) % 7
                } else {
                    7 + (v - 7 + 2) % 7
                }
            })
            .collect();
        let act = GroupAction::new(k.clone(), SimplicialMap { vertex_map: g }, 7).unwrap();
        let sd = barycentric_subdivision(&k, Some(&act)).unwrap();
        assert_eq!(sd.complex.count(3), 1176);
        let a = sd.action.unwrap();
        let mut f = a.generator().clone();
        for _ in 1..7 {
            assert!(f.order_witness(&sd.complex).is_none());
            f = f.compose(a.generator());
        }
    }
}
