//! Free cyclic actions and their quotients.

use std::collections::VecDeque;

use super::complex::{SimplicialComplex, SimplicialMap};
use super::subdivision::barycentric_subdivision;
use super::SimplicialError;

/// A cyclic group of order `m` acting simplicially and freely.
#[derive(Clone, Debug)]
pub struct GroupAction {
    complex: SimplicialComplex,
    generator: SimplicialMap,
    order: usize,
}

impl GroupAction {
    /// Validates that `generator` is an automorphism of order `m` with no
    /// short vertex orbit and no simplex fixed setwise by a nontrivial power.
    pub fn new(
        complex: SimplicialComplex,
        generator: SimplicialMap,
        order: usize,
    ) -> Result<Self, SimplicialError> {
        if order < 2 {
            return Err(SimplicialError::Invalid(format!(
                "action order must be at least 2, got {order}"
            )));
        }
        generator.check(&complex, &complex)?;
        let verts = complex.vertices();
        let mut seen = vec![false; complex.vertex_bound()];
        for &v in verts {
            let w = generator.apply(v);
            if !complex.contains_vertex(w) || std::mem::replace(&mut seen[w as usize], true) {
                return Err(SimplicialError::Invalid(
                    "generator is not a bijection on vertices".into(),
                ));
            }
        }
        for &v in verts {
            let mut w = v;
            for k in 1..=order {
                w = generator.apply(w);
                if w == v && k < order {
                    return Err(SimplicialError::NotFree(format!(
                        "vertex {v} has orbit of length {k}"
                    )));
                }
            }
            if w != v {
                return Err(SimplicialError::Invalid(format!(
                    "generator does not have order {order}"
                )));
            }
        }
        for d in 1..=complex.dim().unwrap_or(0) {
            for s in complex.simplices(d) {
                let mut img = s.to_vec();
                for k in 1..order {
                    img = generator.image(&img);
                    if img == s {
                        return Err(SimplicialError::NotFree(format!(
                            "simplex {s:?} fixed by power {k}"
                        )));
                    }
                }
            }
        }
        Ok(GroupAction {
            complex,
            generator,
            order,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn generator(&self) -> &SimplicialMap {
        &self.generator
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The map `g^k`.
    pub fn power(&self, k: usize) -> SimplicialMap {
        let mut map: Vec<u32> = (0..self.complex.vertex_bound() as u32).collect();
        for _ in 0..k % self.order {
            for v in map.iter_mut() {
                *v = self.generator.apply(*v);
            }
        }
        SimplicialMap { vertex_map: map }
    }

    /// Whether closed vertex stars of distinct translates are disjoint, i.e.
    /// every vertex is at edge distance at least 3 from its other translates.
    pub fn stars_disjoint(&self) -> bool {
        let k = &self.complex;
        let n = k.vertex_bound();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for e in k.simplices(1) {
            adj[e[0] as usize].push(e[1]);
            adj[e[1] as usize].push(e[0]);
        }
        let mut dist = vec![u32::MAX; n];
        let mut touched = Vec::new();
        for &v in k.vertices() {
            let mut queue = VecDeque::from([v]);
            dist[v as usize] = 0;
            touched.push(v);
            while let Some(u) = queue.pop_front() {
                let du = dist[u as usize];
                if du == 2 {
                    continue;
                }
                for &w in &adj[u as usize] {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = du + 1;
                        touched.push(w);
                        queue.push_back(w);
                    }
                }
            }
            let mut w = v;
            let mut ok = true;
            for _ in 1..self.order {
                w = self.generator.apply(w);
                if dist[w as usize] != u32::MAX {
                    ok = false;
                }
            }
            for t in touched.drain(..) {
                dist[t as usize] = u32::MAX;
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: SimplicialComplex,
    /// Orbit index of each vertex of the (possibly subdivided) complex.
    pub orbit_of_vertex: Vec<u32>,
    /// How many barycentric subdivisions were applied first.
    pub subdivisions: usize,
    /// The action on the complex that was actually divided out.
    pub action: GroupAction,
}

/// Orbit space of a free action, subdividing at most twice so that the
/// result is a simplicial complex. Simplex counts divide exactly by `m`.
pub fn quotient(action: &GroupAction) -> Result<Quotient, SimplicialError> {
    let mut act = action.clone();
    let mut subdivisions = 0;
    while !act.stars_disjoint() {
        if subdivisions == 2 {
            return Err(SimplicialError::NotFree(
                "closed stars of translates still meet after two subdivisions".into(),
            ));
        }
        act = barycentric_subdivision(act.complex(), Some(&act))?
            .action
            .expect("subdivision carries the action");
        subdivisions += 1;
    }
    let k = act.complex();
    let m = act.order();
    let mut orbit_of_vertex = vec![u32::MAX; k.vertex_bound()];
    let mut orbits = 0u32;
    for &v in k.vertices() {
        if orbit_of_vertex[v as usize] != u32::MAX {
            continue;
        }
        let mut w = v;
        for _ in 0..m {
            orbit_of_vertex[w as usize] = orbits;
            w = act.generator().apply(w);
        }
        orbits += 1;
    }
    let mut maximal = Vec::new();
    for s in k.maximal_simplices() {
        let img: Vec<u32> = s.iter().map(|&v| orbit_of_vertex[v as usize]).collect();
        let mut sorted = img.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimplicialError::NotFree(format!(
                "simplex {s:?} meets an orbit twice"
            )));
        }
        maximal.push(sorted);
    }
    let q = SimplicialComplex::from_maximal(orbits as usize, maximal)?;
    let fk = k.f_vector();
    let fq = q.f_vector();
    if fk.len() != fq.len() || fk.iter().zip(&fq).any(|(a, b)| *a != b * m) {
        return Err(SimplicialError::NotFree(format!(
            "quotient counts {fq:?} are not {fk:?} divided by {m}"
        )));
    }
    Ok(Quotient {
        complex: q,
        orbit_of_vertex,
        subdivisions,
        action: act,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::CoefficientRing;
    use crate::simplicial::construct::polygon;

    #[test]
    fn hexagon_mod_two() {
        let p6 = polygon(6).unwrap();
        let g = SimplicialMap::new(&p6, &p6, (0..6).map(|v| (v + 3) % 6).collect()).unwrap();
        let act = GroupAction::new(p6, g, 2).unwrap();
        let q = quotient(&act).unwrap();
        assert_eq!(q.subdivisions, 0);
        assert_eq!(q.complex.f_vector(), vec![3, 3]);
        assert_eq!(
            q.complex.homology(CoefficientRing::Integers).betti(),
            vec![1, 1]
        );
    }

    #[test]
    fn rejects_non_free() {
        let p4 = polygon(4).unwrap();
        // Reflection through vertices 0 and 2 fixes them.
        let g = SimplicialMap::new(&p4, &p4, vec![0, 3, 2, 1]).unwrap();
        assert!(GroupAction::new(p4, g, 2).is_err());
    }
}
