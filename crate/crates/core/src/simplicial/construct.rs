use super::complex::SimplicialComplex;
use super::product::staircase_product;
use super::SimplicialError;

pub fn point() -> SimplicialComplex {
    SimplicialComplex::from_maximal(1, vec![vec![0]]).expect("valid")
}

/// The full `n`-simplex on vertices `0..=n`.
pub fn simplex(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_maximal(n + 1, vec![(0..=n as u32).collect()]).expect("valid")
}

/// Boundary of the `(n+1)`-simplex, a triangulated `Sⁿ` on `n + 2` vertices.
pub fn boundary_sphere(n: usize) -> SimplicialComplex {
    let verts = n as u32 + 2;
    let facets = (0..verts).map(|skip| (0..verts).filter(|&v| v != skip).collect());
    SimplicialComplex::from_maximal(verts as usize, facets).expect("valid")
}

/// The circle with `m ≥ 3` vertices and edges `{i, i+1 mod m}`.
pub fn polygon(m: usize) -> Result<SimplicialComplex, SimplicialError> {
    if m < 3 {
        return Err(SimplicialError::PolygonTooSmall(m));
    }
    let edges = (0..m as u32).map(|i| vec![i, (i + 1) % m as u32]);
    SimplicialComplex::from_maximal(m, edges)
}

/// Wedge of pointed complexes: vertex 0 is the common basepoint, followed by
/// the remaining vertices of each summand in order.
pub fn wedge(pieces: &[(SimplicialComplex, u32)]) -> Result<SimplicialComplex, SimplicialError> {
    let mut maximal = Vec::new();
    let mut next = 1u32;
    for (k, base) in pieces {
        if !k.contains_vertex(*base) {
            return Err(SimplicialError::Invalid(format!(
                "basepoint {base} is not a vertex"
            )));
        }
        let mut map = vec![u32::MAX; k.vertex_bound()];
        for &v in k.vertices() {
            if v == *base {
                map[v as usize] = 0;
            } else {
                map[v as usize] = next;
                next += 1;
            }
        }
        maximal.extend(
            k.maximal_simplices()
                .into_iter()
                .map(|s| s.into_iter().map(|v| map[v as usize]).collect()),
        );
    }
    if pieces.is_empty() {
        return Ok(point());
    }
    SimplicialComplex::from_maximal(next as usize, maximal)
}

/// Join with `L` shifted past `K`; returns the complex and the shift.
pub fn join_with_offsets(k: &SimplicialComplex, l: &SimplicialComplex) -> (SimplicialComplex, u32) {
    let off = k.vertex_bound() as u32;
    let bound = k.vertex_bound() + l.vertex_bound();
    let mk = k.maximal_simplices();
    let ml: Vec<Vec<u32>> = l
        .maximal_simplices()
        .into_iter()
        .map(|s| s.into_iter().map(|v| v + off).collect())
        .collect();
    let maximal: Vec<Vec<u32>> = if mk.is_empty() {
        ml
    } else if ml.is_empty() {
        mk
    } else {
        mk.iter()
            .flat_map(|a| ml.iter().map(move |b| a.iter().chain(b).copied().collect()))
            .collect()
    };
    (
        SimplicialComplex::from_maximal(bound, maximal).expect("disjoint vertex ranges"),
        off,
    )
}

/// Join: all `K`-vertices precede all `L`-vertices.
pub fn join(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    join_with_offsets(k, l).0
}

/// Cone with apex 0.
pub fn cone(k: &SimplicialComplex) -> SimplicialComplex {
    join(&point(), k)
}

/// Staircase triangulation of the torus `polygon(n) × polygon(n)`.
pub fn staircase_torus(n: usize) -> Result<SimplicialComplex, SimplicialError> {
    let p = polygon(n)?;
    Ok(staircase_product(&p, &p))
}

/// The minimal six-vertex triangulation of the real projective plane.
pub fn rp2_six_vertex() -> SimplicialComplex {
    let facets: [[u32; 3]; 10] = [
        [1, 2, 4],
        [1, 2, 6],
        [1, 3, 5],
        [1, 3, 6],
        [1, 4, 5],
        [2, 3, 4],
        [2, 3, 5],
        [2, 5, 6],
        [3, 4, 6],
        [4, 5, 6],
    ];
    SimplicialComplex::from_maximal(6, facets.iter().map(|f| f.iter().map(|v| v - 1).collect()))
        .expect("valid")
}
