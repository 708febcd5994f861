use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::chaincore::{
    homology, homology_of_operator, ChainComplex, ChainOperator, CoefficientRing, HomologySummary,
    IntMatrix, SparseVec,
};

use super::SimplicialError;

/// A finite simplicial complex on vertices `0..vertex_bound`, ordered numerically.
///
/// `simplices[d]` is a flat array of `(d+1)`-tuples, each strictly increasing,
/// sorted lexicographically without repeats, and closed under taking faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertex_bound: usize,
    simplices: Vec<Vec<u32>>,
}

/// Sorts a flat array of `width`-tuples lexicographically and drops repeats.
pub(crate) fn sort_dedup_tuples(data: Vec<u32>, width: usize) -> Vec<u32> {
    let n = data.len() / width;
    if n == 0 {
        return data;
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    let key = |i: u32| &data[i as usize * width..(i as usize + 1) * width];
    order.sort_unstable_by(|&a, &b| key(a).cmp(key(b)));
    let mut out = Vec::with_capacity(data.len());
    let mut last: Option<u32> = None;
    for i in order {
        if last.is_some_and(|l| key(l) == key(i)) {
            continue;
        }
        out.extend_from_slice(key(i));
        last = Some(i);
    }
    out
}

impl SimplicialComplex {
    pub fn empty(vertex_bound: usize) -> Self {
        SimplicialComplex {
            vertex_bound,
            simplices: Vec::new(),
        }
    }

    /// The downward closure of the given simplices; tuples are sorted first.
    pub fn from_maximal(
        vertex_bound: usize,
        maximal: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, SimplicialError> {
        let mut by_dim: Vec<Vec<u32>> = Vec::new();
        for mut s in maximal {
            if s.is_empty() {
                continue;
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::RepeatedVertex(s));
            }
            if let Some(&v) = s.iter().find(|&&v| v as usize >= vertex_bound) {
                return Err(SimplicialError::VertexOutOfRange {
                    vertex: v,
                    bound: vertex_bound,
                });
            }
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].extend_from_slice(&s);
        }
        Ok(Self::close_downward(vertex_bound, by_dim))
    }

    /// Closes per-dimension flat tuple lists (each tuple already increasing).
    pub(crate) fn close_downward(vertex_bound: usize, mut by_dim: Vec<Vec<u32>>) -> Self {
        let top = by_dim.len();
        let mut simplices: Vec<Vec<u32>> = vec![Vec::new(); top];
        for d in (0..top).rev() {
            let w = d + 1;
            let mut flat = std::mem::take(&mut by_dim[d]);
            if d + 1 < top {
                let upper = &simplices[d + 1];
                let uw = d + 2;
                flat.reserve(upper.len() / uw * uw * w);
                for s in upper.chunks_exact(uw) {
                    for skip in 0..uw {
                        flat.extend(
                            s.iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v),
                        );
                    }
                }
            }
            simplices[d] = sort_dedup_tuples(flat, w);
        }
        while simplices.last().is_some_and(|s| s.is_empty()) {
            simplices.pop();
        }
        SimplicialComplex {
            vertex_bound,
            simplices,
        }
    }

    pub fn vertex_bound(&self) -> usize {
        self.vertex_bound
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, |s| s.len() / (d + 1))
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.simplices.len()).map(|d| self.count(d)).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn vertices(&self) -> &[u32] {
        self.simplices.first().map_or(&[], |v| v.as_slice())
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[u32] {
        &self.simplices[d][i * (d + 1)..(i + 1) * (d + 1)]
    }

    pub fn simplices(&self, d: usize) -> impl ExactSizeIterator<Item = &[u32]> {
        let w = d + 1;
        self.simplices
            .get(d)
            .map_or(&[][..], |s| s.as_slice())
            .chunks_exact(w)
    }

    pub fn flat(&self, d: usize) -> &[u32] {
        self.simplices.get(d).map_or(&[], |s| s.as_slice())
    }

    /// Position of an increasing tuple in its dimension's list.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        let flat = self.simplices.get(d)?;
        let w = d + 1;
        let n = flat.len() / w;
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match flat[mid * w..(mid + 1) * w].cmp(s) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertices().binary_search(&v).is_ok()
    }

    /// Simplices that are faces of no other simplex.
    pub fn maximal_simplices(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for d in 0..self.simplices.len() {
            let mut is_face = vec![false; self.count(d)];
            if d + 1 < self.simplices.len() {
                let mut face = Vec::with_capacity(d + 1);
                for s in self.simplices(d + 1) {
                    for skip in 0..=d + 1 {
                        face.clear();
                        face.extend(
                            s.iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v),
                        );
                        if let Some(i) = self.index_of(&face) {
                            is_face[i] = true;
                        }
                    }
                }
            }
            out.extend(
                self.simplices(d)
                    .zip(is_face)
                    .filter(|(_, f)| !f)
                    .map(|(s, _)| s.to_vec()),
            );
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        crate::chaincore::euler_characteristic(&self.f_vector())
    }

    /// Checks strict ordering, sortedness and downward closure.
    pub fn validate(&self) -> Result<(), SimplicialError> {
        let mut face = Vec::new();
        for d in 0..self.simplices.len() {
            let mut prev: Option<&[u32]> = None;
            for s in self.simplices(d) {
                if s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(SimplicialError::Malformed(format!(
                        "simplex {s:?} not strictly increasing"
                    )));
                }
                if s.iter().any(|&v| v as usize >= self.vertex_bound) {
                    return Err(SimplicialError::Malformed(format!(
                        "simplex {s:?} has a vertex out of range"
                    )));
                }
                if prev.is_some_and(|p| p >= s) {
                    return Err(SimplicialError::Malformed(format!(
                        "dimension {d} list not sorted at {s:?}"
                    )));
                }
                prev = Some(s);
                if d > 0 {
                    for skip in 0..=d {
                        face.clear();
                        face.extend(
                            s.iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v),
                        );
                        if !self.contains(&face) {
                            return Err(SimplicialError::Malformed(format!(
                                "face {face:?} of {s:?} missing"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `∂_d` as an explicit integer matrix.
    pub fn boundary_matrix(&self, d: usize) -> IntMatrix {
        let rows = if d == 0 { 0 } else { self.count(d - 1) };
        let mut raw = Vec::new();
        let cols = (0..self.count(d))
            .map(|j| {
                self.boundary_into(d, j, &mut raw);
                SparseVec::from_sorted_unchecked(
                    raw.iter().map(|&(i, v)| (i, BigInt::from(v))).collect(),
                )
            })
            .collect();
        IntMatrix::from_columns(rows, cols).expect("faces index into the lower dimension")
    }

    pub fn chain_complex(&self, ring: CoefficientRing) -> ChainComplex {
        let cells = self.f_vector();
        let boundaries = (1..cells.len()).map(|d| self.boundary_matrix(d)).collect();
        ChainComplex::new(ring, cells, boundaries).expect("simplicial boundaries square to zero")
    }

    /// Homology with trailing degrees up to the dimension.
    pub fn homology(&self, ring: CoefficientRing) -> HomologySummary {
        match ring {
            CoefficientRing::Integers if self.total_simplices() < 20_000 => {
                homology(&self.chain_complex(ring))
            }
            _ => homology_of_operator(self, ring),
        }
    }

    /// Relabels vertices through an injective map into `0..bound`.
    pub fn relabel(&self, bound: usize, map: impl Fn(u32) -> u32) -> Result<Self, SimplicialError> {
        let mut by_dim = Vec::with_capacity(self.simplices.len());
        for d in 0..self.simplices.len() {
            let mut flat = Vec::with_capacity(self.simplices[d].len());
            let mut s = Vec::with_capacity(d + 1);
            for t in self.simplices(d) {
                s.clear();
                s.extend(t.iter().map(|&v| map(v)));
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(SimplicialError::RepeatedVertex(s.clone()));
                }
                flat.extend_from_slice(&s);
            }
            by_dim.push(sort_dedup_tuples(flat, d + 1));
        }
        Ok(SimplicialComplex {
            vertex_bound: bound,
            simplices: by_dim,
        })
    }

    /// Complex file: `dim vertex_count`, then one maximal simplex per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let dim = self.dim().map_or(-1, |d| d as i64);
        let _ = writeln!(out, "{dim} {}", self.vertex_bound);
        for s in self.maximal_simplices() {
            let line: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SimplicialError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| SimplicialError::Parse {
            line: 0,
            msg: "empty file".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(SimplicialError::Parse {
                line: hl,
                msg: "header must be `dim vertex_count`".into(),
            });
        }
        let dim: i64 = parts[0].parse().map_err(|_| SimplicialError::Parse {
            line: hl,
            msg: "bad dim".into(),
        })?;
        let bound: usize = parts[1].parse().map_err(|_| SimplicialError::Parse {
            line: hl,
            msg: "bad vertex count".into(),
        })?;
        let mut maximal = Vec::new();
        for (ln, l) in lines {
            let s: Result<Vec<u32>, _> = l.split_whitespace().map(str::parse).collect();
            let s = s.map_err(|_| SimplicialError::Parse {
                line: ln,
                msg: format!("bad simplex `{l}`"),
            })?;
            if s.iter().any(|&v| v as usize >= bound) {
                return Err(SimplicialError::Parse {
                    line: ln,
                    msg: "vertex out of range".into(),
                });
            }
            maximal.push(s);
        }
        let k = SimplicialComplex::from_maximal(bound, maximal)?;
        if k.dim().map_or(-1, |d| d as i64) != dim {
            return Err(SimplicialError::Parse {
                line: hl,
                msg: format!("declared dim {dim} disagrees with contents"),
            });
        }
        Ok(k)
    }
}

impl ChainOperator for SimplicialComplex {
    fn top_degree(&self) -> Option<usize> {
        self.dim()
    }

    fn cell_count(&self, degree: usize) -> usize {
        self.count(degree)
    }

    fn boundary_into(&self, degree: usize, j: usize, out: &mut Vec<(usize, i64)>) {
        out.clear();
        if degree == 0 {
            return;
        }
        let s = self.simplex(degree, j);
        let mut face = [0u32; 32];
        // Dropping a later vertex gives a lexicographically smaller face.
        for skip in (0..=degree).rev() {
            let mut k = 0;
            for (i, &v) in s.iter().enumerate() {
                if i != skip {
                    face[k] = v;
                    k += 1;
                }
            }
            let row = self
                .index_of(&face[..degree])
                .expect("complex is closed under faces");
            out.push((row, if skip % 2 == 0 { 1 } else { -1 }));
        }
    }
}

/// A vertex map between complexes; `map[v]` is the image of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub vertex_map: Vec<u32>,
}

impl SimplicialMap {
    pub fn new(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        vertex_map: Vec<u32>,
    ) -> Result<Self, SimplicialError> {
        let f = SimplicialMap { vertex_map };
        f.check(source, target)?;
        Ok(f)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialMap {
            vertex_map: (0..k.vertex_bound() as u32).collect(),
        }
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.vertex_map[v as usize]
    }

    /// Image tuple, sorted, with repeats collapsed.
    pub fn image(&self, s: &[u32]) -> Vec<u32> {
        let mut t: Vec<u32> = s.iter().map(|&v| self.apply(v)).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn compose(&self, then: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            vertex_map: self.vertex_map.iter().map(|&v| then.apply(v)).collect(),
        }
    }

    pub fn check(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
    ) -> Result<(), SimplicialError> {
        if self.vertex_map.len() < source.vertex_bound() {
            return Err(SimplicialError::Malformed(
                "vertex map shorter than the source vertex range".into(),
            ));
        }
        for s in source.maximal_simplices() {
            let t = self.image(&s);
            if !target.contains(&t) {
                return Err(SimplicialError::NotSimplicial {
                    simplex: s,
                    image: t,
                });
            }
        }
        Ok(())
    }

    /// First simplex on which the map is not strictly increasing.
    pub fn order_witness(&self, source: &SimplicialComplex) -> Option<Vec<u32>> {
        for d in 1..=source.dim().unwrap_or(0) {
            for s in source.simplices(d) {
                if s.windows(2).any(|w| self.apply(w[0]) >= self.apply(w[1])) {
                    return Some(s.to_vec());
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_lookup() {
        let k = SimplicialComplex::from_maximal(4, vec![vec![2, 0, 1], vec![3, 2]]).unwrap();
        assert_eq!(k.f_vector(), vec![4, 4, 1]);
        assert!(k.contains(&[0, 2]));
        assert!(!k.contains(&[0, 3]));
        k.validate().unwrap();
        assert_eq!(k.maximal_simplices(), vec![vec![2, 3], vec![0, 1, 2]]);
    }

    #[test]
    fn file_round_trip() {
        let k =
            SimplicialComplex::from_maximal(5, vec![vec![0, 1, 2], vec![2, 3], vec![4]]).unwrap();
        let text = k.render();
        assert_eq!(SimplicialComplex::parse(&text).unwrap(), k);
        assert_eq!(SimplicialComplex::parse(&text).unwrap().render(), text);
    }

    #[test]
    fn rejects_repeated_vertices() {
        assert!(SimplicialComplex::from_maximal(3, vec![vec![0, 0, 1]]).is_err());
    }
}
