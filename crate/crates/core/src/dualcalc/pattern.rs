//! Which membranes meet away from the diagonals.

use serde::{Deserialize, Serialize};

use super::patch::{contains, Geometry, ParamPatch};
use super::DualError;

/// One connected slice of an intersection, parametrized like the first patch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub patch: ParamPatch,
    pub dimension: usize,
    /// Diagonals containing the whole piece.
    pub in_diagonals: Vec<u32>,
    pub description: String,
}

impl Piece {
    pub fn is_relative(&self) -> bool {
        self.in_diagonals.is_empty()
    }
}

/// All pieces of `P ∩ Q`; pieces inside some `Δ_l` are flagged.
pub fn pieces(g: &Geometry, p: &ParamPatch, other: &ParamPatch) -> Result<Vec<Piece>, DualError> {
    let Some(inter) = super::patch::intersection_system(p, other)? else {
        return Ok(Vec::new());
    };
    let sol = inter.solve()?;
    let diagonals = g.diagonals();
    let mut out = Vec::new();
    for b in &sol.branches {
        let patch = inter.piece(p, b)?;
        let mut in_diagonals = Vec::new();
        for (l, d) in diagonals.iter().enumerate() {
            if contains(d, &patch)? {
                in_diagonals.push(l as u32);
            }
        }
        out.push(Piece {
            dimension: patch.dimension(),
            patch,
            in_diagonals,
            description: b.to_string(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    /// No common point at all.
    Empty,
    /// Every common point lies on one of the listed diagonals.
    Diagonal(Vec<u32>),
    /// A piece off the diagonals of the given dimension.
    Relative { dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCell {
    pub k: u32,
    pub j: u32,
    pub kind: CellKind,
    pub pieces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionPattern {
    pub m: u32,
    pub q: u32,
    /// Row-major over ordered pairs `k ≠ j`.
    pub cells: Vec<PatternCell>,
}

impl IntersectionPattern {
    pub fn cell(&self, k: u32, j: u32) -> Option<&PatternCell> {
        self.cells
            .iter()
            .find(|c| c.k == k % self.m && c.j == j % self.m)
    }

    /// Whether `A_k` and `A_j` meet off the diagonals.
    pub fn meets(&self, k: u32, j: u32) -> bool {
        self.cell(k, j)
            .is_some_and(|c| matches!(c.kind, CellKind::Relative { .. }))
    }

    pub fn is_symmetric(&self) -> bool {
        self.cells
            .iter()
            .all(|c| self.cell(c.j, c.k).is_some_and(|d| d.kind == c.kind))
    }

    /// Invariance under `k → k+1, j → j+1`.
    pub fn is_shift_invariant(&self) -> bool {
        let m = self.m;
        let shifted = |k: &CellKind| match k {
            CellKind::Diagonal(ls) => {
                let mut ls: Vec<u32> = ls.iter().map(|l| (l + 1) % m).collect();
                ls.sort();
                CellKind::Diagonal(ls)
            }
            other => other.clone(),
        };
        self.cells.iter().all(|c| {
            self.cell(c.k + 1, c.j + 1)
                .is_some_and(|d| d.kind == shifted(&c.kind))
        })
    }

    /// The residues `j − k mod m` at which membranes meet off the diagonals.
    pub fn offsets(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self
            .cells
            .iter()
            .filter(|c| self.meets(c.k, c.j))
            .map(|c| (c.j + self.m - c.k) % self.m)
            .collect();
        d.sort();
        d.dedup();
        d
    }

    /// A grid with `·` for empty, `Δ` for diagonal-only, and the dimension
    /// of the relative piece otherwise.
    pub fn render(&self) -> String {
        let mut out = String::from("    ");
        for j in 0..self.m {
            out += &format!("{:>3}", format!("A{j}"));
        }
        out.push('\n');
        for k in 0..self.m {
            out += &format!("{:>4}", format!("A{k}"));
            for j in 0..self.m {
                let s = match self.cell(k, j).map(|c| &c.kind) {
                    None => "-".to_string(),
                    Some(CellKind::Empty) => "·".to_string(),
                    Some(CellKind::Diagonal(_)) => "Δ".to_string(),
                    Some(CellKind::Relative { dimension }) => dimension.to_string(),
                };
                out += &format!("{s:>3}");
            }
            out.push('\n');
        }
        out
    }
}

/// Intersection type of every pair of membranes `A_k`, `A_j`, `k ≠ j`.
pub fn intersection_pattern(m: u32, q_: u32) -> Result<IntersectionPattern, DualError> {
    pattern_for(&Geometry::new(m, q_)?)
}

pub fn pattern_for(g: &Geometry) -> Result<IntersectionPattern, DualError> {
    let (m, q_) = (g.m, g.q);
    let mut cells = Vec::new();
    for k in 0..m {
        let a = g.membrane(k);
        for j in (0..m).filter(|&j| j != k) {
            let b = g.membrane(j).rename_param("t", "s");
            let ps = pieces(g, &a, &b)?;
            let relative: Vec<&Piece> = ps.iter().filter(|p| p.is_relative()).collect();
            let kind = if let Some(d) = relative.iter().map(|p| p.dimension).max() {
                CellKind::Relative { dimension: d }
            } else if ps.is_empty() {
                CellKind::Empty
            } else {
                let mut ds: Vec<u32> = ps
                    .iter()
                    .flat_map(|p| p.in_diagonals.iter().copied())
                    .collect();
                ds.sort();
                ds.dedup();
                CellKind::Diagonal(ds)
            };
            cells.push(PatternCell {
                k,
                j,
                kind,
                pieces: relative.iter().map(|p| p.description.clone()).collect(),
            });
        }
    }
    Ok(IntersectionPattern { m, q: q_, cells })
}
