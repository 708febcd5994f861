//! Certified ranks of tangent frames in `ℂ⁴ = ℝ⁸`.
//!
//! A frame entry is a finite sum `Σ (a + b·i)·ζ^θ` with rational `a, b` and
//! affine `θ`. Rank `≥ r` is certified by a subdivision of the parameter box
//! with, on every cell, an `r × r` minor whose interval determinant excludes
//! zero. Minors are picked per cell by complete pivoting at the midpoint. Rank `< r` is certified when the frame is already dependent over ℚ
//! as a formal combination of `cos`/`sin` terms.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chaincore::{ColumnReduction, Rationals, SparseMatrix, SparseVec};

use super::affine::{q, Affine, Q};
use super::interval::Interval;
use super::CycloError;

pub const DEFAULT_BUDGET: usize = 1 << 14;

/// `(re + im·i)·ζ^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTerm {
    pub re: Q,
    pub im: Q,
    pub exponent: Affine,
}

impl PhaseTerm {
    pub fn new(re: Q, im: Q, exponent: Affine) -> Self {
        PhaseTerm { re, im, exponent }
    }

    pub fn real(exponent: Affine) -> Self {
        PhaseTerm::new(q(1), q(0), exponent)
    }

    pub fn imaginary(exponent: Affine) -> Self {
        PhaseTerm::new(q(0), q(1), exponent)
    }

    pub fn scaled(&self, re: &Q, im: &Q) -> Self {
        // (re + im·i)(a + b·i)
        PhaseTerm {
            re: re * &self.re - im * &self.im,
            im: re * &self.im + im * &self.re,
            exponent: self.exponent.clone(),
        }
    }
}

/// One complex coordinate of a frame vector.
pub type ComplexEntry = Vec<PhaseTerm>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentFrame {
    pub modulus: u32,
    pub params: Vec<(String, Q, Q)>,
    /// Each vector has four complex slots: two points of `ℂ²`.
    pub vectors: Vec<[ComplexEntry; 4]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Trig {
    Cos,
    Sin,
}

/// Real entry `Σ c·trig(2πθ/m)`.
type RealEntry = Vec<(Q, Trig, Affine)>;

impl TangentFrame {
    pub const AMBIENT: usize = 8;

    fn real_entries(&self, v: &[ComplexEntry; 4]) -> Vec<RealEntry> {
        let mut out = Vec::with_capacity(8);
        for slot in v {
            let (mut re, mut im) = (Vec::new(), Vec::new());
            for t in slot {
                let e = t.exponent.reduce_constant(self.modulus);
                // (a + bi)(cos φ + i sin φ)
                re.push((t.re.clone(), Trig::Cos, e.clone()));
                re.push((-t.im.clone(), Trig::Sin, e.clone()));
                im.push((t.re.clone(), Trig::Sin, e.clone()));
                im.push((t.im.clone(), Trig::Cos, e));
            }
            out.push(re.into_iter().filter(|x| !x.0.is_zero()).collect());
            out.push(im.into_iter().filter(|x| !x.0.is_zero()).collect());
        }
        out
    }

    /// Rank of the frame over ℚ as formal trigonometric combinations; the
    /// pointwise rank never exceeds it.
    pub fn formal_rank(&self) -> usize {
        let mut keys: BTreeMap<(usize, Trig, String), usize> = BTreeMap::new();
        let mut cols = Vec::new();
        for v in &self.vectors {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (c, entry) in self.real_entries(v).into_iter().enumerate() {
                for (coef, trig, e) in entry {
                    if trig == Trig::Sin && e.is_zero() {
                        continue;
                    }
                    let n = keys.len();
                    let id = *keys.entry((c, trig, format!("{e:?}"))).or_insert(n);
                    *acc.entry(id).or_insert_with(Q::zero) += coef;
                }
            }
            cols.push(acc);
        }
        let rows = keys.len();
        let columns = cols
            .into_iter()
            .map(|a| SparseVec::from_pairs(&Rationals, a.into_iter().collect()))
            .collect();
        let m = SparseMatrix::from_columns(rows, columns).expect("keys index rows");
        ColumnReduction::new(&Rationals, &m, false).rank()
    }
}

/// A subdivision of the parameter box on each cell of which one of the
/// listed minors has an interval determinant excluding zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    /// Minors used, as (real coordinates in 0..8, frame vectors).
    pub minors: Vec<(Vec<usize>, Vec<usize>)>,
    /// Lower bound of `|det|` over all cells.
    pub margin: f64,
    pub cells: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RankVerdict {
    Certified(RankCertificate),
    /// The rank is provably below `expected`.
    Fail {
        upper_bound: usize,
    },
    Inconclusive {
        cells: usize,
    },
}

impl RankVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, RankVerdict::Certified(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RankVerdict::Certified(_) => "CERTIFIED",
            RankVerdict::Fail { .. } => "FAIL",
            RankVerdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

/// `c·trig(2π/m · (k + Σ a_i p_i))` with enclosures of every rational.
struct Term {
    coef: Interval,
    coef_f: f64,
    trig: Trig,
    constant: Interval,
    constant_f: f64,
    slopes: Vec<(usize, Interval, f64)>,
}

struct Compiled {
    scale: Interval,
    scale_f: f64,
    /// Per parameter, the largest slope magnitude; zero means irrelevant.
    weights: Vec<f64>,
    /// `entries[vector][coordinate]`.
    entries: Vec<Vec<Vec<Term>>>,
}

fn f(x: &Q) -> f64 {
    x.to_f64().expect("finite")
}

impl Compiled {
    fn new(frame: &TangentFrame) -> Self {
        let names: Vec<&String> = frame.params.iter().map(|p| &p.0).collect();
        let mut weights = vec![0.0f64; names.len()];
        let entries = frame
            .vectors
            .iter()
            .map(|v| {
                frame
                    .real_entries(v)
                    .into_iter()
                    .map(|entry| {
                        entry
                            .into_iter()
                            .map(|(c, trig, e)| {
                                let slopes = names
                                    .iter()
                                    .enumerate()
                                    .filter_map(|(i, n)| {
                                        let a = e.coefficient(n);
                                        (!a.is_zero()).then(|| {
                                            weights[i] = weights[i].max(f(&a).abs());
                                            (i, Interval::rational(&a), f(&a))
                                        })
                                    })
                                    .collect();
                                Term {
                                    coef: Interval::rational(&c),
                                    coef_f: f(&c),
                                    trig,
                                    constant: Interval::rational(&e.constant),
                                    constant_f: f(&e.constant),
                                    slopes,
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Compiled {
            scale: Interval::two_pi_over(frame.modulus),
            scale_f: 2.0 * PI / frame.modulus as f64,
            weights,
            entries,
        }
    }

    fn point_value(&self, entry: &[Term], point: &[f64]) -> f64 {
        entry
            .iter()
            .map(|t| {
                let theta =
                    t.constant_f + t.slopes.iter().map(|(i, _, a)| a * point[*i]).sum::<f64>();
                let phi = self.scale_f * theta;
                t.coef_f
                    * if t.trig == Trig::Cos {
                        phi.cos()
                    } else {
                        phi.sin()
                    }
            })
            .sum()
    }

    fn interval_value(&self, entry: &[Term], cell: &[Interval]) -> Interval {
        let mut acc = Interval::ZERO;
        for t in entry {
            let mut theta = t.constant;
            for (i, a, _) in &t.slopes {
                theta = theta.add(a.mul(cell[*i]));
            }
            let phi = theta.mul(self.scale);
            let v = if t.trig == Trig::Cos {
                phi.cos()
            } else {
                phi.sin()
            };
            acc = acc.add(t.coef.mul(v));
        }
        acc
    }

    fn interval_det(&self, rows: &[usize], cols: &[usize], cell: &[Interval]) -> Interval {
        let m: Vec<Vec<Interval>> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&v| self.interval_value(&self.entries[v][r], cell))
                    .collect()
            })
            .collect();
        det_interval(&m)
    }

    /// Rows and columns picked by complete pivoting at a point.
    fn pivot_minor(&self, point: &[f64], k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.entries.len();
        let mut a: Vec<Vec<f64>> = (0..TangentFrame::AMBIENT)
            .map(|r| {
                (0..n)
                    .map(|v| self.point_value(&self.entries[v][r], point))
                    .collect()
            })
            .collect();
        let (mut rows, mut cols) = (Vec::new(), Vec::new());
        for _ in 0..k {
            let mut best = (0.0, 0, 0);
            for (r, row) in a.iter().enumerate() {
                if rows.contains(&r) {
                    continue;
                }
                for (c, x) in row.iter().enumerate() {
                    if !cols.contains(&c) && x.abs() > best.0 {
                        best = (x.abs(), r, c);
                    }
                }
            }
            let (piv, pr, pc) = best;
            if piv < 1e-12 {
                return None;
            }
            let prow = a[pr].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != pr && !rows.contains(&r) {
                    let factor = row[pc] / prow[pc];
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x -= factor * y;
                    }
                }
            }
            rows.push(pr);
            cols.push(pc);
        }
        rows.sort();
        cols.sort();
        Some((rows, cols))
    }

    /// Widest relevant direction, if any parameter matters.
    fn split_direction(&self, cell: &[Interval]) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (i, w) in self.weights.iter().enumerate() {
            let score = w * cell[i].width();
            if score > 0.0 && best.is_none_or(|(b, _)| score > b) {
                best = Some((score, i));
            }
        }
        best.map(|b| b.1)
    }
}

/// Interval determinant by Laplace expansion with memoised row subsets.
fn det_interval(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    let mut memo: Vec<Option<Interval>> = vec![None; 1 << n];
    fn rec(m: &[Vec<Interval>], rows: usize, memo: &mut Vec<Option<Interval>>) -> Interval {
        let n = m.len();
        let col = n - rows.count_ones() as usize;
        if col == n {
            return Interval::new(1.0, 1.0);
        }
        if let Some(v) = memo[rows] {
            return v;
        }
        let mut acc = Interval::ZERO;
        let mut sign = 1.0;
        for r in 0..n {
            if rows & (1 << r) == 0 {
                continue;
            }
            let e = m[r][col];
            if e != Interval::ZERO {
                let sub = rec(m, rows & !(1 << r), memo);
                let term = e.mul(sub);
                acc = if sign > 0.0 {
                    acc.add(term)
                } else {
                    acc.sub(term)
                };
            }
            sign = -sign;
        }
        memo[rows] = Some(acc);
        acc
    }
    rec(m, (1 << n) - 1, &mut memo)
}

fn root_cell(frame: &TangentFrame) -> Vec<Interval> {
    frame
        .params
        .iter()
        .map(|(_, a, b)| Interval::new(Interval::rational(a).lo, Interval::rational(b).hi))
        .collect()
}

type Minor = (Vec<usize>, Vec<usize>);

/// Bisects until on every cell some minor excludes zero. `choose` proposes
/// minors for a cell given its midpoint. Returns the minors used, the margin
/// and the cell count, or `None` once `budget` cells are spent.
fn subdivide(
    c: &Compiled,
    frame: &TangentFrame,
    budget: usize,
    mut choose: impl FnMut(&[f64]) -> Vec<Minor>,
) -> (Option<(Vec<Minor>, f64)>, usize) {
    let mut stack = vec![root_cell(frame)];
    let mut used_minors: Vec<Minor> = Vec::new();
    let mut cells = 0;
    let mut margin = f64::INFINITY;
    'cells: while let Some(cell) = stack.pop() {
        if cells >= budget {
            return (None, cells);
        }
        cells += 1;
        let mid: Vec<f64> = cell.iter().map(|i| 0.5 * (i.lo + i.hi)).collect();
        let mut candidates = used_minors.clone();
        for m in choose(&mid) {
            if !candidates.contains(&m) {
                candidates.insert(0, m);
            }
        }
        for (rows, cols) in candidates {
            let d = c.interval_det(&rows, &cols, &cell);
            if !d.contains_zero() {
                margin = margin.min(d.mignitude());
                if !used_minors.contains(&(rows.clone(), cols.clone())) {
                    used_minors.push((rows, cols));
                }
                continue 'cells;
            }
        }
        let Some(dir) = c.split_direction(&cell) else {
            return (None, cells);
        };
        let i = cell[dir];
        let m = 0.5 * (i.lo + i.hi);
        let (mut left, mut right) = (cell.clone(), cell);
        left[dir] = Interval::new(i.lo, m);
        right[dir] = Interval::new(m, i.hi);
        stack.push(right);
        stack.push(left);
    }
    (Some((used_minors, margin)), cells)
}

/// Certifies `rank ≥ expected` over the whole box, or reports why not.
pub fn tangent_rank(
    frame: &TangentFrame,
    expected: usize,
    budget: usize,
) -> Result<RankVerdict, CycloError> {
    for (n, lo, hi) in &frame.params {
        if lo > hi {
            return Err(CycloError::Invalid(format!("empty box for {n}")));
        }
    }
    let ceiling = frame.vectors.len().min(TangentFrame::AMBIENT);
    if expected > ceiling {
        return Ok(RankVerdict::Fail {
            upper_bound: ceiling,
        });
    }
    if expected == 0 {
        return Ok(RankVerdict::Certified(RankCertificate {
            rank: 0,
            minors: vec![],
            margin: 1.0,
            cells: 0,
        }));
    }
    let formal = frame.formal_rank();
    if formal < expected {
        return Ok(RankVerdict::Fail {
            upper_bound: formal,
        });
    }
    let c = Compiled::new(frame);
    let (res, cells) = subdivide(&c, frame, budget, |mid| {
        c.pivot_minor(mid, expected).into_iter().collect()
    });
    Ok(match res {
        Some((minors, margin)) => RankVerdict::Certified(RankCertificate {
            rank: expected,
            minors,
            margin,
            cells,
        }),
        None => RankVerdict::Inconclusive { cells },
    })
}

/// Re-runs the subdivision from scratch using only the certificate's minors.
pub fn verify_certificate(frame: &TangentFrame, cert: &RankCertificate, budget: usize) -> bool {
    if cert.rank == 0 {
        return true;
    }
    let well_formed = cert.minors.iter().all(|(rows, cols)| {
        rows.len() == cert.rank
            && cols.len() == cert.rank
            && rows.iter().all(|&r| r < TangentFrame::AMBIENT)
            && cols.iter().all(|&v| v < frame.vectors.len())
    });
    if !well_formed || cert.minors.is_empty() || cert.rank > TangentFrame::AMBIENT {
        return false;
    }
    let c = Compiled::new(frame);
    let minors = cert.minors.clone();
    matches!(subdivide(&c, frame, budget, |_| minors.clone()), (Some((_, m)), _) if m > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclosolve::affine::qf;

    fn e(re: i64, im: i64, exp: &str) -> ComplexEntry {
        vec![PhaseTerm::new(q(re), q(im), Affine::parse(exp).unwrap())]
    }

    fn zero() -> ComplexEntry {
        Vec::new()
    }

    /// The standard frame of `ℂ⁴` rotated by a phase: rank 8 everywhere.
    fn rotating_frame() -> TangentFrame {
        let mut vectors = Vec::new();
        for slot in 0..4 {
            for (re, im) in [(1, 0), (0, 1)] {
                let mut v = [zero(), zero(), zero(), zero()];
                v[slot] = e(re, im, "t");
                vectors.push(v);
            }
        }
        TangentFrame {
            modulus: 7,
            params: vec![("t".into(), q(0), q(7))],
            vectors,
        }
    }

    #[test]
    fn full_rank_certified() {
        let f = rotating_frame();
        let v = tangent_rank(&f, 8, DEFAULT_BUDGET).unwrap();
        let RankVerdict::Certified(cert) = v else {
            panic!("{v:?}")
        };
        assert!(cert.margin > 0.0);
        assert!(verify_certificate(&f, &cert, DEFAULT_BUDGET));
    }

    #[test]
    fn duplicated_vectors_fail() {
        let mut f = rotating_frame();
        f.vectors[1] = f.vectors[0].clone();
        assert_eq!(f.formal_rank(), 7);
        assert_eq!(
            tangent_rank(&f, 8, DEFAULT_BUDGET).unwrap(),
            RankVerdict::Fail { upper_bound: 7 }
        );
        assert!(
            tangent_rank(&f, 9, DEFAULT_BUDGET).unwrap() == RankVerdict::Fail { upper_bound: 8 }
        );
    }

    #[test]
    fn vanishing_minor_is_inconclusive() {
        // (cos φ, sin φ) and (1, 0): dependent exactly at φ = 0, formally independent.
        let v1 = [e(1, 0, "t"), zero(), zero(), zero()];
        let v2 = [e(1, 0, "0"), zero(), zero(), zero()];
        let f = TangentFrame {
            modulus: 7,
            params: vec![("t".into(), qf(-1, 2), qf(1, 2))],
            vectors: vec![v1, v2],
        };
        assert_eq!(f.formal_rank(), 2);
        assert!(matches!(
            tangent_rank(&f, 2, 256).unwrap(),
            RankVerdict::Inconclusive { .. }
        ));
        // Away from φ = 0 it certifies.
        let g = TangentFrame {
            params: vec![("t".into(), qf(1, 4), qf(3, 2))],
            ..f
        };
        assert!(tangent_rank(&g, 2, 256).unwrap().is_certified());
    }
}
