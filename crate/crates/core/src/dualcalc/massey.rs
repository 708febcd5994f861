//! Triple Massey products `⟨a_x, a_y, Σ c_l a_l⟩` as intersection numbers.
//!
//! With `∂X = A_x ∩ A_y` modulo diagonals and `A_y ∩ A_l` diagonal-only for
//! every `l` in the third slot, the product is represented by `X ∩ Σ c_l A_l`.
//! Each transversal piece equal to the slice `A_l ∩ ({(1,0)} × S³)` counts as
//! the top class `e_l = a_l ∪ ι`. Degree five is `ℤ^m / (Σ_l e_l)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::chaincore::{format_rational, submodule_membership, CoefficientRing, Membership};
use crate::cupmassey::Verdict;

use super::chain::{bounding_chain_search, classify_boundary, ChainSearch, FaceClass, FaceVerdict};
use super::frames::{transversality, Transversality};
use super::patch::{contains, intersection_system, same_set, Coord, Geometry, ParamPatch};
use super::pattern::pattern_for;
use super::DualError;

/// Degree-five cohomology `ℤ^m / (Σ_l e_l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H5Presentation {
    pub m: u32,
}

impl H5Presentation {
    pub fn relation(&self) -> Vec<i64> {
        vec![1; self.m as usize]
    }

    pub fn basis_vector(&self, l: u32) -> Vec<i64> {
        let mut v = vec![0; self.m as usize];
        v[(l % self.m) as usize] = 1;
        v
    }

    /// `"a2∪ι"`, `"(a2+a6)∪ι"`, `"-a2∪ι"`, `"0"`.
    pub fn label(&self, v: &[i64]) -> String {
        let terms: Vec<(usize, i64)> = v
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .collect();
        let mono = |l: usize, c: i64, first: bool| -> String {
            let sign = match (c < 0, first) {
                (true, _) => "-",
                (false, true) => "",
                (false, false) => "+",
            };
            let mag = if c.abs() == 1 {
                String::new()
            } else {
                c.abs().to_string()
            };
            format!("{sign}{mag}a{l}")
        };
        match terms.as_slice() {
            [] => "0".into(),
            [(l, c)] => format!("{}∪ι", mono(*l, *c, true)),
            _ => {
                let s: String = terms
                    .iter()
                    .enumerate()
                    .map(|(i, &(l, c))| mono(l, c, i == 0))
                    .collect();
                format!("({s})∪ι")
            }
        }
    }

    /// ℤ-membership of `v` in the span of `gens` modulo the relation.
    pub fn membership(&self, gens: &[Vec<i64>], v: &[i64]) -> Result<Membership, DualError> {
        let big = |x: &Vec<i64>| x.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        let gens: Vec<Vec<BigInt>> = gens.iter().map(big).collect();
        let v: Vec<BigInt> = big(&v.to_vec());
        Ok(submodule_membership(
            CoefficientRing::Integers,
            &gens,
            &[big(&self.relation())],
            &v,
        )?)
    }
}

/// Verdict and, when trivial, the coefficients on the generators.
pub fn h5_verdict(
    m: u32,
    representative: &[i64],
    gens: &[Vec<i64>],
) -> Result<(Verdict, Option<Vec<BigRational>>), DualError> {
    let h5 = H5Presentation { m };
    Ok(match h5.membership(gens, representative)? {
        Membership::Yes(c) => (Verdict::Trivial, Some(c)),
        Membership::No => (Verdict::Nontrivial, None),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTriple {
    pub x: u32,
    pub y: u32,
    /// The third slot `Σ c_l a_l`.
    pub z: Vec<(u32, i64)>,
}

impl IntersectionTriple {
    pub fn label(&self) -> String {
        let mut z = String::new();
        for (i, &(l, c)) in self.z.iter().enumerate() {
            if c < 0 {
                z.push('-');
            } else if i > 0 {
                z.push('+');
            }
            if c.abs() != 1 {
                z += &c.abs().to_string();
            }
            z += &format!("a{l}");
        }
        format!("⟨a{}, a{}, {z}⟩", self.x, self.y)
    }
}

#[derive(Clone, Debug)]
pub struct MasseyOptions {
    pub budget: usize,
    /// Use this chain instead of searching.
    pub chain: Option<ParamPatch>,
    pub search_bound: i64,
    /// Replace the indeterminacy generators (testing only).
    pub indeterminacy_override: Option<Vec<Vec<i64>>>,
}

impl Default for MasseyOptions {
    fn default() -> Self {
        MasseyOptions {
            budget: crate::cyclosolve::DEFAULT_BUDGET,
            chain: None,
            search_bound: 7,
            indeterminacy_override: None,
        }
    }
}

/// `X ∩ A_l` for one term of the third slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceIntersection {
    pub membrane: u32,
    pub coefficient: i64,
    /// Rendered relative pieces.
    pub pieces: Vec<String>,
    pub equals_slice: bool,
    pub transversality: Option<Transversality>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionMassey {
    pub geometry: Geometry,
    pub triple: IntersectionTriple,
    pub triple_label: String,
    pub chain: Option<ParamPatch>,
    pub chain_faces: Vec<FaceClass>,
    pub xy_transversality: Vec<Transversality>,
    pub z_intersections: Vec<SliceIntersection>,
    pub representative: Vec<i64>,
    pub representative_label: String,
    pub indeterminacy: Vec<Vec<i64>>,
    pub indeterminacy_labels: Vec<String>,
    pub verdict: Verdict,
    /// Coefficients on the indeterminacy generators when trivial.
    pub witness: Option<Vec<String>>,
}

fn require(t: Transversality) -> Result<Transversality, DualError> {
    if t.verdict.is_certified() {
        Ok(t)
    } else {
        Err(DualError::NotTransversal {
            name: t.name.clone(),
            verdict: t.verdict.label().into(),
        })
    }
}

fn in_some_diagonal(g: &Geometry, p: &ParamPatch) -> Result<bool, DualError> {
    for d in g.diagonals() {
        if contains(&d, p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn massey_via_intersection(
    g: &Geometry,
    triple: &IntersectionTriple,
    options: &MasseyOptions,
) -> Result<IntersectionMassey, DualError> {
    let m = g.m;
    let (x, y) = (triple.x % m, triple.y % m);
    if x == y || triple.z.iter().any(|&(l, _)| l % m == y) {
        return Err(DualError::Unsupported(
            "repeated membrane in adjacent slots".into(),
        ));
    }
    let pattern = pattern_for(g)?;
    for &(l, _) in &triple.z {
        if pattern.meets(y, l) {
            return Err(DualError::Unsupported(format!(
                "a{y}·a{l} does not vanish on the chain level"
            )));
        }
    }
    let h5 = H5Presentation { m };
    let mut representative = vec![0i64; m as usize];
    let mut chain = None;
    let mut chain_faces = Vec::new();
    let mut xy_transversality = Vec::new();
    let mut z_intersections = Vec::new();

    if pattern.meets(x, y) {
        let ax = g.membrane(x);
        let ay = g.membrane(y).rename_param("t", "s");
        let inter = intersection_system(&ax, &ay)?.expect("pattern says they meet");
        for b in &inter.solve()?.branches {
            let piece = inter.piece(&ax, b)?;
            if !in_some_diagonal(g, &piece)? {
                let name = format!("A{x}∩A{y}");
                xy_transversality.push(require(transversality(
                    &name,
                    &ax,
                    &ay,
                    &inter,
                    b,
                    options.budget,
                )?)?);
            }
        }

        let x_chain = match &options.chain {
            Some(c) => c.clone(),
            None => match bounding_chain_search(g, x, y, options.search_bound)? {
                ChainSearch::Found { chain, .. } => chain,
                ChainSearch::SearchExhausted { k, j, bound } => {
                    return Err(DualError::SearchExhausted { k, j, bound })
                }
            },
        };
        let faces = classify_boundary(g, &x_chain)?;
        let want = FaceVerdict::Intersection {
            k: x.min(y),
            j: x.max(y),
        };
        if faces.iter().filter(|f| f.verdict == want).count() != 1 {
            return Err(DualError::Invalid(format!(
                "{} does not bound A{x} ∩ A{y}",
                x_chain.name
            )));
        }
        chain_faces = faces;

        for &(l, c) in &triple.z {
            let al = g.membrane(l).rename_param("t", "s");
            let slice = al.restrict_first([Coord::One, Coord::Zero])?;
            let mut entry = SliceIntersection {
                membrane: l % m,
                coefficient: c,
                pieces: Vec::new(),
                equals_slice: false,
                transversality: None,
            };
            if let Some(inter) = intersection_system(&x_chain, &al)? {
                for b in &inter.solve()?.branches {
                    let piece = inter.piece(&x_chain, b)?;
                    if in_some_diagonal(g, &piece)? {
                        continue;
                    }
                    if !entry.pieces.is_empty() {
                        return Err(DualError::Unsupported(format!(
                            "{} ∩ A{l} has several pieces",
                            x_chain.name
                        )));
                    }
                    entry.pieces.push(piece.to_string());
                    if !same_set(&piece, &slice)? {
                        return Err(DualError::Unsupported(format!(
                            "{} ∩ A{l} is not the slice {slice}",
                            x_chain.name
                        )));
                    }
                    entry.equals_slice = true;
                    let name = format!("{}∩A{l}", x_chain.name);
                    entry.transversality = Some(require(transversality(
                        &name,
                        &x_chain,
                        &al,
                        &inter,
                        b,
                        options.budget,
                    )?)?);
                    representative[(l % m) as usize] += c;
                }
            }
            z_intersections.push(entry);
        }
        chain = Some(x_chain);
    }

    let indeterminacy = match &options.indeterminacy_override {
        Some(v) => v.clone(),
        None => {
            let mut zsum = vec![0i64; m as usize];
            for &(l, c) in &triple.z {
                zsum[(l % m) as usize] += c;
            }
            vec![h5.basis_vector(x), zsum]
        }
    };
    let (verdict, witness) = h5_verdict(m, &representative, &indeterminacy)?;
    Ok(IntersectionMassey {
        geometry: *g,
        triple: triple.clone(),
        triple_label: triple.label(),
        chain,
        chain_faces,
        xy_transversality,
        z_intersections,
        representative_label: h5.label(&representative),
        representative,
        indeterminacy_labels: indeterminacy.iter().map(|v| h5.label(v)).collect(),
        indeterminacy,
        verdict,
        witness: witness.map(|c| c.iter().map(format_rational).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple() -> IntersectionTriple {
        IntersectionTriple {
            x: 4,
            y: 1,
            z: vec![(2, 1), (6, 1)],
        }
    }

    #[test]
    fn labels() {
        let h = H5Presentation { m: 7 };
        assert_eq!(h.label(&[0, 0, 1, 0, 0, 0, 0]), "a2∪ι");
        assert_eq!(h.label(&[0, 0, 1, 0, 0, 0, 1]), "(a2+a6)∪ι");
        assert_eq!(h.label(&[0, 0, -1, 0, 0, 0, 0]), "-a2∪ι");
        assert_eq!(triple().label(), "⟨a4, a1, a2+a6⟩");
    }

    #[test]
    fn membership_over_integers() {
        let h = H5Presentation { m: 7 };
        let gens = vec![h.basis_vector(4), vec![0, 0, 1, 0, 0, 0, 1]];
        assert!(!h.membership(&gens, &h.basis_vector(2)).unwrap().is_member());
        // Modulo the relation, e6 ≡ -(e2) + (e2+e6).
        let v = vec![0, 0, -1, 0, 0, 0, 0];
        assert!(!h.membership(&gens, &v).unwrap().is_member());
        assert!(h
            .membership(&gens, &[0, 0, 1, 0, 0, 0, 1])
            .unwrap()
            .is_member());
    }

    #[test]
    fn nontrivial_for_72() {
        let g = Geometry::new(7, 2).unwrap();
        let r = massey_via_intersection(&g, &triple(), &MasseyOptions::default()).unwrap();
        assert_eq!(r.representative_label, "a2∪ι");
        assert_eq!(
            r.indeterminacy_labels,
            vec!["a4∪ι".to_string(), "(a2+a6)∪ι".to_string()]
        );
        assert_eq!(r.verdict, Verdict::Nontrivial);
        assert!(r.z_intersections.iter().all(|z| z
            .transversality
            .as_ref()
            .map_or(true, |t| t.verdict.is_certified())));
    }

    #[test]
    fn sabotaged_indeterminacy_is_trivial() {
        let g = Geometry::new(7, 2).unwrap();
        let h = H5Presentation { m: 7 };
        let opts = MasseyOptions {
            indeterminacy_override: Some(vec![h.basis_vector(4), h.basis_vector(2)]),
            ..Default::default()
        };
        let r = massey_via_intersection(&g, &triple(), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Trivial);
    }

    #[test]
    fn alternative_chain_agrees_modulo_indeterminacy() {
        let g = Geometry::new(7, 2).unwrap();
        let opts = MasseyOptions {
            chain: Some(g.chain(-3, 1).renamed("X'")),
            ..Default::default()
        };
        let r = massey_via_intersection(&g, &triple(), &opts).unwrap();
        assert_eq!(r.representative_label, "a6∪ι");
        let h = H5Presentation { m: 7 };
        let diff: Vec<i64> = r
            .representative
            .iter()
            .zip(h.basis_vector(2))
            .map(|(a, b)| a + b)
            .collect();
        assert!(h.membership(&r.indeterminacy, &diff).unwrap().is_member());
    }
}
