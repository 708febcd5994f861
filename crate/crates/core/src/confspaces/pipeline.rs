//! End-to-end verification: the vanishing side on the split model, the
//! nonvanishing side by intersection calculus, and the closed-form checks.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cupmassey::{SweepPattern, SweepReport, Verdict};
use crate::cyclosolve::{RankVerdict, DEFAULT_BUDGET};
use crate::dualcalc::{
    lemma_report, massey_via_intersection, pattern_for, DualError, Geometry, H5Presentation,
    IntersectionMassey, IntersectionTriple, LemmaReport, MasseyOptions, Transversality,
};

use super::formulas::{
    fundamental_group_summary, h2_rank, h2_rank_closed, poincare_polynomial, GroupSummary,
};
use super::quaternion::{quaternion_split_test, QuaternionSplitReport};
use super::split::split_model_sweep;
use super::ConfError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Order of the split (`q = 1`) side.
    pub split_m: usize,
    /// The `(m, q)` of the intersection side.
    pub m: u32,
    pub q: u32,
    /// Cell budget of each transversality certificate.
    pub budget: usize,
    pub seed: u64,
    pub quaternion_samples: usize,
    /// Replace the indeterminacy generators by `{a_x∪ι, a_2∪ι}`.
    pub sabotage_indeterminacy: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            split_m: 7,
            m: 7,
            q: 2,
            budget: DEFAULT_BUDGET,
            seed: 0,
            quaternion_samples: 10_000,
            sabotage_indeterminacy: false,
        }
    }
}

impl VerifyOptions {
    /// Comparison mode: both sides are expected to carry only trivial products.
    pub fn comparison(m: u32, q: u32) -> Self {
        VerifyOptions {
            split_m: m as usize,
            m,
            q,
            ..Default::default()
        }
    }

    pub fn is_headline_case(&self) -> bool {
        (self.m, self.q, self.split_m) == (7, 2, 7)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    /// Report path of the supporting data.
    pub certificate: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSection {
    pub split_m: usize,
    pub split_f_vector: Vec<usize>,
    pub m: u32,
    pub q: u32,
    pub pattern_offsets: Vec<u32>,
    pub pattern_table: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomologySection {
    /// Rational cohomology dimensions of the split model.
    pub split_dimensions: Vec<usize>,
    pub poincare_polynomial: Vec<BigInt>,
    pub h2_ranks_checked: usize,
    pub pi1_ordered: GroupSummary,
    pub pi1_unordered: GroupSummary,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSection {
    pub split: SweepReport,
    pub quaternion: QuaternionSplitReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub name: String,
    pub verdict: String,
    pub margin: Option<f64>,
    pub cells: usize,
}

impl CertificateSummary {
    fn of(t: &Transversality) -> Self {
        let (margin, cells) = match &t.verdict {
            RankVerdict::Certified(c) => (Some(c.margin), c.cells),
            RankVerdict::Inconclusive { cells } => (None, *cells),
            RankVerdict::Fail { .. } => (None, 0),
        };
        CertificateSummary {
            name: t.name.clone(),
            verdict: t.verdict.label().into(),
            margin,
            cells,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaSection {
    pub report: Option<LemmaReport>,
    pub certificates: Vec<CertificateSummary>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictSection {
    pub products: Vec<IntersectionMassey>,
    /// Triples skipped because a product vanishes only up to homotopy.
    pub skipped: usize,
    pub claims: Vec<Claim>,
    pub passed: bool,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub options: VerifyOptions,
    pub model: ModelSection,
    pub homology: HomologySection,
    pub sweep: SweepSection,
    pub lemmas: LemmaSection,
    pub verdict: VerdictSection,
    /// Wall-clock seconds per stage; not serialized so reports diff cleanly.
    #[serde(skip)]
    pub timings: BTreeMap<String, f64>,
}

fn claim(name: &str, expected: impl ToString, observed: impl ToString, certificate: &str) -> Claim {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    Claim {
        name: name.into(),
        passed: expected == observed,
        expected,
        observed,
        certificate: certificate.into(),
    }
}

fn format_poly(p: &[BigInt]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != BigInt::from(0))
        .map(|(d, c)| match d {
            0 => c.to_string(),
            _ if *c == BigInt::from(1) => format!("q^{d}"),
            _ => format!("{c}q^{d}"),
        })
        .collect();
    terms.join(" + ")
}

/// Every triple `⟨a_x, a_y, a_z⟩` with distinct neighbours that the
/// intersection engine supports.
fn all_products(
    g: &Geometry,
    budget: usize,
) -> Result<(Vec<IntersectionMassey>, usize), DualError> {
    let mut out = Vec::new();
    let mut skipped = 0;
    let opts = MasseyOptions {
        budget,
        ..Default::default()
    };
    for x in 0..g.m {
        for y in (0..g.m).filter(|&y| y != x) {
            for z in (0..g.m).filter(|&z| z != y) {
                let t = IntersectionTriple {
                    x,
                    y,
                    z: vec![(z, 1)],
                };
                match massey_via_intersection(g, &t, &opts) {
                    Ok(r) => out.push(r),
                    Err(DualError::Unsupported(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((out, skipped))
}

pub fn verify_headline(opts: &VerifyOptions) -> Result<PipelineReport, ConfError> {
    let mut timings = BTreeMap::new();
    let mut claims = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, f64>| {
        timings.insert(name.to_string(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };

    let split = split_model_sweep(opts.split_m, SweepPattern::PairSums, usize::MAX)?;
    lap("split_sweep", &mut timings);
    let quaternion = quaternion_split_test(opts.split_m, opts.quaternion_samples, opts.seed);
    lap("quaternion", &mut timings);

    let g = Geometry::new(opts.m, opts.q)?;
    let pattern = pattern_for(&g)?;
    lap("pattern", &mut timings);

    let poincare = poincare_polynomial(opts.split_m, 2);
    let poincare_dims: Vec<usize> = poincare
        .iter()
        .map(|c| usize::try_from(c).expect("small"))
        .collect();
    let sm = opts.split_m;
    let h2_ok = (1..=100)
        .filter(|&n| h2_rank(sm, n) == h2_rank_closed(sm, n))
        .count();

    claims.push(claim(
        "split sweep all trivial",
        true,
        split.all_trivial(),
        "sweep.split",
    ));
    claims.push(claim(
        "split model cohomology",
        format!("{poincare_dims:?}"),
        format!("{:?}", split.cohomology_dimensions),
        "homology.split_dimensions",
    ));
    claims.push(claim(
        "quaternion split",
        true,
        quaternion.passed,
        "sweep.quaternion",
    ));
    claims.push(claim(
        "wrong split map detected",
        true,
        quaternion.wrong_map_mismatches > 0,
        "sweep.quaternion",
    ));
    claims.push(claim(
        "h2 rank closed forms for n <= 100",
        100,
        h2_ok,
        "homology.h2_ranks_checked",
    ));
    let pi1_ordered = fundamental_group_summary(sm, 2, true);
    let pi1_unordered = fundamental_group_summary(sm, 2, false);
    claims.push(claim(
        "pi1 order, ordered",
        sm * sm,
        &pi1_ordered.order,
        "homology.pi1_ordered",
    ));
    claims.push(claim(
        "pi1 order, unordered",
        2 * sm * sm,
        &pi1_unordered.order,
        "homology.pi1_unordered",
    ));

    let mut lemmas = LemmaSection {
        report: None,
        certificates: Vec::new(),
    };
    let (products, skipped) = if opts.is_headline_case() {
        claims.push(claim(
            "poincare polynomial (7,2)",
            "1 + 6q^2 + q^3 + 6q^5",
            format_poly(&poincare),
            "homology.poincare_polynomial",
        ));
        claims.push(claim(
            "intersection offsets",
            "[3, 4]",
            format!("{:?}", pattern.offsets()),
            "model.pattern_offsets",
        ));
        let report = lemma_report(1, opts.budget)?;
        for c in &report.checks {
            claims.push(claim(
                &c.name,
                true,
                c.passed,
                &format!("lemmas.report.{}", c.name),
            ));
        }
        lemmas.report = Some(report);
        lap("lemmas", &mut timings);

        let h5 = H5Presentation { m: 7 };
        let triple = IntersectionTriple {
            x: 4,
            y: 1,
            z: vec![(2, 1), (6, 1)],
        };
        let mut mopts = MasseyOptions {
            budget: opts.budget,
            ..Default::default()
        };
        if opts.sabotage_indeterminacy {
            mopts.indeterminacy_override = Some(vec![h5.basis_vector(4), h5.basis_vector(2)]);
        }
        let r = massey_via_intersection(&g, &triple, &mopts)?;
        lap("massey", &mut timings);
        claims.push(claim(
            &format!("{} verdict", r.triple_label),
            Verdict::Nontrivial,
            r.verdict,
            "verdict.products.0",
        ));
        let rep_ok = r.representative_label == "a2∪ι" || r.representative_label == "-a2∪ι";
        claims.push(claim(
            "representative",
            "±a2∪ι",
            if rep_ok {
                "±a2∪ι"
            } else {
                &r.representative_label
            },
            "verdict.products.0",
        ));
        claims.push(claim(
            "indeterminacy",
            "a4∪ι, (a2+a6)∪ι",
            r.indeterminacy_labels.join(", "),
            "verdict.products.0",
        ));
        for t in r.xy_transversality.iter().chain(
            r.z_intersections
                .iter()
                .filter_map(|z| z.transversality.as_ref()),
        ) {
            lemmas.certificates.push(CertificateSummary::of(t));
        }
        (vec![r], 0)
    } else {
        let (products, skipped) = all_products(&g, opts.budget)?;
        lap("massey", &mut timings);
        let nontrivial = products
            .iter()
            .filter(|p| p.verdict == Verdict::Nontrivial)
            .count();
        claims.push(claim(
            "intersection products all trivial",
            0,
            nontrivial,
            "verdict.products",
        ));
        for p in &products {
            for t in p.xy_transversality.iter().chain(
                p.z_intersections
                    .iter()
                    .filter_map(|z| z.transversality.as_ref()),
            ) {
                lemmas.certificates.push(CertificateSummary::of(t));
            }
        }
        (products, skipped)
    };
    claims.push(claim(
        "transversality certified",
        true,
        lemmas
            .certificates
            .iter()
            .all(|c| c.verdict == "CERTIFIED" && c.margin.is_some_and(|m| m > 0.0)),
        "lemmas.certificates",
    ));

    let first_failure = claims.iter().find(|c| !c.passed).map(|c| c.name.clone());
    Ok(PipelineReport {
        options: opts.clone(),
        model: ModelSection {
            split_m: opts.split_m,
            split_f_vector: split.f_vector.clone(),
            m: opts.m,
            q: opts.q,
            pattern_offsets: pattern.offsets(),
            pattern_table: pattern.render(),
        },
        homology: HomologySection {
            split_dimensions: split.cohomology_dimensions.clone(),
            poincare_polynomial: poincare,
            h2_ranks_checked: h2_ok,
            pi1_ordered,
            pi1_unordered,
        },
        sweep: SweepSection {
            split: split.sweep,
            quaternion,
        },
        lemmas,
        verdict: VerdictSection {
            products,
            skipped,
            passed: first_failure.is_none(),
            first_failure,
            claims,
        },
        timings,
    })
}

impl PipelineReport {
    /// Human-readable summary, one section per block.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let o = &self.options;
        s += &format!(
            "MODEL\n  split model m={} f-vector {:?}\n",
            o.split_m, self.model.split_f_vector
        );
        s += &format!(
            "  intersection side (m,q)=({},{}), offsets {:?}\n",
            o.m, o.q, self.model.pattern_offsets
        );
        for line in self.model.pattern_table.lines() {
            s += &format!("  {line}\n");
        }
        s += &format!(
            "HOMOLOGY\n  split cohomology {:?}, expected {}\n  pi1 {} (order {}), unordered {} (order {})\n",
            self.homology.split_dimensions,
            format_poly(&self.homology.poincare_polynomial),
            self.homology.pi1_ordered.family,
            self.homology.pi1_ordered.order,
            self.homology.pi1_unordered.family,
            self.homology.pi1_unordered.order
        );
        let sw = &self.sweep.split;
        s += &format!(
            "SWEEP\n  degrees {:?}: {} triples, {} trivial, {} undefined, {} nontrivial{}\n",
            sw.degrees,
            sw.triples_examined,
            sw.trivial,
            sw.undefined,
            sw.nontrivial.len(),
            if sw.incomplete { " (incomplete)" } else { "" }
        );
        let qs = &self.sweep.quaternion;
        s += &format!(
            "  quaternion split: {} samples (seed {}), {} mismatches, wrong map caught {} times\n",
            qs.samples, qs.seed, qs.mismatches, qs.wrong_map_mismatches
        );
        s += "LEMMAS\n";
        if let Some(r) = &self.lemmas.report {
            for c in &r.checks {
                s += &format!(
                    "  [{}] {}: {}\n",
                    if c.passed { "ok" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
        }
        for c in &self.lemmas.certificates {
            s += &format!(
                "  rank 6 {}: {} margin {:?} cells {}\n",
                c.name, c.verdict, c.margin, c.cells
            );
        }
        s += "VERDICT\n";
        if self.options.is_headline_case() {
            for p in &self.verdict.products {
                s += &format!("  {}: {}\n", p.triple_label, p.verdict);
                s += &format!("  representative: {}\n", p.representative_label);
                s += &format!(
                    "  indeterminacy: {{{}}}\n",
                    p.indeterminacy_labels.join(", ")
                );
            }
        } else {
            let n = self
                .verdict
                .products
                .iter()
                .filter(|p| p.verdict == Verdict::Nontrivial)
                .count();
            s += &format!(
                "  {} intersection products, {} nontrivial, {} skipped\n",
                self.verdict.products.len(),
                n,
                self.verdict.skipped
            );
        }
        for c in &self.verdict.claims {
            s += &format!(
                "  [{}] {}: expected {}, observed {}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.expected,
                c.observed
            );
        }
        match &self.verdict.first_failure {
            None => s += "  all verdicts match\n",
            Some(f) => s += &format!("  first failing verdict: {f}\n"),
        }
        if !self.timings.is_empty() {
            let t: Vec<String> = self
                .timings
                .iter()
                .map(|(k, v)| format!("{k} {v:.2}s"))
                .collect();
            s += &format!("TIMINGS\n  {}\n", t.join(", "));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_mode_is_trivial() {
        let r = verify_headline(&VerifyOptions {
            quaternion_samples: 100,
            ..VerifyOptions::comparison(3, 1)
        })
        .unwrap();
        assert!(r.verdict.passed, "{}", r.summary());
        assert!(r
            .verdict
            .products
            .iter()
            .all(|p| p.verdict == Verdict::Trivial));
    }
}
