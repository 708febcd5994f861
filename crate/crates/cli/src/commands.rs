use std::fmt::Write as _;

use lensmassey::chaincore::{CoefficientRing, Field, PrimeField, Rationals};
use lensmassey::confspaces::{
    complement_pipeline, evaluate, fundamental_group_summary, h2_rank, h2_rank_closed,
    poincare_polynomial, projected_product_size, split_model, verify_headline, ComplementOutcome,
    ConfError, VerifyOptions,
};
use lensmassey::cupmassey::{
    massey_sweep, triple_massey, Cohomology, DgaFile, MasseyError, SweepPattern,
};
use lensmassey::dualcalc::intersection_pattern;
use lensmassey::simplicial::{
    boundary_sphere, join, lens_space, polygon, rp2_six_vertex, s3_with_action, staircase_torus,
    S3Model, SimplicialComplex,
};
use serde_json::{json, Value};

use crate::{Global, ModelKind};

/// Projected top simplices of a complement build refused without `--long-running-override`.
pub const DEFAULT_MODEL_BUDGET: u64 = 5_000_000;
/// Triples per Massey sweep.
const SWEEP_BUDGET: usize = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Conf(#[from] ConfError),
}

impl CliError {
    pub fn code(&self) -> u8 {
        3
    }
}

impl From<MasseyError> for CliError {
    fn from(e: MasseyError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub struct Output {
    pub document: Value,
    pub summary: String,
    pub status: i32,
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn document(command: &str, g: &Global, result: Value) -> Value {
    json!({ "command": command, "seed": g.seed, "version": env!("CARGO_PKG_VERSION"), "result": result })
}

fn ring(g: &Global, default: CoefficientRing) -> Result<CoefficientRing, CliError> {
    g.ring
        .as_deref()
        .map_or(Ok(default), |r| r.parse().map_err(input))
}

fn format_poly(p: &[num_bigint::BigInt]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| c.sign() != num_bigint::Sign::NoSign)
        .map(|(d, c)| match (d, c.to_string().as_str()) {
            (0, s) => s.to_string(),
            (_, "1") => format!("t^{d}"),
            (_, s) => format!("{s}t^{d}"),
        })
        .collect();
    terms.join(" + ")
}

pub fn verify(
    g: &Global,
    m: u32,
    q: u32,
    sabotage: bool,
    samples: usize,
) -> Result<Output, CliError> {
    let mut opts = if (m, q) == (7, 2) {
        VerifyOptions::default()
    } else {
        VerifyOptions::comparison(m, q)
    };
    opts.seed = g.seed;
    opts.quaternion_samples = samples;
    opts.sabotage_indeterminacy = sabotage;
    if let Some(b) = g.budget {
        opts.budget = usize::try_from(b).map_err(input)?;
    }
    let report = verify_headline(&opts)?;
    let mut summary = report.summary();
    let status = if report.verdict.passed {
        0
    } else {
        let first = report
            .verdict
            .first_failure
            .clone()
            .unwrap_or_else(|| "unknown claim".into());
        writeln!(summary, "FAILED: {first}").ok();
        1
    };
    let doc = document("verify", g, serde_json::to_value(&report).map_err(input)?);
    Ok(Output {
        document: doc,
        summary,
        status,
    })
}

pub fn model(
    g: &Global,
    m: usize,
    q: usize,
    kind: ModelKind,
    complement: bool,
) -> Result<Output, CliError> {
    let kind = match kind {
        ModelKind::SubdividedJoin => S3Model::SubdividedJoin,
        ModelKind::JoinOfSubdivisions => S3Model::JoinOfSubdivisions,
    };
    let budget = if g.long_running_override {
        u128::MAX
    } else {
        g.budget.unwrap_or(DEFAULT_MODEL_BUDGET) as u128
    };
    if complement {
        let r = ring(g, CoefficientRing::PrimeField(5))?;
        return match complement_pipeline(m, q, kind, r, budget)? {
            ComplementOutcome::Refused {
                projected_top_simplices,
                budget,
                ..
            } => {
                let summary = format!(
                    "REFUSED: complement of ({m},{q}) projects {projected_top_simplices} top simplices, budget {budget}\n  \
                     rerun with --long-running-override or a larger --budget\n"
                );
                let result = json!({
                    "refused": true,
                    "m": m, "q": q, "model": kind,
                    "projected_top_simplices": projected_top_simplices.to_string(),
                    "budget": budget.to_string(),
                });
                Ok(Output {
                    document: document("model", g, result),
                    summary,
                    status: 2,
                })
            }
            ComplementOutcome::Completed(run) => {
                let summary = format!(
                    "COMPLEMENT ({m},{q}) {:?} over {}\n  S3 f-vector {:?}\n  product top simplices {}\n  \
                     complement f-vector {:?}\n  betti {:?}, expected {:?}: {}\n  {:.2}s\n",
                    run.model,
                    run.ring,
                    run.s3_f_vector,
                    run.product_top_simplices,
                    run.complement_f_vector,
                    run.homology.betti_trimmed(),
                    run.expected_betti,
                    if run.matches_formula { "match" } else { "MISMATCH" },
                    run.seconds
                );
                let status = if run.matches_formula { 0 } else { 1 };
                Ok(Output {
                    document: document("model", g, serde_json::to_value(&run).map_err(input)?),
                    summary,
                    status,
                })
            }
        };
    }
    let r = ring(g, CoefficientRing::Integers)?;
    let action = s3_with_action(m, q, kind).map_err(input)?;
    let s3 = action.complex();
    let lens = lens_space(m, q).map_err(input)?;
    let lens_h = lens.complex.homology(r);
    let projected = projected_product_size(s3, s3);
    let free = action.stars_disjoint();
    let summary = format!(
        "S3 MODEL ({m},{q}) {kind:?}\n  f-vector {:?}\n  action order {}, vertex stars disjoint: {free}\n  \
         projected S3xS3 top simplices {projected}\nLENS L({m},{q}) after {} subdivision(s)\n  f-vector {:?}\n{}",
        s3.f_vector(),
        action.order(),
        lens.subdivisions,
        lens.complex.f_vector(),
        indent(&lens_h.render())
    );
    let result = json!({
        "m": m, "q": q, "model": kind,
        "s3_f_vector": s3.f_vector(),
        "stars_disjoint": free,
        "projected_product_top_simplices": projected.to_string(),
        "lens_subdivisions": lens.subdivisions,
        "lens_f_vector": lens.complex.f_vector(),
        "lens_homology": lens_h,
    });
    Ok(Output {
        document: document("model", g, result),
        summary,
        status: 0,
    })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

fn fixture(name: &str) -> Result<SimplicialComplex, CliError> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::Input(format!("bad number {s:?} in fixture {name:?}")))
    };
    Ok(match parts.as_slice() {
        ["torus33"] => staircase_torus(3).map_err(input)?,
        ["rp2"] => rp2_six_vertex(),
        ["sphere", n] => boundary_sphere(num(n)?),
        ["s3join", m] => {
            let p = polygon(num(m)?).map_err(input)?;
            join(&p, &p)
        }
        ["lens", m, q] => lens_space(num(m)?, num(q)?).map_err(input)?.complex,
        ["split", m] => split_model(num(m)?)?,
        _ => {
            return Err(CliError::Input(format!(
                "unknown fixture {name:?}; expected torus33, rp2, sphere:<n>, s3join:<m>, lens:<m>:<q> or split:<m>"
            )))
        }
    })
}

pub fn homology(g: &Global, label: &str, file: Option<&[u8]>) -> Result<Output, CliError> {
    let r = ring(g, CoefficientRing::Integers)?;
    let k = match file {
        Some(bytes) => {
            let text =
                std::str::from_utf8(bytes).map_err(|e| CliError::Input(format!("{label}: {e}")))?;
            SimplicialComplex::parse(text).map_err(|e| CliError::Input(format!("{label}: {e}")))?
        }
        None => fixture(label)?,
    };
    let h = k.homology(r);
    let summary = format!(
        "HOMOLOGY of {label} over {r}\n  f-vector {:?}\n{}",
        k.f_vector(),
        indent(&h.render())
    );
    let result = json!({ "input": label, "f_vector": k.f_vector(), "homology": h });
    Ok(Output {
        document: document("homology", g, result),
        summary,
        status: 0,
    })
}

pub fn massey(
    g: &Global,
    text: &[u8],
    degrees: [usize; 3],
    classes: Option<&[String]>,
) -> Result<Output, CliError> {
    let text = std::str::from_utf8(text).map_err(input)?;
    let file = DgaFile::parse(text)?;
    match ring(g, CoefficientRing::Rationals)? {
        CoefficientRing::Rationals => massey_in(g, &file, Rationals, degrees, classes),
        CoefficientRing::PrimeField(p) => massey_in(
            g,
            &file,
            PrimeField::new(p).map_err(input)?,
            degrees,
            classes,
        ),
        CoefficientRing::Integers => Err(CliError::Input(
            "Massey products need a field: use --ring Q or Fp:<p>".into(),
        )),
    }
}

fn massey_in<F: Field>(
    g: &Global,
    file: &DgaFile,
    field: F,
    degrees: [usize; 3],
    classes: Option<&[String]>,
) -> Result<Output, CliError> {
    let ring = field.ring();
    let dga = file.build(field)?;
    let h = Cohomology::new(dga);
    let Some(names) = classes else {
        let budget = g.budget.map_or(SWEEP_BUDGET, |b| b as usize);
        let report = massey_sweep(&h, degrees, SweepPattern::Basis, budget)?;
        let mut summary = format!(
            "MASSEY SWEEP degrees {degrees:?} over {ring}\n  {} triples, {} trivial, {} undefined, {} nontrivial{}\n",
            report.triples_examined,
            report.trivial,
            report.undefined,
            report.nontrivial.len(),
            if report.incomplete { " (incomplete)" } else { "" }
        );
        // Sweep classes are coordinates in these cohomology bases.
        let out_degree = degrees.iter().sum::<usize>() - 1;
        let mut shown: Vec<usize> = degrees.to_vec();
        shown.push(out_degree);
        shown.sort();
        shown.dedup();
        for d in shown {
            let basis: Vec<String> = h
                .representatives(d)
                .iter()
                .map(|v| h.algebra().format_vector(d, v))
                .collect();
            writeln!(summary, "  H^{d} basis [{}]", basis.join(", ")).ok();
        }
        let tuple = |c: &[String]| format!("({})", c.join(", "));
        for e in &report.nontrivial {
            writeln!(
                summary,
                "  <{}, {}, {}> = {}",
                tuple(&e.classes[0]),
                tuple(&e.classes[1]),
                tuple(&e.classes[2]),
                tuple(&e.representative)
            )
            .ok();
        }
        let status = if report.incomplete { 2 } else { 0 };
        let doc = document("massey", g, serde_json::to_value(&report).map_err(input)?);
        return Ok(Output {
            document: doc,
            summary,
            status,
        });
    };
    let alg = h.algebra();
    let mut coords = Vec::new();
    for (name, &d) in names.iter().zip(&degrees) {
        let (deg, v) = alg
            .element(name)
            .ok_or_else(|| CliError::Input(format!("unknown basis element {name:?}")))?;
        if deg != d {
            return Err(CliError::Input(format!("{name} has degree {deg}, not {d}")));
        }
        coords.push(h.coordinates(d, &v)?);
    }
    let label = format!("<{}, {}, {}>", names[0], names[1], names[2]);
    let (summary, result) = match triple_massey(&h, degrees, [&coords[0], &coords[1], &coords[2]]) {
        Ok(o) => {
            let show = |c: &[F::Elem]| -> Result<String, CliError> {
                Ok(alg.format_vector(o.degree, &h.cocycle_of(o.degree, c)?))
            };
            let rep = show(&o.representative)?;
            let ind = o
                .indeterminacy
                .iter()
                .map(|v| show(v))
                .collect::<Result<Vec<_>, _>>()?;
            let summary = format!(
                "MASSEY {label} over {ring}\n  verdict {}\n  representative {rep}\n  indeterminacy [{}]\n",
                o.verdict,
                ind.join(", ")
            );
            (
                summary,
                json!({ "triple": label, "degree": o.degree, "verdict": o.verdict, "representative": rep, "indeterminacy": ind }),
            )
        }
        Err(e @ MasseyError::ProductNonzero { .. }) => (
            format!("MASSEY {label} over {ring}\n  UNDEFINED: {e}\n"),
            json!({ "triple": label, "verdict": "UNDEFINED", "reason": e.to_string() }),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(Output {
        document: document("massey", g, result),
        summary,
        status: 0,
    })
}

pub fn pattern(g: &Global, m: u32, q: u32) -> Result<Output, CliError> {
    let p = intersection_pattern(m, q).map_err(input)?;
    let summary = format!(
        "PATTERN ({m},{q})\n{}  offsets {:?}, symmetric {}, shift-invariant {}\n",
        indent(&p.render()),
        p.offsets(),
        p.is_symmetric(),
        p.is_shift_invariant()
    );
    let result = json!({ "pattern": p, "offsets": p.offsets() });
    Ok(Output {
        document: document("pattern", g, result),
        summary,
        status: 0,
    })
}

pub fn formulas(g: &Global, m: usize, n: usize) -> Result<Output, CliError> {
    if m < 1 || n < 1 {
        return Err(CliError::Input("need m ≥ 1 and n ≥ 1".into()));
    }
    let p = poincare_polynomial(m, n);
    let (h2, h2c) = (h2_rank(m, n), h2_rank_closed(m, n));
    let (ord, unord) = (
        fundamental_group_summary(m, n, true),
        fundamental_group_summary(m, n, false),
    );
    let summary = format!(
        "FORMULAS m={m} n={n}\n  Poincare polynomial {}\n  total rank {}, Euler characteristic {}\n  \
         rank H2 {h2} (closed form {h2c})\n  pi1 ordered {} (order {}), unordered {} (order {})\n",
        format_poly(&p),
        evaluate(&p, 1),
        evaluate(&p, -1),
        ord.family,
        ord.order,
        unord.family,
        unord.order
    );
    let result = json!({
        "m": m, "n": n,
        "poincare_polynomial": p.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "h2_rank": h2, "h2_rank_closed": h2c,
        "pi1_ordered": ord, "pi1_unordered": unord,
    });
    let status = if h2 == h2c { 0 } else { 1 };
    Ok(Output {
        document: document("formulas", g, result),
        summary,
        status,
    })
}
