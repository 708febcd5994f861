//! Transversality from hand-written tangent vectors, independent of the
//! patch machinery, plus the relabelled lemma suite and the quaternion split.

use lensmassey::confspaces::quaternion_split_test;
use lensmassey::cyclosolve::{
    q, tangent_rank, verify_certificate, Affine, ComplexEntry, PhaseTerm, RankVerdict,
    TangentFrame, DEFAULT_BUDGET,
};
use lensmassey::dualcalc::lemma_report;

fn zero() -> ComplexEntry {
    vec![]
}

/// `c·ζ^θ` with `c ∈ {±1, ±i}`.
fn ph(re: i64, im: i64, theta: &str) -> ComplexEntry {
    vec![PhaseTerm::new(q(re), q(im), Affine::parse(theta).unwrap())]
}

fn certify(frame: &TangentFrame) {
    match tangent_rank(frame, 6, DEFAULT_BUDGET).unwrap() {
        RankVerdict::Certified(c) => {
            assert!(c.margin > 0.0);
            assert!(verify_certificate(frame, &c, DEFAULT_BUDGET));
        }
        other => panic!("rank 6 not certified: {other:?}"),
    }
}

/// At `((0, x₂), (0, ζ^λ x₂))` with `x₂ = ζ^μ`: three tangent vectors of
/// each membrane and the direction along the intersection.
#[test]
fn first_and_fourth_membranes_span_six_dimensions() {
    let frame = TangentFrame {
        modulus: 7,
        params: vec![("lambda".into(), q(0), q(1)), ("mu".into(), q(0), q(7))],
        vectors: vec![
            [ph(1, 0, "0"), zero(), ph(1, 0, "lambda/2"), zero()],
            [ph(0, 1, "0"), zero(), ph(0, 1, "lambda/2"), zero()],
            [zero(), ph(0, 1, "mu"), zero(), ph(0, 1, "lambda + mu")],
            [ph(1, 0, "0"), zero(), ph(-1, 0, "lambda/2"), zero()],
            [ph(0, 1, "0"), zero(), ph(0, -1, "lambda/2"), zero()],
            [zero(), ph(0, 1, "mu"), zero(), ph(0, 1, "lambda + mu")],
            [zero(), zero(), zero(), ph(0, 1, "lambda + mu")],
        ],
    };
    certify(&frame);
}

/// At `((1, 0), (ζ^{1+s}, 0))`, `t = (1+s)/4`: four vectors of the second
/// membrane and three of the cone.
#[test]
fn cone_and_second_membrane_span_six_dimensions() {
    let t = "1/4 + s/4";
    let frame = TangentFrame {
        modulus: 7,
        params: vec![("s".into(), q(0), q(1))],
        vectors: vec![
            [ph(0, 1, "0"), zero(), ph(0, 1, "1 + s"), zero()],
            [zero(), ph(1, 0, "0"), zero(), ph(1, 0, "2 + 2*s")],
            [zero(), ph(0, 1, "0"), zero(), ph(0, 1, "2 + 2*s")],
            [zero(), zero(), ph(0, 1, "1 + s"), zero()],
            [zero(), ph(1, 0, "0"), zero(), ph(1, 0, t)],
            [zero(), ph(0, 1, "0"), zero(), ph(0, 1, t)],
            [zero(), zero(), ph(0, 1, &format!("4*({t})")), zero()],
        ],
    };
    certify(&frame);
}

#[test]
fn dropping_a_direction_is_detected() {
    // Without the intersection direction only five dimensions remain.
    let frame = TangentFrame {
        modulus: 7,
        params: vec![("lambda".into(), q(0), q(1))],
        vectors: vec![
            [ph(1, 0, "0"), zero(), ph(1, 0, "lambda/2"), zero()],
            [ph(0, 1, "0"), zero(), ph(0, 1, "lambda/2"), zero()],
            [zero(), ph(0, 1, "0"), zero(), ph(0, 1, "lambda")],
            [ph(1, 0, "0"), zero(), ph(-1, 0, "lambda/2"), zero()],
            [ph(0, 1, "0"), zero(), ph(0, -1, "lambda/2"), zero()],
            [zero(), ph(0, 1, "0"), zero(), ph(0, 1, "lambda")],
        ],
    };
    assert!(matches!(
        tangent_rank(&frame, 6, DEFAULT_BUDGET).unwrap(),
        RankVerdict::Fail { upper_bound: 5 }
    ));
}

#[test]
fn lemmas_survive_relabelling_by_minus_one() {
    let r = lemma_report(-1, DEFAULT_BUDGET).unwrap();
    assert!(
        r.all_passed(),
        "{:#?}",
        r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
    );
}

#[test]
fn quaternion_split_ten_thousand_samples() {
    let r = quaternion_split_test(7, 10_000, 0);
    assert!(r.passed, "{r:?}");
    assert_eq!(r.samples, 10_000);
    assert_eq!(r.seed, 0);
    assert!(r.wrong_map_mismatches > 0);
}
