use std::collections::BTreeMap;

use lensmassey::cyclosolve::{
    q, qf, residue_range, solve_congruences, Affine, CongruenceSystem, MagnitudeKind,
    PhaseExponent, Q,
};
use num_traits::Signed;
use proptest::prelude::*;

const M: u32 = 7;

fn affine(c: (i64, i64), t: (i64, i64), s: (i64, i64)) -> Affine {
    Affine::constant(qf(c.0, c.1))
        .add(&Affine::term("t", qf(t.0, t.1)))
        .add(&Affine::term("s", qf(s.0, s.1)))
}

/// Independent check of one equation: the variable vanishes or the phase
/// difference is an integer multiple of the modulus.
fn holds(diff: &Affine, point: &BTreeMap<String, Q>, var_nonzero: bool) -> bool {
    if !var_nonzero {
        return true;
    }
    let v = diff.eval(point) / q(M as i64);
    v.is_integer()
}

fn arb_rational() -> impl Strategy<Value = (i64, i64)> {
    (-8i64..=8, prop_oneof![Just(1i64), Just(2), Just(4)])
}

fn arb_equation() -> impl Strategy<Value = (Affine, Affine)> {
    (
        arb_rational(),
        arb_rational(),
        arb_rational(),
        arb_rational(),
        arb_rational(),
        arb_rational(),
    )
        .prop_map(|(a, b, c, d, e, f)| (affine(a, b, c), affine(d, e, f)))
}

fn system(eqs: &[(Affine, Affine)]) -> CongruenceSystem {
    let vars = ["r", "x"];
    let mut sys = CongruenceSystem::new(M)
        .param("t", q(0), q(1))
        .param("s", q(0), q(1));
    for v in vars {
        sys = sys.magnitude(v, MagnitudeKind::Free);
    }
    for (i, (l, r)) in eqs.iter().enumerate() {
        sys = sys.equation(l.clone(), r.clone(), Some(vars[i % 2]));
    }
    sys
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    /// Every branch satisfies each equation identically: either its variable
    /// is zero on the branch or the substituted difference is the constant `k·m`.
    #[test]
    fn branches_are_sound(eqs in proptest::collection::vec(arb_equation(), 1..=2)) {
        let sys = system(&eqs);
        let set = solve_congruences(&sys).unwrap();
        for b in &set.branches {
            for (eq, off) in sys.equations.iter().zip(&b.offsets) {
                let var = eq.var.as_ref().unwrap();
                match off {
                    Some(k) => {
                        let d = eq.difference().substitute(&b.parametrization);
                        prop_assert!(d.is_constant(), "difference {d} not constant on branch {b}");
                        prop_assert_eq!(d.constant, q(k * M as i64));
                    }
                    None => prop_assert!(b.pattern[var].is_zero()),
                }
            }
            for (p, (lo, hi)) in &b.ranges {
                prop_assert!(*lo >= q(0) && *hi <= q(1), "{p} leaves the box on {b}");
            }
        }
    }

    /// Dense rational sampling finds no solution outside the returned branches,
    /// and no covered point violates the system.
    #[test]
    fn grid_solutions_are_covered(eqs in proptest::collection::vec(arb_equation(), 1..=2)) {
        let sys = system(&eqs);
        let set = solve_congruences(&sys).unwrap();
        const N: i64 = 24;
        for i in 0..=N {
            for j in 0..=N {
                let point: BTreeMap<String, Q> = [("t".to_string(), qf(i, N)), ("s".to_string(), qf(j, N))].into();
                for (rn, xn) in [(true, true), (true, false), (false, true), (false, false)] {
                    let nonzero: BTreeMap<String, bool> = [("r".to_string(), rn), ("x".to_string(), xn)].into();
                    let ok = sys.equations.iter().all(|e| holds(&e.difference(), &point, nonzero[e.var.as_ref().unwrap()]));
                    prop_assert_eq!(set.covers(&point, &nonzero), ok, "t = {}/{}, s = {}/{}, r {}, x {}", i, N, j, N, rn, xn);
                }
            }
        }
    }
}

fn phase(e: &str) -> PhaseExponent {
    PhaseExponent {
        exponent: Affine::parse(e).unwrap(),
        modulus: M,
    }
}

fn unit_box() -> BTreeMap<String, (Q, Q)> {
    [
        ("t".to_string(), (q(0), q(1))),
        ("s".to_string(), (q(0), q(1))),
    ]
    .into()
}

#[test]
fn residue_ranges() {
    assert_eq!(
        residue_range(&phase("4*t"), &phase("1 + s"), &unit_box()).unwrap(),
        vec![0]
    );
    assert_eq!(
        residue_range(&phase("3"), &phase("3"), &unit_box()).unwrap(),
        vec![0]
    );
    // t = 10 + 2s + 7k has no solution in the unit square.
    let ks = residue_range(&phase("t"), &phase("10 + 2*s"), &unit_box()).unwrap();
    for k in ks {
        let sys = CongruenceSystem::new(M)
            .param("t", q(0), q(1))
            .param("s", q(0), q(1))
            .equation(
                Affine::parse("t").unwrap(),
                Affine::parse(&format!("10 + 2*s + {}", 7 * k)).unwrap(),
                None,
            );
        assert!(solve_congruences(&sys).unwrap().is_empty());
    }
}

fn cone_system(a: &str, b: &str, c: &str, d: &str) -> CongruenceSystem {
    CongruenceSystem::new(M)
        .param("t", q(0), q(1))
        .param("s", q(0), q(1))
        .magnitude("r", MagnitudeKind::Free)
        .magnitude("x", MagnitudeKind::Free)
        .sphere(&["r", "x"])
        .equation(
            Affine::parse(a).unwrap(),
            Affine::parse(b).unwrap(),
            Some("r"),
        )
        .equation(
            Affine::parse(c).unwrap(),
            Affine::parse(d).unwrap(),
            Some("x"),
        )
}

#[test]
fn cone_misses_the_sixth_membrane() {
    assert!(
        solve_congruences(&cone_system("4*t", "5 + s", "t", "10 + 2*s"))
            .unwrap()
            .is_empty()
    );
}

#[test]
fn cone_meets_the_second_membrane_in_a_path() {
    let set = solve_congruences(&cone_system("4*t", "1 + s", "t", "2 + 2*s")).unwrap();
    assert_eq!(set.branches.len(), 1);
    let b = &set.branches[0];
    assert_eq!(b.dimension, 1);
    assert!(b.pattern["x"].is_zero());
    assert!(!b.pattern["r"].is_zero());
    assert_eq!(b.parametrization["t"], Affine::parse("1/4 + s/4").unwrap());
    assert_eq!(b.ranges["s"], (q(0), q(1)));
    assert!(b.ranges["t"].0.is_positive());
}
