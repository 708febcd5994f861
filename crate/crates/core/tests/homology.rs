use lensmassey::chaincore::CoefficientRing;
use lensmassey::simplicial::{
    boundary_sphere, join, lens_space, polygon, rp2_six_vertex, staircase_torus, SimplicialComplex,
};
use num_bigint::BigInt;

const Z: CoefficientRing = CoefficientRing::Integers;

fn torsion(k: &SimplicialComplex, d: usize) -> Vec<i64> {
    k.homology(Z)
        .torsion(d)
        .iter()
        .map(|t| i64::try_from(t.clone()).unwrap())
        .collect()
}

#[test]
fn spheres_up_to_dimension_four() {
    for n in 1..=4 {
        let h = boundary_sphere(n).homology(Z);
        let mut expected = vec![0; n + 1];
        expected[0] = 1;
        expected[n] = 1;
        assert_eq!(h.betti_trimmed(), expected, "S^{n}");
        assert!((0..=n).all(|d| h.torsion(d).is_empty()));
    }
}

#[test]
fn torus_and_projective_plane() {
    let t = staircase_torus(3).unwrap();
    assert_eq!(t.homology(Z).betti_trimmed(), vec![1, 2, 1]);
    assert!(torsion(&t, 1).is_empty());

    let p = rp2_six_vertex();
    assert_eq!(p.f_vector(), vec![6, 15, 10]);
    let h = p.homology(Z);
    assert_eq!(h.betti_trimmed(), vec![1]);
    assert_eq!(torsion(&p, 1), vec![2]);
    assert!(torsion(&p, 2).is_empty());
    // Over 𝔽₂ the torsion becomes free in degrees 1 and 2.
    assert_eq!(
        p.homology(CoefficientRing::PrimeField(2)).betti_trimmed(),
        vec![1, 1, 1]
    );
    assert_eq!(
        p.homology(CoefficientRing::Rationals).betti_trimmed(),
        vec![1]
    );
}

#[test]
fn join_of_heptagons_is_a_three_sphere() {
    let p = polygon(7).unwrap();
    let s3 = join(&p, &p);
    assert_eq!(s3.f_vector(), vec![14, 63, 98, 49]);
    assert_eq!(s3.euler_characteristic(), 0);
    assert_eq!(s3.homology(Z).betti_trimmed(), vec![1, 0, 0, 1]);
}

#[test]
fn lens_quotients_have_cyclic_fundamental_group() {
    for q in [1, 2] {
        let l = lens_space(7, q).unwrap();
        let h = l.complex.homology(Z);
        assert_eq!(h.betti_trimmed(), vec![1, 0, 0, 1], "L(7,{q})");
        assert_eq!(torsion(&l.complex, 1), vec![7], "L(7,{q})");
        assert!(torsion(&l.complex, 2).is_empty());
        // Quotient counts divide exactly by the order.
        let up = l.action.complex().f_vector();
        let down = l.complex.f_vector();
        assert!(up.iter().zip(&down).all(|(a, b)| *a == 7 * b));
    }
}

/// `dim H_d(K; 𝔽_p) = b_d + #{p | t in degree d} + #{p | t in degree d−1}`.
#[test]
fn universal_coefficients() {
    let fixtures = [
        boundary_sphere(3),
        staircase_torus(3).unwrap(),
        rp2_six_vertex(),
        lens_space(3, 1).unwrap().complex,
    ];
    for k in &fixtures {
        let hz = k.homology(Z);
        for p in [2u32, 3, 5, 7] {
            let hp = k.homology(CoefficientRing::PrimeField(p));
            let count = |d: usize| {
                hz.torsion(d)
                    .iter()
                    .filter(|t| (*t % BigInt::from(p)) == BigInt::from(0))
                    .count()
            };
            for d in 0..k.f_vector().len() {
                let below = if d == 0 { 0 } else { count(d - 1) };
                assert_eq!(
                    hp.betti()[d],
                    hz.betti()[d] + count(d) + below,
                    "p = {p}, degree {d}"
                );
            }
        }
    }
}

#[test]
fn euler_characteristic_from_betti_numbers() {
    for k in [
        boundary_sphere(4),
        staircase_torus(4).unwrap(),
        rp2_six_vertex(),
        lens_space(7, 2).unwrap().complex,
    ] {
        let h = k.homology(CoefficientRing::Rationals);
        let from_betti: i64 = h
            .betti()
            .iter()
            .enumerate()
            .map(|(d, b)| if d % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum();
        assert_eq!(from_betti, k.euler_characteristic());
    }
}
