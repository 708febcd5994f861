//! The Massey engine against exhaustive enumeration of lifts.
//!
//! Over 𝔽_p with tiny cochain groups every defining system can be listed:
//! `⟨x, y, z⟩` is defined iff `xy` and `yz` are exact, and vanishes iff some
//! `Z·z + x·X` with `δZ = xy`, `δX = yz` is a coboundary.

use std::collections::HashSet;

use lensmassey::chaincore::{Field, PrimeField, Rationals, SparseVec};
use lensmassey::cupmassey::{
    heisenberg, random_exterior_dga, triple_massey, triple_massey_randomized, CochainAlgebra,
    Cohomology, Dga, MasseyError, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Oracle {
    Undefined,
    Trivial,
    Nontrivial,
}

/// Every vector of `𝔽_p^n`.
fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (0..p).map(move |c| [v.clone(), vec![c]].concat()))
            .collect();
    }
    out
}

struct Dense<'a> {
    a: &'a Dga<PrimeField>,
    f: PrimeField,
}

impl Dense<'_> {
    fn sparse(&self, v: &[u32]) -> SparseVec<u32> {
        SparseVec::from_dense(&self.f, v)
    }

    fn dense(&self, d: usize, v: &SparseVec<u32>) -> Vec<u32> {
        v.to_dense(&self.f, self.a.dim(d))
    }

    fn delta(&self, d: usize, v: &[u32]) -> Vec<u32> {
        let out = self
            .a
            .differential(d)
            .mul_vec(&self.f, &self.sparse(v))
            .unwrap();
        self.dense(d + 1, &out)
    }

    fn mul(&self, p: usize, x: &[u32], q: usize, y: &[u32]) -> Vec<u32> {
        self.dense(
            p + q,
            &self.a.multiply(p, &self.sparse(x), q, &self.sparse(y)),
        )
    }

    fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(a, b)| self.f.add(a, b)).collect()
    }
}

/// Degree-1 classes only, which is what the random generator produces.
fn brute_force(a: &Dga<PrimeField>, x: &[u32], y: &[u32], z: &[u32]) -> Oracle {
    let f = *a.field();
    let e = Dense { a, f };
    let ones = all_vectors(f.modulus(), a.dim(1));
    let xy = e.mul(1, x, 1, y);
    let yz = e.mul(1, y, 1, z);
    let zs: Vec<&Vec<u32>> = ones.iter().filter(|w| e.delta(1, w) == xy).collect();
    let xs: Vec<&Vec<u32>> = ones.iter().filter(|w| e.delta(1, w) == yz).collect();
    if zs.is_empty() || xs.is_empty() {
        return Oracle::Undefined;
    }
    let exact: HashSet<Vec<u32>> = ones.iter().map(|w| e.delta(1, w)).collect();
    let zero3 = vec![0; a.dim(3)];
    for big_z in &zs {
        for big_x in &xs {
            // δ(Z·z) = xyz and δ(x·X) = −xyz for |x| = 1.
            let rep = e.add(&e.mul(1, big_z, 1, z), &e.mul(1, x, 1, big_x));
            assert_eq!(e.delta(2, &rep), zero3, "representative is not a cocycle");
            if exact.contains(&rep) {
                return Oracle::Trivial;
            }
        }
    }
    Oracle::Nontrivial
}

fn engine(h: &Cohomology<Dga<PrimeField>>, c: [&[u32]; 3]) -> Oracle {
    match triple_massey(h, [1, 1, 1], c) {
        Ok(o) => match o.verdict {
            Verdict::Trivial => Oracle::Trivial,
            Verdict::Nontrivial => Oracle::Nontrivial,
        },
        Err(MasseyError::ProductNonzero { .. }) => Oracle::Undefined,
        Err(e) => panic!("engine error: {e}"),
    }
}

#[test]
fn random_dgas_agree_with_enumeration() {
    let mut compared = 0usize;
    let mut nontrivial = 0usize;
    let mut undefined = 0usize;
    for seed in 0..240u64 {
        let p = if seed % 2 == 0 { 2 } else { 3 };
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_exterior_dga(f, &mut rng);
        assert!(a.len() <= 12, "seed {seed}: {} basis elements", a.len());
        let h = Cohomology::new(a.clone());
        let dim = h.dimension(1);
        let coords = all_vectors(p, dim);
        // Basis classes and, where cheap, every class.
        let classes: Vec<Vec<u32>> = if coords.len() <= 9 {
            coords.into_iter().collect()
        } else {
            (0..dim)
                .map(|i| (0..dim).map(|j| u32::from(i == j)).collect())
                .collect()
        };
        for cx in &classes {
            for cy in &classes {
                for cz in &classes {
                    let reps: Vec<Vec<u32>> = [cx, cy, cz]
                        .iter()
                        .map(|c| h.cocycle_of(1, c).unwrap().to_dense(&f, a.dim(1)))
                        .collect();
                    let want = brute_force(&a, &reps[0], &reps[1], &reps[2]);
                    let got = engine(&h, [cx, cy, cz]);
                    assert_eq!(
                        got, want,
                        "seed {seed} over F{p}: classes {cx:?} {cy:?} {cz:?}"
                    );
                    nontrivial += usize::from(want == Oracle::Nontrivial);
                    undefined += usize::from(want == Oracle::Undefined);
                }
            }
        }
        compared += 1;
    }
    assert!(compared >= 200);
    // The sample must exercise every outcome.
    assert!(
        nontrivial > 0 && undefined > 0,
        "nontrivial {nontrivial}, undefined {undefined}"
    );
}

#[test]
fn heisenberg_aab() {
    let h = Cohomology::new(heisenberg(Rationals));
    let a = h.algebra();
    let class = |n: &str| h.coordinates(1, &a.element(n).unwrap().1).unwrap();
    let (ca, cb) = (class("a"), class("b"));
    let o = triple_massey(&h, [1, 1, 1], [&ca, &ca, &cb]).unwrap();
    assert_eq!(o.verdict, Verdict::Nontrivial);
    assert!(o.indeterminacy.is_empty());
    let rep = h.cocycle_of(2, &o.representative).unwrap();
    // Up to sign and coboundaries, which vanish in degree 2 here.
    let shown = a.format_vector(2, &rep);
    assert!(shown == "ac" || shown == "-ac", "{shown}");
}

/// Random coboundary shifts of the representatives and random cocycle
/// shifts of the lifts never change the verdict or the coset.
#[test]
fn randomized_reruns_are_invariant() {
    const SEEDS: [u64; 4] = [3, 17, 101, 2024];
    let h = Cohomology::new(heisenberg(Rationals));
    let f = Rationals;
    let a = h.algebra();
    let class = |n: &str| h.coordinates(1, &a.element(n).unwrap().1).unwrap();
    let (ca, cb) = (class("a"), class("b"));
    let base = triple_massey(&h, [1, 1, 1], [&ca, &ca, &cb]).unwrap();
    for &s in &SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for _ in 0..25 {
            let o = triple_massey_randomized(&h, [1, 1, 1], [&ca, &ca, &cb], &mut rng).unwrap();
            assert_eq!(o.verdict, base.verdict, "seed {s}");
            assert!(o.same_coset(&f, &base), "seed {s}");
        }
    }

    // And on random DGAs over 𝔽₃ with whatever verdicts they carry.
    let f3 = PrimeField::new(3).unwrap();
    let mut reruns = 0;
    for seed in [5u64, 8, 13, 21, 34] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dga = random_exterior_dga(f3, &mut rng);
        let h = Cohomology::new(dga);
        let dim = h.dimension(1);
        for i in 0..dim {
            for j in 0..dim {
                let e = |k: usize| (0..dim).map(|l| u32::from(l == k)).collect::<Vec<u32>>();
                let (x, y, z) = (e(i), e(j), e(i));
                let Ok(base) = triple_massey(&h, [1, 1, 1], [&x, &y, &z]) else {
                    continue;
                };
                for _ in 0..4 {
                    let o =
                        triple_massey_randomized(&h, [1, 1, 1], [&x, &y, &z], &mut rng).unwrap();
                    assert_eq!(o.verdict, base.verdict, "seed {seed}");
                    assert!(o.same_coset(&f3, &base));
                    reruns += 1;
                }
            }
        }
    }
    assert!(reruns > 0);
}

#[test]
fn verdicts_ignore_global_sign() {
    let h = Cohomology::new(heisenberg(Rationals));
    let f = Rationals;
    let a = h.algebra();
    let class = |n: &str| h.coordinates(1, &a.element(n).unwrap().1).unwrap();
    let (ca, cb) = (class("a"), class("b"));
    let neg: Vec<_> = ca.iter().map(|c| f.neg(c)).collect();
    let base = triple_massey(&h, [1, 1, 1], [&ca, &ca, &cb]).unwrap();
    let flipped = triple_massey(&h, [1, 1, 1], [&neg, &ca, &cb]).unwrap();
    assert_eq!(base.verdict, flipped.verdict);
}
