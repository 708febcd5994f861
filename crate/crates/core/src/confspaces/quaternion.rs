//! Exact check that `(x, y) ↦ (x y⁻¹, y)` turns "distinct orbits under left
//! translation by `ℤ_m ⊂ ℂ ⊂ ℍ`" into "first coordinate avoids `ℤ_m`".
//!
//! Quaternion components live in the cyclotomic field `ℚ(ζ_N)`, `N = lcm(4, m)`,
//! which holds `cos` and `sin` of `2πk/m`. Sample points are rational, from
//! the Cayley transform `(1 + v)(1 − v)⁻¹` of pure imaginary rational `v`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `ℤ[x] / Φ_N(x)`; elements are reduced coefficient vectors of length `φ(N)`.
#[derive(Clone, Debug)]
struct Cyclotomic {
    n: usize,
    /// Monic `Φ_N`, lowest degree first.
    phi: Vec<BigInt>,
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // `den` is monic.
    let mut r = num.to_vec();
    let (dn, dd) = (r.len() - 1, den.len() - 1);
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = r[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            r[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    quot
}

fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    // x^n − 1 = Π_{d | n} Φ_d.
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        p = poly_div_exact(&p, &cyclotomic_poly(d));
    }
    p
}

impl Cyclotomic {
    fn new(n: usize) -> Self {
        Cyclotomic {
            n,
            phi: cyclotomic_poly(n),
        }
    }

    fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }

    fn integer(&self, c: BigInt) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// `ζ_N^e`.
    fn root_power(&self, e: i64) -> Vec<BigInt> {
        let e = e.rem_euclid(self.n as i64) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        self.reduce(raw)
    }

    fn reduce(&self, mut raw: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        while raw.len() > d {
            let top = raw.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = raw.len() - d;
            for (j, c) in self.phi[..d].iter().enumerate() {
                if !c.is_zero() {
                    raw[shift + j] -= &top * c;
                }
            }
        }
        raw.resize(d, BigInt::zero());
        raw
    }

    fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut raw = vec![BigInt::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                raw[i + j] += x * y;
            }
        }
        self.reduce(raw)
    }
}

/// `(a + b i + c j + d k) / den` with components in `ℤ[ζ_N]`, `den > 0`.
#[derive(Clone, Debug)]
struct Quat {
    num: [Vec<BigInt>; 4],
    den: BigInt,
}

impl Quat {
    fn mul(&self, o: &Quat, k: &Cyclotomic) -> Quat {
        let [a1, b1, c1, d1] = &self.num;
        let [a2, b2, c2, d2] = &o.num;
        let m = |x: &Vec<BigInt>, y: &Vec<BigInt>| k.mul(x, y);
        let sum = |terms: [(i8, Vec<BigInt>); 4]| {
            terms.into_iter().fold(k.zero(), |acc, (s, t)| {
                if s > 0 {
                    k.add(&acc, &t)
                } else {
                    k.sub(&acc, &t)
                }
            })
        };
        Quat {
            num: [
                sum([
                    (1, m(a1, a2)),
                    (-1, m(b1, b2)),
                    (-1, m(c1, c2)),
                    (-1, m(d1, d2)),
                ]),
                sum([
                    (1, m(a1, b2)),
                    (1, m(b1, a2)),
                    (1, m(c1, d2)),
                    (-1, m(d1, c2)),
                ]),
                sum([
                    (1, m(a1, c2)),
                    (-1, m(b1, d2)),
                    (1, m(c1, a2)),
                    (1, m(d1, b2)),
                ]),
                sum([
                    (1, m(a1, d2)),
                    (1, m(b1, c2)),
                    (-1, m(c1, b2)),
                    (1, m(d1, a2)),
                ]),
            ],
            den: &self.den * &o.den,
        }
    }

    fn conj(&self) -> Quat {
        let [a, b, c, d] = &self.num;
        let neg = |x: &Vec<BigInt>| x.iter().map(|v| -v).collect::<Vec<_>>();
        Quat {
            num: [a.clone(), neg(b), neg(c), neg(d)],
            den: self.den.clone(),
        }
    }

    fn equals(&self, o: &Quat) -> bool {
        self.num
            .iter()
            .zip(&o.num)
            .all(|(x, y)| x.iter().zip(y).all(|(a, b)| a * &o.den == b * &self.den))
    }

    /// `|q|² = 1`.
    fn is_unit(&self, k: &Cyclotomic) -> bool {
        let n = self
            .num
            .iter()
            .fold(k.zero(), |acc, x| k.add(&acc, &k.mul(x, x)));
        n == k.integer(&self.den * &self.den)
    }
}

/// Rational unit quaternion `(1 + v)² / (1 + |v|²)`, `v = p / d` pure imaginary.
fn cayley(p: [i64; 3], d: i64, k: &Cyclotomic) -> Quat {
    let one_v = Quat {
        num: [d, p[0], p[1], p[2]].map(|c| k.integer(BigInt::from(c))),
        den: BigInt::one(),
    };
    let sq = one_v.mul(&one_v, k);
    let den = BigInt::from(d * d + p.iter().map(|x| x * x).sum::<i64>());
    Quat { num: sq.num, den }
}

/// `ζ_m^e = cos(2πe/m) + i sin(2πe/m)` as a quaternion.
fn root_of_unity(m: usize, e: i64, k: &Cyclotomic) -> Quat {
    let step = (k.n / m) as i64;
    let (z, zi) = (k.root_power(step * e), k.root_power(-step * e));
    // sin = (z − z⁻¹) / 2i = −i (z − z⁻¹) / 2, with i = ζ_N^{N/4}.
    let minus_i = k.root_power(3 * (k.n / 4) as i64);
    Quat {
        num: [
            k.add(&z, &zi),
            k.mul(&minus_i, &k.sub(&z, &zi)),
            k.zero(),
            k.zero(),
        ],
        den: BigInt::from(2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionSplitReport {
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
    /// Samples built on purpose with `x = ζ^k y`.
    pub orbit_samples: usize,
    /// `(sample, k)` pairs where `x = ζ^k y` and `x y⁻¹ = ζ^k` disagree.
    pub mismatches: usize,
    /// Samples where `(u, y) ↦ (u y, y)` does not undo the map.
    pub inverse_failures: usize,
    /// Mismatches of the wrong map `(x, y) ↦ (x y, y)`; must be positive.
    pub wrong_map_mismatches: usize,
    pub passed: bool,
}

pub fn quaternion_split_test(m: usize, samples: usize, seed: u64) -> QuaternionSplitReport {
    assert!(m >= 2, "order must be at least 2");
    let k = Cyclotomic::new(m.lcm(&4));
    let roots: Vec<Quat> = (0..m as i64).map(|e| root_of_unity(m, e, &k)).collect();
    debug_assert!(roots.iter().all(|r| r.is_unit(&k)));
    let rational = |rng: &mut ChaCha8Rng| {
        let p = [(); 3].map(|_| rng.gen_range(-40i64..=40));
        cayley(p, rng.gen_range(1i64..=30), &k)
    };
    // Sample i draws from stream i, so the outcome ignores scheduling.
    let outcomes: Vec<(usize, usize, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let y = rational(&mut rng);
            let x = if i % 2 == 1 {
                roots[rng.gen_range(0..m)].mul(&y, &k)
            } else {
                rational(&mut rng)
            };
            // Unit quaternions: y⁻¹ = ȳ.
            let u = x.mul(&y.conj(), &k);
            let wrong = x.mul(&y, &k);
            let (mut bad, mut wrong_bad) = (0, 0);
            for r in &roots {
                let same_orbit = x.equals(&r.mul(&y, &k));
                bad += usize::from(same_orbit != u.equals(r));
                wrong_bad += usize::from(same_orbit != wrong.equals(r));
            }
            (bad, wrong_bad, !u.mul(&y, &k).equals(&x))
        })
        .collect();
    let mut report = QuaternionSplitReport {
        m,
        samples,
        seed,
        orbit_samples: samples / 2,
        mismatches: outcomes.iter().map(|o| o.0).sum(),
        inverse_failures: outcomes.iter().filter(|o| o.2).count(),
        wrong_map_mismatches: outcomes.iter().map(|o| o.1).sum(),
        passed: false,
    };
    report.passed = report.mismatches == 0 && report.inverse_failures == 0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let c = |n| {
            cyclotomic_poly(n)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(c(4), "1,0,1");
        assert_eq!(c(7), "1,1,1,1,1,1,1");
        assert_eq!(Cyclotomic::new(28).degree(), 12);
    }

    #[test]
    fn roots_have_order_m() {
        for m in [2usize, 3, 7, 12] {
            let k = Cyclotomic::new(m.lcm(&4));
            let z = root_of_unity(m, 1, &k);
            let mut p = z.clone();
            for _ in 1..m {
                p = p.mul(&z, &k);
            }
            assert!(p.equals(&root_of_unity(m, 0, &k)), "m = {m}");
            assert!(!z.equals(&root_of_unity(m, 0, &k)));
            assert!(z.is_unit(&k));
        }
    }

    #[test]
    fn split_passes_and_wrong_map_fails() {
        for m in [2, 7] {
            let r = quaternion_split_test(m, 200, 11);
            assert!(r.passed, "{r:?}");
            assert!(r.wrong_map_mismatches > 0);
        }
    }
}
