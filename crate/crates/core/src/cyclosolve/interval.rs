//! Closed `f64` intervals with outward rounding.
//!
//! Each arithmetic result is widened by one ulp on each side, which covers
//! round-to-nearest error. `cos` is widened by a fixed `1e-14`, far above
//! libm's error on the small arguments used here.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::affine::Q;

const TRIG_SLACK: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// An enclosure of a rational.
    pub fn rational(x: &Q) -> Self {
        let v = x.to_f64().expect("finite rational");
        Interval {
            lo: down(down(v)),
            hi: up(up(v)),
        }
    }

    /// An enclosure of `2π/m`.
    pub fn two_pi_over(m: u32) -> Self {
        let v = 2.0 * PI / m as f64;
        Interval {
            lo: down(down(v)),
            hi: up(up(v)),
        }
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: down(self.lo - o.hi),
            hi: up(self.hi - o.lo),
        }
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(self, o: Interval) -> Interval {
        if self == Interval::ZERO || o == Interval::ZERO {
            return Interval::ZERO;
        }
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// `min |x|` over the interval.
    pub fn mignitude(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn cos(self) -> Interval {
        if self.width() >= 2.0 * PI - 1e-9 {
            return Interval { lo: -1.0, hi: 1.0 };
        }
        let (ca, cb) = (self.lo.cos(), self.hi.cos());
        let mut lo = ca.min(cb);
        let mut hi = ca.max(cb);
        // Extrema at 2πk (max) and π + 2πk (min); near misses count as hits.
        let tol = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        let k = ((self.lo - tol) / (2.0 * PI)).ceil();
        if 2.0 * PI * k <= self.hi + tol {
            hi = 1.0;
        }
        let k = ((self.lo - PI - tol) / (2.0 * PI)).ceil();
        if PI + 2.0 * PI * k <= self.hi + tol {
            lo = -1.0;
        }
        Interval {
            lo: (lo - TRIG_SLACK).max(-1.0),
            hi: (hi + TRIG_SLACK).min(1.0),
        }
    }

    pub fn sin(self) -> Interval {
        let half_pi = Interval {
            lo: down(PI / 2.0),
            hi: up(PI / 2.0),
        };
        self.sub(half_pi).cos()
    }
}
