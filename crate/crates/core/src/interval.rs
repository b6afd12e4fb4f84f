//! Closed `f64` intervals with outward rounding.
//!
//! Basic arithmetic in IEEE 754 is correctly rounded, so one `next_up` /
//! `next_down` step per operation keeps the true value inside. The
//! transcendental functions of the platform library are accurate to within
//! one ulp; they are widened by two steps on each side.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, steps: u32) -> f64 {
    (0..steps).fold(x, |x, _| x.next_down())
}

fn up(x: f64, steps: u32) -> f64 {
    (0..steps).fold(x, |x, _| x.next_up())
}

// Named methods rather than operator traits: every operation rounds outward.
#[allow(clippy::should_implement_trait)]
impl Interval {
    /// A value representable exactly in `f64`.
    pub fn exact(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    fn widened(lo: f64, hi: f64, steps: u32) -> Interval {
        Interval::new(down(lo, steps), up(hi, steps))
    }

    pub fn from_u64(n: u64) -> Interval {
        let x = n as f64;
        if x as u64 == n && n < (1 << 53) {
            Interval::exact(x)
        } else {
            Interval::widened(x, x, 1)
        }
    }

    /// Encloses a big integer; `+∞` is used above the `f64` range.
    pub fn from_big(n: &BigUint) -> Interval {
        if let Some(v) = n.to_u64() {
            return Interval::from_u64(v);
        }
        match n.to_f64() {
            Some(x) if x.is_finite() => Interval::widened(x, x, 1),
            _ => Interval::new(f64::MAX, f64::INFINITY),
        }
    }

    /// Encloses `log₂ n` for a positive big integer of any size.
    pub fn log2_big(n: &BigUint) -> Interval {
        assert!(n.bits() > 0, "logarithm of zero");
        let shift = n.bits().saturating_sub(64);
        let top = (n >> shift).to_u64().expect("at most 64 bits");
        let s = Interval::from_u64(shift);
        let lo = Interval::from_u64(top).log2().add(s);
        if shift == 0 {
            return lo;
        }
        // n lies in [top, top + 1) · 2^shift.
        let hi = Interval::from_u64(top).add(Interval::exact(1.0)).log2().add(s);
        Interval::new(lo.lo, hi.hi)
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo / 2.0 + self.hi / 2.0
        } else if self.lo.is_finite() {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::widened(self.lo + o.lo, self.hi + o.hi, 1)
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval::widened(self.lo - o.hi, self.hi - o.lo, 1)
    }

    pub fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi, 1)
    }

    /// Division by an interval that excludes zero.
    pub fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi, 1)
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "logarithm of a non-positive interval");
        Interval::widened(self.lo.ln(), self.hi.ln(), 2)
    }

    pub fn log2(self) -> Interval {
        assert!(self.lo > 0.0, "logarithm of a non-positive interval");
        Interval::widened(self.lo.log2(), self.hi.log2(), 2)
    }

    pub fn exp(self) -> Interval {
        Interval::widened(self.lo.exp(), self.hi.exp(), 2).clamp_nonneg()
    }

    pub fn exp2(self) -> Interval {
        Interval::widened(self.lo.exp2(), self.hi.exp2(), 2).clamp_nonneg()
    }

    fn clamp_nonneg(self) -> Interval {
        Interval::new(self.lo.max(0.0), self.hi)
    }

    /// `self^e` for a positive base, through `exp(e ln self)`.
    pub fn pow(self, e: Interval) -> Interval {
        e.mul(self.ln()).exp()
    }

    /// `Some(ordering)` when the intervals are disjoint or both are the
    /// same point, `None` when they overlap.
    pub fn partial_cmp_certain(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Whether `self ≤ o` holds for every pair of enclosed values; `None`
    /// if the enclosures overlap.
    pub fn certainly_le(&self, o: &Interval) -> Option<bool> {
        if self.hi <= o.lo {
            Some(true)
        } else if self.lo > o.hi {
            Some(false)
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_known_values() {
        let two = Interval::exact(2.0);
        assert!(two.ln().contains(std::f64::consts::LN_2));
        assert!(Interval::exact(9.0).log2().contains(9f64.log2()));
        let third = Interval::exact(1.0).div(Interval::exact(3.0));
        assert!(third.lo < third.hi && third.width() < 1e-15);
        assert!(two.pow(Interval::exact(10.0)).contains(1024.0));
        assert_eq!(
            Interval::exact(1.0).partial_cmp_certain(&Interval::exact(2.0)),
            Some(Ordering::Less)
        );
        assert_eq!(third.partial_cmp_certain(&Interval::new(0.3, 0.34)), None);
    }

    #[test]
    fn big_integers() {
        let n = BigUint::from(10u32).pow(30);
        let i = Interval::from_big(&n);
        assert!(i.lo <= 1e30 && 1e30 <= i.hi);
        let huge = BigUint::from(2u32).pow(2000);
        assert_eq!(Interval::from_big(&huge).hi, f64::INFINITY);
        assert!(Interval::log2_big(&huge).contains(2000.0));
        assert!(Interval::log2_big(&(huge - 1u32)).lo < 2000.0);
        assert!(Interval::log2_big(&BigUint::from(8u32)).contains(3.0));
    }
}
