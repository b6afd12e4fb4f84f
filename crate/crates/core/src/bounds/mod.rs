//! Lower-bound certificates, upper-bound constructions and exact oracles
//! for expression length.

mod divub;
mod fooling;
mod minrpn;
mod report;

pub use divub::{ub_divisibility_expr, DivUpper};
pub use fooling::{max_fooling_set, max_fooling_set_general, FoolingSet};
pub use minrpn::{min_rpn_exact, MinRpn};
pub use report::{bound_report, BoundReport, Certificate, ReportOptions, UpperBound};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::interval::Interval;
use crate::languages::{count, FamilySpec};
use crate::logproduct::h_perm;
use crate::serde_big;
use crate::{Error, Result};

/// A real-valued certificate, kept in the log domain so that large
/// instances neither overflow nor underflow.
#[derive(Clone, Debug, Serialize)]
pub struct RealBound {
    pub log2_value: Interval,
    /// `2^log2_value`; infinite or zero outside the `f64` range.
    pub value: Interval,
    /// The enclosure lies entirely below 1.
    pub vacuous: bool,
}

impl RealBound {
    fn from_log2(log2_value: Interval) -> RealBound {
        let value = log2_value.exp2();
        RealBound {
            vacuous: log2_value.hi < 0.0,
            log2_value,
            value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DivLower {
    #[serde(serialize_with = "serde_big::biguint")]
    pub count: BigUint,
    /// `|L| / (2ⁿ · n · p^{1 − log₂(n / log₂ p)})`.
    pub certificate: RealBound,
    /// The headline form `n⁻¹ · p^{log₂(n / log₂ p) − 2}`, without its
    /// hidden constant.
    pub asymptotic: RealBound,
}

fn check_div(n: usize, p: u64) -> Result<()> {
    if p <= 2 || p.is_multiple_of(2) {
        return Err(Error::invalid(format!("p must be odd and greater than 2, got {p}")));
    }
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    Ok(())
}

/// The divisibility certificate, with `|L|` computed exactly.
pub fn lb_divisibility(n: usize, p: u64) -> Result<DivLower> {
    check_div(n, p)?;
    let c = count(&FamilySpec::Divisibility { n, p }).value;
    let nn = Interval::from_u64(n as u64);
    let lp = Interval::from_u64(p).log2();
    let e = nn.div(lp).log2();
    let log_h = nn.add(nn.log2()).add(Interval::exact(1.0).sub(e).mul(lp));
    let asym = e.sub(Interval::exact(2.0)).mul(lp).sub(nn.log2());
    Ok(DivLower {
        certificate: RealBound::from_log2(Interval::log2_big(&c).sub(log_h)),
        asymptotic: RealBound::from_log2(asym),
        count: c,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityLower {
    #[serde(serialize_with = "serde_big::biguint")]
    pub count: BigUint,
    /// `m* = ⌈log₂(1 + n/(k ln k))⌉`, the fewest factors a
    /// `k ln k`-factorization can have.
    pub m: usize,
    /// `|L| / (kⁿ · 2^{(2−k)(m*−1)})`, exact.
    #[serde(serialize_with = "serde_big::rational")]
    pub certificate: BigRational,
    pub vacuous: bool,
}

/// `⌈log₂(1 + n/(k ln k))⌉`. The argument is transcendental for `k ≥ 2`, so
/// it is never a power of two and a narrow enclosure decides the ceiling.
fn parity_m(n: usize, k: u32) -> Result<usize> {
    let kk = Interval::from_u64(k as u64);
    let x = Interval::exact(1.0).add(Interval::from_u64(n as u64).div(kk.mul(kk.ln())));
    let l = x.log2();
    let m = l.hi.ceil();
    if l.lo <= m - 1.0 {
        return Err(Error::Indeterminate(format!("ceiling of log2(1 + {n}/({k} ln {k}))")));
    }
    Ok(m.max(1.0) as usize)
}

/// The parity certificate. `|L| ≥ kⁿ 2^{1−k}` is checked first.
pub fn lb_parity(n: usize, k: u32) -> Result<ParityLower> {
    if n % 2 == 1 {
        return Err(Error::invalid(format!("n must be even, got {n}")));
    }
    if k < 2 {
        return Err(Error::invalid("k must be at least 2"));
    }
    let c = count(&FamilySpec::Parity { n, k }).value;
    let kn = BigUint::from(k).pow(n as u32);
    assert!(&c << (k - 1) >= kn, "count below kⁿ 2^(1−k)");
    let m = parity_m(n, k)?;
    let shift = (k as usize - 2) * (m - 1);
    let cert = BigRational::new(BigInt::from(c.clone()) << shift, BigInt::from(kn));
    Ok(ParityLower {
        count: c,
        m,
        vacuous: cert < BigRational::one(),
        certificate: cert,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PermLower {
    pub h: Interval,
    /// `n! / h(n)`.
    pub certificate: Interval,
    /// `4^{n−1} · n^{−(log₂ n)/4 − 3/4}`, the same quantity in closed form.
    pub closed_form: Interval,
}

pub fn lb_permutation(n: usize) -> Result<PermLower> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let h = h_perm(n);
    let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
    let nn = Interval::from_u64(n as u64);
    let l = nn.log2();
    let exponent = l.div(Interval::exact(4.0)).add(Interval::exact(0.75)).neg();
    let closed = Interval::exact(2.0 * (n as f64 - 1.0)).add(exponent.mul(l)).exp2();
    Ok(PermLower {
        certificate: Interval::from_big(&fact).div(h),
        closed_form: closed,
        h,
    })
}
