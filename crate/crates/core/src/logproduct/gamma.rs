use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::interval::Interval;
use crate::{Error, Result};

/// A real threshold `γ ≥ 1` with exact comparisons against integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gamma {
    Rational(BigRational),
    /// `log₂ p`.
    Log2(u64),
    /// `k ln k`, compared through interval enclosures. For `k ≥ 2` it is
    /// transcendental, so no comparison against a rational is a tie.
    KLnK(u32),
}

impl Gamma {
    pub fn integer(n: u64) -> Gamma {
        Gamma::Rational(BigRational::from_integer(n.into()))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Gamma::Rational(r) => *r >= BigRational::one(),
            Gamma::Log2(p) => *p >= 2,
            Gamma::KLnK(k) => *k >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("γ = {self} is below 1")))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Gamma::Rational(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Gamma::Log2(p) => (*p as f64).log2(),
            Gamma::KLnK(k) => *k as f64 * (*k as f64).ln(),
        }
    }

    /// Compares `c·γ` with `n`.
    pub fn cmp_multiple(&self, c: &BigUint, n: &BigUint) -> Result<Ordering> {
        let big_int = |x: &BigUint| BigRational::from_integer(x.clone().into());
        match self {
            Gamma::Rational(r) => Ok((big_int(c) * r).cmp(&big_int(n))),
            // γ ≥ 1, so c·γ > n whenever c > n.
            _ if c > n => Ok(Ordering::Greater),
            _ if *c == BigUint::ZERO => Ok(BigUint::ZERO.cmp(n)),
            Gamma::Log2(p) => {
                // c ≤ n here, so both exponents stay small.
                let (c, n) = (c.to_u32().expect("small"), n.to_u32().ok_or_else(too_large)?);
                Ok(BigUint::from(*p).pow(c).cmp(&(BigUint::one() << n)))
            }
            Gamma::KLnK(k) => {
                let kk = Interval::from_u64(*k as u64);
                let lhs = Interval::from_big(c).mul(kk).mul(kk.ln());
                lhs.partial_cmp_certain(&Interval::from_big(n))
                    .ok_or_else(|| Error::Indeterminate(format!("{c}·{self} against {n}")))
            }
        }
    }

    /// Compares `γ` with the integer `d`.
    pub fn cmp_int(&self, d: usize) -> Result<Ordering> {
        self.cmp_multiple(&BigUint::one(), &BigUint::from(d))
    }

    /// Whether `m ≥ log₂(1 + n/γ)`, i.e. `(2^m − 1)·γ ≥ n`.
    pub fn log_bound_holds(&self, m: usize, n: usize) -> Result<bool> {
        let c = (BigUint::one() << m) - BigUint::one();
        Ok(self.cmp_multiple(&c, &BigUint::from(n))?.is_ge())
    }
}

fn too_large() -> Error {
    Error::invalid("degree too large for comparison")
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Rational(r) => write!(f, "{r}"),
            Gamma::Log2(p) => write!(f, "log2({p})"),
            Gamma::KLnK(k) => write!(f, "klnk({k})"),
        }
    }
}

/// Accepts an integer, a fraction `a/b`, `log2(p)` or `klnk(k)`.
impl FromStr for Gamma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gamma> {
        let s = s.trim();
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .map(str::trim)
        };
        let bad = || Error::invalid(format!("cannot read γ from {s:?}"));
        let g = if let Some(p) = inner("log2") {
            Gamma::Log2(p.parse().map_err(|_| bad())?)
        } else if let Some(k) = inner("klnk") {
            Gamma::KLnK(k.parse().map_err(|_| bad())?)
        } else if let Some((a, b)) = s.split_once('/') {
            let a: BigUint = a.trim().parse().map_err(|_| bad())?;
            let b: BigUint = b.trim().parse().map_err(|_| bad())?;
            if b == BigUint::ZERO {
                return Err(bad());
            }
            Gamma::Rational(BigRational::new(a.into(), b.into()))
        } else {
            Gamma::Rational(BigRational::from_integer(
                s.parse::<BigUint>().map_err(|_| bad())?.into(),
            ))
        };
        g.validate()?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        let g = Gamma::Log2(5);
        assert_eq!(g.cmp_int(2).unwrap(), Ordering::Greater);
        assert_eq!(g.cmp_int(3).unwrap(), Ordering::Less);
        assert!(g.log_bound_holds(2, 6).unwrap());
        assert!(!g.log_bound_holds(1, 3).unwrap());
        assert_eq!(Gamma::Log2(8).cmp_int(3).unwrap(), Ordering::Equal);
        let k = Gamma::KLnK(3);
        assert_eq!(k.cmp_int(3).unwrap(), Ordering::Greater);
        assert_eq!(k.cmp_int(4).unwrap(), Ordering::Less);
        assert_eq!("3/2".parse::<Gamma>().unwrap().cmp_int(1).unwrap(), Ordering::Greater);
        assert_eq!(Gamma::integer(2).cmp_int(2).unwrap(), Ordering::Equal);
    }

    #[test]
    fn parsing() {
        assert_eq!("log2(5)".parse::<Gamma>().unwrap(), Gamma::Log2(5));
        assert_eq!("klnk( 3 )".parse::<Gamma>().unwrap(), Gamma::KLnK(3));
        assert!("1/2".parse::<Gamma>().is_err());
        assert!("log2(1)".parse::<Gamma>().is_err());
        assert!("x".parse::<Gamma>().is_err());
        assert_eq!(Gamma::Log2(5).to_string(), "log2(5)");
    }
}
