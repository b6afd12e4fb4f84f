use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::interval::Interval;
use crate::serde_big;

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// `h(n) = n! · 4^{1−n} · n^{(3 + log₂ n)/4}`, enclosed.
pub fn h_perm(n: usize) -> Interval {
    assert!(n >= 1, "h is defined for n ≥ 1");
    let l = Interval::from_u64(n as u64).log2();
    let e = Interval::exact(3.0).add(l).mul(l).div(Interval::exact(4.0));
    Interval::from_big(&factorial(n))
        .mul(Interval::exact(2.0 * (1.0 - n as f64)).exp2())
        .mul(e.exp2())
}

/// `h(n)` exactly, when `n = 2^j` makes the exponent an integer.
fn h_perm_exact(n: usize) -> Option<BigRational> {
    if !n.is_power_of_two() {
        return None;
    }
    let j = n.trailing_zeros() as i64;
    if j * (j + 3) % 4 != 0 {
        return None;
    }
    let e = j * (j + 3) / 4 + 2 * (1 - n as i64);
    let pow = |k: i64| BigInt::one() << k.unsigned_abs();
    let f = BigInt::from(factorial(n));
    Some(if e >= 0 {
        BigRational::from_integer(f * pow(e))
    } else {
        BigRational::new(f, pow(e))
    })
}

/// The counting recursion for log-product subsets of the permutation
/// language at one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct PermMax {
    pub n: usize,
    /// `M(1) = 1`, `M(n) = max_{⌈n/2⌉ ≤ k ≤ n−1} (n−k)! · M(k)`.
    #[serde(serialize_with = "serde_big::biguint")]
    pub m: BigUint,
    /// The maximising `k` (the smallest on ties); `None` for `n = 1`.
    pub best_k: Option<usize>,
    /// `max_k (n−k)! · h(k)` over the same range.
    pub table_value: Option<Interval>,
    pub h: Interval,
    /// `M(n) ≤ h(n)`, when the enclosure decides it.
    pub m_le_h: Option<bool>,
}

/// `M(n)` together with the comparison values involving `h`.
pub fn perm_logproduct_max(n: usize) -> PermMax {
    assert!(n >= 1, "M is defined for n ≥ 1");
    let mut ms = vec![BigUint::ZERO, BigUint::one()];
    let mut best = None;
    for j in 2..=n {
        let (k, v) = (j.div_ceil(2)..j)
            .map(|k| (k, factorial(j - k) * &ms[k]))
            .fold(None::<(usize, BigUint)>, |acc, (k, v)| match acc {
                Some((_, ref b)) if *b >= v => acc,
                _ => Some((k, v)),
            })
            .expect("non-empty range");
        ms.push(v);
        best = Some(k);
    }
    let table_value = (n >= 2).then(|| {
        (n.div_ceil(2)..n)
            .map(|k| Interval::from_big(&factorial(n - k)).mul(h_perm(k)))
            .reduce(|a, b| Interval::new(a.lo.max(b.lo), a.hi.max(b.hi)))
            .expect("non-empty range")
    });
    let h = h_perm(n);
    let m = ms.swap_remove(n);
    PermMax {
        n,
        m_le_h: Interval::from_big(&m)
            .certainly_le(&h)
            .or_else(|| h_perm_exact(n).map(|exact| BigRational::from_integer(BigInt::from(m.clone())) <= exact)),
        m,
        best_k: best,
        table_value,
        h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_places(i: &Interval) -> String {
        // Truncation, matching values printed as "2.64…".
        let t = (i.lo * 100.0 + 1e-9).floor() / 100.0;
        format!("{t:.2}")
    }

    #[test]
    fn table_rows() {
        let row1: Vec<String> = (2..=7)
            .map(|n| two_places(&perm_logproduct_max(n).table_value.unwrap()))
            .collect();
        assert_eq!(row1, ["1.00", "1.00", "2.00", "2.64", "7.92", "12.72"]);
        let direct =
            |n: f64| (1..=n as u64).product::<u64>() as f64 * 4f64.powf(1.0 - n) * n.powf((3.0 + n.log2()) / 4.0);
        for n in 2..=7 {
            assert!(h_perm(n).contains(direct(n as f64)));
        }
        let row2: Vec<String> = (2..=7).map(|n| two_places(&h_perm(n))).collect();
        // h(5) = 120/256 · 5^{(3 + log₂ 5)/4} = 3.989…
        assert_eq!(row2, ["1.00", "1.32", "2.12", "3.98", "8.58", "20.74"]);
    }

    #[test]
    fn exact_values() {
        assert_eq!(h_perm_exact(1), Some(BigRational::one()));
        assert_eq!(h_perm_exact(2), Some(BigRational::one()));
        assert_eq!(h_perm_exact(3), None);
    }

    #[test]
    fn recursion() {
        let m: Vec<u64> = (1..=6).map(|n| perm_logproduct_max(n).m.try_into().unwrap()).collect();
        assert_eq!(m, [1, 1, 1, 2, 2, 6]);
        for n in 1..=40 {
            assert_eq!(perm_logproduct_max(n).m_le_h, Some(true), "n = {n}");
        }
    }
}
