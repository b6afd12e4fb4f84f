use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::expr::{Expr, ONE, ZERO};
use crate::{Error, Result};

/// The recursive divisibility expression and its shape.
#[derive(Clone, Debug)]
pub struct DivUpper {
    pub expr: Expr,
    pub stats: DivUpperStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivUpperStats {
    pub rpn: u64,
    /// Number of halvings before the base case.
    pub depth: usize,
    /// Most sub-expressions combined by one union, `2` per `(r₁, r₂)` pair.
    pub max_branches: usize,
    /// `depth ≤ ⌈log₂(n / log₂ p)⌉` and `max_branches ≤ 2p`.
    pub shape_holds: bool,
}

/// `R^{d,r} = Σ R^{d/2,r₁} · R^{d/2,r₂}` over `r₁ 2^{d/2} + r₂ ≡ r (mod p)`,
/// down to `2^d < p`, where the class holds at most the single word
/// `bin(r)`; absent classes are dropped.
pub fn ub_divisibility_expr(n: usize, p: u64) -> Result<DivUpper> {
    super::check_div(n, p)?;
    if !n.is_power_of_two() {
        return Err(Error::invalid(format!("n must be a power of two, got {n}")));
    }
    let mut b = Builder {
        p,
        memo: HashMap::new(),
        max_branches: 0,
    };
    let expr = b.build(n, 0).expect("0ⁿ is always divisible");
    let mut depth = 0;
    let mut d = n;
    while !base(d, p) {
        d /= 2;
        depth += 1;
    }
    // depth ≤ ⌈x⌉ ⟺ depth − 1 < x = log₂(n / log₂ p) ⟺ p^{2^{depth−1}} < 2ⁿ.
    let depth_ok = depth == 0 || BigUint::from(p).pow(1 << (depth - 1)) < BigUint::one() << n;
    Ok(DivUpper {
        stats: DivUpperStats {
            rpn: expr.rpn(),
            depth,
            max_branches: b.max_branches,
            shape_holds: depth_ok && b.max_branches as u64 <= 2 * p,
        },
        expr,
    })
}

fn base(d: usize, p: u64) -> bool {
    d < 64 && (1u64 << d) < p
}

struct Builder {
    p: u64,
    memo: HashMap<(usize, u64), Option<Expr>>,
    max_branches: usize,
}

impl Builder {
    fn build(&mut self, d: usize, r: u64) -> Option<Expr> {
        if let Some(e) = self.memo.get(&(d, r)) {
            return e.clone();
        }
        let e = if base(d, self.p) {
            (r < 1 << d).then(|| {
                let bits: Vec<_> = (0..d).rev().map(|i| if r >> i & 1 == 1 { ONE } else { ZERO }).collect();
                Expr::word(&bits)
            })
        } else {
            let h = d / 2;
            let shift = pow_mod(2, h as u64, self.p);
            let mut terms = Vec::new();
            for r1 in 0..self.p {
                let r2 = (r + self.p - r1 * shift % self.p) % self.p;
                let (Some(a), Some(b)) = (self.build(h, r1), self.build(h, r2)) else {
                    continue;
                };
                terms.push(Expr::concat(a, b));
            }
            self.max_branches = self.max_branches.max(2 * terms.len());
            Expr::union_all(terms)
        };
        self.memo.insert((d, r), e.clone());
        e
    }
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}
