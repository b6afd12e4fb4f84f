//! Seeded generators of random homogeneous star-free expressions, for
//! property tests and the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Expr, Letter};

#[derive(Clone, Debug)]
pub struct RandomOptions {
    pub alphabet_size: u32,
    /// Rough bound on the number of leaves.
    pub max_leaves: usize,
    /// Allow `ε` operands inside concatenations.
    pub epsilon: bool,
    pub union_prob: f64,
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions {
            alphabet_size: 2,
            max_leaves: 24,
            epsilon: false,
            union_prob: 0.4,
        }
    }
}

/// Deterministic source of random expressions.
pub struct ExprSampler {
    rng: ChaCha8Rng,
    pub opts: RandomOptions,
}

impl ExprSampler {
    pub fn new(seed: u64, opts: RandomOptions) -> ExprSampler {
        ExprSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            opts,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn letter(&mut self) -> Expr {
        Expr::letter(Letter::new(self.rng.random_range(1..=self.opts.alphabet_size)))
    }

    fn word(&mut self, d: usize) -> Expr {
        Expr::concat_all((0..d).map(|_| self.letter()).collect::<Vec<_>>())
    }

    /// A homogeneous expression of degree exactly `d`.
    pub fn homogeneous(&mut self, d: usize) -> Expr {
        let leaves = self.opts.max_leaves.max(d);
        self.gen(d, leaves)
    }

    /// A homogeneous expression whose degree is uniform in `1..=max_degree`.
    pub fn homogeneous_up_to(&mut self, max_degree: usize) -> Expr {
        let d = self.rng.random_range(1..=max_degree.max(1));
        self.homogeneous(d)
    }

    fn gen(&mut self, d: usize, leaves: usize) -> Expr {
        if d == 0 {
            return Expr::epsilon();
        }
        if leaves <= d {
            return self.word(d);
        }
        if d == 1 && self.rng.random_bool(0.5) {
            return self.letter();
        }
        if leaves >= 2 * d && self.rng.random_bool(self.opts.union_prob) {
            let left = self.rng.random_range(d..=leaves - d);
            let a = self.gen(d, left);
            let b = self.gen(d, leaves - left);
            return Expr::union(a, b);
        }
        let lo = if self.opts.epsilon { 0 } else { 1 };
        if d < 2 && lo == 1 {
            return self.letter();
        }
        let d1 = self.rng.random_range(lo..=d - lo);
        let l1 = (leaves * d1.max(1) / d).clamp(d1.max(1), leaves - (d - d1).max(1));
        let a = self.gen(d1, l1);
        let b = self.gen(d - d1, leaves - l1);
        Expr::concat(a, b)
    }

    /// A random log-product expression of degree `d ≥ 1`: the child on the
    /// spine has degree at least that of its sibling.
    pub fn log_product(&mut self, d: usize) -> Expr {
        assert!(d >= 1, "log-product expressions have positive degree");
        if d == 1 {
            return self.letter();
        }
        let small = self.rng.random_range(1..=d / 2);
        let sibling_leaves = (self.opts.max_leaves / 2).max(small);
        let sibling = self.gen(small, sibling_leaves);
        let spine = self.log_product(d - small);
        if self.rng.random_bool(0.5) {
            Expr::concat(spine, sibling)
        } else {
            Expr::concat(sibling, spine)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Alphabet, EnumOptions};
    use crate::logproduct::is_log_product;

    #[test]
    fn degrees_and_determinism() {
        let mut s = ExprSampler::new(7, RandomOptions::default());
        let mut t = ExprSampler::new(7, RandomOptions::default());
        for d in 1..=8 {
            let e = s.homogeneous(d);
            assert_eq!(e.degree(), Some(d));
            assert!(e.is_star_free());
            assert_eq!(
                e.to_flat(&Alphabet::binary()),
                t.homogeneous(d).to_flat(&Alphabet::binary())
            );
        }
        let mut eps = ExprSampler::new(
            1,
            RandomOptions {
                epsilon: true,
                ..Default::default()
            },
        );
        for _ in 0..50 {
            let e = eps.homogeneous_up_to(6);
            let l = e.language(&EnumOptions::default()).unwrap();
            assert_eq!(l.degree(), e.degree());
        }
    }

    #[test]
    fn log_products() {
        let mut s = ExprSampler::new(3, RandomOptions::default());
        for d in 1..=10 {
            let e = s.log_product(d);
            assert_eq!(e.degree(), Some(d));
            assert!(is_log_product(&e).unwrap().is_some());
        }
    }
}
