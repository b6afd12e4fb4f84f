//! Exhaustive search for the largest log-product sublanguage.
//!
//! A log-product `B ⊆ L` of degree `d ≥ 2` is `B₁·C` or `C·B₁` with `B₁`
//! log-product of degree `d₁ ≥ d − d₁ ≥ 1` and `C` an arbitrary
//! homogeneous expression, which may describe any set of words of its
//! length. Fixing the orientation and `d₁`, split every word of `L` into its
//! log-product part `x` and its other part `y`, and let `N(x)` be the set of
//! admissible `y`. For a feasible pair `(A, C)` the set `C' = ⋂_{x ∈ A} N(x)`
//! contains `C` and every `x ∈ A` satisfies `N(x) ⊇ C'`. So it suffices to
//! range over the closed sets `C'` (intersections of neighbourhoods) and
//! recurse on `{x : N(x) ⊇ C'}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::expr::{Expr, Language, Word};
use crate::{Error, Result};

/// Largest `|L(B)|` over log-product `B` with `L(B) ⊆ l`, with an
/// expression attaining it.
#[derive(Clone, Debug)]
pub struct MaxSublanguage {
    pub count: u64,
    /// `None` only for the empty language.
    pub witness: Option<Expr>,
}

/// Fails with a budget error when `|l|` or the number of search steps
/// exceeds `budget`.
pub fn max_logproduct_sublanguage(l: &Language, budget: usize) -> Result<MaxSublanguage> {
    if l.len() > budget {
        return Err(Error::budget("words", budget));
    }
    if l.is_empty() {
        return Ok(MaxSublanguage {
            count: 0,
            witness: None,
        });
    }
    if !l.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if l.degree() == Some(0) {
        return Err(Error::EpsilonInput);
    }
    let mut s = Search {
        memo: HashMap::new(),
        steps: 0,
        budget,
    };
    let words: Vec<Word> = l.iter().cloned().collect();
    let (count, witness) = s.best(&words)?;
    Ok(MaxSublanguage {
        count,
        witness: Some(witness),
    })
}

struct Search {
    memo: HashMap<Vec<Word>, (u64, Expr)>,
    steps: usize,
    budget: usize,
}

type Bits = Vec<u64>;

fn intersect(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn count(a: &Bits) -> u64 {
    a.iter().map(|x| x.count_ones() as u64).sum()
}

impl Search {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::budget("search steps", self.budget))
        } else {
            Ok(())
        }
    }

    /// `words` is sorted, non-empty and homogeneous of positive degree.
    fn best(&mut self, words: &[Word]) -> Result<(u64, Expr)> {
        if let Some(v) = self.memo.get(words) {
            return Ok(v.clone());
        }
        self.tick()?;
        let d = words[0].len();
        let mut best = (1, Expr::word(&words[0]));
        for d1 in d.div_ceil(2)..d {
            for lp_left in [true, false] {
                self.orientation(words, d1, lp_left, &mut best)?;
            }
        }
        self.memo.insert(words.to_vec(), best.clone());
        Ok(best)
    }

    fn orientation(&mut self, words: &[Word], d1: usize, lp_left: bool, best: &mut (u64, Expr)) -> Result<()> {
        let d = words[0].len();
        let split = |w: &Word| -> (Word, Word) {
            let cut = if lp_left { d1 } else { d - d1 };
            let (a, b) = w.split_at(cut);
            if lp_left {
                (a.to_vec(), b.to_vec())
            } else {
                (b.to_vec(), a.to_vec())
            }
        };
        let mut nbr: BTreeMap<Word, BTreeSet<Word>> = BTreeMap::new();
        for w in words {
            let (x, y) = split(w);
            nbr.entry(x).or_default().insert(y);
        }
        let others: Vec<Word> = nbr
            .values()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<&Word, usize> = others.iter().enumerate().map(|(i, y)| (y, i)).collect();
        let blocks = others.len().div_ceil(64);
        let xs: Vec<(&Word, Bits)> = nbr
            .iter()
            .map(|(x, ys)| {
                let mut b = vec![0u64; blocks];
                for y in ys {
                    let i = index[y];
                    b[i / 64] |= 1 << (i % 64);
                }
                (x, b)
            })
            .collect();
        // Closed sets: all non-empty intersections of neighbourhoods.
        let mut closed: BTreeSet<Bits> = BTreeSet::new();
        for (_, n) in &xs {
            let mut fresh = vec![n.clone()];
            for c in &closed {
                let i = intersect(c, n);
                if i.iter().any(|&v| v != 0) {
                    fresh.push(i);
                }
            }
            for f in fresh {
                if closed.insert(f) {
                    self.tick()?;
                }
            }
        }
        for c in &closed {
            let size = count(c);
            let a: Vec<Word> = xs
                .iter()
                .filter(|(_, n)| subset(c, n))
                .map(|(x, _)| (*x).clone())
                .collect();
            if (a.len() as u64) * size <= best.0 {
                continue;
            }
            let (ca, wa) = self.best(&a)?;
            if ca * size > best.0 {
                let other = Expr::union_all(
                    (0..others.len())
                        .filter(|&i| c[i / 64] >> (i % 64) & 1 == 1)
                        .map(|i| Expr::word(&others[i])),
                )
                .expect("closed sets are non-empty");
                let e = if lp_left {
                    Expr::concat(wa, other)
                } else {
                    Expr::concat(other, wa)
                };
                *best = (ca * size, e);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_log_product, perm_logproduct_max};
    use super::*;
    use crate::expr::{bits, EnumOptions};
    use crate::languages::{all_words, full_language, generate};
    use num_bigint::BigUint;

    fn check(l: &Language) -> u64 {
        let r = max_logproduct_sublanguage(l, 1 << 20).unwrap();
        let w = r.witness.unwrap();
        assert!(is_log_product(&w).unwrap().is_some());
        let lw = w.language(&EnumOptions::default()).unwrap();
        assert_eq!(lw.len() as u64, r.count);
        assert!(lw.iter().all(|x| l.contains(x)));
        r.count
    }

    /// Whether a set of words is the language of some log-product
    /// expression, straight from the definition.
    fn realizable(s: &BTreeSet<Word>) -> bool {
        let d = s.iter().next().map_or(0, Vec::len);
        if d == 1 {
            return s.len() == 1;
        }
        (d.div_ceil(2)..d).any(|d1| {
            [(d1, true), (d - d1, false)].into_iter().any(|(cut, lp_left)| {
                let a: BTreeSet<Word> = s.iter().map(|w| w[..cut].to_vec()).collect();
                let c: BTreeSet<Word> = s.iter().map(|w| w[cut..].to_vec()).collect();
                let lp = if lp_left { &a } else { &c };
                a.len() * c.len() == s.len() && realizable(lp)
            })
        })
    }

    fn brute_force(l: &Language) -> u64 {
        let words: Vec<&Word> = l.iter().collect();
        (1u64..1 << words.len())
            .map(|mask| {
                let s: BTreeSet<Word> = (0..words.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| words[i].clone())
                    .collect();
                s
            })
            .filter(realizable)
            .map(|s| s.len() as u64)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_languages() {
        let single: Language = [bits("0110")].into_iter().collect();
        assert_eq!(check(&single), 1);
        // The leaf at the end of the spine fixes one position.
        for n in 1..=4 {
            assert_eq!(check(&full_language(2, n)), 1 << (n - 1));
        }
        let pal = generate(&"palindrome:4".parse().unwrap()).unwrap();
        assert_eq!(check(&pal), brute_force(&pal));
    }

    #[test]
    fn every_binary_language_of_length_three() {
        let cube: Vec<Word> = all_words(2, 3).collect();
        for mask in 1u32..1 << cube.len() {
            let l: Language = (0..cube.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| cube[i].clone())
                .collect();
            assert_eq!(check(&l), brute_force(&l), "{l:?}");
        }
    }

    #[test]
    fn permutations() {
        for n in 1..=4 {
            let p = generate(&format!("perm:{n}").parse().unwrap()).unwrap();
            assert_eq!(BigUint::from(check(&p)), perm_logproduct_max(n).m);
        }
    }

    #[test]
    fn budget() {
        let l = full_language(2, 4);
        assert!(max_logproduct_sublanguage(&l, 3).unwrap_err().is_budget());
    }
}
