//! Fooling sets: pairs `(uᵢ, vᵢ)` with `uᵢvᵢ ∈ L` such that for `i ≠ j`
//! one of `uᵢvⱼ`, `uⱼvᵢ` lies outside `L`. Their size bounds the number of
//! NFA states from below. The maximum is found as a maximum clique of the
//! "fools each other" graph.

use serde::Serialize;

use crate::expr::{Language, Word};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct FoolingSet {
    pub size: usize,
    #[serde(skip)]
    pub pairs: Vec<(Word, Word)>,
    /// The common length of the `uᵢ` for single-cut sets.
    pub cut: Option<usize>,
}

/// Largest fooling set whose pairs all split their words at one common
/// position, maximised over that position.
pub fn max_fooling_set(l: &Language, budget: usize) -> Result<FoolingSet> {
    let n = l.max_len().unwrap_or(0);
    let mut best = FoolingSet {
        size: 0,
        pairs: Vec::new(),
        cut: None,
    };
    let mut spent = 0;
    for cut in 0..=n {
        let pairs: Vec<(Word, Word)> = l
            .iter()
            .filter(|w| w.len() >= cut)
            .map(|w| (w[..cut].to_vec(), w[cut..].to_vec()))
            .collect();
        let (clique, steps) = max_clique_of(l, &pairs, budget.saturating_sub(spent))?;
        spent += steps;
        if clique.len() > best.size {
            best = FoolingSet {
                size: clique.len(),
                pairs: clique,
                cut: Some(cut),
            };
        }
    }
    Ok(best)
}

/// Largest fooling set with arbitrary split positions. Pairs with prefixes
/// of different lengths fool each other whenever the language is
/// homogeneous, so this can exceed the single-cut maximum.
pub fn max_fooling_set_general(l: &Language, budget: usize) -> Result<FoolingSet> {
    let pairs: Vec<(Word, Word)> = l
        .iter()
        .flat_map(|w| (0..=w.len()).map(move |c| (w[..c].to_vec(), w[c..].to_vec())))
        .collect();
    let (clique, _) = max_clique_of(l, &pairs, budget)?;
    Ok(FoolingSet {
        size: clique.len(),
        pairs: clique,
        cut: None,
    })
}

fn max_clique_of(l: &Language, pairs: &[(Word, Word)], budget: usize) -> Result<(Vec<(Word, Word)>, usize)> {
    let m = pairs.len();
    if m > budget {
        return Err(Error::budget("candidate pairs", budget));
    }
    let joined = |u: &Word, v: &Word| -> bool {
        let mut w = u.clone();
        w.extend_from_slice(v);
        l.contains(&w)
    };
    let mut adj = vec![Bits::new(m); m];
    for i in 0..m {
        for j in i + 1..m {
            let (ui, vi) = &pairs[i];
            let (uj, vj) = &pairs[j];
            if !joined(ui, vj) || !joined(uj, vi) {
                adj[i].set(j);
                adj[j].set(i);
            }
        }
    }
    let mut bk = BronKerbosch {
        adj: &adj,
        best: Vec::new(),
        steps: 0,
        budget,
    };
    let mut all = Bits::new(m);
    (0..m).for_each(|i| all.set(i));
    bk.run(&mut Vec::new(), all, Bits::new(m))?;
    let steps = bk.steps;
    Ok((bk.best.iter().map(|&i| pairs[i].clone()).collect(), steps))
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|x| x.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(b, &x)| (0..64).filter(move |i| x >> i & 1 == 1).map(move |i| b * 64 + i))
    }
}

struct BronKerbosch<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    steps: usize,
    budget: usize,
}

impl BronKerbosch<'_> {
    /// Maximum clique extending `r` inside candidates `p`, excluded `x`.
    fn run(&mut self, r: &mut Vec<usize>, mut p: Bits, mut x: Bits) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::budget("clique search steps", self.budget));
        }
        if p.is_empty() {
            if x.is_empty() && r.len() > self.best.len() {
                self.best = r.clone();
            }
            return Ok(());
        }
        if r.len() + p.count() <= self.best.len() {
            return Ok(());
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.and(&self.adj[u]).count())
            .expect("p is non-empty");
        let branch: Vec<usize> = p.and_not(&self.adj[pivot]).ones().collect();
        for v in branch {
            r.push(v);
            self.run(r, p.and(&self.adj[v]), x.and(&self.adj[v]))?;
            r.pop();
            p.clear(v);
            x.set(v);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::bits;
    use crate::languages::{full_language, generate};

    fn is_fooling(l: &Language, f: &FoolingSet) -> bool {
        let cat = |u: &Word, v: &Word| [u.as_slice(), v.as_slice()].concat();
        f.pairs.iter().all(|(u, v)| l.contains(&cat(u, v)))
            && f.pairs.iter().enumerate().all(|(i, (ui, vi))| {
                f.pairs[i + 1..]
                    .iter()
                    .all(|(uj, vj)| !l.contains(&cat(ui, vj)) || !l.contains(&cat(uj, vi)))
            })
    }

    #[test]
    fn palindromes() {
        for n in 1..=4 {
            let l = generate(&format!("palindrome:{}", 2 * n).parse().unwrap()).unwrap();
            let f = max_fooling_set(&l, 1 << 20).unwrap();
            assert_eq!(f.size, 1 << n);
            assert_eq!(f.cut, Some(n));
            assert!(is_fooling(&l, &f));
        }
    }

    #[test]
    fn small_languages() {
        let single: Language = [bits("0110")].into_iter().collect();
        assert_eq!(max_fooling_set(&single, 100).unwrap().size, 1);
        assert_eq!(max_fooling_set_general(&single, 100).unwrap().size, 5);
        let full = full_language(2, 2);
        let f = max_fooling_set(&full, 1000).unwrap();
        assert_eq!(f.size, 1);
        let g = max_fooling_set_general(&full, 10_000).unwrap();
        assert!(is_fooling(&full, &g));
        assert_eq!(g.size, 3);
        let pal = generate(&"palindrome:4".parse().unwrap()).unwrap();
        assert_eq!(max_fooling_set_general(&pal, 1 << 20).unwrap().size, 10);
    }

    #[test]
    fn budget() {
        let l = generate(&"palindrome:8".parse().unwrap()).unwrap();
        assert!(max_fooling_set(&l, 5).unwrap_err().is_budget());
    }
}
