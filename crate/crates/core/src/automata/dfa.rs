use std::collections::BTreeSet;

use crate::expr::{Alphabet, Letter};
use crate::languages::FamilySpec;
use crate::{Error, Result};

/// A deterministic, possibly partial, finite automaton over `[k]`.
///
/// Missing transitions reject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfaSpec {
    alphabet: Alphabet,
    initial: usize,
    finals: BTreeSet<usize>,
    /// `delta[q][a - 1]`.
    delta: Vec<Vec<Option<usize>>>,
}

impl DfaSpec {
    /// Builds a DFA from a list of `(source, letter, target)` transitions.
    /// A repeated `(source, letter)` with a different target is rejected.
    pub fn new(
        states: usize,
        alphabet: Alphabet,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, Letter, usize)>,
    ) -> Result<DfaSpec> {
        let k = alphabet.size() as usize;
        let in_range = |q: usize, what: &str| {
            if q < states {
                Ok(q)
            } else {
                Err(Error::invalid(format!("{what} state {q} outside 0..{states}")))
            }
        };
        let initial = in_range(initial, "initial")?;
        let finals = finals
            .into_iter()
            .map(|q| in_range(q, "final"))
            .collect::<Result<BTreeSet<_>>>()?;
        let mut delta = vec![vec![None; k]; states];
        for (q, a, r) in transitions {
            in_range(q, "source")?;
            in_range(r, "target")?;
            if !alphabet.contains(a) {
                return Err(Error::invalid(format!("letter {} outside the alphabet", a.id())));
            }
            let slot = &mut delta[q][a.id() as usize - 1];
            match *slot {
                Some(old) if old != r => {
                    return Err(Error::invalid(format!(
                        "nondeterministic transitions from state {q} on letter {}",
                        a.id()
                    )))
                }
                _ => *slot = Some(r),
            }
        }
        Ok(DfaSpec {
            alphabet,
            initial,
            finals,
            delta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    /// State count after completing the automaton with a trap state, when
    /// it is partial.
    pub fn state_count_with_trap(&self) -> usize {
        self.state_count() + usize::from(!self.is_total())
    }

    pub fn is_total(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    pub fn step(&self, q: usize, a: Letter) -> Option<usize> {
        self.delta.get(q)?.get(a.id() as usize - 1).copied().flatten()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, r)| r.map(|r| (q, Letter::new(a as u32 + 1), r)))
        })
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        let mut q = self.initial;
        for &a in w {
            match self.step(q, a) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.is_final(q)
    }
}

fn bit(a: Letter) -> usize {
    (a.id() - 1) as usize
}

/// The standard automaton of a family.
///
/// * divisibility: states `0..p`, `δ(q, a) = (2q + a) mod p`;
/// * parity: the hypercube `{0,1}^k`, letter `j` flips bit `j`;
/// * permutation: subsets of `[n]`, `δ(q, a) = q ∪ {a}` for `a ∉ q`;
/// * binomial and threshold: a counter of ones up to `k`;
/// * Dyck: a height counter bounded by `n` for words of length `2n`;
/// * XOR: a parity bit.
pub fn build_family_dfa(spec: &FamilySpec) -> Result<DfaSpec> {
    spec.validate()?;
    let bin = Alphabet::binary();
    let letters = |k: u32| (1..=k).map(Letter::new).collect::<Vec<_>>();
    match *spec {
        FamilySpec::Divisibility { p, .. } => {
            let p = usize::try_from(p).map_err(|_| Error::invalid("p too large"))?;
            let t = (0..p).flat_map(|q| letters(2).into_iter().map(move |a| (q, a, (2 * q + bit(a)) % p)));
            DfaSpec::new(p, bin, 0, [0], t)
        }
        FamilySpec::Parity { k, .. } => {
            if k > 20 {
                return Err(Error::invalid("parity automaton limited to k ≤ 20"));
            }
            let s = 1usize << k;
            let t = (0..s).flat_map(|q| letters(k).into_iter().map(move |a| (q, a, q ^ (1 << bit(a)))));
            DfaSpec::new(s, Alphabet::numbered(k), 0, [0], t)
        }
        FamilySpec::Permutation { n } => {
            if n > 20 {
                return Err(Error::invalid("permutation automaton limited to n ≤ 20"));
            }
            let s = 1usize << n;
            let t = (0..s).flat_map(|q| {
                letters(n as u32)
                    .into_iter()
                    .filter(move |&a| q >> bit(a) & 1 == 0)
                    .map(move |a| (q, a, q | 1 << bit(a)))
            });
            DfaSpec::new(s, Alphabet::numbered(n as u32), 0, [s - 1], t)
        }
        FamilySpec::Binomial { k, .. } | FamilySpec::Threshold { k, .. } => {
            let threshold = matches!(spec, FamilySpec::Threshold { .. });
            let mut t = Vec::new();
            for q in 0..=k {
                t.push((q, Letter::new(1), q));
                if q < k {
                    t.push((q, Letter::new(2), q + 1));
                } else if threshold {
                    t.push((q, Letter::new(2), q));
                }
            }
            DfaSpec::new(k + 1, bin, 0, [k], t)
        }
        FamilySpec::Dyck { two_n } => {
            let h = two_n / 2;
            let mut t = Vec::new();
            for q in 0..=h {
                if q < h {
                    t.push((q, Letter::new(1), q + 1));
                }
                if q > 0 {
                    t.push((q, Letter::new(2), q - 1));
                }
            }
            DfaSpec::new(h + 1, bin, 0, [0], t)
        }
        FamilySpec::Xor { .. } => {
            let t = (0..2).flat_map(|q| letters(2).into_iter().map(move |a| (q, a, q ^ bit(a))));
            DfaSpec::new(2, bin, 0, [0], t)
        }
        FamilySpec::Palindrome { .. } => Err(Error::UnsupportedFamily(spec.to_string())),
    }
}
