//! Exact minimum expression length by bottom-up search.
//!
//! Every subexpression `T` of an expression for `L` has a context: words
//! `x, y` with `x·L(T)·y ⊆ L`. The search therefore only keeps sets of
//! factors of `L` that share a context. Languages are generated by
//! increasing size, so the first time `L` appears its size is minimal.

use std::collections::{BTreeMap, HashMap};

use crate::expr::{Expr, Language, Word};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct MinRpn {
    pub rpn: u64,
    /// An expression of that length describing the language.
    pub witness: Expr,
    /// Distinct languages generated before the target was reached.
    pub explored: usize,
}

type Set = Vec<u64>;

#[derive(Clone)]
enum Origin {
    Atom(Expr),
    Union(usize, usize),
    Concat(usize, usize),
}

struct Universe {
    factors: Vec<Word>,
    /// `cat[a][b]`: index of `factors[a]·factors[b]` when it is a factor.
    cat: Vec<Vec<Option<usize>>>,
    /// Contexts of every factor, as a bit set over all `(x, y)` pairs.
    contexts: Vec<Set>,
}

fn bit(s: &Set, i: usize) -> bool {
    s[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(s: &mut Set, i: usize) {
    s[i / 64] |= 1 << (i % 64);
}

impl Universe {
    fn new(l: &Language) -> Universe {
        let mut index: BTreeMap<Word, usize> = BTreeMap::new();
        let mut ctx_index: BTreeMap<(Word, Word), usize> = BTreeMap::new();
        let mut occ: Vec<(usize, usize)> = Vec::new();
        for w in l.iter() {
            for i in 0..=w.len() {
                for j in i..=w.len() {
                    let n = index.len();
                    let f = *index.entry(w[i..j].to_vec()).or_insert(n);
                    let n = ctx_index.len();
                    let c = *ctx_index.entry((w[..i].to_vec(), w[j..].to_vec())).or_insert(n);
                    occ.push((f, c));
                }
            }
        }
        let mut factors = vec![Vec::new(); index.len()];
        for (w, &i) in &index {
            factors[i] = w.clone();
        }
        let blocks = ctx_index.len().div_ceil(64);
        let mut contexts = vec![vec![0; blocks]; factors.len()];
        for (f, c) in occ {
            set_bit(&mut contexts[f], c);
        }
        // A factor with context (x, y) is kept only if x·f·y ∈ L, which
        // holds by construction; contexts of a set are the intersection.
        let cat = factors
            .iter()
            .map(|a| {
                factors
                    .iter()
                    .map(|b| index.get(&[a.as_slice(), b.as_slice()].concat()).copied())
                    .collect()
            })
            .collect();
        Universe { factors, cat, contexts }
    }

    fn blocks(&self) -> usize {
        self.factors.len().div_ceil(64)
    }

    fn members<'a>(&self, s: &'a Set) -> impl Iterator<Item = usize> + 'a {
        let n = self.factors.len();
        (0..n).filter(move |&i| bit(s, i))
    }

    fn has_context(&self, s: &Set) -> bool {
        let mut acc: Option<Set> = None;
        for i in self.members(s) {
            acc = Some(match acc {
                None => self.contexts[i].clone(),
                Some(a) => a.iter().zip(&self.contexts[i]).map(|(x, y)| x & y).collect(),
            });
            if acc.as_ref().is_some_and(|a| a.iter().all(|&x| x == 0)) {
                return false;
            }
        }
        true
    }

    fn concat(&self, a: &Set, b: &Set) -> Option<Set> {
        let bs: Vec<usize> = self.members(b).collect();
        let mut out = vec![0; self.blocks()];
        for i in self.members(a) {
            for &j in &bs {
                set_bit(&mut out, self.cat[i][j]?);
            }
        }
        Some(out)
    }
}

/// Minimum rpn over star-free expressions for `l`. `cap` bounds the number
/// of distinct languages generated.
pub fn min_rpn_exact(l: &Language, cap: usize) -> Result<MinRpn> {
    if l.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let u = Universe::new(l);
    let mut target = vec![0; u.blocks()];
    for w in l.iter() {
        let i = u.factors.iter().position(|f| f == w).expect("words are factors");
        set_bit(&mut target, i);
    }
    let mut st = Store {
        sets: Vec::new(),
        origin: Vec::new(),
        seen: HashMap::new(),
        cap,
    };
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    let mut level1 = Vec::new();
    for (i, f) in u.factors.iter().enumerate() {
        if f.len() <= 1 {
            let mut s = vec![0; u.blocks()];
            set_bit(&mut s, i);
            let atom = if f.is_empty() {
                Expr::epsilon()
            } else {
                Expr::letter(f[0])
            };
            st.add(s, Origin::Atom(atom), &mut level1)?;
        }
    }
    levels[1] = level1;
    let found = |sets: &[Set], ids: &[usize]| ids.iter().copied().find(|&i| sets[i] == target);
    let mut hit = found(&st.sets, &levels[1]).map(|i| (1u64, i));
    let mut size: usize = 1;
    while hit.is_none() {
        size += 1;
        let mut level = Vec::new();
        for i in 1..size.saturating_sub(1) {
            let j = size - 1 - i;
            let (li, lj) = (levels[i].clone(), levels[j].clone());
            for &a in &li {
                for &b in &lj {
                    if i <= j && (i < j || a < b) {
                        let s: Set = st.sets[a].iter().zip(&st.sets[b]).map(|(x, y)| x | y).collect();
                        if u.has_context(&s) {
                            st.add(s, Origin::Union(a, b), &mut level)?;
                        }
                    }
                    if let Some(s) = u.concat(&st.sets[a], &st.sets[b]) {
                        if u.has_context(&s) {
                            st.add(s, Origin::Concat(a, b), &mut level)?;
                        }
                    }
                }
            }
        }
        hit = found(&st.sets, &level).map(|i| (size as u64, i));
        levels.push(level);
    }
    let (rpn, id) = hit.expect("loop exits on a hit");
    let witness = rebuild(&st.origin, id);
    debug_assert_eq!(witness.rpn(), rpn);
    Ok(MinRpn {
        rpn,
        witness,
        explored: st.sets.len(),
    })
}

struct Store {
    sets: Vec<Set>,
    origin: Vec<Origin>,
    seen: HashMap<Set, usize>,
    cap: usize,
}

impl Store {
    fn add(&mut self, s: Set, o: Origin, level: &mut Vec<usize>) -> Result<()> {
        if self.seen.contains_key(&s) {
            return Ok(());
        }
        if self.sets.len() >= self.cap {
            return Err(Error::budget("languages", self.cap));
        }
        self.seen.insert(s.clone(), self.sets.len());
        level.push(self.sets.len());
        self.sets.push(s);
        self.origin.push(o);
        Ok(())
    }
}

fn rebuild(origin: &[Origin], id: usize) -> Expr {
    match &origin[id] {
        Origin::Atom(e) => e.clone(),
        Origin::Union(a, b) => Expr::union(rebuild(origin, *a), rebuild(origin, *b)),
        Origin::Concat(a, b) => Expr::concat(rebuild(origin, *a), rebuild(origin, *b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{word, EnumOptions, Letter};

    fn lang(ws: &[&[u32]]) -> Language {
        ws.iter().map(|w| word(w)).collect()
    }

    fn check(l: &Language) -> u64 {
        let m = min_rpn_exact(l, 1 << 20).unwrap();
        assert_eq!(&m.witness.language(&EnumOptions::default()).unwrap(), l);
        assert_eq!(m.witness.rpn(), m.rpn);
        m.rpn
    }

    #[test]
    fn known_minima() {
        assert_eq!(check(&lang(&[&[1]])), 1);
        assert_eq!(check(&lang(&[&[1, 2], &[2, 1]])), 7);
        assert_eq!(check(&lang(&[&[1, 1], &[1, 2], &[2, 1], &[2, 2]])), 7);
        assert_eq!(check(&lang(&[&[1, 2, 3]])), 5);
        assert_eq!(check(&lang(&[&[], &[1]])), 3);
        assert!(min_rpn_exact(&Language::new(2), 10).is_err());
    }

    /// No expression of size below the reported minimum exists: checked by
    /// enumerating every star-free expression of size at most 7 over {a, b}.
    #[test]
    fn agrees_with_enumeration() {
        let a = Expr::letter(Letter::new(1));
        let b = Expr::letter(Letter::new(2));
        let mut by_size: Vec<Vec<Expr>> = vec![Vec::new(), vec![a, b, Expr::epsilon()]];
        for s in 2..=7 {
            let mut v = Vec::new();
            for i in 1..s - 1 {
                let j = s - 1 - i;
                for x in &by_size[i] {
                    for y in &by_size[j] {
                        v.push(Expr::union(x.clone(), y.clone()));
                        v.push(Expr::concat(x.clone(), y.clone()));
                    }
                }
            }
            by_size.push(v);
        }
        let mut best: BTreeMap<Vec<Word>, (Language, u64)> = BTreeMap::new();
        for (s, es) in by_size.iter().enumerate() {
            for e in es {
                let l = e.language(&EnumOptions::default()).unwrap();
                best.entry(l.iter().cloned().collect()).or_insert((l, s as u64));
            }
        }
        let mut checked = 0;
        for (l, s) in best.values() {
            let s = *s;
            if s <= 7 {
                assert_eq!(check(l), s, "{l:?}");
                checked += 1;
            }
        }
        assert!(checked > 100, "{checked}");
    }
}
