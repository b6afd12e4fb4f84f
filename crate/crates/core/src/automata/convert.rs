use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::LayeredNfa;
use crate::expr::Expr;

/// Size measurements of one conversion run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConversionStats {
    pub width: usize,
    pub length: usize,
    pub alphabet_size: u32,
    pub final_states: usize,
    /// Node count of the expanded syntax tree.
    pub rpn: u64,
    /// Distinct nodes of the shared representation.
    pub shared_size: usize,
    pub leaves: u64,
    /// `T(d)`: the largest leaf count of any `x → y` expression over `d` steps.
    pub leaves_by_distance: BTreeMap<usize, u64>,
    /// Whether `T(1) ≤ k` and `T(d) ≤ ω (T(⌊d/2⌋) + T(⌈d/2⌉))` held.
    pub recurrence_holds: bool,
    pub memo_entries: usize,
}

/// Expression for the language of a layered automaton.
pub fn to_expression(a: &LayeredNfa) -> Expr {
    to_expression_with_stats(a).0
}

/// [`to_expression`] together with instrumentation of the recursion.
pub fn to_expression_with_stats(a: &LayeredNfa) -> (Expr, ConversionStats) {
    let mut conv = Converter {
        a,
        memo: HashMap::new(),
        t: BTreeMap::new(),
    };
    let finals = a.finals();
    let parts = finals.iter().filter_map(|&(j, q)| {
        if j == 0 {
            Some(Expr::epsilon())
        } else {
            conv.paths(0, a.initial(), j, q)
        }
    });
    let parts: Vec<Expr> = parts.collect();
    let expr = Expr::union_all(parts).expect("a trimmed automaton accepts some word");
    let k = a.alphabet().size() as u64;
    let w = a.width() as u64;
    let t = |d: usize| conv.t.get(&d).copied().unwrap_or(0);
    let recurrence_holds = conv.t.iter().all(|(&d, &v)| {
        if d == 1 {
            v <= k
        } else {
            v <= w.saturating_mul(t(d / 2).saturating_add(t(d.div_ceil(2))))
        }
    });
    let stats = ConversionStats {
        width: a.width(),
        length: a.length(),
        alphabet_size: a.alphabet().size(),
        final_states: finals.len(),
        rpn: expr.rpn(),
        shared_size: expr.shared_size(),
        leaves: expr.leaves(),
        leaves_by_distance: conv.t.clone(),
        recurrence_holds,
        memo_entries: conv.memo.len(),
    };
    (expr, stats)
}

struct Converter<'a> {
    a: &'a LayeredNfa,
    memo: HashMap<(usize, usize, usize, usize), Option<Expr>>,
    t: BTreeMap<usize, u64>,
}

impl Converter<'_> {
    /// Words of length `d` leading from `x` in layer `l` to `y` in layer
    /// `l + d`, or `None` when there are none.
    fn paths(&mut self, l: usize, x: usize, d: usize, y: usize) -> Option<Expr> {
        let key = (l, x, d, y);
        if let Some(e) = self.memo.get(&key) {
            return e.clone();
        }
        let e = if d == 1 {
            Expr::union_all(
                self.a
                    .row(l, x)
                    .iter()
                    .filter(|&&(_, t)| t == y)
                    .map(|&(c, _)| Expr::letter(c)),
            )
        } else {
            let h = d / 2;
            let mid = l + h;
            let mut terms = Vec::new();
            for q in 0..self.a.layer_size(mid) {
                let Some(left) = self.paths(l, x, h, q) else { continue };
                let Some(right) = self.paths(mid, q, d - h, y) else {
                    continue;
                };
                terms.push(Expr::concat(left, right));
            }
            Expr::union_all(terms)
        };
        if let Some(e) = &e {
            let slot = self.t.entry(d).or_insert(0);
            *slot = (*slot).max(e.leaves());
        }
        self.memo.insert(key, e.clone());
        e
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_family_dfa, nfa_language, slice, LayeredBuilder};
    use super::*;
    use crate::expr::{bits, Alphabet, EnumOptions, Language, Letter};
    use crate::languages::generate;

    fn convert(s: &str, n: usize) -> (Expr, ConversionStats) {
        let a = slice(&build_family_dfa(&s.parse().unwrap()).unwrap(), n).unwrap();
        to_expression_with_stats(&a)
    }

    #[test]
    fn divisibility() {
        let (e, stats) = convert("div:4,3", 4);
        assert_eq!(
            e.language(&EnumOptions::default()).unwrap(),
            generate(&"div:4,3".parse().unwrap()).unwrap()
        );
        assert!(stats.recurrence_holds);
        assert!(stats.shared_size as u64 <= stats.rpn);
    }

    #[test]
    fn chain() {
        let w = bits("0101");
        let b = LayeredBuilder {
            layer_sizes: vec![1; 5],
            initial: 0,
            finals: vec![(4, 0)],
            edges: w.iter().enumerate().map(|(j, &a)| (j, 0, a, 0)).collect(),
        };
        let e = to_expression(&b.build(Alphabet::binary()).unwrap());
        assert_eq!(e.to_flat(&Alphabet::binary()), "0101");
    }

    #[test]
    fn binomial_one() {
        let (e, _) = convert("binomial:2,1", 2);
        let expected: Language = [bits("01"), bits("10")].into_iter().collect();
        assert_eq!(e.language(&EnumOptions::default()).unwrap(), expected);
    }

    #[test]
    fn finals_in_several_layers() {
        let (z, o) = (Letter::new(1), Letter::new(2));
        let b = LayeredBuilder {
            layer_sizes: vec![1, 1, 1],
            initial: 0,
            finals: vec![(0, 0), (1, 0), (2, 0)],
            edges: vec![(0, 0, z, 0), (1, 0, o, 0)],
        };
        let a = b.build(Alphabet::binary()).unwrap();
        let e = to_expression(&a);
        assert_eq!(e.language(&EnumOptions::default()).unwrap(), nfa_language(&a).unwrap());
        assert_eq!(e.language(&EnumOptions::default()).unwrap().len(), 3);
    }
}
