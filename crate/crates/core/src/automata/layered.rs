use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::DfaSpec;
use crate::expr::{Alphabet, Language, Letter, Word};
use crate::{Error, Result};

/// Outgoing edges of one state into the next layer: `(letter, target index)`.
pub type Row = Vec<(Letter, usize)>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Layer {
    finals: Vec<bool>,
    rows: Vec<Row>,
}

/// An NFA whose states are split into layers `Q_0 … Q_n`, with transitions
/// only from `Q_j` to `Q_{j+1}`.
///
/// States are addressed as `(layer, index)`. Every value of this type is
/// trimmed: each state is reachable from the initial state and reaches a
/// final state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredNfa {
    alphabet: Alphabet,
    initial: usize,
    layers: Vec<Layer>,
}

/// Raw description of a layered automaton before trimming.
#[derive(Clone, Debug, Default)]
pub struct LayeredBuilder {
    pub layer_sizes: Vec<usize>,
    pub initial: usize,
    pub finals: Vec<(usize, usize)>,
    /// `(layer, source, letter, target)` with the target in `layer + 1`.
    pub edges: Vec<(usize, usize, Letter, usize)>,
}

impl LayeredBuilder {
    /// Validates, trims and returns the automaton. Reports
    /// [`Error::EmptyLanguage`] when no final state is reachable.
    pub fn build(self, alphabet: Alphabet) -> Result<LayeredNfa> {
        let sizes = &self.layer_sizes;
        if sizes.is_empty() || self.initial >= sizes[0] {
            return Err(Error::invalid("initial state must lie in layer 0"));
        }
        let mut finals: Vec<Vec<bool>> = sizes.iter().map(|&s| vec![false; s]).collect();
        for &(j, q) in &self.finals {
            *finals
                .get_mut(j)
                .and_then(|l| l.get_mut(q))
                .ok_or_else(|| Error::invalid(format!("final state ({j}, {q}) does not exist")))? = true;
        }
        let mut rows: Vec<Vec<Row>> = sizes.iter().map(|&s| vec![Vec::new(); s]).collect();
        for &(j, x, a, y) in &self.edges {
            if j + 1 >= sizes.len() || x >= sizes[j] || y >= sizes[j + 1] {
                return Err(Error::invalid(format!(
                    "edge ({j},{x}) -> ({},{y}) does not join adjacent layers",
                    j + 1
                )));
            }
            if !alphabet.contains(a) {
                return Err(Error::invalid(format!("letter {} outside the alphabet", a.id())));
            }
            rows[j][x].push((a, y));
        }
        trim(alphabet, self.initial, finals, rows)
    }
}

fn trim(alphabet: Alphabet, initial: usize, finals: Vec<Vec<bool>>, rows: Vec<Vec<Row>>) -> Result<LayeredNfa> {
    let n = rows.len();
    let mut fwd: Vec<Vec<bool>> = rows.iter().map(|l| vec![false; l.len()]).collect();
    fwd[0][initial] = true;
    for j in 0..n.saturating_sub(1) {
        for x in 0..rows[j].len() {
            if fwd[j][x] {
                for &(_, y) in &rows[j][x] {
                    fwd[j + 1][y] = true;
                }
            }
        }
    }
    let mut live: Vec<Vec<bool>> = finals.clone();
    for j in (0..n.saturating_sub(1)).rev() {
        for x in 0..rows[j].len() {
            if rows[j][x].iter().any(|&(_, y)| live[j + 1][y]) {
                live[j][x] = true;
            }
        }
    }
    for j in 0..n {
        for x in 0..rows[j].len() {
            live[j][x] &= fwd[j][x];
        }
    }
    if !live[0][initial] {
        return Err(Error::EmptyLanguage);
    }
    let index: Vec<Vec<Option<usize>>> = live
        .iter()
        .map(|l| {
            let mut next = 0;
            l.iter()
                .map(|&keep| {
                    keep.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let mut layers = Vec::new();
    for j in 0..n {
        let mut layer = Layer {
            finals: Vec::new(),
            rows: Vec::new(),
        };
        for x in 0..rows[j].len() {
            if index[j][x].is_none() {
                continue;
            }
            let mut row: Row = rows[j][x]
                .iter()
                .filter_map(|&(a, y)| index[j + 1][y].map(|y| (a, y)))
                .collect();
            row.sort();
            row.dedup();
            layer.finals.push(finals[j][x]);
            layer.rows.push(row);
        }
        layers.push(layer);
    }
    while layers.last().is_some_and(|l| l.rows.is_empty()) {
        layers.pop();
    }
    Ok(LayeredNfa {
        alphabet,
        initial: index[0][initial].expect("initial state is live"),
        layers,
    })
}

impl LayeredNfa {
    /// The trie of a finite language, with identical suffix structure
    /// collapsed. For a finite language this is its minimal partial DFA,
    /// layered by prefix length.
    pub fn from_language(l: &Language, alphabet: Alphabet) -> Result<LayeredNfa> {
        if l.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        let n = l.max_len().unwrap_or(0);
        let mut ids: Vec<HashMap<Word, usize>> = vec![HashMap::new(); n + 1];
        let mut b = LayeredBuilder {
            layer_sizes: vec![0; n + 1],
            ..Default::default()
        };
        let mut state = |j: usize, prefix: &[Letter], b: &mut LayeredBuilder| -> usize {
            let next = ids[j].len();
            let id = *ids[j].entry(prefix.to_vec()).or_insert(next);
            b.layer_sizes[j] = ids[j].len();
            id
        };
        state(0, &[], &mut b);
        for w in l.iter() {
            for j in 0..w.len() {
                let x = state(j, &w[..j], &mut b);
                let y = state(j + 1, &w[..j + 1], &mut b);
                b.edges.push((j, x, w[j], y));
            }
            let f = state(w.len(), w, &mut b);
            b.finals.push((w.len(), f));
        }
        Ok(b.build(alphabet.clone())?.collapsed())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Largest layer size `ω`.
    pub fn width(&self) -> usize {
        self.layers.iter().map(|l| l.rows.len()).max().unwrap_or(0)
    }

    /// Index `n` of the last layer, which is the length of the longest path.
    pub fn length(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn layer_size(&self, j: usize) -> usize {
        self.layers.get(j).map_or(0, |l| l.rows.len())
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.rows.len()).collect()
    }

    pub fn is_final(&self, j: usize, x: usize) -> bool {
        self.layers[j].finals[x]
    }

    /// Final states tagged with their layer.
    pub fn finals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, l) in self.layers.iter().enumerate() {
            for (x, &f) in l.finals.iter().enumerate() {
                if f {
                    out.push((j, x));
                }
            }
        }
        out
    }

    /// Outgoing edges of state `x` in layer `j`.
    pub fn row(&self, j: usize, x: usize) -> &[(Letter, usize)] {
        &self.layers[j].rows[x]
    }

    pub fn state_count(&self) -> usize {
        self.layers.iter().map(|l| l.rows.len()).sum()
    }

    pub fn transition_count(&self) -> usize {
        self.layers.iter().flat_map(|l| &l.rows).map(Vec::len).sum()
    }

    /// True when every state has at most one successor per letter.
    pub fn is_deterministic(&self) -> bool {
        self.layers
            .iter()
            .flat_map(|l| &l.rows)
            .all(|r| r.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Merges states of a layer that agree on finality and on their
    /// outgoing edges, working from the last layer back to the first.
    pub fn collapsed(&self) -> LayeredNfa {
        let mut layers = self.layers.clone();
        let mut remap: Vec<usize> = Vec::new();
        for j in (0..layers.len()).rev() {
            let layer = &layers[j];
            let mut keys: BTreeMap<(bool, Row), usize> = BTreeMap::new();
            let mut new_finals = Vec::new();
            let mut new_rows = Vec::new();
            let mut this_remap = Vec::with_capacity(layer.rows.len());
            for (x, row) in layer.rows.iter().enumerate() {
                let mut r: Row = row.iter().map(|&(a, y)| (a, remap[y])).collect();
                r.sort();
                r.dedup();
                let key = (layer.finals[x], r);
                let next = keys.len();
                let id = *keys.entry(key.clone()).or_insert_with(|| {
                    new_finals.push(key.0);
                    new_rows.push(key.1);
                    next
                });
                this_remap.push(id);
            }
            layers[j] = Layer {
                finals: new_finals,
                rows: new_rows,
            };
            remap = this_remap;
        }
        LayeredNfa {
            alphabet: self.alphabet.clone(),
            initial: remap[self.initial],
            layers,
        }
    }

    /// Accepted words, by layer-by-layer propagation of prefix sets.
    pub fn language(&self, cap: usize) -> Result<Language> {
        let mut out = BTreeSet::new();
        let mut current: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); self.layer_size(0)];
        current[self.initial].insert(Vec::new());
        for j in 0..self.layers.len() {
            for (x, words) in current.iter().enumerate() {
                if self.layers[j].finals[x] {
                    out.extend(words.iter().cloned());
                }
            }
            if out.len() > cap {
                return Err(Error::budget("accepted words", cap));
            }
            if j + 1 == self.layers.len() {
                break;
            }
            let mut next: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); self.layer_size(j + 1)];
            let mut total = 0usize;
            for (x, words) in current.iter().enumerate() {
                for &(a, y) in &self.layers[j].rows[x] {
                    for w in words {
                        let mut v = w.clone();
                        v.push(a);
                        if next[y].insert(v) {
                            total += 1;
                        }
                    }
                }
                if total > cap {
                    return Err(Error::budget("prefixes in a layer", cap));
                }
            }
            current = next;
        }
        Ok(Language::from_set(self.alphabet.size(), out))
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        if w.len() >= self.layers.len() {
            return false;
        }
        let mut states = BTreeSet::from([self.initial]);
        for (j, &a) in w.iter().enumerate() {
            states = states
                .iter()
                .flat_map(|&x| self.layers[j].rows[x].iter().filter(move |e| e.0 == a).map(|e| e.1))
                .collect();
        }
        states.iter().any(|&x| self.layers[w.len()].finals[x])
    }
}

/// The `n`-slice automaton of `dfa`: the product with the trivial automaton
/// for `Σ^n`, trimmed, with equivalent states collapsed.
pub fn slice(dfa: &DfaSpec, n: usize) -> Result<LayeredNfa> {
    if n == 0 {
        return Err(Error::invalid("slice length must be at least 1"));
    }
    let mut b = LayeredBuilder {
        layer_sizes: vec![0; n + 1],
        initial: 0,
        ..Default::default()
    };
    let mut current: Vec<usize> = vec![dfa.initial()];
    b.layer_sizes[0] = 1;
    for j in 0..n {
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        for (x, &q) in current.iter().enumerate() {
            for a in dfa.alphabet().letters() {
                if let Some(r) = dfa.step(q, a) {
                    let next = ids.len();
                    let y = *ids.entry(r).or_insert(next);
                    b.edges.push((j, x, a, y));
                }
            }
        }
        let mut next = vec![0; ids.len()];
        for (&q, &y) in &ids {
            next[y] = q;
        }
        b.layer_sizes[j + 1] = next.len();
        current = next;
    }
    for (y, &q) in current.iter().enumerate() {
        if dfa.is_final(q) {
            b.finals.push((n, y));
        }
    }
    match b.build(dfa.alphabet().clone()) {
        Ok(a) => Ok(a.collapsed()),
        Err(Error::EmptyLanguage) => Err(Error::EmptySlice(n)),
        Err(e) => Err(e),
    }
}

/// Exact accepted language of a layered automaton.
pub fn nfa_language(a: &LayeredNfa) -> Result<Language> {
    a.language(crate::expr::DEFAULT_WORD_CAP)
}

#[cfg(test)]
mod tests {
    use super::super::build_family_dfa;
    use super::*;
    use crate::expr::{bits, word};
    use crate::languages::generate;

    fn fam_slice(s: &str, n: usize) -> LayeredNfa {
        slice(&build_family_dfa(&s.parse().unwrap()).unwrap(), n).unwrap()
    }

    #[test]
    fn divisibility_slice() {
        let a = fam_slice("div:4,3", 4);
        assert_eq!(
            nfa_language(&a).unwrap(),
            generate(&"div:4,3".parse().unwrap()).unwrap()
        );
        assert!(a.width() <= 3);
        assert_eq!(a.length(), 4);
        assert_eq!(a.finals().len(), 1);
    }

    #[test]
    fn trivial_slice() {
        let l = Letter::new(1);
        let r = Letter::new(2);
        let dfa = DfaSpec::new(1, Alphabet::binary(), 0, [0], [(0, l, 0), (0, r, 0)]).unwrap();
        let a = slice(&dfa, 2).unwrap();
        assert_eq!((a.width(), a.length()), (1, 2));
        assert_eq!(nfa_language(&a).unwrap().len(), 4);
    }

    #[test]
    fn binomial_width() {
        let a = fam_slice("binomial:6,2", 6);
        assert_eq!((a.width(), a.length()), (3, 6));
    }

    #[test]
    fn parity_and_dyck() {
        let a = fam_slice("parity:2,2", 2);
        let expected: Language = [word(&[1, 1]), word(&[2, 2])].into_iter().collect();
        assert_eq!(nfa_language(&a).unwrap(), expected);
        let p = fam_slice("parity:6,3", 6);
        assert!(p.width() <= 4);
        let d = fam_slice("dyck:4", 4);
        let expected: Language = [bits("0011"), bits("0101")].into_iter().collect();
        assert_eq!(nfa_language(&d).unwrap(), expected);
    }

    #[test]
    fn empty_slice_is_distinct() {
        let b = build_family_dfa(&"binomial:3,3".parse().unwrap()).unwrap();
        assert_eq!(slice(&b, 2).unwrap_err(), Error::EmptySlice(2));
        let empty = LayeredBuilder {
            layer_sizes: vec![1, 1],
            initial: 0,
            finals: vec![],
            edges: vec![],
        };
        assert_eq!(empty.build(Alphabet::binary()).unwrap_err(), Error::EmptyLanguage);
    }

    #[test]
    fn trie_is_minimal() {
        let l = generate(&"div:5,3".parse().unwrap()).unwrap();
        let a = LayeredNfa::from_language(&l, Alphabet::binary()).unwrap();
        assert_eq!(nfa_language(&a).unwrap(), l);
        assert!(a.width() <= 3);
        assert!(a.is_deterministic());
        assert!(a.accepts(&bits("01001")));
        assert!(!a.accepts(&bits("01000")));
    }
}
