use serde::{Deserialize, Serialize};

use super::{DfaSpec, LayeredBuilder, LayeredNfa};
use crate::expr::{Alphabet, Letter};
use crate::{Error, Result};

/// JSON form of an automaton:
///
/// ```json
/// {"states": 3, "initial": 0, "finals": [0], "alphabet": "01",
///  "delta": [[0, "0", 0], [0, "1", 1]]}
/// ```
///
/// `alphabet` is either a letter count or a string of display characters.
/// Letters in `delta` are 1-based ids or display characters. With a
/// `layers` field (a list of state lists, one per layer) the automaton is
/// layered and may be nondeterministic.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub alphabet: AlphabetField,
    pub delta: Vec<(usize, LetterField, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphabetField {
    Size(u32),
    Chars(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LetterField {
    Id(u32),
    Char(String),
}

/// An automaton read from a file.
#[derive(Clone, Debug)]
pub enum Automaton {
    Dfa(DfaSpec),
    Layered(LayeredNfa),
}

impl AutomatonFile {
    pub fn parse(text: &str) -> Result<AutomatonFile> {
        serde_json::from_str(text).map_err(|e| Error::Format {
            line: e.line(),
            message: e.to_string(),
        })
    }

    fn alphabet(&self) -> Result<Alphabet> {
        match &self.alphabet {
            AlphabetField::Size(0) => Err(Error::invalid("alphabet must have a letter")),
            AlphabetField::Size(k) => Ok(Alphabet::numbered(*k)),
            AlphabetField::Chars(s) => Alphabet::from_chars(s),
        }
    }

    fn letter(alphabet: &Alphabet, f: &LetterField) -> Result<Letter> {
        let l = match f {
            LetterField::Id(id) => Letter::try_new(*id),
            LetterField::Char(s) => {
                let mut cs = s.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => alphabet.letter_for(c),
                    _ => None,
                }
            }
        };
        match l {
            Some(l) if alphabet.contains(l) => Ok(l),
            _ => Err(Error::invalid(format!("unknown letter {f:?} in delta"))),
        }
    }

    /// Interprets the file as a DFA or, when `layers` is present, as a
    /// layered automaton.
    pub fn into_automaton(self) -> Result<Automaton> {
        let alphabet = self.alphabet()?;
        let transitions = self
            .delta
            .iter()
            .map(|(q, a, r)| Ok((*q, Self::letter(&alphabet, a)?, *r)))
            .collect::<Result<Vec<_>>>()?;
        let Some(layers) = &self.layers else {
            return DfaSpec::new(self.states, alphabet, self.initial, self.finals.clone(), transitions)
                .map(Automaton::Dfa);
        };
        let mut place = vec![None; self.states];
        for (j, layer) in layers.iter().enumerate() {
            for (x, &q) in layer.iter().enumerate() {
                match place.get_mut(q) {
                    Some(slot @ None) => *slot = Some((j, x)),
                    Some(Some(_)) => return Err(Error::invalid(format!("state {q} listed in two layers"))),
                    None => return Err(Error::invalid(format!("state {q} outside 0..{}", self.states))),
                }
            }
        }
        let at = |q: usize| -> Result<(usize, usize)> {
            place
                .get(q)
                .copied()
                .flatten()
                .ok_or_else(|| Error::invalid(format!("state {q} is not assigned to a layer")))
        };
        let (l0, initial) = at(self.initial)?;
        if l0 != 0 {
            return Err(Error::invalid("initial state must lie in the first layer"));
        }
        let mut b = LayeredBuilder {
            layer_sizes: layers.iter().map(Vec::len).collect(),
            initial,
            ..Default::default()
        };
        for &f in &self.finals {
            b.finals.push(at(f)?);
        }
        for (q, a, r) in transitions {
            let (j, x) = at(q)?;
            let (j2, y) = at(r)?;
            if j2 != j + 1 {
                return Err(Error::invalid(format!(
                    "transition {q} -> {r} does not join adjacent layers"
                )));
            }
            b.edges.push((j, x, a, y));
        }
        b.build(alphabet).map(Automaton::Layered)
    }

    /// File form of a DFA, using display characters when available.
    pub fn from_dfa(dfa: &DfaSpec) -> AutomatonFile {
        let a = dfa.alphabet();
        let named: Option<String> = a.letters().map(|l| a.display_char(l)).collect();
        let letter = |l: Letter| match a.display_char(l) {
            Some(c) if named.is_some() => LetterField::Char(c.to_string()),
            _ => LetterField::Id(l.id()),
        };
        AutomatonFile {
            states: dfa.state_count(),
            initial: dfa.initial(),
            finals: dfa.finals().iter().copied().collect(),
            alphabet: match &named {
                Some(s) => AlphabetField::Chars(s.clone()),
                None => AlphabetField::Size(a.size()),
            },
            delta: dfa.transitions().map(|(q, l, r)| (q, letter(l), r)).collect(),
            layers: None,
        }
    }
}

impl Automaton {
    pub fn from_json(text: &str) -> Result<Automaton> {
        AutomatonFile::parse(text)?.into_automaton()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_family_dfa, nfa_language};
    use super::*;
    use crate::expr::bits;

    #[test]
    fn dfa_round_trip() {
        let dfa = build_family_dfa(&"div:4,3".parse().unwrap()).unwrap();
        let text = serde_json::to_string(&AutomatonFile::from_dfa(&dfa)).unwrap();
        match Automaton::from_json(&text).unwrap() {
            Automaton::Dfa(d) => assert_eq!(d, dfa),
            _ => panic!("expected a DFA"),
        }
    }

    #[test]
    fn layered_file() {
        let text = r#"{"states": 4, "initial": 0, "finals": [3], "alphabet": "01",
            "layers": [[0], [1, 2], [3]],
            "delta": [[0, "0", 1], [0, "0", 2], [1, "1", 3], [2, 1, 3]]}"#;
        let Automaton::Layered(a) = Automaton::from_json(text).unwrap() else {
            panic!("expected a layered automaton")
        };
        assert!(!a.is_deterministic());
        let l = nfa_language(&a).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.contains(&bits("01")));
        assert!(l.contains(&bits("00")));
    }

    #[test]
    fn format_errors() {
        assert!(matches!(Automaton::from_json("{"), Err(Error::Format { .. })));
        let bad = r#"{"states": 2, "initial": 0, "finals": [1], "alphabet": 2,
            "layers": [[0], [1]], "delta": [[1, 1, 0]]}"#;
        assert!(Automaton::from_json(bad).is_err());
    }
}
