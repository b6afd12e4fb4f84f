use std::collections::BTreeSet;

use super::Letter;
use crate::{Error, Result};

/// Characters with a syntactic role that can never name a letter.
const RESERVED: &[char] = &['+', '*', '(', ')', '{', '}', 'ε', '∅', '-'];

/// A finite alphabet `{1, …, k}` with optional one-character display names.
///
/// Display names are used for parsing and printing; letters without a name
/// are written `{id}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Option<char>>,
}

impl Alphabet {
    /// Alphabet whose letters are the given characters, in order.
    pub fn from_chars(chars: &str) -> Result<Alphabet> {
        let mut seen = BTreeSet::new();
        let mut symbols = Vec::new();
        for c in chars.chars() {
            if c.is_whitespace() || RESERVED.contains(&c) {
                return Err(Error::invalid(format!("{c:?} cannot be used as a letter")));
            }
            if !seen.insert(c) {
                return Err(Error::invalid(format!("letter {c:?} declared twice")));
            }
            symbols.push(Some(c));
        }
        if symbols.is_empty() {
            return Err(Error::invalid("an alphabet needs at least one letter"));
        }
        Ok(Alphabet { symbols })
    }

    /// `{0, 1}` with `0` as letter 1 and `1` as letter 2.
    pub fn binary() -> Alphabet {
        Alphabet {
            symbols: vec![Some('0'), Some('1')],
        }
    }

    /// `[k]`, displayed as the digits `1`…`9` when `k ≤ 9`.
    pub fn numbered(k: u32) -> Alphabet {
        let symbols = (1..=k)
            .map(|i| if k <= 9 { char::from_digit(i, 10) } else { None })
            .collect();
        Alphabet { symbols }
    }

    /// `k` letters without display names.
    pub fn anonymous(k: u32) -> Alphabet {
        Alphabet {
            symbols: vec![None; k as usize],
        }
    }

    /// Alphabet made of the distinct letter characters occurring in an
    /// expression text, sorted. `e` is treated as the empty word and is not
    /// collected.
    pub fn infer(text: &str) -> Alphabet {
        let mut chars = BTreeSet::new();
        let mut in_braces = false;
        for c in text.chars() {
            match c {
                '{' => in_braces = true,
                '}' => in_braces = false,
                _ if in_braces || c.is_whitespace() || RESERVED.contains(&c) || c == 'e' => {}
                _ => {
                    chars.insert(c);
                }
            }
        }
        if chars.is_empty() {
            return Alphabet::anonymous(braced_max(text).max(1));
        }
        let mut symbols: Vec<Option<char>> = chars.into_iter().map(Some).collect();
        let extra = braced_max(text) as usize;
        while symbols.len() < extra {
            symbols.push(None);
        }
        Alphabet { symbols }
    }

    pub fn size(&self) -> u32 {
        self.symbols.len() as u32
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (1..=self.size()).map(Letter::new)
    }

    pub fn letter_for(&self, c: char) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|s| *s == Some(c))
            .map(|i| Letter::new(i as u32 + 1))
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.id() <= self.size()
    }

    pub fn display_char(&self, l: Letter) -> Option<char> {
        self.symbols.get(l.id() as usize - 1).copied().flatten()
    }

    pub(crate) fn write_letter(&self, l: Letter, out: &mut String) {
        match self.display_char(l) {
            Some(c) => out.push(c),
            None => {
                out.push('{');
                out.push_str(&l.id().to_string());
                out.push('}');
            }
        }
    }

    /// A word written with display names (`ε` for the empty word).
    pub fn word_to_string(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let mut s = String::new();
        for &l in w {
            self.write_letter(l, &mut s);
        }
        s
    }
}

fn braced_max(text: &str) -> u32 {
    let mut max = 0;
    let mut rest = text;
    while let Some(start) = rest.find('{') {
        let after = &rest[start + 1..];
        match after.find('}') {
            Some(end) => {
                if let Ok(v) = after[..end].trim().parse::<u32>() {
                    max = max.max(v);
                }
                rest = &after[end + 1..];
            }
            None => break,
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_ids() {
        let a = Alphabet::binary();
        assert_eq!(a.letter_for('0'), Some(Letter::new(1)));
        assert_eq!(a.letter_for('1'), Some(Letter::new(2)));
        assert_eq!(a.word_to_string(&[Letter::new(2), Letter::new(1)]), "10");
    }

    #[test]
    fn numbered_large_uses_braces() {
        let a = Alphabet::numbered(12);
        assert_eq!(a.word_to_string(&[Letter::new(11)]), "{11}");
        assert_eq!(Alphabet::numbered(3).word_to_string(&[Letter::new(3)]), "3");
    }

    #[test]
    fn rejects_duplicates_and_reserved() {
        assert!(Alphabet::from_chars("aa").is_err());
        assert!(Alphabet::from_chars("a+").is_err());
    }

    #[test]
    fn infer_skips_epsilon_name() {
        let a = Alphabet::infer("(b+a)e");
        assert_eq!(a.size(), 2);
        assert_eq!(a.letter_for('a'), Some(Letter::new(1)));
    }
}
