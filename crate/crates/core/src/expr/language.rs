use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use super::{Alphabet, Expr, ExprKind, Letter, Word};
use crate::{Error, Result};

/// Default cap on the number of words held by a single enumerated set.
pub const DEFAULT_WORD_CAP: usize = 1 << 21;

/// Options for bounded enumeration of expression languages.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Drop words longer than this; required for expressions with stars.
    pub max_len: Option<usize>,
    /// Hard limit on the size of any intermediate word set.
    pub cap: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            max_len: None,
            cap: DEFAULT_WORD_CAP,
        }
    }
}

impl EnumOptions {
    pub fn bounded(max_len: usize) -> Self {
        EnumOptions {
            max_len: Some(max_len),
            ..Default::default()
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// A finite set of words over the alphabet `[k]`.
///
/// Equality compares the word sets only; the alphabet size is metadata.
#[derive(Clone, Debug, Default)]
pub struct Language {
    alphabet_size: u32,
    words: BTreeSet<Word>,
}

impl PartialEq for Language {
    fn eq(&self, other: &Language) -> bool {
        self.words == other.words
    }
}

impl Eq for Language {}

impl Language {
    pub fn new(alphabet_size: u32) -> Language {
        Language {
            alphabet_size,
            words: BTreeSet::new(),
        }
    }

    /// Builds a language, checking every letter against the alphabet size.
    pub fn from_words<I: IntoIterator<Item = Word>>(alphabet_size: u32, words: I) -> Result<Language> {
        let mut l = Language::new(alphabet_size);
        for w in words {
            if let Some(bad) = w.iter().find(|a| a.id() > alphabet_size) {
                return Err(Error::invalid(format!(
                    "letter {} exceeds alphabet size {alphabet_size}",
                    bad.id()
                )));
            }
            l.words.insert(w);
        }
        Ok(l)
    }

    pub(crate) fn from_set(alphabet_size: u32, words: BTreeSet<Word>) -> Language {
        Language { alphabet_size, words }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn with_alphabet_size(mut self, k: u32) -> Language {
        self.alphabet_size = self.alphabet_size.max(k);
        self
    }

    /// Inserts a word, widening the alphabet if needed.
    pub fn insert(&mut self, w: Word) -> bool {
        if let Some(m) = w.iter().map(|l| l.id()).max() {
            self.alphabet_size = self.alphabet_size.max(m);
        }
        self.words.insert(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.words.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn into_words(self) -> BTreeSet<Word> {
        self.words
    }

    /// The common length of all words, if there is one. `None` for the
    /// empty language.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.words.iter().map(Vec::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_some()
    }

    pub fn min_len(&self) -> Option<usize> {
        self.words.iter().map(Vec::len).min()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.words.iter().map(Vec::len).max()
    }

    /// Parses the plain-text language format:
    ///
    /// ```text
    /// alphabet 2
    /// 1 2 2
    /// -
    /// ```
    ///
    /// one word per line as letter ids, `-` for the empty word. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn parse_text(text: &str) -> Result<Language> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Format {
            line: 1,
            message: "missing 'alphabet k' header".into(),
        })?;
        let k = header
            .strip_prefix("alphabet")
            .and_then(|r| r.trim().parse::<u32>().ok())
            .filter(|&k| k >= 1)
            .ok_or(Error::Format {
                line: hline,
                message: format!("expected 'alphabet k', found {header:?}"),
            })?;
        let mut lang = Language::new(k);
        for (line, content) in lines {
            if content == "-" {
                lang.words.insert(Vec::new());
                continue;
            }
            let mut w = Vec::new();
            for tok in content.split_whitespace() {
                let id: u32 = tok.parse().map_err(|_| Error::Format {
                    line,
                    message: format!("invalid letter id {tok:?}"),
                })?;
                if id == 0 || id > k {
                    return Err(Error::Format {
                        line,
                        message: format!("letter id {id} outside 1..={k}"),
                    });
                }
                w.push(Letter::new(id));
            }
            lang.words.insert(w);
        }
        Ok(lang)
    }

    /// Writes the plain-text language format read by [`Language::parse_text`].
    pub fn to_text(&self) -> String {
        let mut s = format!("alphabet {}\n", self.alphabet_size.max(1));
        for w in &self.words {
            if w.is_empty() {
                s.push('-');
            } else {
                let ids: Vec<String> = w.iter().map(|l| l.id().to_string()).collect();
                s.push_str(&ids.join(" "));
            }
            s.push('\n');
        }
        s
    }

    /// One word per line using display names.
    pub fn display_words(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        for w in &self.words {
            let _ = writeln!(s, "{}", alphabet.word_to_string(w));
        }
        s
    }
}

impl FromIterator<Word> for Language {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Language {
        let mut l = Language::new(0);
        for w in iter {
            l.insert(w);
        }
        l
    }
}

type WordSet = Arc<BTreeSet<Word>>;

pub(super) fn enumerate(expr: &Expr, opts: &EnumOptions) -> Result<Language> {
    if expr.max_len().is_none() && opts.max_len.is_none() {
        return Err(Error::StarPresent(
            "the language is infinite; pass a maximum word length for bounded enumeration",
        ));
    }
    let mut memo = HashMap::new();
    let set = words_of(expr, opts, &mut memo)?;
    let words = Arc::try_unwrap(set).unwrap_or_else(|s| (*s).clone());
    Ok(Language::from_set(expr.max_letter(), words))
}

fn check(set: &BTreeSet<Word>, opts: &EnumOptions) -> Result<()> {
    if set.len() > opts.cap {
        Err(Error::budget("words in an enumerated set", opts.cap))
    } else {
        Ok(())
    }
}

fn words_of(e: &Expr, opts: &EnumOptions, memo: &mut HashMap<usize, WordSet>) -> Result<WordSet> {
    if let Some(s) = memo.get(&e.node_id()) {
        return Ok(s.clone());
    }
    let fits = |len: usize| opts.max_len.is_none_or(|m| len <= m);
    let set: BTreeSet<Word> = match e.kind() {
        ExprKind::Letter(l) => {
            if fits(1) {
                BTreeSet::from([vec![*l]])
            } else {
                BTreeSet::new()
            }
        }
        ExprKind::Epsilon => BTreeSet::from([Vec::new()]),
        ExprKind::Union(a, b) => {
            let sa = words_of(a, opts, memo)?;
            let sb = words_of(b, opts, memo)?;
            let mut s: BTreeSet<Word> = (*sa).clone();
            s.extend(sb.iter().cloned());
            s
        }
        ExprKind::Concat(a, b) => {
            let sa = words_of(a, opts, memo)?;
            let sb = words_of(b, opts, memo)?;
            let mut s = BTreeSet::new();
            for u in sa.iter() {
                for v in sb.iter() {
                    if !fits(u.len() + v.len()) {
                        continue;
                    }
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    s.insert(w);
                }
                check(&s, opts)?;
            }
            s
        }
        ExprKind::Star(a) => {
            let base = words_of(a, opts, memo)?;
            let base: Vec<&Word> = base.iter().filter(|w| !w.is_empty()).collect();
            let mut all = BTreeSet::from([Vec::new()]);
            let mut frontier = vec![Vec::new()];
            // Every non-empty operand word is at least one letter long, so
            // the closure terminates once `max_len` is reached.
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for u in &frontier {
                    for v in &base {
                        if !fits(u.len() + v.len()) {
                            continue;
                        }
                        let mut w = u.clone();
                        w.extend_from_slice(v);
                        if all.insert(w.clone()) {
                            next.push(w);
                        }
                    }
                }
                check(&all, opts)?;
                frontier = next;
            }
            all
        }
    };
    check(&set, opts)?;
    let set = Arc::new(set);
    memo.insert(e.node_id(), set.clone());
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{bits, parse};

    fn lang(text: &str, max_len: Option<usize>) -> Vec<Word> {
        let e = parse(text, &Alphabet::binary()).unwrap();
        let opts = EnumOptions {
            max_len,
            ..Default::default()
        };
        e.language(&opts).unwrap().into_words().into_iter().collect()
    }

    #[test]
    fn direct_expansion() {
        assert_eq!(
            lang("(00+11)(00+11)1", None),
            vec![bits("00001"), bits("00111"), bits("11001"), bits("11111")]
        );
        assert_eq!(lang("(0+00)1", None), vec![bits("001"), bits("01")]);
    }

    #[test]
    fn bounded_star() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let e = parse("a*b", &ab).unwrap();
        let l = e.language(&EnumOptions::bounded(3)).unwrap();
        let a = Letter::new(1);
        let b = Letter::new(2);
        let expected: Language = [vec![b], vec![a, b], vec![a, a, b]].into_iter().collect();
        assert_eq!(l, expected);
    }

    #[test]
    fn unbounded_star_is_rejected() {
        let e = parse("0*", &Alphabet::binary()).unwrap();
        assert!(matches!(
            e.language(&EnumOptions::default()),
            Err(Error::StarPresent(_))
        ));
        let eps_star = parse("e*1", &Alphabet::binary()).unwrap();
        assert_eq!(eps_star.language(&EnumOptions::default()).unwrap().len(), 1);
    }

    #[test]
    fn explosion_guard() {
        let e = parse("(0+1)(0+1)(0+1)(0+1)", &Alphabet::binary()).unwrap();
        let err = e.language(&EnumOptions::default().with_cap(10)).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "alphabet 3\n1 2\n-\n3 3 1\n";
        let l = Language::parse_text(text).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.alphabet_size(), 3);
        assert_eq!(Language::parse_text(&l.to_text()).unwrap(), l);
        assert!(Language::parse_text("alphabet 2\n1 3\n").is_err());
        assert!(Language::parse_text("1 2\n").is_err());
    }
}
