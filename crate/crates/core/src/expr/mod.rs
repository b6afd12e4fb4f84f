//! Regular-expression syntax trees over integer alphabets.
//!
//! An [`Expr`] is an immutable, reference-counted syntax tree built from
//! letters, the empty word, binary union, binary concatenation and star.
//! There is no node for the empty language. Subtrees may be shared between
//! several parents; all size measures ([`Expr::rpn`], [`Expr::leaves`]) count
//! the expanded tree, so sharing is purely a memory optimisation.
//!
//! Each node caches its reverse polish length, leaf count and the minimum and
//! maximum length of the words it describes, which makes homogeneity and
//! degree queries O(1).

mod alphabet;
mod language;
mod parse;
mod print;

pub use alphabet::Alphabet;
pub use language::{EnumOptions, Language, DEFAULT_WORD_CAP};
pub use parse::parse;

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A letter of an alphabet, identified by a 1-based integer id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(u32);

impl Letter {
    /// Creates the letter with the given id.
    ///
    /// Panics if `id == 0`; letter ids start at 1.
    pub fn new(id: u32) -> Letter {
        assert!(id >= 1, "letter ids are 1-based");
        Letter(id)
    }

    pub fn try_new(id: u32) -> Option<Letter> {
        (id >= 1).then_some(Letter(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The binary letter `0` (id 1).
pub const ZERO: Letter = Letter(1);
/// The binary letter `1` (id 2).
pub const ONE: Letter = Letter(2);

/// A finite word: a sequence of letters.
pub type Word = Vec<Letter>;

/// Builds a word from letter ids. Panics on id 0.
pub fn word(ids: &[u32]) -> Word {
    ids.iter().map(|&i| Letter::new(i)).collect()
}

/// Builds a binary word from a string of `0`/`1` characters, using the
/// letters of [`Alphabet::binary`] (`0` is id 1, `1` is id 2).
pub fn bits(text: &str) -> Word {
    text.chars()
        .map(|c| match c {
            '0' => Letter::new(1),
            '1' => Letter::new(2),
            other => panic!("not a bit: {other:?}"),
        })
        .collect()
}

/// Node kinds of an expression tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Letter(Letter),
    Epsilon,
    Union(Expr, Expr),
    Concat(Expr, Expr),
    Star(Expr),
}

struct Node {
    kind: ExprKind,
    rpn: u64,
    leaves: u64,
    min_len: usize,
    /// `None` when the described language is infinite.
    max_len: Option<usize>,
    has_star: bool,
    max_letter: u32,
}

/// Homogeneity summary of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub homogeneous: bool,
    /// The common word length, present exactly when `homogeneous` holds.
    pub degree: Option<usize>,
}

/// An immutable regular expression.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn from_kind(kind: ExprKind) -> Expr {
        let (rpn, leaves, min_len, max_len, has_star, max_letter) = match &kind {
            ExprKind::Letter(l) => (1, 1, 1, Some(1), false, l.id()),
            ExprKind::Epsilon => (1, 1, 0, Some(0), false, 0),
            ExprKind::Union(a, b) => (
                a.rpn().saturating_add(b.rpn()).saturating_add(1),
                a.leaves().saturating_add(b.leaves()),
                a.min_len().min(b.min_len()),
                match (a.max_len(), b.max_len()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    _ => None,
                },
                a.has_star() || b.has_star(),
                a.0.max_letter.max(b.0.max_letter),
            ),
            ExprKind::Concat(a, b) => (
                a.rpn().saturating_add(b.rpn()).saturating_add(1),
                a.leaves().saturating_add(b.leaves()),
                a.min_len() + b.min_len(),
                match (a.max_len(), b.max_len()) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                },
                a.has_star() || b.has_star(),
                a.0.max_letter.max(b.0.max_letter),
            ),
            ExprKind::Star(a) => (
                a.rpn().saturating_add(1),
                a.leaves(),
                0,
                if a.max_len() == Some(0) { Some(0) } else { None },
                true,
                a.0.max_letter,
            ),
        };
        Expr(Arc::new(Node {
            kind,
            rpn,
            leaves,
            min_len,
            max_len,
            has_star,
            max_letter,
        }))
    }

    pub fn letter(l: Letter) -> Expr {
        Expr::from_kind(ExprKind::Letter(l))
    }

    pub fn epsilon() -> Expr {
        Expr::from_kind(ExprKind::Epsilon)
    }

    pub fn union(a: Expr, b: Expr) -> Expr {
        Expr::from_kind(ExprKind::Union(a, b))
    }

    pub fn concat(a: Expr, b: Expr) -> Expr {
        Expr::from_kind(ExprKind::Concat(a, b))
    }

    pub fn star(a: Expr) -> Expr {
        Expr::from_kind(ExprKind::Star(a))
    }

    /// Left-associated union of all items; `None` for an empty iterator.
    pub fn union_all<I: IntoIterator<Item = Expr>>(items: I) -> Option<Expr> {
        items.into_iter().reduce(Expr::union)
    }

    /// Left-associated concatenation, skipping `ε` operands.
    ///
    /// Returns `ε` when every operand is `ε` or the iterator is empty.
    pub fn concat_all<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        items
            .into_iter()
            .filter(|e| !e.is_epsilon())
            .reduce(Expr::concat)
            .unwrap_or_else(Expr::epsilon)
    }

    /// The expression describing exactly one word (`ε` for the empty word).
    pub fn word(w: &[Letter]) -> Expr {
        Expr::concat_all(w.iter().map(|&l| Expr::letter(l)))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    /// Reverse polish length: the number of nodes of the (expanded) syntax
    /// tree. Saturates at `u64::MAX`.
    pub fn rpn(&self) -> u64 {
        self.0.rpn
    }

    /// Number of leaves (letters and `ε`) of the expanded tree.
    pub fn leaves(&self) -> u64 {
        self.0.leaves
    }

    pub fn min_len(&self) -> usize {
        self.0.min_len
    }

    /// Longest described word, or `None` for infinite languages.
    pub fn max_len(&self) -> Option<usize> {
        self.0.max_len
    }

    pub fn has_star(&self) -> bool {
        self.0.has_star
    }

    pub fn is_star_free(&self) -> bool {
        !self.0.has_star
    }

    /// Largest letter id occurring in the tree (0 if there is none).
    pub fn max_letter(&self) -> u32 {
        self.0.max_letter
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self.0.kind, ExprKind::Epsilon)
    }

    pub fn is_letter(&self) -> bool {
        matches!(self.0.kind, ExprKind::Letter(_))
    }

    /// Homogeneity and degree. A star is reported as non-homogeneous unless
    /// its operand describes only the empty word.
    pub fn degree_info(&self) -> DegreeInfo {
        let homogeneous = self.max_len() == Some(self.min_len());
        DegreeInfo {
            homogeneous,
            degree: homogeneous.then_some(self.min_len()),
        }
    }

    /// The degree when the expression is homogeneous.
    pub fn degree(&self) -> Option<usize> {
        self.degree_info().degree
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_info().homogeneous
    }

    /// Identity of the shared node, usable as a memoisation key while the
    /// expression is alive.
    pub fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Number of distinct nodes of the shared representation.
    pub fn shared_size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.node_id()) {
                continue;
            }
            match e.kind() {
                ExprKind::Letter(_) | ExprKind::Epsilon => {}
                ExprKind::Union(a, b) | ExprKind::Concat(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                ExprKind::Star(a) => stack.push(a.clone()),
            }
        }
        seen.len()
    }

    /// Replaces every letter leaf by the expression returned from `f`.
    pub fn map_letters<F: FnMut(Letter) -> Expr>(&self, f: &mut F) -> Expr {
        match self.kind() {
            ExprKind::Letter(l) => f(*l),
            ExprKind::Epsilon => self.clone(),
            ExprKind::Union(a, b) => Expr::union(a.map_letters(f), b.map_letters(f)),
            ExprKind::Concat(a, b) => Expr::concat(a.map_letters(f), b.map_letters(f)),
            ExprKind::Star(a) => Expr::star(a.map_letters(f)),
        }
    }

    /// Letters in left-to-right leaf order (`ε` leaves are skipped).
    pub fn letters_in_order(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            match e.kind() {
                ExprKind::Letter(l) => out.push(*l),
                ExprKind::Epsilon => {}
                ExprKind::Union(a, b) | ExprKind::Concat(a, b) => {
                    stack.push(b.clone());
                    stack.push(a.clone());
                }
                ExprKind::Star(a) => stack.push(a.clone()),
            }
        }
        out
    }

    /// Finite language of a star-free expression (or the bounded slice of a
    /// starred one when `opts.max_len` is set).
    pub fn language(&self, opts: &EnumOptions) -> crate::Result<Language> {
        language::enumerate(self, opts)
    }

    /// Language equality of two star-free expressions.
    pub fn equivalent(&self, other: &Expr) -> crate::Result<bool> {
        if self.has_star() || other.has_star() {
            return Err(crate::Error::StarPresent(
                "equivalence is decided only for star-free expressions; compare bounded languages instead",
            ));
        }
        let opts = EnumOptions::default();
        Ok(self.language(&opts)? == other.language(&opts)?)
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.ptr_eq(other) || (self.rpn() == other.rpn() && self.kind() == other.kind())
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind().hash(state)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical(&Alphabet::anonymous(self.max_letter())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(text: &str) -> Expr {
        parse(text, &Alphabet::binary()).unwrap()
    }

    #[test]
    fn rpn_counts_nodes() {
        let abc = Alphabet::from_chars("abcde").unwrap();
        assert_eq!(parse("a", &abc).unwrap().rpn(), 1);
        assert_eq!(parse("(a+b)(cd+ce)", &abc).unwrap().rpn(), 11);
        assert_eq!(bin("000+011+100").rpn(), 17);
    }

    #[test]
    fn rpn_is_additive() {
        let a = bin("0+1");
        let b = bin("11");
        assert_eq!(Expr::union(a.clone(), b.clone()).rpn(), a.rpn() + b.rpn() + 1);
        assert_eq!(Expr::concat(a.clone(), b.clone()).rpn(), a.rpn() + b.rpn() + 1);
        assert_eq!(Expr::star(a.clone()).rpn(), a.rpn() + 1);
    }

    #[test]
    fn degrees() {
        let abc = Alphabet::from_chars("abcde").unwrap();
        let e = parse("(a+b)(cd+ce)", &abc).unwrap();
        assert_eq!(
            e.degree_info(),
            DegreeInfo {
                homogeneous: true,
                degree: Some(3)
            }
        );
        assert!(!bin("(0+00)1").is_homogeneous());
        assert_eq!(Expr::epsilon().degree(), Some(0));
        assert_eq!(Expr::star(Expr::epsilon()).degree(), Some(0));
        assert!(!bin("0*").is_homogeneous());
    }

    #[test]
    fn shared_size_counts_distinct_nodes() {
        let x = bin("0+1");
        let e = Expr::concat(x.clone(), x.clone());
        assert_eq!(e.rpn(), 7);
        assert_eq!(e.shared_size(), 4);
    }

    #[test]
    fn equivalence() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let p = |s| parse(s, &abc).unwrap();
        assert!(p("(a+b)c").equivalent(&p("ac+bc")).unwrap());
        assert!(!bin("000+011+100").equivalent(&bin("000+011")).unwrap());
        assert!(matches!(
            bin("0*(10*)(10*)").equivalent(&bin("1")),
            Err(crate::Error::StarPresent(_))
        ));
    }

    #[test]
    fn letter_ids_start_at_one() {
        assert!(Letter::try_new(0).is_none());
        assert_eq!(Letter::new(3).id(), 3);
        assert_eq!(bits("01"), word(&[1, 2]));
    }
}
