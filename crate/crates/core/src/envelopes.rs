//! Envelopes: the shortest, longest, lightest or heaviest words of a
//! language, extracted from an expression without increasing its size.
//!
//! The syntax tree is homogenized bottom-up. At a union whose children
//! describe words of different length (or weight), the child on the wrong
//! side is deleted with its subtree; equal children are both kept.
//! Concatenations are left alone.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::{Alphabet, Expr, ExprKind, Letter};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Higher,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        match s {
            "lower" => Ok(Direction::Lower),
            "higher" => Ok(Direction::Higher),
            _ => Err(Error::invalid(format!("direction must be lower or higher, not {s:?}"))),
        }
    }
}

/// Nonnegative letter weights; the weight of a word is the sum over its
/// letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighting {
    weights: BTreeMap<Letter, BigRational>,
}

impl Weighting {
    pub fn new<I: IntoIterator<Item = (Letter, BigRational)>>(items: I) -> Result<Weighting> {
        let weights: BTreeMap<_, _> = items.into_iter().collect();
        if let Some((l, w)) = weights.iter().find(|(_, w)| w.is_negative()) {
            return Err(Error::invalid(format!("letter {} has negative weight {w}", l.id())));
        }
        Ok(Weighting { weights })
    }

    /// Every letter `1..=k` weighs one, so weight is length.
    pub fn uniform(k: u32) -> Weighting {
        Weighting {
            weights: (1..=k).map(|i| (Letter::new(i), BigRational::one())).collect(),
        }
    }

    pub fn get(&self, l: Letter) -> Result<&BigRational> {
        self.weights
            .get(&l)
            .ok_or_else(|| Error::invalid(format!("no weight given for letter {}", l.id())))
    }

    /// Lines `letter weight`, where the weight is `num/den` or an integer and
    /// the letter is a display character of `alphabet` or a numeric id.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Weighting> {
        let mut items = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Format {
                line: i + 1,
                message: m.to_string(),
            };
            let mut parts = line.split_whitespace();
            let (Some(lt), Some(wt), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected `letter weight`"));
            };
            let mut cs = lt.chars();
            let by_char = match (cs.next(), cs.next()) {
                (Some(c), None) => alphabet.letter_for(c),
                _ => None,
            };
            let letter = by_char
                .or_else(|| lt.parse().ok().and_then(Letter::try_new))
                .filter(|&l| alphabet.contains(l))
                .ok_or_else(|| bad("unknown letter"))?;
            let w = match wt.split_once('/') {
                Some((a, b)) => {
                    let (a, b): (BigInt, BigInt) = (
                        a.parse().map_err(|_| bad("bad numerator"))?,
                        b.parse().map_err(|_| bad("bad denominator"))?,
                    );
                    if b.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    BigRational::new(a, b)
                }
                None => BigRational::from_integer(wt.parse().map_err(|_| bad("bad weight"))?),
            };
            items.push((letter, w));
        }
        Weighting::new(items)
    }
}

struct Envelope<'a> {
    mu: &'a Weighting,
    dir: Direction,
    /// Keep stars whose extremal words all weigh zero; otherwise a lower
    /// star becomes `ε`. Disabled for the plain length envelopes, where
    /// only `ε` has length zero.
    keep_zero_stars: bool,
    memo: HashMap<usize, (Expr, BigRational)>,
}

impl Envelope<'_> {
    fn run(&mut self, e: &Expr) -> Result<(Expr, BigRational)> {
        if let Some(v) = self.memo.get(&e.node_id()) {
            return Ok(v.clone());
        }
        let out = match e.kind() {
            ExprKind::Letter(l) => (e.clone(), self.mu.get(*l)?.clone()),
            ExprKind::Epsilon => (e.clone(), BigRational::zero()),
            ExprKind::Union(a, b) => {
                let (x, wx) = self.run(a)?;
                let (y, wy) = self.run(b)?;
                let keep_left = match (wx.cmp(&wy), self.dir) {
                    (Ordering::Equal, _) => None,
                    (Ordering::Less, Direction::Lower) | (Ordering::Greater, Direction::Higher) => Some(true),
                    _ => Some(false),
                };
                match keep_left {
                    Some(true) => (x, wx),
                    Some(false) => (y, wy),
                    None if x.ptr_eq(a) && y.ptr_eq(b) => (e.clone(), wx),
                    None => (Expr::union(x, y), wx),
                }
            }
            ExprKind::Concat(a, b) => {
                let (x, wx) = self.run(a)?;
                let (y, wy) = self.run(b)?;
                let ex = if x.ptr_eq(a) && y.ptr_eq(b) {
                    e.clone()
                } else {
                    Expr::concat(x, y)
                };
                (ex, wx + wy)
            }
            ExprKind::Star(t) => {
                // Every word of T* is a product of words of T and weights
                // are nonnegative, so the zero-weight words of T* are the
                // star of the zero-weight words of T.
                let (x, w) = self.run(t)?;
                let zero = w.is_zero() && x.max_letter() > 0 && self.keep_zero_stars;
                match self.dir {
                    Direction::Lower if zero => (if x.ptr_eq(t) { e.clone() } else { Expr::star(x) }, w),
                    Direction::Lower => (Expr::epsilon(), BigRational::zero()),
                    Direction::Higher if w.is_zero() => (if x.ptr_eq(t) { e.clone() } else { Expr::star(x) }, w),
                    Direction::Higher => {
                        return Err(Error::StarPresent(
                            "a star over words of positive weight has no heaviest words",
                        ))
                    }
                }
            }
        };
        self.memo.insert(e.node_id(), out.clone());
        Ok(out)
    }
}

fn envelope(e: &Expr, mu: &Weighting, dir: Direction, keep_zero_stars: bool) -> Result<Expr> {
    let mut env = Envelope {
        mu,
        dir,
        keep_zero_stars,
        memo: HashMap::new(),
    };
    let r = env.run(e)?.0;
    debug_assert!(r.rpn() <= e.rpn());
    Ok(r)
}

/// The longest words of a finite language.
pub fn higher_envelope(e: &Expr) -> Result<Expr> {
    if e.has_star() {
        return Err(Error::StarPresent("the higher envelope needs a finite language"));
    }
    envelope(e, &Weighting::uniform(e.max_letter()), Direction::Higher, false)
}

/// The shortest words; stars are first replaced by `ε`.
pub fn lower_envelope(e: &Expr) -> Result<Expr> {
    envelope(e, &Weighting::uniform(e.max_letter()), Direction::Lower, false)
}

/// The words of minimal or maximal weight. In the lower direction stars
/// whose lightest words weigh zero are kept (restricted to those words);
/// the result may then be infinite. In the higher direction only stars over
/// zero-weight words are allowed.
pub fn mu_envelope(e: &Expr, mu: &Weighting, dir: Direction) -> Result<Expr> {
    envelope(e, mu, dir, true)
}
