//! Explicit language families: generators, exact counts and set operations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::expr::{Alphabet, Expr, Language, Letter, Word, DEFAULT_WORD_CAP, ONE, ZERO};
use crate::{Error, Result};

/// A member of one of the explicit language families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    /// `{w ∈ {0,1}^n : |w|_1 = k}`.
    Binomial { n: usize, k: usize },
    /// `{w ∈ {0,1}^n : |w|_1 ≥ k}`.
    Threshold { n: usize, k: usize },
    /// Dyck words of length `two_n`, with `0` opening and `1` closing.
    Dyck { two_n: usize },
    /// `n`-bit binary numbers (most significant bit first) divisible by `p`.
    Divisibility { n: usize, p: u64 },
    /// Words of length `n` over `[k]` with every letter occurring evenly often.
    Parity { n: usize, k: u32 },
    /// Words over `[n]` using every letter exactly once.
    Permutation { n: usize },
    /// Palindromes `w·reverse(w)` of length `two_n` over `{0,1}`.
    Palindrome { two_n: usize },
    /// `{w ∈ {0,1}^n : |w|_1 even}`.
    Xor { n: usize },
}

impl FamilySpec {
    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            FamilySpec::Binomial { n, k } | FamilySpec::Threshold { n, k } if k > n => {
                bad(format!("{}: k = {k} exceeds n = {n}", self.name()))
            }
            FamilySpec::Dyck { two_n } | FamilySpec::Palindrome { two_n } if two_n % 2 == 1 => {
                bad(format!("{}: length {two_n} must be even", self.name()))
            }
            FamilySpec::Divisibility { p: 0, .. } => bad("div: p must be positive".into()),
            FamilySpec::Parity { k: 0, .. } => bad("parity: k must be at least 1".into()),
            FamilySpec::Parity { k, .. } if k > 31 => bad("parity: k must be at most 31".into()),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Binomial { .. } => "binomial",
            FamilySpec::Threshold { .. } => "threshold",
            FamilySpec::Dyck { .. } => "dyck",
            FamilySpec::Divisibility { .. } => "div",
            FamilySpec::Parity { .. } => "parity",
            FamilySpec::Permutation { .. } => "perm",
            FamilySpec::Palindrome { .. } => "palindrome",
            FamilySpec::Xor { .. } => "xor",
        }
    }

    /// Length shared by every word of the family.
    pub fn word_len(&self) -> usize {
        match *self {
            FamilySpec::Binomial { n, .. }
            | FamilySpec::Threshold { n, .. }
            | FamilySpec::Divisibility { n, .. }
            | FamilySpec::Parity { n, .. }
            | FamilySpec::Permutation { n }
            | FamilySpec::Xor { n } => n,
            FamilySpec::Dyck { two_n } | FamilySpec::Palindrome { two_n } => two_n,
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        match *self {
            FamilySpec::Parity { k, .. } => k,
            FamilySpec::Permutation { n } => n.max(1) as u32,
            _ => 2,
        }
    }

    /// Alphabet with display names suited to the family.
    pub fn alphabet(&self) -> Alphabet {
        match self {
            FamilySpec::Parity { .. } | FamilySpec::Permutation { .. } => Alphabet::numbered(self.alphabet_size()),
            _ => Alphabet::binary(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Binomial { n, k } => write!(f, "binomial:n={n},k={k}"),
            FamilySpec::Threshold { n, k } => write!(f, "threshold:n={n},k={k}"),
            FamilySpec::Dyck { two_n } => write!(f, "dyck:2n={two_n}"),
            FamilySpec::Divisibility { n, p } => write!(f, "div:n={n},p={p}"),
            FamilySpec::Parity { n, k } => write!(f, "parity:n={n},k={k}"),
            FamilySpec::Permutation { n } => write!(f, "perm:n={n}"),
            FamilySpec::Palindrome { two_n } => write!(f, "palindrome:2n={two_n}"),
            FamilySpec::Xor { n } => write!(f, "xor:n={n}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Accepts `name:key=value,...` (for example `div:n=8,p=5`, `dyck:2n=6`)
    /// and the positional form `name:v1,v2` (`div:8,5`, `perm:3`).
    fn from_str(s: &str) -> Result<FamilySpec> {
        let bad = |m: &str| Error::InvalidParameter(format!("family spec {s:?}: {m}"));
        let (name, args) = s.split_once(':').ok_or_else(|| bad("expected name:params"))?;
        let mut keyed: Vec<(String, u64)> = Vec::new();
        let mut positional: Vec<u64> = Vec::new();
        for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => {
                    let v = v.trim().parse().map_err(|_| bad("parameter values must be integers"))?;
                    keyed.push((k.trim().to_ascii_lowercase(), v));
                }
                None => positional.push(part.parse().map_err(|_| bad("parameter values must be integers"))?),
            }
        }
        if !keyed.is_empty() && !positional.is_empty() {
            return Err(bad("mixes keyed and positional parameters"));
        }
        let name = name.trim().to_ascii_lowercase();
        let keys: &[&str] = match name.as_str() {
            "binomial" | "threshold" => &["n", "k"],
            "parity" | "even" => &["n", "k"],
            "div" | "divisibility" => &["n", "p"],
            "dyck" | "palindrome" | "palin" => &["2n"],
            "perm" | "permutation" | "xor" => &["n"],
            _ => return Err(Error::UnsupportedFamily(name)),
        };
        let values: Vec<u64> = if positional.is_empty() {
            for (k, _) in &keyed {
                if !keys.contains(&k.as_str()) {
                    return Err(bad(&format!("unknown parameter {k:?}")));
                }
            }
            keys.iter()
                .map(|key| {
                    keyed
                        .iter()
                        .find(|(k, _)| k == key)
                        .map(|&(_, v)| v)
                        .ok_or_else(|| bad(&format!("missing parameter {key:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            positional
        };
        if values.len() != keys.len() {
            return Err(bad(&format!("expected {} parameter(s)", keys.len())));
        }
        let u = |i: usize| values[i] as usize;
        let spec = match name.as_str() {
            "binomial" => FamilySpec::Binomial { n: u(0), k: u(1) },
            "threshold" => FamilySpec::Threshold { n: u(0), k: u(1) },
            "parity" | "even" => FamilySpec::Parity {
                n: u(0),
                k: u32::try_from(values[1]).map_err(|_| bad("k too large"))?,
            },
            "div" | "divisibility" => FamilySpec::Divisibility { n: u(0), p: values[1] },
            "dyck" => FamilySpec::Dyck { two_n: u(0) },
            "palindrome" | "palin" => FamilySpec::Palindrome { two_n: u(0) },
            "perm" | "permutation" => FamilySpec::Permutation { n: u(0) },
            _ => FamilySpec::Xor { n: u(0) },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// An exact family size together with the closed form that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactCount {
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub value: BigUint,
    pub formula: &'static str,
}

/// Exact number of words of the family, without enumeration.
pub fn count(spec: &FamilySpec) -> ExactCount {
    let b = |n: usize, k: usize| binomial(BigUint::from(n), BigUint::from(k));
    let (value, formula) = match *spec {
        FamilySpec::Binomial { n, k } => (b(n, k), "C(n,k)"),
        FamilySpec::Threshold { n, k } => ((k..=n).map(|j| b(n, j)).sum(), "sum_{j>=k} C(n,j)"),
        FamilySpec::Dyck { two_n } => {
            let n = two_n / 2;
            (b(two_n, n) / BigUint::from(n + 1), "C(2n,n)/(n+1)")
        }
        FamilySpec::Divisibility { n, p } => {
            let top = (BigUint::one() << n) - BigUint::one();
            (top / BigUint::from(p) + BigUint::one(), "floor((2^n-1)/p)+1")
        }
        FamilySpec::Parity { n, k } => {
            let p0 = hypercube_prob(n, k, &vec![false; k as usize]);
            let total = BigRational::from_integer(BigInt::from(k).pow(n as u32));
            let v = total * p0;
            debug_assert!(v.is_integer());
            (v.to_integer().to_biguint().unwrap_or_default(), "k^n * p_0")
        }
        FamilySpec::Permutation { n } => ((1..=n).map(BigUint::from).product(), "n!"),
        FamilySpec::Palindrome { two_n } => (BigUint::one() << (two_n / 2), "2^n"),
        FamilySpec::Xor { n } => {
            let v = if n == 0 {
                BigUint::one()
            } else {
                BigUint::one() << (n - 1)
            };
            (v, "2^(n-1)")
        }
    };
    ExactCount { value, formula }
}

/// Probability that a uniformly random walk of `n` steps on the hypercube
/// `{0,1}^k`, started at the origin and flipping one uniformly chosen bit
/// per step, ends at `q`. Exact.
pub fn hypercube_prob(n: usize, k: u32, q: &[bool]) -> BigRational {
    assert_eq!(q.len(), k as usize, "state vector must have k bits");
    let w = q.iter().filter(|&&b| b).count() as i64;
    let ki = k as i64;
    let c = |a: i64, b: i64| -> BigInt {
        if b < 0 || b > a {
            BigInt::zero()
        } else {
            binomial(BigInt::from(a), BigInt::from(b))
        }
    };
    let mut sum = BigRational::zero();
    for j in 0..=ki {
        let mut z = BigInt::zero();
        for i in 0..=w {
            let term = c(w, i) * c(ki - w, j - i);
            if i % 2 == 0 {
                z += term;
            } else {
                z -= term;
            }
        }
        if z.is_zero() {
            continue;
        }
        let base = BigRational::new(BigInt::from(ki - 2 * j), BigInt::from(ki));
        sum += num_traits::pow(base, n) * BigRational::from_integer(z);
    }
    sum / BigRational::from_integer(BigInt::one() << k)
}

/// Enumerates the family with the default word cap.
pub fn generate(spec: &FamilySpec) -> Result<Language> {
    generate_capped(spec, DEFAULT_WORD_CAP)
}

/// Enumerates the family, refusing when it has more than `cap` words.
pub fn generate_capped(spec: &FamilySpec, cap: usize) -> Result<Language> {
    spec.validate()?;
    if count(spec).value > BigUint::from(cap) {
        return Err(Error::budget("words in a generated family", cap));
    }
    let mut words = BTreeSet::new();
    match *spec {
        FamilySpec::Binomial { n, k } => weight_words(n, k, k, &mut words),
        FamilySpec::Threshold { n, k } => weight_words(n, k, n, &mut words),
        FamilySpec::Xor { n } => {
            for j in (0..=n).step_by(2) {
                weight_words(n, j, j, &mut words);
            }
        }
        FamilySpec::Dyck { two_n } => dyck(&mut Vec::new(), two_n, 0, &mut words),
        FamilySpec::Divisibility { n, p } => {
            let mut r: u128 = 0;
            let limit: u128 = 1u128 << n;
            while r < limit {
                words.insert((0..n).rev().map(|i| if r >> i & 1 == 1 { ONE } else { ZERO }).collect());
                r += p as u128;
            }
        }
        FamilySpec::Parity { n, k } => parity(&mut Vec::new(), n, k, 0, &mut words),
        FamilySpec::Permutation { n } => {
            let mut w: Word = (1..=n as u32).map(Letter::new).collect();
            loop {
                words.insert(w.clone());
                if !next_permutation(&mut w) {
                    break;
                }
            }
        }
        FamilySpec::Palindrome { two_n } => {
            for mut w in all_words(2, two_n / 2) {
                let back: Vec<Letter> = w.iter().rev().copied().collect();
                w.extend(back);
                words.insert(w);
            }
        }
    }
    Ok(Language::from_set(spec.alphabet_size(), words))
}

fn weight_words(n: usize, lo: usize, hi: usize, out: &mut BTreeSet<Word>) {
    fn rec(w: &mut Word, n: usize, ones: usize, lo: usize, hi: usize, out: &mut BTreeSet<Word>) {
        let rest = n - w.len();
        if ones > hi || ones + rest < lo {
            return;
        }
        if rest == 0 {
            out.insert(w.clone());
            return;
        }
        for (a, add) in [(ZERO, 0), (ONE, 1)] {
            w.push(a);
            rec(w, n, ones + add, lo, hi, out);
            w.pop();
        }
    }
    rec(&mut Vec::new(), n, 0, lo, hi, out);
}

fn dyck(w: &mut Word, len: usize, height: usize, out: &mut BTreeSet<Word>) {
    let rest = len - w.len();
    if height > rest {
        return;
    }
    if rest == 0 {
        out.insert(w.clone());
        return;
    }
    w.push(ZERO);
    dyck(w, len, height + 1, out);
    w.pop();
    if height > 0 {
        w.push(ONE);
        dyck(w, len, height - 1, out);
        w.pop();
    }
}

fn parity(w: &mut Word, n: usize, k: u32, odd: u32, out: &mut BTreeSet<Word>) {
    let rest = n - w.len();
    let odd_count = odd.count_ones() as usize;
    if odd_count > rest || (rest - odd_count) % 2 == 1 {
        return;
    }
    if rest == 0 {
        out.insert(w.clone());
        return;
    }
    for a in 1..=k {
        w.push(Letter::new(a));
        parity(w, n, k, odd ^ (1 << (a - 1)), out);
        w.pop();
    }
}

fn next_permutation(w: &mut [Letter]) -> bool {
    let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
        return false;
    };
    let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).expect("successor exists");
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// All `k^n` words of length `n` over `[k]`, in lexicographic order.
pub fn all_words(k: u32, n: usize) -> impl Iterator<Item = Word> {
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut idx| {
        let mut w = vec![Letter::new(1); n];
        for slot in w.iter_mut().rev() {
            *slot = Letter::new((idx % k as u128) as u32 + 1);
            idx /= k as u128;
        }
        w
    })
}

/// `Σ^n` as a language.
pub fn full_language(k: u32, n: usize) -> Language {
    Language::from_set(k, all_words(k, n).collect())
}

pub fn union(l1: &Language, l2: &Language) -> Language {
    let words = l1.words().union(l2.words()).cloned().collect();
    Language::from_set(l1.alphabet_size().max(l2.alphabet_size()), words)
}

pub fn intersect(l1: &Language, l2: &Language) -> Language {
    let words = l1.words().intersection(l2.words()).cloned().collect();
    Language::from_set(l1.alphabet_size().max(l2.alphabet_size()), words)
}

/// Words of `l` of length exactly `n`.
pub fn n_slice(l: &Language, n: usize) -> Language {
    let words = l.iter().filter(|w| w.len() == n).cloned().collect();
    Language::from_set(l.alphabet_size(), words)
}

/// Concatenation `l1·l2`.
pub fn concat(l1: &Language, l2: &Language, cap: usize) -> Result<Language> {
    let mut words = BTreeSet::new();
    for u in l1.iter() {
        for v in l2.iter() {
            let mut w = u.clone();
            w.extend_from_slice(v);
            words.insert(w);
        }
        if words.len() > cap {
            return Err(Error::budget("words in a concatenation", cap));
        }
    }
    Ok(Language::from_set(l1.alphabet_size().max(l2.alphabet_size()), words))
}

/// All interleavings of words of `l1` with words of `l2`.
pub fn shuffle(l1: &Language, l2: &Language, cap: usize) -> Result<Language> {
    let mut words = BTreeSet::new();
    for v in l1.iter() {
        for w in l2.iter() {
            interleave(v, w, &mut Vec::new(), &mut words);
            if words.len() > cap {
                return Err(Error::budget("words in a shuffle", cap));
            }
        }
    }
    Ok(Language::from_set(l1.alphabet_size().max(l2.alphabet_size()), words))
}

fn interleave(v: &[Letter], w: &[Letter], acc: &mut Word, out: &mut BTreeSet<Word>) {
    match (v.split_first(), w.split_first()) {
        (None, _) => {
            let mut x = acc.clone();
            x.extend_from_slice(w);
            out.insert(x);
        }
        (_, None) => {
            let mut x = acc.clone();
            x.extend_from_slice(v);
            out.insert(x);
        }
        (Some((&a, vr)), Some((&b, wr))) => {
            acc.push(a);
            interleave(vr, w, acc, out);
            acc.pop();
            acc.push(b);
            interleave(v, wr, acc, out);
            acc.pop();
        }
    }
}

/// Expressions of linear size whose intersection is `binomial(2m, m)`:
/// `(0+ε)^m (1(0+ε)^m)^m` and `(0+1)^{2m}`.
pub fn intersection_witness(m: usize) -> (Expr, Expr) {
    let zero = Expr::letter(ZERO);
    let one = Expr::letter(ONE);
    let opt0 = || Expr::union(zero.clone(), Expr::epsilon());
    let block = || Expr::concat_all(std::iter::repeat_with(opt0).take(m));
    let l1 = Expr::concat_all(std::iter::once(block()).chain((0..m).map(|_| Expr::concat(one.clone(), block()))));
    let l2 = Expr::concat_all((0..2 * m).map(|_| Expr::union(zero.clone(), one.clone())));
    (l1, l2)
}

/// `a^n` as an expression (`ε` for `n = 0`).
pub fn power_word(a: Letter, n: usize) -> Expr {
    Expr::word(&vec![a; n])
}

/// Checks the Dyck property of a binary word.
pub fn is_dyck(w: &[Letter]) -> bool {
    let mut h: i64 = 0;
    for &a in w {
        h += if a == ZERO { 1 } else { -1 };
        if h < 0 {
            return false;
        }
    }
    h == 0
}

/// `|L|` as a float, saturating.
pub fn count_f64(spec: &FamilySpec) -> f64 {
    count(spec).value.to_f64().unwrap_or(f64::INFINITY)
}
