//! Monotone arithmetic formulas and their produced sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithKind {
    /// The variable `x_i`, `i ≥ 1`.
    Var(usize),
    Const(u64),
    Add(ArithFormula, ArithFormula),
    Mul(ArithFormula, ArithFormula),
}

#[derive(Debug, PartialEq, Eq)]
struct ArithNode {
    kind: ArithKind,
    size: u64,
    max_var: usize,
}

/// A monotone arithmetic formula over `x_1 … x_n` with nonnegative integer
/// constants. Subformulas may be shared; `size` counts the expanded tree.
#[derive(Clone, PartialEq, Eq)]
pub struct ArithFormula(Arc<ArithNode>);

// `add` and `mul` build nodes; they are constructors, not operators.
#[allow(clippy::should_implement_trait)]
impl ArithFormula {
    fn from_kind(kind: ArithKind) -> ArithFormula {
        let (size, max_var) = match &kind {
            ArithKind::Var(i) => (1, *i),
            ArithKind::Const(_) => (1, 0),
            ArithKind::Add(a, b) | ArithKind::Mul(a, b) => (
                a.size().saturating_add(b.size()).saturating_add(1),
                a.max_var().max(b.max_var()),
            ),
        };
        ArithFormula(Arc::new(ArithNode { kind, size, max_var }))
    }

    pub fn var(i: usize) -> ArithFormula {
        assert!(i >= 1, "variables are numbered from 1");
        ArithFormula::from_kind(ArithKind::Var(i))
    }

    pub fn constant(c: u64) -> ArithFormula {
        ArithFormula::from_kind(ArithKind::Const(c))
    }

    pub fn one() -> ArithFormula {
        ArithFormula::constant(1)
    }

    pub fn add(a: ArithFormula, b: ArithFormula) -> ArithFormula {
        ArithFormula::from_kind(ArithKind::Add(a, b))
    }

    pub fn mul(a: ArithFormula, b: ArithFormula) -> ArithFormula {
        ArithFormula::from_kind(ArithKind::Mul(a, b))
    }

    pub fn kind(&self) -> &ArithKind {
        &self.0.kind
    }

    /// Number of nodes.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Largest variable index, `0` for a constant formula.
    pub fn max_var(&self) -> usize {
        self.0.max_var
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Replaces every variable `x_i` by `x_{σ(i)}`, with `sigma[i - 1] = σ(i)`
    /// given 1-based.
    pub fn rename_vars(&self, sigma: &[usize]) -> ArithFormula {
        match self.kind() {
            ArithKind::Var(i) => ArithFormula::var(sigma[*i - 1]),
            ArithKind::Const(_) => self.clone(),
            ArithKind::Add(a, b) => ArithFormula::add(a.rename_vars(sigma), b.rename_vars(sigma)),
            ArithKind::Mul(a, b) => ArithFormula::mul(a.rename_vars(sigma), b.rename_vars(sigma)),
        }
    }

    /// Fully parenthesised text that parses back to the same tree.
    pub fn to_plain(&self) -> String {
        let mut s = String::new();
        self.write_plain(&mut s);
        s
    }

    fn write_plain(&self, out: &mut String) {
        match self.kind() {
            ArithKind::Var(i) => out.push_str(&format!("x{i}")),
            ArithKind::Const(c) => out.push_str(&c.to_string()),
            ArithKind::Add(a, b) | ArithKind::Mul(a, b) => {
                let op = if matches!(self.kind(), ArithKind::Add(..)) {
                    '+'
                } else {
                    '*'
                };
                out.push('(');
                a.write_plain(out);
                out.push(op);
                b.write_plain(out);
                out.push(')');
            }
        }
    }

    /// Exponent vectors with coefficients, over `nvars` variables
    /// (at least [`ArithFormula::max_var`]).
    pub fn produced_set(&self, nvars: usize, cap: usize) -> Result<ProducedSet> {
        let n = nvars.max(self.max_var());
        let mut memo = HashMap::new();
        let terms = produce(self, n, cap, &mut memo)?;
        Ok(ProducedSet {
            nvars: n,
            terms: (*terms).clone(),
        })
    }
}

type Terms = BTreeMap<Vec<u32>, BigUint>;

fn produce(f: &ArithFormula, n: usize, cap: usize, memo: &mut HashMap<usize, Arc<Terms>>) -> Result<Arc<Terms>> {
    if let Some(t) = memo.get(&f.id()) {
        return Ok(t.clone());
    }
    let t: Terms = match f.kind() {
        ArithKind::Var(i) => {
            let mut v = vec![0; n];
            v[*i - 1] = 1;
            BTreeMap::from([(v, BigUint::one())])
        }
        ArithKind::Const(0) => BTreeMap::new(),
        ArithKind::Const(c) => BTreeMap::from([(vec![0; n], BigUint::from(*c))]),
        ArithKind::Add(a, b) => {
            let mut t = (*produce(a, n, cap, memo)?).clone();
            for (v, c) in produce(b, n, cap, memo)?.iter() {
                *t.entry(v.clone()).or_insert_with(BigUint::zero) += c;
            }
            t
        }
        ArithKind::Mul(a, b) => {
            let ta = produce(a, n, cap, memo)?;
            let tb = produce(b, n, cap, memo)?;
            let mut t = Terms::new();
            for (u, cu) in ta.iter() {
                for (v, cv) in tb.iter() {
                    let w: Vec<u32> = u.iter().zip(v).map(|(x, y)| x + y).collect();
                    *t.entry(w).or_insert_with(BigUint::zero) += cu * cv;
                }
                if t.len() > cap {
                    return Err(Error::budget("terms of a produced set", cap));
                }
            }
            t
        }
    };
    if t.len() > cap {
        return Err(Error::budget("terms of a produced set", cap));
    }
    let t = Arc::new(t);
    memo.insert(f.id(), t.clone());
    Ok(t)
}

impl fmt::Debug for ArithFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

/// Infix text with `×1` factors dropped, e.g. `1 + x2*x3 + x1`.
impl fmt::Display for ArithFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_pretty(self, false, &mut s);
        f.write_str(&s)
    }
}

fn is_one(f: &ArithFormula) -> bool {
    match f.kind() {
        ArithKind::Const(1) => true,
        ArithKind::Mul(a, b) => is_one(a) && is_one(b),
        _ => false,
    }
}

fn write_pretty(f: &ArithFormula, in_product: bool, out: &mut String) {
    match f.kind() {
        ArithKind::Var(i) => out.push_str(&format!("x{i}")),
        ArithKind::Const(c) => out.push_str(&c.to_string()),
        ArithKind::Add(a, b) => {
            if in_product {
                out.push('(');
            }
            write_pretty(a, false, out);
            out.push_str(" + ");
            write_pretty(b, false, out);
            if in_product {
                out.push(')');
            }
        }
        ArithKind::Mul(a, b) => match (is_one(a), is_one(b)) {
            (true, true) => out.push('1'),
            (true, false) => write_pretty(b, in_product, out),
            (false, true) => write_pretty(a, in_product, out),
            (false, false) => {
                write_pretty(a, true, out);
                out.push('*');
                write_pretty(b, true, out);
            }
        },
    }
}

impl FromStr for ArithFormula {
    type Err = Error;

    /// Parses `+`, `*` (or `×`), parentheses, variables `x1 … xn` and
    /// nonnegative integer constants. Both operators associate to the left.
    fn from_str(s: &str) -> Result<ArithFormula> {
        let mut p = ArithParser { s, pos: 0 };
        let f = p.sum()?;
        p.ws();
        if p.pos < s.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(f)
    }
}

struct ArithParser<'a> {
    s: &'a str,
    pos: usize,
}

impl ArithParser<'_> {
    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn err(&self, m: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: m.to_string(),
        }
    }

    fn sum(&mut self) -> Result<ArithFormula> {
        let mut acc = self.product()?;
        loop {
            self.ws();
            if self.peek() != Some('+') {
                return Ok(acc);
            }
            self.pos += 1;
            acc = ArithFormula::add(acc, self.product()?);
        }
    }

    fn product(&mut self) -> Result<ArithFormula> {
        let mut acc = self.atom()?;
        loop {
            self.ws();
            match self.peek() {
                Some(c @ ('*' | '×')) => {
                    self.pos += c.len_utf8();
                    acc = ArithFormula::mul(acc, self.atom()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos].parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "expected a number".into(),
        })
    }

    fn atom(&mut self) -> Result<ArithFormula> {
        self.ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let f = self.sum()?;
                self.ws();
                if self.peek() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                match self.number()? {
                    0 => Err(Error::Syntax {
                        offset: start,
                        message: "variables are numbered from 1".into(),
                    }),
                    i => Ok(ArithFormula::var(i as usize)),
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(ArithFormula::constant(self.number()?)),
            _ => Err(self.err("expected a variable, constant or '('")),
        }
    }
}

/// Exponent vectors of a polynomial with their (positive) coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProducedSet {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigUint>,
}

impl ProducedSet {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.keys()
    }

    pub fn coefficient(&self, v: &[u32]) -> BigUint {
        self.terms.get(v).cloned().unwrap_or_default()
    }

    /// True when every exponent is 0 or 1.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|v| v.iter().all(|&e| e <= 1))
    }

    /// Moves the exponent of variable `i` to variable `σ(i)`, with
    /// `sigma[i - 1] = σ(i)` 1-based. This is the effect of
    /// [`ArithFormula::rename_vars`] on produced sets.
    pub fn reindex(&self, sigma: &[usize]) -> ProducedSet {
        let terms = self
            .terms
            .iter()
            .map(|(v, c)| {
                let mut w = vec![0; self.nvars];
                for (i, &e) in v.iter().enumerate() {
                    w[sigma[i] - 1] = e;
                }
                (w, c.clone())
            })
            .collect();
        ProducedSet {
            nvars: self.nvars,
            terms,
        }
    }

    /// One line per vector: the exponents followed by the coefficient.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, c) in &self.terms {
            let e: Vec<String> = v.iter().map(u32::to_string).collect();
            s.push_str(&format!("({}) {c}\n", e.join(",")));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> ArithFormula {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let g = f("(x3+x1)*(x2*x1) + (x1+x1)");
        assert_eq!(g.size(), 11);
        assert_eq!(f(&g.to_plain()), g);
        assert_eq!(g.to_plain(), "(((x3+x1)*(x2*x1))+(x1+x1))");
        assert!("x0".parse::<ArithFormula>().is_err());
        assert!("x1+".parse::<ArithFormula>().is_err());
    }

    #[test]
    fn duplicated_variable() {
        let p = f("x1 + x1").produced_set(1, 100).unwrap();
        assert_eq!(p.terms, BTreeMap::from([(vec![1], BigUint::from(2u32))]));
    }

    #[test]
    fn semiring_figure_polynomial() {
        let p = f("(x3+x1)*(x2*x1) + (x1+x1)").produced_set(3, 100).unwrap();
        let expected: BTreeMap<Vec<u32>, BigUint> = [(vec![1, 1, 1], 1u32), (vec![2, 1, 0], 1), (vec![1, 0, 0], 2)]
            .into_iter()
            .map(|(v, c)| (v, BigUint::from(c)))
            .collect();
        assert_eq!(p.terms, expected);
        assert!(!p.is_multilinear());
    }

    #[test]
    fn pretty_drops_unit_factors() {
        assert_eq!(f("(1*1)*1 + (1*x2)*x3 + (x1*1)*1").to_string(), "1 + x2*x3 + x1");
        assert_eq!(f("(1+x1)*(1+x2)").to_string(), "(1 + x1)*(1 + x2)");
    }

    #[test]
    fn renaming_moves_exponents() {
        let g = f("x1*x1 + x2*x3");
        let sigma = [3, 1, 2];
        let renamed = g.rename_vars(&sigma).produced_set(3, 100).unwrap();
        assert_eq!(renamed, g.produced_set(3, 100).unwrap().reindex(&sigma));
    }

    #[test]
    fn cap() {
        let g = f("(1+x1)*(1+x2)*(1+x3)");
        assert!(g.produced_set(3, 4).unwrap_err().is_budget());
        assert_eq!(f("0*x1").produced_set(1, 4).unwrap().len(), 0);
    }
}
