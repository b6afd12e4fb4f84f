//! From homogeneous binary expressions to monotone arithmetic formulas,
//! boolean evaluation and position permutations.

mod arith;

pub use arith::{ArithFormula, ArithKind, ProducedSet};

use std::collections::BTreeSet;

use crate::expr::{Expr, ExprKind, Language, Letter, ONE, ZERO};
use crate::{Error, Result};

/// An `ε`-free homogeneous expression together with the position of each
/// leaf, listed in left-to-right leaf order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionMap {
    /// The normalised expression the positions refer to.
    pub expr: Expr,
    pub degree: usize,
    pub leaves: Vec<(Letter, usize)>,
}

/// Deletes degree-0 operands of concatenations. The input must be
/// homogeneous, star-free and of positive degree.
pub fn eliminate_epsilon(expr: &Expr) -> Result<Expr> {
    if expr.has_star() {
        return Err(Error::StarPresent(
            "positions are defined only for star-free expressions",
        ));
    }
    match expr.degree() {
        None => Err(Error::NotHomogeneous),
        Some(0) => Err(Error::EpsilonInput),
        Some(_) => Ok(strip(expr)),
    }
}

fn strip(e: &Expr) -> Expr {
    match e.kind() {
        ExprKind::Letter(_) | ExprKind::Epsilon | ExprKind::Star(_) => e.clone(),
        ExprKind::Union(a, b) => {
            let (sa, sb) = (strip(a), strip(b));
            if sa.ptr_eq(a) && sb.ptr_eq(b) {
                e.clone()
            } else {
                Expr::union(sa, sb)
            }
        }
        ExprKind::Concat(a, b) => {
            if a.degree() == Some(0) {
                strip(b)
            } else if b.degree() == Some(0) {
                strip(a)
            } else {
                let (sa, sb) = (strip(a), strip(b));
                if sa.ptr_eq(a) && sb.ptr_eq(b) {
                    e.clone()
                } else {
                    Expr::concat(sa, sb)
                }
            }
        }
    }
}

/// Position of every leaf: one plus the degree of everything concatenated
/// to its left on the path from the root.
pub fn positions(expr: &Expr) -> Result<PositionMap> {
    let e = eliminate_epsilon(expr)?;
    let mut leaves = Vec::new();
    walk_positions(&e, 1, &mut |l, p| leaves.push((l, p)));
    Ok(PositionMap {
        degree: e.degree().expect("homogeneous"),
        expr: e,
        leaves,
    })
}

fn walk_positions(e: &Expr, offset: usize, f: &mut dyn FnMut(Letter, usize)) {
    match e.kind() {
        ExprKind::Letter(l) => f(*l, offset),
        ExprKind::Epsilon | ExprKind::Star(_) => {}
        ExprKind::Union(a, b) => {
            walk_positions(a, offset, f);
            walk_positions(b, offset, f);
        }
        ExprKind::Concat(a, b) => {
            walk_positions(a, offset, f);
            walk_positions(b, offset + a.degree().unwrap_or(0), f);
        }
    }
}

fn check_binary(e: &Expr) -> Result<()> {
    match e.letters_in_order().into_iter().find(|l| l.id() > 2) {
        Some(l) => Err(Error::NonBinaryLetter(l.id())),
        None => Ok(()),
    }
}

/// The arithmetic version: `0 ↦ 1`, `1` at position `i ↦ x_i`,
/// union `↦ +`, concatenation `↦ ×`.
pub fn arithmetic_version(expr: &Expr) -> Result<ArithFormula> {
    check_binary(expr)?;
    let pm = positions(expr)?;
    let one = ArithFormula::one();
    Ok(arith_of(&pm.expr, 1, &one))
}

fn arith_of(e: &Expr, offset: usize, one: &ArithFormula) -> ArithFormula {
    match e.kind() {
        ExprKind::Letter(l) if *l == ZERO => one.clone(),
        ExprKind::Letter(_) => ArithFormula::var(offset),
        ExprKind::Epsilon | ExprKind::Star(_) => unreachable!("normalised away"),
        ExprKind::Union(a, b) => ArithFormula::add(arith_of(a, offset, one), arith_of(b, offset, one)),
        ExprKind::Concat(a, b) => ArithFormula::mul(
            arith_of(a, offset, one),
            arith_of(b, offset + a.degree().unwrap_or(0), one),
        ),
    }
}

/// Characteristic function of the language of a homogeneous binary
/// expression: unions become OR, concatenations AND, and a leaf at
/// position `i` tests `x_i`.
pub fn boolean_eval(expr: &Expr, assignment: &[bool]) -> Result<bool> {
    check_binary(expr)?;
    let pm = positions(expr)?;
    if assignment.len() != pm.degree {
        return Err(Error::invalid(format!(
            "assignment has length {}, expression has degree {}",
            assignment.len(),
            pm.degree
        )));
    }
    Ok(eval(&pm.expr, 0, assignment))
}

fn eval(e: &Expr, offset: usize, x: &[bool]) -> bool {
    match e.kind() {
        ExprKind::Letter(l) => x[offset] == (*l == ONE),
        ExprKind::Epsilon | ExprKind::Star(_) => true,
        ExprKind::Union(a, b) => eval(a, offset, x) || eval(b, offset, x),
        ExprKind::Concat(a, b) => eval(a, offset, x) && eval(b, offset + a.degree().unwrap_or(0), x),
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let seen: BTreeSet<usize> = sigma.iter().copied().collect();
    if sigma.len() != n || seen.len() != n || seen.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::invalid(format!("not a permutation of 1..={n}")));
    }
    Ok(())
}

/// `σ(L) = { w_{σ(1)} ⋯ w_{σ(n)} : w ∈ L }` with `sigma[i - 1] = σ(i)` 1-based.
pub fn permute_language(l: &Language, sigma: &[usize]) -> Result<Language> {
    let n = match l.degree() {
        Some(n) => n,
        None if l.is_empty() => return Ok(l.clone()),
        None => return Err(Error::NotHomogeneous),
    };
    check_permutation(sigma, n)?;
    Ok(l.iter()
        .map(|w| sigma.iter().map(|&i| w[i - 1]).collect())
        .collect::<Language>()
        .with_alphabet_size(l.alphabet_size()))
}

/// The reordering `1, 2n, 2, 2n−1, …, n, n+1` pairing each position with its
/// mirror image.
pub fn mirror_interleaving(two_n: usize) -> Vec<usize> {
    let n = two_n / 2;
    (1..=n).flat_map(|i| [i, two_n + 1 - i]).collect()
}
