//! Log-product expressions: the predicate, decomposition of arbitrary
//! homogeneous expressions into unions of them, and their factorizations.
//!
//! An expression is log-product if it is a letter, or a concatenation
//! `B₁B₂` or `B₂B₁` in which `B₁` is log-product and `deg B₁ ≥ deg B₂`.

mod gamma;
mod maxsub;
mod perm;

pub use gamma::Gamma;
pub use maxsub::{max_logproduct_sublanguage, MaxSublanguage};
pub use perm::{h_perm, perm_logproduct_max, PermMax};

use std::collections::HashMap;

use serde::Serialize;

use crate::expr::{Expr, ExprKind};
use crate::{Error, Result};

/// Which child of a concatenation lies on the spine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpineStep {
    pub side: Side,
    pub log_degree: usize,
    pub sibling_degree: usize,
}

/// Witness that an expression is log-product: the spine from the root to a
/// letter, one step per concatenation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogProductCert {
    pub steps: Vec<SpineStep>,
}

impl LogProductCert {
    /// Checks the certificate against `expr` without trusting it.
    pub fn verify(&self, expr: &Expr) -> bool {
        let mut e = expr.clone();
        for s in &self.steps {
            let ExprKind::Concat(a, b) = e.kind() else { return false };
            let (main, sib) = match s.side {
                Side::Left => (a, b),
                Side::Right => (b, a),
            };
            if main.degree() != Some(s.log_degree)
                || sib.degree() != Some(s.sibling_degree)
                || s.log_degree < s.sibling_degree
            {
                return false;
            }
            e = main.clone();
        }
        e.is_letter()
    }
}

/// Ordered factors whose concatenation is equivalent to the source.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub factors: Vec<Expr>,
    /// Present for γ-factorizations.
    pub gamma_form: Option<GammaForm>,
}

/// `B ≡ P₁⋯P_m S_m⋯S₁`, stored with `prefixes[i] = P_{i+1}` and
/// `suffixes[i] = S_{i+1}`.
#[derive(Clone, Debug)]
pub struct GammaForm {
    pub prefixes: Vec<Expr>,
    pub suffixes: Vec<Expr>,
    pub degrees: Vec<(usize, usize)>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The concatenation of the factors in order.
    pub fn product(&self) -> Expr {
        Expr::concat_all(self.factors.iter().cloned())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree().unwrap_or(0)).collect()
    }
}

fn check_input(expr: &Expr) -> Result<usize> {
    if expr.has_star() {
        return Err(Error::StarPresent("log-product analysis needs a star-free expression"));
    }
    expr.degree().ok_or(Error::NotHomogeneous)
}

/// Memoised log-product test on the nodes of one expression.
#[derive(Default)]
struct Oracle {
    memo: HashMap<usize, bool>,
}

impl Oracle {
    fn is_lp(&mut self, e: &Expr) -> bool {
        if let Some(&v) = self.memo.get(&e.node_id()) {
            return v;
        }
        let v = self.spine_child(e).is_some();
        self.memo.insert(e.node_id(), v);
        v
    }

    /// For a log-product concatenation, the spine child, its side, and the
    /// sibling. A letter is log-product but has no child; it yields `None`
    /// here and is handled by the callers.
    fn step<'e>(&mut self, e: &'e Expr) -> Option<(Side, &'e Expr, &'e Expr)> {
        let ExprKind::Concat(a, b) = e.kind() else { return None };
        let (da, db) = (a.degree()?, b.degree()?);
        if da >= db && self.is_lp(a) {
            Some((Side::Left, a, b))
        } else if db >= da && self.is_lp(b) {
            Some((Side::Right, b, a))
        } else {
            None
        }
    }

    fn spine_child(&mut self, e: &Expr) -> Option<()> {
        if e.is_letter() {
            return Some(());
        }
        self.step(e).map(|_| ())
    }
}

/// Tests the definition, returning the canonical spine as certificate.
/// When both children qualify the left one is taken.
pub fn is_log_product(expr: &Expr) -> Result<Option<LogProductCert>> {
    check_input(expr)?;
    let mut o = Oracle::default();
    if !o.is_lp(expr) {
        return Ok(None);
    }
    let mut steps = Vec::new();
    let mut e = expr.clone();
    while let Some((side, main, sib)) = o.step(&e) {
        steps.push(SpineStep {
            side,
            log_degree: main.degree().unwrap_or(0),
            sibling_degree: sib.degree().unwrap_or(0),
        });
        e = main.clone();
    }
    Ok(Some(LogProductCert { steps }))
}

/// Writes a homogeneous expression of positive degree as a union of at
/// most `rpn(expr)` log-product expressions. A concatenation distributes the
/// decomposition of its larger-degree child (the left one on ties) over the
/// other child.
pub fn decompose(expr: &Expr) -> Result<Vec<Expr>> {
    if check_input(expr)? == 0 {
        return Err(Error::EpsilonInput);
    }
    let mut memo = HashMap::new();
    Ok(decomp(expr, &mut memo))
}

fn decomp(e: &Expr, memo: &mut HashMap<usize, Vec<Expr>>) -> Vec<Expr> {
    if let Some(v) = memo.get(&e.node_id()) {
        return v.clone();
    }
    let out = match e.kind() {
        ExprKind::Letter(_) => vec![e.clone()],
        ExprKind::Union(a, b) => {
            let mut v = decomp(a, memo);
            v.extend(decomp(b, memo));
            v
        }
        ExprKind::Concat(a, b) => {
            if a.degree() >= b.degree() {
                decomp(a, memo)
                    .into_iter()
                    .map(|x| Expr::concat(x, b.clone()))
                    .collect()
            } else {
                decomp(b, memo)
                    .into_iter()
                    .map(|x| Expr::concat(a.clone(), x))
                    .collect()
            }
        }
        // Positive degree keeps the recursion away from ε; stars are rejected.
        ExprKind::Epsilon | ExprKind::Star(_) => unreachable!("degree-0 node on a positive-degree path"),
    };
    memo.insert(e.node_id(), out.clone());
    out
}

/// Spine walker shared by the factorizations.
struct Walk {
    oracle: Oracle,
}

impl Walk {
    fn for_lp(b: &Expr) -> Result<Walk> {
        check_input(b)?;
        let mut oracle = Oracle::default();
        if !oracle.is_lp(b) {
            return Err(Error::invalid("expression is not log-product"));
        }
        Ok(Walk { oracle })
    }
}

fn deg(e: &Expr) -> usize {
    e.degree().unwrap_or(0)
}

/// Factors along the canonical path: the siblings of the path nodes and the
/// final leaf, in concatenation order. `2^m ≥ deg b` is asserted.
pub fn canonical_factorize(b: &Expr) -> Result<Factorization> {
    let mut w = Walk::for_lp(b)?;
    let (mut pre, mut suf) = (Vec::new(), Vec::new());
    let mut e = b.clone();
    while let Some((side, main, sib)) = w.oracle.step(&e) {
        match side {
            Side::Left => suf.push(sib.clone()),
            Side::Right => pre.push(sib.clone()),
        }
        e = main.clone();
    }
    pre.push(e);
    pre.extend(suf.into_iter().rev());
    let f = Factorization {
        factors: pre,
        gamma_form: None,
    };
    let n = deg(b);
    assert!(
        f.len() >= usize::BITS as usize || (1usize << f.len()) >= n,
        "canonical factorization too short"
    );
    Ok(f)
}

/// γ-factorization `B ≡ P₁⋯P_m S_m⋯S₁` with `deg P_i + deg S_i ≥ γ` for
/// `i < m`, `deg P_m + deg S_m ≤ γ` and `m ≥ log₂(1 + n/γ)`.
///
/// From the current node of degree `n > γ` the canonical path is followed,
/// collecting siblings into `P_i` (left siblings) and `S_i` (right ones),
/// until a node of degree at most `n − γ` is reached; the walk recurses
/// there. If `n − γ < 1` no node qualifies, and the whole remainder goes
/// into `P_i` followed by an empty last pair.
pub fn gamma_factorize(b: &Expr, gamma: &Gamma) -> Result<Factorization> {
    let mut w = Walk::for_lp(b)?;
    let n_total = deg(b);
    let (mut ps, mut ss) = (Vec::new(), Vec::new());
    let mut v = b.clone();
    loop {
        let n = deg(&v);
        if gamma.cmp_int(n)?.is_ge() {
            ps.push(v);
            ss.push(Expr::epsilon());
            break;
        }
        let (mut pre, mut suf) = (Vec::new(), Vec::new());
        let mut u = v.clone();
        loop {
            if gamma.cmp_int(n - deg(&u))?.is_le() {
                break;
            }
            match w.oracle.step(&u) {
                Some((side, main, sib)) => {
                    match side {
                        Side::Left => suf.push(sib.clone()),
                        Side::Right => pre.push(sib.clone()),
                    }
                    u = main.clone();
                }
                None => {
                    pre.push(u);
                    u = Expr::epsilon();
                    break;
                }
            }
        }
        ps.push(Expr::concat_all(pre));
        ss.push(Expr::concat_all(suf.into_iter().rev()));
        v = u;
    }
    let degrees: Vec<(usize, usize)> = ps.iter().zip(&ss).map(|(p, s)| (deg(p), deg(s))).collect();
    let m = degrees.len();
    for (i, &(dp, ds)) in degrees.iter().enumerate() {
        let ord = gamma.cmp_int(dp + ds)?;
        assert!(
            if i + 1 < m { ord.is_le() } else { ord.is_ge() },
            "γ-factorization degree constraint"
        );
    }
    assert!(
        gamma.log_bound_holds(m, n_total)?,
        "γ-factorization has too few factors"
    );
    let factors = ps.iter().cloned().chain(ss.iter().rev().cloned()).collect();
    Ok(Factorization {
        factors,
        gamma_form: Some(GammaForm {
            prefixes: ps,
            suffixes: ss,
            degrees,
        }),
    })
}

/// `B ≡ XY` with `n/3 ≤ deg X, deg Y ≤ 2n/3`, found on the canonical path
/// at the first step where the collected prefix or suffix reaches `n/3`.
pub fn balanced_split(b: &Expr) -> Result<(Expr, Expr)> {
    let mut w = Walk::for_lp(b)?;
    let n = deg(b);
    if n < 2 {
        return Err(Error::invalid("balanced split needs degree at least 2"));
    }
    let (mut pre, mut suf): (Vec<Expr>, Vec<Expr>) = (Vec::new(), Vec::new());
    let (mut dp, mut ds) = (0, 0);
    let mut e = b.clone();
    let (x, y) = loop {
        let (side, main, sib) = w.oracle.step(&e).expect("a jump happens before the leaf when n ≥ 2");
        let (main, sib) = (main.clone(), sib.clone());
        match side {
            Side::Right => {
                dp += deg(&sib);
                pre.push(sib);
                if 3 * dp >= n {
                    let y = Expr::concat_all(std::iter::once(main).chain(suf.into_iter().rev()));
                    break (Expr::concat_all(pre), y);
                }
            }
            Side::Left => {
                ds += deg(&sib);
                suf.push(sib);
                if 3 * ds >= n {
                    let x = Expr::concat_all(pre.into_iter().chain(std::iter::once(main)));
                    break (x, Expr::concat_all(suf.into_iter().rev()));
                }
            }
        }
        e = main;
    };
    for d in [deg(&x), deg(&y)] {
        assert!(3 * d >= n && 3 * d <= 2 * n, "balanced split out of range");
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Alphabet, EnumOptions};

    fn bin(s: &str) -> Expr {
        parse(s, &Alphabet::binary()).unwrap()
    }

    fn abc(s: &str) -> Expr {
        parse(s, &Alphabet::from_chars("abc").unwrap()).unwrap()
    }

    fn lang(e: &Expr) -> crate::Language {
        e.language(&EnumOptions::default()).unwrap()
    }

    #[test]
    fn predicate() {
        assert!(is_log_product(&bin("1")).unwrap().is_some());
        assert!(is_log_product(&bin("(00+11)(00+11)")).unwrap().is_none());
        // Neither bracketing of (00+11)(00+11)1 has a log-product child of
        // maximal degree.
        assert!(is_log_product(&bin("(00+11)(00+11)1")).unwrap().is_none());
        assert!(is_log_product(&bin("(00+11)((00+11)1)")).unwrap().is_none());
        let good = bin("(00+11)((00+11)(1(0+1)))");
        let cert = is_log_product(&good).unwrap().unwrap();
        assert!(cert.verify(&good));
        assert_eq!(
            cert.steps.iter().map(|s| s.side).collect::<Vec<_>>(),
            [Side::Right, Side::Right, Side::Left]
        );
        assert_eq!(is_log_product(&bin("0+00")).unwrap_err(), Error::NotHomogeneous);
        assert!(is_log_product(&bin("0*")).is_err());
    }

    #[test]
    fn decomposition() {
        let a = abc("(a+b)c");
        let parts = decompose(&a).unwrap();
        let flat: Vec<String> = parts
            .iter()
            .map(|p| p.to_flat(&Alphabet::from_chars("abc").unwrap()))
            .collect();
        assert_eq!(flat, ["ac", "bc"]);
        assert_eq!(decompose(&abc("a")).unwrap().len(), 1);
        assert_eq!(decompose(&abc("e")).unwrap_err(), Error::EpsilonInput);
        let r = bin("(0+1)(00+11)+(01)(1+e0)+1(0+1)(0+1)");
        let parts = decompose(&r).unwrap();
        assert!(parts.len() as u64 <= r.rpn());
        let mut union = crate::Language::new(2);
        for p in &parts {
            assert!(is_log_product(p).unwrap().is_some());
            lang(p).iter().for_each(|w| {
                union.insert(w.clone());
            });
        }
        assert_eq!(union, lang(&r));
    }

    #[test]
    fn figure_four() {
        let a = Alphabet::from_chars("abc").unwrap();
        let b = abc("(a(b+c))((b(a+c))(a+b))");
        let f = canonical_factorize(&b).unwrap();
        let printed: Vec<String> = f.factors.iter().map(|x| x.to_flat(&a)).collect();
        assert_eq!(printed, ["a(b+c)", "b", "a+c", "a+b"]);
        assert_eq!(lang(&f.product()), lang(&b));
        let one = canonical_factorize(&abc("c")).unwrap();
        assert_eq!(one.len(), 1);
        let (x, y) = balanced_split(&b).unwrap();
        assert_eq!(lang(&Expr::concat(x.clone(), y.clone())), lang(&b));
        assert!((2..=4).contains(&deg(&x)) && (2..=4).contains(&deg(&y)));
    }

    #[test]
    fn canonical_degrees() {
        let b = bin("(00+11)((00+11)(1(0+1)))");
        assert_eq!(canonical_factorize(&b).unwrap().degrees(), [2, 2, 1, 1]);
        let (x, y) = balanced_split(&bin("01")).unwrap();
        assert!(x.is_letter() && y.is_letter());
        assert!(balanced_split(&bin("0")).is_err());
        assert!(canonical_factorize(&bin("(00+11)(00+11)")).is_err());
    }

    #[test]
    fn gamma_forms() {
        let b = bin("(00+11)((00+11)(1(0+1)))");
        for g in [
            Gamma::integer(1),
            Gamma::integer(2),
            Gamma::Log2(5),
            Gamma::integer(6),
            Gamma::integer(9),
        ] {
            let f = gamma_factorize(&b, &g).unwrap();
            assert_eq!(lang(&f.product()), lang(&b), "γ = {g}");
        }
        let f = gamma_factorize(&b, &Gamma::integer(6)).unwrap();
        let gf = f.gamma_form.unwrap();
        assert_eq!(gf.degrees, [(6, 0)]);
        assert!(gf.suffixes[0].is_epsilon());
        // 5 < n < 6: the remainder fills P₁ and an empty pair follows.
        let g = "11/2".parse::<Gamma>().unwrap();
        let gf = gamma_factorize(&b, &g).unwrap().gamma_form.unwrap();
        assert_eq!(gf.degrees, [(5, 1), (0, 0)]);
    }
}
