use serde::Serialize;

use super::{
    lb_divisibility, lb_parity, lb_permutation, max_fooling_set, min_rpn_exact, ub_divisibility_expr, FoolingSet,
};
use crate::automata::{build_family_dfa, slice, to_expression, LayeredNfa};
use crate::interval::Interval;
use crate::languages::{count, generate_capped, FamilySpec};
use crate::Result;

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Run the exact minimum search.
    pub exact: bool,
    /// Build the upper-bound expressions.
    pub upper: bool,
    /// Shared limit for enumeration, the exact search and the clique search.
    pub budget: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            exact: false,
            upper: true,
            budget: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub formula: &'static str,
    pub value: Interval,
    /// Exact rational form, when the certificate is rational.
    pub exact: Option<String>,
    /// Below 1, so vacuous at this scale.
    pub vacuous: bool,
    /// The asymptotic headline form, when it differs from the certificate.
    pub asymptotic: Option<Interval>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpperBound {
    pub method: &'static str,
    pub rpn: u64,
}

/// One row of the bounds table, with where each number came from.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub family: String,
    pub count: String,
    pub count_formula: &'static str,
    /// States of the family DFA, not counting a trap state.
    pub dfa_states: Option<usize>,
    /// States of the trimmed layered automaton for the slice.
    pub nfa_states: Option<usize>,
    pub certificate: Option<Certificate>,
    pub upper: Vec<UpperBound>,
    pub exact_min: Option<u64>,
    pub fooling: Option<FoolingSet>,
    /// `certificate ≤ exact ≤ upper` on all numbers present; `None` when
    /// fewer than two are present.
    pub ordering_ok: Option<bool>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn best_upper(&self) -> Option<u64> {
        self.upper.iter().map(|u| u.rpn).min()
    }
}

fn certificate(spec: &FamilySpec, notes: &mut Vec<String>) -> Result<Option<Certificate>> {
    Ok(match *spec {
        FamilySpec::Divisibility { n, p } => {
            let d = lb_divisibility(n, p)?;
            Some(Certificate {
                formula: "|L| / (2^n n p^(1 - log2(n / log2 p)))",
                value: d.certificate.value,
                exact: None,
                vacuous: d.certificate.vacuous,
                asymptotic: Some(d.asymptotic.value),
            })
        }
        FamilySpec::Parity { n, k } => {
            let c = lb_parity(n, k)?;
            let (num, den) = (c.certificate.numer(), c.certificate.denom());
            let log2 = Interval::log2_big(&num.magnitude().clone()).sub(Interval::log2_big(&den.magnitude().clone()));
            notes.push(format!(
                "parity uses m* = {} factors, the ceiling of log2(1 + n/(k ln k))",
                c.m
            ));
            Some(Certificate {
                formula: "|L| / (k^n 2^((2-k)(m*-1)))",
                value: log2.exp2(),
                exact: Some(c.certificate.to_string()),
                vacuous: c.vacuous,
                asymptotic: None,
            })
        }
        FamilySpec::Permutation { n } => {
            let c = lb_permutation(n)?;
            Some(Certificate {
                formula: "n! / h(n) = 4^(n-1) n^(-(log2 n)/4 - 3/4)",
                vacuous: c.certificate.hi < 1.0,
                value: c.certificate,
                exact: None,
                asymptotic: None,
            })
        }
        _ => {
            notes.push(format!("no lower-bound certificate is computed for {}", spec.name()));
            None
        }
    })
}

/// Assembles certificate, constructed upper bounds and, on request, the
/// exact minimum for one family instance.
pub fn bound_report(spec: &FamilySpec, opts: &ReportOptions) -> Result<BoundReport> {
    spec.validate()?;
    let mut notes = Vec::new();
    let c = count(spec);
    let cert = certificate(spec, &mut notes)?;
    if cert.as_ref().is_some_and(|c| c.vacuous) {
        notes.push("certificate is vacuous at this scale".into());
    }
    let n = spec.word_len();
    let dfa = match build_family_dfa(spec) {
        Ok(d) => Some(d),
        Err(crate::Error::UnsupportedFamily(_)) => None,
        Err(e) => return Err(e),
    };
    // The language is enumerated lazily: only the palindrome automaton, the
    // exact search and the fooling set need it.
    let budget = opts.budget;
    let mut words = None;
    let mut language = || -> Result<_> {
        if words.is_none() {
            words = Some(generate_capped(spec, budget)?);
        }
        Ok(words.clone().expect("just set"))
    };
    let nfa = match &dfa {
        Some(d) => Some(slice(d, n)?),
        None if opts.upper || opts.exact => match language() {
            Ok(l) => Some(LayeredNfa::from_language(&l, spec.alphabet())?),
            Err(e) if e.is_budget() => {
                notes.push(format!("language not enumerated: {e}"));
                None
            }
            Err(e) => return Err(e),
        },
        None => None,
    };
    let mut upper = Vec::new();
    if opts.upper {
        if let Some(a) = &nfa {
            let method = if dfa.is_some() {
                "slice conversion"
            } else {
                "word-trie conversion"
            };
            upper.push(UpperBound {
                method,
                rpn: to_expression(a).rpn(),
            });
        }
        if let FamilySpec::Divisibility { n, p } = *spec {
            if n.is_power_of_two() {
                upper.push(UpperBound {
                    method: "divide and conquer on remainders",
                    rpn: ub_divisibility_expr(n, p)?.stats.rpn,
                });
            }
        }
    }
    let mut exact_min = None;
    let mut fooling = None;
    if opts.exact {
        match language().and_then(|l| Ok((min_rpn_exact(&l, budget)?, l))) {
            Ok((m, l)) => {
                exact_min = Some(m.rpn);
                match max_fooling_set(&l, budget) {
                    Ok(f) => fooling = Some(f),
                    Err(e) if e.is_budget() => notes.push(format!("fooling set not computed: {e}")),
                    Err(e) => return Err(e),
                }
            }
            Err(e) if e.is_budget() => notes.push(format!("exact minimum not computed: {e}")),
            Err(e) => return Err(e),
        }
    }
    let best = upper.iter().map(|u| u.rpn).min();
    let mut chain: Vec<Interval> = Vec::new();
    if let Some(c) = &cert {
        chain.push(c.value);
    }
    chain.extend(exact_min.map(Interval::from_u64));
    chain.extend(best.map(Interval::from_u64));
    let ordering_ok = (chain.len() >= 2).then(|| chain.windows(2).all(|w| w[0].hi <= w[1].lo));
    if let (Some(f), Some(a)) = (&fooling, &nfa) {
        if f.size > a.state_count() {
            notes.push("fooling set exceeds the automaton size".into());
        }
    }
    Ok(BoundReport {
        family: spec.to_string(),
        count: c.value.to_string(),
        count_formula: c.formula,
        dfa_states: dfa.as_ref().map(|d| d.state_count()),
        nfa_states: nfa.as_ref().map(|a| a.state_count()),
        certificate: cert,
        upper,
        exact_min,
        fooling,
        ordering_ok,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(s: &str, exact: bool) -> BoundReport {
        let opts = ReportOptions {
            exact,
            ..Default::default()
        };
        bound_report(&s.parse().unwrap(), &opts).unwrap()
    }

    #[test]
    fn divisibility_row() {
        let r = report("div:4,3", true);
        assert_eq!(r.count, "6");
        assert_eq!(r.dfa_states, Some(3));
        assert_eq!(r.upper.len(), 2);
        let e = r.exact_min.unwrap();
        assert!(r.certificate.as_ref().unwrap().value.hi <= e as f64);
        assert!(e <= r.best_upper().unwrap());
        assert_eq!(r.ordering_ok, Some(true));
    }

    #[test]
    fn permutation_row() {
        let r = report("perm:3", true);
        let c = r.certificate.unwrap();
        let direct = 16.0 * 3f64.powf(-(3f64.log2()) / 4.0 - 0.75);
        assert!((c.value.mid() - direct).abs() < 1e-12);
        assert_eq!(r.ordering_ok, Some(true));
    }

    #[test]
    fn dyck_row() {
        let r = report("dyck:6", false);
        assert_eq!(r.count, "5");
        assert!(r.certificate.is_none());
        assert_eq!(r.upper.len(), 1);
        assert!(r.exact_min.is_none());
        let p = report("palindrome:4", true);
        assert_eq!(p.upper[0].method, "word-trie conversion");
        assert_eq!(p.fooling.unwrap().size, 4);
    }
}
