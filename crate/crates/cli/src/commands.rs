use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::Result;
use rexlen::automata::{build_family_dfa, slice, to_expression_with_stats, Automaton, AutomatonFile, LayeredNfa};
use rexlen::bounds::{bound_report, max_fooling_set, max_fooling_set_general, min_rpn_exact, ReportOptions};
use rexlen::envelopes::{higher_envelope, lower_envelope, mu_envelope, Direction, Weighting};
use rexlen::languages::{count, generate_capped};
use rexlen::logproduct::{
    balanced_split, canonical_factorize, decompose, gamma_factorize, is_log_product, max_logproduct_sublanguage, Gamma,
};
use rexlen::random::{ExprSampler, RandomOptions};
use rexlen::transforms::{arithmetic_version, positions};
use rexlen::{Alphabet, EnumOptions, Error, Expr, Language};
use serde_json::json;

use crate::{input, repro, ArithOut, Command, ConvertOut, Emit, Global, LangAction, LogprodAction, OracleAction};

/// A usage error detected after argument parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// 1 for budget and enumeration failures, 2 for bad input.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Budget { .. } | Error::EmptySlice(_) | Error::EmptyLanguage | Error::Indeterminate(_)) => 1,
        _ => 2,
    }
}

fn emit_json(out: &mut String, v: &impl serde::Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(v)?)?;
    Ok(())
}

fn flat(e: &Expr, a: &Alphabet) -> String {
    e.to_flat(a)
}

fn words_of(l: &Language, a: &Alphabet) -> Vec<String> {
    l.iter().map(|w| a.word_to_string(w)).collect()
}

pub fn run(cmd: Command, g: &Global, out: &mut String) -> Result<ExitCode> {
    let json = g.emit == Emit::Json;
    match cmd {
        Command::Parse { expr, rpn } => {
            let (e, a) = input::expr(g, &expr)?;
            if rpn {
                if json {
                    emit_json(out, &json!({ "rpn": e.rpn() }))?;
                } else {
                    writeln!(out, "{}", e.rpn())?;
                }
            } else if json {
                emit_json(
                    out,
                    &json!({
                        "expr": flat(&e, &a),
                        "canonical": e.to_canonical(&a),
                        "rpn": e.rpn(),
                        "leaves": e.leaves(),
                        "shared_size": e.shared_size(),
                        "degree": e.degree(),
                        "star_free": e.is_star_free(),
                        "alphabet_size": a.size(),
                    }),
                )?;
            } else {
                writeln!(out, "expr        {}", flat(&e, &a))?;
                writeln!(out, "rpn         {}", e.rpn())?;
                writeln!(out, "leaves      {}", e.leaves())?;
                let deg = e.degree().map_or("not homogeneous".into(), |d| d.to_string());
                writeln!(out, "degree      {deg}")?;
                writeln!(out, "star-free   {}", e.is_star_free())?;
            }
        }
        Command::Lang { action } => lang(action, g, out)?,
        Command::Convert {
            automaton,
            family,
            slice: n,
            show,
        } => {
            let (nfa, a) = match (automaton, family) {
                (Some(f), _) => match AutomatonFile::parse(&input::text(&f)?)?.into_automaton()? {
                    Automaton::Dfa(d) => {
                        let n = n.ok_or_else(|| Usage("--slice is required for a DFA".into()))?;
                        let a = d.alphabet().clone();
                        (slice(&d, n)?, a)
                    }
                    Automaton::Layered(l) => {
                        let a = l.alphabet().clone();
                        (l, a)
                    }
                },
                (None, Some(s)) => {
                    let spec = input::family(&s)?;
                    let n = n.unwrap_or(spec.word_len());
                    match build_family_dfa(&spec) {
                        Ok(d) => (slice(&d, n)?, spec.alphabet()),
                        Err(Error::UnsupportedFamily(_)) => {
                            let l = generate_capped(&spec, g.budget)?;
                            (LayeredNfa::from_language(&l, spec.alphabet())?, spec.alphabet())
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                (None, None) => unreachable!("enforced by the argument parser"),
            };
            let (e, stats) = to_expression_with_stats(&nfa);
            match (show, json) {
                (ConvertOut::Expr, true) => emit_json(out, &json!({ "expr": flat(&e, &a), "rpn": stats.rpn }))?,
                (ConvertOut::Expr, false) => writeln!(out, "{}", flat(&e, &a))?,
                (ConvertOut::Stats, true) => emit_json(out, &stats)?,
                (ConvertOut::Stats, false) => {
                    writeln!(out, "width        {}", stats.width)?;
                    writeln!(out, "length       {}", stats.length)?;
                    writeln!(out, "states       {}", nfa.state_count())?;
                    writeln!(out, "rpn          {}", stats.rpn)?;
                    writeln!(out, "shared size  {}", stats.shared_size)?;
                    writeln!(out, "leaves       {}", stats.leaves)?;
                    writeln!(
                        out,
                        "recurrence   {}",
                        if stats.recurrence_holds { "holds" } else { "VIOLATED" }
                    )?;
                }
            }
        }
        Command::Arith { expr, show } => {
            let (e, _) = input::expr(g, &expr)?;
            let f = arithmetic_version(&e)?;
            match show {
                ArithOut::Formula if json => emit_json(out, &json!({ "formula": f.to_plain(), "size": f.size() }))?,
                ArithOut::Formula => writeln!(out, "{}", f.to_plain())?,
                ArithOut::ProducedSet => {
                    let n = positions(&e)?.degree;
                    let p = f.produced_set(n, g.budget)?;
                    if json {
                        let terms: Vec<_> = p
                            .terms
                            .iter()
                            .map(|(v, c)| json!({ "exponents": v, "coefficient": c.to_string() }))
                            .collect();
                        emit_json(out, &json!({ "nvars": p.nvars, "terms": terms }))?;
                    } else {
                        out.push_str(&p.to_text());
                    }
                }
            }
        }
        Command::Logprod { action } => logprod(action, g, out)?,
        Command::Envelope { expr, dir, mu } => {
            let (e, a) = input::expr(g, &expr)?;
            let dir: Direction = dir.parse()?;
            let r = match (&mu, dir) {
                (None, Direction::Lower) => lower_envelope(&e)?,
                (None, Direction::Higher) => higher_envelope(&e)?,
                (Some(f), d) => mu_envelope(&e, &Weighting::parse(&input::text(f)?, &a)?, d)?,
            };
            if json {
                emit_json(
                    out,
                    &json!({ "expr": flat(&r, &a), "rpn": r.rpn(), "input_rpn": e.rpn() }),
                )?;
            } else {
                writeln!(out, "{}", flat(&r, &a))?;
            }
        }
        Command::Bound { family, exact, upper } => {
            let spec = input::family(&family)?;
            let opts = ReportOptions {
                exact,
                upper,
                budget: g.budget,
            };
            let r = bound_report(&spec, &opts)?;
            if json {
                emit_json(out, &r)?;
            } else {
                writeln!(
                    out,
                    "{:<24} {:>8} {:>12} {:>26} {:>8}",
                    "language", "DFA", "rpn upper", "rpn lower", "exact"
                )?;
                let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                let cert = r.certificate.as_ref().map(|c| match &c.exact {
                    Some(q) if q.len() <= 26 => q.clone(),
                    _ => format!("{:.6e}", c.value.mid()),
                });
                writeln!(
                    out,
                    "{:<24} {:>8} {:>12} {:>26} {:>8}",
                    r.family,
                    opt(r.dfa_states.map(|s| s.to_string())),
                    opt(r.best_upper().map(|s| s.to_string())),
                    opt(cert),
                    opt(r.exact_min.map(|s| s.to_string())),
                )?;
                writeln!(out, "count {} ({})", r.count, r.count_formula)?;
                if let Some(f) = &r.fooling {
                    writeln!(
                        out,
                        "fooling set {} (NFA states {})",
                        f.size,
                        opt(r.nfa_states.map(|s| s.to_string()))
                    )?;
                }
                if let Some(ok) = r.ordering_ok {
                    writeln!(out, "ordering {}", if ok { "ok" } else { "VIOLATED" })?;
                }
                for n in &r.notes {
                    writeln!(out, "note: {n}")?;
                }
            }
            if r.ordering_ok == Some(false) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Oracle { action } => return oracle(action, g, out),
        Command::Repro { table, n_max } => return repro::run(table, n_max, g, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn lang(action: LangAction, g: &Global, out: &mut String) -> Result<()> {
    let json = g.emit == Emit::Json;
    match action {
        LangAction::Generate { family, ids } => {
            let spec = input::family(&family)?;
            let l = generate_capped(&spec, g.budget)?;
            let a = spec.alphabet();
            if ids {
                out.push_str(&l.to_text());
            } else if json {
                emit_json(
                    out,
                    &json!({ "family": spec.to_string(), "count": l.len(), "words": words_of(&l, &a) }),
                )?;
            } else {
                out.push_str(&l.display_words(&a));
            }
        }
        LangAction::Count { family } => {
            let spec = input::family(&family)?;
            let c = count(&spec);
            if json {
                emit_json(
                    out,
                    &json!({ "family": spec.to_string(), "count": c.value.to_string(), "formula": c.formula }),
                )?;
            } else {
                writeln!(out, "{}", c.value)?;
            }
        }
        LangAction::Words { expr, max_len } => {
            let (e, a) = input::expr(g, &expr)?;
            let opts = match max_len {
                Some(n) => EnumOptions::bounded(n),
                None => EnumOptions::default(),
            }
            .with_cap(g.budget);
            let l = e.language(&opts)?;
            if json {
                emit_json(out, &json!({ "count": l.len(), "words": words_of(&l, &a) }))?;
            } else {
                out.push_str(&l.display_words(&a));
            }
        }
    }
    Ok(())
}

fn logprod(action: LogprodAction, g: &Global, out: &mut String) -> Result<()> {
    let json = g.emit == Emit::Json;
    match action {
        LogprodAction::Check { expr } => {
            let (e, _) = input::expr(g, &expr)?;
            let cert = is_log_product(&e)?;
            if json {
                emit_json(out, &json!({ "log_product": cert.is_some(), "spine": cert }))?;
            } else if let Some(c) = cert {
                writeln!(out, "log-product")?;
                for s in &c.steps {
                    writeln!(out, "  {:?} {} >= {}", s.side, s.log_degree, s.sibling_degree)?;
                }
            } else {
                writeln!(out, "not log-product")?;
            }
        }
        LogprodAction::Decompose { expr } => {
            let (e, a) = input::expr(g, &expr)?;
            let parts = decompose(&e)?;
            let texts: Vec<String> = parts.iter().map(|p| flat(p, &a)).collect();
            if json {
                emit_json(out, &json!({ "parts": texts, "count": parts.len(), "rpn": e.rpn() }))?;
            } else {
                for t in &texts {
                    writeln!(out, "{t}")?;
                }
            }
        }
        LogprodAction::Factorize { expr, gamma, split } => {
            let (e, a) = input::expr(g, &expr)?;
            if split {
                let (x, y) = balanced_split(&e)?;
                if json {
                    emit_json(
                        out,
                        &json!({ "x": flat(&x, &a), "y": flat(&y, &a), "deg_x": x.degree(), "deg_y": y.degree() }),
                    )?;
                } else {
                    writeln!(out, "X = {}  (degree {})", flat(&x, &a), x.degree().unwrap_or(0))?;
                    writeln!(out, "Y = {}  (degree {})", flat(&y, &a), y.degree().unwrap_or(0))?;
                }
                return Ok(());
            }
            let f = match &gamma {
                Some(s) => gamma_factorize(&e, &s.parse::<Gamma>()?)?,
                None => canonical_factorize(&e)?,
            };
            let texts: Vec<String> = f.factors.iter().map(|p| flat(p, &a)).collect();
            let pairs = f.gamma_form.as_ref().map(|gf| gf.degrees.clone());
            if json {
                emit_json(
                    out,
                    &json!({ "factors": texts, "degrees": f.degrees(), "pairs": pairs }),
                )?;
            } else {
                for (t, d) in texts.iter().zip(f.degrees()) {
                    writeln!(out, "{t}  (degree {d})")?;
                }
                if let Some(p) = pairs {
                    writeln!(out, "prefix/suffix degrees {p:?}")?;
                }
            }
        }
        LogprodAction::Maxsub { language, family } => {
            let (l, a) = input::language(g, language.as_deref(), family.as_deref())?;
            let m = max_logproduct_sublanguage(&l, g.budget)?;
            let w = m.witness.as_ref().map(|e| flat(e, &a));
            if json {
                emit_json(out, &json!({ "count": m.count, "witness": w }))?;
            } else {
                writeln!(out, "{}", m.count)?;
                if let Some(w) = w {
                    writeln!(out, "witness {w}")?;
                }
            }
        }
    }
    Ok(())
}

fn oracle(action: OracleAction, g: &Global, out: &mut String) -> Result<ExitCode> {
    let json = g.emit == Emit::Json;
    match action {
        OracleAction::Minrpn { language, family } => {
            let (l, a) = input::language(g, language.as_deref(), family.as_deref())?;
            let m = min_rpn_exact(&l, g.budget)?;
            if json {
                emit_json(
                    out,
                    &json!({ "rpn": m.rpn, "witness": flat(&m.witness, &a), "explored": m.explored }),
                )?;
            } else {
                writeln!(out, "{}", m.rpn)?;
                writeln!(out, "witness {}", flat(&m.witness, &a))?;
            }
        }
        OracleAction::Fooling {
            language,
            family,
            general,
        } => {
            let (l, a) = input::language(g, language.as_deref(), family.as_deref())?;
            let f = if general {
                max_fooling_set_general(&l, g.budget)?
            } else {
                max_fooling_set(&l, g.budget)?
            };
            let pairs: Vec<(String, String)> = f
                .pairs
                .iter()
                .map(|(u, v)| (a.word_to_string(u), a.word_to_string(v)))
                .collect();
            if json {
                emit_json(out, &json!({ "size": f.size, "cut": f.cut, "pairs": pairs }))?;
            } else {
                writeln!(out, "{}", f.size)?;
                for (u, v) in pairs {
                    writeln!(out, "{u} | {v}")?;
                }
            }
        }
        OracleAction::Selfcheck { count, max_degree } => {
            let failures = selfcheck(g, count, max_degree)?;
            if json {
                emit_json(out, &json!({ "seed": g.seed, "checked": count, "failures": failures }))?;
            } else {
                writeln!(out, "seed {} checked {count} failures {}", g.seed, failures.len())?;
                for f in &failures {
                    writeln!(out, "FAIL {f}")?;
                }
            }
            if !failures.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Checks the arithmetic reduction and the log-product decomposition on
/// random expressions; returns the failing expressions.
fn selfcheck(g: &Global, count: usize, max_degree: usize) -> Result<Vec<String>> {
    let mut s = ExprSampler::new(g.seed, RandomOptions::default());
    let a = Alphabet::binary();
    let mut failures = Vec::new();
    for _ in 0..count {
        let e = s.homogeneous_up_to(max_degree);
        let l = e.language(&EnumOptions::default())?;
        let f = arithmetic_version(&e)?;
        let n = e.degree().expect("homogeneous");
        let produced = f.produced_set(n, g.budget)?;
        let keys: Language = produced
            .vectors()
            .map(|v| {
                v.iter()
                    .map(|&x| if x == 1 { rexlen::expr::ONE } else { rexlen::expr::ZERO })
                    .collect()
            })
            .collect();
        let parts = decompose(&e)?;
        let mut union = Language::new(2);
        for p in &parts {
            for w in p.language(&EnumOptions::default())?.into_words() {
                union.insert(w);
            }
        }
        let ok = f.size() <= e.rpn()
            && produced.is_multilinear()
            && keys == l
            && parts.len() as u64 <= e.rpn()
            && union == l
            && parts.iter().all(|p| matches!(is_log_product(p), Ok(Some(_))));
        if !ok {
            failures.push(flat(&e, &a));
        }
    }
    Ok(failures)
}
