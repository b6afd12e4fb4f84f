use std::path::Path;

use anyhow::{Context, Result};
use rexlen::expr::parse;
use rexlen::languages::generate_capped;
use rexlen::{Alphabet, Expr, FamilySpec, Language};

use crate::Global;

/// The contents of `arg` if it names a file, otherwise `arg` itself.
pub fn text(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        return std::fs::read_to_string(p).with_context(|| format!("reading {arg}"));
    }
    Ok(arg.to_string())
}

/// The explicit alphabet, or one inferred from `text`; texts over `0`/`1`
/// get the full binary alphabet.
pub fn alphabet(g: &Global, text: &str) -> Result<Alphabet> {
    if let Some(chars) = &g.alphabet {
        return Ok(Alphabet::from_chars(chars)?);
    }
    let inferred = Alphabet::infer(text);
    let binary = Alphabet::binary();
    let within_binary = inferred
        .letters()
        .all(|l| inferred.display_char(l).is_some_and(|c| binary.letter_for(c).is_some()));
    Ok(if within_binary && inferred.size() <= 2 {
        binary
    } else {
        inferred
    })
}

pub fn expr(g: &Global, arg: &str) -> Result<(Expr, Alphabet)> {
    let t = text(arg)?;
    let t = t.trim();
    let a = alphabet(g, t)?;
    Ok((parse(t, &a)?, a))
}

pub fn family(s: &str) -> Result<FamilySpec> {
    Ok(s.parse::<FamilySpec>()?)
}

/// Display alphabet for a language of `k` letters.
pub fn language_alphabet(g: &Global, k: u32) -> Result<Alphabet> {
    match &g.alphabet {
        Some(chars) => Ok(Alphabet::from_chars(chars)?),
        None if k == 2 => Ok(Alphabet::binary()),
        None => Ok(Alphabet::numbered(k)),
    }
}

/// A language from a file in the plain-text format or from a family.
pub fn language(g: &Global, file: Option<&str>, fam: Option<&str>) -> Result<(Language, Alphabet)> {
    let l = match (file, fam) {
        (Some(f), _) => Language::parse_text(&text(f)?)?,
        (None, Some(s)) => {
            let spec = family(s)?;
            return Ok((generate_capped(&spec, g.budget)?, spec.alphabet()));
        }
        (None, None) => anyhow::bail!(crate::commands::Usage("a language file or a family is required".into())),
    };
    let a = language_alphabet(g, l.alphabet_size())?;
    Ok((l, a))
}
