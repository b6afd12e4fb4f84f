//! Recursive-descent parser for the ASCII expression syntax.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor+
//! factor := atom '*'*
//! atom   := letter | 'e' | 'ε' | '(' expr ')' | '{' integer '}'
//! ```
//!
//! Unions and concatenations associate to the left. `e` denotes the empty
//! word unless the alphabet declares `e` as a letter.

use super::{Alphabet, Expr, Letter};
use crate::{Error, Result};

/// Parses `text` over `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Expr> {
    let mut p = Parser { text, pos: 0, alphabet };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(p.unexpected(c)),
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn unexpected(&self, c: char) -> Error {
        if c == '∅' {
            return Error::EmptySetSymbol { offset: self.pos };
        }
        Error::Syntax {
            offset: self.pos,
            message: format!("unexpected {c:?}"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('+') {
                return Ok(acc);
            }
            self.bump();
            let rhs = self.term()?;
            acc = Expr::union(acc, rhs);
        }
    }

    fn starts_atom(&self, c: char) -> bool {
        !matches!(c, '+' | '*' | ')' | '}')
    }

    fn term(&mut self) -> Result<Expr> {
        self.skip_ws();
        let mut acc = match self.peek() {
            Some(c) if self.starts_atom(c) => self.factor()?,
            Some(c) => return Err(self.unexpected(c)),
            None => {
                return Err(Error::Syntax {
                    offset: self.pos,
                    message: "unexpected end of input".into(),
                })
            }
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if self.starts_atom(c) => {
                    let rhs = self.factor()?;
                    acc = Expr::concat(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('*') {
                return Ok(e);
            }
            self.bump();
            e = Expr::star(e);
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        let c = self.bump().ok_or(Error::Syntax {
            offset: start,
            message: "unexpected end of input".into(),
        })?;
        match c {
            '(' => {
                let e = self.expr()?;
                self.skip_ws();
                match self.bump() {
                    Some(')') => Ok(e),
                    Some(other) => {
                        self.pos -= other.len_utf8();
                        Err(self.unexpected(other))
                    }
                    None => Err(Error::Syntax {
                        offset: self.pos,
                        message: "missing ')'".into(),
                    }),
                }
            }
            '{' => {
                let close = self.text[self.pos..].find('}').ok_or(Error::Syntax {
                    offset: start,
                    message: "missing '}'".into(),
                })?;
                let body = &self.text[self.pos..self.pos + close];
                let id: u32 = body.trim().parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("invalid letter id {body:?}"),
                })?;
                self.pos += close + 1;
                match Letter::try_new(id) {
                    Some(l) if self.alphabet.contains(l) => Ok(Expr::letter(l)),
                    _ => Err(Error::UnknownLetter {
                        offset: start,
                        letter: format!("{{{id}}}"),
                    }),
                }
            }
            '∅' => Err(Error::EmptySetSymbol { offset: start }),
            'ε' => Ok(Expr::epsilon()),
            other => match self.alphabet.letter_for(other) {
                Some(l) => Ok(Expr::letter(l)),
                None if other == 'e' => Ok(Expr::epsilon()),
                None => Err(Error::UnknownLetter {
                    offset: start,
                    letter: other.to_string(),
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprKind;

    #[test]
    fn union_of_letters() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let e = parse("(a+b)", &ab).unwrap();
        assert!(matches!(e.kind(), ExprKind::Union(..)));
        assert_eq!(e.rpn(), 3);
    }

    #[test]
    fn left_associated_union() {
        let e = parse("000+011+100", &Alphabet::binary()).unwrap();
        match e.kind() {
            ExprKind::Union(l, r) => {
                assert!(matches!(l.kind(), ExprKind::Union(..)));
                assert_eq!(r.rpn(), 5);
            }
            _ => panic!("expected union"),
        }
        assert_eq!(e.rpn(), 17);
    }

    #[test]
    fn precedence() {
        let e = parse("01*+1", &Alphabet::binary()).unwrap();
        match e.kind() {
            ExprKind::Union(l, _) => match l.kind() {
                ExprKind::Concat(_, s) => assert!(matches!(s.kind(), ExprKind::Star(_))),
                _ => panic!("expected concat"),
            },
            _ => panic!("expected union"),
        }
    }

    #[test]
    fn non_homogeneous_parses() {
        let e = parse("(0+00)1", &Alphabet::binary()).unwrap();
        assert!(!e.is_homogeneous());
    }

    #[test]
    fn errors_carry_offsets() {
        let b = Alphabet::binary();
        assert_eq!(parse("0+∅", &b).unwrap_err(), Error::EmptySetSymbol { offset: 2 });
        assert_eq!(
            parse("01x", &b).unwrap_err(),
            Error::UnknownLetter {
                offset: 2,
                letter: "x".into()
            }
        );
        assert!(matches!(parse("0+", &b).unwrap_err(), Error::Syntax { offset: 2, .. }));
        assert!(matches!(parse("(01", &b).unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse(")", &b).unwrap_err(), Error::Syntax { offset: 0, .. }));
    }

    #[test]
    fn epsilon_spellings() {
        let b = Alphabet::binary();
        assert!(parse("e", &b).unwrap().is_epsilon());
        assert!(parse("ε", &b).unwrap().is_epsilon());
        let with_e = Alphabet::from_chars("abcde").unwrap();
        assert!(parse("e", &with_e).unwrap().is_letter());
    }

    #[test]
    fn braced_ids() {
        let a = Alphabet::numbered(12);
        let e = parse("{12}{1}", &a).unwrap();
        assert_eq!(e.letters_in_order(), vec![Letter::new(12), Letter::new(1)]);
        assert!(parse("{13}", &a).is_err());
    }
}
