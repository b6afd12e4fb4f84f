use super::{Alphabet, Expr, ExprKind};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    UnionRight,
    ConcatLeft,
    ConcatRight,
    StarOperand,
}

impl Expr {
    /// Text that parses back to exactly this tree.
    pub fn to_canonical(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        write(self, alphabet, Ctx::Top, false, &mut out);
        out
    }

    /// Text with redundant parentheses around associative operators removed.
    /// Describes the same language; the tree shape may differ on re-parsing.
    pub fn to_flat(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        write(self, alphabet, Ctx::Top, true, &mut out);
        out
    }
}

fn write(e: &Expr, alphabet: &Alphabet, ctx: Ctx, flat: bool, out: &mut String) {
    match e.kind() {
        ExprKind::Letter(l) => alphabet.write_letter(*l, out),
        ExprKind::Epsilon => {
            if alphabet.letter_for('e').is_some() {
                out.push('ε');
            } else {
                out.push('e');
            }
        }
        ExprKind::Union(a, b) => {
            let parens = !(ctx == Ctx::Top || (flat && ctx == Ctx::UnionRight));
            if parens {
                out.push('(');
            }
            write(a, alphabet, Ctx::Top, flat, out);
            out.push('+');
            write(b, alphabet, Ctx::UnionRight, flat, out);
            if parens {
                out.push(')');
            }
        }
        ExprKind::Concat(a, b) => {
            let parens = ctx == Ctx::StarOperand || (!flat && ctx == Ctx::ConcatRight);
            if parens {
                out.push('(');
            }
            write(a, alphabet, Ctx::ConcatLeft, flat, out);
            write(b, alphabet, Ctx::ConcatRight, flat, out);
            if parens {
                out.push(')');
            }
        }
        ExprKind::Star(a) => {
            write(a, alphabet, Ctx::StarOperand, flat, out);
            out.push('*');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Letter};

    #[test]
    fn canonical_round_trip() {
        let b = Alphabet::binary();
        for text in [
            "000+011+100",
            "(0+1)(0+1)",
            "0(1(01))",
            "0+(1+0)",
            "(01)*1",
            "0**",
            "e+0",
            "(00+11)(00+11)1",
        ] {
            let e = parse(text, &b).unwrap();
            assert_eq!(e.to_canonical(&b), text);
            assert_eq!(parse(&e.to_canonical(&b), &b).unwrap(), e);
        }
    }

    #[test]
    fn flat_drops_associative_parens() {
        let b = Alphabet::binary();
        let e = parse("(01)(01)", &b).unwrap();
        assert_eq!(e.to_canonical(&b), "01(01)");
        assert_eq!(e.to_flat(&b), "0101");
    }

    #[test]
    fn braces_for_unnamed_letters() {
        let a = Alphabet::anonymous(3);
        let e = Expr::concat(Expr::letter(Letter::new(3)), Expr::letter(Letter::new(1)));
        assert_eq!(e.to_canonical(&a), "{3}{1}");
    }

    #[test]
    fn epsilon_when_e_is_a_letter() {
        let a = Alphabet::from_chars("de").unwrap();
        let e = Expr::union(Expr::epsilon(), parse("e", &a).unwrap());
        assert_eq!(e.to_canonical(&a), "ε+e");
    }
}
