//! Word grammar:
//!
//! ```text
//! word := term+
//! term := atom ('^' (int | atom))?
//! atom := VARNAME | GENLABEL | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `h^g` is `g h g⁻¹` and `[u, v]` is `u v u⁻¹ v⁻¹`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Expr {
    Var(u32),
    Gen { label: String, offset: usize },
    One,
    Seq(Vec<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, i64),
    Conjugate(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '[' => out.push((start, Tok::LBracket)),
            ']' => out.push((start, Tok::RBracket)),
            ',' => out.push((start, Tok::Comma)),
            '^' => out.push((start, Tok::Caret)),
            '-' | '+' | '0'..='9' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let value = lit.parse::<i64>().map_err(|_| Error::syntax(start, format!("bad integer `{lit}`")))?;
                out.push((start, Tok::Int(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => return Err(Error::syntax(start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::LParen | Tok::LBracket | Tok::Int(1)))
    }

    fn word(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        while self.starts_atom() {
            terms.push(self.term()?);
        }
        if terms.is_empty() {
            return Err(Error::syntax(self.offset(), "expected a word"));
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Seq(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        // an integer after `^` is always an exponent, even `1`
        match self.peek() {
            Some(&Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Power(Box::new(base), k))
            }
            _ if self.starts_atom() => {
                let conj = self.atom()?;
                Ok(Expr::Conjugate(Box::new(base), Box::new(conj)))
            }
            _ => Err(Error::syntax(self.offset(), "expected an exponent after `^`")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(digits) = name.strip_prefix('x') {
                    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                        let index = digits
                            .parse::<u32>()
                            .map_err(|_| Error::syntax(offset, format!("variable index too large in `{name}`")))?;
                        return Ok(Expr::Var(index));
                    }
                }
                Ok(Expr::Gen { label: name, offset })
            }
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Ok(Expr::One)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.word()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(Tok::Comma, "`,` inside commutator")?;
                let v = self.word()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Expr::Commutator(Box::new(u), Box::new(v)))
            }
            _ => Err(Error::syntax(offset, "expected a variable, generator, `1`, `(` or `[`")),
        }
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, end: text.len() };
    let expr = p.word()?;
    if p.pos != p.toks.len() {
        return Err(Error::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(expr)
}

const MAX_LETTERS: usize = 1 << 24;

/// Flattens an expression. `leaf` maps variables and generators to letter
/// sequences; `invert` inverts one letter.
pub(crate) fn expand<L, F, I>(expr: &Expr, leaf: &mut F, invert: &I) -> Result<Vec<L>>
where
    L: Clone,
    F: FnMut(&Expr) -> Result<Vec<L>>,
    I: Fn(&L) -> L,
{
    let inverse_of = |w: &[L]| -> Vec<L> { w.iter().rev().map(invert).collect() };
    Ok(match expr {
        Expr::Var(_) | Expr::Gen { .. } => leaf(expr)?,
        Expr::One => Vec::new(),
        Expr::Seq(items) => {
            let mut out = Vec::new();
            for e in items {
                out.extend(expand(e, leaf, invert)?);
            }
            out
        }
        Expr::Commutator(u, v) => {
            let u = expand(u, leaf, invert)?;
            let v = expand(v, leaf, invert)?;
            let mut out = u.clone();
            out.extend(v.iter().cloned());
            out.extend(inverse_of(&u));
            out.extend(inverse_of(&v));
            out
        }
        Expr::Power(base, k) => {
            let base = expand(base, leaf, invert)?;
            let unit = if *k < 0 { inverse_of(&base) } else { base };
            let reps = k.unsigned_abs() as usize;
            if reps.saturating_mul(unit.len()) > MAX_LETTERS {
                return Err(Error::syntax(0, format!("expansion exceeds {MAX_LETTERS} letters")));
            }
            let mut out = Vec::with_capacity(unit.len() * reps);
            for _ in 0..reps {
                out.extend(unit.iter().cloned());
            }
            out
        }
        Expr::Conjugate(base, by) => {
            let base = expand(base, leaf, invert)?;
            let by = expand(by, leaf, invert)?;
            let mut out = by.clone();
            out.extend(base);
            out.extend(inverse_of(&by));
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_shapes() {
        assert_eq!(
            parse_expr("x1 x2^-1").unwrap(),
            Expr::Seq(vec![Expr::Var(1), Expr::Power(Box::new(Expr::Var(2)), -1)])
        );
        assert_eq!(
            parse_expr("[x1, x2^x3]").unwrap(),
            Expr::Commutator(
                Box::new(Expr::Var(1)),
                Box::new(Expr::Conjugate(Box::new(Expr::Var(2)), Box::new(Expr::Var(3))))
            )
        );
        assert_eq!(parse_expr("(x1)^1").unwrap(), Expr::Power(Box::new(Expr::Var(1)), 1));
        assert_eq!(parse_expr("1").unwrap(), Expr::One);
    }

    #[test]
    fn syntax_errors() {
        for bad in ["x1^", "", "(x1", "[x1 x2]", "x1 )", "x1 ^ ^ 2", "a $", "x1^2^3"] {
            assert!(matches!(parse_expr(bad), Err(Error::Syntax { .. })), "{bad:?} should not parse");
        }
    }

    #[test]
    fn expansion_desugars_commutators_and_conjugation() {
        // letters as signed variable indices
        let leaf = &mut |e: &Expr| match e {
            Expr::Var(i) => Ok(vec![*i as i64]),
            _ => unreachable!(),
        };
        let inv = |l: &i64| -l;
        let w = expand(&parse_expr("[x1, x2^x3]").unwrap(), leaf, &inv).unwrap();
        assert_eq!(w, vec![1, 3, 2, -3, -1, 3, -2, -3]);
        let w = expand(&parse_expr("(x1 x2)^-2").unwrap(), leaf, &inv).unwrap();
        assert_eq!(w, vec![-2, -1, -2, -1]);
    }
}
