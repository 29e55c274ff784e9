//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Binding strength, tightest first: prefix operators (`! X F G`), `U`
//! (right associative), `&`, `|`, `->` (right associative).

use super::{Formula, PI_D_ATOM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Arrow,
    Next,
    Finally,
    Globally,
    Until,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "X" => Tok::Next,
                    "F" => Tok::Finally,
                    "G" => Tok::Globally,
                    "U" => Tok::Until,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "PI_D" | "pid" => Tok::Ident(PI_D_ATOM.to_string()),
                    word => Tok::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    position: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Until {
            self.bump();
            return Ok(Formula::until(lhs, self.until()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Finally => {
                self.bump();
                Ok(Formula::finally(self.unary()?))
            }
            Tok::Globally => {
                self.bump();
                Ok(Formula::globally(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of formula"),
            other => self.error(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses a formula; syntax errors carry the byte offset of the offending token.
pub fn parse_ltl(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    fn a(n: &str) -> Formula {
        F::atom(n)
    }

    #[test]
    fn three_conjuncts() {
        let f = parse_ltl("G !r2 & F r1 & (r3 -> X !r1)").unwrap();
        let expected = F::and(
            F::and(F::globally(F::not(a("r2"))), F::finally(a("r1"))),
            F::implies(a("r3"), F::next(F::not(a("r1")))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn leaves_and_associativity() {
        assert_eq!(parse_ltl("r1").unwrap(), a("r1"));
        assert_eq!(
            parse_ltl("a -> b -> c").unwrap(),
            F::implies(a("a"), F::implies(a("b"), a("c")))
        );
        assert_eq!(parse_ltl("a | b & c").unwrap(), F::or(a("a"), F::and(a("b"), a("c"))));
        assert_eq!(
            parse_ltl("!a U b & c").unwrap(),
            F::and(F::until(F::not(a("a")), a("b")), a("c"))
        );
        assert_eq!(
            parse_ltl("a U b U c").unwrap(),
            F::until(a("a"), F::until(a("b"), a("c")))
        );
        assert_eq!(parse_ltl("PI_D").unwrap(), a(PI_D_ATOM));
        assert_eq!(parse_ltl("G pid").unwrap(), F::globally(a(PI_D_ATOM)));
        assert_eq!(parse_ltl(" true|false ").unwrap(), F::or(F::True, F::False));
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("a & ", 4),
            ("(a | b", 6),
            ("a b", 2),
            ("a # b", 2),
            ("& a", 0),
            ("a -", 2),
        ];
        for (text, pos) in cases {
            match parse_ltl(text) {
                Err(Error::Syntax { position, .. }) => assert_eq!(position, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
