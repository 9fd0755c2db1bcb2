//! Parser for the formula surface syntax.
//!
//! ```text
//! formula := disj ('implies' formula)? ('iff' formula)?
//! disj    := conj ('or' conj)*
//! conj    := unary ('and' unary)*
//! unary   := 'not' unary
//!          | ('forall' | 'exists') VAR+ ('[' formula ']')? '.' formula
//!          | '(' formula ')' | term ('=' | '<=') term
//! term    := join (('=>' | '->') term)?
//! join    := meet ('\/' meet)*
//! meet    := prefix ('/\' prefix)*
//! prefix  := ('~' | '!' | 'E' | 'A') prefix | '(' term ')' | '0' | '1' | 'c' | VAR
//! ```
//!
//! A guard is only allowed when a single variable is bound.

use crate::algebra::{Const, Op};
use crate::formula::{Formula, Term};

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

const RESERVED: &[&str] = &[
    "E", "A", "c", "0", "1", "forall", "exists", "not", "and", "or", "implies", "iff",
];

/// Parses a formula in the surface syntax.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(src).map_err(|(loc, message)| ParseError { loc, message })?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

/// Parses a term in the surface syntax.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(src).map_err(|(loc, message)| ParseError { loc, message })?;
    let mut p = Parser { tokens, pos: 0 };
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            loc: self.tokens[self.pos].loc,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        let lhs = if self.at_word("implies") {
            self.next();
            Formula::implies(lhs, self.formula()?)
        } else {
            lhs
        };
        if self.at_word("iff") {
            self.next();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while self.at_word("or") {
            self.next();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.at_word("and") {
            self.next();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.at_word("not") {
            self.next();
            return Ok(Formula::not(self.unary()?));
        }
        if self.at_word("forall") || self.at_word("exists") {
            return self.quantified();
        }
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            self.next();
            if let Ok(f) = self.formula() {
                if *self.peek() == Tok::RParen {
                    self.next();
                    return Ok(f);
                }
            }
            self.pos = save;
        }
        self.atom()
    }

    fn quantified(&mut self) -> Result<Formula, ParseError> {
        let universal = self.at_word("forall");
        self.next();
        let mut vars = Vec::new();
        while let Tok::Word(w) = self.peek().clone() {
            if RESERVED.contains(&w.as_str()) {
                return Err(self.error(format!("`{w}` is reserved and cannot be bound")));
            }
            self.next();
            vars.push(w);
        }
        if vars.is_empty() {
            return Err(self.error("expected a variable after quantifier"));
        }
        let guard = if *self.peek() == Tok::LBracket {
            if vars.len() > 1 {
                return Err(self.error("a guard needs a single bound variable"));
            }
            self.next();
            let g = self.formula()?;
            self.expect(Tok::RBracket)?;
            Some(g)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        let mut f = body;
        for (i, v) in vars.iter().enumerate().rev() {
            let g = if i == vars.len() - 1 { guard.clone() } else { None };
            f = if universal {
                Formula::forall(v, g, f)
            } else {
                Formula::exists(v, g, f)
            };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.next();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Le => {
                self.next();
                Ok(Formula::Le(lhs, self.term()?))
            }
            other => Err(self.error(format!("expected `=` or `<=`, found {other}"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let lhs = self.join()?;
        let op = match self.peek() {
            Tok::FatArrow => Op::Himp,
            Tok::Arrow => Op::Nimp,
            _ => return Ok(lhs),
        };
        self.next();
        Ok(Term::binary(op, lhs, self.term()?))
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut t = self.meet()?;
        while *self.peek() == Tok::Vee {
            self.next();
            t = Term::binary(Op::Join, t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut t = self.prefix()?;
        while *self.peek() == Tok::Wedge {
            self.next();
            t = Term::binary(Op::Meet, t, self.prefix()?);
        }
        Ok(t)
    }

    fn prefix(&mut self) -> Result<Term, ParseError> {
        let op = match self.peek() {
            Tok::Tilde => Some(Op::Neg),
            Tok::Bang => Some(Op::Hneg),
            Tok::Word(w) if w == "E" => Some(Op::Exists),
            Tok::Word(w) if w == "A" => Some(Op::Forall),
            _ => None,
        };
        if let Some(op) = op {
            self.next();
            return Ok(Term::unary(op, self.prefix()?));
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Word(w) => match w.as_str() {
                "0" => {
                    self.next();
                    Ok(Term::Const(Const::Bot))
                }
                "1" => {
                    self.next();
                    Ok(Term::Const(Const::Top))
                }
                "c" => {
                    self.next();
                    Ok(Term::Const(Const::Center))
                }
                w if RESERVED.contains(&w) => Err(self.error(format!("unexpected keyword `{w}`"))),
                w if w.chars().next().is_some_and(|c| c.is_ascii_digit()) => {
                    Err(self.error(format!("`{w}` is not a variable or constant")))
                }
                _ => {
                    self.next();
                    Ok(Term::Var(w))
                }
            },
            other => Err(self.error(format!("expected a term, found {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn precedence() {
        let t = parse_term("~x \\/ y /\\ z => E w").unwrap();
        let expected = Term::binary(
            Op::Himp,
            Term::binary(
                Op::Join,
                Term::unary(Op::Neg, v("x")),
                Term::binary(Op::Meet, v("y"), v("z")),
            ),
            Term::unary(Op::Exists, v("w")),
        );
        assert_eq!(t, expected);
        // arrows associate to the right
        let t = parse_term("x -> y -> z").unwrap();
        assert_eq!(
            t,
            Term::binary(Op::Nimp, v("x"), Term::binary(Op::Nimp, v("y"), v("z")))
        );
    }

    #[test]
    fn parenthesized_term_vs_formula() {
        let f = parse_formula("(x /\\ y) => x = 1").unwrap();
        assert_eq!(
            f,
            Formula::Eq(
                Term::binary(Op::Himp, Term::binary(Op::Meet, v("x"), v("y")), v("x")),
                Term::Const(Const::Top)
            )
        );
        let f = parse_formula("(x <= y) iff (y = x)").unwrap();
        assert!(matches!(f, Formula::And(_, _)));
    }

    #[test]
    fn guarded_quantifiers() {
        let f = parse_formula("forall x [c <= x]. exists z. z \\/ c = x").unwrap();
        match &f {
            Formula::ForAll { var, guard, body } => {
                assert_eq!(var, "x");
                assert_eq!(
                    guard.as_deref(),
                    Some(&Formula::Le(Term::Const(Const::Center), v("x")))
                );
                assert!(matches!(**body, Formula::Exists { .. }));
            }
            _ => panic!("expected forall"),
        }
        assert!(f.is_closed());
        let g = parse_formula("forall x y z. x = y").unwrap();
        assert_eq!(g.universal_prefix(), vec!["x", "y", "z"]);
        assert!(parse_formula("forall x y [x = y]. x = y").is_err());
    }

    #[test]
    fn display_then_parse_is_identity() {
        for src in [
            "forall x. forall y. A (E x \\/ y) = E x \\/ A y",
            "forall x [c <= x]. forall y [c <= y]. (x /\\ y = c) implies (exists z. (z \\/ c = x) and (~z \\/ c = y))",
            "forall x. not (x <= 0) or (x = 0)",
            "forall u [exists w. E w = u]. forall a. A (a => u) = E a => u",
        ] {
            let f = parse_formula(src).unwrap();
            let again = parse_formula(&f.to_string()).unwrap();
            assert_eq!(f, again, "{src}");
        }
    }

    #[test]
    fn errors_have_locations() {
        let e = parse_formula("forall x. x = ").unwrap_err();
        assert_eq!(e.loc.line, 1);
        assert_eq!(e.loc.col, 15);
        let e = parse_formula("forall E. E = E").unwrap_err();
        assert!(e.message.contains("reserved"));
        assert!(parse_formula("x = y )").is_err());
    }
}
