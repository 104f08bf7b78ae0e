//! Precedence-climbing parser for series expressions.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! input   := sum [ '+' 'O' '(' 't' '^' int ')' ] | 'O' '(' 't' '^' int ')'
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom [ '^' ['-' | '+'] int ]
//! atom    := int | 'u' | 'w' | 't' | '(' sum ')' | 'comm' '(' sum ',' sum ')' | 'inv' '(' sum ')'
//! ```

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    U,
    W,
    T,
}

impl Symbol {
    pub fn name(self) -> &'static str {
        match self {
            Symbol::U => "u",
            Symbol::W => "w",
            Symbol::T => "t",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative integer literal.
    Int(BigInt),
    Sym(Symbol),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Comm(Box<Expr>, Box<Expr>),
    Inv(Box<Expr>),
    /// `body + O(t^precision)`; only at top level.
    Truncated(Box<Expr>, i64),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        assert!(n >= 0, "integer literals are nonnegative");
        Expr::Int(BigInt::from(n))
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Truncated(..) => 0,
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Sym(_) | Expr::Comm(..) | Expr::Inv(_) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Sym(s) => write!(f, "{}", s.name()),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, e) => {
                a.write_at(f, 5)?;
                write!(f, "^{e}")
            }
            Expr::Comm(a, b) => {
                write!(f, "comm(")?;
                a.write_at(f, 1)?;
                write!(f, ", ")?;
                b.write_at(f, 1)?;
                write!(f, ")")
            }
            Expr::Inv(a) => {
                write!(f, "inv(")?;
                a.write_at(f, 1)?;
                write!(f, ")")
            }
            Expr::Truncated(a, p) => {
                a.write_at(f, 1)?;
                write!(f, " + O(t^{p})")
            }
        }
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character {ch:?}"),
                    expected: "a number, symbol, operator or parenthesis".into(),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            offset: self.offset(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn at_order_marker(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "O") && *self.peek_at(1) == Tok::LParen
    }

    fn parse_input(&mut self) -> Result<Expr> {
        if self.at_order_marker() {
            let p = self.parse_order_marker()?;
            self.expect(Tok::End, "end of input after O(t^P)")?;
            return Ok(Expr::Truncated(Box::new(Expr::int(0)), p));
        }
        let mut lhs = self.parse_product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    if self.at_order_marker() {
                        let p = self.parse_order_marker()?;
                        self.expect(Tok::End, "end of input after O(t^P)")?;
                        return Ok(Expr::Truncated(Box::new(lhs), p));
                    }
                    let rhs = self.parse_product()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                Tok::End => return Ok(lhs),
                _ => return Err(self.error("an operator or end of input")),
            }
        }
    }

    fn parse_order_marker(&mut self) -> Result<i64> {
        self.bump(); // O
        self.expect(Tok::LParen, "'('")?;
        match self.peek() {
            Tok::Ident(s) if s == "t" => {
                self.bump();
            }
            _ => return Err(self.error("'t' in O(t^P)")),
        }
        self.expect(Tok::Caret, "'^' in O(t^P)")?;
        let p = self.parse_signed_int()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(p)
    }

    fn parse_sum(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_product(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.parse_signed_int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn parse_signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let offset = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                let n = if neg { -n } else { n };
                i64::try_from(n).map_err(|_| Error::Syntax {
                    offset,
                    message: "exponent out of range".into(),
                    expected: "a 64-bit integer exponent".into(),
                })
            }
            other => Err(Error::Syntax {
                offset,
                message: format!("unexpected {}", other.describe()),
                expected: "an integer exponent".into(),
            }),
        }
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.parse_sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "u" => {
                    self.bump();
                    Ok(Expr::Sym(Symbol::U))
                }
                "w" => {
                    self.bump();
                    Ok(Expr::Sym(Symbol::W))
                }
                "t" => {
                    self.bump();
                    Ok(Expr::Sym(Symbol::T))
                }
                "comm" => {
                    self.bump();
                    self.expect(Tok::LParen, "'(' after comm")?;
                    let a = self.parse_sum()?;
                    self.expect(Tok::Comma, "',' between comm arguments")?;
                    let b = self.parse_sum()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Comm(Box::new(a), Box::new(b)))
                }
                "inv" => {
                    self.bump();
                    self.expect(Tok::LParen, "'(' after inv")?;
                    let a = self.parse_sum()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Inv(Box::new(a)))
                }
                "O" => Err(self.error("O(t^P) only as the final term")),
                _ => Err(self.error("one of u, w, t, comm, inv")),
            },
            _ => Err(self.error("a number, symbol or '('")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.parse_input()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    fn t() -> Expr {
        Expr::Sym(Symbol::T)
    }

    #[test]
    fn simple_forms() {
        assert_eq!(
            parse_expr("t*u").unwrap(),
            Expr::Mul(b(t()), b(Expr::Sym(Symbol::U)))
        );
        assert_eq!(
            parse_expr("comm(t, u)").unwrap(),
            Expr::Comm(b(t()), b(Expr::Sym(Symbol::U)))
        );
        assert_eq!(
            parse_expr("3*t^-2 + t").unwrap(),
            Expr::Add(b(Expr::Mul(b(Expr::int(3)), b(Expr::Pow(b(t()), -2)))), b(t()))
        );
    }

    #[test]
    fn precedence() {
        // ^ binds tighter than unary minus, which binds tighter than *
        assert_eq!(parse_expr("-t^2").unwrap(), Expr::Neg(b(Expr::Pow(b(t()), 2))));
        assert_eq!(
            parse_expr("u*t^2").unwrap(),
            Expr::Mul(b(Expr::Sym(Symbol::U)), b(Expr::Pow(b(t()), 2)))
        );
        assert_eq!(
            parse_expr("1 - t - t").unwrap(),
            Expr::Sub(b(Expr::Sub(b(Expr::int(1)), b(t()))), b(t()))
        );
        assert_eq!(
            parse_expr("1/2/u").unwrap(),
            Expr::Div(b(Expr::Div(b(Expr::int(1)), b(Expr::int(2)))), b(Expr::Sym(Symbol::U)))
        );
    }

    #[test]
    fn order_marker() {
        assert_eq!(
            parse_expr("1 + t + O(t^32)").unwrap(),
            Expr::Truncated(b(Expr::Add(b(Expr::int(1)), b(t()))), 32)
        );
        assert_eq!(
            parse_expr("O(t^7)").unwrap(),
            Expr::Truncated(b(Expr::int(0)), 7)
        );
        assert!(parse_expr("O(t^7) + t").is_err());
        assert!(parse_expr("(1 + O(t^3))").is_err());
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_expr("t * * u") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse_expr("comm(t u)") {
            Err(Error::Syntax { offset, expected, .. }) => {
                assert_eq!(offset, 7);
                assert!(expected.contains("','"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("t^u"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("x"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_expr("2 $ 3"), Err(Error::Syntax { offset: 2, .. })));
        assert!(parse_expr("").is_err());
        assert!(parse_expr("t^2^3").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "t*u",
            "3*t^-2 + t",
            "-(1 + t)^2",
            "(t^2)^3",
            "1 - (t - u)",
            "2*-t",
            "comm(inv(1 - t), u/(u + 1)) + O(t^16)",
            "--t",
            "1/(2*u)",
        ] {
            let e = parse_expr(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
