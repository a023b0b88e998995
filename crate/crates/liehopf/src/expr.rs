//! Expressions over `A = Q(L) * k[x]`.
//!
//! Precedence from loosest to tightest: `+ -`, `*`, `^`, unary minus.
//! `[a, b]` is the commutator `ab - ba`, scalar literals are `n` or
//! `n/d`, and `x` always names the adjoined variable. Note that `-e^2`
//! parses as `(-e)^2`.

use std::fmt;

use liehopf_core::{FpElement, FreeProduct};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Literal { text: String, pos: Pos },
    Ident { name: String, pos: Pos },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprErrorKind {
    Lex(char),
    Parse { found: String, expected: Vec<&'static str> },
    Unbound(String),
    NegativeExponent,
    ExponentTooLarge(String),
    Scalar(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {kind}")]
pub struct ExprError {
    pub pos: Pos,
    pub kind: ExprErrorKind,
}

impl fmt::Display for ExprErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprErrorKind::Lex(c) => write!(f, "unexpected character `{c}`"),
            ExprErrorKind::Parse { found, expected } => {
                write!(f, "unexpected {found}, expected {}", expected.join(" or "))
            }
            ExprErrorKind::Unbound(name) => write!(f, "unknown identifier `{name}`"),
            ExprErrorKind::NegativeExponent => f.write_str("exponents must be non-negative integers"),
            ExprErrorKind::ExponentTooLarge(s) => write!(f, "exponent {s} is too large"),
            ExprErrorKind::Scalar(s) => write!(f, "bad scalar literal: {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ExprError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Number(s), pos));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()[],".contains(c) {
            chars.next();
            col += 1;
            out.push((Tok::Sym(c), pos));
        } else {
            return Err(ExprError {
                pos,
                kind: ExprErrorKind::Lex(c),
            });
        }
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

const OPERAND: &[&str] = &["identifier", "number", "`(`", "`[`", "`-`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T, ExprError> {
        Err(ExprError {
            pos: self.pos(),
            kind: ExprErrorKind::Parse {
                found: self.peek().describe(),
                expected: expected.to_vec(),
            },
        })
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<(), ExprError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.power()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.unary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Number(s) => {
                let n = s.parse::<u32>().map_err(|_| ExprError {
                    pos,
                    kind: ExprErrorKind::ExponentTooLarge(s.clone()),
                })?;
                Ok(Expr::Pow(Box::new(base), n))
            }
            Tok::Sym('-') => Err(ExprError {
                pos,
                kind: ExprErrorKind::NegativeExponent,
            }),
            _ => {
                self.at -= 1;
                self.fail(&["non-negative integer exponent"])
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Number(d) => {
                            self.bump();
                            Ok(Expr::Literal {
                                text: format!("{n}/{d}"),
                                pos,
                            })
                        }
                        _ => self.fail(&["denominator"]),
                    }
                } else {
                    Ok(Expr::Literal { text: n, pos })
                }
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Ident { name, pos })
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.sum()?;
                self.expect(')', "`)`")?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.bump();
                let a = self.sum()?;
                self.expect(',', "`,`")?;
                let b = self.sum()?;
                self.expect(']', "`]`")?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            _ => self.fail(OPERAND),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}

/// Evaluates to a normal form in `fp`. Identifiers are basis names or `x`.
pub fn evaluate(e: &Expr, fp: &FreeProduct) -> Result<FpElement, ExprError> {
    Ok(match e {
        Expr::Literal { text, pos } => {
            let c = fp.field().parse_scalar(text).map_err(|err| ExprError {
                pos: *pos,
                kind: ExprErrorKind::Scalar(err.to_string()),
            })?;
            fp.scalar(c)
        }
        Expr::Ident { name, pos } => {
            if name == liehopf_core::liealg::RESERVED_VARIABLE {
                fp.x_gen()
            } else {
                let i = fp.presentation().index_of(name).ok_or_else(|| ExprError {
                    pos: *pos,
                    kind: ExprErrorKind::Unbound(name.clone()),
                })?;
                fp.lie_generator(i)
            }
        }
        Expr::Add(a, b) => evaluate(a, fp)?.add(&evaluate(b, fp)?),
        Expr::Sub(a, b) => evaluate(a, fp)?.sub(&evaluate(b, fp)?),
        Expr::Mul(a, b) => fp.mul(&evaluate(a, fp)?, &evaluate(b, fp)?),
        Expr::Neg(a) => evaluate(a, fp)?.neg(),
        Expr::Pow(a, n) => fp.power(&evaluate(a, fp)?, *n),
        Expr::Commutator(a, b) => fp.commutator(&evaluate(a, fp)?, &evaluate(b, fp)?),
    })
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, fp: &FreeProduct) -> Result<FpElement, ExprError> {
    evaluate(&parse_expression(src)?, fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use liehopf_core::envelope::Envelope;
    use liehopf_core::fixtures;

    fn sl2() -> FreeProduct {
        FreeProduct::new(Envelope::full(fixtures::sl2_q()))
    }

    #[test]
    fn spec_like_examples() {
        let fp = sl2();
        assert!(eval_str("[h,[e,f]]", &fp).unwrap().is_zero());
        assert_eq!(eval_str("e*f - f*e", &fp).unwrap(), fp.lie_generator(1));
        let x2e = eval_str("x^2 * e", &fp).unwrap();
        assert_eq!(fp.format(&x2e), "x^2*e");
    }

    #[test]
    fn precedence() {
        let fp = sl2();
        assert_eq!(eval_str("-e^2", &fp).unwrap(), eval_str("e^2", &fp).unwrap());
        assert_eq!(eval_str("-1*e^2", &fp).unwrap(), eval_str("e^2", &fp).unwrap().neg());
        assert_eq!(eval_str("2*e + 3*e", &fp).unwrap(), eval_str("5*e", &fp).unwrap());
        assert_eq!(eval_str("1/2*h*h", &fp).unwrap(), eval_str("(1/2)*h^2", &fp).unwrap());
        assert_eq!(
            eval_str("e - f - h", &fp).unwrap(),
            eval_str("e - (f + h)", &fp).unwrap()
        );
        assert_eq!(eval_str("x^0", &fp).unwrap(), fp.one());
    }

    #[test]
    fn errors_carry_positions() {
        let fp = sl2();
        let err = eval_str("e +\n  q", &fp).unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 3 });
        assert_eq!(err.kind, ExprErrorKind::Unbound("q".into()));
        assert_eq!(
            parse_expression("e^-1").unwrap_err().kind,
            ExprErrorKind::NegativeExponent
        );
        assert_eq!(parse_expression("e $ f").unwrap_err().kind, ExprErrorKind::Lex('$'));
        let err = parse_expression("[e, f").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 6 });
        assert!(err.to_string().contains("expected `]`"), "{err}");
        assert!(parse_expression("e f").is_err());
        assert!(parse_expression("").is_err());
        assert!(matches!(
            eval_str("1/0", &fp).unwrap_err().kind,
            ExprErrorKind::Scalar(_)
        ));
    }
}
