//! Recursive-descent parser for the expression language shared by every
//! input (scalars, super-polynomials, problem files).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' nonneg-integer)?
//! atom   := identifier | integer | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Pos, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_char)
}

impl Lexer {
    fn new(text: &str, origin: Pos) -> Result<Self> {
        let mut toks = Vec::new();
        let mut line = origin.line.max(1);
        let mut col = origin.col.max(1);
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line, col };
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                i += 1;
                continue;
            }
            if is_ident_start(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Ident(s), pos));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Int(s.parse().expect("digits")), pos));
                continue;
            }
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            };
            toks.push((tok, pos));
            col += 1;
            i += 1;
        }
        toks.push((Tok::End, Pos { line, col }));
        Ok(Lexer { toks, at: 0 })
    }

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
}

/// Parses `text`; positions are reported relative to `origin`.
pub fn parse_expr_at(text: &str, origin: Pos) -> Result<Expr> {
    let mut lx = Lexer::new(text, origin)?;
    let e = expr(&mut lx)?;
    if *lx.peek() != Tok::End {
        return Err(Error::Syntax {
            pos: lx.pos(),
            msg: format!("unexpected token {:?}", lx.peek()),
        });
    }
    Ok(e)
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    parse_expr_at(text, Pos { line: 1, col: 1 })
}

fn expr(lx: &mut Lexer) -> Result<Expr> {
    let mut lhs = term(lx)?;
    loop {
        match lx.peek() {
            Tok::Plus => {
                lx.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(term(lx)?));
            }
            Tok::Minus => {
                lx.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(term(lx)?));
            }
            _ => return Ok(lhs),
        }
    }
}

fn term(lx: &mut Lexer) -> Result<Expr> {
    let mut lhs = unary(lx)?;
    loop {
        match lx.peek() {
            Tok::Star => {
                lx.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(unary(lx)?));
            }
            Tok::Slash => {
                let (_, pos) = lx.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(unary(lx)?), pos);
            }
            _ => return Ok(lhs),
        }
    }
}

fn unary(lx: &mut Lexer) -> Result<Expr> {
    if *lx.peek() == Tok::Minus {
        lx.bump();
        return Ok(Expr::Neg(Box::new(unary(lx)?)));
    }
    power(lx)
}

fn power(lx: &mut Lexer) -> Result<Expr> {
    let base = atom(lx)?;
    if *lx.peek() == Tok::Caret {
        lx.bump();
        let pos = lx.pos();
        match lx.bump() {
            (Tok::Int(n), _) => {
                let e: u32 = n.try_into().map_err(|_| Error::Syntax {
                    pos,
                    msg: "exponent too large".into(),
                })?;
                return Ok(Expr::Pow(Box::new(base), e));
            }
            (t, _) => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("expected a nonnegative integer exponent, found {t:?}"),
                })
            }
        }
    }
    Ok(base)
}

fn atom(lx: &mut Lexer) -> Result<Expr> {
    let pos = lx.pos();
    match lx.bump() {
        (Tok::Ident(s), p) => Ok(Expr::Ident(s, p)),
        (Tok::Int(n), _) => Ok(Expr::Int(n)),
        (Tok::LParen, _) => {
            let e = expr(lx)?;
            let close = lx.pos();
            match lx.bump() {
                (Tok::RParen, _) => Ok(e),
                (t, _) => Err(Error::Syntax {
                    pos: close,
                    msg: format!("expected `)`, found {t:?}"),
                }),
            }
        }
        (Tok::End, _) => Err(Error::Syntax {
            pos,
            msg: "unexpected end of input".into(),
        }),
        (t, _) => Err(Error::Syntax {
            pos,
            msg: format!("unexpected token {t:?}"),
        }),
    }
}

/// Target algebra of expression evaluation.
pub trait Evaluate: Sized + Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn divide(&self, o: &Self) -> Result<Self>;
    fn pow(&self, e: u32) -> Self;
}

/// Evaluates `e`, building integer literals with `int` and resolving
/// identifiers with `var`.
pub fn evaluate<R: Evaluate>(
    e: &Expr,
    int: &dyn Fn(&BigInt) -> R,
    var: &dyn Fn(&str, Pos) -> Result<R>,
) -> Result<R> {
    let go = |x: &Expr| evaluate(x, int, var);
    Ok(match e {
        Expr::Int(n) => int(n),
        Expr::Ident(s, p) => var(s, *p)?,
        Expr::Neg(a) => go(a)?.neg(),
        Expr::Add(a, b) => go(a)?.add(&go(b)?),
        Expr::Sub(a, b) => go(a)?.sub(&go(b)?),
        Expr::Mul(a, b) => go(a)?.mul(&go(b)?),
        Expr::Div(a, b, _) => go(a)?.divide(&go(b)?)?,
        Expr::Pow(a, k) => go(a)?.pow(*k),
    })
}
