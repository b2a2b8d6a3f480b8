//! Expression grammar shared by every textual input.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := ('+' | '-')* factor ('*'? factor)*
//! factor  := atom ('^' integer)?
//! atom    := integer ('/' integer)? | ident | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Identifiers are a single letter optionally followed by digits, so `xzy`
//! reads as `x*z*y` while `y12` is one identifier. `[a, b]` is `ab - ba`.
//! Whitespace is ignored.
//!
//! Tame words use `s(i, alpha, expr)` factors joined by `;`, and tensors use
//! `c*(w)'⊗(v)` terms (`@` is accepted in place of `⊗`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::commpoly::{CommPoly, Ring};
use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Quote,
    Tensor,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '\'' | '′' => Tok::Quote,
            '⊗' | '@' => Tok::Tensor,
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().map(|p| p.1).collect();
                out.push((Tok::Num(s.parse().unwrap()), pos));
                i = j;
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().map(|p| p.1).collect();
                out.push((Tok::Ident(s), pos));
                i = j;
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, pos));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// Parsed expression tree, evaluated into a concrete ring afterwards.
#[derive(Debug, Clone)]
pub enum Expr {
    Num(Scalar),
    Var(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                return Ok(Expr::Neg(Box::new(self.term()?)));
            }
            Tok::Plus => {
                self.bump();
                return self.term();
            }
            _ => {}
        }
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::LParen | Tok::LBracket => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Num(n) => {
                    let k: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos: self.pos(),
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => Ok(Expr::Num(Scalar::new(n, d))),
                        _ => self.err("expected a nonzero integer denominator"),
                    }
                } else {
                    Ok(Expr::Num(Scalar::from_integer(n)))
                }
            }
            Tok::Ident(s) => Ok(Expr::Var(s, pos)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            t => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() != Tok::End {
            return self.err(format!("trailing input {:?}", self.peek()));
        }
        Ok(())
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Target ring for evaluating an [`Expr`].
pub trait ExprRing {
    type Out: Clone;
    fn num(&self, c: Scalar) -> Self::Out;
    fn var(&self, name: &str) -> Option<Self::Out>;
    fn add(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn sub(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn mul(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn neg(&self, a: &Self::Out) -> Self::Out;

    fn pow(&self, a: &Self::Out, k: u32) -> Self::Out {
        let mut acc = self.num(Scalar::one());
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

pub fn eval<R: ExprRing>(e: &Expr, ring: &R) -> Result<R::Out> {
    Ok(match e {
        Expr::Num(c) => ring.num(c.clone()),
        Expr::Var(name, pos) => ring.var(name).ok_or_else(|| Error::Parse {
            pos: *pos,
            msg: format!("unknown variable `{name}`"),
        })?,
        Expr::Add(a, b) => ring.add(&eval(a, ring)?, &eval(b, ring)?),
        Expr::Sub(a, b) => ring.sub(&eval(a, ring)?, &eval(b, ring)?),
        Expr::Mul(a, b) => ring.mul(&eval(a, ring)?, &eval(b, ring)?),
        Expr::Neg(a) => ring.neg(&eval(a, ring)?),
        Expr::Pow(a, k) => ring.pow(&eval(a, ring)?, *k),
        Expr::Commutator(a, b) => {
            let (a, b) = (eval(a, ring)?, eval(b, ring)?);
            ring.sub(&ring.mul(&a, &b), &ring.mul(&b, &a))
        }
    })
}

/// Evaluates into `B_n`. For `n = 3` the names `x, y, z`, `y1..y3` and the
/// metabelian spellings `z1..z3` are accepted; otherwise only `y1..yn`.
pub struct NcRing(pub usize);

pub fn nc_generator_index(name: &str, n: usize) -> Option<usize> {
    if n == 3 {
        match name {
            "x" => return Some(0),
            "y" => return Some(1),
            "z" => return Some(2),
            _ => {}
        }
    }
    let (head, digits) = name.split_at(1);
    if (head == "y" || (head == "z" && n == 3)) && !digits.is_empty() {
        let i: usize = digits.parse().ok()?;
        if (1..=n).contains(&i) {
            return Some(i - 1);
        }
    }
    None
}

impl ExprRing for NcRing {
    type Out = NCPoly;
    fn num(&self, c: Scalar) -> NCPoly {
        NCPoly::constant(self.0, c)
    }
    fn var(&self, name: &str) -> Option<NCPoly> {
        nc_generator_index(name, self.0).map(|i| NCPoly::generator(self.0, i))
    }
    fn add(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a + b
    }
    fn sub(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a - b
    }
    fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a * b
    }
    fn neg(&self, a: &NCPoly) -> NCPoly {
        -a
    }
}

pub struct CommRing(pub Arc<Ring>);

impl ExprRing for CommRing {
    type Out = CommPoly;
    fn num(&self, c: Scalar) -> CommPoly {
        CommPoly::constant(&self.0, c)
    }
    fn var(&self, name: &str) -> Option<CommPoly> {
        CommPoly::var_named(&self.0, name).ok()
    }
    fn add(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a + b
    }
    fn sub(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a - b
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a * b
    }
    fn neg(&self, a: &CommPoly) -> CommPoly {
        -a
    }
    fn pow(&self, a: &CommPoly, k: u32) -> CommPoly {
        a.pow(k)
    }
}

/// Parses an element of `B = Q<x, y, z>`.
pub fn parse_nc(src: &str) -> Result<NCPoly> {
    parse_nc_n(src, 3)
}

pub fn parse_nc_n(src: &str, n: usize) -> Result<NCPoly> {
    eval(&parse_expr(src)?, &NcRing(n))
}

pub fn parse_comm(src: &str, ring: &Arc<Ring>) -> Result<CommPoly> {
    eval(&parse_expr(src)?, &CommRing(ring.clone()))
}

/// One raw `s(i, alpha, f)` factor: 1-based index, scalar, parameter.
pub type RawElementary = (usize, Scalar, NCPoly);

/// Parses `s(i, alpha, expr); s(...); ...`. An empty (or all-blank) input
/// is the empty word.
pub fn parse_tame_factors(src: &str, n: usize) -> Result<Vec<RawElementary>> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    if *p.peek() == Tok::End {
        return Ok(out);
    }
    loop {
        match p.bump() {
            Tok::Ident(s) if s == "s" => {}
            _ => return p.err("expected `s(` to start an elementary factor"),
        }
        p.expect(Tok::LParen)?;
        let index = match p.bump() {
            Tok::Num(k) => usize::try_from(k).unwrap_or(0),
            _ => return p.err("expected a generator index"),
        };
        p.expect(Tok::Comma)?;
        let alpha_pos = p.pos();
        let alpha = eval(&p.expr()?, &NcRing(n))?;
        let alpha = alpha
            .terms()
            .all(|(w, _)| w.is_empty())
            .then(|| alpha.constant_term())
            .ok_or(Error::Parse {
                pos: alpha_pos,
                msg: "alpha must be a scalar".into(),
            })?;
        p.expect(Tok::Comma)?;
        let f = eval(&p.expr()?, &NcRing(n))?;
        p.expect(Tok::RParen)?;
        out.push((index, alpha, f));
        match p.peek() {
            Tok::Semi => {
                p.bump();
                if *p.peek() == Tok::End {
                    return Ok(out);
                }
            }
            Tok::End => return Ok(out),
            t => return p.err(format!("expected `;` between factors, found {t:?}")),
        }
    }
}

/// Parses a sum of `c*(f)'⊗(g)` terms into pairs of polynomials; a bare
/// scalar `c` stands for `c*(1)'⊗(1)`.
pub fn parse_tensor_terms(src: &str, n: usize) -> Result<Vec<(Scalar, NCPoly, NCPoly)>> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    let mut sign = Scalar::one();
    if *p.peek() == Tok::Minus {
        p.bump();
        sign = -sign;
    } else if *p.peek() == Tok::Plus {
        p.bump();
    }
    loop {
        let mut coeff = sign.clone();
        if let Tok::Num(_) = p.peek() {
            match p.atom()? {
                Expr::Num(c) => coeff *= c,
                _ => unreachable!(),
            }
            if *p.peek() == Tok::Star {
                p.bump();
            } else {
                out.push((coeff, NCPoly::one(n), NCPoly::one(n)));
                coeff = Scalar::zero();
            }
        }
        if !coeff.is_zero() {
            p.expect(Tok::LParen)?;
            let left = eval(&p.expr()?, &NcRing(n))?;
            p.expect(Tok::RParen)?;
            p.expect(Tok::Quote)?;
            p.expect(Tok::Tensor)?;
            p.expect(Tok::LParen)?;
            let right = eval(&p.expr()?, &NcRing(n))?;
            p.expect(Tok::RParen)?;
            out.push((coeff, left, right));
        }
        match p.bump() {
            Tok::Plus => sign = Scalar::one(),
            Tok::Minus => sign = -Scalar::one(),
            Tok::End => return Ok(out),
            t => return p.err(format!("unexpected token {t:?} in tensor")),
        }
    }
}
