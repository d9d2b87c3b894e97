//! Parser for the canonical expression text.  Also used by the theory DSL
//! for rule right-hand sides, Lagrangians and golden expectations.

use super::expr::Expr;
use super::symbols::Symbols;
use super::word::Letter;
use crate::scalar::Coeff;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Minus,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Star,  // "*("  (consumes the paren)
    DStar, // "d*(" (consumes the paren)
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | 'δ' | '⁻' | '¹' | '²' | '~')
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '[' => {
                out.push((pos, Tok::LBracket));
                i += 1;
            }
            ']' => {
                out.push((pos, Tok::RBracket));
                i += 1;
            }
            ',' => {
                out.push((pos, Tok::Comma));
                i += 1;
            }
            ';' => {
                out.push((pos, Tok::Semi));
                i += 1;
            }
            '*' => {
                // must be "*("
                if i + 1 < chars.len() && chars[i + 1].1 == '(' {
                    out.push((pos, Tok::Star));
                    i += 2;
                } else {
                    return Err(ParseError { pos, msg: "`*` must be followed by `(`".into() });
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    s.push(chars[i].1);
                    i += 1;
                }
                out.push((pos, Tok::Number(s)));
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while i < chars.len() && is_ident_char(chars[i].1) {
                    s.push(chars[i].1);
                    i += 1;
                }
                // "d*(" -> DStar
                if s == "d" && i + 1 < chars.len() && chars[i].1 == '*' && chars[i + 1].1 == '(' {
                    out.push((pos, Tok::DStar));
                    i += 2;
                } else {
                    out.push((pos, Tok::Ident(s)));
                }
            }
            _ => {
                return Err(ParseError { pos, msg: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(out)
}

pub struct Parser<'a> {
    lx: Lexer,
    sy: &'a Symbols,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, sy: &'a Symbols) -> Result<Self, ParseError> {
        Ok(Parser { lx: Lexer { toks: lex(src)?, i: 0 }, sy })
    }

    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.lx.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.lx.toks.get(self.lx.i).map(|(p, _)| *p).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.lx.toks.get(self.lx.i).map(|(_, t)| t.clone());
        self.lx.i += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(ParseError { pos, msg: format!("expected {:?}, found {:?}", t, other) }),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    /// expr := term (('+'|'-') term)*
    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// term := ('-')? number? factor*  (juxtaposition products)
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut neg = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            neg = true;
        }
        let mut acc: Option<Expr> = None;
        // optional leading rational
        if let Some(Tok::Number(_)) = self.peek() {
            let c = self.rational()?;
            acc = Some(Expr::scalar(c));
        }
        loop {
            let factor = match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Star) | Some(Tok::DStar) | Some(Tok::LParen)
                | Some(Tok::LBracket) => self.factor()?,
                _ => break,
            };
            acc = Some(match acc {
                None => factor,
                Some(a) => a
                    .mul(&factor, self.sy)
                    .map_err(|m| ParseError { pos: self.pos(), msg: m })?,
            });
        }
        let mut e = match acc {
            Some(e) => e,
            None => return self.err("empty term"),
        };
        if neg {
            e = e.neg();
        }
        Ok(e)
    }

    fn rational(&mut self) -> Result<Coeff, ParseError> {
        let pos = self.pos();
        let num = match self.next() {
            Some(Tok::Number(s)) => s,
            other => {
                return Err(ParseError { pos, msg: format!("expected number, found {:?}", other) })
            }
        };
        let numer: BigInt = num.parse().unwrap();
        if matches!(self.peek(), Some(Tok::Slash)) {
            self.next();
            let pos = self.pos();
            match self.next() {
                Some(Tok::Number(s)) => {
                    let denom: BigInt = s.parse().unwrap();
                    Ok(Coeff { rat: BigRational::new(numer, denom), consts: Default::default() })
                }
                other => {
                    Err(ParseError { pos, msg: format!("expected denominator, found {:?}", other) })
                }
            }
        } else {
            Ok(Coeff { rat: BigRational::from_integer(numer), consts: Default::default() })
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Ident(name)) => {
                // reserved function-like forms
                if (name == "Tr" || name == "B") && matches!(self.peek(), Some(Tok::LParen)) {
                    self.next();
                    if name == "Tr" {
                        let inner = self.expr()?;
                        self.expect(Tok::RParen)?;
                        return inner.tr().map_err(|m| ParseError { pos, msg: m });
                    } else {
                        let a = self.expr()?;
                        self.expect(Tok::Semi)?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen)?;
                        return a.bullet(&b, self.sy).map_err(|m| ParseError { pos, msg: m });
                    }
                }
                if let Some(g) = self.sy.lookup(&name) {
                    let mut e = Expr::gen(g);
                    // optional ^k exponent on a generator letter
                    if matches!(self.peek(), Some(Tok::Caret)) {
                        self.next();
                        match self.next() {
                            Some(Tok::Number(s)) => {
                                let k: u32 = s.parse().unwrap();
                                let base = e.clone();
                                for _ in 1..k {
                                    e = e.mul(&base, self.sy)
                                        .map_err(|m| ParseError { pos, msg: m })?;
                                }
                            }
                            other => {
                                return Err(ParseError {
                                    pos,
                                    msg: format!("expected exponent, found {:?}", other),
                                })
                            }
                        }
                    }
                    Ok(e)
                } else if let Some(&c) = self.sy.consts_by_name.get(&name) {
                    let mut coeff = Coeff::constant(c);
                    if matches!(self.peek(), Some(Tok::Caret)) {
                        self.next();
                        match self.next() {
                            Some(Tok::Number(s)) => {
                                let k: i64 = s.parse().unwrap();
                                coeff.consts.insert(c, k);
                            }
                            other => {
                                return Err(ParseError {
                                    pos,
                                    msg: format!("expected exponent, found {:?}", other),
                                })
                            }
                        }
                    }
                    Ok(Expr::scalar(coeff))
                } else {
                    Err(ParseError { pos, msg: format!("unknown name `{name}`") })
                }
            }
            Some(Tok::Star) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                inner.star(self.sy).map_err(|m| ParseError { pos, msg: m })
            }
            Some(Tok::DStar) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                // d*(w): per-term DStar letters
                let starred = inner.star(self.sy).map_err(|m| ParseError { pos, msg: m })?;
                let mut out = Expr::zero();
                for t in &starred.terms {
                    match &t.body {
                        super::expr::Body::Word(w) if w.len() == 1 => {
                            if let Letter::Star(content) = &w[0] {
                                out.terms.push(super::expr::Term {
                                    coeff: t.coeff.clone(),
                                    body: super::expr::Body::Word(vec![Letter::DStar(
                                        content.clone(),
                                    )]),
                                });
                            } else {
                                unreachable!()
                            }
                        }
                        _ => return Err(ParseError { pos, msg: "malformed d*(...)".into() }),
                    }
                }
                Ok(out)
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::LBracket) => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBracket)?;
                a.bracket(&b, self.sy).map_err(|m| ParseError { pos, msg: m })
            }
            other => Err(ParseError { pos, msg: format!("unexpected token {:?}", other) }),
        }
    }

    pub fn finish(self) -> Result<(), ParseError> {
        if self.lx.i < self.lx.toks.len() {
            Err(ParseError { pos: self.pos(), msg: "trailing input".into() })
        } else {
            Ok(())
        }
    }
}

/// Parse a full expression string.
pub fn parse(src: &str, sy: &Symbols) -> Result<Expr, ParseError> {
    if src.trim() == "0" {
        return Ok(Expr::zero());
    }
    let mut p = Parser::new(src, sy)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}
