//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | base ['^' exponent]
//! exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! base     := integer | ident | ident '[' ident (',' ident)* ']'
//!           | ident "'"* '(' expr ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Atom, Context, Exponent, Expr, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String, u32),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn run(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' || bytes[i] == b'E') {
                    return Err(Error::NonRational { pos: start });
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                toks.push((Tok::Num(n), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = text[start..i].to_string();
                let mut primes = 0;
                while i < bytes.len() && bytes[i] == b'\'' {
                    primes += 1;
                    i += 1;
                }
                toks.push((Tok::Ident(name, primes), start));
            } else if "+-*/^()[],".contains(c) {
                toks.push((Tok::Sym(c), i));
                i += 1;
            } else if c == '.' {
                return Err(Error::NonRational { pos: i });
            } else {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    ctx: &'a Context,
}

/// Parses `text` into its canonical expression.
pub fn parse(text: &str, ctx: &Context) -> Result<Expr> {
    let mut p = Parser {
        toks: Lexer::run(text)?.toks,
        at: 0,
        ctx,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        other => Err(p.error(format!("unexpected {}", describe(other)))),
    }
}

impl Expr {
    pub fn parse(text: &str, ctx: &Context) -> Result<Expr> {
        parse(text, ctx)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s, _) => format!("identifier `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

impl Parser<'_> {
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

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc.accumulate(self.term()?);
            } else if self.eat('-') {
                acc.accumulate(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if *self.peek() == Tok::Sym('/') {
                let pos = self.pos();
                self.bump();
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(Error::Domain(format!("division by zero at offset {pos}")));
                }
                acc = acc.mul(&d.pow_int(-1)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.bump() {
            Tok::Num(n) => {
                let v = n
                    .to_i64()
                    .ok_or_else(|| self.error("exponent out of range"))?;
                Ok(if neg { -v } else { v })
            }
            other => Err(self.error(format!("expected integer, found {}", describe(&other)))),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if self.eat('(') {
            let num = self.integer()?;
            let den = if self.eat('/') { self.integer()? } else { 1 };
            if den == 0 {
                return Err(self.error("zero denominator in exponent"));
            }
            self.expect(')')?;
            Ok(Exponent::new(num, den))
        } else {
            Ok(Exponent::from_integer(self.integer()?))
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::constant(BigRational::from_integer(n))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name, primes) => self.identifier(name, primes, pos),
            other => Err(Error::Syntax {
                pos,
                msg: format!("unexpected {}", describe(&other)),
            }),
        }
    }

    fn identifier(&mut self, name: String, primes: u32, pos: usize) -> Result<Expr> {
        let sym = self.ctx.lookup(&name).ok_or_else(|| Error::Undeclared {
            name: name.clone(),
            pos,
        })?;
        if primes > 0 && sym != Symbol::Func {
            return Err(Error::Syntax {
                pos,
                msg: format!("`{name}` is not a function symbol"),
            });
        }
        match sym {
            Symbol::Func => {
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::atom(Atom::func(name, primes, arg)))
            }
            Symbol::Dep(a) => {
                if !self.eat('[') {
                    return Ok(Expr::jet(a, []));
                }
                let mut idx = Vec::new();
                loop {
                    let ipos = self.pos();
                    match self.bump() {
                        Tok::Ident(v, 0) => match self.ctx.lookup(&v) {
                            Some(Symbol::Indep(i)) => idx.push(i),
                            Some(_) => {
                                return Err(Error::Syntax {
                                    pos: ipos,
                                    msg: format!("`{v}` is not an independent variable"),
                                })
                            }
                            None => return Err(Error::Undeclared { name: v, pos: ipos }),
                        },
                        other => {
                            return Err(Error::Syntax {
                                pos: ipos,
                                msg: format!(
                                    "expected derivative variable, found {}",
                                    describe(&other)
                                ),
                            })
                        }
                    }
                    if self.eat(']') {
                        break;
                    }
                    self.expect(',')?;
                }
                Ok(Expr::jet(a, idx))
            }
            Symbol::Indep(i) => Ok(Expr::indep(i)),
            Symbol::Param => Ok(Expr::param(name)),
        }
    }
}
