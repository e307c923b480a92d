//! Expression and statement syntax trees and the recursive-descent parser.

use num_bigint::BigInt;

use super::lexer::{lex, Pos, Tok, Token};
use crate::error::Result;

/// Largest exponent or derivative order the parser accepts.
pub const MAX_EXPONENT: u32 = 255;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident(Ident),
    /// e followed by n primes.
    Prime(Box<Expr>, u32, Pos),
    /// e^n; `paren` records the `e^(n)` spelling.
    Pow(Box<Expr>, u32, bool, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    /// D^n(e) or T^n(e).
    Call(char, u32, Box<Expr>, Pos),
    /// :e₁ e₂ … e_k:, right-nested.
    NormalOrder(Vec<Expr>, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int(_) => Pos::default(),
            Expr::Ident(i) => i.pos,
            Expr::Prime(_, _, p) | Expr::Pow(_, _, _, p) | Expr::Mul(_, _, p) | Expr::Div(_, _, p) => *p,
            Expr::Call(_, _, _, p) | Expr::NormalOrder(_, p) => *p,
            Expr::Neg(e) | Expr::Add(e, _) | Expr::Sub(e, _) => e.pos(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieStmt {
    Basis(Vec<Ident>),
    Bracket(Ident, Ident, Expr),
    Form(Ident, Ident, Expr),
    Cartan(Vec<Ident>),
    Root(Ident, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineKind {
    Level(Expr, Option<Expr>),
    Cocycle(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Params(Vec<Ident>),
    Generators {
        names: Vec<Ident>,
        odd: bool,
        weight: Option<Expr>,
    },
    Bracket {
        label: Option<Ident>,
        quantum: bool,
        a: Ident,
        b: Ident,
        rhs: Expr,
    },
    Constraints(Vec<Expr>),
    Let(Ident, Expr),
    LieAlg(Vec<LieStmt>),
    Affine(Ident, AffineKind),
}

pub struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
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
            Err(self.pos().error(format!("expected '{c}', found {}", self.describe())))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Prime => "'''".into(),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<Ident> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Ident { name, pos })
            }
            _ => Err(pos.error(format!("expected identifier, found {}", self.describe()))),
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                match u32::try_from(n) {
                    Ok(n) if n <= MAX_EXPONENT => Ok(n),
                    _ => Err(pos.error(format!("exponent exceeds {MAX_EXPONENT}"))),
                }
            }
            _ => Err(pos.error(format!("expected integer, found {}", self.describe()))),
        }
    }

    pub fn at_end(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.pos().error(format!("unexpected {}", self.describe())))
        }
    }

    // ---- expressions

    pub fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?), pos);
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?), pos);
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.postfix()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        if self.eat('(') {
            let n = self.small_int()?;
            self.expect(')')?;
            return Ok(Expr::Pow(Box::new(base), n, true, pos));
        }
        let n = self.small_int()?;
        Ok(Expr::Pow(Box::new(base), n, false, pos))
    }

    fn postfix(&mut self) -> Result<Expr> {
        let e = self.atom()?;
        let pos = self.pos();
        let mut n = 0;
        while self.peek() == &Tok::Prime {
            self.bump();
            n += 1;
        }
        Ok(if n > 0 { Expr::Prime(Box::new(e), n, pos) } else { e })
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "D" || name == "T" {
                    let op = name.chars().next().expect("nonempty");
                    if self.peek() == &Tok::Sym('(') {
                        self.bump();
                        let e = self.expr()?;
                        self.expect(')')?;
                        return Ok(Expr::Call(op, 1, Box::new(e), pos));
                    }
                    if self.peek() == &Tok::Sym('^')
                        && matches!(self.peek2(), Tok::Int(_))
                        && self.toks.get(self.at + 2).is_some_and(|t| t.tok == Tok::Sym('('))
                    {
                        self.bump();
                        let n = self.small_int()?;
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        return Ok(Expr::Call(op, n, Box::new(e), pos));
                    }
                }
                Ok(Expr::Ident(Ident { name, pos }))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(':') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    if items.len() >= 2 && self.eat(':') {
                        break;
                    }
                    if self.at_end() {
                        return Err(self.pos().error("unterminated normally ordered product"));
                    }
                    items.push(self.power_item()?);
                }
                Ok(Expr::NormalOrder(items, pos))
            }
            _ => Err(pos.error(format!("expected expression, found {}", self.describe()))),
        }
    }

    /// Item inside :…:, a signed power-level expression.
    fn power_item(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.power_item()?)));
        }
        self.power()
    }

    fn expr_list(&mut self) -> Result<Vec<Expr>> {
        let mut v = vec![self.expr()?];
        while self.eat(',') {
            v.push(self.expr()?);
        }
        Ok(v)
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>> {
        let mut v = vec![self.ident()?];
        while self.eat(',') {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    // ---- statements

    pub fn file(&mut self) -> Result<Vec<Stmt>> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.stmt()?);
        }
        Ok(out)
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let kw = self.ident()?;
        let s = match kw.name.as_str() {
            "params" => Stmt::Params(self.ident_list()?),
            "generators" => {
                let names = self.ident_list()?;
                let mut odd = false;
                let mut weight = None;
                loop {
                    if self.is_keyword("odd") {
                        self.bump();
                        odd = true;
                    } else if self.is_keyword("weight") {
                        self.bump();
                        weight = Some(self.expr()?);
                    } else {
                        break;
                    }
                }
                Stmt::Generators { names, odd, weight }
            }
            "bracket" => {
                let label = match self.peek() {
                    Tok::Ident(_) => Some(self.ident()?),
                    _ => None,
                };
                let quantum = if self.eat('[') {
                    true
                } else {
                    self.expect('{')?;
                    false
                };
                let a = self.ident()?;
                self.expect(',')?;
                let b = self.ident()?;
                self.expect(if quantum { ']' } else { '}' })?;
                self.expect('=')?;
                let rhs = self.expr()?;
                Stmt::Bracket {
                    label,
                    quantum,
                    a,
                    b,
                    rhs,
                }
            }
            "constraints" => Stmt::Constraints(self.expr_list()?),
            "let" => {
                let name = self.ident()?;
                self.expect('=')?;
                Stmt::Let(name, self.expr()?)
            }
            "affine" => {
                let label = self.ident()?;
                self.expect('=')?;
                let kind = self.ident()?;
                match kind.name.as_str() {
                    "level" => {
                        let k = self.expr()?;
                        let shift = if self.is_keyword("shift") {
                            self.bump();
                            Some(self.expr()?)
                        } else {
                            None
                        };
                        Stmt::Affine(label, AffineKind::Level(k, shift))
                    }
                    "cocycle" => Stmt::Affine(label, AffineKind::Cocycle(self.expr()?)),
                    _ => return Err(kind.pos.error("expected 'level' or 'cocycle'")),
                }
            }
            "liealg" => {
                self.expect('{')?;
                let mut body = Vec::new();
                while !self.eat('}') {
                    if self.at_end() {
                        return Err(self.pos().error("unterminated liealg block"));
                    }
                    body.push(self.lie_stmt()?);
                }
                return Ok(Stmt::LieAlg(body));
            }
            other => return Err(kw.pos.error(format!("unknown statement '{other}'"))),
        };
        self.expect(';')?;
        Ok(s)
    }

    fn lie_stmt(&mut self) -> Result<LieStmt> {
        let s = if self.eat('[') {
            let a = self.ident()?;
            self.expect(',')?;
            let b = self.ident()?;
            self.expect(']')?;
            self.expect('=')?;
            LieStmt::Bracket(a, b, self.expr()?)
        } else if self.eat('(') {
            let a = self.ident()?;
            self.expect('|')?;
            let b = self.ident()?;
            self.expect(')')?;
            self.expect('=')?;
            LieStmt::Form(a, b, self.expr()?)
        } else {
            let kw = self.ident()?;
            match kw.name.as_str() {
                "basis" => LieStmt::Basis(self.ident_list()?),
                "cartan" => LieStmt::Cartan(self.ident_list()?),
                "root" => {
                    let r = self.ident()?;
                    self.expect('=')?;
                    LieStmt::Root(r, self.expr_list()?)
                }
                other => return Err(kw.pos.error(format!("unknown liealg statement '{other}'"))),
            }
        };
        self.expect(';')?;
        Ok(s)
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_file(src: &str) -> Result<Vec<Stmt>> {
    Parser::new(src)?.file()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("-u^2 + 3*v'").unwrap();
        let Expr::Add(a, b) = e else { panic!() };
        assert!(matches!(*a, Expr::Neg(_)));
        assert!(matches!(*b, Expr::Mul(..)));
    }

    #[test]
    fn calls_and_normal_order() {
        assert!(matches!(parse_expr("T^2(a)").unwrap(), Expr::Call('T', 2, _, _)));
        assert!(matches!(parse_expr("D^2").unwrap(), Expr::Pow(_, 2, false, _)));
        let Expr::NormalOrder(items, _) = parse_expr(":a :b c::").unwrap() else { panic!() };
        assert_eq!(items.len(), 2);
        let Expr::NormalOrder(items, _) = parse_expr(":a T(a) b:").unwrap() else { panic!() };
        assert_eq!(items.len(), 3);
        assert!(parse_expr(":a b").is_err());
    }

    #[test]
    fn exponent_cap() {
        assert!(parse_expr("u^(255)*D^255(v)*l^255").is_ok());
        for src in ["u^256", "u^(1000000)", "D^99999999999(u)", "l^4294967296"] {
            assert!(parse_expr(src).is_err(), "{src}");
        }
    }

    #[test]
    fn statements() {
        let src = "params c;\ngenerators u;\nbracket {u,u} = (D + 2*l)*u + c*l^3;\nbracket K {u,u} = l;";
        let s = parse_file(src).unwrap();
        assert_eq!(s.len(), 4);
        assert!(matches!(&s[3], Stmt::Bracket { label: Some(l), .. } if l.name == "K"));
        let err = parse_file("params c\ngenerators u;").unwrap_err();
        assert!(matches!(err, crate::Error::Parse { line: 2, col: 1, .. }));
    }
}
