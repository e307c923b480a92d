//! Declaration files: evaluation of syntax trees into engine objects and
//! canonical printing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::ast::{self, AffineKind, Expr, Ident, LieStmt, Stmt};
use super::lexer::Pos;
use super::print::{Names, Style};
use crate::coeff::Coeff;
use crate::diffalg::{DiffPoly, LambdaPoly};
use crate::error::{Error, Result};
use crate::liealg::{LieAlgebraData, Root, RootData};
use crate::pva::{self, PvaSpec};
use crate::quantum::{Lca, Letter, VaExpr, VaLambda};

const RESERVED: &[&str] = &["l", "D", "T", "vac"];

/// Symbols visible to the evaluator.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub params: Vec<String>,
    pub gens: Vec<String>,
    pub poly_lets: BTreeMap<String, DiffPoly>,
    pub va_lets: BTreeMap<String, VaExpr>,
    pub basis: Vec<String>,
}

type OpPoly = BTreeMap<(u32, u32), Coeff>;

fn op_const(c: Coeff) -> OpPoly {
    let mut m = OpPoly::new();
    if !c.is_zero() {
        m.insert((0, 0), c);
    }
    m
}

fn op_add(a: &OpPoly, b: &OpPoly, sign: i64) -> OpPoly {
    let mut m = a.clone();
    for (k, c) in b {
        let v = &m.get(k).cloned().unwrap_or_else(Coeff::zero) + &(c * &Coeff::int(sign));
        if v.is_zero() {
            m.remove(k);
        } else {
            m.insert(*k, v);
        }
    }
    m
}

fn op_mul(a: &OpPoly, b: &OpPoly) -> OpPoly {
    let mut m = OpPoly::new();
    for ((i, j), c) in a {
        for ((k, l), d) in b {
            let mut t = OpPoly::new();
            t.insert((i + k, j + l), c * d);
            m = op_add(&m, &t, 1);
        }
    }
    m
}

fn op_scale(a: &OpPoly, c: &Coeff) -> OpPoly {
    a.iter()
        .filter(|_| !c.is_zero())
        .map(|(k, v)| (*k, v * c))
        .collect()
}

fn has_second(a: &OpPoly) -> bool {
    a.keys().any(|(_, m)| *m > 0)
}

fn undeclared(id: &Ident) -> Error {
    id.pos.error(format!("undeclared identifier '{}'", id.name))
}

fn int(n: &num_bigint::BigInt) -> Coeff {
    Coeff::from_bigint(n.clone())
}

impl Scope {
    pub fn scalar(&self, e: &Expr) -> Result<Coeff> {
        match e {
            Expr::Int(n) => Ok(int(n)),
            Expr::Ident(id) if self.params.contains(&id.name) => Ok(Coeff::param(&id.name)),
            Expr::Ident(id) if self.gens.contains(&id.name) || RESERVED.contains(&id.name.as_str()) => {
                Err(id.pos.error(format!("'{}' is not a scalar", id.name)))
            }
            Expr::Ident(id) => Err(undeclared(id)),
            Expr::Neg(a) => Ok(-&self.scalar(a)?),
            Expr::Add(a, b) => Ok(&self.scalar(a)? + &self.scalar(b)?),
            Expr::Sub(a, b) => Ok(&self.scalar(a)? - &self.scalar(b)?),
            Expr::Mul(a, b, _) => Ok(&self.scalar(a)? * &self.scalar(b)?),
            Expr::Div(a, b, pos) => self.divide(&self.scalar(a)?, b, *pos),
            Expr::Pow(a, n, _, _) => Ok(self.scalar(a)?.pow(*n as i32)),
            other => Err(other.pos().error("expected a scalar")),
        }
    }

    fn divide(&self, a: &Coeff, b: &Expr, pos: Pos) -> Result<Coeff> {
        let d = self.scalar(b)?;
        a.checked_div(&d).ok_or_else(|| pos.error("division by zero"))
    }

    fn inverse(&self, b: &Expr, pos: Pos) -> Result<Coeff> {
        self.divide(&Coeff::one(), b, pos)
    }

    // ---- classical: λ-polynomials over differential polynomials

    pub fn lambda(&self, e: &Expr) -> Result<LambdaPoly> {
        match self.pval(e)? {
            PVal::Field(f) => Ok(f),
            PVal::Op(o) if !has_second(&o) => Ok(op_to_lambda(&o)),
            PVal::Op(_) => Err(e.pos().error("D must act on a field")),
        }
    }

    pub fn poly(&self, e: &Expr) -> Result<DiffPoly> {
        let p = self.lambda(e)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(e.pos().error("expected a differential polynomial without l"));
        }
        Ok(p.at_zero())
    }

    fn pval(&self, e: &Expr) -> Result<PVal> {
        Ok(match e {
            Expr::Int(n) => PVal::Op(op_const(int(n))),
            Expr::Ident(id) => match id.name.as_str() {
                "l" => PVal::Op([((1, 0), Coeff::one())].into()),
                "D" => PVal::Op([((0, 1), Coeff::one())].into()),
                "T" | "vac" => return Err(id.pos.error(format!("'{}' is only valid in vertex-algebra input", id.name))),
                name => {
                    if let Some(g) = self.gens.iter().position(|x| x == name) {
                        PVal::Field(DiffPoly::var(g, 0).into())
                    } else if let Some(f) = self.poly_lets.get(name) {
                        PVal::Field(f.clone().into())
                    } else if self.params.iter().any(|x| x == name) {
                        PVal::Op(op_const(Coeff::param(name)))
                    } else {
                        return Err(undeclared(id));
                    }
                }
            },
            Expr::Neg(a) => self.pval(a)?.scale(&Coeff::int(-1)),
            Expr::Add(a, b) => self.pval(a)?.add(self.pval(b)?, 1, e.pos())?,
            Expr::Sub(a, b) => self.pval(a)?.add(self.pval(b)?, -1, e.pos())?,
            Expr::Div(a, b, pos) => self.pval(a)?.scale(&self.inverse(b, *pos)?),
            Expr::Mul(a, b, pos) => match (self.pval(a)?, self.pval(b)?) {
                (PVal::Op(x), PVal::Op(y)) => PVal::Op(op_mul(&x, &y)),
                (PVal::Op(x), PVal::Field(f)) => PVal::Field(apply_op(&x, &f)),
                (PVal::Field(f), PVal::Op(x)) if !has_second(&x) => PVal::Field(&f * &op_to_lambda(&x)),
                (PVal::Field(_), PVal::Op(_)) => return Err(pos.error("D must act on a field from the left")),
                (PVal::Field(f), PVal::Field(g)) => PVal::Field(&f * &g),
            },
            Expr::Pow(a, n, paren, pos) => {
                if let (true, Expr::Ident(id)) = (*paren, a.as_ref()) {
                    if let Some(g) = self.gens.iter().position(|x| *x == id.name) {
                        return Ok(PVal::Field(DiffPoly::var(g, *n).into()));
                    }
                }
                match self.pval(a)? {
                    PVal::Op(x) => PVal::Op((0..*n).fold(op_const(Coeff::one()), |acc, _| op_mul(&acc, &x))),
                    PVal::Field(f) => {
                        let one: LambdaPoly = DiffPoly::one().into();
                        PVal::Field((0..*n).fold(one, |acc, _| &acc * &f))
                    }
                }
                .check(*pos)?
            }
            Expr::Prime(a, n, pos) | Expr::Call('D', n, a, pos) => match self.pval(a)? {
                PVal::Field(f) => PVal::Field((0..*n).fold(f, |acc, _| acc.derivative())),
                PVal::Op(x) if !has_second(&x) => PVal::Field((0..*n).fold(op_to_lambda(&x), |acc, _| acc.derivative())),
                PVal::Op(_) => return Err(pos.error("cannot differentiate an operator")),
            },
            Expr::Call(_, _, _, pos) | Expr::NormalOrder(_, pos) => {
                return Err(pos.error("vertex-algebra syntax in a classical expression"))
            }
        })
    }

    // ---- quantum: λ-polynomials over normally ordered expressions

    pub fn va_lambda(&self, lca: &Lca, e: &Expr) -> Result<VaLambda> {
        match self.qval(lca, e)? {
            QVal::Field(f) => Ok(f),
            QVal::Op(o) if !has_second(&o) => {
                let mut p = VaLambda::zero();
                for ((k, _), c) in &o {
                    p.add_at(*k, &VaExpr::vac().scale(c));
                }
                Ok(p)
            }
            QVal::Op(_) => Err(e.pos().error("T must act on a field")),
        }
    }

    pub fn va_expr(&self, lca: &Lca, e: &Expr) -> Result<VaExpr> {
        let p = self.va_lambda(lca, e)?;
        if p.coeffs().any(|(k, _)| k > 0) {
            return Err(e.pos().error("expected an expression without l"));
        }
        Ok(p.coeff(0))
    }

    fn qval(&self, lca: &Lca, e: &Expr) -> Result<QVal> {
        Ok(match e {
            Expr::Int(n) => QVal::Op(op_const(int(n))),
            Expr::Ident(id) => match id.name.as_str() {
                "l" => QVal::Op([((1, 0), Coeff::one())].into()),
                "T" => QVal::Op([((0, 1), Coeff::one())].into()),
                "vac" => QVal::Field(VaLambda::constant(VaExpr::vac())),
                "D" => return Err(id.pos.error("'D' is only valid in classical input")),
                name => {
                    if let Some(g) = self.gens.iter().position(|x| x == name) {
                        QVal::Field(VaLambda::constant(VaExpr::gen(g)))
                    } else if let Some(f) = self.va_lets.get(name) {
                        QVal::Field(VaLambda::constant(f.clone()))
                    } else if self.params.iter().any(|x| x == name) {
                        QVal::Op(op_const(Coeff::param(name)))
                    } else {
                        return Err(undeclared(id));
                    }
                }
            },
            Expr::Neg(a) => self.qval(lca, a)?.scale(&Coeff::int(-1)),
            Expr::Add(a, b) => self.qval(lca, a)?.add(self.qval(lca, b)?, 1, e.pos())?,
            Expr::Sub(a, b) => self.qval(lca, a)?.add(self.qval(lca, b)?, -1, e.pos())?,
            Expr::Div(a, b, pos) => self.qval(lca, a)?.scale(&self.inverse(b, *pos)?),
            Expr::Mul(a, b, pos) => match (self.qval(lca, a)?, self.qval(lca, b)?) {
                (QVal::Op(x), QVal::Op(y)) => QVal::Op(op_mul(&x, &y)),
                (QVal::Op(x), QVal::Field(f)) => QVal::Field(apply_t(lca, &x, &f)),
                (QVal::Field(f), QVal::Op(x)) if !has_second(&x) => QVal::Field(apply_t(lca, &x, &f)),
                (QVal::Field(_), QVal::Op(_)) => return Err(pos.error("T must act on a field from the left")),
                (QVal::Field(_), QVal::Field(_)) => {
                    return Err(pos.error("product of two fields; write :A B: for the normally ordered product"))
                }
            },
            Expr::Pow(a, n, paren, pos) => {
                if let (true, Expr::Ident(id)) = (*paren, a.as_ref()) {
                    if let Some(g) = self.gens.iter().position(|x| *x == id.name) {
                        return Ok(QVal::Field(VaLambda::constant(VaExpr::letter(Letter { gen: g, t: *n }))));
                    }
                }
                match self.qval(lca, a)? {
                    QVal::Op(x) => QVal::Op((0..*n).fold(op_const(Coeff::one()), |acc, _| op_mul(&acc, &x))),
                    QVal::Field(f) if *n == 1 => QVal::Field(f),
                    QVal::Field(_) => return Err(pos.error("power of a field; use :A B:")),
                }
            }
            Expr::Prime(a, n, pos) | Expr::Call('T', n, a, pos) => match self.qval(lca, a)? {
                QVal::Field(f) => QVal::Field(apply_t(lca, &[((0, *n), Coeff::one())].into(), &f)),
                QVal::Op(_) => return Err(pos.error("T must act on a field")),
            },
            Expr::Call(_, _, _, pos) => return Err(pos.error("'D' is only valid in classical input")),
            Expr::NormalOrder(items, pos) => {
                let mut vals = Vec::new();
                for it in items {
                    vals.push(self.va_expr(lca, it).map_err(|_| pos.error("normally ordered factors must be l-free fields"))?);
                }
                let last = vals.pop().expect("at least two items");
                QVal::Field(VaLambda::constant(vals.iter().rev().fold(last, |acc, a| lca.no(a, &acc))))
            }
        })
    }

    // ---- Lie algebra elements

    pub fn lie_elem(&self, e: &Expr) -> Result<Vec<Coeff>> {
        match self.lval(e)? {
            LVal::Vec(v) => Ok(v),
            LVal::Scalar(c) if c.is_zero() => Ok(vec![Coeff::zero(); self.basis.len()]),
            LVal::Scalar(_) => Err(e.pos().error("expected an element of the Lie algebra")),
        }
    }

    fn lval(&self, e: &Expr) -> Result<LVal> {
        let d = self.basis.len();
        let combine = |a: LVal, b: LVal, s: i64, pos: Pos| -> Result<LVal> {
            match (a, b) {
                (LVal::Scalar(x), LVal::Scalar(y)) => Ok(LVal::Scalar(&x + &(&y * &Coeff::int(s)))),
                (LVal::Vec(x), LVal::Vec(y)) => Ok(LVal::Vec(x.iter().zip(&y).map(|(p, q)| p + &(q * &Coeff::int(s))).collect())),
                _ => Err(pos.error("cannot add a scalar to a Lie algebra element")),
            }
        };
        Ok(match e {
            Expr::Ident(id) if self.basis.contains(&id.name) => {
                let mut v = vec![Coeff::zero(); d];
                v[self.basis.iter().position(|b| *b == id.name).expect("present")] = Coeff::one();
                LVal::Vec(v)
            }
            Expr::Neg(a) => self.lval(a)?.scale(&Coeff::int(-1)),
            Expr::Add(a, b) => combine(self.lval(a)?, self.lval(b)?, 1, e.pos())?,
            Expr::Sub(a, b) => combine(self.lval(a)?, self.lval(b)?, -1, e.pos())?,
            Expr::Mul(a, b, pos) => match (self.lval(a)?, self.lval(b)?) {
                (LVal::Scalar(x), LVal::Scalar(y)) => LVal::Scalar(&x * &y),
                (LVal::Scalar(x), v) | (v, LVal::Scalar(x)) => v.scale(&x),
                _ => return Err(pos.error("product of two Lie algebra elements; use [x, y]")),
            },
            Expr::Div(a, b, pos) => self.lval(a)?.scale(&self.inverse(b, *pos)?),
            other => LVal::Scalar(self.scalar(other)?),
        })
    }
}

enum PVal {
    Op(OpPoly),
    Field(LambdaPoly),
}

enum QVal {
    Op(OpPoly),
    Field(VaLambda),
}

enum LVal {
    Scalar(Coeff),
    Vec(Vec<Coeff>),
}

impl LVal {
    fn scale(self, c: &Coeff) -> LVal {
        match self {
            LVal::Scalar(x) => LVal::Scalar(&x * c),
            LVal::Vec(v) => LVal::Vec(v.iter().map(|x| x * c).collect()),
        }
    }
}

fn op_to_lambda(o: &OpPoly) -> LambdaPoly {
    let mut p = LambdaPoly::zero();
    for ((k, _), c) in o {
        p.add_at(*k, &DiffPoly::constant(c.clone()));
    }
    p
}

fn apply_op(o: &OpPoly, f: &LambdaPoly) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for ((k, m), c) in o {
        let g = (0..*m).fold(f.clone(), |acc, _| acc.derivative());
        out += &g.mul_lambda_pow(*k).scale_coeff(c);
    }
    out
}

fn apply_t(lca: &Lca, o: &OpPoly, f: &VaLambda) -> VaLambda {
    let mut out = VaLambda::zero();
    for ((k, m), c) in o {
        for (j, e) in f.coeffs() {
            out.add_at(j + k, &lca.t_pow(e, *m).scale(c));
        }
    }
    out
}

impl PVal {
    fn scale(self, c: &Coeff) -> PVal {
        match self {
            PVal::Op(o) => PVal::Op(op_scale(&o, c)),
            PVal::Field(f) => PVal::Field(f.scale_coeff(c)),
        }
    }

    fn add(self, other: PVal, sign: i64, pos: Pos) -> Result<PVal> {
        let s = Coeff::int(sign);
        Ok(match (self, other) {
            (PVal::Op(a), PVal::Op(b)) => PVal::Op(op_add(&a, &b, sign)),
            (PVal::Field(f), PVal::Field(g)) => PVal::Field(&f + &g.scale_coeff(&s)),
            (PVal::Op(a), PVal::Field(g)) if !has_second(&a) => PVal::Field(&op_to_lambda(&a) + &g.scale_coeff(&s)),
            (PVal::Field(f), PVal::Op(b)) if !has_second(&b) => PVal::Field(&f + &op_to_lambda(&b).scale_coeff(&s)),
            _ => return Err(pos.error("cannot add the operator D to a field")),
        })
    }

    fn check(self, _pos: Pos) -> Result<PVal> {
        Ok(self)
    }
}

impl QVal {
    fn scale(self, c: &Coeff) -> QVal {
        match self {
            QVal::Op(o) => QVal::Op(op_scale(&o, c)),
            QVal::Field(f) => QVal::Field(f.scale(c)),
        }
    }

    fn add(self, other: QVal, sign: i64, pos: Pos) -> Result<QVal> {
        let s = Coeff::int(sign);
        let vac_field = |o: &OpPoly| {
            let mut p = VaLambda::zero();
            for ((k, _), c) in o {
                p.add_at(*k, &VaExpr::vac().scale(c));
            }
            p
        };
        Ok(match (self, other) {
            (QVal::Op(a), QVal::Op(b)) => QVal::Op(op_add(&a, &b, sign)),
            (QVal::Field(f), QVal::Field(g)) => QVal::Field(f.add(&g.scale(&s))),
            (QVal::Op(a), QVal::Field(g)) if !has_second(&a) => QVal::Field(vac_field(&a).add(&g.scale(&s))),
            (QVal::Field(f), QVal::Op(b)) if !has_second(&b) => QVal::Field(f.add(&vac_field(&b).scale(&s))),
            _ => return Err(pos.error("cannot add the operator T to a field")),
        })
    }
}

// ---- declaration files

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub odd: bool,
    pub weight: Option<Coeff>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Poly(DiffPoly),
    Va(VaExpr),
}

/// A parsed declaration file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceSpec {
    pub params: Vec<String>,
    pub generators: Vec<GenDecl>,
    pub lie: Option<LieAlgebraData>,
    /// Classical bracket tables by label; the empty label is unlabeled.
    pub brackets: BTreeMap<String, PvaSpec>,
    pub va: Option<Lca>,
    pub constraints: Vec<DiffPoly>,
    pub lets: Vec<(String, Binding)>,
}

impl SourceSpec {
    pub fn gen_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn names(&self) -> Names {
        Names::new(self.gen_names())
    }

    pub fn scope(&self) -> Scope {
        let mut s = Scope {
            params: self.params.clone(),
            gens: self.gen_names(),
            basis: self.lie.as_ref().map(|l| l.basis.clone()).unwrap_or_default(),
            ..Scope::default()
        };
        for (n, b) in &self.lets {
            match b {
                Binding::Poly(p) => {
                    s.poly_lets.insert(n.clone(), p.clone());
                }
                Binding::Va(v) => {
                    s.va_lets.insert(n.clone(), v.clone());
                }
            }
        }
        s
    }

    pub fn bracket(&self, label: &str) -> Result<&PvaSpec> {
        self.brackets.get(label).ok_or_else(|| {
            let have: Vec<String> = self.brackets.keys().map(|k| if k.is_empty() { "(unlabeled)".into() } else { k.clone() }).collect();
            Error::Invalid(format!("no bracket labeled '{label}' (have: {})", have.join(", ")))
        })
    }

    /// Parse a classical expression in this file's scope.
    pub fn parse_poly(&self, src: &str) -> Result<DiffPoly> {
        self.scope().poly(&ast::parse_expr(src)?)
    }

    pub fn parse_lambda(&self, src: &str) -> Result<LambdaPoly> {
        self.scope().lambda(&ast::parse_expr(src)?)
    }

    pub fn parse_va(&self, src: &str) -> Result<VaExpr> {
        let lca = self.va.as_ref().ok_or_else(|| Error::Invalid("file declares no vertex-algebra brackets".into()))?;
        self.scope().va_expr(lca, &ast::parse_expr(src)?)
    }

    pub fn parse_lie_elem(&self, src: &str) -> Result<Vec<Coeff>> {
        if self.lie.is_none() {
            return Err(Error::Invalid("file declares no liealg block".into()));
        }
        self.scope().lie_elem(&ast::parse_expr(src)?)
    }
}

fn check_new_name(id: &Ident, taken: &[String]) -> Result<()> {
    if RESERVED.contains(&id.name.as_str()) {
        return Err(id.pos.error(format!("'{}' is reserved", id.name)));
    }
    if taken.contains(&id.name) {
        return Err(id.pos.error(format!("'{}' is already declared", id.name)));
    }
    Ok(())
}

fn build_lie(scope: &Scope, body: &[LieStmt]) -> Result<LieAlgebraData> {
    let mut basis: Vec<String> = Vec::new();
    for s in body {
        if let LieStmt::Basis(names) = s {
            for n in names {
                let mut taken = basis.clone();
                taken.extend(scope.params.iter().cloned());
                check_new_name(n, &taken)?;
                basis.push(n.name.clone());
            }
        }
    }
    let mut l = LieAlgebraData::new(basis.clone());
    let sc = Scope {
        basis: basis.clone(),
        ..scope.clone()
    };
    let idx = |id: &Ident| -> Result<usize> {
        basis.iter().position(|b| *b == id.name).ok_or_else(|| undeclared(id))
    };
    let mut cartan: Option<Vec<usize>> = None;
    let mut roots = Vec::new();
    for s in body {
        match s {
            LieStmt::Basis(_) => {}
            LieStmt::Bracket(a, b, rhs) => {
                let (i, j) = (idx(a)?, idx(b)?);
                l.set_bracket(i, j, sc.lie_elem(rhs)?);
            }
            LieStmt::Form(a, b, rhs) => {
                let (i, j) = (idx(a)?, idx(b)?);
                l.set_form(i, j, sc.scalar(rhs)?);
            }
            LieStmt::Cartan(names) => {
                cartan = Some(names.iter().map(idx).collect::<Result<_>>()?);
            }
            LieStmt::Root(r, vals) => {
                let Some(c) = &cartan else {
                    return Err(r.pos.error("root declared before cartan"));
                };
                if vals.len() != c.len() {
                    return Err(r.pos.error(format!("root needs {} values, got {}", c.len(), vals.len())));
                }
                roots.push(Root {
                    vector: idx(r)?,
                    values: vals.iter().map(|v| sc.scalar(v)).collect::<Result<_>>()?,
                });
            }
        }
    }
    if let Some(c) = cartan {
        l.roots = Some(RootData { cartan: c, roots });
    }
    Ok(l)
}

/// Build a SourceSpec from declaration-file text.
pub fn parse_source(src: &str) -> Result<SourceSpec> {
    let stmts = ast::parse_file(src)?;
    let mut spec = SourceSpec::default();
    let mut scope = Scope::default();

    for s in &stmts {
        if let Stmt::Params(ps) = s {
            for p in ps {
                check_new_name(p, &scope.params)?;
                scope.params.push(p.name.clone());
            }
        }
    }
    for s in &stmts {
        if let Stmt::LieAlg(body) = s {
            if spec.lie.is_some() {
                return Err(Error::Invalid("more than one liealg block".into()));
            }
            let l = build_lie(&scope, body)?;
            scope.basis = l.basis.clone();
            spec.lie = Some(l);
        }
    }
    for s in &stmts {
        if let Stmt::Generators { names, odd, weight } = s {
            let w = weight.as_ref().map(|w| scope.scalar(w)).transpose()?;
            for n in names {
                let mut taken = scope.gens.clone();
                taken.extend(scope.params.iter().cloned());
                check_new_name(n, &taken)?;
                scope.gens.push(n.name.clone());
                spec.generators.push(GenDecl {
                    name: n.name.clone(),
                    odd: *odd,
                    weight: w.clone(),
                });
            }
        }
    }

    for s in &stmts {
        if let Stmt::Affine(label, kind) = s {
            let l = spec.lie.as_ref().ok_or_else(|| label.pos.error("affine needs a liealg block"))?;
            if scope.gens.is_empty() {
                for b in &l.basis {
                    scope.gens.push(b.clone());
                    spec.generators.push(GenDecl {
                        name: b.clone(),
                        odd: false,
                        weight: None,
                    });
                }
            } else if scope.gens != l.basis {
                return Err(label.pos.error("affine brackets need the generators to be the liealg basis"));
            }
            let table = match kind {
                AffineKind::Level(k, shift) => {
                    let sh = shift.as_ref().map(|e| scope.lie_elem(e)).transpose()?;
                    pva::affine(l, &scope.scalar(k)?, sh.as_deref())?
                }
                AffineKind::Cocycle(e) => pva::affine_cocycle(l, &scope.lie_elem(e)?)?,
            };
            if spec.brackets.insert(label.name.clone(), table).is_some() {
                return Err(label.pos.error(format!("bracket '{}' defined twice", label.name)));
            }
        }
    }

    let n = scope.gens.len();
    let brackets: Vec<&Stmt> = stmts.iter().filter(|s| matches!(s, Stmt::Bracket { .. })).collect();
    let quantum = brackets.iter().any(|s| matches!(s, Stmt::Bracket { quantum: true, .. }));
    if quantum && brackets.iter().any(|s| matches!(s, Stmt::Bracket { quantum: false, .. })) {
        return Err(Error::Invalid("file mixes classical {a,b} and quantum [a,b] brackets".into()));
    }
    let gen_idx = |id: &Ident| -> Result<usize> {
        scope.gens.iter().position(|g| *g == id.name).ok_or_else(|| undeclared(id))
    };
    if quantum {
        let mut lca = Lca::new(
            scope.gens.clone(),
            spec.generators.iter().map(|g| g.odd).collect(),
            spec.generators.iter().map(|g| g.weight.clone()).collect(),
            vec![vec![VaLambda::zero(); n]; n],
        )?;
        let mut given = vec![vec![false; n]; n];
        for s in &brackets {
            let Stmt::Bracket { label, a, b, rhs, .. } = s else { unreachable!() };
            if let Some(l) = label {
                return Err(l.pos.error("quantum brackets take no label"));
            }
            let (i, j) = (gen_idx(a)?, gen_idx(b)?);
            if given[i][j] {
                return Err(a.pos.error(format!("bracket [{},{}] given twice", a.name, b.name)));
            }
            let v = scope.va_lambda(&lca, rhs)?;
            let want = lca.odd[i] ^ lca.odd[j];
            for (_, e) in v.coeffs() {
                if lca.parity(e).is_some_and(|p| p != want) || lca.parity(e).is_none() {
                    return Err(rhs.pos().error("parity mismatch in bracket value"));
                }
            }
            lca.table[i][j] = v;
            given[i][j] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if given[i][j] && !given[j][i] {
                    let p = if lca.odd[i] && lca.odd[j] { 1 } else { -1 };
                    lca.table[j][i] = lca.reflect(&lca.table[i][j]).scale(&Coeff::int(p));
                    given[j][i] = true;
                }
            }
        }
        spec.va = Some(lca);
    } else {
        let mut tables: BTreeMap<String, (Vec<Vec<LambdaPoly>>, Vec<Vec<bool>>)> = BTreeMap::new();
        for s in &brackets {
            let Stmt::Bracket { label, a, b, rhs, .. } = s else { unreachable!() };
            let key = label.as_ref().map(|l| l.name.clone()).unwrap_or_default();
            if spec.brackets.contains_key(&key) {
                return Err(a.pos.error(format!("bracket '{key}' already defined by an affine statement")));
            }
            let (t, given) = tables
                .entry(key)
                .or_insert_with(|| (vec![vec![LambdaPoly::zero(); n]; n], vec![vec![false; n]; n]));
            let (i, j) = (gen_idx(a)?, gen_idx(b)?);
            if given[i][j] {
                return Err(a.pos.error(format!("bracket {{{},{}}} given twice", a.name, b.name)));
            }
            t[i][j] = scope.lambda(rhs)?;
            given[i][j] = true;
        }
        for (key, (mut t, given)) in tables {
            for i in 0..n {
                for j in 0..n {
                    if given[i][j] && !given[j][i] {
                        t[j][i] = -&t[i][j].reflect();
                    }
                }
            }
            spec.brackets.insert(key, PvaSpec::new(scope.gens.clone(), t)?);
        }
    }

    for s in &stmts {
        if let Stmt::Let(name, rhs) = s {
            let mut taken = scope.gens.clone();
            taken.extend(scope.params.iter().cloned());
            taken.extend(spec.lets.iter().map(|(n, _)| n.clone()));
            check_new_name(name, &taken)?;
            let b = match &spec.va {
                Some(lca) => {
                    let v = scope.va_expr(lca, rhs)?;
                    scope.va_lets.insert(name.name.clone(), v.clone());
                    Binding::Va(v)
                }
                None => {
                    let p = scope.poly(rhs)?;
                    scope.poly_lets.insert(name.name.clone(), p.clone());
                    Binding::Poly(p)
                }
            };
            spec.lets.push((name.name.clone(), b));
        }
    }
    for s in &stmts {
        if let Stmt::Constraints(cs) = s {
            for c in cs {
                spec.constraints.push(scope.poly(c)?);
            }
        }
    }
    spec.params = scope.params;
    Ok(spec)
}

fn lie_elem_text(basis: &[String], v: &[Coeff]) -> String {
    let p = v
        .iter()
        .enumerate()
        .fold(DiffPoly::zero(), |acc, (i, c)| &acc + &DiffPoly::var(i, 0).scale(c));
    Names::new(basis.to_vec()).poly(&p)
}

/// Canonical text of a declaration file; parsing it gives back `spec`.
pub fn print_source(spec: &SourceSpec) -> String {
    let mut s = String::new();
    if !spec.params.is_empty() {
        let _ = writeln!(s, "params {};", spec.params.join(", "));
    }
    if let Some(l) = &spec.lie {
        let _ = writeln!(s, "liealg {{");
        let _ = writeln!(s, "  basis {};", l.basis.join(", "));
        let d = l.dim();
        for i in 0..d {
            for j in i + 1..d {
                if l.structure[i][j].iter().any(|c| !c.is_zero()) {
                    let _ = writeln!(s, "  [{}, {}] = {};", l.basis[i], l.basis[j], lie_elem_text(&l.basis, &l.structure[i][j]));
                }
            }
        }
        for i in 0..d {
            for j in i..d {
                if !l.form[i][j].is_zero() {
                    let _ = writeln!(s, "  ({}|{}) = {};", l.basis[i], l.basis[j], l.form[i][j]);
                }
            }
        }
        if let Some(r) = &l.roots {
            let names: Vec<&str> = r.cartan.iter().map(|&i| l.basis[i].as_str()).collect();
            let _ = writeln!(s, "  cartan {};", names.join(", "));
            for root in &r.roots {
                let vals: Vec<String> = root.values.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(s, "  root {} = {};", l.basis[root.vector], vals.join(", "));
            }
        }
        let _ = writeln!(s, "}}");
    }
    for group in spec.generators.chunk_by(|a, b| a.odd == b.odd && a.weight == b.weight) {
        let names: Vec<&str> = group.iter().map(|g| g.name.as_str()).collect();
        let mut line = format!("generators {}", names.join(", "));
        if group[0].odd {
            line.push_str(" odd");
        }
        if let Some(w) = &group[0].weight {
            let _ = write!(line, " weight {w}");
        }
        let _ = writeln!(s, "{line};");
    }
    let names = spec.names();
    for (label, t) in &spec.brackets {
        let lab = if label.is_empty() { String::new() } else { format!("{label} ") };
        let n = t.ngens();
        for i in 0..n {
            for j in 0..n {
                if t.table[i][j].is_zero() && t.table[j][i].is_zero() {
                    continue;
                }
                let _ = writeln!(s, "bracket {lab}{{{},{}}} = {};", names.gens[i], names.gens[j], names.lambda(&t.table[i][j]));
            }
        }
    }
    if let Some(lca) = &spec.va {
        let n = lca.ngens();
        for i in 0..n {
            for j in 0..n {
                if lca.table[i][j].is_zero() && lca.table[j][i].is_zero() {
                    continue;
                }
                let _ = writeln!(s, "bracket [{},{}] = {};", lca.names[i], lca.names[j], lca.display_lambda(&lca.table[i][j], Style::Text));
            }
        }
    }
    for (n, b) in &spec.lets {
        let v = match (b, &spec.va) {
            (Binding::Va(v), Some(lca)) => lca.display(v, Style::Text),
            (Binding::Poly(p), _) => names.poly(p),
            (Binding::Va(_), None) => unreachable!("vertex-algebra binding without brackets"),
        };
        let _ = writeln!(s, "let {n} = {v};");
    }
    if !spec.constraints.is_empty() {
        let cs: Vec<String> = spec.constraints.iter().map(|c| names.poly(c)).collect();
        let _ = writeln!(s, "constraints {};", cs.join(", "));
    }
    s
}
