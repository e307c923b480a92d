//! Vertex-algebra λ-brackets on normally ordered words in the generators of
//! a Lie conformal algebra.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::coeff::{binomial, Coeff};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraData;
use crate::syntax::print::{coeff_factor, join_terms, Term};
use crate::syntax::Style;

pub mod modes;

/// T^t g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub t: u32,
}

/// Right-nested normally ordered word :d₁:d₂:…d_k:::, letters sorted.
pub type Word = Vec<Letter>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VaExpr {
    terms: BTreeMap<Word, Coeff>,
}

impl VaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vac() -> Self {
        Self::word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Self::letter(Letter { gen: g, t: 0 })
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(vec![l])
    }

    fn word(w: Word) -> Self {
        let mut e = Self::zero();
        e.terms.insert(w, Coeff::one());
        e
    }

    fn add_term(&mut self, w: &[Letter], c: &Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(w) {
            Some(x) => {
                *x = &*x + c;
                if x.is_zero() {
                    self.terms.remove(w);
                }
            }
            None => {
                self.terms.insert(w.to_vec(), c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vac_coeff(&self) -> Coeff {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut e = Self::zero();
        for (w, x) in &self.terms {
            e.add_term(w, &(x * c));
        }
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (w, x) in &other.terms {
            e.add_term(w, x);
        }
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Coeff::int(-1)))
    }
}

/// Polynomial in λ with VaExpr coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VaLambda {
    coeffs: BTreeMap<u32, VaExpr>,
}

impl VaLambda {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(e: VaExpr) -> Self {
        let mut p = Self::zero();
        p.add_at(0, &e);
        p
    }

    pub fn add_at(&mut self, k: u32, e: &VaExpr) {
        if e.is_zero() {
            return;
        }
        let x = self.coeffs.entry(k).or_default();
        *x = x.add(e);
        if x.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> VaExpr {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (u32, &VaExpr)> {
        self.coeffs.iter().map(|(k, e)| (*k, e))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (k, e) in other.coeffs() {
            p.add_at(k, e);
        }
        p
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut p = Self::zero();
        for (k, e) in self.coeffs() {
            p.add_at(k, &e.scale(c));
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Coeff::int(-1)))
    }
}

/// Polynomial in (λ, μ) with VaExpr coefficients.
pub type VaLambdaMu = BTreeMap<(u32, u32), VaExpr>;

fn add_lm(p: &mut VaLambdaMu, key: (u32, u32), e: &VaExpr) {
    if e.is_zero() {
        return;
    }
    let x = p.entry(key).or_default();
    *x = x.add(e);
    if x.is_zero() {
        p.remove(&key);
    }
}

fn sign(p: bool, q: bool) -> Coeff {
    Coeff::int(if p && q { -1 } else { 1 })
}

/// A Lie conformal algebra: generators with parity, optional conformal
/// weight and the table [g_i λ g_j].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lca {
    pub names: Vec<String>,
    pub odd: Vec<bool>,
    pub weights: Vec<Option<Coeff>>,
    pub table: Vec<Vec<VaLambda>>,
}

/// Outcome of matching [L λ L] against (T + 2λ)L + (λ³/12)c|0⟩.
#[derive(Clone, Debug)]
pub struct VirasoroForm {
    pub is_virasoro: bool,
    pub c: Option<Coeff>,
    pub bracket: VaLambda,
    pub residual: VaLambda,
}

impl Lca {
    pub fn new(
        names: Vec<String>,
        odd: Vec<bool>,
        weights: Vec<Option<Coeff>>,
        table: Vec<Vec<VaLambda>>,
    ) -> Result<Self> {
        let n = names.len();
        if odd.len() != n || weights.len() != n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("LCA with {n} generators needs {n}x{n} table")));
        }
        Ok(Lca {
            names,
            odd,
            weights,
            table,
        })
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn word_odd(&self, w: &[Letter]) -> bool {
        w.iter().filter(|l| self.odd[l.gen]).count() % 2 == 1
    }

    /// Parity of a homogeneous expression; None if mixed.
    pub fn parity(&self, e: &VaExpr) -> Option<bool> {
        let mut ps = e.terms().map(|(w, _)| self.word_odd(w));
        let first = ps.next().unwrap_or(false);
        ps.all(|p| p == first).then_some(first)
    }

    // ---- translation

    pub fn t(&self, e: &VaExpr) -> VaExpr {
        let mut out = VaExpr::zero();
        for (w, c) in e.terms() {
            out = out.add(&self.t_word(w).scale(c));
        }
        out
    }

    pub fn t_pow(&self, e: &VaExpr, n: u32) -> VaExpr {
        (0..n).fold(e.clone(), |acc, _| self.t(&acc))
    }

    fn t_word(&self, w: &[Letter]) -> VaExpr {
        let Some((&d, rest)) = w.split_first() else {
            return VaExpr::zero();
        };
        let mut out = self.no_letter(Letter { gen: d.gen, t: d.t + 1 }, rest);
        for (w2, c) in self.t_word(rest).terms() {
            out = out.add(&self.no_letter(d, w2).scale(c));
        }
        out
    }

    // ---- normally ordered product

    pub fn no(&self, a: &VaExpr, b: &VaExpr) -> VaExpr {
        let mut out = VaExpr::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out = out.add(&self.no_words(wa, wb).scale(&(ca * cb)));
            }
        }
        out
    }

    fn no_words(&self, a: &[Letter], b: &[Letter]) -> VaExpr {
        if a.is_empty() {
            return VaExpr::word(b.to_vec());
        }
        if b.is_empty() {
            return VaExpr::word(a.to_vec());
        }
        if a.len() == 1 {
            return self.no_letter(a[0], b);
        }
        // ::x A':B: = :x:A'B:: + :(∫₀^T x)[A'_λ B]: + p :(∫₀^T A')[x_λ B]:
        let (x, ap) = (a[0], &a[1..]);
        let mut out = VaExpr::zero();
        for (w, c) in self.no_words(ap, b).terms() {
            out = out.add(&self.no_letter(x, w).scale(c));
        }
        for (j, xj) in self.bracket_words(ap, b).coeffs() {
            let tx = VaExpr::letter(Letter { gen: x.gen, t: x.t + j + 1 });
            out = out.add(&self.no(&tx, xj).scale(&Coeff::ratio(1, j as i64 + 1)));
        }
        let p = sign(self.odd[x.gen], self.word_odd(ap));
        let apx = VaExpr::word(ap.to_vec());
        for (j, yj) in self.bracket_words(&[x], b).coeffs() {
            let ta = self.t_pow(&apx, j + 1);
            out = out.add(&self.no(&ta, yj).scale(&(&p * &Coeff::ratio(1, j as i64 + 1))));
        }
        out
    }

    /// :d B: for a single letter d and a canonical word B.
    fn no_letter(&self, d: Letter, w: &[Letter]) -> VaExpr {
        let Some((&b, c)) = w.split_first() else {
            return VaExpr::letter(d);
        };
        if d < b || (d == b && !self.odd[d.gen]) {
            let mut v = vec![d];
            v.extend_from_slice(w);
            return VaExpr::word(v);
        }
        let cw = VaExpr::word(c.to_vec());
        let corr = self.no(&self.int_neg_t(&self.bracket_letters(d, b)), &cw);
        if d == b {
            // odd: 2:d:dC:: = :(∫_{−T}^0 [d_λ d]) C:
            return corr.scale(&Coeff::ratio(1, 2));
        }
        // :d:bC:: = p :b:dC:: + :(∫_{−T}^0 [d_λ b]) C:
        let p = sign(self.odd[d.gen], self.odd[b.gen]);
        let mut out = corr;
        for (w2, x) in self.no_letter(d, c).terms() {
            out = out.add(&self.no_letter(b, w2).scale(&(x * &p)));
        }
        out
    }

    /// ∫_{−T}^0 P(λ) dλ = Σ_k (−1)^k T^{k+1} P_k / (k+1).
    pub fn int_neg_t(&self, p: &VaLambda) -> VaExpr {
        let mut out = VaExpr::zero();
        for (k, e) in p.coeffs() {
            let s = if k % 2 == 0 { 1 } else { -1 };
            out = out.add(&self.t_pow(e, k + 1).scale(&Coeff::ratio(s, k as i64 + 1)));
        }
        out
    }

    // ---- λ-bracket

    /// Σ_k P_k (λ+T)^n-style shift: (λ+T)^n P.
    fn shift(&self, p: &VaLambda, n: u32) -> VaLambda {
        let mut out = VaLambda::zero();
        for (k, e) in p.coeffs() {
            let mut te = e.clone();
            for i in 0..=n {
                out.add_at(k + n - i, &te.scale(&binomial(n, i)));
                te = self.t(&te);
            }
        }
        out
    }

    /// P(−λ−T) = Σ_k (−λ−T)^k P_k.
    pub fn reflect(&self, p: &VaLambda) -> VaLambda {
        let mut out = VaLambda::zero();
        for (k, e) in p.coeffs() {
            let mut one = VaLambda::zero();
            one.add_at(0, e);
            let s = if k % 2 == 0 { Coeff::one() } else { Coeff::int(-1) };
            out = out.add(&self.shift(&one, k).scale(&s));
        }
        out
    }

    fn bracket_letters(&self, a: Letter, b: Letter) -> VaLambda {
        let base = self.shift(&self.table[a.gen][b.gen], b.t);
        let s = if a.t.is_multiple_of(2) { Coeff::one() } else { Coeff::int(-1) };
        let mut out = VaLambda::zero();
        for (k, e) in base.coeffs() {
            out.add_at(k + a.t, &e.scale(&s));
        }
        out
    }

    fn bracket_words(&self, a: &[Letter], b: &[Letter]) -> VaLambda {
        if a.is_empty() || b.is_empty() {
            return VaLambda::zero();
        }
        if b.len() >= 2 {
            let (y, c) = (b[0], &b[1..]);
            let cw = VaExpr::word(c.to_vec());
            let ab = self.bracket_words(a, &[y]);
            let mut out = VaLambda::zero();
            for (k, e) in ab.coeffs() {
                out.add_at(k, &self.no(e, &cw));
                for (w, x) in e.terms() {
                    for (j, z) in self.bracket_words(w, c).coeffs() {
                        out.add_at(k + j + 1, &z.scale(&(x * &Coeff::ratio(1, j as i64 + 1))));
                    }
                }
            }
            let p = sign(self.word_odd(a), self.odd[y.gen]);
            for (k, e) in self.bracket_words(a, c).coeffs() {
                let mut t = VaExpr::zero();
                for (w, x) in e.terms() {
                    t = t.add(&self.no_letter(y, w).scale(x));
                }
                out.add_at(k, &t.scale(&p));
            }
            return out;
        }
        if a.len() == 1 {
            return self.bracket_letters(a[0], b[0]);
        }
        // [A_λ h] = −p [h_{−λ−T} A]
        let p = sign(self.word_odd(a), self.odd[b[0].gen]);
        self.reflect(&self.bracket_words(b, a)).scale(&-&p)
    }

    pub fn bracket(&self, a: &VaExpr, b: &VaExpr) -> VaLambda {
        let mut out = VaLambda::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out = out.add(&self.bracket_words(wa, wb).scale(&(ca * cb)));
            }
        }
        out
    }

    /// n-th product a_(n) b = n!·(λ^n coefficient) for n ≥ 0 and
    /// :(T^{−n−1}a/(−n−1)!) b: for n < 0.
    pub fn nth_product(&self, a: &VaExpr, b: &VaExpr, n: i64) -> VaExpr {
        if n >= 0 {
            let f = (1..=n).fold(Coeff::one(), |acc, k| &acc * &Coeff::int(k));
            self.bracket(a, b).coeff(n as u32).scale(&f)
        } else {
            let m = (-n - 1) as u32;
            let f = (1..=m as i64).fold(Coeff::one(), |acc, k| &acc * &Coeff::int(k));
            self.no(&self.t_pow(a, m).scale(&f.inv().expect("nonzero")), b)
        }
    }

    // ---- checks

    /// [A λ B] + p(A,B)[B_{−λ−T} A], summed over homogeneous word pairs.
    pub fn skew_residual(&self, a: &VaExpr, b: &VaExpr) -> VaLambda {
        let mut out = VaLambda::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let p = sign(self.word_odd(wa), self.word_odd(wb));
                let r = self
                    .bracket_words(wa, wb)
                    .add(&self.reflect(&self.bracket_words(wb, wa)).scale(&p));
                out = out.add(&r.scale(&(ca * cb)));
            }
        }
        out
    }

    /// :AB: − p:BA: − ∫_{−T}^0 [A λ B].
    pub fn quasicommutativity_residual(&self, a: &VaExpr, b: &VaExpr) -> VaExpr {
        let mut out = VaExpr::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let p = sign(self.word_odd(wa), self.word_odd(wb));
                let r = self
                    .no_words(wa, wb)
                    .sub(&self.no_words(wb, wa).scale(&p))
                    .sub(&self.int_neg_t(&self.bracket_words(wa, wb)));
                out = out.add(&r.scale(&(ca * cb)));
            }
        }
        out
    }

    /// [a_λ[b_μ c]] − p(a,b)[b_μ[a_λ c]] − [[a_λ b]_{λ+μ} c] for words.
    pub fn jacobi_residual(&self, a: &VaExpr, b: &VaExpr, c: &VaExpr) -> VaLambdaMu {
        let mut out = VaLambdaMu::new();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                for (wc, cc) in c.terms() {
                    let k = &(ca * cb) * cc;
                    for (key, e) in self.jacobi_words(wa, wb, wc) {
                        add_lm(&mut out, key, &e.scale(&k));
                    }
                }
            }
        }
        out
    }

    fn jacobi_words(&self, a: &[Letter], b: &[Letter], c: &[Letter]) -> VaLambdaMu {
        let mut out = VaLambdaMu::new();
        for (j, y) in self.bracket_words(b, c).coeffs() {
            for (w, x) in y.terms() {
                for (i, z) in self.bracket_words(a, w).coeffs() {
                    add_lm(&mut out, (i, j), &z.scale(x));
                }
            }
        }
        let p = -&sign(self.word_odd(a), self.word_odd(b));
        for (i, y) in self.bracket_words(a, c).coeffs() {
            for (w, x) in y.terms() {
                for (j, z) in self.bracket_words(b, w).coeffs() {
                    add_lm(&mut out, (i, j), &z.scale(&(x * &p)));
                }
            }
        }
        for (i, y) in self.bracket_words(a, b).coeffs() {
            for (w, x) in y.terms() {
                for (n, z) in self.bracket_words(w, c).coeffs() {
                    // (λ+μ)^n λ^i
                    for r in 0..=n {
                        let coef = -&(x * &binomial(n, r));
                        add_lm(&mut out, (i + r, n - r), &z.scale(&coef));
                    }
                }
            }
        }
        out
    }

    /// Generator pairs violating table skewsymmetry.
    pub fn check_skewsymmetry(&self) -> Vec<(usize, usize)> {
        let n = self.ngens();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !self.skew_residual(&VaExpr::gen(i), &VaExpr::gen(j)).is_zero() {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Generator triples violating the Jacobi identity.
    pub fn check_jacobi(&self) -> Vec<(usize, usize, usize)> {
        let n = self.ngens();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (VaExpr::gen(i), VaExpr::gen(j), VaExpr::gen(k));
                    if !self.jacobi_residual(&a, &b, &c).is_empty() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Conformal weight of a word, if every generator in it is weighted.
    pub fn word_weight(&self, w: &[Letter]) -> Option<Coeff> {
        w.iter().try_fold(Coeff::zero(), |acc, l| {
            let d = self.weights[l.gen].as_ref()?;
            Some(&(&acc + d) + &Coeff::int(l.t as i64))
        })
    }

    /// Weight of a homogeneous expression (zero expressions have none).
    pub fn weight(&self, e: &VaExpr) -> Option<Coeff> {
        let mut ws = e.terms().map(|(w, _)| self.word_weight(w));
        let first = ws.next()??;
        ws.all(|w| w.as_ref() == Some(&first)).then_some(first)
    }

    /// λ-powers j whose coefficient in [A λ B] is not homogeneous of weight
    /// Δ_A + Δ_B − j − 1.
    pub fn grading_failures(&self, a: &VaExpr, b: &VaExpr) -> Result<Vec<u32>> {
        let (wa, wb) = match (self.weight(a), self.weight(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::Invalid("arguments must be homogeneous and weighted".into())),
        };
        let total = &wa + &wb;
        Ok(self
            .bracket(a, b)
            .coeffs()
            .filter(|(j, e)| {
                let want = &total - &Coeff::int(*j as i64 + 1);
                e.terms().any(|(w, _)| self.word_weight(w) != Some(want.clone()))
            })
            .map(|(j, _)| j)
            .collect())
    }

    pub fn virasoro_extract(&self, l: &VaExpr) -> VirasoroForm {
        let br = self.bracket(l, l);
        let c = &br.coeff(3).vac_coeff() * &Coeff::int(12);
        let mut model = VaLambda::zero();
        model.add_at(0, &self.t(l));
        model.add_at(1, &l.scale(&Coeff::int(2)));
        model.add_at(3, &VaExpr::vac().scale(&Coeff::ratio(1, 12)).scale(&c));
        let residual = br.sub(&model);
        let ok = residual.is_zero() && !l.is_zero();
        VirasoroForm {
            is_virasoro: ok,
            c: ok.then_some(c),
            bracket: br,
            residual,
        }
    }

    /// [L λ a] − (T + Δλ)a.
    pub fn primary_residual(&self, l: &VaExpr, a: &VaExpr, delta: &Coeff) -> VaLambda {
        let mut model = VaLambda::zero();
        model.add_at(0, &self.t(a));
        model.add_at(1, &a.scale(delta));
        self.bracket(l, a).sub(&model)
    }

    // ---- printing

    fn letter_text(&self, l: Letter, style: Style) -> String {
        let name = match style {
            Style::Text => self.names[l.gen].clone(),
            Style::Latex => crate::syntax::print::latex_ident(&self.names[l.gen]),
        };
        match (l.t, style) {
            (0, _) => name,
            (1, Style::Text) => format!("T({name})"),
            (t, Style::Text) => format!("T^{t}({name})"),
            (1, Style::Latex) => format!("T{name}"),
            (t, Style::Latex) => format!("T^{{{t}}}{name}"),
        }
    }

    fn word_text(&self, w: &[Letter], style: Style) -> String {
        match (w.len(), style) {
            (0, Style::Text) => "vac".into(),
            (0, Style::Latex) => "|0\\rangle".into(),
            (1, _) => self.letter_text(w[0], style),
            (_, Style::Text) => {
                let parts: Vec<String> = w.iter().map(|l| self.letter_text(*l, style)).collect();
                format!(":{}:", parts.join(" "))
            }
            (_, Style::Latex) => {
                let parts: Vec<String> = w.iter().map(|l| self.letter_text(*l, style)).collect();
                format!("{{:}}{}{{:}}", parts.join("\\,"))
            }
        }
    }

    fn expr_terms(&self, e: &VaExpr, style: Style) -> Vec<Term> {
        let mut ws: Vec<(&Word, &Coeff)> = e.terms().collect();
        ws.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
        ws.into_iter()
            .map(|(w, c)| {
                let (neg, coeff) = coeff_factor(c, style);
                Term {
                    neg,
                    coeff,
                    factors: vec![self.word_text(w, style)],
                }
            })
            .collect()
    }

    pub fn display(&self, e: &VaExpr, style: Style) -> String {
        join_terms(&self.expr_terms(e, style), style)
    }

    pub fn display_lambda(&self, p: &VaLambda, style: Style) -> String {
        let x = if style == Style::Latex { "\\lambda" } else { "l" };
        let mut terms = Vec::new();
        for (k, e) in p.coeffs().rev() {
            for mut t in self.expr_terms(e, style) {
                match k {
                    0 => {}
                    1 => t.factors.insert(0, x.to_string()),
                    k if style == Style::Latex => t.factors.insert(0, format!("{x}^{{{k}}}")),
                    k => t.factors.insert(0, format!("{x}^{k}")),
                }
                terms.push(t);
            }
        }
        join_terms(&terms, style)
    }

    /// Table as `[a l b] = ...` lines.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for i in 0..self.ngens() {
            for j in 0..self.ngens() {
                let _ = writeln!(s, "[{} l {}] = {}", self.names[i], self.names[j], self.display_lambda(&self.table[i][j], Style::Text));
            }
        }
        s
    }
}

// ---- bundled algebras

fn entry(pairs: &[(u32, VaExpr)]) -> VaLambda {
    let mut p = VaLambda::zero();
    for (k, e) in pairs {
        p.add_at(*k, e);
    }
    p
}

/// [L λ L] = (T + 2λ)L + (c/12)λ³|0⟩.
pub fn virasoro(c: &Coeff) -> Lca {
    let l = VaExpr::gen(0);
    let tl = VaExpr::letter(Letter { gen: 0, t: 1 });
    let table = vec![vec![entry(&[
        (0, tl),
        (1, l.scale(&Coeff::int(2))),
        (3, VaExpr::vac().scale(&(c * &Coeff::ratio(1, 12)))),
    ])]];
    Lca::new(vec!["L".into()], vec![false], vec![Some(Coeff::int(2))], table).expect("shape")
}

/// [a λ a] = λ|0⟩.
pub fn free_boson() -> Lca {
    let table = vec![vec![entry(&[(1, VaExpr::vac())])]];
    Lca::new(vec!["a".into()], vec![false], vec![Some(Coeff::one())], table).expect("shape")
}

/// Odd φ with [φ λ φ] = |0⟩.
pub fn free_fermion() -> Lca {
    let table = vec![vec![entry(&[(0, VaExpr::vac())])]];
    Lca::new(vec!["phi".into()], vec![true], vec![Some(Coeff::ratio(1, 2))], table).expect("shape")
}

/// [a λ b] = [a, b] + λ k (a|b)|0⟩ on the basis of 𝔤.
pub fn current(l: &LieAlgebraData, k: &Coeff) -> Lca {
    let d = l.dim();
    let table = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut br = VaExpr::zero();
                    for (m, c) in l.structure[i][j].iter().enumerate() {
                        br.add_term(&[Letter { gen: m, t: 0 }], c);
                    }
                    entry(&[(0, br), (1, VaExpr::vac().scale(&(&l.form[i][j] * k)))])
                })
                .collect()
        })
        .collect();
    Lca::new(l.basis.clone(), vec![false; d], vec![Some(Coeff::one()); d], table).expect("shape")
}

/// h∨ for the Sugawara normalization: zero on an abelian algebra, half
/// the adjoint Casimir eigenvalue otherwise.
pub fn sugawara_dual_coxeter(l: &LieAlgebraData) -> Result<Coeff> {
    if l.structure.iter().flatten().flatten().all(Coeff::is_zero) {
        return Ok(Coeff::zero());
    }
    Ok(&l.casimir_adjoint_eigenvalue()? * &Coeff::ratio(1, 2))
}

/// Sugawara vector 1/(2(k+h∨)) Σ_i :a^i b^i: over the current algebra.
pub fn sugawara(l: &LieAlgebraData, k: &Coeff) -> Result<(Lca, VaExpr)> {
    let (units, duals) = l.dual_bases()?;
    let hv = sugawara_dual_coxeter(l)?;
    let denom = &(k + &hv) * &Coeff::int(2);
    let norm = denom
        .inv()
        .ok_or_else(|| Error::Singular("k + h∨ vanishes".into()))?;
    let lca = current(l, k);
    let as_expr = |v: &[Coeff]| {
        let mut e = VaExpr::zero();
        for (m, c) in v.iter().enumerate() {
            e.add_term(&[Letter { gen: m, t: 0 }], c);
        }
        e
    };
    let mut sum = VaExpr::zero();
    for (a, b) in units.iter().zip(&duals) {
        sum = sum.add(&lca.no(&as_expr(a), &as_expr(b)));
    }
    Ok((lca, sum.scale(&norm)))
}

/// Central charge k·dim𝔤 / (2(k + h∨)), half the Sugawara value.
pub fn sugawara_charge_halved(l: &LieAlgebraData, k: &Coeff) -> Result<Coeff> {
    let hv = sugawara_dual_coxeter(l)?;
    let den = &(k + &hv) * &Coeff::int(2);
    (k * &Coeff::int(l.dim() as i64)).checked_div(&den).ok_or_else(|| Error::Singular("k + h∨ vanishes".into()))
}

#[cfg(test)]
mod tests;
