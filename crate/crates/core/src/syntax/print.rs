//! Canonical text and LaTeX rendering. Text output is valid input for the
//! parser.

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::coeff::{Coeff, MPoly};
use crate::diffalg::{DerivVar, DiffOp, DiffPoly, LambdaMu, LambdaPoly, Monomial, OpEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "kappa", "lambda", "mu", "nu", "theta", "sigma",
    "tau", "phi", "psi", "omega", "rho", "xi", "eta", "zeta", "chi",
];

pub(crate) fn latex_ident(name: &str) -> String {
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else if name.len() > 1 {
        match name.split_once('_') {
            Some((a, b)) => format!("{}_{{{}}}", latex_ident(a), b),
            None => format!("\\mathrm{{{name}}}"),
        }
    } else {
        name.to_string()
    }
}

fn fmt_rational(r: &BigRational, style: Style) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if style == Style::Latex {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn mpoly_latex(p: &MPoly) -> String {
    let mut s = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if m.is_one() || !mag.is_one() {
            s.push_str(&mag.to_string());
        }
        for (n, e) in m.factors() {
            s.push_str(&latex_ident(n));
            if *e > 1 {
                s.push_str(&format!("^{{{e}}}"));
            }
        }
    }
    s
}

/// Magnitude of a coefficient as a product prefix; empty for 1.
pub fn coeff_factor(c: &Coeff, style: Style) -> (bool, String) {
    if style == Style::Text {
        return c.factor_parts();
    }
    let neg = c.is_negative();
    let mag = if neg { -c } else { c.clone() };
    if mag.is_one() {
        return (neg, String::new());
    }
    if let Some(r) = mag.to_rational() {
        return (neg, fmt_rational(&r, style));
    }
    if let Some((r, p)) = mag.split_content() {
        let body = if p.terms().len() == 1 {
            mpoly_latex(&p)
        } else {
            format!("\\left({}\\right)", mpoly_latex(&p))
        };
        if r.is_one() {
            return (neg, body);
        }
        return (neg, format!("{} {}", fmt_rational(&r, style), body));
    }
    (
        neg,
        format!(
            "\\frac{{{}}}{{{}}}",
            mpoly_latex(mag.numer()),
            mpoly_latex(mag.denom())
        ),
    )
}

/// A coefficient on its own.
pub fn coeff(c: &Coeff, style: Style) -> String {
    match style {
        Style::Text => c.to_string(),
        Style::Latex => {
            let (neg, body) = coeff_factor(c, style);
            let body = if body.is_empty() { "1".to_string() } else { body };
            format!("{}{body}", if neg { "-" } else { "" })
        }
    }
}

/// One summand: sign, coefficient prefix, multiplicative factors.
pub(crate) struct Term {
    pub neg: bool,
    pub coeff: String,
    pub factors: Vec<String>,
}

pub(crate) fn join_terms(terms: &[Term], style: Style) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let sep = if style == Style::Latex { " " } else { "*" };
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            if t.neg {
                s.push('-');
            }
        } else {
            s.push_str(if t.neg { " - " } else { " + " });
        }
        let mut parts = Vec::new();
        if !t.coeff.is_empty() {
            parts.push(t.coeff.clone());
        }
        parts.extend(t.factors.iter().cloned());
        if parts.is_empty() {
            s.push('1');
        } else {
            s.push_str(&parts.join(sep));
        }
    }
    s
}

fn power(base: &str, e: u32, style: Style) -> String {
    match (e, style) {
        (1, _) => base.to_string(),
        (_, Style::Text) => format!("{base}^{e}"),
        (_, Style::Latex) => {
            if base.contains('^') || base.contains('\'') {
                format!("\\left({base}\\right)^{{{e}}}")
            } else {
                format!("{base}^{{{e}}}")
            }
        }
    }
}

/// Generator names used for rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Names {
    pub gens: Vec<String>,
}

impl Names {
    pub fn new(gens: Vec<String>) -> Self {
        Names { gens }
    }

    /// `u`, `v`, `w` for up to three generators, `u1..un` otherwise.
    pub fn generic(n: usize) -> Self {
        let gens = if n <= 3 {
            ["u", "v", "w"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("u{i}")).collect()
        };
        Names { gens }
    }

    pub fn var(&self, v: DerivVar, style: Style) -> String {
        let name = &self.gens[v.gen];
        match style {
            Style::Text => match v.order {
                0..=3 => format!("{name}{}", "'".repeat(v.order as usize)),
                n => format!("{name}^({n})"),
            },
            Style::Latex => {
                let name = latex_ident(name);
                match v.order {
                    0 => name,
                    1..=3 => format!("{name}^{{{}}}", "\\prime".repeat(v.order as usize)),
                    n => format!("{name}^{{({n})}}"),
                }
            }
        }
    }

    fn monomial_factors(&self, m: &Monomial, style: Style) -> Vec<String> {
        m.factors()
            .iter()
            .map(|(v, e)| power(&self.var(*v, style), *e, style))
            .collect()
    }

    pub(crate) fn poly_terms(&self, f: &DiffPoly, style: Style) -> Vec<Term> {
        let mut terms: Vec<(&Monomial, &Coeff)> = f.terms().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        terms
            .into_iter()
            .map(|(m, c)| {
                let (neg, coeff) = coeff_factor(c, style);
                Term {
                    neg,
                    coeff,
                    factors: self.monomial_factors(m, style),
                }
            })
            .collect()
    }

    pub fn poly(&self, f: &DiffPoly) -> String {
        self.poly_styled(f, Style::Text)
    }

    pub fn poly_styled(&self, f: &DiffPoly, style: Style) -> String {
        join_terms(&self.poly_terms(f, style), style)
    }

    /// Σ f_k x^k expanded termwise, highest power of `x` first.
    pub fn lambda_styled(&self, p: &LambdaPoly, x: &str, style: Style) -> String {
        let x = match style {
            Style::Latex if x == "l" => "\\lambda".to_string(),
            Style::Latex if x == "D" => "\\partial".to_string(),
            Style::Latex => latex_ident(x),
            Style::Text => x.to_string(),
        };
        join_terms(&self.lambda_terms_in(p, &x, style), style)
    }

    pub(crate) fn lambda_terms(&self, p: &LambdaPoly, style: Style) -> Vec<Term> {
        let x = if style == Style::Latex { "\\lambda" } else { "l" };
        self.lambda_terms_in(p, x, style)
    }

    fn lambda_terms_in(&self, p: &LambdaPoly, x: &str, style: Style) -> Vec<Term> {
        let mut terms = Vec::new();
        for (k, f) in p.coeffs().rev() {
            for mut t in self.poly_terms(f, style) {
                if k > 0 {
                    t.factors.push(power(x, k, style));
                }
                terms.push(t);
            }
        }
        terms
    }

    /// Σ f_k x^k with possibly negative k, highest power first.
    pub fn laurent_styled<'a>(
        &self,
        coeffs: impl DoubleEndedIterator<Item = (i32, &'a DiffPoly)>,
        x: &str,
        style: Style,
    ) -> String {
        let x = match style {
            Style::Latex if x == "l" => "\\lambda".to_string(),
            Style::Latex => latex_ident(x),
            Style::Text => x.to_string(),
        };
        let mut terms = Vec::new();
        for (k, f) in coeffs.rev() {
            for mut t in self.poly_terms(f, style) {
                match (k, style) {
                    (0, _) => {}
                    (k, _) if k > 0 => t.factors.push(power(&x, k as u32, style)),
                    (k, Style::Text) => t.factors.push(format!("{x}^({k})")),
                    (k, Style::Latex) => t.factors.push(format!("{x}^{{{k}}}")),
                }
                terms.push(t);
            }
        }
        join_terms(&terms, style)
    }

    /// Σ f_{ab} λ^a μ^b, highest total degree first; μ prints as `m`.
    pub fn lambda_mu_styled(&self, p: &LambdaMu, style: Style) -> String {
        let (l, m) = match style {
            Style::Text => ("l", "m"),
            Style::Latex => ("\\lambda", "\\mu"),
        };
        let mut keys: Vec<((u32, u32), &DiffPoly)> = p.coeffs().collect();
        keys.sort_by(|a, b| (b.0 .0 + b.0 .1).cmp(&(a.0 .0 + a.0 .1)).then(b.0.cmp(&a.0)));
        let mut terms = Vec::new();
        for ((a, b), f) in keys {
            for mut t in self.poly_terms(f, style) {
                if a > 0 {
                    t.factors.push(power(l, a, style));
                }
                if b > 0 {
                    t.factors.push(power(m, b, style));
                }
                terms.push(t);
            }
        }
        join_terms(&terms, style)
    }

    pub fn lambda(&self, p: &LambdaPoly) -> String {
        self.lambda_styled(p, "l", Style::Text)
    }

    pub fn op(&self, e: &OpEntry) -> String {
        self.lambda_styled(&e.symbol(), "D", Style::Text)
    }

    pub fn op_matrix(&self, d: &DiffOp) -> String {
        if d.rows() == 1 && d.cols() == 1 {
            return self.op(d.get(0, 0));
        }
        let rows: Vec<String> = (0..d.rows())
            .map(|i| {
                let cells: Vec<String> = (0..d.cols()).map(|j| self.op(d.get(i, j))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    pub fn vector(&self, v: &[DiffPoly], style: Style) -> String {
        let cells: Vec<String> = v.iter().map(|f| self.poly_styled(f, style)).collect();
        match style {
            Style::Text => format!("({})", cells.join(", ")),
            Style::Latex => format!("\\left({}\\right)", cells.join(",\\ ")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::u;

    #[test]
    fn text_forms() {
        let n = Names::generic(1);
        let c = Coeff::param("c");
        let h2 = (&u(0, 0).pow(3) + &(&u(0, 0) * &u(0, 2)).scale(&c)).scale(&Coeff::ratio(1, 2));
        assert_eq!(n.poly(&h2), "1/2*u^3 + 1/2*c*u*u''");
        assert_eq!(n.var(DerivVar::new(0, 5), Style::Text), "u^(5)");
        let eq1 = &(&u(0, 0) * &u(0, 1)).scale(&Coeff::int(3)) + &u(0, 3).scale(&c);
        assert_eq!(n.poly(&eq1), "3*u*u' + c*u'''");
        assert_eq!(n.poly(&(-&u(0, 1).pow(2))), "-u'^2");
    }

    #[test]
    fn lambda_forms() {
        let n = Names::generic(1);
        let mut p = LambdaPoly::monomial(3, DiffPoly::constant(Coeff::param("c")));
        p.add_at(1, &u(0, 0).scale(&Coeff::int(2)));
        p.add_at(0, &u(0, 1));
        assert_eq!(n.lambda(&p), "c*l^3 + 2*u*l + u'");
        assert_eq!(
            n.lambda_styled(&p, "l", Style::Latex),
            "c \\lambda^{3} + 2 u \\lambda + u^{\\prime}"
        );
    }
}
