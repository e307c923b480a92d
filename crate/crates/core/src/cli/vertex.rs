use super::{coeff_text, Report, VaCommand};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::liealg;
use crate::quantum::{self, modes, Lca, Letter, VaExpr};
use crate::syntax::print::{coeff_factor, join_terms, Term};
use crate::syntax::{Binding, GenDecl, Scope, SourceSpec, Style};

fn gens_of(lca: &Lca) -> Vec<GenDecl> {
    (0..lca.ngens())
        .map(|i| GenDecl {
            name: lca.names[i].clone(),
            odd: lca.odd[i],
            weight: lca.weights[i].clone(),
        })
        .collect()
}

/// Bundled vertex algebras.
pub fn builtin(name: &str) -> Result<SourceSpec> {
    let mut spec = SourceSpec::default();
    let lca = match name {
        "virasoro" => {
            spec.params = vec!["c".into()];
            quantum::virasoro(&Coeff::param("c"))
        }
        "boson" => quantum::free_boson(),
        "fermion" => quantum::free_fermion(),
        "sl2" => {
            spec.params = vec!["k".into()];
            let l = liealg::sl2();
            let lca = quantum::current(&l, &Coeff::param("k"));
            spec.lie = Some(l);
            lca
        }
        other => return Err(Error::Invalid(format!("unknown builtin '{other}' (virasoro, boson, fermion, sl2)"))),
    };
    spec.generators = gens_of(&lca);
    let half = Coeff::ratio(1, 2);
    match name {
        "boson" => spec.lets.push(("L".into(), Binding::Va(lca.no(&VaExpr::gen(0), &VaExpr::gen(0)).scale(&half)))),
        "fermion" => {
            let tphi = VaExpr::letter(Letter { gen: 0, t: 1 });
            spec.lets.push(("L".into(), Binding::Va(lca.no(&tphi, &VaExpr::gen(0)).scale(&half))));
        }
        _ => {}
    }
    spec.va = Some(lca);
    Ok(spec)
}

pub fn check_lca(lca: &Lca, r: &mut Report) {
    let skew = lca.check_skewsymmetry();
    if skew.is_empty() {
        r.check("va-skewsymmetry", &[], "all pairs", true);
    }
    for (i, j) in skew {
        let res = lca.skew_residual(&VaExpr::gen(i), &VaExpr::gen(j));
        r.push("va-skewsymmetry", &[i, j], lca.display_lambda(&res, Style::Text), lca.display_lambda(&res, Style::Latex), false);
    }
    let jac = lca.check_jacobi();
    if jac.is_empty() {
        r.check("va-jacobi", &[], "all triples", true);
    }
    for (i, j, k) in jac {
        r.check("va-jacobi", &[i, j, k], "nonzero", false);
    }
}

fn operand(src: &str, lca: &Lca, e: &VaExpr, style: Style) -> String {
    let ident = !src.is_empty() && src.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    match (ident, style) {
        (true, Style::Text) => src.to_string(),
        (true, Style::Latex) => crate::syntax::print::latex_ident(src),
        (false, _) => format!("({})", lca.display(e, style)),
    }
}

/// (T + 2λ)A + (c/12)λ³|0⟩.
fn virasoro_text(a: &str, c: &Coeff, style: Style) -> String {
    let (t, l) = match style {
        Style::Text => ("T", "l"),
        Style::Latex => ("T", "\\lambda"),
    };
    let mut terms = vec![Term {
        neg: false,
        coeff: String::new(),
        factors: vec![format!("({t} + 2{}{l})", if style == Style::Text { "*" } else { "" }), a.to_string()],
    }];
    let c12 = c * &Coeff::ratio(1, 12);
    if !c12.is_zero() {
        let (neg, coeff) = coeff_factor(&c12, style);
        let (l3, vac) = match style {
            Style::Text => ("l^3".to_string(), "vac"),
            Style::Latex => ("\\lambda^{3}".to_string(), "|0\\rangle"),
        };
        terms.push(Term {
            neg,
            coeff,
            factors: vec![l3, vac.to_string()],
        });
    }
    join_terms(&terms, style)
}

/// (T + Δλ)A.
fn primary_text(a: &str, delta: &Coeff, style: Style) -> String {
    let (t, l, sep) = match style {
        Style::Text => ("T", "l", "*"),
        Style::Latex => ("T", "\\lambda", " "),
    };
    if delta.is_zero() {
        return format!("{t}{sep}{a}");
    }
    let (neg, c) = coeff_factor(delta, style);
    let dl = if c.is_empty() { l.to_string() } else { format!("{c}{sep}{l}") };
    format!("({t} {} {dl}){sep}{a}", if neg { "-" } else { "+" })
}

fn lca_of(spec: &SourceSpec) -> Result<&Lca> {
    spec.va.as_ref().ok_or_else(|| Error::Invalid("file declares no vertex-algebra brackets".into()))
}

pub fn run(spec: &SourceSpec, cmd: &VaCommand) -> Result<Report> {
    match cmd {
        VaCommand::Bracket { a, b } => bracket(spec, a, b),
        VaCommand::Virasoro { l } => {
            let lca = lca_of(spec)?;
            let le = spec.parse_va(l)?;
            let vf = lca.virasoro_extract(&le);
            let mut r = Report::new("va virasoro");
            let name = operand(l, lca, &le, Style::Text);
            match &vf.c {
                Some(c) => {
                    r.push("virasoro-form", &[], virasoro_text(&name, c, Style::Text), virasoro_text(&operand(l, lca, &le, Style::Latex), c, Style::Latex), true);
                    r.push("central-charge", &[], coeff_text(c, Style::Text), coeff_text(c, Style::Latex), true);
                }
                None => r.push("virasoro-form", &[], lca.display_lambda(&vf.residual, Style::Text), lca.display_lambda(&vf.residual, Style::Latex), false),
            }
            Ok(r)
        }
        VaCommand::Primary { l, a, weight } => {
            let lca = lca_of(spec)?;
            let (le, ae) = (spec.parse_va(l)?, spec.parse_va(a)?);
            let delta = match weight {
                Some(w) => spec.scope().scalar(&crate::syntax::ast::parse_expr(w)?)?,
                None => lca.weight(&ae).ok_or_else(|| Error::Invalid(format!("'{a}' has no weight; pass --weight")))?,
            };
            let res = lca.primary_residual(&le, &ae, &delta);
            let mut r = Report::new("va primary");
            let name = operand(a, lca, &ae, Style::Text);
            if res.is_zero() {
                r.push("primary", &[], primary_text(&name, &delta, Style::Text), primary_text(&operand(a, lca, &ae, Style::Latex), &delta, Style::Latex), true);
            } else {
                r.push("primary", &[], lca.display_lambda(&res, Style::Text), lca.display_lambda(&res, Style::Latex), false);
            }
            Ok(r)
        }
        VaCommand::Check => {
            let mut r = Report::new("va check");
            check_lca(lca_of(spec)?, &mut r);
            Ok(r)
        }
        VaCommand::Sugawara { level, oracle_level } => sugawara(spec, level, *oracle_level),
    }
}

fn bracket(spec: &SourceSpec, a: &str, b: &str) -> Result<Report> {
    let lca = lca_of(spec)?;
    let (ae, be) = (spec.parse_va(a)?, spec.parse_va(b)?);
    let br = lca.bracket(&ae, &be);
    let mut r = Report::new("va bracket");
    let expanded = (lca.display_lambda(&br, Style::Text), lca.display_lambda(&br, Style::Latex));
    let vf = lca.virasoro_extract(&ae);
    let factored = match (&vf.c, ae == be) {
        (Some(c), true) => Some((
            virasoro_text(&operand(b, lca, &be, Style::Text), c, Style::Text),
            virasoro_text(&operand(b, lca, &be, Style::Latex), c, Style::Latex),
        )),
        (Some(_), false) => lca
            .weight(&be)
            .filter(|d| lca.primary_residual(&ae, &be, d).is_zero())
            .map(|d| {
                (
                    primary_text(&operand(b, lca, &be, Style::Text), &d, Style::Text),
                    primary_text(&operand(b, lca, &be, Style::Latex), &d, Style::Latex),
                )
            }),
        _ => None,
    };
    let (t, l) = factored.unwrap_or_else(|| expanded.clone());
    r.info("bracket", &[], t, l);
    r.info("expanded", &[], expanded.0, expanded.1);
    Ok(r)
}

fn sugawara(spec: &SourceSpec, level: &str, oracle: i64) -> Result<Report> {
    let l = spec.lie.as_ref().ok_or_else(|| Error::Invalid("sugawara needs a liealg block".into()))?;
    let mut scope: Scope = spec.scope();
    if !scope.params.iter().any(|p| p == "k") {
        scope.params.push("k".into());
    }
    let k = scope.scalar(&crate::syntax::ast::parse_expr(level)?)?;
    let (lca, lv) = quantum::sugawara(l, &k)?;
    let mut r = Report::new("va sugawara");
    r.info("sugawara", &[], lca.display(&lv, Style::Text), lca.display(&lv, Style::Latex));
    let vf = lca.virasoro_extract(&lv);
    let c = match &vf.c {
        Some(c) => {
            r.push("virasoro-form", &[], virasoro_text("L", c, Style::Text), virasoro_text("L", c, Style::Latex), true);
            c.clone()
        }
        None => {
            r.push("virasoro-form", &[], lca.display_lambda(&vf.residual, Style::Text), lca.display_lambda(&vf.residual, Style::Latex), false);
            return Ok(r);
        }
    };
    r.push("central-charge", &[], coeff_text(&c, Style::Text), coeff_text(&c, Style::Latex), true);
    for i in 0..lca.ngens() {
        let a = VaExpr::gen(i);
        let res = lca.primary_residual(&lv, &a, &Coeff::one());
        let name = &lca.names[i];
        if res.is_zero() {
            r.push("primary", &[i], primary_text(name, &Coeff::one(), Style::Text), primary_text(&crate::syntax::print::latex_ident(name), &Coeff::one(), Style::Latex), true);
        } else {
            r.push("primary", &[i], lca.display_lambda(&res, Style::Text), lca.display_lambda(&res, Style::Latex), false);
        }
    }
    let halved = quantum::sugawara_charge_halved(l, &k)?;
    let ratio = c.checked_div(&halved).map(|x| coeff_text(&x, Style::Text)).unwrap_or_else(|| "undefined".into());
    r.info(
        "charge-comparison",
        &[],
        format!("k*dim/(2*(k + h)) = {}; ratio = {ratio}", coeff_text(&halved, Style::Text)),
        format!("\\frac{{k \\dim\\mathfrak{{g}}}}{{2(k + h^\\vee)}} = {}", coeff_text(&halved, Style::Latex)),
    );
    let n = Coeff::int(oracle);
    let engine_n = quantum::sugawara(l, &n)
        .ok()
        .and_then(|(lc, lvn)| lc.virasoro_extract(&lvn).c);
    let modes_n = modes::sugawara_charge_from_modes(l, &n)?;
    let ok = engine_n.as_ref() == Some(&modes_n);
    r.check(
        "mode-oracle",
        &[oracle.max(0) as usize],
        format!("modes give c = {} at k = {oracle}", coeff_text(&modes_n, Style::Text)),
        ok,
    );
    Ok(r)
}
