use super::{coeff_text, kind, pick, Report};
use crate::diffalg::{DiffPoly, LambdaPoly};
use crate::dshier::{ds_gauge, ds_verify};
use crate::error::{Error, Result};
use crate::linalg;
use crate::nonlocal::{dirac_reduce, split_nonlocal, SymbolMatrix};
use crate::pva::PvaSpec;
use crate::syntax::print::{coeff_factor, join_terms, latex_ident, Term};
use crate::syntax::{Names, SourceSpec, Style};

fn lie_args(spec: &SourceSpec, s: &str, a: &str) -> Result<(Vec<crate::Coeff>, Vec<crate::Coeff>)> {
    Ok((spec.parse_lie_elem(s)?, spec.parse_lie_elem(a)?))
}

pub fn ds(spec: &SourceSpec, s: &str, a: &str, trunc: usize) -> Result<Report> {
    let l = spec.lie.as_ref().ok_or_else(|| Error::Invalid("file declares no liealg block".into()))?;
    let (s, a) = lie_args(spec, s, a)?;
    let rep = ds_verify(l, &s, &a, trunc)?;
    let names = Names::new(l.basis.clone());
    let mut r = Report::new("ds");
    if rep.gauge_residual.is_empty() {
        r.check("gauge-residual", &[], format!("zero through z^(-{trunc})"), true);
    }
    for (k, g) in &rep.gauge_residual {
        r.check("gauge-residual", &[(*k + 1) as usize], names.vector(g, Style::Text), false);
    }
    r.check("projections", &[], "f in h and U in the complement", rep.projection_residuals == 0);
    for (n, h) in rep.densities.iter().enumerate() {
        r.info("density", &[n], names.poly(h), names.poly_styled(h, Style::Latex));
    }
    for (n, eq) in rep.equations.iter().enumerate() {
        for (i, e) in eq.iter().enumerate() {
            r.info("equation", &[n, i], names.poly(e), names.poly_styled(e, Style::Latex));
        }
    }
    for n in 0..rep.densities.len() {
        r.check("variational", &[n], format!("F^a_{n} = delta h_{n}/delta u"), !rep.variational_failures.contains(&n));
    }
    for n in 0..rep.densities.len().saturating_sub(1) {
        r.check(
            "lenard-magri",
            &[n],
            format!("{{h_{n}, u}}_H = {{h_{}, u}}_K", n + 1),
            !rep.lenard_magri_failures.contains(&n),
        );
    }
    if rep.involution_failures.is_empty() {
        r.check("involution", &[], "all pairs", true);
    }
    for (m, n) in &rep.involution_failures {
        r.check("involution", &[*m, *n], "nonzero", false);
    }
    Ok(r)
}

pub struct DiracOpts {
    pub constraints: Vec<String>,
    pub trunc: u32,
    pub label: Option<String>,
    pub flow: Option<usize>,
    pub s: Option<String>,
    pub a: Option<String>,
    pub h: String,
    pub k: String,
    pub nls: bool,
}

/// Entries constant in λ and ∂, as a matrix.
fn constant_matrix(t: &SymbolMatrix) -> Option<linalg::Matrix> {
    t.iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    if e.coeffs().any(|(k, f)| k != 0 && !f.is_zero()) {
                        return None;
                    }
                    e.coeff(0).as_constant().or_else(|| e.coeff(0).is_zero().then(crate::Coeff::zero))
                })
                .collect()
        })
        .collect()
}

fn matrix_text(m: &linalg::Matrix, style: Style) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| coeff_text(c, style)).collect();
            match style {
                Style::Text => format!("[{}]", cells.join(", ")),
                Style::Latex => cells.join(" & "),
            }
        })
        .collect();
    match style {
        Style::Text => format!("[{}]", rows.join(", ")),
        Style::Latex => format!("\\begin{{pmatrix}}{}\\end{{pmatrix}}", rows.join(" \\\\ ")),
    }
}

/// local + c·x(λ+∂)⁻¹y.
fn nonlocal_text(names: &Names, local: &LambdaPoly, c: &crate::Coeff, x: &str, y: &str, style: Style) -> String {
    let mut terms = names.lambda_terms(local, style);
    if !c.is_zero() {
        let (neg, coeff) = coeff_factor(c, style);
        let factors = match style {
            Style::Text => vec![x.to_string(), "(l + D)^(-1)".to_string(), y.to_string()],
            Style::Latex => vec![format!("{}(\\lambda+\\partial)^{{-1}}{}", latex_ident(x), latex_ident(y))],
        };
        terms.push(Term { neg, coeff, factors });
    }
    join_terms(&terms, style)
}

fn local_table(t: &SymbolMatrix) -> Option<Vec<Vec<LambdaPoly>>> {
    t.iter()
        .map(|row| {
            row.iter()
                .map(|e| e.coeffs().all(|(k, f)| k >= 0 || f.is_zero()).then(|| e.local_part()))
                .collect()
        })
        .collect()
}

pub fn dirac(spec: &SourceSpec, o: &DiracOpts) -> Result<Report> {
    let theta: Vec<DiffPoly> = if o.constraints.is_empty() {
        spec.constraints.clone()
    } else {
        o.constraints.iter().map(|c| spec.parse_poly(c)).collect::<Result<_>>()?
    };
    if theta.is_empty() {
        return Err(Error::Invalid("no constraints given".into()));
    }
    let labels: Vec<String> = match &o.label {
        Some(l) => vec![l.clone()],
        None => spec.brackets.keys().cloned().collect(),
    };
    let mut r = Report::new("dirac");
    let mut quotients = std::collections::BTreeMap::new();
    for label in &labels {
        let t = pick(spec, Some(label))?;
        let red = dirac_reduce(t, &theta, o.trunc)?;
        let (qn, qt) = red.quotient.clone().unwrap_or_else(|| (red.names.clone(), red.table.clone()));
        let names = Names::new(qn.clone());
        for (i, row) in qt.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                r.info(&kind("reduced", label), &[i, j], e.display(&names, Style::Text), e.display(&names, Style::Latex));
            }
        }
        let cf = red.centrality_failures(t)?;
        if cf.is_empty() {
            r.check(&kind("central", label), &[], format!("constraints central through l^(-{})", o.trunc), true);
        }
        for (a, i) in cf {
            r.check(&kind("central", label), &[a, i], "nonzero", false);
        }
        let sk = red.skewsymmetry_failures();
        if sk.is_empty() {
            r.check(&kind("skewsymmetry", label), &[], "all pairs", true);
        }
        for (i, j) in sk {
            r.check(&kind("skewsymmetry", label), &[i, j], "nonzero", false);
        }
        r.check(&kind("coherence", label), &[], format!("floors -{} and -{} agree", o.trunc, o.trunc + 2), red.coherent(t)?);
        match constant_matrix(&qt) {
            Some(m) => {
                let skew = (0..m.len()).all(|i| (0..m.len()).all(|j| (&m[i][j] + &m[j][i]).is_zero()));
                let inv = linalg::inverse(&m).is_some();
                let op = linalg::transpose(&m);
                r.push(&kind("constant-matrix", label), &[], matrix_text(&op, Style::Text), matrix_text(&op, Style::Latex), skew && inv);
            }
            None => {
                for (i, row) in qt.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        let (text, latex) = match split_nonlocal(e, j, i) {
                            Some((local, c)) => (
                                nonlocal_text(&names, &local, &c, &qn[j], &qn[i], Style::Text),
                                nonlocal_text(&names, &local, &c, &qn[j], &qn[i], Style::Latex),
                            ),
                            None => (String::new(), String::new()),
                        };
                        let ok = !text.is_empty();
                        if ok {
                            r.push(&kind("nonlocal-form", label), &[i, j], text, latex, true);
                        } else {
                            r.check(&kind("nonlocal-form", label), &[i, j], "no match", false);
                        }
                    }
                }
            }
        }
        quotients.insert(label.clone(), (qn, qt, red.quotient.is_some()));
    }
    if let Some(n) = o.flow {
        flow(spec, o, &theta, n, &quotients, &mut r)?;
    }
    Ok(r)
}

type Quotients = std::collections::BTreeMap<String, (Vec<String>, SymbolMatrix, bool)>;

fn flow(spec: &SourceSpec, o: &DiracOpts, theta: &[DiffPoly], n: usize, q: &Quotients, r: &mut Report) -> Result<()> {
    let l = spec.lie.as_ref().ok_or_else(|| Error::Invalid("--flow needs a liealg block".into()))?;
    let (Some(s), Some(a)) = (&o.s, &o.a) else {
        return Err(Error::Invalid("--flow needs --s and --a".into()));
    };
    let (s, a) = lie_args(spec, s, a)?;
    let gauge = ds_gauge(l, &s, n + 1)?;
    let dens = gauge.densities(l, &a)?;
    let dropped: Vec<usize> = theta
        .iter()
        .map(|t| {
            let g = t.max_gen().filter(|_| t.num_terms() == 1 && t.degree() == 1 && t.max_order() == Some(0));
            g.ok_or_else(|| Error::Invalid("--flow needs constraints that are single generators".into()))
        })
        .collect::<Result<_>>()?;
    let keep: Vec<usize> = (0..spec.generators.len()).filter(|i| !dropped.contains(i)).collect();
    let drop = |f: &DiffPoly| f.map_gens(|g| keep.iter().position(|&k| k == g));
    let hs = spec.bracket(&o.h)?;
    let eq: Vec<DiffPoly> = hs.hamiltonian_flow(&dens[n]);
    let eq: Vec<DiffPoly> = keep.iter().map(|&i| drop(&eq[i])).collect();
    let knames: Vec<String> = keep.iter().map(|&i| spec.generators[i].name.clone()).collect();
    let names = Names::new(knames.clone());
    for (i, e) in eq.iter().enumerate() {
        r.info("flow", &[i], names.poly(e), names.poly_styled(e, Style::Latex));
    }
    let (_, kt, _) = q.get(&o.k).ok_or_else(|| Error::Invalid(format!("bracket '{}' was not reduced", o.k)))?;
    match local_table(kt) {
        Some(t) => {
            let k_local = PvaSpec::new(knames.clone(), t)?;
            let kf = k_local.hamiltonian_flow(&drop(&dens[n + 1]));
            r.check("k-flow", &[], format!("reduced {} flow of h_{} agrees", o.k, n + 1), kf == eq);
        }
        None => r.check("k-flow", &[], format!("reduced {} is nonlocal", o.k), false),
    }
    if o.nls {
        if eq.len() != 2 {
            return Err(Error::Invalid("--nls needs two surviving generators".into()));
        }
        let (u, v) = (DiffPoly::var(0, 0), DiffPoly::var(1, 0));
        let u2v = &(&u * &u) * &v;
        let k = eq[0].coeff_of(u2v.leading().expect("nonzero").0);
        let want_u = &DiffPoly::var(0, 2) + &u2v.scale(&k);
        let want_v = -&(&DiffPoly::var(1, 2) + &(&(&u * &v) * &v).scale(&k));
        let ok = eq[0] == want_u && eq[1] == want_v && !k.is_zero();
        r.push("kappa-eff", &[], coeff_text(&k, Style::Text), coeff_text(&k, Style::Latex), ok);
    }
    Ok(())
}
