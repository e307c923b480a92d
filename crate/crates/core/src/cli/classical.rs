use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{kind, pick, vec_styled, Report};
use crate::coeff::Coeff;
use crate::diffalg::{DiffPoly, Monomial, DerivVar};
use crate::error::{Error, Result};
use crate::hierarchy::{independence_check, involution_table, lm_run};
use crate::pva::check_compatibility;
use crate::syntax::{Names, SourceSpec, Style};
use crate::varcalc;

pub fn check(spec: &SourceSpec) -> Report {
    let mut r = Report::new("check");
    if let Some(l) = &spec.lie {
        let issues = l.validate();
        if issues.is_empty() {
            r.check("liealg", &[], "skewsymmetry, Jacobi and invariance hold", true);
        }
        for i in issues {
            r.check(&format!("liealg-{}", i.kind), &i.indices, i.residual, false);
        }
    }
    let names = spec.names();
    for (label, t) in &spec.brackets {
        let skew = t.check_skewsymmetry();
        if skew.is_empty() {
            r.check(&kind("skewsymmetry", label), &[], "all pairs", true);
        }
        for p in skew {
            let (i, j) = p.indices;
            r.push(
                &kind("skewsymmetry", label),
                &[i, j],
                names.lambda(&p.residual),
                names.lambda_styled(&p.residual, "l", Style::Latex),
                false,
            );
        }
        let jac = t.check_jacobi();
        if jac.is_empty() {
            r.check(&kind("jacobi", label), &[], "all triples", true);
        }
        for p in jac {
            let (i, j, k) = p.indices;
            r.push(
                &kind("jacobi", label),
                &[i, j, k],
                names.lambda_mu_styled(&p.residual, Style::Text),
                names.lambda_mu_styled(&p.residual, Style::Latex),
                false,
            );
        }
    }
    let labels: Vec<&String> = spec.brackets.keys().collect();
    for (x, a) in labels.iter().enumerate() {
        for b in &labels[x + 1..] {
            let k = format!("compatibility({a},{b})");
            match check_compatibility(&spec.brackets[*a], &spec.brackets[*b]) {
                Ok((t, res)) if res.is_empty() => r.check(&k, &[], format!("Jacobi holds for {a} + {t}*{b}"), true),
                Ok((_, res)) => {
                    for p in res {
                        let (i, j, l) = p.indices;
                        r.push(
                            &k,
                            &[i, j, l],
                            names.lambda_mu_styled(&p.residual, Style::Text),
                            names.lambda_mu_styled(&p.residual, Style::Latex),
                            false,
                        );
                    }
                }
                Err(e) => r.check(&k, &[], e.to_string(), false),
            }
        }
    }
    if let Some(lca) = &spec.va {
        super::vertex::check_lca(lca, &mut r);
    }
    r
}

pub fn bracket(spec: &SourceSpec, f: &str, g: &str, label: Option<&str>) -> Result<Report> {
    if spec.brackets.is_empty() && spec.va.is_some() {
        return super::vertex::run(
            spec,
            &super::VaCommand::Bracket {
                a: f.to_string(),
                b: g.to_string(),
            },
        );
    }
    let t = pick(spec, label)?;
    let (f, g) = (spec.parse_poly(f)?, spec.parse_poly(g)?);
    let names = spec.names();
    let p = t.bracket(&f, &g);
    let mut r = Report::new("bracket");
    r.info("bracket", &[], names.lambda(&p), names.lambda_styled(&p, "l", Style::Latex));
    let fb = t.functional_bracket(&f, &g);
    r.info("functional", &[], names.poly(fb.rep()), names.poly_styled(fb.rep(), Style::Latex));
    Ok(r)
}

fn parse_seed(spec: &SourceSpec, seed: &str) -> Result<Vec<DiffPoly>> {
    let xi: Vec<DiffPoly> = seed.split(',').map(|s| spec.parse_poly(s.trim())).collect::<Result<_>>()?;
    if xi.len() != spec.generators.len() {
        return Err(Error::Shape(format!(
            "seed has {} components, file has {} generators",
            xi.len(),
            spec.generators.len()
        )));
    }
    Ok(xi)
}

pub fn hierarchy(spec: &SourceSpec, seed: &str, steps: usize, h: &str, k: &str, commute_upto: Option<usize>) -> Result<Report> {
    let (hs, ks) = (spec.bracket(h)?, spec.bracket(k)?);
    let xi0 = parse_seed(spec, seed)?;
    let state = lm_run(hs, ks, &xi0, steps)?;
    let names = spec.names();
    let mut r = Report::new("hierarchy");
    for (n, st) in state.steps.iter().enumerate() {
        r.info("xi", &[n], vec_styled(&names, &st.xi, Style::Text), vec_styled(&names, &st.xi, Style::Latex));
        r.info("density", &[n], names.poly(&st.h), names.poly_styled(&st.h, Style::Latex));
        r.info("equation", &[n], vec_styled(&names, &st.eq, Style::Text), vec_styled(&names, &st.eq, Style::Latex));
    }
    for (n, res) in state.lenard_magri_residuals().iter().enumerate() {
        let ok = res.iter().all(DiffPoly::is_zero);
        let text = if ok { format!("K xi_{} = H xi_{n}", n + 1) } else { vec_styled(&names, res, Style::Text) };
        r.check("lenard-magri", &[n], text, ok);
    }
    for (n, res) in state.density_residuals().iter().enumerate() {
        let ok = res.iter().all(DiffPoly::is_zero);
        let text = if ok { format!("delta h_{n}/delta u = xi_{n}") } else { vec_styled(&names, res, Style::Text) };
        r.check("variational", &[n], text, ok);
    }
    let inv = involution_table(&state);
    let mut inv_ok = true;
    for (lab, table) in [(h, &inv.h), (k, &inv.k)] {
        for (m, row) in table.iter().enumerate() {
            for (n, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    inv_ok = false;
                    r.push(&kind("involution", lab), &[m, n], names.poly(c.rep()), names.poly_styled(c.rep(), Style::Latex), false);
                }
            }
        }
    }
    if inv_ok {
        r.check("involution", &[], format!("{{h_m, h_n}}_{h} = {{h_m, h_n}}_{k} = 0 for 0 <= m, n <= {steps}"), true);
    }
    let upto = commute_upto.unwrap_or(steps.min(3));
    let bad = state.noncommuting_flows(upto);
    if bad.is_empty() {
        r.check("commute", &[], format!("flows 0..={upto} pairwise commute"), true);
    }
    for (m, n) in bad {
        r.check("commute", &[m, n], "nonzero commutator", false);
    }
    let ind = independence_check(&state);
    let orders: Vec<String> = ind.orders.iter().map(|o| o.map_or("-".into(), |x| x.to_string())).collect();
    r.check("independence", &[], format!("rank {}, orders {}", ind.rank, orders.join(" ")), ind.independent);
    Ok(r)
}

pub fn varcalc_one(spec: &SourceSpec, f: &str) -> Result<Report> {
    let f = spec.parse_poly(f)?;
    let n = spec.generators.len();
    let names = spec.names();
    let mut r = Report::new("varcalc");
    let d = varcalc::variational_derivative(&f, n);
    r.info("variational-derivative", &[], vec_styled(&names, &d, Style::Text), vec_styled(&names, &d, Style::Latex));
    match varcalc::is_total_derivative(&f) {
        Some(w) => r.info("total-derivative", &[], names.poly(&w), names.poly_styled(&w, Style::Latex)),
        None => r.info("total-derivative", &[], "none", "\\text{none}"),
    }
    r.check("selfadjoint", &[], "D of the variational derivative is selfadjoint", varcalc::is_closed(&d));
    let h = varcalc::homotopy_integrate(&d)?;
    r.info("homotopy", &[], names.poly(&h), names.poly_styled(&h, Style::Latex));
    r.check("homotopy-class", &[], "f - homotopy(delta f) lies in F + Im D", same_class(&f, &h, n));
    r.info("class", &[], names.poly(&varcalc::reduce_mod_image(&f, n)), names.poly_styled(&varcalc::reduce_mod_image(&f, n), Style::Latex));
    Ok(r)
}

fn same_class(f: &DiffPoly, g: &DiffPoly, n: usize) -> bool {
    let d = f - g;
    let d = &d - &DiffPoly::constant(d.constant_term());
    varcalc::is_zero_functional(&d, n)
}

/// A random differential polynomial with small integer coefficients.
fn random_poly(rng: &mut StdRng, ngens: usize, degree: u32, order: u32) -> DiffPoly {
    let mut f = DiffPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let deg = rng.gen_range(1..=degree.max(1));
        let factors = (0..deg)
            .map(|_| (DerivVar::new(rng.gen_range(0..ngens), rng.gen_range(0..=order)), 1))
            .collect();
        let c = Coeff::int(rng.gen_range(-5..=5));
        f.add_term(Monomial::from_factors(factors), &c);
    }
    f
}

/// Property run over random f: δ kills ∂g + c, total-derivative detection,
/// selfadjointness of D_{δf}, and homotopy ∘ δ = id mod 𝔽 + Im ∂.
pub fn varcalc_sample(ngens: usize, count: usize, seed: u64, degree: u32, order: u32) -> Report {
    let names = Names::generic(ngens.max(1));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut fails: [Vec<String>; 4] = Default::default();
    for _ in 0..count {
        let f = random_poly(&mut rng, ngens.max(1), degree, order);
        let g = random_poly(&mut rng, ngens.max(1), degree, order);
        let c = Coeff::int(rng.gen_range(-2..=2));
        let exact = &g.derivative() + &DiffPoly::constant(c.clone());
        let n = ngens.max(1);
        if varcalc::variational_derivative(&exact, n).iter().any(|x| !x.is_zero()) {
            fails[0].push(names.poly(&exact));
        }
        let witness = varcalc::is_total_derivative(&exact);
        let ok = match (&witness, c.is_zero()) {
            (Some(w), true) => w.derivative() == exact,
            (None, false) => true,
            _ => false,
        };
        if !ok || varcalc::is_total_derivative(&f).is_some() != (varcalc::is_zero_functional(&f, n)) {
            fails[1].push(names.poly(&exact));
        }
        let d = varcalc::variational_derivative(&f, n);
        if !varcalc::is_closed(&d) {
            fails[2].push(names.poly(&f));
        }
        match varcalc::homotopy_integrate(&d) {
            Ok(h) if same_class(&f, &h, n) => {}
            _ => fails[3].push(names.poly(&f)),
        }
    }
    let mut r = Report::new("varcalc");
    let labels = [
        "delta-kills-exact",
        "total-derivative",
        "selfadjoint",
        "homotopy",
    ];
    for (lab, fl) in labels.iter().zip(&fails) {
        let text = match fl.first() {
            None => format!("{count}/{count} samples"),
            Some(x) => format!("{}/{count} samples; first failure {x}", count - fl.len()),
        };
        r.check(lab, &[], text, fl.is_empty());
    }
    r
}
