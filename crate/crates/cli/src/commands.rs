use crate::args::{
    ConvergenceArgs, EvalArgs, FunctionArgs, GridArgs, Op, OperatorArgs, Scheme, TableArgs, VerifyArgs,
};
use crate::format::{csv, num};
use crate::CliError;
use alpha_paltanea::analysis::{approximation_series, estimate_order, OperatorFamily};
use alpha_paltanea::moments::{leading_order_check, verify_lemmas_exact_batch, ExactSetting, Verdict};
use alpha_paltanea::{
    lookup, reduction_check, Function1D, OperatorKind, OperatorParams, QuadratureConfig, SchemeFamily,
};
use std::collections::BTreeMap;

/// Gap allowed in the reduction identities.
const REDUCTION_TOL: f64 = 1e-10;

struct Defaults {
    rho: f64,
    alpha: f64,
    function: &'static str,
}

const TABLE_DEFAULTS: Defaults = Defaults {
    rho: 5.0,
    alpha: 0.2,
    function: "example1",
};
const CONVERGENCE_DEFAULTS: Defaults = Defaults {
    rho: 4.0,
    alpha: 0.3,
    function: "exp",
};

fn config(op: &OperatorArgs) -> Result<QuadratureConfig, CliError> {
    match op.tol {
        None => Ok(QuadratureConfig::default()),
        Some(tol) => {
            let abs = (tol * 1e-2).max(QuadratureConfig::MIN_ABS_TOL);
            Ok(QuadratureConfig::new(
                tol,
                abs,
                QuadratureConfig::default().max_subdivisions(),
            )?)
        }
    }
}

fn scheme_family(op: &OperatorArgs) -> Result<SchemeFamily, CliError> {
    match (op.scheme, op.a0, op.a1) {
        (Scheme::Custom, Some(a0), Some(a1)) => Ok(SchemeFamily::Custom { a0, a1 }),
        (Scheme::Custom, _, _) => Err(CliError::Config(
            "--scheme custom needs both --a0 and --a1".into(),
        )),
        (_, None, None) => Ok(match op.scheme {
            Scheme::PaperExample => SchemeFamily::PaperExample,
            _ => SchemeFamily::ExactE1,
        }),
        _ => Err(CliError::Config(
            "--a0/--a1 are only accepted with --scheme custom".into(),
        )),
    }
}

fn params(op: &OperatorArgs, d: &Defaults) -> Result<OperatorParams, CliError> {
    Ok(OperatorParams::new(
        op.n.unwrap_or(10),
        op.alpha.unwrap_or(d.alpha),
        op.rho.unwrap_or(d.rho),
    )?)
}

fn families(op: &OperatorArgs) -> Result<Vec<OperatorFamily>, CliError> {
    let scheme = scheme_family(op)?;
    Ok(match op.op {
        Op::Q => vec![OperatorFamily::Q],
        Op::M1 => vec![OperatorFamily::M1(scheme)],
        Op::M2 => vec![OperatorFamily::M2Bar],
        Op::M3 => vec![OperatorFamily::M3Tilde],
        Op::All => OperatorFamily::all(scheme).to_vec(),
    })
}

fn kinds(op: &OperatorArgs, p: &OperatorParams) -> Result<Vec<OperatorKind>, CliError> {
    families(op)?
        .iter()
        .map(|f| f.kind_at(p.n(), p.rho()).map_err(CliError::from))
        .collect()
}

fn function(args: &FunctionArgs, d: &Defaults) -> Result<Function1D, CliError> {
    match &args.poly {
        Some(c) => Ok(Function1D::polynomial(c.clone())?),
        None => Ok(Function1D::from_entry(lookup(
            args.function.as_deref().unwrap_or(d.function),
        )?)),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("grid `{spec}` is not start:stop:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    // Negated so NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(step > 0.0) || !(stop >= start) {
        return Err(CliError::Config(format!(
            "grid `{spec}` needs step > 0 and stop >= start"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| (start + i as f64 * step).min(stop)).collect())
}

fn grid(args: &GridArgs, default: &[f64]) -> Result<Vec<f64>, CliError> {
    match (&args.grid, &args.points) {
        (Some(g), _) => parse_grid(g),
        (None, Some(p)) if p.is_empty() => Err(CliError::Config("--points is empty".into())),
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => Ok(default.to_vec()),
    }
}

fn column(kind: &OperatorKind) -> &'static str {
    match kind {
        OperatorKind::M2Bar => "M2",
        OperatorKind::M3Tilde => "M3",
        other => other.label(),
    }
}

pub fn eval(a: &EvalArgs) -> Result<String, CliError> {
    let p = params(&a.op, &TABLE_DEFAULTS)?;
    let f = function(&a.function, &TABLE_DEFAULTS)?;
    let default: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let xs = grid(&a.grid, &default)?;
    let kinds = kinds(&a.op, &p)?;
    let s = approximation_series(&f, &p, &kinds, &xs, &config(&a.op)?)?;
    let mut header = vec!["x".to_string(), "f".to_string()];
    header.extend(kinds.iter().map(|k| column(k).to_string()));
    let rows = s.xs.iter().zip(&s.f).zip(&s.values).map(|((x, fx), vals)| {
        let mut row = vec![num(*x), num(*fx)];
        row.extend(vals.iter().map(|v| num(*v)));
        row
    });
    Ok(csv(&header, rows))
}

pub fn table(a: &TableArgs) -> Result<String, CliError> {
    let p = params(&a.op, &TABLE_DEFAULTS)?;
    let f = function(&a.function, &TABLE_DEFAULTS)?;
    let default: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let xs = grid(&a.grid, &default)?;
    let kinds = kinds(&a.op, &p)?;
    let t = approximation_series(&f, &p, &kinds, &xs, &config(&a.op)?)?.to_error_table();
    let mut header = vec!["x".to_string()];
    header.extend(kinds.iter().map(|k| format!("E_{}", column(k))));
    let rows = t.xs.iter().zip(&t.errors).map(|(x, errs)| {
        let mut row = vec![num(*x)];
        row.extend(errs.iter().map(|e| num(*e)));
        row
    });
    Ok(csv(&header, rows))
}

fn parse_ns(raw: &[String]) -> Result<Vec<usize>, CliError> {
    let ns: Vec<usize> = raw
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Config(format!("`{s}` is not a degree")))
        })
        .collect::<Result<_, _>>()?;
    if ns.is_empty() {
        return Err(CliError::Config("--ns is empty".into()));
    }
    Ok(ns)
}

/// CSV of the ladder plus one summary line per operator.
pub fn convergence(a: &ConvergenceArgs) -> Result<(String, String), CliError> {
    let ns = parse_ns(&a.ns)?;
    let template = params(&a.op, &CONVERGENCE_DEFAULTS)?;
    let f = function(&a.function, &CONVERGENCE_DEFAULTS)?;
    let cfg = config(&a.op)?;
    let fams = families(&a.op)?;
    let mut reports = Vec::new();
    for fam in &fams {
        reports.push(estimate_order(fam, &template, &f, a.x, &ns, &cfg)?);
    }
    let names: Vec<&str> = fams
        .iter()
        .map(|fam| match fam {
            OperatorFamily::Q => "Q",
            OperatorFamily::M1(_) => "M1",
            OperatorFamily::M2Bar => "M2",
            OperatorFamily::M3Tilde => "M3",
        })
        .collect();
    let mut header = vec!["n".to_string()];
    header.extend(names.iter().map(|n| format!("E_{n}")));
    let rows = ns.iter().enumerate().map(|(i, n)| {
        let mut row = vec![n.to_string()];
        row.extend(reports.iter().map(|r| num(r.errors[i])));
        row
    });
    let body = csv(&header, rows);
    let mut summary = String::new();
    for (name, r) in names.iter().zip(&reports) {
        let used = r.used.iter().filter(|u| **u).count();
        summary.push_str(&format!(
            "slope {name} = {} (stderr {}, {used}/{} points)\n",
            num(r.fitted_slope),
            num(r.slope_stderr),
            r.ns.len()
        ));
    }
    Ok((body, summary))
}

/// Text report and whether everything passed or was pinned on a formula.
pub fn verify(a: &VerifyArgs) -> Result<(String, bool), CliError> {
    let p = params(&a.op, &TABLE_DEFAULTS)?;
    let cfg = config(&a.op)?;
    if a.max_n > 12 {
        return Err(CliError::Config(
            "--max-n above 12 makes the exact expansion impractical".into(),
        ));
    }
    let settings = ExactSetting::random_batch(a.seed, a.count, a.max_n);
    let reports = verify_lemmas_exact_batch(&settings, &cfg, |_, _| {});

    let mut by_formula: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        if !by_formula.contains_key(r.formula) {
            order.push(r.formula);
        }
        by_formula.entry(r.formula).or_default().push(i);
    }

    let mut out = String::new();
    let mut ok = true;
    out.push_str(&format!(
        "exact checks: {} tuples, seed {}, n <= {}\n",
        settings.len(),
        a.seed,
        a.max_n
    ));
    for formula in order {
        let idx = &by_formula[formula];
        let exact = idx
            .iter()
            .filter(|&&i| reports[i].verdict == Verdict::Exact)
            .count();
        let typo = idx
            .iter()
            .filter(|&&i| reports[i].verdict == Verdict::Typo)
            .count();
        let suspect = idx.len() - exact - typo;
        let status = if suspect > 0 {
            ok = false;
            "FAIL"
        } else if typo > 0 {
            "TYPO"
        } else {
            "PASS"
        };
        out.push_str(&format!("{status} {formula}: {exact}/{} exact", idx.len()));
        if let Some(&first) = idx.iter().find(|&&i| reports[i].verdict != Verdict::Exact) {
            let r = &reports[first];
            let gap = r.exact_gap.as_ref().map(|g| g.to_string()).unwrap_or_default();
            out.push_str(&format!("; exact discrepancy {gap}"));
            if let Some(q) = r.quadrature_value {
                out.push_str(&format!(
                    " (quadrature {}, expansion {})",
                    num(q),
                    num(r.numeric_value)
                ));
            }
        }
        out.push('\n');
    }

    let xs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    for name in ["example1", "e2"] {
        let f = Function1D::from_entry(lookup(name)?);
        let r = reduction_check(&p, &f, &xs, &cfg)?;
        let gaps = [
            Some(("first-order", r.m1_gap)),
            r.m2_gap.map(|g| ("second-order", g)),
        ];
        for (family, gap) in gaps.into_iter().flatten() {
            let pass = gap <= REDUCTION_TOL;
            ok &= pass;
            let status = if pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {family} reduction to Q on {name}: max gap {}\n",
                num(gap)
            ));
        }
    }

    if p.n() >= 200 {
        for r in leading_order_check(&p, 0.4, &cfg)? {
            let status = if r.verdict == Verdict::LeadingOrderAgrees {
                "PASS"
            } else {
                "TYPO"
            };
            out.push_str(&format!(
                "{status} {} leading term: {} vs {}\n",
                r.formula,
                num(r.analytic_value),
                num(r.numeric_value)
            ));
        }
    }
    Ok((out, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("0:1:0.01").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[100], 1.0);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
    }

    #[test]
    fn ladders() {
        assert!(parse_ns(&[String::new()]).is_err());
        assert_eq!(parse_ns(&["16".into(), " 32".into()]).unwrap(), vec![16, 32]);
        assert!(parse_ns(&["x".into()]).is_err());
    }
}
