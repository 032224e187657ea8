use std::fmt::{self, Write as _};

use arcseries::bell::{bell, bell_arccos, BellArgs};
use arcseries::exact::{parse_rational, to_text};
use arcseries::numeric::{compare, sci, CompareReport};
use arcseries::pi::{self, PiSeriesTag};
use arcseries::prodexpand::{prod_squares, prod_squares_stirling, trig_coeff, ProductVariant, TrigTag};
use arcseries::qfunc::{q, q_table};
use arcseries::report::CheckReport;
use arcseries::series::{
    deriv_at_one, eval_truncated, even_pow_deriv_at1, maclaurin_even_pow, odd_pow_at_one, ratio_pow_alpha,
    CoeffSeries, DerivForm, SeriesExpr, ShiftedVariant,
};
use arcseries::stirling::{stirling1, stirling_row};
use arcseries::verify::{self, Suite};
use arcseries::{Error, Rational, Series, SeriesF64};
use serde_json::{json, Value};

use crate::{Cli, Cmd, Diag, ExprName, FormName, Preset, ShiftedName};

pub const SCHEMA_VERSION: &str = "1";

/// Largest order tried by `series --tol`.
const TOL_MAX_TERMS: usize = 4096;

#[derive(Debug)]
pub enum Fail {
    Usage(String),
    Domain(String),
    Lib(Error),
    Io(String),
    Verification(Value),
}

impl Fail {
    pub fn code(&self) -> u8 {
        match self {
            Fail::Usage(_) => 1,
            Fail::Domain(_) | Fail::Io(_) => 2,
            Fail::Lib(Error::Inconsistent(_) | Error::NonIntegral(_)) => 3,
            Fail::Lib(_) => 2,
            Fail::Verification(_) => 3,
        }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fail::Usage(m) | Fail::Domain(m) | Fail::Io(m) => f.write_str(m),
            Fail::Lib(e) => write!(f, "{e}"),
            Fail::Verification(_) => f.write_str("verification failed"),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Fail>;

/// One result in every output format. `failed` carries counterexamples
/// when the command itself succeeded but found violations.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub failed: Option<Value>,
}

fn output(command: &str, mut body: Value, text: String, csv: Option<String>) -> Output {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("subcommand".into(), json!(command));
    Output { json: body, text, csv, failed: None }
}

fn rational_arg(s: &str, what: &str) -> Res<Rational> {
    parse_rational(s).map_err(|_| Fail::Usage(format!("{what}: cannot parse {s:?} as a rational")))
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(to_text).collect()
}

fn csv_rows(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

pub fn dispatch(cli: &Cli) -> Res<Output> {
    if cli.digits == 0 {
        return Err(Fail::Domain("--digits must be at least 1".into()));
    }
    match &cli.cmd {
        Cmd::Stirling { n, k } => stirling(*n, *k),
        Cmd::Q { k, m, table } => match table {
            Some(t) => q_tab(t[0], t[1]),
            None => q_one(k.expect("required"), m.expect("required")),
        },
        Cmd::Bell { n, k, values, preset, m } => match preset {
            Some(Preset::Arccos) => bell_preset(m.expect("required"), *k),
            None => bell_values(n.expect("required"), *k, values.as_deref().expect("required")),
        },
        Cmd::Prod { k, variant, stirling } => prod(*k, variant, *stirling),
        Cmd::Series { expr, k, alpha, variant, terms, tol, eval } => {
            let spec = ExprSpec::new(*expr, *k, alpha.as_deref(), *variant)?;
            series(cli, spec, *terms, tol.as_deref(), eval.as_deref())
        }
        Cmd::Pi { repr, k, alpha, terms } => pi_cmd(cli, repr, *k, alpha.as_deref(), *terms),
        Cmd::Verify { suite, max } => verify_cmd(cli, suite, *max),
        Cmd::Diag { what } => diag(cli, what),
    }
}

fn stirling(n: usize, k: Option<usize>) -> Res<Output> {
    match k {
        Some(k) => {
            let v = stirling1(n, k)?;
            Ok(output(
                "stirling",
                json!({ "n": n, "k": k, "value": v.to_string() }),
                format!("s({n}, {k}) = {v}\n"),
                Some(csv_rows("n,k,value", [format!("{n},{k},{v}")])),
            ))
        }
        None => {
            let row = stirling_row(n);
            let text = row.iter().enumerate().map(|(k, v)| format!("s({n}, {k}) = {v}\n")).collect();
            let csv = csv_rows("n,k,value", row.iter().enumerate().map(|(k, v)| format!("{n},{k},{v}")));
            Ok(output("stirling", json!({ "n": n, "row": strs(&row) }), text, Some(csv)))
        }
    }
}

fn q_one(k: usize, m: usize) -> Res<Output> {
    let v = to_text(&q(k, m)?);
    Ok(output(
        "q",
        json!({ "k": k, "m": m, "value": v }),
        format!("Q({k}, {m}) = {v}\n"),
        Some(csv_rows("k,m,value", [format!("{k},{m},{v}")])),
    ))
}

fn q_tab(k_max: usize, m_max: usize) -> Res<Output> {
    let t = q_table(k_max, m_max)?;
    let rows: Vec<Vec<String>> = t.iter().map(|r| rats(r)).collect();
    let mut text = String::new();
    for (k, r) in rows.iter().enumerate() {
        let _ = writeln!(text, "k={}: {}", k + 1, r.join(" "));
    }
    let header = std::iter::once("k".to_string()).chain((0..=m_max).map(|m| format!("m={m}"))).collect::<Vec<_>>().join(",");
    let csv = csv_rows(&header, rows.iter().enumerate().map(|(k, r)| format!("{},{}", k + 1, r.join(","))));
    Ok(output("q", json!({ "k_max": k_max, "m_max": m_max, "table": rows }), text, Some(csv)))
}

fn bell_values(n: usize, k: usize, values: &str) -> Res<Output> {
    let xs = values
        .split(',')
        .map(|s| rational_arg(s.trim(), "--values"))
        .collect::<Res<Vec<_>>>()?;
    let v = to_text(&bell(n, k, &BellArgs::new(xs.clone())?)?);
    Ok(output(
        "bell",
        json!({ "n": n, "k": k, "values": rats(&xs), "value": v }),
        format!("B({n}, {k}) = {v}\n"),
        Some(csv_rows("n,k,value", [format!("{n},{k},{v}")])),
    ))
}

fn bell_preset(m: usize, k: usize) -> Res<Output> {
    let v = to_text(&bell_arccos(m, k)?);
    Ok(output(
        "bell",
        json!({ "preset": "arccos", "m": m, "k": k, "value": v }),
        format!("B_arccos({m}, {k}) = {v}\n"),
        Some(csv_rows("m,k,value", [format!("{m},{k},{v}")])),
    ))
}

fn prod(k: usize, variant: &str, via_stirling: bool) -> Res<Output> {
    let var: ProductVariant = variant.parse()?;
    let p = if via_stirling { prod_squares_stirling(k, var)? } else { prod_squares(k, var) };
    let coeffs = strs(p.coeffs());
    let method = if via_stirling { "stirling" } else { "direct" };
    let csv = csv_rows("j,coeff", coeffs.iter().enumerate().map(|(j, c)| format!("{j},{c}")));
    Ok(output(
        "prod",
        json!({ "k": k, "variant": variant, "method": method, "coeffs": coeffs }),
        format!("{p}\n"),
        Some(csv),
    ))
}

/// A series request: exact unless alpha only parses as a float.
enum ExprSpec {
    Exact(SeriesExpr),
    Float(f64),
}

impl ExprSpec {
    fn new(expr: ExprName, k: Option<usize>, alpha: Option<&str>, variant: ShiftedName) -> Res<ExprSpec> {
        let need_k = || k.ok_or_else(|| Fail::Usage("this expression needs --k".into()));
        let v = match variant {
            ShiftedName::PiMinusArccos => ShiftedVariant::PiMinusArccos,
            ShiftedName::PiPlusIArccosh => ShiftedVariant::PiPlusIArccosh,
        };
        Ok(ExprSpec::Exact(match expr {
            ExprName::ArcsinPow => SeriesExpr::ArcsinPow(need_k()?),
            ExprName::ArcsinhPow => SeriesExpr::ArcsinhPow(need_k()?),
            ExprName::ArccosRatio => SeriesExpr::ArccosRatio(need_k()?),
            ExprName::ArccoshRatio => SeriesExpr::ArccoshRatio(need_k()?),
            ExprName::Shifted => SeriesExpr::Shifted(need_k()?, v),
            ExprName::AlphaRatio => {
                let a = alpha.ok_or_else(|| Fail::Usage("alpha-ratio needs --alpha".into()))?;
                match parse_rational(a) {
                    Ok(q) => SeriesExpr::AlphaRatio(q),
                    Err(_) => match a.parse::<f64>() {
                        Ok(f) if f.is_finite() => return Ok(ExprSpec::Float(f)),
                        _ => return Err(Fail::Usage(format!("--alpha: cannot parse {a:?}"))),
                    },
                }
            }
        }))
    }

    fn exact(self, what: &str) -> Res<SeriesExpr> {
        match self {
            ExprSpec::Exact(e) => Ok(e),
            ExprSpec::Float(_) => Err(Fail::Domain(format!("{what} needs a rational alpha"))),
        }
    }
}

fn series_json<T: arcseries::Scalar>(s: &CoeffSeries<T>, name: &str, coeffs: Vec<String>) -> Value {
    json!({
        "expr": name,
        "center": s.center,
        "variable": s.variable,
        "parity": s.parity,
        "truncation_order": s.truncation_order(),
        "exact": s.meta.exact,
        "lhs_sign": s.meta.lhs_sign,
        "label": s.meta.label,
        "coeffs": coeffs,
    })
}

fn series(cli: &Cli, spec: ExprSpec, terms: Option<usize>, tol: Option<&str>, eval: Option<&str>) -> Res<Output> {
    let x = eval.map(|e| rational_arg(e, "--eval")).transpose()?;
    let expr = match spec {
        ExprSpec::Float(alpha) => {
            if tol.is_some() {
                return Err(Fail::Domain("--tol needs a rational alpha".into()));
            }
            return series_float(alpha, terms.expect("required"), x);
        }
        ExprSpec::Exact(e) => e,
    };
    let name = expr.name();
    let s: Series = match (terms, tol) {
        (Some(m), _) => expr.build(m)?,
        (None, Some(t)) => {
            let tol = rational_arg(t, "--tol")?;
            let x = x.as_ref().expect("clap requires --eval");
            grow_until(&expr, x, &tol)?
        }
        (None, None) => unreachable!("clap requires --terms or --tol"),
    };
    let coeffs = rats(&s.coeffs);
    let mut body = series_json(&s, &name, coeffs.clone());
    let mut text = format!("{name}\n{s}\n");
    if let Some(x) = &x {
        let value = eval_truncated(&s, x, cli.digits)?;
        let tail = if s.converges_at(x) { s.tail_bound(x) } else { None };
        let tail_s = tail.as_ref().map(sci);
        body["eval"] = json!({
            "x": to_text(x),
            "digits": cli.digits,
            "value": value.certified_string(),
            "tail_bound": tail_s,
        });
        let _ = writeln!(text, "at x = {}: {}", to_text(x), value.certified_string());
        match tail_s {
            Some(t) => {
                let _ = writeln!(text, "tail estimate: {t}");
            }
            None => text.push_str("tail estimate: unavailable\n"),
        }
    }
    let csv = csv_rows("n,coeff", coeffs.iter().enumerate().map(|(n, c)| format!("{n},{c}")));
    Ok(output("series", body, text, Some(csv)))
}

fn grow_until(expr: &SeriesExpr, x: &Rational, tol: &Rational) -> Res<Series> {
    let mut m = 8;
    loop {
        let s = expr.build(m)?;
        if !s.converges_at(x) {
            return Err(Fail::Domain(format!("x = {} is outside the disc of convergence", to_text(x))));
        }
        if s.tail_bound(x).is_some_and(|t| &t <= tol) {
            return Ok(s);
        }
        if m >= TOL_MAX_TERMS {
            return Err(Fail::Domain(format!("tolerance not reached within {TOL_MAX_TERMS} terms")));
        }
        m *= 2;
    }
}

fn series_float(alpha: f64, terms: usize, x: Option<Rational>) -> Res<Output> {
    let s: SeriesF64 = ratio_pow_alpha(&alpha, terms)?;
    let name = format!("alpha-ratio(alpha={alpha})");
    let coeffs: Vec<String> = s.coeffs.iter().map(|c| format!("{c:e}")).collect();
    let mut body = series_json(&s, &name, coeffs.clone());
    let mut text = format!("{name}\n");
    for (n, c) in coeffs.iter().enumerate() {
        let _ = writeln!(text, "c[{n}] = {c}");
    }
    if let Some(x) = x {
        let xf: f64 = to_text(&x).split('/').map(|p| p.parse::<f64>().unwrap_or(f64::NAN)).reduce(|a, b| a / b).unwrap_or(f64::NAN);
        let v = s.eval(&xf);
        body["eval"] = json!({ "x": to_text(&x), "value": format!("{v:e}"), "tail_bound": null });
        let _ = writeln!(text, "at x = {}: {v:e}", to_text(&x));
    }
    let csv = csv_rows("n,coeff", coeffs.iter().enumerate().map(|(n, c)| format!("{n},{c}")));
    Ok(output("series", body, text, Some(csv)))
}

fn pi_cmd(cli: &Cli, repr: &str, k: Option<usize>, alpha: Option<&str>, terms: usize) -> Res<Output> {
    let tag = PiSeriesTag::parse(repr, k, alpha)?;
    let r = pi::report(&tag, terms, cli.digits)?;
    let mut body = serde_json::to_value(&r).expect("serializable");
    body["digits"] = json!(cli.digits);
    let text = format!(
        "{}  M = {}\npartial sum  {}\n             {}\ntarget       {}\nresidual     {}\nroot rate    {}\nratio rate   {}\n",
        r.repr,
        r.terms,
        r.partial_sum,
        r.partial_sum_decimal.certified_string(),
        r.target.certified_string(),
        r.residual.certified_string(),
        r.rate.root.certified_string(),
        r.rate.ratio.certified_string(),
    );
    let csv = csv_rows(
        "repr,terms,partial_sum,target,residual",
        [format!(
            "{},{},{},{},{}",
            r.repr,
            r.terms,
            r.partial_sum_decimal.certified_string(),
            r.target.certified_string(),
            r.residual.certified_string()
        )],
    );
    Ok(output("pi", body, text, Some(csv)))
}

fn verify_cmd(cli: &Cli, suite: &str, max: usize) -> Res<Output> {
    let s: Suite = suite.parse()?;
    let reports: Vec<CheckReport> = verify::run(s, max, cli.seed)?;
    Ok(verify_output(suite, max, cli.seed, &reports))
}

fn verify_output(suite: &str, max: usize, seed: u64, reports: &[CheckReport]) -> Output {
    let passed = reports.iter().all(CheckReport::passed);
    let mut text = String::new();
    for r in reports {
        let status = if r.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(text, "{status:>4}  {:<24} {} checks, {} violations", r.name, r.checked, r.violations.len());
    }
    let csv = csv_rows(
        "name,checked,violations",
        reports.iter().map(|r| format!("{},{},{}", r.name, r.checked, r.violations.len())),
    );
    let reports_json: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "name": r.name, "checked": r.checked, "passed": r.passed(), "violations": r.violations }))
        .collect();
    let body = json!({ "suite": suite, "max": max, "seed": seed.to_string(), "passed": passed, "reports": reports_json });
    let mut out = output("verify", body, text, Some(csv));
    if !passed {
        let counterexamples: Vec<Value> = reports
            .iter()
            .flat_map(|r| r.violations.iter().map(move |v| json!({ "check": r.name, "case": v.case, "detail": v.detail })))
            .collect();
        out.failed = Some(Value::Array(counterexamples));
    }
    out
}

fn compare_text(r: &CompareReport) -> String {
    let show = |f: &Option<arcseries::FixNum>| f.as_ref().map(|v| v.certified_string()).unwrap_or_else(|| "-".into());
    let mut t = format!(
        "{} at x = {} with M = {}: {}\nseries    {}\ndirect    {}\nresidual  {}\ntail      {}\n",
        r.expr,
        to_text(&r.x),
        r.terms,
        serde_json::to_value(r.status).expect("serializable").as_str().unwrap_or_default(),
        show(&r.series_value),
        show(&r.direct_value),
        show(&r.residual),
        r.tail_bound.as_ref().map(sci).unwrap_or_else(|| "-".into()),
    );
    if let Some(n) = &r.note {
        let _ = writeln!(t, "note: {n}");
    }
    t
}

fn diag(cli: &Cli, what: &Diag) -> Res<Output> {
    let digits = cli.digits;
    match what {
        Diag::Rate { k, terms } => {
            let l = pi::empirical_L(*k, *terms, digits)?;
            let mut body = serde_json::to_value(&l).expect("serializable");
            body["diag"] = json!("rate");
            let text = format!(
                "L({k}) estimates at M = {terms} (not authoritative)\nroot   {}\nratio  {}\n",
                l.estimate.root.certified_string(),
                l.estimate.ratio.certified_string()
            );
            let csv = csv_rows("m,ratio", l.ratios.iter().enumerate().map(|(i, r)| format!("{},{}", i + 2, r.certified_string())));
            Ok(output("diag", body, text, Some(csv)))
        }
        Diag::Limits { terms } => {
            let rs = pi::five_limits(*terms, digits)?;
            let mut text = format!("rate estimates at M = {terms}\n");
            for r in &rs {
                let _ = writeln!(text, "{:<16} root {}  ratio {}", r.name, r.root.certified_string(), r.ratio.certified_string());
            }
            let csv = csv_rows(
                "name,root,ratio",
                rs.iter().map(|r| format!("{},{},{}", r.name, r.root.certified_string(), r.ratio.certified_string())),
            );
            Ok(output("diag", json!({ "diag": "limits", "terms": terms, "estimates": rs }), text, Some(csv)))
        }
        Diag::Compare { expr, k, alpha, variant, x, terms } => {
            let e = ExprSpec::new(*expr, *k, alpha.as_deref(), *variant)?.exact("compare")?;
            let x = rational_arg(x, "--x")?;
            let r = compare(&e, &x, *terms, digits)?;
            let mut body = serde_json::to_value(&r).expect("serializable");
            body["diag"] = json!("compare");
            let text = compare_text(&r);
            Ok(output("diag", body, text, None))
        }
        Diag::Maclaurin { k, j, terms } => {
            let p = maclaurin_even_pow(*k, *j, *terms)?;
            let value = arcseries::FixNum::from_rational(&p.value, digits)?;
            let tail = p.tail.as_ref().map(sci);
            let body = json!({
                "diag": "maclaurin", "k": k, "j": j, "terms": terms,
                "value": to_text(&p.value),
                "value_decimal": value.certified_string(),
                "last_term": to_text(&p.last_term),
                "tail_estimate": tail,
            });
            let text = format!(
                "[x^{j}] (arccos x)^{} with {terms} inner terms: {}\ntail estimate: {}\n",
                2 * k,
                value.certified_string(),
                tail.as_deref().unwrap_or("unavailable")
            );
            Ok(output("diag", body, text, None))
        }
        Diag::Deriv { k, m, form } => {
            let f = match form {
                FormName::Ratio => DerivForm::Ratio,
                FormName::RatioHyp => DerivForm::RatioHyp,
                FormName::Shifted => DerivForm::Shifted,
                FormName::ShiftedHyp => DerivForm::ShiftedHyp,
            };
            let v = to_text(&deriv_at_one(*k, *m, f)?);
            let body = json!({ "diag": "deriv", "k": k, "m": m, "form": f, "value": v });
            Ok(output("diag", body, format!("derivative {m} of form {form:?}, k = {k}: {v}\n"), None))
        }
        Diag::EvenDeriv { k, n, hyperbolic } => {
            let v = to_text(&even_pow_deriv_at1(*k, *n, *hyperbolic)?);
            let body = json!({ "diag": "even-deriv", "k": k, "n": n, "hyperbolic": hyperbolic, "value": v });
            let f = if *hyperbolic { "arccosh" } else { "arccos" };
            Ok(output("diag", body, format!("d^{n}/dx^{n} ({f} x)^{} at 1: {v}\n", 2 * k), None))
        }
        Diag::Trig { tag, alpha, n } => {
            let t: TrigTag = tag.parse()?;
            let a = rational_arg(alpha, "--alpha")?;
            let c = trig_coeff(t, &a, *n);
            let terms: Vec<Value> =
                c.terms.iter().map(|term| json!({ "prefactor": term.prefactor, "coeff": to_text(&term.coeff) })).collect();
            let exact = c.exact_value(&a).map(|v| to_text(&v));
            let body = json!({ "diag": "trig", "tag": t.name(), "alpha": to_text(&a), "n": n, "terms": terms, "value": exact });
            let mut text = format!("{} coefficient {n} at alpha = {}\n", t.name(), to_text(&a));
            for term in &c.terms {
                let _ = writeln!(text, "  {:?} * {}", term.prefactor, to_text(&term.coeff));
            }
            if let Some(v) = &exact {
                let _ = writeln!(text, "value {v}");
            }
            Ok(output("diag", body, text, None))
        }
        Diag::Odd { k } => {
            odd_pow_at_one(*k)?;
            Err(Fail::Domain(format!("odd power k = {k} unexpectedly expanded")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_checks_become_exit_3_with_counterexamples() {
        let mut bad = CheckReport::new("q-closed-forms");
        bad.check(true, || "k=1".into(), String::new);
        bad.check(false, || "k=2".into(), || "Q(2,0) != 1".into());
        let out = verify_output("q", 4, 0, &[CheckReport::new("q-alternating-sum"), bad]);
        assert_eq!(out.json["passed"], false);
        let failed = out.failed.expect("violations reported");
        assert_eq!(failed, json!([{ "check": "q-closed-forms", "case": "k=2", "detail": "Q(2,0) != 1" }]));
        assert_eq!(Fail::Verification(failed).code(), 3);
        assert!(out.text.contains("FAIL"));
    }

    #[test]
    fn passing_checks_have_no_counterexamples() {
        let mut ok = CheckReport::new("stirling-oracle");
        ok.check(true, || "s(1,1)".into(), String::new);
        assert!(verify_output("stirling", 1, 0, &[ok]).failed.is_none());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Fail::Usage(String::new()).code(), 1);
        assert_eq!(Fail::Lib(Error::Domain(String::new())).code(), 2);
        assert_eq!(Fail::Lib(Error::NotExpandable(String::new())).code(), 2);
        assert_eq!(Fail::Lib(Error::PrecisionInfeasible { requested: 2, limit: 1 }).code(), 2);
        assert_eq!(Fail::Lib(Error::Inconsistent(String::new())).code(), 3);
    }
}
