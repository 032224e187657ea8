//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use arcseries::bell::{bell_arccos, check_bell_arccos, check_envelope};
use arcseries::exact::rat;
use arcseries::pi::{empirical_L, residual, residuals, PiSeriesTag};
use arcseries::prodexpand::{check_lemma_equivalence, check_lemma_identities};
use arcseries::qfunc::{check_q_alternating, check_q_closed_forms, check_q_zeros};
use arcseries::report::CheckReport;
use arcseries::series::{check_alpha_integer, check_arcsin2_recovery, odd_pow_at_one};
use arcseries::verify::{check_bell_oracles, check_numeric_residuals};
use arcseries::{Error, Rational, Result};
use num_traits::Signed;

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

impl From<CheckReport> for Outcome {
    fn from(r: CheckReport) -> Self {
        let detail = match r.violations.first() {
            None => format!("{} checks", r.checked),
            Some(v) => format!("{} of {} failed, first {}: {}", r.violations.len(), r.checked, v.case, v.detail),
        };
        Outcome { ok: r.passed(), detail }
    }
}

fn merged(name: &str, parts: impl IntoIterator<Item = CheckReport>) -> Outcome {
    let mut all = CheckReport::new(name);
    for p in parts {
        all.merge(p);
    }
    all.into()
}

fn run(n: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error: {e}") });
    let took = start.elapsed();
    let in_time = limit.is_none_or(|l| took <= l);
    let ok = outcome.ok && in_time;
    let budget = limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
    let late = if in_time { "" } else { ", over time limit" };
    println!(
        "[{}] criterion {n:>2}: {title} ({}{late}; {:.2}s{budget})",
        if ok { "PASS" } else { "FAIL" },
        outcome.detail,
        took.as_secs_f64()
    );
    ok
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn main() -> ExitCode {
    let mut ok = true;

    ok &= run(1, "product expansions agree with their Stirling forms, k <= 25", secs(5), || {
        Ok(check_lemma_equivalence(25).into())
    });

    ok &= run(2, "lemma identity suite, k <= 25", secs(5), || Ok(check_lemma_identities(25).into()));

    ok &= run(3, "Q closed forms for k <= 30 and odd zeros for j + m <= 15", secs(5), || {
        Ok(merged("q", [check_q_closed_forms(30), check_q_zeros(15)]))
    });

    ok &= run(4, "arccos Bell routes agree for m <= 20", secs(30), || {
        let mut r = check_bell_arccos(20);
        let spots = [(1, 1, rat(-1, 6)), (2, 2, rat(1, 36))];
        for (m, k, want) in spots {
            let got = bell_arccos(m, k)?;
            r.check(got == want, || format!("spot m={m},k={k}"), || format!("{got} != {want}"));
        }
        Ok(r.into())
    });

    ok &= run(5, "three-way Bell agreement on 200 random instances, n <= 18", secs(60), || {
        Ok(check_bell_oracles(200, 18, SEED)?.into())
    });

    ok &= run(6, "integer alpha reproduces the ratio powers, k <= 8, n <= 15", None, || {
        Ok(check_alpha_integer(8, 15)?.into())
    });

    ok &= run(7, "Q-weighted alternating sum vanishes, 1 <= m < k <= 12", None, || {
        Ok(check_q_alternating(12).into())
    });

    ok &= run(8, "envelope identity, k <= 25", None, || Ok(check_envelope(25).into()));

    ok &= run(9, "arcsin square coefficients, m <= 25", None, || Ok(check_arcsin2_recovery(25)?.into()));

    ok &= run(10, "truncated expansions match the oracle at M = 40, 30 digits", secs(60), || {
        Ok(check_numeric_residuals(40, 30)?.into())
    });

    ok &= run(11, "pi series: sq8 accuracy, monotone classical residuals, L(1)", secs(30), || {
        let mut r = CheckReport::new("pi");
        let sq8 = residual(&PiSeriesTag::Sq8, 60, 30)?;
        let bound = rat(1, 10_000_000_000);
        r.check(sq8.upper() < bound, || "sq8:M=60".into(), || format!("residual {sq8}"));
        let ms: Vec<usize> = (10..=100).collect();
        for tag in PiSeriesTag::CLASSIC {
            let rs = residuals(&tag, &ms, 80)?;
            let first_bad = rs.windows(2).position(|w| w[1].upper() >= w[0].lower());
            r.check(first_bad.is_none(), || format!("{tag}"), || format!("not decreasing at M = {}", 11 + first_bad.unwrap_or(0)));
        }
        let l = empirical_L(1, 200, 20)?;
        let dist: Rational = (l.estimate.root.center() - rat(1, 2)).abs();
        r.check(dist < rat(1, 20), || "L(1)".into(), || format!("estimate {}", l.estimate.root));
        let detail = format!("L(1) ~ {}", l.estimate.root.certified_string().chars().take(8).collect::<String>());
        let outcome: Outcome = r.into();
        Ok(Outcome { detail: format!("{}, {detail}", outcome.detail), ..outcome })
    });

    ok &= run(12, "odd powers are not expandable at 1, k = 1, 2, 3", None, || {
        let mut r = CheckReport::new("odd");
        for k in 1..=3 {
            let res = odd_pow_at_one(k);
            r.check(matches!(res, Err(Error::NotExpandable(_))), || format!("k={k}"), || format!("{res:?}"));
        }
        Ok(r.into())
    });

    if ok {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance criteria failed");
        ExitCode::FAILURE
    }
}
