//! Acceptance runner: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p gue-piv --test acceptance` (add `--release` for
//! speed; the budgets below hold in the dev profile too).

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gue_piv::ensemble::{exact_partition, mc_dn, mc_partition};
use gue_piv::hermite::{gen_hermite, hankel_formula_check, leading_coeff_checks, theorem2_alpha};
use gue_piv::numeric::{
    cross_check_even, numeric_recurrence, numeric_verify_difference, numeric_verify_piv_range, NumericConfig,
};
use gue_piv::verify::{canonical_piv_params, verify_table, IdentityId, Status};
use gue_piv::{hankel_det, recurrence_table, weight_moments, Poly, RatFn, Rational};
use proptest::test_runner::{Config, TestRunner};
use rug::Float;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn within_budget(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:.1?}, budget {limit:?}"))
}

fn exact_identities() -> Check {
    let start = Instant::now();
    let mut zero = 0;
    for k in 1..=3u32 {
        let tbl = recurrence_table(k, 7).map_err(|e| e.to_string())?;
        let reports: Vec<_> = verify_table(&tbl).map_err(|e| e.to_string())?.into_iter().filter(|r| r.n <= 6).collect();
        for rep in &reports {
            ensure(rep.status != Status::Fail, || {
                format!("{} K={} n={} residual {}", rep.identity.name(), k, rep.n, rep.residual)
            })?;
            if rep.identity == IdentityId::PivCanonical {
                let (a, b) = canonical_piv_params(k, rep.n);
                ensure(rep.note.as_deref() == Some(&format!("a = {a}, b = {b}")), || {
                    format!("canonical parameters at K={k} n={}: {:?}", rep.n, rep.note)
                })?;
                ensure(a == 2 * rep.n as i64 + 1 + 2 * k as i64 && b == -8 * (k as i64).pow(2), || {
                    "canonical parameters".into()
                })?;
            }
        }
        for id in IdentityId::ALL {
            let n_pass = reports.iter().filter(|r| r.identity == id && r.status == Status::Pass).count();
            let expected = match id {
                IdentityId::S2Diff
                | IdentityId::TodaBeta
                | IdentityId::TodaMolecule
                | IdentityId::RSquare
                | IdentityId::RBackstep => 6,
                _ => 7,
            };
            ensure(n_pass == expected, || format!("{} K={k}: {n_pass} passes, expected {expected}", id.name()))?;
        }
        zero += reports.iter().filter(|r| r.status == Status::Pass).count();
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{zero} identically zero residuals over 14 identities, K = 1..3, n <= 6"))
}

fn closed_form_alpha() -> Check {
    let anchor = RatFn::new(Poly::from_ints(&[0, -2]), Poly::from_ints(&[1, 0, 2])).unwrap();
    let tbl1 = recurrence_table(1, 0).map_err(|e| e.to_string())?;
    ensure(tbl1.alpha[0] == anchor, || format!("moment route alpha_0 = {}", tbl1.alpha[0]))?;
    ensure(theorem2_alpha(1, 0).unwrap() == anchor, || "closed form alpha_0".into())?;
    for k in 1..=3u32 {
        let tbl = recurrence_table(k, 6).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            let closed = theorem2_alpha(k, n).map_err(|e| e.to_string())?;
            ensure(closed == tbl.alpha[n], || format!("K={k} n={n}: {closed} vs {}", tbl.alpha[n]))?;
        }
    }
    Ok("21 exact matches; anchor alpha_0 = -2t/(1+2t^2) by both routes".into())
}

fn hankel_closed_form() -> Check {
    let tbl = recurrence_table(1, 1).map_err(|e| e.to_string())?;
    let anchor = hankel_formula_check(1, 1, &tbl).map_err(|e| e.to_string())?;
    let d1 = Poly::new(vec![q(1, 2), q(0, 1), q(1, 1)]);
    ensure(anchor.constant == q(2, 1) && anchor.pass, || format!("anchor {anchor:?}"))?;
    ensure(tbl.dhat[1] == d1, || format!("D_1 = {}", tbl.dhat[1]))?;
    ensure(gen_hermite(2, 1).unwrap().hreal.scale(&q(2, 1)) == d1, || "2 Hreal(2,1)".into())?;
    for k in 1..=3u32 {
        let tbl = recurrence_table(k, 5).map_err(|e| e.to_string())?;
        for n in 0..=5 {
            let chk = hankel_formula_check(k, n, &tbl).map_err(|e| e.to_string())?;
            ensure(chk.pass, || format!("K={k} n={n} constant {}", chk.constant))?;
            let lead = leading_coeff_checks(k, n).map_err(|e| e.to_string())?;
            ensure(lead.pass, || format!("leading coefficients K={k} n={n}: {lead:?}"))?;
        }
    }
    Ok("18 Hankel identities and leading coefficients exact; anchor constant 2".into())
}

/// `|a - b| <= 10^-digits * max(1, |b|)`.
fn agrees(a: &Float, b: &Rational, digits: i32) -> bool {
    let bf = Float::with_val(a.prec(), b.as_rug());
    let scale = bf.clone().abs().to_f64().max(1.0);
    Float::with_val(a.prec(), a - &bf).abs().to_f64() <= 10f64.powi(-digits) * scale
}

fn special_point_closed_forms() -> Check {
    let plain = recurrence_table(0, 6).map_err(|e| e.to_string())?;
    for n in 0..=6 {
        ensure(plain.alpha[n].is_zero(), || format!("gamma=0 alpha_{n} = {}", plain.alpha[n]))?;
        ensure(plain.beta[n] == RatFn::constant(q(n as i64, 2)), || format!("gamma=0 beta_{n}"))?;
    }
    let expected = |n: usize, gamma: i64| q(n as i64, 2) + if n % 2 == 1 { q(gamma, 2) } else { q(0, 1) };
    for k in 1..=3u32 {
        let tbl = recurrence_table(k, 6).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            let b = tbl.beta[n].eval(&Rational::zero()).map_err(|e| e.to_string())?;
            ensure(b == expected(n, 2 * k as i64), || format!("K={k} beta_{n}(0) = {b}"))?;
        }
    }

    let cfg = NumericConfig::default();
    let hermite = numeric_recurrence(&Rational::zero(), &r("0.6"), &cfg).map_err(|e| e.to_string())?;
    for n in 0..=cfg.n_max {
        ensure(agrees(&hermite.alpha[n], &Rational::zero(), 40), || format!("numeric gamma=0 alpha_{n}"))?;
        ensure(agrees(&hermite.beta[n], &q(n as i64, 2), 40), || format!("numeric gamma=0 beta_{n}"))?;
    }
    for k in 1..=3u32 {
        let rec =
            numeric_recurrence(&Rational::from(2 * k as i64), &Rational::zero(), &cfg).map_err(|e| e.to_string())?;
        for n in 0..=cfg.n_max {
            ensure(agrees(&rec.alpha[n], &Rational::zero(), 40), || format!("numeric K={k} alpha_{n}(0)"))?;
            ensure(agrees(&rec.beta[n], &expected(n, 2 * k as i64), 40), || {
                format!("numeric K={k} beta_{n}(0) = {}", rec.beta[n])
            })?;
        }
    }
    Ok("exact closed forms hold; numeric pipeline matches to 40 digits at 60-digit precision".into())
}

fn real_multiplicity() -> Check {
    let cfg60 = NumericConfig::with_precision(60);
    let cfg120 = NumericConfig::with_precision(120);
    let mut worst_diff = 0f64;
    let mut worst_piv = 0f64;
    let mut least_gain = f64::INFINITY;
    for g in ["0.5", "1", "1.5", "3"] {
        for t in ["0.5", "0.8", "2"] {
            let (g, t) = (r(g), r(t));
            let lo = numeric_verify_difference(&g, &t, 6, &cfg60).map_err(|e| e.to_string())?;
            let lo_max = lo.max_abs().to_f64();
            ensure(lo_max < 1e-20, || format!("gamma={g} t={t}: difference residual {lo_max:e}"))?;
            let hi = numeric_verify_difference(&g, &t, 6, &cfg120).map_err(|e| e.to_string())?;
            let hi_max = hi.max_abs().to_f64();
            let gain = (lo_max / hi_max).log10();
            ensure(hi_max < lo_max * 1e-10, || format!("gamma={g} t={t}: {lo_max:e} at 60 digits, {hi_max:e} at 120"))?;
            for chk in numeric_verify_piv_range(&g, &t, 6, &cfg60).map_err(|e| e.to_string())? {
                let chk = chk.map_err(|e| format!("gamma={g} t={t}: {e}"))?;
                let res = chk.residual.clone().abs().to_f64();
                ensure(res < 1e-8, || format!("gamma={g} t={t} n={}: PIV residual {res:e}", chk.n))?;
                worst_piv = worst_piv.max(res);
            }
            worst_diff = worst_diff.max(lo_max);
            least_gain = least_gain.min(gain);
        }
    }
    Ok(format!(
        "max difference residual {worst_diff:.1e}, max PIV residual {worst_piv:.1e}, \
         doubling precision gains >= {least_gain:.0} orders"
    ))
}

fn exact_numeric_bridge() -> Check {
    let cfg = NumericConfig::default();
    let grid = [r("-1"), r("0"), r("1/2"), r("1"), r("3")];
    let mut worst = 0f64;
    for k in 1..=2 {
        let chk = cross_check_even(k, &grid, &cfg).map_err(|e| e.to_string())?;
        ensure(chk.max_deviation < 1e-45, || format!("K={k}: deviation {:e}", chk.max_deviation))?;
        worst = worst.max(chk.max_deviation);
    }
    Ok(format!("max |numeric - exact| = {worst:.1e} over K <= 2, n <= 6, 5 sample points"))
}

fn monte_carlo() -> Check {
    let start = Instant::now();
    let t = r("0.7");
    let samples = 1_000_000;
    let mut zs = Vec::new();
    for n in 0..=2usize {
        let exact =
            hankel_det(&weight_moments(1, (2 * n).saturating_sub(2)), n).map_err(|e| e.to_string())?.eval(&t).to_f64();
        let est = mc_dn(n, 1, t.to_f64(), samples, 2024 + n as u64).map_err(|e| e.to_string())?;
        let z = est.z_score(exact);
        ensure(z.abs() < 3.0, || format!("D_{n}(0.7): {est:?} vs {exact}, z = {z:.2}"))?;
        ensure(est.std_error / exact < 0.01, || format!("D_{n}: relative error {}", est.std_error / exact))?;
        let again = mc_dn(n, 1, t.to_f64(), samples, 2024 + n as u64).map_err(|e| e.to_string())?;
        ensure(again == est, || "mc_dn not reproducible".into())?;
        zs.push(z);
    }
    let exact = exact_partition(1, 1).map_err(|e| e.to_string())?;
    ensure(exact == Rational::one(), || format!("exact partition {exact}"))?;
    let est = mc_partition(1, 1, samples, 7).map_err(|e| e.to_string())?;
    let z = est.z_score(1.0);
    ensure(z.abs() < 3.0, || format!("partition: {est:?}, z = {z:.2}"))?;
    ensure(mc_partition(1, 1, samples, 7).map_err(|e| e.to_string())? == est, || {
        "mc_partition not reproducible".into()
    })?;
    zs.push(z);
    within_budget(start, Duration::from_secs(120))?;
    let zs: Vec<String> = zs.iter().map(|z| format!("{z:+.2}")).collect();
    Ok(format!("z-scores [{}], bit-reproducible", zs.join(", ")))
}

fn algebra_properties() -> Check {
    let start = Instant::now();
    let cases = 1000;
    let runner = || TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner()
        .run(&(common::poly(5), common::poly(5), common::poly(5)), |(a, b, c)| common::ring_axioms_poly(&a, &b, &c))
        .map_err(|e| format!("ring axioms: {e}"))?;
    runner()
        .run(&(common::ratfn(), common::ratfn(), common::ratfn()), |(a, b, c)| common::field_axioms_ratfn(&a, &b, &c))
        .map_err(|e| format!("field axioms: {e}"))?;
    runner()
        .run(&(common::poly(5), common::poly(5), common::poly(3)), |(a, b, c)| common::gcd_divides(&a, &b, &c))
        .map_err(|e| format!("gcd: {e}"))?;
    runner()
        .run(&(common::poly(5), common::poly(5), common::ratfn(), common::ratfn()), |(f, g, r, s)| {
            common::product_rule(&f, &g, &r, &s)
        })
        .map_err(|e| format!("product rule: {e}"))?;
    runner()
        .run(&common::square_matrix(4), |m| common::bareiss_matches_cofactor(&m))
        .map_err(|e| format!("Bareiss: {e}"))?;
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("5 properties x {cases} random instances"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact identity suite", exact_identities),
        ("closed-form alpha from generalized Hermite polynomials", closed_form_alpha),
        ("Hankel determinant closed form", hankel_closed_form),
        ("closed forms at gamma = 0 and t = 0", special_point_closed_forms),
        ("non-integer and odd gamma", real_multiplicity),
        ("exact/numeric bridge", exact_numeric_bridge),
        ("Monte Carlo", monte_carlo),
        ("algebra property suite", algebra_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
