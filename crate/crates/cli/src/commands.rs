use gue_piv::ensemble::{exact_partition, mc_dn, mc_partition};
use gue_piv::hermite::{gen_hermite, hankel_formula_check, leading_coeff_checks, theorem2_alpha};
use gue_piv::numeric::{
    cross_check_even, numeric_recurrence, numeric_verify_difference, numeric_verify_piv_range, NumericConfig,
};
use gue_piv::verify::{default_probes, Status, VerificationReport, Verifier};
use gue_piv::{hankel_det, recurrence_table, weight_moments, Error, Rational};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    GenHermiteArgs, HankelArgs, McArgs, MomentsArgs, NumericArgs, RecurrenceArgs, SuiteArgs, VerifyArgs,
};
use crate::output::{Outcome, Summary};

/// A usage or configuration problem; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<Outcome, UsageError>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn plain(result: Value, summary: Summary) -> Outcome {
    Outcome { result, summary, reports: None }
}

pub fn moments(a: &MomentsArgs) -> Run {
    Ok(plain(to_value(&weight_moments(a.k, a.max_index)), Summary::default()))
}

pub fn recurrence(a: &RecurrenceArgs) -> Run {
    let tbl = recurrence_table(a.k, a.n_max)?;
    Ok(plain(to_value(&tbl), Summary::default()))
}

/// All exact identity reports for `n <= n_max`, witnesses attached.
fn identity_reports(k: u32, n_max: usize) -> Result<Vec<VerificationReport>, Error> {
    let tbl = recurrence_table(k, n_max + 1)?;
    let v = Verifier::new(&tbl);
    let probes = default_probes();
    let per_n: Vec<Vec<VerificationReport>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut reps = v.all_at(n)?;
            for r in reps.iter_mut().filter(|r| r.status != Status::Skipped) {
                r.witnesses = v.witnesses(r.identity, r.n, &probes);
            }
            Ok(reps)
        })
        .collect::<Result<_, Error>>()?;
    let mut out: Vec<VerificationReport> = per_n.into_iter().flatten().collect();
    out.sort_by_key(|r| (r.identity, r.k, r.n));
    Ok(out)
}

pub fn verify(a: &VerifyArgs) -> Run {
    if a.prec.is_some() {
        return Err(UsageError("--prec belongs to the numeric pipeline; verify is exact".into()));
    }
    let k = match (&a.k, &a.gamma) {
        (Some(k), _) => *k,
        (None, Some(g)) => even_half(g)
            .ok_or_else(|| UsageError(format!("gamma = {g} is not an even integer >= 0; use `numeric` for it")))?,
        (None, None) => return Err(UsageError("one of --K or --gamma is required".into())),
    };
    let reports = identity_reports(k, a.n_max)?;
    let summary = Summary::of_reports(&reports);
    Ok(Outcome { result: to_value(&reports), summary, reports: Some(reports) })
}

/// `g / 2` when `g` is an even non-negative integer.
fn even_half(g: &Rational) -> Option<u32> {
    if !g.is_integer() || g.signum() < 0 {
        return None;
    }
    let v = g.to_i64()?;
    (v % 2 == 0).then(|| u32::try_from(v / 2).ok()).flatten()
}

pub fn genhermite(a: &GenHermiteArgs) -> Run {
    let gh = gen_hermite(a.m, a.n)?;
    let mut summary = Summary::default();
    // parity and leading coefficient are enforced by the constructor
    summary.add_bool(true);
    Ok(plain(to_value(&gh), summary))
}

pub fn hankel(a: &HankelArgs) -> Run {
    let tbl = recurrence_table(a.k, a.n)?;
    let check = hankel_formula_check(a.k, a.n, &tbl)?;
    let lead = leading_coeff_checks(a.k, a.n)?;
    let mut summary = Summary::default();
    summary.add_bool(check.pass);
    summary.add_bool(lead.pass);
    Ok(plain(
        json!({
            "K": a.k,
            "n": a.n,
            "constant": check.constant,
            "pass": check.pass,
            "leading_coefficients": lead,
        }),
        summary,
    ))
}

fn numeric_config(prec: u32, n_max: usize, fd_step: f64) -> NumericConfig {
    NumericConfig { precision_digits: prec, fd_step, n_max, ..NumericConfig::default() }
}

/// Largest deviation tolerated by the exact/numeric bridge.
fn bridge_tolerance(prec: u32) -> f64 {
    10f64.powi(-(prec as i32 - 15))
}

pub fn numeric(a: &NumericArgs) -> Run {
    if a.gamma.signum() < 0 {
        return Err(Error::NegativeGamma(a.gamma.to_string()).into());
    }
    let cfg = numeric_config(a.prec, a.n, a.fd_step);
    cfg.validate()?;
    let rec = numeric_recurrence(&a.gamma, &a.t, &cfg)?;
    let mut result = to_value(&rec);
    let mut summary = Summary::default();
    let mut residuals = serde_json::Map::new();

    if a.diff {
        let chk = numeric_verify_difference(&a.gamma, &a.t, a.n, &cfg)?;
        summary.add_bool(chk.pass);
        residuals.insert("difference".into(), to_value(&chk));
    }
    if a.piv {
        let entries = numeric_verify_piv_range(&a.gamma, &a.t, a.n, &cfg)?;
        if entries.iter().all(|e| e.is_err()) {
            return Err(entries.into_iter().next().expect("n + 1 entries").unwrap_err().into());
        }
        let mut piv = Vec::new();
        for (n, e) in entries.into_iter().enumerate() {
            match e {
                Ok(chk) => {
                    summary.add_bool(chk.pass);
                    piv.push(to_value(&chk));
                }
                Err(err) => {
                    summary.add(Status::Skipped);
                    piv.push(json!({ "n": n, "status": "skipped", "note": err.to_string() }));
                }
            }
        }
        residuals.insert("piv".into(), Value::Array(piv));
    }
    result["residuals"] = Value::Object(residuals);

    if let Some(k) = even_half(&a.gamma).filter(|&k| k >= 1) {
        let bridge = cross_check_even(k, std::slice::from_ref(&a.t), &cfg)?;
        let tol = bridge_tolerance(a.prec);
        let pass = bridge.max_deviation < tol;
        summary.add_bool(pass);
        let mut v = to_value(&bridge);
        v["tolerance"] = json!(tol);
        v["pass"] = json!(pass);
        result["bridge"] = v;
    }
    Ok(plain(result, summary))
}

pub fn mc(a: &McArgs) -> Run {
    let (est, exact) = if a.partition {
        (mc_partition(a.n, a.k, a.samples, a.seed)?, exact_partition(a.n, a.k)?)
    } else {
        let t = a.t.as_ref().ok_or_else(|| UsageError("--t is required without --partition".into()))?;
        let dhat = hankel_det(&weight_moments(a.k, (2 * a.n).saturating_sub(2)), a.n)?;
        (mc_dn(a.n, a.k, t.to_f64(), a.samples, a.seed)?, dhat.eval(t))
    };
    let z = est.z_score(exact.to_f64());
    let within = z.abs() < 3.0;
    let mut summary = Summary::default();
    summary.add_bool(within);
    Ok(plain(
        json!({
            "n": a.n,
            "K": a.k,
            "t": a.t,
            "partition": a.partition,
            "estimate": est.mean,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": est.seed,
            "exact": exact,
            "exact_value": exact.to_f64(),
            "z_score": z,
            "within_3_sigma": within,
        }),
        summary,
    ))
}

pub fn suite(a: &SuiteArgs) -> Run {
    let ks: Vec<u32> = (1..=a.k_max).collect();
    let per_k: Vec<Vec<VerificationReport>> =
        ks.par_iter().map(|&k| identity_reports(k, a.n_max)).collect::<Result<_, Error>>()?;
    let mut reports: Vec<VerificationReport> = per_k.into_iter().flatten().collect();
    reports.sort_by_key(|r| (r.identity, r.k, r.n));
    let mut summary = Summary::of_reports(&reports);

    let pairs: Vec<(u32, usize)> = ks.iter().flat_map(|&k| (0..=a.n_max).map(move |n| (k, n))).collect();
    let closed: Vec<Value> = pairs
        .par_iter()
        .map(|&(k, n)| -> Result<Value, Error> {
            let tbl = recurrence_table(k, n)?;
            let closed_alpha = theorem2_alpha(k, n)? == tbl.alpha[n];
            let hankel = hankel_formula_check(k, n, &tbl)?;
            let lead = leading_coeff_checks(k, n)?;
            Ok(json!({
                "K": k,
                "n": n,
                "closed_form_alpha": closed_alpha,
                "hankel_formula": hankel.pass,
                "hankel_constant": hankel.constant,
                "leading_coefficients": lead.pass,
            }))
        })
        .collect::<Result<_, Error>>()?;
    for c in &closed {
        for key in ["closed_form_alpha", "hankel_formula", "leading_coefficients"] {
            summary.add_bool(c[key].as_bool().expect("bool"));
        }
    }

    let mut result = json!({ "identities": reports, "closed_forms": closed });
    if !a.exact_only {
        let (numeric, s) = numeric_spot_checks(a.prec)?;
        summary.merge(s);
        result["numeric"] = numeric;
    }
    Ok(Outcome { result, summary, reports: Some(reports) })
}

fn numeric_spot_checks(prec: u32) -> Result<(Value, Summary), Error> {
    let cfg = numeric_config(prec, 4, 1e-6);
    let t = Rational::new(4, 5);
    let gammas = [Rational::new(1, 2), Rational::new(3, 2), Rational::from(3)];
    let checks: Vec<(Value, Summary)> = gammas
        .par_iter()
        .map(|g| -> Result<(Value, Summary), Error> {
            let mut s = Summary::default();
            let diff = numeric_verify_difference(g, &t, cfg.n_max, &cfg)?;
            s.add_bool(diff.pass);
            let mut piv = Vec::new();
            for e in numeric_verify_piv_range(g, &t, cfg.n_max, &cfg)? {
                let chk = e?;
                s.add_bool(chk.pass);
                piv.push(chk);
            }
            Ok((json!({ "gamma": g, "t": t, "difference": diff, "piv": piv }), s))
        })
        .collect::<Result<_, Error>>()?;

    let mut summary = Summary::default();
    let mut out = Vec::new();
    for (v, s) in checks {
        summary.merge(s);
        out.push(v);
    }
    let samples = [Rational::new(-1, 1), Rational::new(1, 2), Rational::one()];
    let mut bridges = Vec::new();
    for k in 1..=2 {
        let b = cross_check_even(k, &samples, &cfg)?;
        let pass = b.max_deviation < bridge_tolerance(prec);
        summary.add_bool(pass);
        bridges.push(json!({ "K": k, "max_deviation": b.max_deviation, "pass": pass }));
    }
    Ok((json!({ "spot_checks": out, "bridge": bridges }), summary))
}
