use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::recurrence::{numeric_recurrence, NumericRecurrence};
use super::{format_real, NumericConfig};
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::ortho::recurrence_table;

/// Below this `|alpha_n(t)|` the PIV residual is not evaluated.
const ALPHA_FLOOR: f64 = 1e-12;

fn short(x: &Float) -> String {
    format_real(x, 6)
}

fn serialize_short<S: serde::Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&short(x))
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferenceResidual {
    pub n: usize,
    #[serde(serialize_with = "serialize_short")]
    pub s1: Float,
    #[serde(serialize_with = "serialize_short")]
    pub s2: Float,
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferenceCheck {
    pub gamma: Rational,
    pub t: Rational,
    pub precision_digits: u32,
    /// Pass threshold `10^-(digits/2)`.
    pub tolerance_exponent: i32,
    pub residuals: Vec<DifferenceResidual>,
    pub pass: bool,
}

impl DifferenceCheck {
    pub fn max_abs(&self) -> Float {
        let bits = self.residuals.first().map_or(64, |r| r.s1.prec());
        let mut m = Float::new(bits);
        for r in &self.residuals {
            for v in [&r.s1, &r.s2] {
                let a = Float::with_val(bits, v.abs_ref());
                if a > m {
                    m = a;
                }
            }
        }
        m
    }
}

/// Residuals of
/// `beta_{n+1} + beta_n = n + 1/2 + gamma/2 + alpha_n (t - alpha_n)` and
/// `(t - alpha_n)(beta_{n+1} - beta_n - 1/2) = beta_{n+1} alpha_{n+1} - beta_n alpha_{n-1}`
/// for `n = 0..=n_max`.
pub fn numeric_verify_difference(
    gamma: &Rational,
    t: &Rational,
    n_max: usize,
    cfg: &NumericConfig,
) -> Result<DifferenceCheck> {
    let inner = NumericConfig { n_max: n_max + 1, ..cfg.clone() };
    let rec = numeric_recurrence(gamma, t, &inner)?;
    let bits = rec.alpha[0].prec();
    let tf = Float::with_val(bits, t.as_rug());
    let gf = Float::with_val(bits, gamma.as_rug());
    let (a, b) = (&rec.alpha, &rec.beta);

    let residuals = (0..=n_max)
        .map(|n| {
            let t_minus_a = Float::with_val(bits, &tf - &a[n]);
            let rhs1 = Float::with_val(bits, n as u32)
                + 0.5f64
                + Float::with_val(bits, &gf / 2u32)
                + Float::with_val(bits, &a[n] * &t_minus_a);
            let s1 = Float::with_val(bits, &b[n + 1] + &b[n]) - rhs1;

            let jump = Float::with_val(bits, &b[n + 1] - &b[n]) - 0.5f64;
            let lhs2 = t_minus_a * jump;
            let mut rhs2 = Float::with_val(bits, &b[n + 1] * &a[n + 1]);
            if n > 0 {
                rhs2 -= Float::with_val(bits, &b[n] * &a[n - 1]);
            }
            DifferenceResidual { n, s1, s2: lhs2 - rhs2 }
        })
        .collect::<Vec<_>>();

    let tolerance_exponent = -((cfg.precision_digits / 2) as i32);
    let tol = Float::with_val(bits, Float::i_pow_u(10, cfg.precision_digits / 2)).recip();
    let pass = residuals.iter().all(|r| r.s1.clone().abs() < tol && r.s2.clone().abs() < tol);
    Ok(DifferenceCheck {
        gamma: gamma.clone(),
        t: t.clone(),
        precision_digits: cfg.precision_digits,
        tolerance_exponent,
        residuals,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PivCheck {
    pub gamma: Rational,
    pub t: Rational,
    pub n: usize,
    pub fd_step: f64,
    #[serde(serialize_with = "serialize_short")]
    pub alpha: Float,
    #[serde(serialize_with = "serialize_short")]
    pub dalpha: Float,
    #[serde(serialize_with = "serialize_short")]
    pub ddalpha: Float,
    #[serde(serialize_with = "serialize_short")]
    pub residual: Float,
    pub tolerance: f64,
    pub pass: bool,
}

/// Residual of
/// `a'' = a'^2/(2a) + 6a^3 - 8t a^2 + 2(t^2 - gamma - 2n - 1) a - gamma^2/(2a)`
/// for `a = alpha_n`, with the derivatives from Richardson-extrapolated
/// central differences.
pub fn numeric_verify_piv(gamma: &Rational, t: &Rational, n: usize, cfg: &NumericConfig) -> Result<PivCheck> {
    let mut all = numeric_verify_piv_range(gamma, t, n, cfg)?;
    all.pop().expect("n + 1 entries")
}

/// [`numeric_verify_piv`] for every `n <= n_max`, sharing the five
/// recurrence builds. Each entry fails on its own if `alpha_n(t)` is too
/// close to zero.
pub fn numeric_verify_piv_range(
    gamma: &Rational,
    t: &Rational,
    n_max: usize,
    cfg: &NumericConfig,
) -> Result<Vec<Result<PivCheck>>> {
    if gamma.is_zero() {
        return Err(Error::PivUndefined);
    }
    cfg.validate()?;
    let h =
        Rational::from(rug::Rational::from_f64(cfg.fd_step).ok_or_else(|| Error::InvalidArgument("fd_step".into()))?);
    let inner = NumericConfig { n_max, ..cfg.clone() };
    let offsets = [-2i64, -1, 0, 1, 2];
    let recs: Vec<NumericRecurrence> = offsets
        .par_iter()
        .map(|&j| numeric_recurrence(gamma, &(t + &(&h * &Rational::from(j))), &inner))
        .collect::<Result<_>>()?;
    Ok((0..=n_max)
        .map(|n| {
            let f: Vec<&Float> = recs.iter().map(|r| &r.alpha[n]).collect();
            piv_from_samples(gamma, t, n, &h, &f, cfg.fd_step)
        })
        .collect())
}

/// `f` holds `alpha_n` at `t - 2h, t - h, t, t + h, t + 2h`.
fn piv_from_samples(
    gamma: &Rational,
    t: &Rational,
    n: usize,
    h: &Rational,
    f: &[&Float],
    fd_step: f64,
) -> Result<PivCheck> {
    let bits = f[2].prec();
    let alpha = f[2].clone();
    if alpha.clone().abs() < ALPHA_FLOOR {
        return Err(Error::ProbeTooCloseToZero { n, t: t.to_string() });
    }

    let hf = Float::with_val(bits, h.as_rug());
    let h2 = Float::with_val(bits, &hf * 2u32);
    // first derivative: D(h) = (f(t+h) - f(t-h)) / 2h, then (4 D(h) - D(2h)) / 3
    let d1 = |step: &Float, hi: &Float, lo: &Float| Float::with_val(bits, hi - lo) / Float::with_val(bits, step * 2u32);
    let d_h = d1(&hf, f[3], f[1]);
    let d_2h = d1(&h2, f[4], f[0]);
    let dalpha = (d_h * 4u32 - d_2h) / 3u32;
    // second derivative: S(h) = (f(t+h) - 2f(t) + f(t-h)) / h^2, same extrapolation
    let d2 = |step: &Float, hi: &Float, lo: &Float| {
        (Float::with_val(bits, hi + lo) - Float::with_val(bits, &alpha * 2u32)) / Float::with_val(bits, step * step)
    };
    let s_h = d2(&hf, f[3], f[1]);
    let s_2h = d2(&h2, f[4], f[0]);
    let ddalpha = (s_h * 4u32 - s_2h) / 3u32;

    let tf = Float::with_val(bits, t.as_rug());
    let gf = Float::with_val(bits, gamma.as_rug());
    let two_a = Float::with_val(bits, &alpha * 2u32);
    let a2 = Float::with_val(bits, &alpha * &alpha);
    let a3 = Float::with_val(bits, &a2 * &alpha);
    let coef = Float::with_val(bits, &tf * &tf) - &gf - (2 * n as u32 + 1);
    let rhs = Float::with_val(bits, &dalpha * &dalpha) / &two_a + a3 * 6u32 - Float::with_val(bits, &tf * &a2) * 8u32
        + coef * &alpha * 2u32
        - Float::with_val(bits, &gf * &gf) / &two_a;
    let residual = Float::with_val(bits, &ddalpha - &rhs);

    let tolerance = 1e-8f64.max(1e4 * fd_step.powi(4));
    let pass = residual.clone().abs() < tolerance;
    Ok(PivCheck { gamma: gamma.clone(), t: t.clone(), n, fd_step, alpha, dalpha, ddalpha, residual, tolerance, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckEntry {
    pub t: Rational,
    pub n: usize,
    pub alpha_deviation: f64,
    pub beta_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    #[serde(rename = "K")]
    pub k: u32,
    pub precision_digits: u32,
    pub entries: Vec<CrossCheckEntry>,
    pub max_deviation: f64,
}

/// Largest `|numeric - exact|` over `alpha_n`, `beta_n` for `n <= cfg.n_max`
/// and the given sample points.
pub fn cross_check_even(k: u32, t_samples: &[Rational], cfg: &NumericConfig) -> Result<CrossCheck> {
    if k == 0 {
        return Err(Error::InvalidArgument("cross check needs K >= 1".into()));
    }
    let tbl = recurrence_table(k, cfg.n_max)?;
    let gamma = Rational::from(2 * k as i64);
    let per_t: Vec<Vec<CrossCheckEntry>> = t_samples
        .par_iter()
        .map(|t0| -> Result<Vec<CrossCheckEntry>> {
            let rec = numeric_recurrence(&gamma, t0, cfg)?;
            let bits = rec.alpha[0].prec();
            let dev = |approx: &Float, exact: Rational| Float::with_val(bits, approx - exact.as_rug()).abs().to_f64();
            (0..=cfg.n_max)
                .map(|n| {
                    Ok(CrossCheckEntry {
                        t: t0.clone(),
                        n,
                        alpha_deviation: dev(&rec.alpha[n], tbl.alpha[n].eval(t0)?),
                        beta_deviation: dev(&rec.beta[n], tbl.beta[n].eval(t0)?),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let entries: Vec<CrossCheckEntry> = per_t.into_iter().flatten().collect();
    let max_deviation = entries.iter().flat_map(|e| [e.alpha_deviation, e.beta_deviation]).fold(0.0, f64::max);
    Ok(CrossCheck { k, precision_digits: cfg.precision_digits, entries, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn difference_equations_fractional() {
        let cfg = NumericConfig::default();
        let chk = numeric_verify_difference(&r("1.5"), &r("0.5"), 6, &cfg).unwrap();
        assert!(chk.pass);
        assert!(chk.max_abs() < 1e-20);
    }

    #[test]
    fn piv_fractional() {
        let cfg = NumericConfig::default();
        let chk = numeric_verify_piv(&r("1.5"), &r("0.8"), 2, &cfg).unwrap();
        assert!(chk.pass, "{}", chk.residual);
        assert!(chk.residual.clone().abs() < 1e-8);
    }

    #[test]
    fn piv_at_symmetric_point_is_rejected() {
        let cfg = NumericConfig::default();
        let err = numeric_verify_piv(&r("1.5"), &r("0"), 1, &cfg).unwrap_err();
        assert!(matches!(err, Error::ProbeTooCloseToZero { n: 1, .. }));
        assert_eq!(numeric_verify_piv(&r("0"), &r("1"), 1, &cfg).unwrap_err(), Error::PivUndefined);
    }

    #[test]
    fn even_gamma_bridge() {
        let cfg = NumericConfig::default().n_max(3);
        let chk = cross_check_even(1, &[r("1"), r("0")], &cfg).unwrap();
        assert!(chk.max_deviation < 1e-50, "{}", chk.max_deviation);
    }
}
