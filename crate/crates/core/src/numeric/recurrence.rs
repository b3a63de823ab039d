use rug::Float;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::quadrature::{weighted_nodes, Layout};
use super::{format_real, NumericConfig};
use crate::algebra::Rational;
use crate::error::{Error, Result};

/// Recurrence coefficients of the weight `exp(-x^2) |x - t|^gamma` at one
/// real `t`, for `n = 0..=n_max`.
#[derive(Debug, Clone)]
pub struct NumericRecurrence {
    pub gamma: Rational,
    pub t: Rational,
    pub digits: u32,
    pub alpha: Vec<Float>,
    /// `beta[0] = 0`.
    pub beta: Vec<Float>,
    /// Squared norms `h_n`, including the `sqrt(pi)`.
    pub h: Vec<Float>,
    pub layout: Layout,
    /// Smallest `h_n / h_0` seen; a rough cancellation indicator.
    pub min_norm_ratio: f64,
}

impl NumericRecurrence {
    pub fn n_max(&self) -> usize {
        self.alpha.len() - 1
    }
}

impl Serialize for NumericRecurrence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fmt = |v: &[Float]| v.iter().map(|x| format_real(x, self.digits)).collect::<Vec<_>>();
        let mut st = s.serialize_struct("NumericRecurrence", 7)?;
        st.serialize_field("gamma", &self.gamma)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("precision_digits", &self.digits)?;
        st.serialize_field("alpha", &fmt(&self.alpha))?;
        st.serialize_field("beta", &fmt(&self.beta))?;
        st.serialize_field("h", &fmt(&self.h))?;
        st.serialize_field("layout", &self.layout)?;
        st.end()
    }
}

/// Discrete Stieltjes procedure on the high-precision node set.
pub fn numeric_recurrence(gamma: &Rational, t: &Rational, cfg: &NumericConfig) -> Result<NumericRecurrence> {
    let n_max = cfg.n_max;
    let nodes = weighted_nodes(gamma, t, cfg, 2 * n_max + 1)?;
    let bits = nodes.bits();
    let len = nodes.x.len();

    let mut prev = vec![Float::new(bits); len];
    let mut cur = vec![Float::with_val(bits, 1u32); len];
    let mut alpha = Vec::with_capacity(n_max + 1);
    let mut beta = Vec::with_capacity(n_max + 1);
    let mut h: Vec<Float> = Vec::with_capacity(n_max + 1);
    let mut min_norm_ratio = 1.0f64;

    for n in 0..=n_max {
        let mut norm = Float::new(bits);
        let mut first = Float::new(bits);
        for ((c, w), x) in cur.iter().zip(&nodes.w).zip(&nodes.x) {
            let wp2 = Float::with_val(bits, c * c) * w;
            first += Float::with_val(bits, &wp2 * x);
            norm += wp2;
        }
        if !(norm.is_finite() && norm > 0) {
            return Err(Error::PrecisionExhausted { n });
        }
        let a = Float::with_val(bits, &first / &norm);
        let b = if n == 0 {
            Float::new(bits)
        } else {
            let b = Float::with_val(bits, &norm / &h[n - 1]);
            if !(b.is_finite() && b > 0) {
                return Err(Error::PrecisionExhausted { n });
            }
            b
        };
        if n > 0 {
            let ratio = Float::with_val(53, &norm / &h[0]).to_f64();
            min_norm_ratio = min_norm_ratio.min(ratio);
        }

        if n < n_max {
            let next: Vec<Float> = (0..len)
                .map(|i| {
                    let shifted = Float::with_val(bits, &nodes.x[i] - &a) * &cur[i];
                    shifted - Float::with_val(bits, &b * &prev[i])
                })
                .collect();
            prev = std::mem::replace(&mut cur, next);
        }
        alpha.push(a);
        beta.push(b);
        h.push(norm);
    }

    Ok(NumericRecurrence {
        gamma: gamma.clone(),
        t: t.clone(),
        digits: cfg.precision_digits,
        alpha,
        beta,
        h,
        layout: nodes.layout,
        min_norm_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &Float, y: f64, tol: f64) -> bool {
        (Float::with_val(x.prec(), x - y)).abs() < tol
    }

    #[test]
    fn hermite_weight() {
        let cfg = NumericConfig::default().n_max(5);
        let rec = numeric_recurrence(&Rational::zero(), &Rational::new(3, 10), &cfg).unwrap();
        for n in 0..=5 {
            assert!(close(&rec.alpha[n], 0.0, 1e-55));
            assert!(close(&rec.beta[n], n as f64 / 2.0, 1e-55), "n={n}");
        }
    }

    #[test]
    fn symmetric_point_fractional_gamma() {
        let cfg = NumericConfig::default().n_max(4);
        let rec = numeric_recurrence(&Rational::new(3, 2), &Rational::zero(), &cfg).unwrap();
        for n in 0..=4 {
            assert!(close(&rec.alpha[n], 0.0, 1e-55));
            // n/2 + gamma (1 - (-1)^n) / 4
            let expected = n as f64 / 2.0 + if n % 2 == 1 { 0.75 } else { 0.0 };
            assert!(close(&rec.beta[n], expected, 1e-50), "n={n} {}", rec.beta[n]);
        }
    }

    #[test]
    fn serializes_reals_as_strings() {
        let cfg = NumericConfig::with_precision(30).n_max(1);
        let rec = numeric_recurrence(&Rational::zero(), &Rational::zero(), &cfg).unwrap();
        let v = serde_json::to_value(&rec).unwrap();
        assert!(v["alpha"][0].is_string());
        assert!(v["beta"][1].as_str().unwrap().starts_with("5.0000"));
    }
}
