//! Generalized Hermite polynomials `H_{m,n}` and the closed forms for the
//! recurrence data at `gamma = 2K` built from them.
//!
//! The natural argument of `H_{m,n}` is `t / c` with `c^2 = -3/2`. Since
//! `H_{m,n}` only contains the powers `x^(mn - 2j)`, the scaled polynomial
//! `c^(mn) H_{m,n}(t / c)` has rational coefficients; we call it `Hreal` and
//! never leave `Q[t]`.

use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::algebra::{bareiss_det, Poly, RatFn, Rational};
use crate::error::{Error, Result};
use crate::moments::{hankel_det, weight_moments};
use crate::ortho::RecurrenceTable;

/// `P_s(x) = sum_{i + 2j = s} x^i / (6^j i! j!)`, zero for negative `s`.
pub fn p_s(s: i64) -> Poly {
    if s < 0 {
        return Poly::zero();
    }
    let s = s as usize;
    let mut coeffs = vec![Rational::zero(); s + 1];
    for j in 0..=s / 2 {
        let i = s - 2 * j;
        let denom = Rational::from(6).pow(j as u32) * Rational::factorial(i as u32) * Rational::factorial(j as u32);
        coeffs[i] = denom.recip().expect("factorials are positive");
    }
    Poly::new(coeffs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenHermite {
    pub m: usize,
    pub n: usize,
    /// `H_{m,n}(x)`; coefficients are indexed by the power of `x`.
    #[serde(rename = "H")]
    pub h: Poly,
    #[serde(rename = "Hreal")]
    pub hreal: Poly,
}

/// `H_{m,n} = det(P_{n-i+j})_{i,j=1..m}` together with its real form.
pub fn gen_hermite(m: usize, n: usize) -> Result<GenHermite> {
    let matrix: Vec<Vec<Poly>> =
        (1..=m as i64).map(|i| (1..=m as i64).map(|j| p_s(n as i64 - i + j)).collect()).collect();
    let h = bareiss_det(&matrix)?;
    let deg = m * n;

    if h.degree() != Some(deg) {
        return Err(Error::Invariant(format!("H({m},{n}) has degree {:?}, expected {deg}", h.degree())));
    }
    let expected_lead = barnes_g(m + 1) * barnes_g(n + 1) / barnes_g(m + n + 1);
    if h.lead() != Some(&expected_lead) {
        return Err(Error::Invariant(format!(
            "H({m},{n}) has leading coefficient {}, expected {expected_lead}",
            h.lead().expect("nonzero")
        )));
    }

    let ratio = Rational::new(-3, 2);
    let mut real = vec![Rational::zero(); deg + 1];
    for (power, a) in h.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if !(deg - power).is_multiple_of(2) {
            return Err(Error::ParityViolation { m, n, power });
        }
        real[power] = a * &ratio.pow(((deg - power) / 2) as u32);
    }
    Ok(GenHermite { m, n, h, hreal: Poly::new(real) })
}

fn barnes_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    // G(1), G(2)
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one(), Rational::one()]))
}

/// Barnes `G(k)` for integer `k >= 1`, from `G(k+1) = (k-1)! G(k)`.
///
/// # Panics
/// If `k == 0`.
pub fn barnes_g(k: usize) -> Rational {
    assert!(k >= 1, "Barnes G is only tabulated for k >= 1");
    let mut table = barnes_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() < k {
        // table[i] = G(i+1); next is G(len+1) = (len-1)! G(len)
        let len = table.len();
        let next = Rational::factorial((len - 1) as u32) * &table[len - 1];
        table.push(next);
    }
    table[k - 1].clone()
}

/// `-(1/2) d/dt log(Hreal_{2K,n+1} / Hreal_{2K,n})`.
pub fn theorem2_alpha(k: u32, n: usize) -> Result<RatFn> {
    let m = 2 * k as usize;
    let upper = gen_hermite(m, n + 1)?.hreal;
    let lower = gen_hermite(m, n)?.hreal;
    let num = &(&upper.derivative() * &lower) - &(&upper * &lower.derivative());
    RatFn::new(num.scale(&Rational::new(-1, 2)), &upper * &lower)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HankelFormulaCheck {
    #[serde(rename = "K")]
    pub k: u32,
    pub n: usize,
    /// `G(2K+n+1) / (2^(n(n-1)/2) G(2K+1))`.
    pub constant: Rational,
    pub pass: bool,
}

/// Checks `D^_n = constant * Hreal_{2K,n}` as polynomials.
pub fn hankel_formula_check(k: u32, n: usize, tbl: &RecurrenceTable) -> Result<HankelFormulaCheck> {
    if tbl.k != k {
        return Err(Error::InvalidArgument(format!("table is for K={}, asked for K={k}", tbl.k)));
    }
    if n > tbl.n_max {
        return Err(Error::IndexOutOfRange { index: n, max: tbl.n_max });
    }
    let constant = hankel_constant(k, n);
    let hreal = gen_hermite(2 * k as usize, n)?.hreal;
    let pass = hreal.scale(&constant) == tbl.dhat[n];
    Ok(HankelFormulaCheck { k, n, constant, pass })
}

pub fn hankel_constant(k: u32, n: usize) -> Rational {
    let two_k = 2 * k as usize;
    let pow2 = Rational::from(2).pow((n * n.saturating_sub(1) / 2) as u32);
    barnes_g(two_k + n + 1) / (pow2 * barnes_g(two_k + 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingCoeffCheck {
    #[serde(rename = "K")]
    pub k: u32,
    pub n: usize,
    pub dhat_lead: Rational,
    pub dhat_expected: Rational,
    pub hermite_lead: Rational,
    pub hermite_expected: Rational,
    pub pass: bool,
}

/// `lead(D^_n) = prod_{i<n} i!/2^i` and
/// `lead(H_{2K,n}) = G(2K+1) G(n+1) / G(2K+n+1)`.
pub fn leading_coeff_checks(k: u32, n: usize) -> Result<LeadingCoeffCheck> {
    let two_k = 2 * k as usize;
    let moments = weight_moments(k, (2 * n).saturating_sub(2));
    let dhat = hankel_det(&moments, n)?;
    let dhat_lead = dhat.lead().cloned().unwrap_or_else(Rational::zero);
    let dhat_expected: Rational =
        (0..n).map(|i| Rational::factorial(i as u32) / Rational::from(2).pow(i as u32)).product();

    // the constructor already rejects a mismatch; recompute for the report
    let hermite = gen_hermite(two_k, n);
    let hermite_expected = barnes_g(two_k + 1) * barnes_g(n + 1) / barnes_g(two_k + n + 1);
    let hermite_lead = match &hermite {
        Ok(g) => g.h.lead().cloned().unwrap_or_else(Rational::zero),
        Err(Error::Invariant(_)) => {
            let matrix: Vec<Vec<Poly>> =
                (1..=two_k as i64).map(|i| (1..=two_k as i64).map(|j| p_s(n as i64 - i + j)).collect()).collect();
            bareiss_det(&matrix)?.lead().cloned().unwrap_or_else(Rational::zero)
        }
        Err(e) => return Err(e.clone()),
    };

    let pass = dhat_lead == dhat_expected && hermite_lead == hermite_expected;
    Ok(LeadingCoeffCheck { k, n, dhat_lead, dhat_expected, hermite_lead, hermite_expected, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::recurrence_table;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn p_s_values() {
        assert_eq!(p_s(-1), Poly::zero());
        assert_eq!(p_s(0), Poly::one());
        assert_eq!(p_s(2), Poly::new(vec![q(1, 6), q(0, 1), q(1, 2)]));
        assert_eq!(p_s(3), Poly::new(vec![q(0, 1), q(1, 6), q(0, 1), q(1, 6)]));
    }

    #[test]
    fn small_hermite() {
        assert_eq!(gen_hermite(1, 1).unwrap().h, Poly::var());
        let h21 = gen_hermite(2, 1).unwrap();
        assert_eq!(h21.h, Poly::new(vec![q(-1, 6), q(0, 1), q(1, 2)]));
        assert_eq!(h21.hreal, Poly::new(vec![q(1, 4), q(0, 1), q(1, 2)]));
        assert_eq!(gen_hermite(3, 0).unwrap().h, Poly::one());
        assert_eq!(gen_hermite(0, 4).unwrap().hreal, Poly::one());
    }

    #[test]
    fn barnes_values() {
        assert_eq!(barnes_g(1), q(1, 1));
        assert_eq!(barnes_g(2), q(1, 1));
        assert_eq!(barnes_g(3), q(1, 1));
        assert_eq!(barnes_g(4), q(2, 1));
        assert_eq!(barnes_g(6), q(288, 1));
    }

    #[test]
    fn alpha_zero_for_k1() {
        let expected = RatFn::new(Poly::from_ints(&[0, -2]), Poly::from_ints(&[1, 0, 2])).unwrap();
        assert_eq!(theorem2_alpha(1, 0).unwrap(), expected);
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let tbl = recurrence_table(2, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(theorem2_alpha(2, n).unwrap(), tbl.alpha[n], "n={n}");
        }
    }

    #[test]
    fn hankel_constant_examples() {
        let tbl = recurrence_table(1, 2).unwrap();
        let c0 = hankel_formula_check(1, 0, &tbl).unwrap();
        assert_eq!(c0.constant, q(1, 1));
        assert!(c0.pass);
        let c1 = hankel_formula_check(1, 1, &tbl).unwrap();
        assert_eq!(c1.constant, q(2, 1));
        assert!(c1.pass);
        assert!(hankel_formula_check(1, 2, &tbl).unwrap().pass);
    }

    #[test]
    fn leading_coefficients() {
        let c = leading_coeff_checks(1, 1).unwrap();
        assert_eq!(c.dhat_lead, q(1, 1));
        assert_eq!(c.hermite_lead, q(1, 2));
        assert!(c.pass);
        let c0 = leading_coeff_checks(2, 0).unwrap();
        assert!(c0.pass);
        assert_eq!(c0.dhat_lead, q(1, 1));
    }
}
