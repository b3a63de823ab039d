//! Monic orthogonal polynomials for `exp(-x^2) (x - t)^(2K)` over `Q(t)`,
//! their recurrence coefficients, and the exact ladder-operator data.
//!
//! The polynomials are built with the Stieltjes procedure directly from the
//! moment functional. Each `p_n` is stored as `Q_n(x, t) / d_n(t)` with a
//! polynomial numerator, so inner products are plain polynomial arithmetic
//! and only one gcd reduction happens per degree.

use serde::Serialize;

use crate::algebra::{Poly, RatFn, Rational};
use crate::error::{Error, Result};
use crate::moments::{hankel_det, weight_moments, BiPoly, MomentSet};

/// `p_n = num / den` with `num` in `Q[t][x]` and `den` in `Q[t]` monic.
#[derive(Debug, Clone, PartialEq)]
struct ScaledPoly {
    num: BiPoly,
    den: Poly,
}

/// All exact per-degree data for one even multiplicity `gamma = 2K`.
#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceTable {
    #[serde(rename = "K")]
    pub k: u32,
    pub n_max: usize,
    /// `D^_n` for `n = 0..=n_max + 1`.
    #[serde(rename = "Dhat")]
    pub dhat: Vec<Poly>,
    /// `h_n / sqrt(pi)` for `n = 0..=n_max`.
    pub h: Vec<RatFn>,
    pub alpha: Vec<RatFn>,
    pub beta: Vec<RatFn>,
    pub r: Vec<RatFn>,
    /// Sub-leading coefficient of `p_n` for `n = 0..=n_max + 1`.
    pub p1: Vec<RatFn>,
    #[serde(skip)]
    moments: MomentSet,
    #[serde(skip)]
    polys: Vec<ScaledPoly>,
    /// `L[Q_n^2]`, i.e. `h_n * d_n^2`.
    #[serde(skip)]
    norms: Vec<Poly>,
}

impl RecurrenceTable {
    pub fn gamma(&self) -> u32 {
        2 * self.k
    }

    pub fn moments(&self) -> &MomentSet {
        &self.moments
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::IndexOutOfRange { index: n, max: self.n_max });
        }
        Ok(())
    }

    /// Coefficients in `x` of the monic `p_n`, each a function of `t`.
    /// Valid for `n <= n_max + 1`.
    pub fn orthopoly(&self, n: usize) -> Result<Vec<RatFn>> {
        let p = self.polys.get(n).ok_or(Error::IndexOutOfRange { index: n, max: self.n_max + 1 })?;
        p.num.coeffs().iter().map(|c| RatFn::new(c.clone(), p.den.clone())).collect()
    }

    /// `alpha_n = -(d/dt h_n) / (2 h_n)`.
    pub fn alpha_via_logderiv(&self, n: usize) -> Result<RatFn> {
        self.check_index(n)?;
        let h = &self.h[n];
        h.derivative().checked_div(h).map(|f| f.scale(&Rational::new(-1, 2)))
    }

    /// `alpha_n = p1(n) - p1(n+1)` from sub-leading coefficients.
    pub fn alpha_via_subleading(&self, n: usize) -> Result<RatFn> {
        self.check_index(n)?;
        Ok(&self.p1[n] - &self.p1[n + 1])
    }

    /// `beta_n = D^_{n+1} D^_{n-1} / D^_n^2` from the Hankel determinants.
    pub fn beta_via_hankel(&self, n: usize) -> Result<RatFn> {
        self.check_index(n)?;
        if n == 0 {
            return Ok(RatFn::zero());
        }
        RatFn::new(&self.dhat[n + 1] * &self.dhat[n - 1], &self.dhat[n] * &self.dhat[n])
    }

    /// `L[p_m p_n]` as a function of `t`.
    pub fn inner_product(&self, m: usize, n: usize) -> Result<RatFn> {
        let (pm, pn) = (self.scaled(m)?, self.scaled(n)?);
        let raw = self.moments.apply(&(&pm.num * &pn.num))?;
        RatFn::new(raw, &pm.den * &pn.den)
    }

    fn scaled(&self, n: usize) -> Result<&ScaledPoly> {
        self.polys.get(n).ok_or(Error::IndexOutOfRange { index: n, max: self.n_max + 1 })
    }

    /// Laurent coefficients of `a_n(z, t)` and `b_n(z, t)` at `z = infinity`.
    ///
    /// With `gamma = 2K` the factor `|y - t|^gamma / (y - t)` is the
    /// polynomial `(y - t)^(2K-1)`, so every coefficient is an exact
    /// Gaussian integral.
    pub fn ladder_coeffs(&self, n: usize, order: usize) -> Result<LadderCoeffs> {
        self.check_index(n)?;
        if order == 0 {
            return Err(Error::InvalidArgument("ladder expansion order must be >= 1".into()));
        }
        if self.k == 0 {
            return Ok(LadderCoeffs {
                n,
                order,
                a_coeffs: vec![RatFn::zero(); order],
                b_coeffs: vec![RatFn::zero(); order],
            });
        }
        let gamma = Rational::from(self.gamma() as i64);
        let kernel = BiPoly::x_minus_t_pow(2 * self.k - 1);
        let pn = &self.polys[n];

        let sq_kernel = &(&pn.num * &pn.num) * &kernel;
        let a_coeffs = (0..order)
            .map(|j| {
                let val = sq_kernel.shift_x(j).gaussian_functional().scale(&gamma);
                RatFn::new(val, self.norms[n].clone())
            })
            .collect::<Result<Vec<_>>>()?;

        let b_coeffs = if n == 0 {
            vec![RatFn::zero(); order]
        } else {
            let pm = &self.polys[n - 1];
            let cross_kernel = &(&pn.num * &pm.num) * &kernel;
            (0..order)
                .map(|j| {
                    let val = cross_kernel.shift_x(j).gaussian_functional().scale(&gamma);
                    RatFn::new(&val * &pm.den, &self.norms[n - 1] * &pn.den)
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(LadderCoeffs { n, order, a_coeffs, b_coeffs })
    }

    /// Checks the two orthogonality consequences of the lowering operator:
    /// the vanishing diagonal coefficient
    /// `L[2y p_n^2] = 2K int p_n^2 (y-t)^(2K-1) e^{-y^2}` and the Freud relation
    /// `n h_{n-1} = L[2y p_n p_{n-1}] - 2K int p_n p_{n-1} (y-t)^(2K-1) e^{-y^2}`.
    pub fn freud_check(&self, n: usize) -> Result<FreudCheck> {
        self.check_index(n)?;
        if n == 0 {
            return Err(Error::InvalidArgument("the Freud relation needs n >= 1".into()));
        }
        let two_k = Rational::from(self.gamma() as i64);
        let kernel = if self.k == 0 { BiPoly::zero() } else { BiPoly::x_minus_t_pow(2 * self.k - 1) };
        let pn = &self.polys[n];
        let pm = &self.polys[n - 1];

        let sq = &pn.num * &pn.num;
        let lhs = self.moments.apply(&sq.shift_x(1))?.scale(&Rational::from(2));
        let rhs = (&sq * &kernel).gaussian_functional().scale(&two_k);
        let diagonal_residual = &lhs - &rhs;

        let cross = &pn.num * &pm.num;
        let drift = self.moments.apply(&cross.shift_x(1))?.scale(&Rational::from(2));
        let singular = (&cross * &kernel).gaussian_functional().scale(&two_k);
        let rhs = RatFn::new(&drift - &singular, &pn.den * &pm.den)?;
        let lhs = self.h[n - 1].scale(&Rational::from(n as i64));
        let freud_residual = (&lhs - &rhs).num().clone();

        Ok(FreudCheck {
            n,
            pass: diagonal_residual.is_zero() && freud_residual.is_zero(),
            diagonal_residual,
            freud_residual,
        })
    }
}

/// Laurent coefficients of `a_n` and `b_n`: entry `j` multiplies `z^-(j+1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderCoeffs {
    pub n: usize,
    pub order: usize,
    pub a_coeffs: Vec<RatFn>,
    pub b_coeffs: Vec<RatFn>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreudCheck {
    pub n: usize,
    pub pass: bool,
    pub diagonal_residual: Poly,
    pub freud_residual: Poly,
}

/// Exact Stieltjes procedure for `gamma = 2k`, up to degree `n_max`.
pub fn recurrence_table(k: u32, n_max: usize) -> Result<RecurrenceTable> {
    let moments = weight_moments(k, 2 * n_max + 2);
    recurrence_from_moments(moments, n_max)
}

/// Same as [`recurrence_table`] but over a caller-supplied moment set.
pub fn recurrence_from_moments(moments: MomentSet, n_max: usize) -> Result<RecurrenceTable> {
    let needed = 2 * n_max + 2;
    if moments.max_index < needed {
        return Err(Error::InsufficientMoments { needed, available: moments.max_index });
    }

    let k = moments.k;
    let mut polys = vec![ScaledPoly { num: BiPoly::one(), den: Poly::one() }];
    let mut norms: Vec<Poly> = Vec::with_capacity(n_max + 1);
    let mut h: Vec<RatFn> = Vec::with_capacity(n_max + 1);
    let mut alpha = Vec::with_capacity(n_max + 1);
    let mut beta = Vec::with_capacity(n_max + 1);

    for n in 0..=n_max {
        let pn = &polys[n];
        let sq = &pn.num * &pn.num;
        let norm = moments.apply(&sq)?;
        let first = moments.apply(&sq.shift_x(1))?;
        let hn = RatFn::new(norm.clone(), &pn.den * &pn.den)?;
        let an = RatFn::new(first, norm.clone())?;
        let bn = if n == 0 { RatFn::zero() } else { hn.checked_div(&h[n - 1])? };

        let next = three_term_step(pn, polys.get(n.wrapping_sub(1)), &an, &bn)?;
        norms.push(norm);
        h.push(hn);
        alpha.push(an);
        beta.push(bn);
        polys.push(next);
    }

    let dhat = (0..=n_max + 1).map(|n| hankel_det(&moments, n)).collect::<Result<Vec<_>>>()?;
    let p1 = polys
        .iter()
        .enumerate()
        .map(|(n, p)| if n == 0 { Ok(RatFn::zero()) } else { RatFn::new(p.num.coeff(n - 1), p.den.clone()) })
        .collect::<Result<Vec<_>>>()?;
    let shift = RatFn::constant(Rational::from(k as i64));
    let r = beta
        .iter()
        .enumerate()
        .map(|(n, b)| &(&b.scale(&Rational::from(2)) - &RatFn::constant(Rational::from(n as i64))) - &shift)
        .collect();

    Ok(RecurrenceTable { k, n_max, dhat, h, alpha, beta, r, p1, moments, polys, norms })
}

/// `p_{n+1} = (x - alpha_n) p_n - beta_n p_{n-1}`, reduced.
fn three_term_step(pn: &ScaledPoly, prev: Option<&ScaledPoly>, alpha: &RatFn, beta: &RatFn) -> Result<ScaledPoly> {
    // (x * ad - an) / ad
    let shift = BiPoly::new(vec![-alpha.num(), alpha.den().clone()]);
    let left_den = alpha.den() * &pn.den;
    let left_num = &shift * &pn.num;

    let (num, den) = match prev {
        Some(pm) if !beta.is_zero() => {
            let right_den = beta.den() * &pm.den;
            let right_num = pm.num.scale(beta.num());
            let g = left_den.gcd(&right_den)?;
            let lcofactor = right_den.div_exact(&g)?;
            let rcofactor = left_den.div_exact(&g)?;
            (&left_num.scale(&lcofactor) - &right_num.scale(&rcofactor), &left_den * &lcofactor)
        }
        _ => (left_num, left_den),
    };

    let common = num.content().gcd(&den)?;
    let (num, den) = if common.is_one() { (num, den) } else { (num.div_exact(&common)?, den.div_exact(&common)?) };
    let lead_inv = den.lead().expect("nonzero denominator").recip()?;
    let lead_inv = Poly::constant(lead_inv);
    Ok(ScaledPoly { num: num.scale(&lead_inv), den: &den * &lead_inv })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn alpha0_k1() -> RatFn {
        RatFn::new(Poly::from_ints(&[0, -2]), Poly::from_ints(&[1, 0, 2])).unwrap()
    }

    #[test]
    fn k1_first_coefficients() {
        let tbl = recurrence_table(1, 3).unwrap();
        assert_eq!(tbl.alpha[0], alpha0_k1());
        let beta1 =
            RatFn::new(Poly::from_ints(&[3, 0, 0, 0, 4]), Poly::from_ints(&[1, 0, 2]).pow(2).scale(&q(2, 1))).unwrap();
        assert_eq!(tbl.beta[1], beta1);
        assert!(tbl.beta[0].is_zero());
        assert!(tbl.p1[0].is_zero());
        assert_eq!(tbl.r[0], RatFn::constant(q(-1, 1)));
    }

    #[test]
    fn beta_at_origin_matches_closed_form() {
        let tbl = recurrence_table(1, 6).unwrap();
        for n in 0..=6i64 {
            let odd = if n % 2 == 1 { 1 } else { 0 };
            let expect = q(n, 2) + Rational::from(odd);
            assert_eq!(tbl.beta[n as usize].eval(&Rational::zero()).unwrap(), expect);
        }
    }

    #[test]
    fn orthopoly_low_degrees() {
        let tbl = recurrence_table(1, 2).unwrap();
        assert_eq!(tbl.orthopoly(0).unwrap(), vec![RatFn::one()]);
        let p1 = tbl.orthopoly(1).unwrap();
        assert_eq!(p1[0], -alpha0_k1());
        assert_eq!(p1[1], RatFn::one());
        for n in 0..=3 {
            assert_eq!(tbl.orthopoly(n).unwrap().last().unwrap(), &RatFn::one());
        }
        assert!(tbl.orthopoly(4).is_err());
    }

    #[test]
    fn alpha_routes_agree() {
        for k in 0..=2 {
            let tbl = recurrence_table(k, 4).unwrap();
            for n in 0..=4 {
                assert_eq!(tbl.alpha_via_logderiv(n).unwrap(), tbl.alpha[n], "K={k} n={n}");
                assert_eq!(tbl.alpha_via_subleading(n).unwrap(), tbl.alpha[n], "K={k} n={n}");
                assert_eq!(tbl.beta_via_hankel(n).unwrap(), tbl.beta[n], "K={k} n={n}");
            }
        }
    }

    #[test]
    fn logderiv_example() {
        let tbl = recurrence_table(1, 1).unwrap();
        assert_eq!(tbl.alpha_via_logderiv(0).unwrap(), alpha0_k1());
    }

    #[test]
    fn hermite_weight_has_constant_norms() {
        let tbl = recurrence_table(0, 5).unwrap();
        for n in 0..=5 {
            assert!(tbl.alpha[n].is_zero());
            assert_eq!(tbl.beta[n], RatFn::constant(q(n as i64, 2)));
            assert!(tbl.alpha_via_logderiv(n).unwrap().is_zero());
        }
    }

    #[test]
    fn orthogonality() {
        let tbl = recurrence_table(2, 4).unwrap();
        for n in 0..=4 {
            for m in 0..n {
                assert!(tbl.inner_product(m, n).unwrap().is_zero(), "m={m} n={n}");
            }
            assert_eq!(tbl.inner_product(n, n).unwrap(), tbl.h[n]);
        }
    }

    #[test]
    fn ladder_leading_coefficients() {
        let tbl = recurrence_table(1, 3).unwrap();
        let lc = tbl.ladder_coeffs(1, 3).unwrap();
        let two = Rational::from(2);
        assert_eq!(lc.a_coeffs[0], tbl.alpha[1].scale(&two));
        assert_eq!(lc.b_coeffs[0], &tbl.beta[1].scale(&two) - &RatFn::constant(Rational::one()));
        let gamma = RatFn::constant(two.clone());
        let expect = &gamma + &(&RatFn::var() * &tbl.alpha[1]).scale(&two);
        assert_eq!(lc.a_coeffs[1], expect);
        assert!(tbl.ladder_coeffs(1, 0).is_err());
        assert!(tbl.ladder_coeffs(4, 2).is_err());
    }

    #[test]
    fn freud_relations() {
        for (k, n) in [(1, 1), (2, 2), (3, 3), (0, 2)] {
            let tbl = recurrence_table(k, n).unwrap();
            let check = tbl.freud_check(n).unwrap();
            assert!(check.pass, "K={k} n={n}: {check:?}");
        }
        assert!(recurrence_table(1, 1).unwrap().freud_check(0).is_err());
    }

    #[test]
    fn insufficient_moments() {
        let ms = weight_moments(1, 5);
        assert!(matches!(recurrence_from_moments(ms, 3), Err(Error::InsufficientMoments { needed: 8, available: 5 })));
    }
}
