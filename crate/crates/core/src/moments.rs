//! Moments of the weight `exp(-x^2) (x - t)^(2K)` and their Hankel
//! determinants, all with the factor `sqrt(pi)` normalized out so that
//! every quantity lives in `Q[t]`.

use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::algebra::{bareiss_det, Poly, Rational};
use crate::error::{Error, Result};

/// `(1/sqrt(pi)) * integral of x^m exp(-x^2)`: zero for odd `m`, otherwise
/// `(m-1)!! / 2^(m/2)`.
pub fn gaussian_moment(m: usize) -> Rational {
    if m % 2 == 1 {
        return Rational::zero();
    }
    let half = m / 2;
    let double_fact: Rational = (1..m).step_by(2).map(|k| Rational::from(k as i64)).product();
    double_fact / Rational::from(2).pow(half as u32)
}

/// Normalized moments `q_j(t) = mu_j(t) / sqrt(pi)` for `j = 0..=max_index`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSet {
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "J")]
    pub max_index: usize,
    pub q: Vec<Poly>,
}

impl MomentSet {
    pub fn get(&self, j: usize) -> Result<&Poly> {
        self.q.get(j).ok_or(Error::InsufficientMoments { needed: j, available: self.max_index })
    }

    /// The moment functional: maps `sum_i c_i(t) x^i` to `sum_i c_i(t) q_i(t)`.
    pub fn apply(&self, f: &BiPoly) -> Result<Poly> {
        let mut acc = Poly::zero();
        for (i, c) in f.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + c * self.get(i)?;
        }
        Ok(acc)
    }

    pub fn gamma(&self) -> u32 {
        2 * self.k
    }
}

/// Moments of `exp(-x^2) (x - t)^(2k)` for indices `0..=max_index`.
///
/// `k = 0` gives the plain Gaussian moments (constant polynomials).
pub fn weight_moments(k: u32, max_index: usize) -> MomentSet {
    let two_k = 2 * k;
    let binomials: Vec<Rational> = (0..=two_k).map(|l| Rational::binomial(two_k, l)).collect();
    let q = (0..=max_index)
        .map(|j| {
            // coefficient of t^(2K-l) is C(2K,l) (-1)^(2K-l) g_{j+l}
            let mut coeffs = vec![Rational::zero(); two_k as usize + 1];
            for l in 0..=two_k {
                let g = gaussian_moment(j + l as usize);
                if g.is_zero() {
                    continue;
                }
                let power = (two_k - l) as usize;
                let sign = if power.is_multiple_of(2) { Rational::one() } else { Rational::from(-1) };
                coeffs[power] = &binomials[l as usize] * &g * sign;
            }
            Poly::new(coeffs)
        })
        .collect();
    MomentSet { k, max_index, q }
}

/// `D^_n(t) = det(q_{i+j})_{i,j<n}`, the Hankel determinant divided by
/// `pi^(n/2)`. `D^_0 = 1`.
pub fn hankel_det(moments: &MomentSet, n: usize) -> Result<Poly> {
    if n == 0 {
        return Ok(Poly::one());
    }
    let needed = 2 * n - 2;
    if moments.max_index < needed {
        return Err(Error::InsufficientMoments { needed, available: moments.max_index });
    }
    let matrix: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| moments.q[i + j].clone()).collect()).collect();
    bareiss_det(&matrix)
}

/// A polynomial in `x` whose coefficients are polynomials in `t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Poly::one())
    }

    pub fn constant(c: Poly) -> Self {
        BiPoly::new(vec![c])
    }

    /// `x^k`.
    pub fn x_pow(k: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); k + 1];
        coeffs[k] = Poly::one();
        BiPoly::new(coeffs)
    }

    /// `(x - t)^e`.
    pub fn x_minus_t_pow(e: u32) -> Self {
        let minus_t = Poly::monomial(Rational::from(-1), 1);
        BiPoly::new((0..=e).map(|l| minus_t.pow(e - l).scale(&Rational::binomial(e, l))).collect())
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Poly) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift_x(&self, k: usize) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let mut coeffs = vec![Poly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BiPoly::new(coeffs)
    }

    /// Applies the plain Gaussian functional `x^i -> g_i`.
    pub fn gaussian_functional(&self) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, c)| !c.is_zero() && i % 2 == 0)
            .fold(Poly::zero(), |acc, (i, c)| acc + c.scale(&gaussian_moment(i)))
    }

    /// Greatest common divisor of all coefficients (monic), or zero.
    pub fn content(&self) -> Poly {
        let mut g = Poly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(c).expect("c is nonzero");
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_exact(&self, d: &Poly) -> Result<BiPoly> {
        Ok(BiPoly::new(self.coeffs.iter().map(|c| c.div_exact(d)).collect::<Result<_>>()?))
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut coeffs = vec![Poly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BiPoly::new(coeffs)
    }
}
