use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals.
///
/// `coeffs[i]` is the coefficient of `var^i`. The vector never carries
/// trailing zeros, so the zero polynomial is the empty vector and structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    /// `c * var^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `var^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Monic associate; the zero polynomial maps to itself.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip().expect("nonzero lead")),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(-var)`.
    pub fn reflect(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect() }
    }

    /// `Some(0)` if even, `Some(1)` if odd, `None` for mixed parity.
    /// The zero polynomial is reported as even.
    pub fn parity(&self) -> Option<usize> {
        let mut seen = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match seen {
                None => seen = Some(i % 2),
                Some(p) if p != i % 2 => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(0))
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let d_lead_inv = divisor.coeffs[d_deg].recip()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - d_deg];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d_deg] * &d_lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &(&c * dc);
            }
            quot[i] = c;
        }
        rem.truncate(d_deg);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Division known to be exact; errors if a remainder is left.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument(format!("inexact polynomial division: remainder {r}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    ///
    /// Runs a primitive remainder sequence over the integers, which keeps
    /// coefficient growth in check compared to a Euclidean sequence over Q.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(Error::ZeroGcd),
            (true, false) => return Ok(other.monic()),
            (false, true) => return Ok(self.monic()),
            _ => {}
        }
        if self.is_constant() || other.is_constant() {
            return Ok(Poly::one());
        }
        let (mut a, mut b) = (IntPoly::primitive_of(self), IntPoly::primitive_of(other));
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        Ok(a.to_poly().monic())
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> Integer {
        self.coeffs.iter().fold(Integer::from(1), |acc, c| acc.lcm(c.denom()))
    }
}

/// Integer-coefficient polynomial used only inside the gcd.
struct IntPoly(Vec<Integer>);

impl IntPoly {
    fn primitive_of(p: &Poly) -> IntPoly {
        let l = p.denominator_lcm();
        let coeffs = p.coeffs.iter().map(|c| c.numer() * Integer::from(&l / c.denom())).collect();
        IntPoly(coeffs).primitive()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn primitive(mut self) -> IntPoly {
        while self.0.last().is_some_and(|c| *c == 0) {
            self.0.pop();
        }
        let content = self.0.iter().fold(Integer::new(), |acc, c| acc.gcd(c));
        if content > 1 {
            for c in &mut self.0 {
                c.div_exact_mut(&content);
            }
        }
        self
    }

    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let mut r = self.0.clone();
        let db = b.degree();
        let lb = &b.0[db];
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let lr = r[top].clone();
            if lr == 0 {
                r.pop();
                continue;
            }
            let shift = top - db;
            for c in r.iter_mut() {
                *c *= lb;
            }
            for (j, bc) in b.0.iter().enumerate() {
                r[shift + j] -= Integer::from(&lr * bc);
            }
            r.pop();
        }
        IntPoly(r)
    }

    fn to_poly(&self) -> Poly {
        Poly::new(self.0.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Rational::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Poly::new(coeffs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.signum() < 0 { (true, c.abs()) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<Rational>::deserialize(deserializer)?))
    }
}
