use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Poly, Rational};
use crate::error::{Error, Result};

/// A reduced rational function `num / den`: `gcd(num, den) = 1` and `den`
/// is monic, so two equal functions are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFn::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFn { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn var() -> Self {
        RatFn::from_poly(Poly::var())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    /// Builds and reduces `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den).expect("den is nonzero");
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lead = den.lead().expect("den is nonzero").clone();
        if lead.is_one() {
            RatFn { num, den }
        } else {
            let inv = lead.recip().expect("nonzero lead");
            RatFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Scales an already coprime pair so the denominator is monic.
    fn monic_den(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let lead = den.lead().expect("den is nonzero").clone();
        if lead.is_one() {
            RatFn { num, den }
        } else {
            let inv = lead.recip().expect("nonzero lead");
            RatFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this function does not depend on the variable.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<RatFn> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, c) = cancel(&self.num, &rhs.num);
        let (b, d) = cancel(&self.den, &rhs.den);
        Ok(Self::monic_den(&a * &d, &b * &c))
    }

    pub fn recip(&self) -> Result<RatFn> {
        RatFn::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> RatFn {
        // Powers of a reduced fraction stay reduced.
        RatFn { num: self.num.pow(exp), den: self.den.pow(exp) }
    }

    /// Quotient rule, reduced.
    pub fn derivative(&self) -> RatFn {
        if self.den.is_constant() {
            return RatFn { num: self.num.derivative(), den: self.den.clone() };
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole { point: x.to_string() });
        }
        Ok(&self.num.eval(x) / &d)
    }

    /// `f(-var)`.
    pub fn reflect(&self) -> RatFn {
        Self::reduce(self.num.reflect(), self.den.reflect())
    }

    /// The pair `(num * c, den * c)` with `c` chosen so the denominator has
    /// coprime integer coefficients and a positive leading coefficient.
    /// Used for display and the wire encoding.
    pub fn integral_form(&self) -> (Poly, Poly) {
        let l = Rational::from_integer(self.den.denominator_lcm());
        let den = self.den.scale(&l);
        let content = den.coeffs().iter().fold(rug::Integer::new(), |acc, c| acc.gcd(c.numer()));
        let c = &l / &Rational::from_integer(content);
        (self.num.scale(&c), self.den.scale(&c))
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl From<Rational> for RatFn {
    fn from(c: Rational) -> Self {
        RatFn::constant(c)
    }
}

impl Add<&RatFn> for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::reduce(&self.num + &rhs.num, self.den.clone());
        }
        // Henrici: with g = gcd(b, d), any common factor of the new
        // numerator and denominator must divide g.
        let g = self.den.gcd(&rhs.den).expect("nonzero denominators");
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFn::monic_den(num, &self.den * &rhs.den);
        }
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        if num.is_zero() {
            return RatFn::zero();
        }
        let g2 = num.gcd(&g).expect("g is nonzero");
        if g2.is_one() {
            RatFn::monic_den(num, &(&b * &d) * &g)
        } else {
            let num = num.div_exact(&g2).expect("gcd divides");
            let g = g.div_exact(&g2).expect("gcd divides");
            RatFn::monic_den(num, &(&b * &d) * &g)
        }
    }
}

impl Sub<&RatFn> for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul<&RatFn> for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        // (a/b)(c/d): cancel gcd(a, d) and gcd(c, b) before multiplying.
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        RatFn::monic_den(&a * &c, &b * &d)
    }
}

/// Divides out `gcd(p, q)` from both.
fn cancel(p: &Poly, q: &Poly) -> (Poly, Poly) {
    if p.is_constant() || q.is_constant() {
        return (p.clone(), q.clone());
    }
    let g = p.gcd(q).expect("nonzero inputs");
    if g.is_one() {
        (p.clone(), q.clone())
    } else {
        (p.div_exact(&g).expect("gcd divides"), q.div_exact(&g).expect("gcd divides"))
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<RatFn> for RatFn {
            type Output = RatFn;
            fn $method(self, rhs: RatFn) -> RatFn {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RatFn> for RatFn {
            type Output = RatFn;
            fn $method(self, rhs: &RatFn) -> RatFn {
                (&self).$method(rhs)
            }
        }
        impl $trait<RatFn> for &RatFn {
            type Output = RatFn;
            fn $method(self, rhs: RatFn) -> RatFn {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integral_form();
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct RatFnWire {
    num: Poly,
    den: Poly,
}

impl Serialize for RatFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (num, den) = self.integral_form();
        RatFnWire { num, den }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = RatFnWire::deserialize(deserializer)?;
        RatFn::new(w.num, w.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn inv_t() -> RatFn {
        RatFn::new(Poly::one(), Poly::var()).unwrap()
    }

    // -2t/(1+2t^2), the K=1 alpha_0.
    fn alpha0() -> RatFn {
        RatFn::new(Poly::from_ints(&[0, -2]), Poly::from_ints(&[1, 0, 2])).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let two_over_t = RatFn::new(Poly::constant(q(2, 1)), Poly::var()).unwrap();
        assert_eq!(&inv_t() + &inv_t(), two_over_t);
        let a = alpha0();
        assert_eq!(a.checked_div(&a).unwrap(), RatFn::one());
        let f = RatFn::new(Poly::var(), Poly::from_ints(&[1, 1])).unwrap();
        let g = RatFn::new(Poly::from_ints(&[1, 1]), Poly::var()).unwrap();
        assert_eq!(&f * &g, RatFn::one());
        assert_eq!(a.checked_div(&RatFn::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn normalization() {
        let f = RatFn::new(Poly::from_ints(&[-2, 2]), Poly::from_ints(&[-3, 0, 3])).unwrap();
        // 2(t-1) / 3(t-1)(t+1) = (2/3)/(t+1)
        assert_eq!(f.num(), &Poly::constant(q(2, 3)));
        assert_eq!(f.den(), &Poly::from_ints(&[1, 1]));
        assert!(RatFn::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn derivative_examples() {
        let expect = RatFn::new(Poly::constant(q(-1, 1)), Poly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(inv_t().derivative(), expect);
        let expect = RatFn::new(Poly::from_ints(&[-2, 0, 4]), Poly::from_ints(&[1, 0, 2]).pow(2)).unwrap();
        assert_eq!(alpha0().derivative(), expect);
        assert!(RatFn::constant(q(5, 7)).derivative().is_zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(alpha0().eval(&q(1, 1)).unwrap(), q(-2, 3));
        assert_eq!(inv_t().eval(&q(0, 1)), Err(Error::Pole { point: "0".into() }));
    }

    #[test]
    fn wire_encoding_uses_integral_denominator() {
        let json = serde_json::to_string(&alpha0()).unwrap();
        assert_eq!(json, r#"{"num":["0","-2"],"den":["1","0","2"]}"#);
        let back: RatFn = serde_json::from_str(&json).unwrap();
        assert_eq!(back, alpha0());
    }

    #[test]
    fn reflection() {
        assert_eq!(alpha0().reflect(), -alpha0());
    }
}
