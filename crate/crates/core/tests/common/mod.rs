//! Strategies and oracle checks shared by the property tests and the
//! acceptance runner.
#![allow(dead_code)]

use gue_piv::{bareiss_det, Poly, RatFn, Rational};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(Poly::new)
}

pub fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn ratfn() -> impl Strategy<Value = RatFn> {
    (poly(4), nonzero_poly(4)).prop_map(|(n, d)| RatFn::new(n, d).expect("nonzero denominator"))
}

pub fn square_matrix(max_size: usize) -> impl Strategy<Value = Vec<Vec<Poly>>> {
    (1..=max_size).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(poly(3), n), n))
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero();
            for col in 0..n {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][col] * &cofactor_det(&minor);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

#[allow(clippy::eq_op)]
pub fn ring_axioms_poly(a: &Poly, b: &Poly, c: &Poly) -> Result<(), TestCaseError> {
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + &Poly::zero(), a.clone());
    prop_assert_eq!(a * &Poly::one(), a.clone());
    prop_assert!((a - a).is_zero());
    Ok(())
}

pub fn field_axioms_ratfn(a: &RatFn, b: &RatFn, c: &RatFn) -> Result<(), TestCaseError> {
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(&(a + b) - b, a.clone());
    if !b.is_zero() {
        prop_assert_eq!((a * b).checked_div(b).unwrap(), a.clone());
        prop_assert_eq!(b * &b.recip().unwrap(), RatFn::one());
    }
    Ok(())
}

pub fn gcd_divides(a: &Poly, b: &Poly, c: &Poly) -> Result<(), TestCaseError> {
    if a.is_zero() && b.is_zero() {
        prop_assert!(a.gcd(b).is_err());
        return Ok(());
    }
    let g = a.gcd(b).unwrap();
    prop_assert!(g.lead().is_some_and(Rational::is_one));
    prop_assert!(a.div_rem(&g).unwrap().1.is_zero());
    prop_assert!(b.div_rem(&g).unwrap().1.is_zero());
    // the gcd of the cofactors is trivial
    let (ga, gb) = (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap());
    if !(ga.is_zero() && gb.is_zero()) {
        prop_assert!(ga.gcd(&gb).unwrap().is_one());
    }
    if !c.is_zero() {
        prop_assert_eq!((a * c).gcd(&(b * c)).unwrap(), &g * &c.monic());
    }
    Ok(())
}

pub fn product_rule(f: &Poly, g: &Poly, r: &RatFn, s: &RatFn) -> Result<(), TestCaseError> {
    prop_assert_eq!((f * g).derivative(), &(&f.derivative() * g) + &(f * &g.derivative()));
    prop_assert_eq!((r * s).derivative(), &(&r.derivative() * s) + &(r * &s.derivative()));
    Ok(())
}

pub fn bareiss_matches_cofactor(m: &[Vec<Poly>]) -> Result<(), TestCaseError> {
    prop_assert_eq!(bareiss_det(m).unwrap(), cofactor_det(m));
    Ok(())
}
