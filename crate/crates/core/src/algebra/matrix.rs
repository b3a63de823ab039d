use super::Poly;
use crate::error::{Error, Result};

/// Determinant of a square matrix of polynomials by fraction-free
/// (Bareiss) elimination. Every division in the elimination is exact.
///
/// The empty matrix has determinant 1.
pub fn bareiss_det(matrix: &[Vec<Poly>]) -> Result<Poly> {
    let n = matrix.len();
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "determinant needs a square matrix, got a row of length {} in a {n}-row matrix",
            row.len()
        )));
    }
    if n == 0 {
        return Ok(Poly::one());
    }

    let mut a: Vec<Vec<Poly>> = matrix.to_vec();
    let mut negate = false;
    let mut prev_pivot = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Poly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let cross = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = cross.div_exact(&prev_pivot)?;
            }
        }
        prev_pivot = a[k][k].clone();
    }

    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    #[test]
    fn one_by_one() {
        let p = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(bareiss_det(&[vec![p.clone()]]).unwrap(), p);
    }

    #[test]
    fn diagonal() {
        let m = vec![vec![Poly::one(), Poly::zero()], vec![Poly::zero(), Poly::var()]];
        assert_eq!(bareiss_det(&m).unwrap(), Poly::var());
    }

    #[test]
    fn shifted_schur_block() {
        // [[P1, P2], [P0, P1]] with P0 = 1, P1 = x, P2 = x^2/2 + 1/6
        let p0 = Poly::one();
        let p1 = Poly::var();
        let p2 = Poly::new(vec![Rational::new(1, 6), Rational::zero(), Rational::new(1, 2)]);
        let m = vec![vec![p1.clone(), p2], vec![p0, p1]];
        let expect = Poly::new(vec![Rational::new(-1, 6), Rational::zero(), Rational::new(1, 2)]);
        assert_eq!(bareiss_det(&m).unwrap(), expect);
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let m = vec![vec![Poly::zero(), Poly::one()], vec![Poly::one(), Poly::zero()]];
        assert_eq!(bareiss_det(&m).unwrap(), Poly::constant(Rational::from(-1)));
    }

    #[test]
    fn singular_and_empty() {
        let m = vec![vec![Poly::var(), Poly::var()], vec![Poly::var(), Poly::var()]];
        assert!(bareiss_det(&m).unwrap().is_zero());
        assert_eq!(bareiss_det(&[]).unwrap(), Poly::one());
    }

    #[test]
    fn rejects_non_square() {
        let m = vec![vec![Poly::one(), Poly::one()]];
        assert!(bareiss_det(&m).is_err());
    }
}
