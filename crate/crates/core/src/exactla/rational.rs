use super::matrix::Matrix;
use super::LinalgError;
use crate::scalar::{FieldScalar, IntegerScalar};

/// Fraction-free (Bareiss) determinant.
pub fn determinant<T: IntegerScalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return T::zero();
            };
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = num / prev.clone();
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Gauss-Jordan inverse over a field.
pub fn inverse<F: FieldScalar>(m: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::<F>::identity(n);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Err(LinalgError::Singular);
        };
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        let pivot = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = a[(c, j)].clone() / pivot.clone();
            inv[(c, j)] = inv[(c, j)].clone() / pivot.clone();
        }
        for i in 0..n {
            if i != c && !a[(i, c)].is_zero() {
                let f = -a[(i, c)].clone();
                a.add_row_multiple(i, c, &f);
                inv.add_row_multiple(i, c, &f);
            }
        }
    }
    Ok(inv)
}

/// Rank over the fraction field.
pub fn rank<T: IntegerScalar>(m: &Matrix<T>) -> usize {
    super::hnf::hermite_normal_form(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    #[allow(unused_imports)]
    use num_integer::Integer;
    use num_rational::BigRational;
    #[allow(unused_imports)]
    use num_traits::{Signed, Zero};

    fn big(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&big(&[&[-2, 3, 0], &[3, -2, 1], &[0, 1, -2]])), BigInt::from(12));
        assert_eq!(determinant(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&big(&[&[1, 2], &[2, 4]])), BigInt::from(0));
        assert_eq!(determinant(&big(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]])), BigInt::from(-3));
    }

    #[test]
    fn inverse_round_trip() {
        let m = big(&[&[2, 1], &[7, 4]]).to_rational();
        let inv = inverse(&m).unwrap();
        assert_eq!(&m * &inv, Matrix::<BigRational>::identity(2));
        assert!(matches!(inverse(&big(&[&[1, 2], &[2, 4]]).to_rational()), Err(LinalgError::Singular)));
    }

    #[test]
    fn rank_counts() {
        assert_eq!(rank(&big(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&Matrix::<BigInt>::identity(3)), 3);
    }
}
