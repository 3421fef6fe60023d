use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::LinalgError;
use crate::scalar::{FieldScalar, IntegerScalar};

/// Inertia of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, null: usize) -> Self {
        Self { positive, negative, null }
    }

    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.null
    }

    /// Hyperbolic in the sense `(1, rank - 1)` with no null directions.
    pub fn is_hyperbolic(&self) -> bool {
        self.positive == 1 && self.null == 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.null == 0 {
            write!(f, "({},{})", self.positive, self.negative)
        } else {
            write!(f, "({},{},{})", self.positive, self.negative, self.null)
        }
    }
}

/// Exact signature of an integral symmetric matrix.
pub fn signature<T: IntegerScalar>(g: &Matrix<T>) -> Result<Signature, LinalgError> {
    if let Some((i, j)) = g.first_asymmetry() {
        return Err(LinalgError::NotSymmetric { row: i, col: j });
    }
    Ok(congruence_signature(g.to_rational()))
}

/// Symmetric congruence diagonalization over an ordered field.
///
/// A nonzero diagonal pivot is split off by a Schur complement. When the
/// remaining diagonal is all zero but an off-diagonal `a = A[i][j]` survives,
/// the block `[[0,a],[a,0]]` is a hyperbolic plane: it contributes `(1,1)` and
/// is split off as a 2x2 pivot.
pub fn congruence_signature<F: FieldScalar>(mut a: Matrix<F>) -> Signature {
    assert!(a.is_square());
    let mut live: Vec<usize> = (0..a.rows()).collect();
    let mut sig = Signature::new(0, 0, 0);

    while !live.is_empty() {
        if let Some(pos) = live.iter().position(|&i| !a[(i, i)].is_zero()) {
            let p = live.swap_remove(pos);
            let pivot = a[(p, p)].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            let col: Vec<F> = live.iter().map(|&k| a[(k, p)].clone()).collect();
            for (x, &k) in live.iter().enumerate() {
                if col[x].is_zero() {
                    continue;
                }
                let f = col[x].clone() / pivot.clone();
                for (y, &l) in live.iter().enumerate() {
                    let upd = a[(k, l)].clone() - f.clone() * col[y].clone();
                    a[(k, l)] = upd;
                }
            }
            continue;
        }

        let pair =
            live.iter().enumerate().flat_map(|(x, &i)| live[x + 1..].iter().map(move |&j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero());
        let Some((i, j)) = pair else {
            sig.null += live.len();
            break;
        };
        sig.positive += 1;
        sig.negative += 1;
        live.retain(|&k| k != i && k != j);
        // Schur complement against [[0,c],[c,0]]:
        // A[k][l] -= (A[k][i] A[j][l] + A[k][j] A[i][l]) / c
        let c = a[(i, j)].clone();
        let ci: Vec<F> = live.iter().map(|&k| a[(k, i)].clone()).collect();
        let cj: Vec<F> = live.iter().map(|&k| a[(k, j)].clone()).collect();
        for (x, &k) in live.iter().enumerate() {
            for (y, &l) in live.iter().enumerate() {
                let corr = (ci[x].clone() * cj[y].clone() + cj[x].clone() * ci[y].clone()) / c.clone();
                if !corr.is_zero() {
                    let upd = a[(k, l)].clone() - corr;
                    a[(k, l)] = upd;
                }
            }
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    #[allow(unused_imports)]
    use num_integer::Integer;
    #[allow(unused_imports)]
    use num_traits::{Signed, Zero};

    fn big(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn hyperbolic_plane() {
        assert_eq!(signature(&big(&[&[0, 1], &[1, 0]])).unwrap(), Signature::new(1, 1, 0));
    }

    #[test]
    fn three_node_gram_is_hyperbolic() {
        let g = big(&[&[-2, 3, 0], &[3, -2, 1], &[0, 1, -2]]);
        assert_eq!(signature(&g).unwrap(), Signature::new(1, 2, 0));
    }

    #[test]
    fn degenerate_forms_count_null_directions() {
        assert_eq!(signature(&big(&[&[1, 1], &[1, 1]])).unwrap(), Signature::new(1, 0, 1));
        assert_eq!(signature(&big(&[&[0, 0], &[0, 0]])).unwrap(), Signature::new(0, 0, 2));
        // zero diagonal with a hyperbolic pair plus a null vector
        let g = big(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]);
        assert_eq!(signature(&g).unwrap(), Signature::new(1, 1, 1));
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(matches!(signature(&big(&[&[0, 1], &[2, 0]])), Err(LinalgError::NotSymmetric { .. })));
    }

    #[test]
    fn float_field_agrees_on_small_case() {
        let a = Matrix::<f64>::from_rows(vec![vec![0.0, 2.0, 1.0], vec![2.0, 0.0, 0.0], vec![1.0, 0.0, -3.0]]).unwrap();
        let exact = signature(&big(&[&[0, 2, 1], &[2, 0, 0], &[1, 0, -3]])).unwrap();
        assert_eq!(congruence_signature(a), exact);
    }
}
