use super::matrix::Matrix;
use crate::scalar::IntegerScalar;

/// Row-style Hermite normal form: `u * m == h`, `u` unimodular, `h` in row
/// echelon form with positive pivots and every entry above a pivot reduced
/// into `[0, pivot)`. Zero rows come last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// Column index of each pivot, one per nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl<T> HnfResult<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hermite_normal_form<T: IntegerScalar>(m: &Matrix<T>) -> HnfResult<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = Matrix::identity(rows);
    let mut pivots = Vec::new();
    let mut p = 0;

    for col in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let best = (p..rows).filter(|&i| !h[(i, col)].is_zero()).min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let pivot = h[(p, col)].clone();
            let mut clear = true;
            for i in p + 1..rows {
                let q = h[(i, col)].div_floor(&pivot);
                if !q.is_zero() {
                    let f = -q;
                    h.add_row_multiple(i, p, &f);
                    u.add_row_multiple(i, p, &f);
                }
                clear &= h[(i, col)].is_zero();
            }
            if clear {
                break;
            }
        }
        if h[(p, col)].is_zero() {
            continue;
        }
        if h[(p, col)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h[(p, col)].clone();
        for i in 0..p {
            let q = h[(i, col)].div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                h.add_row_multiple(i, p, &f);
                u.add_row_multiple(i, p, &f);
            }
        }
        pivots.push(col);
        p += 1;
    }

    HnfResult { h, u, pivots }
}

/// Canonical basis (HNF rows, zero rows dropped) of the row lattice of `m`.
pub fn row_lattice_basis<T: IntegerScalar>(m: &Matrix<T>) -> Matrix<T> {
    let r = hermite_normal_form(m);
    let keep: Vec<usize> = (0..r.rank()).collect();
    r.h.select_rows(&keep)
}

/// Reduces `v` modulo the row lattice whose HNF basis is `basis`: the result
/// differs from `v` by a lattice vector and has every pivot coordinate in
/// `[0, pivot)`.
pub fn reduce_modulo_rows<T: IntegerScalar>(v: &[T], basis: &Matrix<T>) -> Vec<T> {
    let mut out = v.to_vec();
    for i in 0..basis.rows() {
        let Some(col) = (0..basis.cols()).find(|&j| !basis[(i, j)].is_zero()) else { continue };
        let q = out[col].div_floor(&basis[(i, col)]);
        if !q.is_zero() {
            for j in 0..basis.cols() {
                out[j] = out[j].clone() - q.clone() * basis[(i, j)].clone();
            }
        }
    }
    out
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

    fn check(m: &Matrix<BigInt>) -> HnfResult<BigInt> {
        let r = hermite_normal_form(m);
        assert_eq!(&r.u * m, r.h);
        assert_eq!(crate::exactla::determinant(&r.u).abs(), BigInt::from(1));
        r
    }

    #[test]
    fn identity_is_fixed() {
        let id = Matrix::<BigInt>::identity(3);
        assert_eq!(check(&id).h, id);
    }

    #[test]
    fn swap_becomes_identity() {
        assert_eq!(check(&big(&[&[0, 1], &[1, 0]])).h, Matrix::identity(2));
    }

    #[test]
    fn upper_entries_reduced_below_pivot() {
        let r = check(&big(&[&[2, 4], &[1, 3]]));
        assert_eq!(r.h, big(&[&[1, 1], &[0, 2]]));
        // [[1,3],[0,2]] spans the same row lattice; only the reduced form is canonical.
        assert_eq!(row_lattice_basis(&big(&[&[1, 3], &[0, 2]])), r.h);
    }

    #[test]
    fn rank_deficient_rows_go_last() {
        let r = check(&big(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]));
        assert_eq!(r.pivots, vec![0, 2]);
        assert!(r.h.row(2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn reduction_modulo_rows() {
        let basis = big(&[&[1, 1], &[0, 2]]);
        let v = vec![BigInt::from(3), BigInt::from(7)];
        assert_eq!(reduce_modulo_rows(&v, &basis), vec![BigInt::from(0), BigInt::from(0)]);
        let v = vec![BigInt::from(0), BigInt::from(3)];
        assert_eq!(reduce_modulo_rows(&v, &basis), vec![BigInt::from(0), BigInt::from(1)]);
    }
}
