use super::hnf::{hermite_normal_form, row_lattice_basis};
use super::matrix::Matrix;
use super::snf::smith_normal_form;
use crate::scalar::IntegerScalar;

/// A ℤ-basis of `{v : m v = 0}`, returned as the rows of its Hermite form.
///
/// The integer kernel of an integer matrix is always saturated; the basis is
/// read off the unimodular transform of the HNF of `mᵀ` and then put in
/// canonical form.
pub fn integer_kernel<T: IntegerScalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let r = hermite_normal_form(&m.transpose());
    let rank = r.rank();
    let n = m.cols();
    if rank == n {
        return Vec::new();
    }
    let null_rows: Vec<usize> = (rank..n).collect();
    row_lattice_basis(&r.u.select_rows(&null_rows)).to_rows()
}

/// Some integer `v` with `m v = b`, or `None` when no integral solution exists.
pub fn solve_integral<T: IntegerScalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b);
    let k = m.rows().min(m.cols());
    let mut y = vec![T::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        let d = if i < k { snf.d[(i, i)].clone() } else { T::zero() };
        if d.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}
