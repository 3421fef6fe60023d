use super::matrix::Matrix;
use crate::scalar::IntegerScalar;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with
/// `d[0] | d[1] | ...`, nonnegative, zeros last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntegerScalar> SnfResult<T> {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

/// Position of the nonzero entry of least absolute value in the block
/// `rows >= t`, `cols >= t`.
fn smallest_in_block<T: IntegerScalar>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smallest nonzero entry among the pivot row and pivot column at `t`.
fn smallest_in_cross<T: IntegerScalar>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let col = (t..d.rows()).map(|i| (i, t));
    let row = (t + 1..d.cols()).map(|j| (t, j));
    col.chain(row).filter(|&p| !d[p].is_zero()).min_by(|&a, &b| d[a].abs().cmp(&d[b].abs()))
}

pub fn smith_normal_form<T: IntegerScalar>(m: &Matrix<T>) -> SnfResult<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_in_block(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let p = d[(t, t)].clone();
            for i in t + 1..rows {
                let q = d[(i, t)].div_floor(&p);
                if !q.is_zero() {
                    let f = -q;
                    d.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                }
            }
            for j in t + 1..cols {
                let q = d[(t, j)].div_floor(&p);
                if !q.is_zero() {
                    let f = -q;
                    d.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                }
            }

            let cross_clear = (t + 1..rows).all(|i| d[(i, t)].is_zero()) && (t + 1..cols).all(|j| d[(t, j)].is_zero());
            if !cross_clear {
                let (i, j) = smallest_in_cross(&d, t).expect("nonzero entry in pivot cross");
                if i != t {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                } else if j != t {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
                continue;
            }

            // Pivot must divide the remaining block; otherwise fold an
            // offending row into the pivot row and reduce again.
            let p = d[(t, t)].clone();
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offending {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfResult { u, d, v }
}

/// Invariant factors of `m`: the diagonal of its Smith form.
pub fn invariant_factors<T: IntegerScalar>(m: &Matrix<T>) -> Vec<T> {
    smith_normal_form(m).diagonal()
}
