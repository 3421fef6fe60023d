//! First cohomology `H¹(G, M) = ker N / im(1 - σ)` of a cyclic group acting
//! on a lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::action::CyclicAction;
use crate::exactla::{integer_kernel, inverse, reduce_modulo_rows, row_lattice_basis, smith_normal_form, solve_integral, vec_sub};
use crate::lattice::FinAbGroup;
use crate::{IntMatrix, IntVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("vector {0} is not a cocycle: N v != 0")]
    NotACocycle(String),
    #[error("vector has length {found}, lattice has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `1 + σ + … + σ^{n-1}`.
pub fn norm_matrix(a: &CyclicAction) -> IntMatrix {
    let mut sum = IntMatrix::zeros(a.rank(), a.rank());
    let mut power = IntMatrix::identity(a.rank());
    for _ in 0..a.order() {
        sum = &sum + &power;
        power = &power * a.matrix();
    }
    sum
}

/// `1 - σ`.
pub fn coboundary_matrix(a: &CyclicAction) -> IntMatrix {
    &IntMatrix::identity(a.rank()) - a.matrix()
}

/// H¹ together with the data needed to name classes.
#[derive(Clone, Debug)]
pub struct H1 {
    pub group: FinAbGroup,
    norm: IntMatrix,
    coboundary: IntMatrix,
    /// Columns form a basis of ker N.
    kernel: IntMatrix,
    /// HNF rows spanning im(1 - σ); used to reduce representatives.
    image_basis: IntMatrix,
    /// Maps ker N coordinates to Smith coordinates.
    to_smith: IntMatrix,
    /// Smith diagonal, one entry per ker N coordinate (zeros past the rank).
    diagonal: Vec<BigInt>,
}

pub fn h1(a: &CyclicAction) -> H1 {
    let norm = norm_matrix(a);
    let coboundary = coboundary_matrix(a);
    let rank = a.rank();
    let kernel_rows = integer_kernel(&norm);
    let k = kernel_rows.len();
    let kernel = if k == 0 { IntMatrix::zeros(rank, 0) } else { IntMatrix::from_columns(rank, &kernel_rows).expect("kernel lengths") };
    let image_basis = row_lattice_basis(&coboundary.transpose());

    let mut h1 =
        H1 { group: FinAbGroup::trivial(), norm, coboundary, kernel, image_basis, to_smith: IntMatrix::identity(k), diagonal: Vec::new() };
    if k == 0 {
        return h1;
    }

    // N(1 - σ) = 0, so every coboundary has coordinates in the ker N basis.
    let coords: Vec<IntVector> =
        h1.coboundary.columns().iter().map(|b| solve_integral(&h1.kernel, b).expect("im(1-σ) lies in the saturated ker N")).collect();
    let c = IntMatrix::from_columns(k, &coords).expect("coordinate lengths");
    let snf = smith_normal_form(&c);
    let mut diagonal = snf.diagonal();
    diagonal.resize(k, BigInt::zero());
    // n·ker N ⊆ im(1 - σ), so the quotient is finite.
    assert!(diagonal.iter().all(|d| !d.is_zero()), "ker N / im(1-σ) has a free part");

    let u_inv = inverse(&snf.u.to_rational()).ok().and_then(|m| m.to_integer().ok()).expect("unimodular transform has an integral inverse");
    for (i, d) in diagonal.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let g = h1.kernel.mul_vec(&u_inv.column(i));
        h1.group.invariant_factors.push(d.clone());
        h1.group.generators.push(reduce_modulo_rows(&g, &h1.image_basis));
    }
    h1.to_smith = snf.u;
    h1.diagonal = diagonal;
    h1
}

impl H1 {
    pub fn norm(&self) -> &IntMatrix {
        &self.norm
    }

    /// Basis of ker N, one vector per entry.
    pub fn kernel_basis(&self) -> Vec<IntVector> {
        self.kernel.columns()
    }

    /// Basis of im(1 - σ) in Hermite form.
    pub fn image_basis(&self) -> Vec<IntVector> {
        self.image_basis.to_rows()
    }

    fn check(&self, v: &[BigInt]) -> Result<(), CohomologyError> {
        if v.len() != self.norm.rows() {
            return Err(CohomologyError::DimensionMismatch { expected: self.norm.rows(), found: v.len() });
        }
        if !self.norm.mul_vec(v).iter().all(Zero::is_zero) {
            return Err(CohomologyError::NotACocycle(format!("{v:?}")));
        }
        Ok(())
    }

    pub fn is_cocycle(&self, v: &[BigInt]) -> bool {
        self.check(v).is_ok()
    }

    /// Coordinates of the class of `v` in `⊕ ℤ/dᵢ`, each in `[0, dᵢ)`.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>, CohomologyError> {
        self.check(v)?;
        if self.group.is_trivial() {
            return Ok(Vec::new());
        }
        let c = solve_integral(&self.kernel, v).expect("cocycles have kernel coordinates");
        let x = self.to_smith.mul_vec(&c);
        Ok(x.iter().zip(&self.diagonal).filter(|(_, d)| !d.is_one()).map(|(xi, d)| xi.mod_floor(d)).collect())
    }

    /// True iff `v - w ∈ im(1 - σ)`.
    pub fn same_class(&self, v: &[BigInt], w: &[BigInt]) -> Result<bool, CohomologyError> {
        self.check(v)?;
        self.check(w)?;
        Ok(solve_integral(&self.coboundary, &vec_sub(v, w)).is_some())
    }

    /// Representative of the class of `v` reduced modulo im(1 - σ).
    pub fn reduce(&self, v: &[BigInt]) -> IntVector {
        reduce_modulo_rows(v, &self.image_basis)
    }

    /// True iff the classes of `vectors` generate the whole group.
    pub fn generates(&self, vectors: &[IntVector]) -> Result<bool, CohomologyError> {
        let k = self.group.invariant_factors.len();
        if k == 0 {
            return Ok(true);
        }
        let mut cols = Vec::with_capacity(vectors.len() + k);
        for v in vectors {
            cols.push(self.class_of(v)?);
        }
        for (i, d) in self.group.invariant_factors.iter().enumerate() {
            let mut e = vec![BigInt::zero(); k];
            e[i] = d.clone();
            cols.push(e);
        }
        let m = IntMatrix::from_columns(k, &cols).expect("class coordinate lengths");
        Ok(smith_normal_form(&m).diagonal().iter().all(One::is_one))
    }
}
