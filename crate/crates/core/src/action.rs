//! Cyclic isometry groups acting on lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{integer_kernel, inverse, vec_add};
use crate::lattice::{Embedding, Lattice, Sublattice};
use crate::{IntMatrix, IntVector, RatMatrix};

/// Orders are searched up to this bound when reporting the true order of a
/// matrix whose declared order is wrong.
const ORDER_SEARCH_LIMIT: u64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action matrix is {rows}x{cols}, lattice has rank {rank}")]
    Shape { rows: usize, cols: usize, rank: usize },
    #[error("declared order must be at least 1")]
    ZeroOrder,
    #[error("matrix does not preserve the form at ({row},{col})")]
    NotIsometry { row: usize, col: usize },
    #[error("declared order {declared} but the matrix has order {}", actual.map_or("greater than 64 or infinite".to_string(), |a| a.to_string()))]
    WrongOrder { declared: u64, actual: Option<u64> },
    #[error("partial isometry acts on a lattice different from the embedding source")]
    SourceMismatch,
    #[error("sublattice images together with the complement do not span a full-rank sublattice")]
    DegenerateSource,
    #[error("gram entry ({row},{col}) is odd and cannot be halved")]
    OddEntry { row: usize, col: usize },
    #[error("partial norm of {k} terms requested for an action of order {order}")]
    TooManyTerms { k: u64, order: u64 },
    #[error("vector has length {found}, lattice has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// True iff `Pᵀ G P = G`.
pub fn check_isometry(l: &Lattice, p: &IntMatrix) -> bool {
    first_form_violation(l, p).is_none()
}

fn first_form_violation(l: &Lattice, p: &IntMatrix) -> Option<(usize, usize)> {
    if p.rows() != l.rank() || p.cols() != l.rank() {
        return Some((0, 0));
    }
    let g = l.gram();
    let pulled = &(&p.transpose() * g) * p;
    (0..l.rank()).flat_map(|i| (0..l.rank()).map(move |j| (i, j))).find(|&(i, j)| pulled[(i, j)] != g[(i, j)])
}

/// Smallest `m ≥ 1` with `p^m = I`, searched up to `limit`.
pub fn matrix_order(p: &IntMatrix, limit: u64) -> Option<u64> {
    let mut acc = p.clone();
    for m in 1..=limit {
        if acc.is_identity() {
            return Some(m);
        }
        acc = &acc * p;
    }
    None
}

/// An isometry `σ` of finite order `n`, generating `G = ⟨σ⟩`. Columns of the
/// matrix are the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAction {
    lattice: Lattice,
    matrix: IntMatrix,
    order: u64,
}

impl CyclicAction {
    pub fn new(lattice: Lattice, matrix: IntMatrix, order: u64) -> Result<Self, ActionError> {
        if matrix.rows() != lattice.rank() || matrix.cols() != lattice.rank() {
            return Err(ActionError::Shape { rows: matrix.rows(), cols: matrix.cols(), rank: lattice.rank() });
        }
        if order == 0 {
            return Err(ActionError::ZeroOrder);
        }
        if let Some((row, col)) = first_form_violation(&lattice, &matrix) {
            return Err(ActionError::NotIsometry { row, col });
        }
        let actual = matrix_order(&matrix, ORDER_SEARCH_LIMIT.max(order));
        if actual != Some(order) {
            return Err(ActionError::WrongOrder { declared: order, actual });
        }
        Ok(Self { lattice, matrix, order })
    }

    /// Builds the action from the images of the basis vectors.
    pub fn from_images(lattice: Lattice, images: &[IntVector], order: u64) -> Result<Self, ActionError> {
        let rank = lattice.rank();
        if images.len() != rank || images.iter().any(|v| v.len() != rank) {
            return Err(ActionError::Shape { rows: rank, cols: images.len(), rank });
        }
        let m = IntMatrix::from_columns(rank, images).expect("lengths checked");
        Self::new(lattice, m, order)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn apply(&self, v: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(v)
    }

    /// `P⁻¹ σ P`, the same action written in the basis given by the columns of
    /// `p`. `None` when `p` is not unimodular.
    pub fn conjugate(&self, p: &IntMatrix) -> Option<CyclicAction> {
        let p_inv = inverse(&p.to_rational()).ok()?.to_integer().ok()?;
        let m = &(&p_inv * &self.matrix) * p;
        let lattice = self.lattice.induced(p);
        CyclicAction::new(lattice, m, self.order).ok()
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), ActionError> {
        if v.len() != self.rank() {
            return Err(ActionError::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// Saturated sublattice of vectors fixed by `σ`, with its induced form.
    pub fn fixed_sublattice(&self) -> Sublattice {
        let shifted = &self.matrix - &IntMatrix::identity(self.rank());
        let basis = integer_kernel(&shifted);
        let inclusion = if basis.is_empty() {
            IntMatrix::zeros(self.rank(), 0)
        } else {
            IntMatrix::from_columns(self.rank(), &basis).expect("kernel vectors have lattice length")
        };
        Sublattice { lattice: self.lattice.induced(&inclusion), inclusion }
    }

    /// `v + σv + … + σ^{k-1}v`.
    pub fn partial_norm(&self, v: &[BigInt], k: u64) -> Result<IntVector, ActionError> {
        self.check_len(v)?;
        if k > self.order {
            return Err(ActionError::TooManyTerms { k, order: self.order });
        }
        let mut sum = vec![BigInt::zero(); self.rank()];
        let mut term = v.to_vec();
        for _ in 0..k {
            sum = vec_add(&sum, &term);
            term = self.apply(&term);
        }
        Ok(sum)
    }
}

/// Gram divided by two. Fails on any odd entry.
pub fn halved_form(fixed: &Lattice) -> Result<Lattice, ActionError> {
    let g = fixed.gram();
    let two = BigInt::from(2);
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            if !(&g[(i, j)] % &two).is_zero() {
                return Err(ActionError::OddEntry { row: i, col: j });
            }
        }
    }
    Ok(Lattice::new(g.map(|x| x / &two)).expect("halving keeps symmetry"))
}

/// An isometry of `S` together with an embedding `S ⊂ Λ`, to be extended by
/// `-1` on the orthogonal complement.
#[derive(Clone, Debug)]
pub struct PartialIsometry {
    pub pic_part: CyclicAction,
    pub embedding: Embedding,
}

impl PartialIsometry {
    pub fn new(pic_part: CyclicAction, embedding: Embedding) -> Result<Self, ActionError> {
        if pic_part.lattice().gram() != embedding.source().gram() {
            return Err(ActionError::SourceMismatch);
        }
        Ok(Self { pic_part, embedding })
    }

    /// The scale used on the complement. Only `-1` is implemented.
    pub fn complement_scale(&self) -> i64 {
        -1
    }

    pub fn extends_to_ambient(&self) -> Result<Extension, ActionError> {
        let target = self.embedding.target();
        let mut ext = extension_candidate(target, self.embedding.matrix(), self.pic_part.matrix())?;
        if let Some(w) = &ext.witness {
            let images = self.embedding.matrix();
            let complement = self.complement_basis();
            ext.checks = Some(WitnessChecks {
                isometry: check_isometry(target, w),
                order_divides: w.pow(self.pic_part.order()).is_identity(),
                intertwines: (w * images) == (images * self.pic_part.matrix()),
                negates_complement: complement.iter().all(|t| w.mul_vec(t) == t.iter().map(|x| -x).collect::<Vec<_>>()),
            });
        }
        Ok(ext)
    }

    fn complement_basis(&self) -> Vec<IntVector> {
        let constraints = &self.embedding.matrix().transpose() * self.embedding.target().gram();
        integer_kernel(&constraints)
    }
}

/// Properties verified on an integral extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub isometry: bool,
    /// `W^n = I` for the order `n` of the partial action.
    pub order_divides: bool,
    /// `W γ = γ φ`.
    pub intertwines: bool,
    pub negates_complement: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.isometry && self.order_divides && self.intertwines && self.negates_complement
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonIntegral {
    pub row: usize,
    pub col: usize,
    pub value: BigRational,
}

/// Outcome of the extension test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    /// The unique rational extension in the ambient basis.
    pub rational: RatMatrix,
    pub witness: Option<IntMatrix>,
    pub first_non_integral: Option<NonIntegral>,
    pub checks: Option<WitnessChecks>,
}

impl Extension {
    pub fn is_integral(&self) -> bool {
        self.witness.is_some()
    }

    /// Integral and every witness property holds.
    pub fn verified(&self) -> bool {
        self.witness.is_some() && self.checks.is_some_and(|c| c.all())
    }
}

/// The ℚ-linear map on the ambient lattice that acts by `pic_matrix` on the
/// span of the columns of `images` and by `-1` on their orthogonal
/// complement, tested for integrality.
///
/// No form-compatibility between `images` and `pic_matrix` is assumed, so this
/// also runs on inconsistent data.
pub fn extension_candidate(target: &Lattice, images: &IntMatrix, pic_matrix: &IntMatrix) -> Result<Extension, ActionError> {
    let n = target.rank();
    let r = images.cols();
    if images.rows() != n || pic_matrix.rows() != r || pic_matrix.cols() != r {
        return Err(ActionError::Shape { rows: pic_matrix.rows(), cols: pic_matrix.cols(), rank: r });
    }
    let constraints = &images.transpose() * target.gram();
    let complement = integer_kernel(&constraints);
    if complement.len() + r != n {
        return Err(ActionError::DegenerateSource);
    }
    let mut b = images.clone();
    if !complement.is_empty() {
        b = b.hstack(&IntMatrix::from_columns(n, &complement).expect("kernel lengths")).expect("same height");
    }
    let b_inv = inverse(&b.to_rational()).map_err(|_| ActionError::DegenerateSource)?;
    let mut block = IntMatrix::zeros(n, n);
    for i in 0..r {
        for j in 0..r {
            block[(i, j)] = pic_matrix[(i, j)].clone();
        }
    }
    for i in r..n {
        block[(i, i)] = BigInt::from(-1);
    }
    let rational = &(&b.to_rational() * &block.to_rational()) * &b_inv;
    match rational.to_integer() {
        Ok(w) => Ok(Extension { rational, witness: Some(w), first_non_integral: None, checks: None }),
        Err((row, col)) => {
            let value = rational[(row, col)].clone();
            Ok(Extension { rational, witness: None, first_non_integral: Some(NonIntegral { row, col, value }), checks: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::vec_scale;
    use crate::lattice::{int_matrix, int_vector, k3_lattice};

    fn s2() -> Lattice {
        Lattice::from_rows(&[&[-2, 3, 0], &[3, -2, 1], &[0, 1, -2]]).unwrap()
    }

    // Columns are images: φ(s_i) = s1 + s2 - s_i.
    fn phi3() -> IntMatrix {
        int_matrix(&[&[0, 1, 1], &[1, 0, 1], &[0, 0, -1]])
    }

    fn gamma3(third: &str) -> IntMatrix {
        let k3 = k3_lattice();
        let v = |s: &str| k3.basis_vector(s);
        let mut s3 = v("lambda3");
        if third == "perturbed" {
            s3 = vec_add(&s3, &v("mu2"));
        }
        let cols = vec![vec_add(&v("lambda1"), &v("mu1")), vec_add(&v("lambda2"), &vec_scale(&v("mu2"), &BigInt::from(3))), s3];
        IntMatrix::from_columns(22, &cols).unwrap()
    }

    #[test]
    fn isometry_checks() {
        let l = s2();
        assert!(check_isometry(&l, &IntMatrix::identity(3)));
        assert!(check_isometry(&l, &phi3()));
        let swap = int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(!check_isometry(&l, &swap));
    }

    #[test]
    fn constructor_rejects_bad_orders_and_non_isometries() {
        let l = s2();
        assert!(CyclicAction::new(l.clone(), phi3(), 2).is_ok());
        assert_eq!(CyclicAction::new(l.clone(), phi3(), 4).unwrap_err(), ActionError::WrongOrder { declared: 4, actual: Some(2) });
        assert!(matches!(CyclicAction::new(l.clone(), IntMatrix::identity(3), 2), Err(ActionError::WrongOrder { .. })));
        let swap = int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(matches!(CyclicAction::new(l, swap, 2), Err(ActionError::NotIsometry { .. })));
        let rot = int_matrix(&[&[0, -1], &[1, -1]]);
        let a2 = Lattice::from_rows(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(CyclicAction::new(a2, rot, 3).unwrap().order(), 3);
    }

    #[test]
    fn three_node_involution_extends() {
        let k3 = k3_lattice();
        let emb = Embedding::from_matrix(s2(), k3, gamma3("plain")).unwrap();
        let act = CyclicAction::new(s2(), phi3(), 2).unwrap();
        let ext = PartialIsometry::new(act, emb).unwrap().extends_to_ambient().unwrap();
        assert!(ext.verified(), "{:?}", ext.checks);
    }

    #[test]
    fn perturbed_embedding_breaks_the_form_and_the_extension() {
        let k3 = k3_lattice();
        assert!(Embedding::from_matrix(s2(), k3.clone(), gamma3("perturbed")).is_err());
        let ext = extension_candidate(&k3, &gamma3("perturbed"), &phi3()).unwrap();
        assert!(!ext.is_integral());
        let bad = ext.first_non_integral.unwrap();
        assert!(!bad.value.is_integer());
    }

    #[test]
    fn fixed_lattice_and_halving() {
        let act = CyclicAction::new(s2(), phi3(), 2).unwrap();
        let fixed = act.fixed_sublattice();
        assert_eq!(fixed.inclusion.columns(), vec![int_vector(&[1, 1, 0])]);
        assert_eq!(fixed.lattice.gram(), &int_matrix(&[&[2]]));
        assert_eq!(halved_form(&fixed.lattice).unwrap().gram(), &int_matrix(&[&[1]]));
        let odd = Lattice::from_rows(&[&[2, 1], &[1, 0]]).unwrap();
        assert_eq!(halved_form(&odd).unwrap_err(), ActionError::OddEntry { row: 0, col: 1 });
    }

    #[test]
    fn partial_norms() {
        let act = CyclicAction::new(s2(), phi3(), 2).unwrap();
        let v = int_vector(&[1, 0, -1]);
        assert_eq!(act.partial_norm(&v, 1).unwrap(), v);
        assert_eq!(act.partial_norm(&v, 2).unwrap(), int_vector(&[0, 0, 0]));
        assert_eq!(act.partial_norm(&v, 0).unwrap(), int_vector(&[0, 0, 0]));
        assert!(matches!(act.partial_norm(&v, 3), Err(ActionError::TooManyTerms { .. })));
    }

    #[test]
    fn conjugation_by_unimodular_matrix() {
        let act = CyclicAction::new(s2(), phi3(), 2).unwrap();
        let p = int_matrix(&[&[1, 1, 0], &[0, 1, 0], &[0, 2, 1]]);
        let c = act.conjugate(&p).unwrap();
        assert_eq!(c.fixed_sublattice().lattice.rank(), 1);
        assert!(act.conjugate(&int_matrix(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]])).is_none());
    }
}
