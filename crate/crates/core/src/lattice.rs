//! Integral lattices, the K3 lattice, embeddings between lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{determinant, dot, integer_kernel, inverse, signature, smith_normal_form, LinalgError, Signature};
use crate::{IntMatrix, IntVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("vector has length {found}, lattice has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{found} basis labels for a lattice of rank {expected}")]
    LabelCount { expected: usize, found: usize },
    #[error("{found} images supplied for a source of rank {expected}")]
    ImageCount { expected: usize, found: usize },
    #[error("embedding does not preserve the form at ({i},{j}): source has {expected}, images pair to {found}")]
    FormMismatch { i: usize, j: usize, expected: BigInt, found: BigInt },
    #[error("source lattice has a degenerate form")]
    DegenerateSource,
    #[error("lattice has a degenerate form")]
    DegenerateLattice,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("short vector search visited more than {limit} nodes")]
    EnumerationLimit { limit: usize },
}

/// A free ℤ-module of finite rank with an integral symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct Lattice {
    #[serde(with = "crate::serde_ext::matrix")]
    gram: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawLattice {
    #[serde(with = "crate::serde_ext::matrix")]
    gram: IntMatrix,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawLattice> for Lattice {
    type Error = LatticeError;

    fn try_from(raw: RawLattice) -> Result<Self, LatticeError> {
        let l = Lattice::new(raw.gram)?;
        match raw.labels {
            Some(labels) => l.with_labels(labels),
            None => Ok(l),
        }
    }
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(LatticeError::NotSymmetric { row, col });
        }
        Ok(Self { gram, labels: None })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(int_matrix(rows))
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: Vec<S>) -> Result<Self, LatticeError> {
        if labels.len() != self.rank() {
            return Err(LatticeError::LabelCount { expected: self.rank(), found: labels.len() });
        }
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        Ok(self)
    }

    /// Labels `s1, s2, ...`.
    pub fn with_default_labels(self, prefix: &str) -> Self {
        let labels = (1..=self.rank()).map(|i| format!("{prefix}{i}")).collect();
        Self { labels: Some(labels), ..self }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// Index of the basis vector carrying `label`.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// The basis vector named `label`. Panics on an unknown label.
    pub fn basis_vector(&self, label: &str) -> IntVector {
        let i = self.position(label).unwrap_or_else(|| panic!("no basis vector named {label}"));
        crate::exactla::unit_vector(self.rank(), i)
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// `vᵀ G w`.
    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(dot(v, &self.gram.mul_vec(w)))
    }

    pub fn square(&self, v: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.pair(v, v)
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram)
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram).expect("gram is symmetric by construction")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (&self.gram[(i, i)] % 2u8).is_zero())
    }

    /// Gram of the sublattice spanned by the columns of `inclusion`.
    pub fn induced(&self, inclusion: &IntMatrix) -> Lattice {
        assert_eq!(inclusion.rows(), self.rank(), "inclusion rows must match lattice rank");
        let g = &(&inclusion.transpose() * &self.gram) * inclusion;
        Lattice { gram: g, labels: None }
    }

    /// Orthogonal direct sum; labels are concatenated when both sides carry them.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.rank() + other.rank();
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        let o = self.rank();
        for i in 0..other.rank() {
            for j in 0..other.rank() {
                g[(o + i, o + j)] = other.gram[(i, j)].clone();
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Lattice { gram: g, labels }
    }

    /// Renders `v` as a signed combination of basis labels, e.g. `lambda2+3mu2`.
    pub fn format_vector(&self, v: &[BigInt]) -> String {
        format_combination(v, |i| self.label(i))
    }
}

/// Signed combination `c1 x1 + c2 x2 + ...` with unit coefficients elided.
pub fn format_combination(v: &[BigInt], name: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&a.to_string());
        }
        out.push_str(&name(i));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).expect("rectangular literal")
}

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// The 8x8 block `E`, with `-2` on the diagonal and the sparse off-diagonal
/// ones at (1,4), (2,3), (3,4), (4,5), (5,6), (6,7), (7,8).
pub fn e_block() -> Lattice {
    let mut g = IntMatrix::diagonal(&vec![BigInt::from(-2); 8]);
    for (i, j) in [(1, 4), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)] {
        g[(i - 1, j - 1)] = BigInt::one();
        g[(j - 1, i - 1)] = BigInt::one();
    }
    Lattice::new(g).expect("symmetric")
}

pub fn hyperbolic_plane() -> Lattice {
    Lattice::from_rows(&[&[0, 1], &[1, 0]]).expect("symmetric")
}

/// `E ⊥ E ⊥ H ⊥ H ⊥ H`, labelled `lambda1..lambda8`, `lambda1'..lambda8'`,
/// `mu1, mu2`, `mu1', mu2'`, `mu1'', mu2''`.
pub fn k3_lattice() -> Lattice {
    let e = e_block();
    let h = hyperbolic_plane();
    let g = e.direct_sum(&e).direct_sum(&h).direct_sum(&h).direct_sum(&h);
    let mut labels: Vec<String> = (1..=8).map(|i| format!("lambda{i}")).collect();
    labels.extend((1..=8).map(|i| format!("lambda{i}'")));
    for tick in ["", "'", "''"] {
        labels.push(format!("mu1{tick}"));
        labels.push(format!("mu2{tick}"));
    }
    g.with_labels(labels).expect("22 labels")
}

/// A form-preserving map of lattices, stored as the matrix whose `j`-th column
/// is the image of the `j`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: Lattice,
    target: Lattice,
    matrix: IntMatrix,
}

impl Embedding {
    pub fn from_images(source: Lattice, target: Lattice, images: &[IntVector]) -> Result<Self, LatticeError> {
        if images.len() != source.rank() {
            return Err(LatticeError::ImageCount { expected: source.rank(), found: images.len() });
        }
        for v in images {
            target.check_len(v)?;
        }
        let matrix = IntMatrix::from_columns(target.rank(), images).expect("lengths checked");
        Self::from_matrix(source, target, matrix)
    }

    pub fn from_matrix(source: Lattice, target: Lattice, matrix: IntMatrix) -> Result<Self, LatticeError> {
        if matrix.rows() != target.rank() {
            return Err(LatticeError::DimensionMismatch { expected: target.rank(), found: matrix.rows() });
        }
        if matrix.cols() != source.rank() {
            return Err(LatticeError::ImageCount { expected: source.rank(), found: matrix.cols() });
        }
        let pulled = target.induced(&matrix);
        for i in 0..source.rank() {
            for j in 0..source.rank() {
                if pulled.gram[(i, j)] != source.gram[(i, j)] {
                    return Err(LatticeError::FormMismatch {
                        i,
                        j,
                        expected: source.gram[(i, j)].clone(),
                        found: pulled.gram[(i, j)].clone(),
                    });
                }
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub fn source(&self) -> &Lattice {
        &self.source
    }

    pub fn target(&self) -> &Lattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn image(&self, j: usize) -> IntVector {
        self.matrix.column(j)
    }

    pub fn apply(&self, v: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(v)
    }

    pub fn is_primitive(&self) -> Primitivity {
        primitivity(&self.matrix)
    }

    /// The saturated sublattice of the target orthogonal to every image.
    pub fn orthogonal_complement(&self) -> Result<Sublattice, LatticeError> {
        if !self.source.is_nondegenerate() {
            return Err(LatticeError::DegenerateSource);
        }
        let constraints = &self.matrix.transpose() * &self.target.gram;
        let basis = integer_kernel(&constraints);
        let inclusion = if basis.is_empty() {
            IntMatrix::zeros(self.target.rank(), 0)
        } else {
            IntMatrix::from_columns(self.target.rank(), &basis).expect("kernel vectors have target length")
        };
        let lattice = self.target.induced(&inclusion);
        debug_assert_eq!(lattice.rank(), self.target.rank() - self.source.rank());
        Ok(Sublattice { lattice, inclusion })
    }
}

/// Nodes visited by [`short_vectors`] before it gives up.
pub const SHORT_VECTOR_LIMIT: usize = 5_000_000;

/// Every nonzero `x` with `xᵀ·G·x <= bound` for a positive definite `G`, one
/// from each `±x` pair (the last nonzero coordinate is positive). Exact
/// Fincke-Pohst enumeration over the rationals.
pub fn short_vectors(gram: &IntMatrix, bound: &BigInt, limit: usize) -> Result<Vec<IntVector>, LatticeError> {
    let n = gram.rows();
    if !gram.is_square() {
        return Err(LatticeError::NotSquare { rows: gram.rows(), cols: gram.cols() });
    }
    // xᵀGx = Σ q[i][i]·(x_i + Σ_{j>i} q[i][j]·x_j)²
    let mut q: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(gram[(i, j)].clone())).collect()).collect();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(LatticeError::NotPositiveDefinite);
        }
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &q[k][i] * &q[i][l];
                q[k][l] -= t;
            }
        }
    }
    let mut search = Search { q, n, limit, nodes: 0, x: vec![BigInt::zero(); n], out: Vec::new() };
    search.level(n, BigRational::from_integer(bound.clone()))?;
    Ok(search.out)
}

struct Search {
    q: Vec<Vec<BigRational>>,
    n: usize,
    limit: usize,
    nodes: usize,
    x: Vec<BigInt>,
    out: Vec<IntVector>,
}

impl Search {
    /// Chooses `x[i-1]` given `x[i..]` and the remaining budget.
    fn level(&mut self, i: usize, budget: BigRational) -> Result<(), LatticeError> {
        if i == 0 {
            if let Some(last) = self.x.iter().rev().find(|v| !v.is_zero()) {
                if last.is_positive() {
                    self.out.push(self.x.clone());
                }
            }
            return Ok(());
        }
        let i = i - 1;
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(LatticeError::EnumerationLimit { limit: self.limit });
        }
        let mut shift = BigRational::zero();
        for j in i + 1..self.n {
            shift += &self.q[i][j] * BigRational::from_integer(self.x[j].clone());
        }
        let center = -shift.clone();
        let radius2 = &budget / &self.q[i][i];
        // Float bounds only widen the range; membership is decided exactly.
        let c = center.to_f64().unwrap_or(0.0);
        let r = radius2.to_f64().unwrap_or(0.0).max(0.0).sqrt();
        let lo = (c - r).floor() as i64 - 1;
        let hi = (c + r).ceil() as i64 + 1;
        for v in lo..=hi {
            let t = BigRational::from_integer(BigInt::from(v)) + &shift;
            let used = &self.q[i][i] * &t * &t;
            if used > budget {
                continue;
            }
            self.x[i] = BigInt::from(v);
            self.level(i, &budget - used)?;
        }
        self.x[i] = BigInt::zero();
        Ok(())
    }
}

/// The classes `δ` with `δ² = -2` and `δ·s = 0`, one from each `±δ` pair.
/// Needs `s² > 0` and a hyperbolic form, so that `s^⊥` is negative definite.
pub fn roots_orthogonal_to(l: &Lattice, s: &[BigInt]) -> Result<Vec<IntVector>, LatticeError> {
    l.check_len(s)?;
    let gs = l.gram.mul_vec(s);
    let row = IntMatrix::from_rows(vec![gs]).expect("one row");
    let basis = integer_kernel(&row);
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let inclusion = IntMatrix::from_columns(l.rank(), &basis).expect("kernel vectors have lattice length");
    let minus = l.induced(&inclusion).gram.scale(&BigInt::from(-1));
    let two = BigInt::from(2);
    let found = short_vectors(&minus, &two, SHORT_VECTOR_LIMIT)?;
    Ok(found.into_iter().filter(|x| dot(x, &minus.mul_vec(x)) == two).map(|x| inclusion.mul_vec(&x)).collect())
}

/// SNF certificate for primitivity of a sublattice given by generator columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Primitivity {
    pub primitive: bool,
    #[serde(with = "crate::serde_ext::big_vec")]
    pub diagonal: Vec<BigInt>,
}

/// Primitivity of the span of the columns of `m`, which are assumed independent.
pub fn primitivity(m: &IntMatrix) -> Primitivity {
    let diagonal = smith_normal_form(m).diagonal();
    Primitivity { primitive: diagonal.iter().all(One::is_one), diagonal }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub lattice: Lattice,
    /// Target-rank x complement-rank; columns are the basis vectors.
    pub inclusion: IntMatrix,
}

/// A finite abelian group `⊕ ℤ/dᵢ` with one generator per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbGroup {
    #[serde(with = "crate::serde_ext::big_vec")]
    pub invariant_factors: Vec<BigInt>,
    #[serde(with = "crate::serde_ext::big_rows")]
    pub generators: Vec<IntVector>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self { invariant_factors: Vec::new(), generators: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// True when the group is `(ℤ/2)^k`, including `k = 0`.
    pub fn is_elementary_two(&self) -> bool {
        self.invariant_factors.iter().all(|d| *d == BigInt::from(2))
    }

    pub fn describe(&self) -> String {
        if self.is_trivial() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        parts.join(" + ")
    }
}

/// `L*/L ≅ ℤⁿ / G ℤⁿ`. Generators are vectors `x ∈ ℤⁿ`; the class of `x`
/// corresponds to `G⁻¹ x ∈ L*`.
pub fn discriminant_group(l: &Lattice) -> Result<FinAbGroup, LatticeError> {
    if !l.is_nondegenerate() {
        return Err(LatticeError::DegenerateLattice);
    }
    let snf = smith_normal_form(&l.gram);
    // u G v = d, so x ↦ u x identifies ℤⁿ/Gℤⁿ with ⊕ ℤ/dᵢ.
    let u_inv = inverse(&snf.u.to_rational())
        .and_then(|m| m.to_integer().map_err(|_| LinalgError::Singular))
        .expect("unimodular transform has an integral inverse");
    let mut group = FinAbGroup::trivial();
    for (i, d) in snf.diagonal().into_iter().enumerate() {
        if !d.is_one() {
            group.invariant_factors.push(d);
            group.generators.push(u_inv.column(i));
        }
    }
    Ok(group)
}

impl std::fmt::Display for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rank {} lattice, gram\n{}", self.rank(), self.gram)
    }
}
