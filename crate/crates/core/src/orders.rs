//! Order-level bookkeeping: the canonical class `K_A`, enumeration of
//! cocycle classes, ramification vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::H1;
use crate::exactla::vec_add;
use crate::k3cert::SurfaceTag;
use crate::lattice::{int_vector, FinAbGroup, Lattice, LatticeError};
use crate::{IntVector, RatVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("ramification index {0} is below 2")]
    BadIndex(u64),
    #[error("ramification divisor is zero")]
    ZeroDivisor,
    #[error("enumeration supports invariant factors equal to 2 only, found {0:?}")]
    UnsupportedTorsion(Vec<BigInt>),
    #[error("divisor {divisor} meets the fibre with multiplicity {multiplicity}")]
    NegativeMultiplicity { divisor: String, multiplicity: BigInt },
    #[error("cocycle class {0} is not in the kernel of the norm")]
    NotACocycle(String),
    #[error("canonical class has length {found}, surface has Picard rank {expected}")]
    CanonicalLength { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `Pic Z` with its canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub name: SurfaceTag,
    pub pic: Lattice,
    #[serde(with = "crate::serde_ext::big_vec")]
    pub canonical: IntVector,
}

impl SurfaceModel {
    pub fn new(name: SurfaceTag, pic: Lattice, canonical: IntVector) -> Result<Self, OrderError> {
        if canonical.len() != pic.rank() {
            return Err(OrderError::CanonicalLength { expected: pic.rank(), found: canonical.len() });
        }
        Ok(Self { name, pic, canonical })
    }

    /// `Pic ℙ² = ℤH`, `K = -3H`.
    pub fn p2() -> Self {
        let pic = Lattice::from_rows(&[&[1]]).expect("symmetric").with_labels(vec!["H"]).expect("one label");
        Self { name: SurfaceTag::P2, pic, canonical: int_vector(&[-3]) }
    }

    /// Basis of the two rulings, `K = (-2,-2)`.
    pub fn p1xp1() -> Self {
        let pic = Lattice::from_rows(&[&[0, 1], &[1, 0]]).expect("symmetric").with_labels(vec!["F1", "F2"]).expect("two labels");
        Self { name: SurfaceTag::P1xP1, pic, canonical: int_vector(&[-2, -2]) }
    }

    /// `𝔽ₘ` in the basis `(C₀, F)` with `C₀² = -m`; `K = -2C₀ - (m+2)F`.
    pub fn hirzebruch(m: u32) -> Self {
        let m = i64::from(m);
        let pic = Lattice::from_rows(&[&[-m, 1], &[1, 0]]).expect("symmetric").with_labels(vec!["C0", "F"]).expect("two labels");
        Self { name: SurfaceTag::Hirzebruch(m as u32), pic, canonical: int_vector(&[-2, -(m + 2)]) }
    }

    /// Ruled surface over an elliptic curve with `e = 0`, in the basis
    /// `(C₀, F)`; `K = -2C₀`.
    pub fn elliptic_ruled() -> Self {
        let pic = Lattice::from_rows(&[&[0, 1], &[1, 0]]).expect("symmetric").with_labels(vec!["C0", "F"]).expect("two labels");
        Self { name: SurfaceTag::Declared("elliptic-ruled".into()), pic, canonical: int_vector(&[-2, 0]) }
    }

    /// The standard model for a named surface, if there is one.
    pub fn standard(tag: &SurfaceTag) -> Option<Self> {
        match tag {
            SurfaceTag::P2 => Some(Self::p2()),
            SurfaceTag::P1xP1 => Some(Self::p1xp1()),
            SurfaceTag::Hirzebruch(m) => Some(Self::hirzebruch(*m)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationDatum {
    #[serde(rename = "class", with = "crate::serde_ext::big_vec")]
    pub divisor_class: IntVector,
    pub index: u64,
}

impl RamificationDatum {
    pub fn new(divisor_class: IntVector, index: u64) -> Result<Self, OrderError> {
        if index < 2 {
            return Err(OrderError::BadIndex(index));
        }
        if divisor_class.iter().all(Zero::is_zero) {
            return Err(OrderError::ZeroDivisor);
        }
        Ok(Self { divisor_class, index })
    }
}

/// Facts that lattice data cannot decide and are carried as assumptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// Every relation satisfies the overlap condition.
    Overlap,
    /// The cyclic cover of each ramification curve is irreducible, so the
    /// order is maximal.
    Maximality,
    /// Distinct cohomology classes give algebras distinct in the Brauer group
    /// of the function field; requires total ramification.
    Distinctness,
    /// The K3 surface with the given Picard lattice exists and the involution
    /// is induced by an automorphism.
    Realization,
    /// The cover of the surface with the declared branch data exists.
    CoverExistence,
}

impl Assumption {
    pub fn statement(&self) -> &'static str {
        match self {
            Assumption::Overlap => "all relations satisfy the overlap condition",
            Assumption::Maximality => "the cyclic cover of each ramification curve is irreducible, so the order is maximal",
            Assumption::Distinctness => "distinct H1 classes give algebras distinct in Br(K(Z)) (total ramification)",
            Assumption::Realization => "a K3 surface realizes the Picard lattice and the isometry is induced by an automorphism",
            Assumption::CoverExistence => "a cover with the declared branch data exists",
        }
    }
}

/// An order `A = ⊕ L_σ^i` at the level of its numerical data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderDescriptor {
    pub surface: SurfaceModel,
    pub ramification: Vec<RamificationDatum>,
    pub cocycle_class: IntVector,
    pub h1_context: FinAbGroup,
    pub assumptions: Vec<Assumption>,
}

impl OrderDescriptor {
    pub fn new(
        surface: SurfaceModel,
        ramification: Vec<RamificationDatum>,
        cocycle_class: IntVector,
        h1: &H1,
        assumptions: Vec<Assumption>,
    ) -> Result<Self, OrderError> {
        if !h1.is_cocycle(&cocycle_class) {
            return Err(OrderError::NotACocycle(format!("{cocycle_class:?}")));
        }
        for d in &ramification {
            surface.pic.square(&d.divisor_class)?;
        }
        Ok(Self { surface, ramification, cocycle_class, h1_context: h1.group.clone(), assumptions })
    }
}

/// `K_Z + Σ (1 - 1/eᵢ) Dᵢ`.
pub fn canonical_class(surface: &SurfaceModel, ramification: &[RamificationDatum]) -> RatVector {
    let mut k: RatVector = surface.canonical.iter().cloned().map(BigRational::from_integer).collect();
    for d in ramification {
        let coeff = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(d.index));
        for (ki, di) in k.iter_mut().zip(&d.divisor_class) {
            *ki = ki.clone() + coeff.clone() * BigRational::from_integer(di.clone());
        }
    }
    k
}

pub fn canonical_order_class(o: &OrderDescriptor) -> RatVector {
    canonical_class(&o.surface, &o.ramification)
}

/// True iff `k` pairs to zero with every basis vector of `pic`.
pub fn is_numerically_trivial(pic: &Lattice, k: &[BigRational]) -> bool {
    let g = pic.gram();
    (0..pic.rank()).all(|i| {
        (0..pic.rank())
            .map(|j| k[j].clone() * BigRational::from_integer(g[(j, i)].clone()))
            .fold(BigRational::zero(), |a, b| a + b)
            .is_zero()
    })
}

pub fn is_numerically_cy(o: &OrderDescriptor) -> bool {
    is_numerically_trivial(&o.surface.pic, &canonical_order_class(o))
}

/// Each `eᵢ` repeated `Dᵢ·F` times, sorted.
pub fn ramification_vector(surface: &SurfaceModel, ramification: &[RamificationDatum], fiber: &[BigInt]) -> Result<Vec<u64>, OrderError> {
    let mut out = Vec::new();
    for d in ramification {
        let mult = surface.pic.pair(&d.divisor_class, fiber)?;
        if mult.is_negative() {
            return Err(OrderError::NegativeMultiplicity { divisor: surface.pic.format_vector(&d.divisor_class), multiplicity: mult });
        }
        let count = mult.to_usize().expect("multiplicity fits in memory");
        out.extend(std::iter::repeat_n(d.index, count));
    }
    out.sort_unstable();
    Ok(out)
}

pub fn order_ramification_vector(o: &OrderDescriptor, fiber: &[BigInt]) -> Result<Vec<u64>, OrderError> {
    ramification_vector(&o.surface, &o.ramification, fiber)
}

/// Nonzero classes of an elementary abelian 2-group, as cocycle vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderEnumeration {
    /// `2^k - 1`.
    #[serde(with = "crate::serde_ext::big")]
    pub count: BigInt,
    /// At most `cap` representatives, in order of the bitmask `Σ mᵢ 2^i`.
    #[serde(with = "crate::serde_ext::big_rows")]
    pub classes: Vec<IntVector>,
    pub truncated: bool,
}

pub fn enumerate_orders(h1: &H1, cap: usize) -> Result<OrderEnumeration, OrderError> {
    let group = &h1.group;
    if !group.is_elementary_two() {
        return Err(OrderError::UnsupportedTorsion(group.invariant_factors.clone()));
    }
    let k = group.invariant_factors.len();
    let count = (BigInt::one() << k) - BigInt::one();
    let mut classes = Vec::new();
    let rank = h1.norm().rows();
    let mut mask: u128 = 1;
    while classes.len() < cap && BigInt::from(mask) <= count {
        let mut v = vec![BigInt::zero(); rank];
        for (i, g) in group.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v = vec_add(&v, g);
            }
        }
        classes.push(h1.reduce(&v));
        mask += 1;
    }
    let truncated = BigInt::from(classes.len()) < count;
    Ok(OrderEnumeration { count, classes, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::CyclicAction;
    use crate::cohomology::h1;
    use crate::lattice::int_matrix;

    fn datum(v: &[i64], e: u64) -> RamificationDatum {
        RamificationDatum::new(int_vector(v), e).unwrap()
    }

    fn rat(v: &[i64]) -> RatVector {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn double_covers_are_numerically_trivial() {
        let cases = [
            (SurfaceModel::p2(), datum(&[6], 2)),
            (SurfaceModel::p1xp1(), datum(&[4, 4], 2)),
            (SurfaceModel::hirzebruch(2), datum(&[4, 8], 2)),
        ];
        for (surface, d) in cases {
            let k = canonical_class(&surface, &[d]);
            assert!(k.iter().all(Zero::is_zero), "{k:?}");
            assert!(is_numerically_trivial(&surface.pic, &k));
        }
    }

    #[test]
    fn wrong_index_and_empty_data_are_not_trivial() {
        let p2 = SurfaceModel::p2();
        let k = canonical_class(&p2, &[datum(&[6], 3)]);
        assert_eq!(k, rat(&[1]));
        assert!(!is_numerically_trivial(&p2.pic, &k));
        assert_eq!(canonical_class(&p2, &[]), rat(&[-3]));
    }

    #[test]
    fn datum_validation() {
        assert_eq!(RamificationDatum::new(int_vector(&[1]), 1).unwrap_err(), OrderError::BadIndex(1));
        assert_eq!(RamificationDatum::new(int_vector(&[0, 0]), 2).unwrap_err(), OrderError::ZeroDivisor);
    }

    #[test]
    fn hirzebruch_canonical() {
        let f2 = SurfaceModel::hirzebruch(2);
        assert_eq!(f2.canonical, int_vector(&[-2, -4]));
        // K² = 8 on every Hirzebruch surface
        for m in 0..5 {
            let s = SurfaceModel::hirzebruch(m);
            assert_eq!(s.pic.square(&s.canonical).unwrap(), BigInt::from(8));
        }
    }

    #[test]
    fn elliptic_ruled_ramification_vectors() {
        let z = SurfaceModel::elliptic_ruled();
        let fiber = int_vector(&[0, 1]);
        let cases: [(&[RamificationDatum], &[u64]); 4] = [
            (&[datum(&[4, 0], 2)], &[2, 2, 2, 2]),
            (&[datum(&[3, 0], 3)], &[3, 3, 3]),
            (&[datum(&[1, 0], 2), datum(&[2, 0], 4)], &[2, 4, 4]),
            (&[datum(&[1, 0], 2), datum(&[1, 0], 3), datum(&[1, 0], 6)], &[2, 3, 6]),
        ];
        for (data, expected) in cases {
            assert_eq!(ramification_vector(&z, data, &fiber).unwrap(), expected);
            assert!(canonical_class(&z, data).iter().all(Zero::is_zero));
        }
        let err = ramification_vector(&z, &[datum(&[-1, 0], 2)], &fiber).unwrap_err();
        assert!(matches!(err, OrderError::NegativeMultiplicity { .. }));
    }

    #[test]
    fn enumeration_counts_and_caps() {
        let l = Lattice::new(crate::IntMatrix::identity(3)).unwrap();
        let minus = CyclicAction::new(l, crate::IntMatrix::identity(3).scale(&BigInt::from(-1)), 2).unwrap();
        let h = h1(&minus);
        let all = enumerate_orders(&h, 256).unwrap();
        assert_eq!(all.count, BigInt::from(7));
        assert_eq!(all.classes.len(), 7);
        assert!(!all.truncated);
        let some = enumerate_orders(&h, 3).unwrap();
        assert_eq!(some.classes.len(), 3);
        assert!(some.truncated);

        let a2 = Lattice::from_rows(&[&[2, -1], &[-1, 2]]).unwrap();
        let rot = CyclicAction::new(a2, int_matrix(&[&[0, -1], &[1, -1]]), 3).unwrap();
        let h = h1(&rot);
        assert_eq!(h.group.invariant_factors, vec![BigInt::from(3)]);
        assert!(matches!(enumerate_orders(&h, 10), Err(OrderError::UnsupportedTorsion(_))));
    }
}
