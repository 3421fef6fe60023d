//! Lattice-level certificates for effectivity, ampleness and nodality on a K3
//! surface, plus identification of the quotient surface.
//!
//! Nothing here computes sections of line bundles. Effectivity is propagated
//! by two rules: a class of square at least -2 is effective or anti-effective,
//! and it is taken to be effective when it meets an admissible partner
//! positively. Admissible partners are the certified ample class, classes
//! certified irreducible, seeds, and effective classes of square -2.
//!
//! The pairing rule alone is a heuristic. What makes the chain sound is the
//! root check in [`CertStore::certify_ample`]: a class of positive square
//! with no -2 class orthogonal to it is ample after changing the marking, and
//! then every pairing step agrees with the sign of the ample degree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::CyclicAction;
use crate::exactla::{integer_kernel, unit_vector, vec_add, vec_sub};
use crate::lattice::{roots_orthogonal_to, Lattice, LatticeError};
use crate::IntVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("class {vector} has square {square} < -2")]
    SquareTooNegative { vector: String, square: BigInt },
    #[error("missing hypothesis: {0}")]
    UncertifiedHypothesis(String),
    #[error("no ample class has been certified")]
    NoAmpleCertificate,
    #[error("class {0} is not certified effective")]
    NotEffective(String),
    #[error("quotient identification supports ranks 1 and 2, got {0}")]
    UnsupportedRank(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Why a partner was allowed in a pairing step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartnerKind {
    Ample,
    Irreducible,
    Seed,
    /// Effective with square -2.
    Rigid,
}

/// The rule that admitted a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    WlogSeed,
    PositivePairing {
        #[serde(with = "crate::serde_ext::big_vec")]
        partner: IntVector,
        partner_kind: PartnerKind,
        #[serde(with = "crate::serde_ext::big")]
        pairing: BigInt,
    },
    AmpleLemma {
        #[serde(with = "crate::serde_ext::big")]
        square: BigInt,
    },
    AmpleDegreeOne {
        #[serde(with = "crate::serde_ext::big")]
        square: BigInt,
    },
    Asserted,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::WlogSeed => "wlog-seed",
            Rule::PositivePairing { .. } => "positive-pairing",
            Rule::AmpleLemma { .. } => "ample-lemma",
            Rule::AmpleDegreeOne { .. } => "ample-degree-one",
            Rule::Asserted => "asserted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Effective,
    Ample,
    Nodal,
    Irreducible,
}

/// One line of the certificate chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertEntry {
    pub step: usize,
    pub claim: Claim,
    #[serde(with = "crate::serde_ext::big_vec")]
    pub vector: IntVector,
    pub class: String,
    #[serde(flatten)]
    pub rule: Rule,
}

/// Pairings checked by the ampleness lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleReport {
    #[serde(with = "crate::serde_ext::big_vec")]
    pub class: IntVector,
    #[serde(with = "crate::serde_ext::big")]
    pub square: BigInt,
    /// `s·sᵢ` for each generator.
    #[serde(with = "crate::serde_ext::big_vec")]
    pub generator_pairings: Vec<BigInt>,
    /// `s·(s - sᵢ)` for each generator.
    #[serde(with = "crate::serde_ext::big_vec")]
    pub complement_pairings: Vec<BigInt>,
    pub ample: bool,
    /// `s·v > 0` for every class certified effective when the lemma was applied.
    pub positive_on_store: bool,
    /// Classes `δ` with `δ² = -2` and `s·δ = 0`, up to sign. When there are
    /// none, `s` lies inside a chamber of the positive cone and is ample for
    /// a marking changed by reflections and `±1`.
    #[serde(with = "crate::serde_ext::big_rows")]
    pub orthogonal_roots: Vec<IntVector>,
}

#[derive(Clone, Debug)]
pub struct CertStore {
    lattice: Lattice,
    seeds: Vec<IntVector>,
    effective: Vec<IntVector>,
    irreducible: Vec<IntVector>,
    nodal: Vec<IntVector>,
    ample: Option<IntVector>,
    chain: Vec<CertEntry>,
}

impl CertStore {
    pub fn new(lattice: Lattice) -> Self {
        Self {
            lattice,
            seeds: Vec::new(),
            effective: Vec::new(),
            irreducible: Vec::new(),
            nodal: Vec::new(),
            ample: None,
            chain: Vec::new(),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn chain(&self) -> &[CertEntry] {
        &self.chain
    }

    pub fn effective(&self) -> &[IntVector] {
        &self.effective
    }

    pub fn nodal(&self) -> &[IntVector] {
        &self.nodal
    }

    pub fn ample(&self) -> Option<&IntVector> {
        self.ample.as_ref()
    }

    pub fn is_effective(&self, v: &[BigInt]) -> bool {
        self.effective.iter().any(|e| e == v)
    }

    pub fn is_nodal(&self, v: &[BigInt]) -> bool {
        self.nodal.iter().any(|e| e == v)
    }

    pub fn is_irreducible(&self, v: &[BigInt]) -> bool {
        self.irreducible.iter().any(|e| e == v)
    }

    fn record(&mut self, claim: Claim, v: &[BigInt], rule: Rule) {
        let entry = CertEntry { step: self.chain.len() + 1, claim, vector: v.to_vec(), class: self.lattice.format_vector(v), rule };
        self.chain.push(entry);
    }

    pub fn seed_effective(&mut self, v: &[BigInt]) -> Result<(), CertError> {
        let square = self.lattice.square(v)?;
        if square < BigInt::from(-2) {
            return Err(CertError::SquareTooNegative { vector: self.lattice.format_vector(v), square });
        }
        if !self.is_effective(v) {
            self.effective.push(v.to_vec());
            self.seeds.push(v.to_vec());
            self.record(Claim::Effective, v, Rule::WlogSeed);
        }
        Ok(())
    }

    /// Records `v` as irreducible by outside assertion.
    pub fn assert_irreducible(&mut self, v: &[BigInt]) -> Result<(), CertError> {
        self.lattice.square(v)?;
        if !self.is_irreducible(v) {
            self.irreducible.push(v.to_vec());
            self.record(Claim::Irreducible, v, Rule::Asserted);
        }
        Ok(())
    }

    fn partners(&self) -> Vec<(IntVector, PartnerKind)> {
        let mut out = Vec::new();
        if let Some(a) = &self.ample {
            out.push((a.clone(), PartnerKind::Ample));
        }
        out.extend(self.irreducible.iter().map(|v| (v.clone(), PartnerKind::Irreducible)));
        out.extend(self.seeds.iter().map(|v| (v.clone(), PartnerKind::Seed)));
        let minus_two = BigInt::from(-2);
        for v in &self.effective {
            if self.lattice.square(v).is_ok_and(|s| s == minus_two) {
                out.push((v.clone(), PartnerKind::Rigid));
            }
        }
        out
    }

    /// Tries to certify `v` effective. Returns whether it is now certified.
    pub fn derive_effective(&mut self, v: &[BigInt]) -> Result<bool, CertError> {
        let square = self.lattice.square(v)?;
        if self.is_effective(v) {
            return Ok(true);
        }
        if square < BigInt::from(-2) {
            return Ok(false);
        }
        let minus: IntVector = v.iter().map(|x| -x).collect();
        if self.is_effective(&minus) {
            return Ok(false);
        }
        for (partner, kind) in self.partners() {
            let p = self.lattice.pair(v, &partner)?;
            if p.is_positive() {
                self.effective.push(v.to_vec());
                self.record(Claim::Effective, v, Rule::PositivePairing { partner, partner_kind: kind, pairing: p });
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Applies [`derive_effective`](Self::derive_effective) to `candidates`
    /// until nothing changes. Returns the classes still uncertified.
    pub fn propagate(&mut self, candidates: &[IntVector]) -> Result<Vec<IntVector>, CertError> {
        loop {
            let before = self.effective.len();
            for v in candidates {
                self.derive_effective(v)?;
            }
            if self.effective.len() == before {
                break;
            }
        }
        Ok(candidates.iter().filter(|v| !self.is_effective(v)).cloned().collect())
    }

    /// The ampleness lemma: `s² > 0`, `s·sᵢ > 0` and `s·(s - sᵢ) > 0` for every
    /// generator, given that every `sᵢ` and `s - sᵢ` is certified effective.
    /// Also requires that no `-2` class is orthogonal to `s`.
    pub fn certify_ample(&mut self, s: &[BigInt], generators: &[IntVector]) -> Result<AmpleReport, CertError> {
        let square = self.lattice.square(s)?;
        if !self.is_effective(s) {
            self.derive_effective(s)?;
        }
        let mut generator_pairings = Vec::new();
        let mut complement_pairings = Vec::new();
        for g in generators {
            if !self.is_effective(g) {
                return Err(CertError::UncertifiedHypothesis(format!(
                    "generator {} is not certified effective",
                    self.lattice.format_vector(g)
                )));
            }
            let rest = vec_sub(s, g);
            if !self.is_effective(&rest) {
                return Err(CertError::UncertifiedHypothesis(format!("{} is not certified effective", self.lattice.format_vector(&rest))));
            }
            generator_pairings.push(self.lattice.pair(s, g)?);
            complement_pairings.push(self.lattice.pair(s, &rest)?);
        }
        let orthogonal_roots = if square.is_positive() { roots_orthogonal_to(&self.lattice, s)? } else { Vec::new() };
        let ample = square.is_positive()
            && generator_pairings.iter().all(Signed::is_positive)
            && complement_pairings.iter().all(Signed::is_positive)
            && orthogonal_roots.is_empty();
        let mut positive_on_store = true;
        if ample {
            for v in &self.effective {
                if !v.iter().all(Zero::is_zero) && !self.lattice.pair(s, v)?.is_positive() {
                    positive_on_store = false;
                }
            }
            self.ample = Some(s.to_vec());
            self.record(Claim::Ample, s, Rule::AmpleLemma { square: square.clone() });
        }
        Ok(AmpleReport { class: s.to_vec(), square, generator_pairings, complement_pairings, ample, positive_on_store, orthogonal_roots })
    }

    /// `v` is nodal when it is effective, `v² = -2` and it has degree 1 against
    /// the ample class, which forces irreducibility.
    pub fn certify_nodal(&mut self, v: &[BigInt]) -> Result<bool, CertError> {
        let Some(ample) = self.ample.clone() else {
            return Err(CertError::NoAmpleCertificate);
        };
        if !self.is_effective(v) {
            return Err(CertError::NotEffective(self.lattice.format_vector(v)));
        }
        let square = self.lattice.square(v)?;
        let degree = self.lattice.pair(&ample, v)?;
        if square != BigInt::from(-2) || !degree.is_one() {
            return Ok(false);
        }
        if !self.is_nodal(v) {
            self.nodal.push(v.to_vec());
            if !self.is_irreducible(v) {
                self.irreducible.push(v.to_vec());
            }
            self.record(Claim::Nodal, v, Rule::AmpleDegreeOne { square });
        }
        Ok(true)
    }
}

/// The quotient surface named by its Picard lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SurfaceTag {
    P2,
    P1xP1,
    /// `𝔽ₘ`, the Hirzebruch surface with a section of square `-m`.
    Hirzebruch(u32),
    /// A surface whose Picard lattice is declared rather than identified.
    Declared(String),
    Undetermined,
}

impl fmt::Display for SurfaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceTag::P2 => f.write_str("P2"),
            SurfaceTag::P1xP1 => f.write_str("P1xP1"),
            SurfaceTag::Hirzebruch(m) => write!(f, "F{m}"),
            SurfaceTag::Declared(name) => write!(f, "declared:{name}"),
            SurfaceTag::Undetermined => f.write_str("Undetermined"),
        }
    }
}

impl From<SurfaceTag> for String {
    fn from(t: SurfaceTag) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for SurfaceTag {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        match s.as_str() {
            "P2" => Ok(SurfaceTag::P2),
            "P1xP1" => Ok(SurfaceTag::P1xP1),
            "Undetermined" => Ok(SurfaceTag::Undetermined),
            _ => {
                if let Some(name) = s.strip_prefix("declared:") {
                    return Ok(SurfaceTag::Declared(name.to_string()));
                }
                s.strip_prefix('F')
                    .and_then(|m| m.parse().ok())
                    .map(SurfaceTag::Hirzebruch)
                    .ok_or_else(|| format!("unknown surface tag {s:?}"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientId {
    pub tag: SurfaceTag,
    /// Human-readable trace of the rules that fired.
    pub rules: Vec<String>,
}

/// Names the quotient surface from the halved invariant form and the images of
/// known irreducible curves of negative square.
pub fn identify_quotient(halved: &Lattice, irreducible_images: &[IntVector]) -> Result<QuotientId, CertError> {
    let mut rules = Vec::new();
    match halved.rank() {
        1 => {
            if halved.gram()[(0, 0)].is_one() {
                rules.push("rank 1 with form (1): Pic Z = ZH, H^2 = 1".to_string());
                Ok(QuotientId { tag: SurfaceTag::P2, rules })
            } else {
                rules.push(format!("rank 1 with form ({}) matches no supported surface", halved.gram()[(0, 0)]));
                Ok(QuotientId { tag: SurfaceTag::Undetermined, rules })
            }
        }
        2 => {
            let det = halved.determinant();
            if det != BigInt::from(-1) {
                rules.push(format!("rank 2 form has determinant {det}, not -1"));
                return Ok(QuotientId { tag: SurfaceTag::Undetermined, rules });
            }
            let even = halved.is_even();
            let mut negatives = Vec::new();
            for v in irreducible_images {
                let sq = halved.square(v)?;
                if sq.is_negative() {
                    negatives.push((v.clone(), sq));
                }
            }
            match negatives.as_slice() {
                [] if even => {
                    rules.push("even unimodular indefinite rank 2 form is the hyperbolic plane".to_string());
                    rules.push(
                        "no irreducible curve of negative square supplied: F0 = P1xP1 by the base-point-free pencil argument".to_string(),
                    );
                    Ok(QuotientId { tag: SurfaceTag::P1xP1, rules })
                }
                [(v, sq)] => {
                    let m: u32 = match (-sq).try_into() {
                        Ok(m) => m,
                        Err(_) => {
                            rules.push(format!("irreducible image of square {sq} is out of range"));
                            return Ok(QuotientId { tag: SurfaceTag::Undetermined, rules });
                        }
                    };
                    if m.is_multiple_of(2) != even {
                        rules.push(format!("parity of the form does not match an irreducible curve of square -{m}"));
                        return Ok(QuotientId { tag: SurfaceTag::Undetermined, rules });
                    }
                    rules.push(format!(
                        "irreducible curve {} of square -{m}: the only Hirzebruch surface with such a curve is F{m}",
                        halved.format_vector(v)
                    ));
                    Ok(QuotientId { tag: SurfaceTag::Hirzebruch(m), rules })
                }
                [] => {
                    rules.push("odd unimodular rank 2 form without a negative irreducible curve".to_string());
                    Ok(QuotientId { tag: SurfaceTag::Undetermined, rules })
                }
                _ => {
                    rules.push(format!("{} irreducible curves of negative square supplied", negatives.len()));
                    Ok(QuotientId { tag: SurfaceTag::Undetermined, rules })
                }
            }
        }
        r => Err(CertError::UnsupportedRank(r)),
    }
}

/// Unordered pairs `{sᵢ, φ(sᵢ)}` with `sᵢ` a nodal basis vector,
/// `sᵢ + φ(sᵢ) = target` and `sᵢ·φ(sᵢ) = product`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentCount {
    pub count: usize,
    /// Basis indices (0-based) of the nodal generator in each pair.
    pub generators: Vec<usize>,
}

pub fn tangent_check(a: &CyclicAction, store: &CertStore, target: &[BigInt], product: &BigInt) -> Result<TangentCount, CertError> {
    let l = a.lattice();
    let n = l.rank();
    let mut seen: Vec<IntVector> = Vec::new();
    let mut generators = Vec::new();
    for i in 0..n {
        let s: IntVector = unit_vector(n, i);
        if !store.is_nodal(&s) {
            continue;
        }
        let image = a.apply(&s);
        if vec_add(&s, &image) != target || l.pair(&s, &image)? != *product {
            continue;
        }
        if seen.iter().any(|v| *v == s || *v == image) {
            continue;
        }
        seen.push(s);
        seen.push(image);
        generators.push(i);
    }
    Ok(TangentCount { count: generators.len(), generators })
}

/// Tritangent count for the double plane: fixed class `s1 + s2`, product 3.
pub fn tritangent_check(a: &CyclicAction, store: &CertStore) -> Result<TangentCount, CertError> {
    let n = a.rank();
    let target = vec_add(&unit_vector(n, 0), &unit_vector(n, 1));
    tangent_check(a, store, &target, &BigInt::from(3))
}

/// Solutions of `R·v = 0` for each `v` in `orthogonal_to`, and the form on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSolution {
    #[serde(with = "crate::serde_ext::big_rows")]
    pub basis: Vec<IntVector>,
    #[serde(with = "crate::serde_ext::matrix")]
    pub gram: crate::IntMatrix,
    /// Every solution has square 0, so none can be a (-2)-curve.
    pub forces_square_zero: bool,
}

pub fn orthogonality_system(l: &Lattice, orthogonal_to: &[IntVector]) -> Result<ConstraintSolution, CertError> {
    let rows: Vec<IntVector> = orthogonal_to.iter().map(|v| l.gram().mul_vec(v)).collect();
    for v in orthogonal_to {
        l.square(v)?;
    }
    let m = crate::IntMatrix::from_rows(rows).map_err(|_| LatticeError::DimensionMismatch { expected: l.rank(), found: 0 })?;
    let basis = integer_kernel(&m);
    let inclusion = if basis.is_empty() {
        crate::IntMatrix::zeros(l.rank(), 0)
    } else {
        crate::IntMatrix::from_columns(l.rank(), &basis).expect("kernel lengths")
    };
    let gram = l.induced(&inclusion).gram().clone();
    let forces_square_zero = gram.is_zero();
    Ok(ConstraintSolution { basis, gram, forces_square_zero })
}
