//! Structured results of a scenario run, with JSON and text renderings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::action::WitnessChecks;
use crate::exactla::Signature;
use crate::k3cert::{AmpleReport, CertEntry, ConstraintSolution, QuotientId, SurfaceTag, TangentCount};
use crate::lattice::{format_combination, FinAbGroup, Primitivity};
use crate::orders::{Assumption, OrderEnumeration, RamificationDatum};
use crate::serde_ext::{big, big_rows, big_vec, matrix, opt_matrix, rat_vec};
use crate::{IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// Not run because an earlier check failed.
    #[serde(rename = "SKIP")]
    Skipped,
    /// Not part of this scenario.
    #[serde(rename = "N/A")]
    NotApplicable,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::NotApplicable => "N/A",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeSection {
    pub rank: usize,
    pub labels: Vec<String>,
    #[serde(with = "matrix")]
    pub gram: IntMatrix,
    pub signature: Signature,
    #[serde(with = "big")]
    pub determinant: BigInt,
    pub discriminant: Option<FinAbGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSection {
    /// `s1 -> lambda1+mu1` style lines.
    pub images: Vec<String>,
    pub form_mismatch: Option<String>,
    pub primitivity: Option<Primitivity>,
    pub complement_rank: Option<usize>,
    pub complement_signature: Option<Signature>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSection {
    pub order: u64,
    pub isometry: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonIntegralEntry {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSection {
    pub integral: bool,
    pub checks: Option<WitnessChecks>,
    pub first_non_integral: Option<NonIntegralEntry>,
    #[serde(with = "opt_matrix")]
    pub witness: Option<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSection {
    #[serde(with = "big_rows")]
    pub basis: Vec<IntVector>,
    pub basis_text: Vec<String>,
    #[serde(with = "matrix")]
    pub gram: IntMatrix,
    #[serde(with = "opt_matrix")]
    pub halved_gram: Option<IntMatrix>,
    pub quotient: Option<QuotientId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertSection {
    pub chain: Vec<CertEntry>,
    pub uncertified: Vec<String>,
    pub ample: Option<AmpleReport>,
    pub nodal: Vec<String>,
    pub not_nodal: Vec<String>,
    pub tangents: Option<TangentCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Section {
    pub group: FinAbGroup,
    pub description: String,
    pub generators_text: Vec<String>,
    #[serde(with = "big_rows")]
    pub norm_kernel: Vec<IntVector>,
    #[serde(with = "big_rows")]
    pub coboundary_image: Vec<IntVector>,
    pub named_generators: Option<Vec<String>>,
    pub named_generators_cover: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdersSection {
    #[serde(flatten)]
    pub enumeration: OrderEnumeration,
    pub classes_text: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalSection {
    pub surface: SurfaceTag,
    #[serde(with = "matrix")]
    pub pic_gram: IntMatrix,
    #[serde(with = "big_vec")]
    pub canonical: IntVector,
    pub ramification: Vec<RamificationDatum>,
    #[serde(with = "rat_vec")]
    pub k_a: Vec<BigRational>,
    pub numerically_trivial: bool,
    pub ramification_vector: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionEntry {
    pub tag: Assumption,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub sublattice: SublatticeSection,
    pub embedding: Option<EmbeddingSection>,
    pub action: ActionSection,
    pub extension: Option<ExtensionSection>,
    pub fixed: Option<FixedSection>,
    pub certificates: Option<CertSection>,
    pub h1: Option<H1Section>,
    pub orders: Option<OrdersSection>,
    pub canonical: Option<CanonicalSection>,
    pub orthogonality: Option<ConstraintSolution>,
    pub assumptions: Vec<AssumptionEntry>,
}

/// Everything a run produced, before the verdict is computed.
#[derive(Clone, Debug)]
pub struct ScenarioResults {
    pub scenario: String,
    pub checks: Vec<Check>,
    pub sublattice: SublatticeSection,
    pub embedding: Option<EmbeddingSection>,
    pub action: ActionSection,
    pub extension: Option<ExtensionSection>,
    pub fixed: Option<FixedSection>,
    pub certificates: Option<CertSection>,
    pub h1: Option<H1Section>,
    pub orders: Option<OrdersSection>,
    pub canonical: Option<CanonicalSection>,
    pub orthogonality: Option<ConstraintSolution>,
    pub assumptions: Vec<Assumption>,
}

/// A run passes when no check failed or was skipped.
pub fn build_report(r: ScenarioResults) -> Report {
    let passed = r.checks.iter().all(|c| matches!(c.status, Status::Pass | Status::NotApplicable));
    let mut assumptions = r.assumptions;
    assumptions.dedup();
    Report {
        scenario: r.scenario,
        passed,
        checks: r.checks,
        sublattice: r.sublattice,
        embedding: r.embedding,
        action: r.action,
        extension: r.extension,
        fixed: r.fixed,
        certificates: r.certificates,
        h1: r.h1,
        orders: r.orders,
        canonical: r.canonical,
        orthogonality: r.orthogonality,
        assumptions: assumptions.into_iter().map(|tag| AssumptionEntry { tag, statement: tag.statement().to_string() }).collect(),
    }
}

/// `lambda3'` as `λ3'`, `mu2` as `μ2`.
pub fn pretty_labels(s: &str) -> String {
    s.replace("lambda", "λ").replace("mu", "μ")
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.check(name).map(|c| c.status)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "scenario {}: {verdict}", self.scenario);
        let _ = writeln!(
            out,
            "  S: rank {}, signature {}, det {}",
            self.sublattice.rank, self.sublattice.signature, self.sublattice.determinant
        );
        if let Some(e) = &self.embedding {
            for line in &e.images {
                let _ = writeln!(out, "  {}", pretty_labels(line));
            }
        }
        let _ = writeln!(out);
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(out, "  {:<4}  {:<width$}  {}", c.status.label(), c.name, pretty_labels(&c.detail));
        }
        if let Some(certs) = &self.certificates {
            let _ = writeln!(out, "\ncertificate chain:");
            for e in &certs.chain {
                let why = match &e.rule {
                    crate::k3cert::Rule::PositivePairing { partner, partner_kind, pairing } => {
                        let name = format_combination(partner, |i| {
                            self.sublattice.labels.get(i).cloned().unwrap_or_else(|| format!("e{}", i + 1))
                        });
                        format!("pairs {pairing} with {} class {}", format!("{partner_kind:?}").to_lowercase(), pretty_labels(&name))
                    }
                    r => r.name().to_string(),
                };
                let _ = writeln!(out, "  {:>3}. {:?} {}  [{}]", e.step, e.claim, pretty_labels(&e.class), why);
            }
        }
        if let Some(o) = &self.orders {
            let shown = o.classes_text.len();
            let _ = writeln!(
                out,
                "\norders: {} nonzero class(es){}",
                o.enumeration.count,
                if o.enumeration.truncated { format!(" (first {shown} listed)") } else { String::new() }
            );
            for t in &o.classes_text {
                let _ = writeln!(out, "  L = {t}");
            }
        }
        if !self.assumptions.is_empty() {
            let _ = writeln!(out, "\nassumed:");
            for a in &self.assumptions {
                let _ = writeln!(out, "  - {}", a.statement);
            }
        }
        out
    }
}

/// Smith form `U·M·V = D` of a single matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfReport {
    #[serde(with = "matrix")]
    pub input: IntMatrix,
    #[serde(with = "big_vec")]
    pub diagonal: IntVector,
    pub rank: usize,
    #[serde(with = "matrix")]
    pub u: IntMatrix,
    #[serde(with = "matrix")]
    pub d: IntMatrix,
    #[serde(with = "matrix")]
    pub v: IntMatrix,
    /// Whether `U·M·V = D` with `U`, `V` unimodular was re-checked.
    pub verified: bool,
}

impl SnfReport {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = crate::exactla::smith_normal_form(m);
        let verified = &(&snf.u * m) * &snf.v == snf.d
            && crate::exactla::determinant(&snf.u).abs().is_one()
            && crate::exactla::determinant(&snf.v).abs().is_one();
        Self { input: m.clone(), diagonal: snf.diagonal(), rank: snf.rank(), u: snf.u, d: snf.d, v: snf.v, verified }
    }
}
