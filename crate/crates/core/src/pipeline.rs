//! The verification pipeline: embed, check primitivity and signature, extend
//! the involution, pass to the quotient, certify, compute H¹, enumerate orders
//! and check the canonical class.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::action::{extension_candidate, halved_form, CyclicAction, PartialIsometry};
use crate::cohomology::{h1, H1};
use crate::exactla::{row_lattice_basis, unit_vector, vec_sub, Signature};
use crate::k3cert::{identify_quotient, orthogonality_system, tangent_check, CertStore, SurfaceTag};
use crate::lattice::{discriminant_group, Embedding, Lattice, LatticeError};
use crate::orders::{canonical_class, enumerate_orders, is_numerically_trivial, ramification_vector, Assumption, SurfaceModel};
use crate::report::{
    build_report, ActionSection, CanonicalSection, CertSection, Check, EmbeddingSection, ExtensionSection, FixedSection, H1Section,
    NonIntegralEntry, OrdersSection, Report, ScenarioResults, Status, SublatticeSection,
};
use crate::scenario::{Scenario, ScenarioError};
use crate::{IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Maximum number of order classes listed explicitly.
    pub list_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { list_cap: 256 }
    }
}

fn input_error(module: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Pipeline { module, message: message.into() }
}

fn check_lengths(module: &'static str, what: &str, vectors: &[IntVector], n: usize) -> Result<(), ScenarioError> {
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(input_error(module, format!("{what}[{i}] has length {}, expected {n}", v.len())));
        }
    }
    Ok(())
}

/// Shape checks that turn malformed input into an input error rather than a
/// failed mathematical check.
fn validate(s: &Scenario, ambient: Option<&Lattice>) -> Result<(), ScenarioError> {
    let n = s.sublattice.rank();
    let m = &s.involution.matrix;
    if m.rows() != n || m.cols() != n {
        return Err(input_error("action", format!("involution matrix is {}x{}, sublattice has rank {n}", m.rows(), m.cols())));
    }
    match (ambient, &s.embedding) {
        (Some(a), Some(images)) => {
            if images.len() != n {
                return Err(input_error("lattice", format!("{} embedding images for a sublattice of rank {n}", images.len())));
            }
            check_lengths("lattice", "embedding", images, a.rank())?;
        }
        (None, Some(_)) => return Err(input_error("lattice", "embedding given without an ambient lattice")),
        (Some(_), None) => return Err(input_error("lattice", "ambient lattice given without an embedding")),
        (None, None) => {}
    }
    if let Some(seeds) = &s.effective_seed {
        check_lengths("k3cert", "effective_seed", &seeds.vectors(), n)?;
    }
    if let Some(a) = &s.ample_candidate {
        check_lengths("k3cert", "ample_candidate", std::slice::from_ref(a), n)?;
    }
    check_lengths("k3cert", "extra_effective", &s.extra_effective, n)?;
    if let Some(v) = &s.nodal_classes {
        check_lengths("k3cert", "nodal_classes", v, n)?;
    }
    if let Some(v) = &s.h1_generators {
        check_lengths("cohomology", "h1_generators", v, n)?;
    }
    if let Some(t) = &s.tangent_check {
        check_lengths("k3cert", "tangent_check.target", std::slice::from_ref(&t.target), n)?;
    }
    if let Some(v) = &s.orthogonality_check {
        check_lengths("k3cert", "orthogonality_check", v, n)?;
    }
    if let Some(od) = &s.order_data {
        if let Some(pic) = &od.pic {
            check_lengths("orders", "order_data.canonical", std::slice::from_ref(&od.canonical), pic.rank())?;
            let classes: Vec<IntVector> = od.ramification.iter().map(|d| d.divisor_class.clone()).collect();
            check_lengths("orders", "order_data.ramification.class", &classes, pic.rank())?;
        }
        for d in &od.ramification {
            if d.index < 2 {
                return Err(input_error("orders", format!("ramification index {} is below 2", d.index)));
            }
        }
    }
    Ok(())
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.0.push(Check { name: name.to_string(), status, detail: detail.into() });
    }

    fn skip(&mut self, names: &[&str]) {
        for n in names {
            self.push(n, Status::Skipped, "upstream check failed");
        }
    }
}

fn same_row_lattice(a: &[IntVector], b: &[IntVector], n: usize) -> bool {
    let to_m = |v: &[IntVector]| {
        if v.is_empty() {
            IntMatrix::zeros(0, n)
        } else {
            IntMatrix::from_rows(v.to_vec()).expect("equal lengths")
        }
    };
    row_lattice_basis(&to_m(a)) == row_lattice_basis(&to_m(b))
}

const DOWNSTREAM: [&str; 12] = [
    "fixed-lattice",
    "halved-form",
    "quotient",
    "effectivity",
    "ample",
    "nodal",
    "tangents",
    "h1",
    "h1-generators",
    "orders",
    "canonical-class",
    "orthogonality",
];

pub fn run(s: &Scenario, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let ambient = s.ambient.as_ref().map(|a| a.lattice()).transpose()?;
    validate(s, ambient.as_ref())?;

    let mut sub = s.sublattice.clone();
    if sub.labels().is_none() {
        sub = sub.with_default_labels("s");
    }
    let n = sub.rank();
    let fmt = |v: &[BigInt]| sub.format_vector(v);
    let expect = s.expect.clone().unwrap_or_default();
    let mut checks = Checks(Vec::new());
    let mut assumptions = Vec::new();

    let sig = sub.signature();
    let sublattice = SublatticeSection {
        rank: n,
        labels: (0..n).map(|i| sub.label(i)).collect(),
        gram: sub.gram().clone(),
        signature: sig,
        determinant: sub.determinant(),
        discriminant: discriminant_group(&sub).ok(),
    };

    // Embedding, primitivity, complement.
    let mut embedding_section = None;
    let mut embedding: Option<Embedding> = None;
    let mut embedding_ok = true;
    if let (Some(amb), Some(images)) = (&ambient, &s.embedding) {
        assumptions.push(Assumption::Realization);
        let lines = images.iter().enumerate().map(|(i, v)| format!("{} -> {}", sub.label(i), amb.format_vector(v))).collect();
        let mut sec =
            EmbeddingSection { images: lines, form_mismatch: None, primitivity: None, complement_rank: None, complement_signature: None };
        match Embedding::from_images(sub.clone(), amb.clone(), images) {
            Ok(e) => {
                checks.push("embedding", Status::Pass, "images reproduce the form of S");
                let p = e.is_primitive();
                let diag: Vec<String> = p.diagonal.iter().map(ToString::to_string).collect();
                checks.push("primitive", Status::from_bool(p.primitive), format!("SNF diagonal ({})", diag.join(",")));
                embedding_ok &= p.primitive;
                sec.primitivity = Some(p);
                match e.orthogonal_complement() {
                    Ok(c) => {
                        let csig = c.lattice.signature();
                        let asig = amb.signature();
                        let ok = c.lattice.rank() + n == amb.rank()
                            && csig.null == 0
                            && csig.positive + sig.positive == asig.positive
                            && csig.negative + sig.negative == asig.negative;
                        checks.push("complement", Status::from_bool(ok), format!("rank {}, signature {csig}", c.lattice.rank()));
                        sec.complement_rank = Some(c.lattice.rank());
                        sec.complement_signature = Some(csig);
                    }
                    Err(err) => checks.push("complement", Status::Fail, err.to_string()),
                }
                embedding = Some(e);
            }
            Err(err) => {
                embedding_ok = false;
                if let LatticeError::FormMismatch { i, j, .. } = &err {
                    sec.form_mismatch = Some(format!("{} . {}: {err}", sub.label(*i), sub.label(*j)));
                }
                checks.push("embedding", Status::Fail, err.to_string());
                checks.skip(&["primitive", "complement"]);
            }
        }
        embedding_section = Some(sec);
    } else {
        assumptions.push(Assumption::CoverExistence);
        for name in ["embedding", "primitive", "complement"] {
            checks.push(name, Status::NotApplicable, "no ambient lattice");
        }
    }

    let hyperbolic = sig.is_hyperbolic();
    let sig_expected = expect.signature.is_none_or(|(p, q)| sig == Signature::new(p, q, 0));
    checks.push("signature", Status::from_bool(hyperbolic && sig_expected), format!("{sig}"));

    // The action on S.
    let action = CyclicAction::new(sub.clone(), s.involution.matrix.clone(), s.involution.order);
    let action_section =
        ActionSection { order: s.involution.order, isometry: action.is_ok(), error: action.as_ref().err().map(|e| format!("action: {e}")) };
    match &action {
        Ok(_) => checks.push("isometry", Status::Pass, format!("isometry of S of order {}", s.involution.order)),
        Err(e) => checks.push("isometry", Status::Fail, format!("action: {e}")),
    }

    // Extension to the ambient lattice.
    let mut extension_section = None;
    let mut extension_ok = true;
    match (&ambient, &s.embedding, &action) {
        (Some(amb), Some(images), _) => {
            let ext = match (&embedding, &action) {
                (Some(e), Ok(a)) => PartialIsometry::new(a.clone(), e.clone()).and_then(|p| p.extends_to_ambient()).map(|x| (x, true)),
                (None, _) if s.involution.matrix.rows() == n => {
                    let m = IntMatrix::from_columns(amb.rank(), images).expect("validated lengths");
                    extension_candidate(amb, &m, &s.involution.matrix).map(|x| (x, false))
                }
                _ => Err(crate::action::ActionError::SourceMismatch),
            };
            match ext {
                Ok((ext, consistent)) => {
                    let verified = consistent && ext.verified();
                    extension_ok = verified;
                    let detail = if verified {
                        format!("integral; W is an isometry, W^{} = 1, W.gamma = gamma.phi, W = -1 on the complement", s.involution.order)
                    } else if let Some(bad) = &ext.first_non_integral {
                        format!("entry ({},{}) of the rational extension is {}", bad.row, bad.col, bad.value)
                    } else if !consistent {
                        "embedding does not preserve the form; integral candidate rejected".to_string()
                    } else {
                        format!("witness checks failed: {:?}", ext.checks)
                    };
                    checks.push("extension", Status::from_bool(verified), detail);
                    extension_section = Some(ExtensionSection {
                        integral: ext.is_integral(),
                        checks: ext.checks,
                        first_non_integral: ext.first_non_integral.map(|b| NonIntegralEntry {
                            row: b.row,
                            col: b.col,
                            value: b.value.to_string(),
                        }),
                        witness: ext.witness,
                    });
                }
                Err(e) => {
                    extension_ok = false;
                    if action.is_err() {
                        checks.skip(&["extension"]);
                    } else {
                        checks.push("extension", Status::Fail, format!("action: {e}"));
                    }
                }
            }
        }
        _ => checks.push("extension", Status::NotApplicable, "no ambient lattice"),
    }

    let action = match action {
        Ok(a) if embedding_ok && extension_ok => a,
        _ => {
            checks.skip(&DOWNSTREAM);
            return Ok(build_report(ScenarioResults {
                scenario: s.display_name(),
                checks: checks.0,
                sublattice,
                embedding: embedding_section,
                action: action_section,
                extension: extension_section,
                fixed: None,
                certificates: None,
                h1: None,
                orders: None,
                canonical: None,
                orthogonality: None,
                assumptions,
            }));
        }
    };

    // Invariant lattice and the quotient surface.
    let fixed = action.fixed_sublattice();
    let basis = fixed.inclusion.columns();
    let fixed_ok = !basis.is_empty() && expect.fixed_basis.as_ref().is_none_or(|e| *e == basis);
    let basis_text: Vec<String> = basis.iter().map(|v| fmt(v)).collect();
    checks.push("fixed-lattice", Status::from_bool(fixed_ok), format!("rank {}: <{}>", basis.len(), basis_text.join(", ")));
    // Halving and identifying the quotient use the double cover of a K3
    // surface, so they need the ambient lattice.
    let halved = if ambient.is_none() {
        checks.push("halved-form", Status::NotApplicable, "no ambient lattice");
        checks.push("quotient", Status::NotApplicable, "no ambient lattice");
        None
    } else {
        match halved_form(&fixed.lattice).map(|h| h.clone().with_labels(basis_text.clone()).unwrap_or(h)) {
            Ok(h) => Some(h),
            Err(e) => {
                checks.push("halved-form", Status::Fail, e.to_string());
                checks.skip(&["quotient"]);
                None
            }
        }
    };
    let quotient = match &halved {
        Some(h) => {
            let ok = expect.halved_gram.as_ref().is_none_or(|g| g == h.gram());
            checks.push("halved-form", Status::from_bool(ok), format!("gram {}", h.gram()));
            let hints = s.surface_hints.clone().unwrap_or_default();
            match identify_quotient(h, &hints.irreducible_neg2_images) {
                Ok(q) => {
                    let ok = q.tag != SurfaceTag::Undetermined && expect.quotient.as_ref().is_none_or(|t| *t == q.tag);
                    checks.push("quotient", Status::from_bool(ok), format!("{} ({})", q.tag, q.rules.join("; ")));
                    Some(q)
                }
                Err(e) => {
                    checks.push("quotient", Status::Fail, e.to_string());
                    None
                }
            }
        }
        None => None,
    };
    let fixed_section = FixedSection {
        basis: basis.clone(),
        basis_text,
        gram: fixed.lattice.gram().clone(),
        halved_gram: halved.as_ref().map(|h| h.gram().clone()),
        quotient: quotient.clone(),
    };

    // Certificates.
    let generators: Vec<IntVector> = (0..n).map(|i| unit_vector(n, i)).collect();
    let mut certificates = None;
    if let Some(seeds) = &s.effective_seed {
        let mut store = CertStore::new(sub.clone());
        let mut seed_error = None;
        for v in seeds.vectors() {
            if let Err(e) = store.seed_effective(&v) {
                seed_error = Some(e.to_string());
            }
        }
        let mut candidates = generators.clone();
        candidates.extend(generators.iter().map(|g| action.apply(g)));
        candidates.extend(s.extra_effective.iter().cloned());
        if let Some(a) = &s.ample_candidate {
            candidates.extend(generators.iter().map(|g| vec_sub(a, g)));
        }
        let nodal_candidates: Vec<IntVector> = match &s.nodal_classes {
            Some(v) => v.clone(),
            None => {
                let mut out: Vec<IntVector> = Vec::new();
                for v in &candidates[..2 * n + s.extra_effective.len()] {
                    if sub.square(v).is_ok_and(|q| q == BigInt::from(-2)) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                out
            }
        };
        candidates.extend(nodal_candidates.iter().cloned());
        let mut dedup: Vec<IntVector> = Vec::new();
        for c in candidates {
            if !dedup.contains(&c) {
                dedup.push(c);
            }
        }
        // Seed, propagate, attempt the ample class, propagate again.
        let first = store.propagate(&dedup).expect("validated lengths");
        let mut ample_report = None;
        if let Some(a) = &s.ample_candidate {
            match store.certify_ample(a, &generators) {
                Ok(rep) => {
                    let roots = match rep.orthogonal_roots.as_slice() {
                        [] => "no -2 class orthogonal".to_string(),
                        r => format!("orthogonal -2 classes: {}", r.iter().map(|v| fmt(v)).collect::<Vec<_>>().join(", ")),
                    };
                    let detail = format!(
                        "{} : s^2 = {}, s.s_i = ({}), s.(s-s_i) = ({}), {}",
                        fmt(a),
                        rep.square,
                        rep.generator_pairings.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                        rep.complement_pairings.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                        roots
                    );
                    checks_after_effectivity(&mut checks, &first, &fmt, seed_error.as_deref());
                    checks.push("ample", Status::from_bool(rep.ample && rep.positive_on_store), detail);
                    ample_report = Some(rep);
                }
                Err(e) => {
                    checks_after_effectivity(&mut checks, &first, &fmt, seed_error.as_deref());
                    checks.push("ample", Status::Fail, e.to_string());
                }
            }
        } else {
            checks_after_effectivity(&mut checks, &first, &fmt, seed_error.as_deref());
            checks.push("ample", Status::NotApplicable, "no ample candidate");
        }
        let uncertified = store.propagate(&dedup).expect("validated lengths");

        let mut nodal = Vec::new();
        let mut not_nodal = Vec::new();
        if store.ample().is_some() {
            for v in &nodal_candidates {
                match store.certify_nodal(v) {
                    Ok(true) => nodal.push(fmt(v)),
                    Ok(false) => not_nodal.push(fmt(v)),
                    Err(e) => not_nodal.push(format!("{} ({e})", fmt(v))),
                }
            }
            let detail = if not_nodal.is_empty() {
                format!("{} classes: {}", nodal.len(), nodal.join(", "))
            } else {
                format!("not certified: {}", not_nodal.join(", "))
            };
            checks.push("nodal", Status::from_bool(not_nodal.is_empty() && !nodal.is_empty()), detail);
        } else {
            checks.skip(&["nodal"]);
        }

        let mut tangents = None;
        match &s.tangent_check {
            Some(t) if store.ample().is_some() => match tangent_check(&action, &store, &t.target, &t.product) {
                Ok(tc) => {
                    let ok = expect.tangent_count.map_or(tc.count > 0, |e| e == tc.count);
                    checks.push(
                        "tangents",
                        Status::from_bool(ok),
                        format!("{} pairs s_i + phi(s_i) = {} with product {}", tc.count, fmt(&t.target), t.product),
                    );
                    tangents = Some(tc);
                }
                Err(e) => checks.push("tangents", Status::Fail, e.to_string()),
            },
            Some(_) => checks.skip(&["tangents"]),
            None => checks.push("tangents", Status::NotApplicable, "no tangent check requested"),
        }

        certificates = Some(CertSection {
            chain: store.chain().to_vec(),
            uncertified: uncertified.iter().map(|v| fmt(v)).collect(),
            ample: ample_report,
            nodal,
            not_nodal,
            tangents,
        });
    } else {
        for name in ["effectivity", "ample", "nodal", "tangents"] {
            checks.push(name, Status::NotApplicable, "no effective seed");
        }
    }

    // Cohomology.
    let h = h1(&action);
    let group = h.group.clone();
    let h1_ok = expect.h1_invariant_factors.as_ref().is_none_or(|f| *f == group.invariant_factors);
    let mut h1_detail = group.describe();
    if let Some(kb) = &expect.norm_kernel_basis {
        let ok = same_row_lattice(kb, &h.kernel_basis(), n);
        h1_detail.push_str(&format!(
            "; ker N = <{}> {}",
            kb.iter().map(|v| fmt(v)).collect::<Vec<_>>().join(", "),
            if ok { "as expected" } else { "differs from expectation" }
        ));
        checks.push("h1", Status::from_bool(h1_ok && ok), h1_detail);
    } else {
        checks.push("h1", Status::from_bool(h1_ok), h1_detail);
    }
    let h1_section = h1_section(&h, &sub, s.h1_generators.as_deref());
    match (&h1_section.named_generators, h1_section.named_generators_cover) {
        (Some(text), Some(cover)) => {
            checks.push(
                "h1-generators",
                Status::from_bool(cover),
                format!("{} {} every class", text.join(", "), if cover { "reach" } else { "do not reach" }),
            );
        }
        _ => checks.push("h1-generators", Status::NotApplicable, "no named generators"),
    }

    // Orders.
    let orders_section = match enumerate_orders(&h, opts.list_cap) {
        Ok(en) => {
            let mut ok = expect.order_count.as_ref().is_none_or(|c| *c == en.count);
            if !en.truncated {
                ok &= BigInt::from(en.classes.len()) == en.count;
            }
            let mut seen = Vec::new();
            for c in &en.classes {
                let class = h.class_of(c).expect("enumerated classes are cocycles");
                if class.iter().all(Zero::is_zero) || seen.contains(&class) {
                    ok = false;
                }
                seen.push(class);
            }
            let listed = if en.truncated { format!(", {} listed", en.classes.len()) } else { String::new() };
            checks.push("orders", Status::from_bool(ok), format!("{} nonzero class(es){listed}", en.count));
            assumptions.extend([Assumption::Overlap, Assumption::Maximality, Assumption::Distinctness]);
            Some(OrdersSection { classes_text: en.classes.iter().map(|v| fmt(v)).collect(), enumeration: en })
        }
        Err(e) => {
            checks.push("orders", Status::Fail, e.to_string());
            None
        }
    };

    // Canonical class of the order.
    let mut canonical_section = None;
    match &s.order_data {
        Some(od) => {
            let pic = od.pic.clone().or_else(|| halved.clone());
            let tag = od.surface.clone().or_else(|| quotient.as_ref().map(|q| q.tag.clone()));
            match (pic, tag) {
                (Some(pic), Some(tag)) => {
                    let mut notes = Vec::new();
                    let mut ok = true;
                    if pic.rank() != od.canonical.len() || od.ramification.iter().any(|d| d.divisor_class.len() != pic.rank()) {
                        return Err(input_error("orders", format!("order data vectors must have length {}", pic.rank())));
                    }
                    if let (Some(q), Some(declared)) = (&quotient, &od.surface) {
                        if od.pic.is_none() && q.tag != *declared {
                            ok = false;
                            notes.push(format!("declared surface {declared} but the quotient is {}", q.tag));
                        }
                    }
                    if let Some(model) = SurfaceModel::standard(&tag) {
                        if model.pic.gram() == pic.gram() && model.canonical != od.canonical {
                            ok = false;
                            notes.push(format!("canonical class differs from the standard {tag} model"));
                        }
                    }
                    let surface = SurfaceModel::new(tag.clone(), pic.clone(), od.canonical.clone()).expect("lengths checked");
                    let k_a = canonical_class(&surface, &od.ramification);
                    let trivial = is_numerically_trivial(&pic, &k_a);
                    ok &= trivial;
                    let rv = match &od.fiber {
                        Some(f) => match ramification_vector(&surface, &od.ramification, f) {
                            Ok(rv) => Some(rv),
                            Err(e) => {
                                ok = false;
                                notes.push(e.to_string());
                                None
                            }
                        },
                        None => None,
                    };
                    let k_text: Vec<String> = k_a.iter().map(ToString::to_string).collect();
                    let mut detail = format!("K_A = ({}) on {tag}", k_text.join(","));
                    if !notes.is_empty() {
                        detail.push_str("; ");
                        detail.push_str(&notes.join("; "));
                    }
                    checks.push("canonical-class", Status::from_bool(ok), detail);
                    canonical_section = Some(CanonicalSection {
                        surface: tag,
                        pic_gram: pic.gram().clone(),
                        canonical: od.canonical.clone(),
                        ramification: od.ramification.clone(),
                        k_a,
                        numerically_trivial: trivial,
                        ramification_vector: rv,
                    });
                }
                _ => checks.skip(&["canonical-class"]),
            }
        }
        None => checks.push("canonical-class", Status::NotApplicable, "no order data"),
    }

    let orthogonality = match &s.orthogonality_check {
        Some(vs) => {
            let sol = orthogonality_system(&sub, vs).expect("validated lengths");
            let basis_text: Vec<String> = sol.basis.iter().map(|v| fmt(v)).collect();
            checks.push(
                "orthogonality",
                Status::from_bool(sol.forces_square_zero),
                format!(
                    "solutions <{}>, every solution has square {}",
                    basis_text.join(", "),
                    if sol.forces_square_zero { "0" } else { "not always 0" }
                ),
            );
            Some(sol)
        }
        None => {
            checks.push("orthogonality", Status::NotApplicable, "no orthogonality system");
            None
        }
    };

    Ok(build_report(ScenarioResults {
        scenario: s.display_name(),
        checks: checks.0,
        sublattice,
        embedding: embedding_section,
        action: action_section,
        extension: extension_section,
        fixed: Some(fixed_section),
        certificates,
        h1: Some(h1_section),
        orders: orders_section,
        canonical: canonical_section,
        orthogonality,
        assumptions,
    }))
}

/// H¹ of an action in report form, with optional named generators checked
/// for covering every class.
pub fn h1_section(h: &H1, sub: &Lattice, named: Option<&[IntVector]>) -> H1Section {
    let group = h.group.clone();
    let cover = named.map(|gens| gens.iter().all(|g| h.is_cocycle(g)) && h.generates(gens).unwrap_or(false));
    H1Section {
        description: group.describe(),
        generators_text: group.generators.iter().map(|g| sub.format_vector(g)).collect(),
        norm_kernel: h.kernel_basis(),
        coboundary_image: h.image_basis(),
        named_generators: named.map(|gens| gens.iter().map(|g| sub.format_vector(g)).collect()),
        named_generators_cover: cover,
        group,
    }
}

fn checks_after_effectivity(checks: &mut Checks, uncertified: &[IntVector], fmt: &dyn Fn(&[BigInt]) -> String, seed_error: Option<&str>) {
    if let Some(e) = seed_error {
        checks.push("effectivity", Status::Fail, e.to_string());
    } else if uncertified.is_empty() {
        checks.push("effectivity", Status::Pass, "every candidate class certified effective");
    } else {
        let names: Vec<String> = uncertified.iter().map(|v| fmt(v)).collect();
        checks.push("effectivity", Status::Fail, format!("uncertified: {}", names.join(", ")));
    }
}

/// Exit status for a report: 0 when everything passed, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed {
        0
    } else {
        1
    }
}
