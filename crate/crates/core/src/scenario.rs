//! Scenario files: the input format of the verification pipeline, and the
//! built-in scenarios.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{unit_vector, vec_add, vec_scale, vec_sub};
use crate::k3cert::SurfaceTag;
use crate::lattice::{k3_lattice, Lattice};
use crate::orders::RamificationDatum;
use crate::serde_ext::{big_rows, big_vec, matrix, opt_big_vec};
use crate::{IntMatrix, IntVector};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("n = {0} is outside 3..=18")]
    OutOfRangeN(usize),
    #[error("{module}: {message}")]
    Pipeline { module: &'static str, message: String },
}

/// Either a named ambient lattice or an explicit one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ambient {
    Named(String),
    Explicit(Lattice),
}

impl Ambient {
    pub fn lattice(&self) -> Result<Lattice, ScenarioError> {
        match self {
            Ambient::Named(name) if name == "K3" => Ok(k3_lattice()),
            Ambient::Named(name) => Err(ScenarioError::Schema {
                path: "ambient".into(),
                message: format!("unknown ambient lattice {name:?}; expected \"K3\" or {{\"gram\": ...}}"),
            }),
            Ambient::Explicit(l) => Ok(l.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    /// Columns are the images of the basis vectors.
    #[serde(with = "matrix")]
    pub matrix: IntMatrix,
    pub order: u64,
}

/// One seed vector or several.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    One(#[serde(with = "big_vec")] IntVector),
    Many(#[serde(with = "big_rows")] Vec<IntVector>),
}

impl Seeds {
    pub fn vectors(&self) -> Vec<IntVector> {
        match self {
            Seeds::One(v) => vec![v.clone()],
            Seeds::Many(vs) => vs.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceHints {
    /// Images in the halved invariant lattice of irreducible curves of negative square.
    #[serde(default, with = "big_rows")]
    pub irreducible_neg2_images: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderData {
    /// `K_Z` in the coordinates of `Pic Z`.
    #[serde(with = "big_vec")]
    pub canonical: IntVector,
    pub ramification: Vec<RamificationDatum>,
    /// Explicit `Pic Z`; defaults to the halved invariant lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pic: Option<Lattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceTag>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big_vec")]
    pub fiber: Option<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentSpec {
    /// `sᵢ + φ(sᵢ)` must equal this class.
    #[serde(with = "big_vec")]
    pub target: IntVector,
    /// `sᵢ · φ(sᵢ)` must equal this value.
    #[serde(with = "crate::serde_ext::big")]
    pub product: BigInt,
}

/// Values the run must reproduce.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<SurfaceTag>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_ext::opt_big_vec")]
    pub h1_invariant_factors: Option<Vec<BigInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub norm_kernel_basis: Option<Vec<IntVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub fixed_basis: Option<Vec<IntVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_ext::opt_matrix")]
    pub halved_gram: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub order_count: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Ambient>,
    pub sublattice: Lattice,
    /// Image of each sublattice basis vector in the ambient lattice.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub embedding: Option<Vec<IntVector>>,
    pub involution: ActionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_seed: Option<Seeds>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big_vec")]
    pub ample_candidate: Option<IntVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_hints: Option<SurfaceHints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_data: Option<OrderData>,
    /// Further classes to run through effectivity propagation.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "big_rows")]
    pub extra_effective: Vec<IntVector>,
    /// Classes to certify nodal; by default every class of square -2 among
    /// the generators, their images and `extra_effective`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub nodal_classes: Option<Vec<IntVector>>,
    /// Cocycles expected to generate H¹.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub h1_generators: Option<Vec<IntVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_check: Option<TangentSpec>,
    /// Solve `R·v = 0` for these `v` and check every solution has square 0.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rows")]
    pub orthogonality_check: Option<Vec<IntVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
}

mod opt_rows {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<IntVector>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(rows) => big_rows::serialize(rows, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<IntVector>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "big_rows")] Vec<IntVector>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

mod opt_big {
    use super::*;
    use crate::serde_ext::JsonInt;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => JsonInt(x.clone()).serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<JsonInt>::deserialize(d)?.map(|x| x.0))
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                ScenarioError::Parse(inner.to_string())
            } else {
                ScenarioError::Schema { path, message: strip_position(&inner.to_string()) }
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "scenario".to_string())
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// The 18x18 form whose leading `n x n` blocks are the double-plane Picard lattices.
pub const DOUBLE_PLANE_FORM: [[i8; 18]; 18] = [
    [-2, 3, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [3, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 1, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, -2, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, -2, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, -2, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2],
];

pub const BUILTIN_NAMES: [&str; 3] = ["p2-sextic", "quadric", "hirzebruch2"];

fn v(n: usize, coeffs: &[(usize, i64)]) -> IntVector {
    let mut out = vec![BigInt::from(0); n];
    for &(i, c) in coeffs {
        out[i - 1] += c;
    }
    out
}

/// Sum of named K3 basis vectors with coefficients.
fn k3_combo(terms: &[(i64, &str)]) -> IntVector {
    let k3 = k3_lattice();
    terms.iter().fold(vec![BigInt::from(0); 22], |acc, (c, name)| vec_add(&acc, &vec_scale(&k3.basis_vector(name), &BigInt::from(*c))))
}

fn labelled(gram: IntMatrix) -> Lattice {
    Lattice::new(gram).expect("built-in gram is symmetric").with_default_labels("s")
}

fn images_to_matrix(n: usize, images: &[IntVector]) -> IntMatrix {
    IntMatrix::from_columns(n, images).expect("image lengths")
}

/// Images of `s1..s18` in the K3 lattice for the double plane.
fn double_plane_images() -> Vec<IntVector> {
    let mut images = vec![
        k3_combo(&[(1, "lambda1"), (1, "mu1")]),
        k3_combo(&[(1, "lambda2"), (3, "mu2")]),
        k3_combo(&[(1, "lambda3")]),
        k3_combo(&[(1, "lambda4")]),
    ];
    for i in 5..=8 {
        images.push(k3_combo(&[(1, &format!("lambda{i}")), (1, "mu2")]));
    }
    for i in 1..=8 {
        images.push(k3_combo(&[(1, &format!("lambda{i}'")), (1, "mu2")]));
    }
    images.push(k3_combo(&[(1, "mu2"), (1, "mu1'"), (-1, "mu2'")]));
    images.push(k3_combo(&[(1, "mu2"), (1, "mu1''"), (-1, "mu2''")]));
    images
}

/// Double cover of the plane branched along a sextic, Picard rank `n`.
pub fn p2_sextic(n: usize) -> Result<Scenario, ScenarioError> {
    if !(3..=18).contains(&n) {
        return Err(ScenarioError::OutOfRangeN(n));
    }
    let gram = IntMatrix::from_rows(DOUBLE_PLANE_FORM[..n].iter().map(|r| r[..n].iter().map(|&x| BigInt::from(x)).collect()).collect())
        .expect("square block");
    let s1_plus_s2 = v(n, &[(1, 1), (2, 1)]);
    // φ(sᵢ) = s1 + s2 - sᵢ
    let images: Vec<IntVector> = (0..n).map(|i| vec_sub(&s1_plus_s2, &unit_vector(n, i))).collect();
    let two = BigInt::from(2);
    Ok(Scenario {
        name: Some(format!("p2-sextic-n{n}")),
        ambient: Some(Ambient::Named("K3".into())),
        sublattice: labelled(gram),
        embedding: Some(double_plane_images()[..n].to_vec()),
        involution: ActionSpec { matrix: images_to_matrix(n, &images), order: 2 },
        effective_seed: Some(Seeds::One(unit_vector(n, 0))),
        ample_candidate: Some(s1_plus_s2.clone()),
        surface_hints: None,
        order_data: Some(OrderData {
            canonical: vec![BigInt::from(-3)],
            ramification: vec![RamificationDatum { divisor_class: vec![BigInt::from(6)], index: 2 }],
            pic: None,
            surface: Some(SurfaceTag::P2),
            fiber: None,
        }),
        extra_effective: Vec::new(),
        nodal_classes: None,
        h1_generators: Some((3..=n).map(|i| v(n, &[(1, 1), (i, -1)])).collect()),
        tangent_check: Some(TangentSpec { target: s1_plus_s2.clone(), product: BigInt::from(3) }),
        orthogonality_check: None,
        expect: Some(Expectations {
            signature: Some((1, n - 1)),
            quotient: Some(SurfaceTag::P2),
            h1_invariant_factors: Some(vec![two; n - 2]),
            norm_kernel_basis: None,
            fixed_basis: Some(vec![s1_plus_s2]),
            halved_gram: Some(IntMatrix::identity(1)),
            tangent_count: Some(n - 1),
            order_count: Some((BigInt::from(1) << (n - 2)) - 1),
        }),
    })
}

/// The rank-3 double plane with `s3 ↦ λ3 + μ2`, which does not preserve the form.
pub fn p2_sextic_perturbed() -> Scenario {
    let mut s = p2_sextic(3).expect("n = 3 is in range");
    s.name = Some("p2-sextic-n3-perturbed".into());
    if let Some(images) = s.embedding.as_mut() {
        images[2] = k3_combo(&[(1, "lambda3"), (1, "mu2")]);
    }
    s
}

/// Double cover of the quadric branched along a (4,4) divisor.
pub fn quadric() -> Scenario {
    let gram = crate::lattice::int_matrix(&[&[0, 1, 1, 1], &[1, -2, 2, 0], &[1, 2, -2, 0], &[1, 0, 0, -2]]);
    let n = 4;
    Scenario {
        name: Some("quadric".into()),
        ambient: Some(Ambient::Named("K3".into())),
        sublattice: labelled(gram),
        embedding: Some(vec![
            k3_combo(&[(1, "mu1"), (1, "mu1'")]),
            k3_combo(&[(1, "lambda1"), (1, "mu2"), (1, "mu1''")]),
            k3_combo(&[(1, "lambda4"), (1, "mu2"), (1, "mu2''")]),
            k3_combo(&[(1, "lambda2"), (1, "mu2")]),
        ]),
        involution: ActionSpec {
            matrix: crate::lattice::int_matrix(&[&[1, 0, 0, 0], &[0, 0, 1, 1], &[0, 1, 0, 1], &[0, 0, 0, -1]]),
            order: 2,
        },
        effective_seed: Some(Seeds::One(v(n, &[(1, 1)]))),
        ample_candidate: Some(v(n, &[(1, 1), (2, 1), (3, 1)])),
        surface_hints: Some(SurfaceHints::default()),
        order_data: Some(OrderData {
            canonical: crate::lattice::int_vector(&[-2, -2]),
            ramification: vec![RamificationDatum { divisor_class: crate::lattice::int_vector(&[4, 4]), index: 2 }],
            pic: None,
            surface: Some(SurfaceTag::P1xP1),
            fiber: None,
        }),
        extra_effective: vec![v(n, &[(2, 1), (3, 1), (4, -1)])],
        nodal_classes: None,
        h1_generators: Some(vec![v(n, &[(2, 1), (4, -1)])]),
        tangent_check: Some(TangentSpec { target: v(n, &[(2, 1), (3, 1)]), product: BigInt::from(2) }),
        orthogonality_check: Some(vec![v(n, &[(2, 1)]), v(n, &[(3, 1)]), v(n, &[(4, 1)])]),
        expect: Some(Expectations {
            signature: Some((1, 3)),
            quotient: Some(SurfaceTag::P1xP1),
            h1_invariant_factors: Some(vec![BigInt::from(2)]),
            norm_kernel_basis: Some(vec![v(n, &[(2, 1), (3, -1)]), v(n, &[(2, 1), (4, -1)])]),
            fixed_basis: Some(vec![v(n, &[(1, 1)]), v(n, &[(2, 1), (3, 1)])]),
            halved_gram: Some(crate::lattice::int_matrix(&[&[0, 1], &[1, 0]])),
            tangent_count: Some(2),
            order_count: Some(BigInt::from(1)),
        }),
    }
}

/// Double cover of the Hirzebruch surface `𝔽₂`.
pub fn hirzebruch2() -> Scenario {
    let gram = crate::lattice::int_matrix(&[&[-2, 0, 1, 0, 1], &[0, -2, 0, 1, 0], &[1, 0, -2, 2, 0], &[0, 1, 2, -2, 0], &[1, 0, 0, 0, -2]]);
    let n = 5;
    Scenario {
        name: Some("hirzebruch2".into()),
        ambient: Some(Ambient::Named("K3".into())),
        sublattice: labelled(gram),
        embedding: Some(vec![
            k3_combo(&[(1, "lambda4")]),
            k3_combo(&[(1, "lambda2"), (1, "mu1")]),
            k3_combo(&[(1, "lambda1"), (2, "mu1")]),
            k3_combo(&[(1, "lambda7"), (1, "mu2")]),
            k3_combo(&[(1, "lambda5")]),
        ]),
        involution: ActionSpec {
            matrix: crate::lattice::int_matrix(&[
                &[0, 1, 0, 0, 0],
                &[1, 0, 0, 0, 0],
                &[0, 0, 0, 1, 1],
                &[0, 0, 1, 0, 1],
                &[0, 0, 0, 0, -1],
            ]),
            order: 2,
        },
        effective_seed: Some(Seeds::One(v(n, &[(1, 1)]))),
        ample_candidate: Some(v(n, &[(1, 1), (2, 1), (3, 3), (4, 3)])),
        surface_hints: Some(SurfaceHints { irreducible_neg2_images: vec![crate::lattice::int_vector(&[1, 0])] }),
        order_data: Some(OrderData {
            canonical: crate::lattice::int_vector(&[-2, -4]),
            ramification: vec![RamificationDatum { divisor_class: crate::lattice::int_vector(&[4, 8]), index: 2 }],
            pic: None,
            surface: Some(SurfaceTag::Hirzebruch(2)),
            fiber: Some(crate::lattice::int_vector(&[0, 1])),
        }),
        extra_effective: vec![v(n, &[(3, 1), (4, 1), (5, -1)])],
        nodal_classes: None,
        h1_generators: Some(vec![v(n, &[(3, 1), (5, -1)])]),
        tangent_check: None,
        orthogonality_check: None,
        expect: Some(Expectations {
            signature: Some((1, 4)),
            quotient: Some(SurfaceTag::Hirzebruch(2)),
            h1_invariant_factors: Some(vec![BigInt::from(2)]),
            norm_kernel_basis: None,
            fixed_basis: Some(vec![v(n, &[(1, 1), (2, 1)]), v(n, &[(3, 1), (4, 1)])]),
            halved_gram: Some(crate::lattice::int_matrix(&[&[-2, 1], &[1, 0]])),
            tangent_count: None,
            order_count: Some(BigInt::from(1)),
        }),
    }
}

/// Looks up a built-in by name; `n` is required for `p2-sextic` only.
pub fn builtin(name: &str, n: Option<usize>) -> Result<Scenario, ScenarioError> {
    match name {
        "p2-sextic" => p2_sextic(n.unwrap_or(3)),
        "quadric" => Ok(quadric()),
        "hirzebruch2" => Ok(hirzebruch2()),
        "p2-sextic-perturbed" => Ok(p2_sextic_perturbed()),
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}
