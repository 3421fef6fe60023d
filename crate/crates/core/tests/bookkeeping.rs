//! Scenarios with no ambient lattice: declared Picard data only.

use num_bigint::BigInt;
use num_traits::Zero;

use ncy_core::action::CyclicAction;
use ncy_core::cohomology::h1;
use ncy_core::lattice::{int_matrix, int_vector, Lattice};
use ncy_core::orders::Assumption;
use ncy_core::pipeline::{run, RunOptions};
use ncy_core::report::Status;
use ncy_core::scenario::Scenario;

/// Basis S1, S0', F' of the double cover branched on two fibres; the two
/// lifts of the bisection satisfy S1 + S2 = 2S0' + 4F'.
fn rational_elliptic() -> CyclicAction {
    let l = Lattice::new(int_matrix(&[&[-2, 0, 1], &[0, -2, 1], &[1, 1, 0]])).unwrap();
    let sigma = int_matrix(&[&[-1, 0, 0], &[2, 1, 0], &[4, 0, 1]]);
    CyclicAction::new(l, sigma, 2).unwrap()
}

#[test]
fn twisted_class_is_a_nontrivial_cocycle() {
    let a = rational_elliptic();
    let l = int_vector(&[1, -1, -2]);
    let s2 = a.apply(&int_vector(&[1, 0, 0]));
    assert_eq!(s2, int_vector(&[-1, 2, 4]));
    assert_eq!(a.lattice().pair(&s2, &int_vector(&[0, 1, 0])).unwrap(), BigInt::zero());
    assert!(a.partial_norm(&l, 2).unwrap().iter().all(Zero::is_zero));
    let h = h1(&a);
    assert_eq!(h.group.invariant_factors, vec![BigInt::from(2)]);
    assert_eq!(h.kernel_basis(), vec![l.clone()]);
    assert!(!h.same_class(&l, &int_vector(&[0, 0, 0])).unwrap());
    assert!(h.generates(&[l]).unwrap());
}

#[test]
fn scenario_file_passes_without_ambient() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/scenarios/rational-elliptic.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    let r = run(&s, &RunOptions::default()).unwrap();
    assert!(r.passed, "{}", r.render_text());
    for name in ["embedding", "extension", "halved-form", "quotient", "effectivity"] {
        assert_eq!(r.status(name), Some(Status::NotApplicable), "{name}");
    }
    assert_eq!(r.status("canonical-class"), Some(Status::Pass));
    assert!(r.assumptions.iter().any(|a| a.tag == Assumption::CoverExistence));
    assert!(!r.assumptions.iter().any(|a| a.tag == Assumption::Realization));
}
