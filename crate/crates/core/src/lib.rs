pub mod action;
pub mod cohomology;
pub mod exactla;
pub mod k3cert;
pub mod lattice;
pub mod orders;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod serde_ext;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type IntMatrix = exactla::Matrix<BigInt>;
pub type RatMatrix = exactla::Matrix<BigRational>;
pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;
