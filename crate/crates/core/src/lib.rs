//! Constructions and exact certification for mutually orthogonal latin
//! squares and transversal designs.
//!
//! The centerpiece is the three-factor product ([`product::triple_product`]):
//! from a TD(k, a), an RTD(k, b) and an RTD(k, c) with `a <= b <= c` it builds
//! an RTD(k, abc), hence `N(abc) >= min(N(a) + 1, N(b), N(c))`. The
//! [`bounds`] module searches for the best bound these rules give and
//! [`bounds::execute_proof`] turns any such bound into a design that
//! [`verify`] certifies by exhaustive counting.

pub mod bounds;
pub mod designs;
pub mod error;
pub mod ff;
pub mod format;
pub mod product;
pub mod verify;

pub use bounds::{best_bound, execute_proof, improvement_table, macneish_bound, BoundProof};
pub use designs::{LatinSquare, MolsFamily, ResolvableTD, Resolution, TransversalDesign};
pub use error::{Error, Result};
pub use ff::FieldSpec;
pub use product::{triple_product, CellBudget, GroupPartition};
pub use verify::VerifyReport;
