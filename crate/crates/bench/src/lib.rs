//! Shared fixtures for the benchmarks.

use mols_core::designs::{mols_from_field, rtd_from_td, td_from_mols};
use mols_core::{FieldSpec, ResolvableTD, TransversalDesign};

pub fn field_td(q: u64, k: usize) -> TransversalDesign {
    let field = FieldSpec::new(q).expect("prime power");
    td_from_mols(&mols_from_field(&field), k).expect("k within q + 1")
}

pub fn field_rtd(q: u64, k: usize) -> ResolvableTD {
    rtd_from_td(&field_td(q, k + 1)).expect("field designs are valid")
}
