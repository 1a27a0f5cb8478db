//! Fixtures shared by the benchmarks.

use lrm_core::document::ArcDocument;
use lrm_core::{GeneratorContext, ReductionState, Value};

pub const CUSP: &str = include_str!("../../../data/cusp.json");
pub const TACNODE: &str = include_str!("../../../data/tacnode.json");
pub const DEFECT_P2: &str = include_str!("../../../data/defect_p2.json");

pub fn document(text: &str) -> ArcDocument {
    ArcDocument::parse(text).expect("bundled document parses")
}

pub fn state(text: &str) -> ReductionState {
    ReductionState::new(document(text).oracle().expect("oracle")).expect("valid state")
}

/// Weights `(1, sqrt 2)`.
pub fn sqrt2_weights() -> Vec<Value> {
    let ctx = GeneratorContext::quadratic(2).expect("2 is not a square");
    vec![
        Value::integer(ctx, 1),
        Value::sqrt_generator(ctx).expect("quadratic"),
    ]
}
