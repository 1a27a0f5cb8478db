//! Exact reduction of multiplicity for hypersurface singularities along a
//! rank-1 valuation, by Perron transforms, translations and strict transforms.

pub mod defect;
pub mod document;
pub mod error;
pub mod oracle;
mod parse;
pub mod perron;
pub mod poly;
pub mod reduce;
pub mod scalars;
pub mod valgroup;

pub use defect::{consistency, jump_total, ostrowski, ExtensionData, Family, FamilyDecomposition};
pub use error::{Error, Result};
pub use oracle::{
    ApproxStatus, ArcValuation, AugmentedChain, BestApprox, ChainStep, MonomialValuation,
    ValuationOracle, ValueResult,
};
pub use perron::{
    build_a1, build_a6_divide, monomialize, verify_cramer, CramerCheck, Monomialization,
    PerronTransform, TransformKind,
};
pub use poly::{
    CoefficientExpansion, LastOrder, Monomial, Polynomial, Ring, StrictTransform, VariableFrame,
};
pub use reduce::{
    reduce, Bounds, Reduction, ReductionState, ReductionStatus, SigmaData, StepKind, Trace,
    TraceStep,
};
pub use scalars::{parse_series, Exponent, FieldSpec, PuiseuxSeries, Scalar, SeriesOrder};
pub use valgroup::{rational_relation, GeneratorContext, LatticeIndex, Value, ValueLattice};
