//! Derivation pipelines: Euler-Lagrange splits, invariant and c-equivariant
//! Noether algorithms, Poisson brackets, field-dependent gauge
//! transformations, dressings, and the appendix verifiers.

pub mod central;
pub mod cocycle;
pub mod dressed;
pub mod generators;
pub mod gt;
pub mod noether;
pub mod report;

pub use central::{central_extension_check, central_extension_check_mixed, CentralVerdict};
pub use cocycle::{cocycle_check, CocycleVerdict};
pub use dressed::{dressed_pipeline, residual1_charge, to_metric, DressedData};
pub use generators::{generator_check, GeneratorVerdict};
pub use gt::{detect_regime, extreme_pipeline, gt_presymplectic, ExtremeData, GtData, Regime};
pub use noether::{
    apply_mode, at_param, derive_el, insert_param, noether, noether_invariant, poisson_bracket,
    BracketData, ElData, NoetherData, PipelineError,
};
pub use report::{run_report, DerivationReport};
