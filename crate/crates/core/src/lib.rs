//! Symbolic engine for the presymplectic structure of gauge field theories:
//! bigraded expression core, variational calculus, gauge transformation and
//! dressing machinery, derivation pipelines, the built-in theory catalog,
//! and an independent numeric mesh oracle.

pub mod calculus;
pub mod expr;
pub mod gauge;
pub mod pipeline;
pub mod scalar;
pub mod theories;

pub use expr::{equals, normalize, parse, render, substitute, Expr, Subst, Symbols};
