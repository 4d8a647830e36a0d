//! Concordance invariants of knots from Khovanov-type homology: planar
//! diagram codes, twisted doubles, a scanning engine for Khovanov and Lee
//! homology, and tools for the step invariant `t_nu` and bounds propagation.

pub mod concordance;
pub mod construct;
pub mod diagram;
pub mod error;
pub mod homology;

pub use concordance::{
    BoundsLedger, KnotExpression, KnotRegistry, NuEvaluator, Searcher, TnuResult,
};
pub use construct::{braid_closure, torus_knot, twisted_double, ClaspSign, DoubleSpec};
pub use diagram::{Crossing, PlanarDiagram};
pub use error::{Error, Result};
pub use homology::{
    kh_homology, s_invariant, FieldSpec, FrobeniusParams, KhTable, SInvariantResult, ScanOptions,
};
