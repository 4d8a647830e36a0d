//! Concordance invariants `t_ν` defined through twisted doubles, their
//! search, interval propagation over connected sums, and derived checks.

pub mod bounds;
pub mod expr;
pub mod nu;
pub mod search;
pub mod verify;

pub use bounds::{slice_reduce, BoundEntry, BoundsLedger, Derivation, Interval};
pub use expr::{CanonicalKnot, KnotExpression, KnotRegistry, Leaf};
pub use nu::{nu_s, t_tau, tau_value, torus_tau, NuEvaluator, NuS};
pub use search::{Evaluation, SandwichReport, Searcher, TbHints, TnuResult};
pub use verify::{check_linear_guess, tau_s_gap, LinearGuess, TauSGap};
