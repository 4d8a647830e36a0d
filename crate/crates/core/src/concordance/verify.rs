//! Checks built on top of the search and the bounds ledger: the gap between
//! `t_τ` and `t_s` on sums of `T(2,5)`, and the linear guess
//! `t_s = 3 ν_s - 1`.

use std::fmt;

use super::bounds::BoundsLedger;
use super::expr::{KnotExpression, KnotRegistry};
use super::nu::t_tau;
use crate::error::{Error, Result};

/// Comparison of `t_τ` and the certified lower bound on `t_s` for `n` copies
/// of `T(2,5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSGap {
    pub n: usize,
    pub t_tau: i64,
    pub t_s_lower: i64,
    pub gap_lower: i64,
    pub reason: String,
}

impl TauSGap {
    pub fn holds(&self) -> bool {
        self.gap_lower > self.n as i64
    }
}

impl fmt::Display for TauSGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "t_tau = {}", self.t_tau)?;
        writeln!(f, "t_s >= {}  ({})", self.t_s_lower, self.reason)?;
        write!(
            f,
            "|t_tau - t_s| >= {} > {}: {}",
            self.gap_lower,
            self.n,
            self.holds()
        )
    }
}

/// Lower bound on `|t_τ(K_n) - t_s(K_n)|` for `K_n = #ⁿ T(2,5)`, using the
/// closed form for `t_τ` and ledger propagation for `t_s`.
pub fn tau_s_gap(n: usize, ledger: &BoundsLedger) -> Result<TauSGap> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one summand".into()));
    }
    let reg = KnotRegistry::default();
    let e = KnotExpression::torus(2, 5).repeated(n);
    let tt = t_tau(&e, &reg)?;
    let d = ledger.propagate("s", &e.canonical(&reg)?, None)?;
    let lo = d
        .interval
        .lo
        .ok_or_else(|| Error::MissingLeaf(format!("{e} (no lower bound on t_s)")))?;
    Ok(TauSGap {
        n,
        t_tau: tt,
        t_s_lower: lo,
        gap_lower: lo - tt,
        reason: d.lo_reason,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearGuess {
    pub nu: i64,
    pub t_s: i64,
    /// `t_s - (3ν - 1)`.
    pub residual: i64,
}

impl LinearGuess {
    pub fn holds(&self) -> bool {
        self.residual == 0
    }
}

/// Compares a computed `t_s` with `3 ν_s - 1`.
pub fn check_linear_guess(nu: i64, t_s: i64) -> LinearGuess {
    LinearGuess {
        nu,
        t_s,
        residual: t_s - (3 * nu - 1),
    }
}
