//! Integer-valued concordance invariants evaluated on diagrams, and the
//! closed-form τ for expressions built from torus knots.

use super::expr::{KnotExpression, KnotRegistry, Leaf};
use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};
use crate::homology::{s_invariant_with, FieldSpec, FrobeniusParams, ScanOptions};

/// An invariant ν evaluated on diagrams. Implementations must be
/// deterministic; searches call them from several threads.
pub trait NuEvaluator: Send + Sync {
    fn name(&self) -> &str;
    fn nu(&self, d: &PlanarDiagram) -> Result<i64>;
    /// Whether ν is additive under connected sum.
    fn additive(&self) -> bool {
        true
    }
}

/// `ν = -s/2` for Rasmussen's s.
#[derive(Clone, Debug, Default)]
pub struct NuS {
    pub field: FieldSpec,
    pub opts: ScanOptions,
}

impl NuS {
    pub fn new(field: FieldSpec, opts: ScanOptions) -> Self {
        NuS { field, opts }
    }
}

impl NuEvaluator for NuS {
    fn name(&self) -> &str {
        "s"
    }

    fn nu(&self, d: &PlanarDiagram) -> Result<i64> {
        let r = s_invariant_with(d, &FrobeniusParams::for_s_invariant(self.field), &self.opts)?;
        Ok(r.nu() as i64)
    }
}

/// `ν_s` over the rationals with default limits.
pub fn nu_s(d: &PlanarDiagram) -> Result<i64> {
    NuS::default().nu(d)
}

/// `τ(T(p,q)) = sign(pq) (|p|-1)(|q|-1)/2`.
pub fn torus_tau(p: i64, q: i64) -> i64 {
    (p * q).signum() * (p.abs() - 1) * (q.abs() - 1) / 2
}

/// τ of an expression: the torus formula on torus leaves, registered values
/// on named leaves, negated under mirror and added under connected sum.
pub fn tau_value(e: &KnotExpression, reg: &KnotRegistry) -> Result<i64> {
    let k = e.canonical(reg)?;
    k.leaves()
        .iter()
        .map(|l| match l {
            Leaf::Torus(p, q) => Ok(torus_tau(*p, *q)),
            Leaf::Named { name, mirrored } => reg
                .tau(name)
                .map(|t| if *mirrored { -t } else { t })
                .ok_or_else(|| Error::UnknownTau(l.to_string())),
            Leaf::Pd(_) => Err(Error::UnknownTau(l.to_string())),
        })
        .sum()
}

/// `t_τ = 2τ - 1`.
pub fn t_tau(e: &KnotExpression, reg: &KnotRegistry) -> Result<i64> {
    Ok(2 * tau_value(e, reg)? - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::torus_knot;

    fn expr(s: &str) -> KnotExpression {
        s.parse().unwrap()
    }

    #[test]
    fn nu_s_values() {
        assert_eq!(nu_s(&PlanarDiagram::unknot()).unwrap(), 0);
        assert_eq!(nu_s(&torus_knot(2, 3).unwrap()).unwrap(), 1);
        assert_eq!(nu_s(&torus_knot(2, 3).unwrap().mirror()).unwrap(), -1);
    }

    #[test]
    fn tau_values() {
        let reg = KnotRegistry::default();
        assert_eq!(tau_value(&expr("T(2,5)"), &reg).unwrap(), 2);
        assert_eq!(tau_value(&expr("m(T(2,3))"), &reg).unwrap(), -1);
        assert_eq!(tau_value(&expr("T(2,5)").repeated(7), &reg).unwrap(), 14);
        assert_eq!(tau_value(&expr("T(3,4)#knot:4_1"), &reg).unwrap(), 3);
        assert_eq!(tau_value(&expr("PD[]"), &reg).unwrap(), 0);
        assert!(matches!(
            tau_value(&expr("knot:5_2"), &reg),
            Err(Error::UnknownTau(_))
        ));
        assert!(matches!(
            tau_value(&expr("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]"), &reg),
            Err(Error::UnknownTau(_))
        ));
    }

    #[test]
    fn t_tau_of_two_strand_torus_knots() {
        let reg = KnotRegistry::default();
        for n in 1..=10 {
            assert_eq!(
                t_tau(&KnotExpression::Torus(2, 2 * n + 1), &reg).unwrap(),
                2 * n - 1
            );
        }
        assert_eq!(t_tau(&expr("PD[]"), &reg).unwrap(), -1);
    }
}
