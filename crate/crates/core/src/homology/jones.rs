//! Laurent polynomials in `q` and the unnormalised Jones polynomial from the
//! Kauffman bracket state sum.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{Crossing, PlanarDiagram, UnionFind};
use crate::error::{Error, Result};

/// Integer Laurent polynomial in `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i32, coef: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coef: i64) {
        let c = self.terms.entry(exp).or_insert(0);
        *c += coef;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(e, c);
        }
        p
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut p = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// Substitutes `q -> 1/q`.
    pub fn invert(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms().map(|(_, c)| c).sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            let a = c.abs();
            let body = match (e, a) {
                (0, _) => format!("{a}"),
                (_, 1) => format!("q^{e}"),
                _ => format!("{a}q^{e}"),
            };
            if i > 0 {
                write!(f, "{sign} {body}")?;
            } else {
                write!(f, "{sign}{body}")?;
            }
        }
        Ok(())
    }
}

/// Unnormalised Jones polynomial `(-1)^{n-} q^{n+ - 2n-} Σ_states (-q)^r (q + 1/q)^{loops}`,
/// where `r` counts 1-smoothings. The unknot evaluates to `q + 1/q`.
/// Exponential in the crossing count; diagrams above `max_crossings` are
/// refused.
pub fn kauffman_bracket_jones(d: &PlanarDiagram, max_crossings: usize) -> Result<LaurentPoly> {
    let n = d.crossing_count();
    if n > max_crossings {
        return Err(Error::ResourceBudgetExceeded(format!(
            "state sum over {n} crossings exceeds the limit of {max_crossings}"
        )));
    }
    let circle = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
    if n == 0 {
        return Ok(circle);
    }
    let labels = d.n_arcs() as usize;
    // counts[r][loops]
    let mut counts = vec![vec![0i64; labels + 1]; n + 1];
    for state in 0u64..1 << n {
        let mut uf = UnionFind::new(labels);
        for (i, x) in d.crossings().iter().enumerate() {
            let pairs = if state >> i & 1 == 0 {
                Crossing::ZERO_SMOOTHING
            } else {
                Crossing::ONE_SMOOTHING
            };
            for (s, t) in pairs {
                uf.union(x.arcs()[s] as usize - 1, x.arcs()[t] as usize - 1);
            }
        }
        let loops = (0..labels).filter(|&l| uf.find(l) == l).count();
        counts[state.count_ones() as usize][loops] += 1;
    }
    let mut sum = LaurentPoly::zero();
    let mut circle_pow = vec![LaurentPoly::monomial(0, 1)];
    for k in 1..=labels {
        let next = circle_pow[k - 1].mul(&circle);
        circle_pow.push(next);
    }
    for (r, row) in counts.iter().enumerate() {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for (loops, &c) in row.iter().enumerate() {
            if c != 0 {
                sum = sum.add(&circle_pow[loops].mul(&LaurentPoly::monomial(r as i32, sign * c)));
            }
        }
    }
    let (np, nn) = (d.positive_count() as i32, d.negative_count() as i32);
    let sign = if nn % 2 == 0 { 1 } else { -1 };
    Ok(sum.mul(&LaurentPoly::monomial(np - 2 * nn, sign)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_jones() {
        let d: PlanarDiagram = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".parse().unwrap();
        let j = kauffman_bracket_jones(&d, 20).unwrap();
        let expected = if d.writhe() > 0 {
            LaurentPoly::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)])
        } else {
            LaurentPoly::from_terms([(-1, 1), (-3, 1), (-5, 1), (-9, -1)])
        };
        assert_eq!(j, expected);
    }

    #[test]
    fn unknot_diagrams() {
        let circle = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(
            kauffman_bracket_jones(&PlanarDiagram::unknot(), 5).unwrap(),
            circle
        );
        let kink: PlanarDiagram = "PD[X[1,1,2,2]]".parse().unwrap();
        assert_eq!(kauffman_bracket_jones(&kink, 5).unwrap(), circle);
    }

    #[test]
    fn refuses_large_diagrams() {
        let d: PlanarDiagram = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".parse().unwrap();
        assert!(matches!(
            kauffman_bracket_jones(&d, 2),
            Err(Error::ResourceBudgetExceeded(_))
        ));
    }

    #[test]
    fn display() {
        assert_eq!(
            LaurentPoly::from_terms([(-1, 1), (1, 1)]).to_string(),
            "q^-1 + q^1"
        );
        assert_eq!(
            LaurentPoly::from_terms([(0, 2), (3, -1)]).to_string(),
            "2 - q^3"
        );
    }
}
