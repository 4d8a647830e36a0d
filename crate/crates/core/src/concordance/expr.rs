//! Knot expressions: torus knots, named knots and literal PD codes combined
//! with mirror and connected sum.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_integer::Integer;

use crate::construct::torus_knot;
use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotExpression {
    Torus(i64, i64),
    Named(String),
    Pd(PlanarDiagram),
    Mirror(Box<KnotExpression>),
    Sum(Box<KnotExpression>, Box<KnotExpression>),
}

/// A prime summand in canonical form. Torus leaves absorb mirroring into the
/// sign of `q`; PD leaves are stored as the canonical code of the (possibly
/// mirrored) diagram.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leaf {
    Torus(i64, i64),
    Named { name: String, mirrored: bool },
    Pd(String),
}

/// Connected sum of leaves as a sorted multiset; the empty sum is the unknot.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKnot(Vec<Leaf>);

/// Diagrams and optional τ values for `knot:<name>` leaves.
#[derive(Clone, Debug)]
pub struct KnotRegistry {
    entries: BTreeMap<String, (PlanarDiagram, Option<i64>)>,
}

impl Leaf {
    pub fn mirror(&self) -> Leaf {
        match self {
            Leaf::Torus(p, q) => Leaf::Torus(*p, -q),
            Leaf::Named { name, mirrored } => Leaf::Named {
                name: name.clone(),
                mirrored: !mirrored,
            },
            Leaf::Pd(code) => {
                let d: PlanarDiagram = code.parse().expect("stored canonical code parses");
                Leaf::Pd(d.mirror().canonical().to_string())
            }
        }
    }

    pub fn to_expression(&self) -> KnotExpression {
        match self {
            Leaf::Torus(p, q) => KnotExpression::Torus(*p, *q),
            Leaf::Named { name, mirrored } => {
                let e = KnotExpression::Named(name.clone());
                if *mirrored {
                    KnotExpression::Mirror(Box::new(e))
                } else {
                    e
                }
            }
            Leaf::Pd(code) => {
                KnotExpression::Pd(code.parse().expect("stored canonical code parses"))
            }
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Torus(p, q) => write!(f, "T({p},{q})"),
            Leaf::Named {
                name,
                mirrored: false,
            } => write!(f, "knot:{name}"),
            Leaf::Named {
                name,
                mirrored: true,
            } => write!(f, "m(knot:{name})"),
            Leaf::Pd(code) => f.write_str(code),
        }
    }
}

impl CanonicalKnot {
    pub fn unknot() -> Self {
        Self::default()
    }

    pub fn from_leaves(mut leaves: Vec<Leaf>) -> Self {
        leaves.sort();
        CanonicalKnot(leaves)
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.0
    }

    pub fn is_unknot(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mirror(&self) -> Self {
        Self::from_leaves(self.0.iter().map(Leaf::mirror).collect())
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::from_leaves(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// `n` copies of `self` summed.
    pub fn repeat(&self, n: usize) -> Self {
        Self::from_leaves((0..n).flat_map(|_| self.0.iter().cloned()).collect())
    }

    pub fn to_expression(&self) -> KnotExpression {
        self.0
            .iter()
            .map(Leaf::to_expression)
            .reduce(|a, b| KnotExpression::Sum(Box::new(a), Box::new(b)))
            .unwrap_or_else(|| KnotExpression::Pd(PlanarDiagram::unknot()))
    }
}

impl fmt::Display for CanonicalKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("PD[]");
        }
        write!(f, "{}", self.0.iter().join("#"))
    }
}

/// `T(p,q)` with `2 <= p < |q|`, or `None` for an unknotted torus knot.
fn normalize_torus(p: i64, q: i64) -> Result<Option<(i64, i64)>> {
    if p.gcd(&q) != 1 {
        return Err(Error::NonCoprime { p, q });
    }
    let (a, b) = (p.abs().min(q.abs()), p.abs().max(q.abs()));
    if a <= 1 {
        return Ok(None);
    }
    Ok(Some((a, (p * q).signum() * b)))
}

impl KnotExpression {
    pub fn torus(p: i64, q: i64) -> Self {
        KnotExpression::Torus(p, q)
    }

    pub fn mirror(self) -> Self {
        KnotExpression::Mirror(Box::new(self))
    }

    pub fn sum(self, other: Self) -> Self {
        KnotExpression::Sum(Box::new(self), Box::new(other))
    }

    /// `n`-fold connected sum of `self` (`n >= 1`).
    pub fn repeated(&self, n: usize) -> Self {
        assert!(n >= 1, "empty connected sum");
        (1..n).fold(self.clone(), |acc, _| acc.sum(self.clone()))
    }

    /// Multiset of prime leaves with mirrors pushed down and unknots
    /// dropped.
    pub fn canonical(&self, reg: &KnotRegistry) -> Result<CanonicalKnot> {
        let mut leaves = Vec::new();
        self.collect_leaves(false, reg, &mut leaves)?;
        Ok(CanonicalKnot::from_leaves(leaves))
    }

    fn collect_leaves(
        &self,
        mirrored: bool,
        reg: &KnotRegistry,
        out: &mut Vec<Leaf>,
    ) -> Result<()> {
        match self {
            KnotExpression::Torus(p, q) => {
                if let Some((a, b)) = normalize_torus(*p, *q)? {
                    out.push(Leaf::Torus(a, if mirrored { -b } else { b }));
                }
            }
            KnotExpression::Named(name) => {
                let d = reg.diagram(name)?;
                if d.crossing_count() > 0 {
                    out.push(Leaf::Named {
                        name: name.clone(),
                        mirrored,
                    });
                }
            }
            KnotExpression::Pd(d) => {
                if d.crossing_count() > 0 {
                    let d = if mirrored { d.mirror() } else { d.clone() };
                    out.push(Leaf::Pd(d.canonical().to_string()));
                }
            }
            KnotExpression::Mirror(e) => e.collect_leaves(!mirrored, reg, out)?,
            KnotExpression::Sum(a, b) => {
                a.collect_leaves(mirrored, reg, out)?;
                b.collect_leaves(mirrored, reg, out)?;
            }
        }
        Ok(())
    }

    /// A diagram of the expression.
    pub fn diagram(&self, reg: &KnotRegistry) -> Result<PlanarDiagram> {
        match self {
            KnotExpression::Torus(p, q) => match normalize_torus(*p, *q)? {
                Some((a, b)) => torus_knot(a, b),
                None => Ok(PlanarDiagram::unknot()),
            },
            KnotExpression::Named(name) => Ok(reg.diagram(name)?.clone()),
            KnotExpression::Pd(d) => Ok(d.clone()),
            KnotExpression::Mirror(e) => Ok(e.diagram(reg)?.mirror()),
            KnotExpression::Sum(a, b) => Ok(a.diagram(reg)?.connected_sum(&b.diagram(reg)?)),
        }
    }
}

impl fmt::Display for KnotExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpression::Torus(p, q) => write!(f, "T({p},{q})"),
            KnotExpression::Named(n) => write!(f, "knot:{n}"),
            KnotExpression::Pd(d) => write!(f, "{d}"),
            KnotExpression::Mirror(e) => write!(f, "m({e})"),
            // The grammar has no grouping, so `a#(b#c)` prints as `a#b#c`,
            // which is the same knot.
            KnotExpression::Sum(a, b) => write!(f, "{a}#{b}"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::MalformedSyntax(format!(
            "{what} at offset {}",
            self.i
        )))
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.s[self.i..].starts_with(tok.as_bytes()) {
            self.i += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&format!("expected '{tok}'"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.i;
        if self.s.get(self.i) == Some(&b'-') {
            self.i += 1;
        }
        while self.s.get(self.i).is_some_and(u8::is_ascii_digit) {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .map_or_else(|| self.err("expected an integer"), Ok)
    }

    fn expr(&mut self) -> Result<KnotExpression> {
        let mut e = self.term()?;
        while self.eat("#") {
            e = e.sum(self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<KnotExpression> {
        if self.eat("m(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e.mirror());
        }
        if self.eat("T(") {
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(")")?;
            return Ok(KnotExpression::Torus(p, q));
        }
        if self.eat("knot:") {
            let start = self.i;
            while self
                .s
                .get(self.i)
                .is_some_and(|c| c.is_ascii_alphanumeric() || b"_-.".contains(c))
            {
                self.i += 1;
            }
            if start == self.i {
                return self.err("empty knot name");
            }
            let name = String::from_utf8_lossy(&self.s[start..self.i]).into_owned();
            return Ok(KnotExpression::Named(name));
        }
        if self.s[self.i..].starts_with(b"PD[") {
            let start = self.i;
            let mut depth = 0;
            while let Some(&c) = self.s.get(self.i) {
                self.i += 1;
                match c {
                    b'[' => depth += 1,
                    b']' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
            }
            if depth != 0 {
                return self.err("unterminated PD code");
            }
            let code = std::str::from_utf8(&self.s[start..self.i]).expect("ascii");
            return Ok(KnotExpression::Pd(code.parse()?));
        }
        self.err("expected T(p,q), knot:<name>, PD[...] or m(...)")
    }
}

impl FromStr for KnotExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if !compact.is_ascii() {
            return Err(Error::MalformedSyntax("non-ASCII input".into()));
        }
        let mut p = Parser {
            s: compact.as_bytes(),
            i: 0,
        };
        let e = p.expr()?;
        if p.i != p.s.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

impl Default for KnotRegistry {
    /// Small built-in table of prime knots.
    fn default() -> Self {
        let mut r = KnotRegistry {
            entries: BTreeMap::new(),
        };
        let builtin: [(&str, &str, Option<i64>); 5] = [
            ("unknot", "PD[]", Some(0)),
            ("3_1", "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]", Some(1)),
            (
                "4_1",
                "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]",
                Some(0),
            ),
            (
                "5_1",
                "PD[X[6,2,7,1],X[8,4,9,3],X[10,6,1,5],X[2,8,3,7],X[4,10,5,9]]",
                Some(2),
            ),
            (
                "5_2",
                "PD[X[1,4,2,5],X[3,8,4,9],X[5,10,6,1],X[9,6,10,7],X[7,2,8,3]]",
                None,
            ),
        ];
        for (name, pd, tau) in builtin {
            r.register(name, pd.parse().expect("built-in PD code is valid"), tau);
        }
        r
    }
}

impl KnotRegistry {
    pub fn empty() -> Self {
        KnotRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, d: PlanarDiagram, tau: Option<i64>) {
        self.entries.insert(name.to_string(), (d, tau));
    }

    pub fn diagram(&self, name: &str) -> Result<&PlanarDiagram> {
        self.entries
            .get(name)
            .map(|e| &e.0)
            .ok_or_else(|| Error::UnknownKnot(name.to_string()))
    }

    pub fn tau(&self, name: &str) -> Option<i64> {
        self.entries.get(name).and_then(|e| e.1)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> KnotExpression {
        s.parse().unwrap()
    }

    #[test]
    fn grammar() {
        assert_eq!(parse("T(2,3)"), KnotExpression::Torus(2, 3));
        assert_eq!(
            parse(" m( T(2, -5) ) "),
            KnotExpression::Torus(2, -5).mirror()
        );
        assert_eq!(
            parse("T(2,3)#T(2,5)#knot:4_1"),
            KnotExpression::Torus(2, 3)
                .sum(KnotExpression::Torus(2, 5))
                .sum(KnotExpression::Named("4_1".into()))
        );
        assert!(matches!(parse("PD[X[1,1,2,2]]"), KnotExpression::Pd(_)));
        for bad in [
            "",
            "T(2,3",
            "T(2;3)",
            "m(T(2,3)",
            "T(2,3)#",
            "knot:",
            "X(1)",
            "T(2,3)T(2,5)",
        ] {
            assert!(
                matches!(
                    bad.parse::<KnotExpression>(),
                    Err(Error::MalformedSyntax(_))
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn display_round_trips() {
        let reg = KnotRegistry::default();
        for s in [
            "T(2,3)",
            "m(T(2,3))#knot:4_1",
            "T(2,3)#T(3,4)#T(2,5)",
            "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]",
        ] {
            let e = parse(s);
            let back = parse(&e.to_string());
            assert_eq!(back.canonical(&reg).unwrap(), e.canonical(&reg).unwrap());
        }
        let nested = KnotExpression::Torus(2, 3)
            .sum(KnotExpression::Torus(2, 5).sum(KnotExpression::Torus(2, 7)));
        assert_eq!(
            parse(&nested.to_string()).canonical(&reg).unwrap(),
            nested.canonical(&reg).unwrap()
        );
    }

    #[test]
    fn canonical_form() {
        let reg = KnotRegistry::default();
        let c = |s: &str| parse(s).canonical(&reg).unwrap();
        assert_eq!(c("T(2,3)#T(2,5)"), c("T(5,2)#T(3,2)"));
        assert_eq!(c("m(T(2,3))"), c("T(2,-3)"));
        assert_eq!(c("m(m(T(2,3)))"), c("T(2,3)"));
        assert_eq!(c("m(T(2,3)#knot:4_1)"), c("T(-2,3)#m(knot:4_1)"));
        assert!(c("T(1,7)#knot:unknot#PD[]").is_unknot());
        assert_eq!(c("T(2,3)").mirror(), c("m(T(2,3))"));
        assert_eq!(c("T(2,5)").repeat(3), c("T(2,5)#T(2,5)#T(2,5)"));
        assert!(matches!(
            parse("T(2,4)").canonical(&reg),
            Err(Error::NonCoprime { .. })
        ));
        assert!(matches!(
            parse("knot:nope").canonical(&reg),
            Err(Error::UnknownKnot(_))
        ));
        // PD leaves are keyed by canonical code, so relabelled codes agree.
        assert_eq!(
            c("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]"),
            c("PD[X[5,3,6,2],X[1,5,2,4],X[3,1,4,6]]")
        );
    }

    #[test]
    fn diagrams() {
        let reg = KnotRegistry::default();
        let d = parse("T(2,3)#m(T(2,3))").diagram(&reg).unwrap();
        assert_eq!(d.crossing_count(), 6);
        assert_eq!(d.writhe(), 0);
        assert_eq!(parse("T(3,2)").diagram(&reg).unwrap().crossing_count(), 3);
        assert_eq!(parse("T(1,5)").diagram(&reg).unwrap().crossing_count(), 0);
        for name in ["3_1", "4_1", "5_1", "5_2"] {
            assert!(reg.diagram(name).is_ok());
        }
        assert_eq!(reg.diagram("3_1").unwrap().writhe(), 3);
        assert_eq!(reg.diagram("5_1").unwrap().writhe(), 5);
    }
}
