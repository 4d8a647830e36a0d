//! Certified intervals for `t_ν` of connected sums, closed under the
//! connected-sum inequalities
//! `t(A) + t(B) <= t(A#B) <= min(t(A) - t(-B), t(B) - t(-A))`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::expr::{CanonicalKnot, KnotRegistry, Leaf};
use super::nu::torus_tau;
use crate::error::{Error, Result};

/// Integer interval; `None` is an infinite end.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub fn exact(v: i64) -> Self {
        Interval {
            lo: Some(v),
            hi: Some(v),
        }
    }

    pub fn at_least(v: i64) -> Self {
        Interval {
            lo: Some(v),
            hi: None,
        }
    }

    pub fn at_most(v: i64) -> Self {
        Interval {
            lo: None,
            hi: Some(v),
        }
    }

    pub fn unbounded() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|l| l <= v) && self.hi.is_none_or(|h| v <= h)
    }

    /// Whether `self` lies inside `other`.
    pub fn within(&self, other: &Interval) -> bool {
        let lo_ok = match (self.lo, other.lo) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a >= b,
        };
        let hi_ok = match (self.hi, other.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: max_opt(self.lo, other.lo),
            hi: min_opt(self.hi, other.hi),
        }
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    max_opt(a.map(|x| -x), b.map(|x| -x)).map(|x| -x)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            Some(l) => write!(f, "[{l}, ")?,
            None => f.write_str("(-inf, ")?,
        }
        match self.hi {
            Some(h) => write!(f, "{h}]"),
            None => f.write_str("+inf)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub interval: Interval,
    pub provenance: Vec<String>,
}

/// A derived interval together with the rules that produced each end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub interval: Interval,
    pub lo_reason: String,
    pub hi_reason: String,
}

/// Known intervals for `t_ν` per invariant name and canonical knot.
#[derive(Clone, Debug, Default)]
pub struct BoundsLedger {
    entries: BTreeMap<(String, CanonicalKnot), BoundEntry>,
}

/// Multiset of leaves as (leaf, multiplicity) with leaves sorted.
type Counts = Vec<(Leaf, usize)>;

fn counts_of(k: &CanonicalKnot) -> Counts {
    let mut out: Counts = Vec::new();
    for l in k.leaves() {
        match out.last_mut() {
            Some((last, n)) if last == l => *n += 1,
            _ => out.push((l.clone(), 1)),
        }
    }
    out
}

fn knot_of(c: &[(Leaf, usize)]) -> CanonicalKnot {
    CanonicalKnot::from_leaves(
        c.iter()
            .flat_map(|(l, n)| std::iter::repeat_n(l.clone(), *n))
            .collect(),
    )
}

/// Removes pairs `L # -L`, which are slice, so `t_ν` is unchanged.
pub fn slice_reduce(k: &CanonicalKnot) -> CanonicalKnot {
    let mut c = counts_of(k);
    for i in 0..c.len() {
        let m = c[i].0.mirror();
        if m == c[i].0 {
            c[i].1 %= 2;
        } else if let Some(j) = c.iter().position(|x| x.0 == m) {
            let n = c[i].1.min(c[j].1);
            c[i].1 -= n;
            c[j].1 -= n;
        }
    }
    knot_of(&c)
}

/// A sub-multiset of the leaf table: multiplicity per leaf.
type Sub = Vec<u32>;

/// Bounds over sums of leaves drawn from a fixed table that is closed
/// under mirroring.
struct Propagator<'a> {
    ledger: &'a BoundsLedger,
    invariant: &'a str,
    registry: Option<&'a KnotRegistry>,
    leaves: Vec<Leaf>,
    mirror: Vec<usize>,
    lo_memo: HashMap<Sub, (Option<i64>, String)>,
    hi_memo: HashMap<Sub, (Option<i64>, String)>,
}

impl<'a> Propagator<'a> {
    fn new(
        ledger: &'a BoundsLedger,
        invariant: &'a str,
        registry: Option<&'a KnotRegistry>,
        k: &CanonicalKnot,
    ) -> Self {
        let mut leaves: Vec<Leaf> = k
            .leaves()
            .iter()
            .flat_map(|l| [l.clone(), l.mirror()])
            .collect();
        leaves.sort();
        leaves.dedup();
        let mirror = leaves
            .iter()
            .map(|l| {
                leaves
                    .binary_search(&l.mirror())
                    .expect("table is closed under mirroring")
            })
            .collect();
        Propagator {
            ledger,
            invariant,
            registry,
            leaves,
            mirror,
            lo_memo: HashMap::new(),
            hi_memo: HashMap::new(),
        }
    }

    fn sub_of(&self, k: &CanonicalKnot) -> Sub {
        let mut c = vec![0; self.leaves.len()];
        for l in k.leaves() {
            c[self.leaves.binary_search(l).expect("leaf in table")] += 1;
        }
        c
    }

    fn knot(&self, c: &[u32]) -> CanonicalKnot {
        CanonicalKnot::from_leaves(
            c.iter()
                .zip(&self.leaves)
                .flat_map(|(&n, l)| std::iter::repeat_n(l.clone(), n as usize))
                .collect(),
        )
    }

    fn mirror_of(&self, c: &[u32]) -> Sub {
        let mut m = vec![0; c.len()];
        for (i, &n) in c.iter().enumerate() {
            m[self.mirror[i]] += n;
        }
        m
    }

    /// All splits `A # B` with both parts non-empty, each unordered pair once.
    fn splits(c: &[u32]) -> Vec<(Sub, Sub)> {
        let total: u32 = c.iter().sum();
        let mut out = Vec::new();
        let mut pick = vec![0u32; c.len()];
        loop {
            let size: u32 = pick.iter().sum();
            if size > 0 && size < total {
                let rest: Sub = c.iter().zip(&pick).map(|(n, k)| n - k).collect();
                if pick <= rest {
                    out.push((pick.clone(), rest));
                }
            }
            // Next pick in mixed radix.
            let mut i = 0;
            loop {
                if i == c.len() {
                    return out;
                }
                if pick[i] < c[i] {
                    pick[i] += 1;
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    /// Closed form `2τ - 1` when ν is τ and every leaf has a known τ.
    fn closed_form(&self, c: &[u32]) -> Option<i64> {
        if self.invariant != "tau" {
            return None;
        }
        let mut tau = 0;
        for (l, &n) in self.leaves.iter().zip(c).filter(|x| *x.1 > 0) {
            let t = match l {
                Leaf::Torus(p, q) => torus_tau(*p, *q),
                Leaf::Named { name, mirrored } => {
                    let t = self.registry?.tau(name)?;
                    if *mirrored {
                        -t
                    } else {
                        t
                    }
                }
                Leaf::Pd(_) => return None,
            };
            tau += t * n as i64;
        }
        Some(2 * tau - 1)
    }

    fn stored(&self, c: &[u32]) -> Option<&'a BoundEntry> {
        self.ledger.get(self.invariant, &self.knot(c))
    }

    /// Best lower bound; never depends on upper bounds.
    fn lo(&mut self, c: &Sub) -> (Option<i64>, String) {
        if let Some(v) = self.lo_memo.get(c) {
            return v.clone();
        }
        let mut best: (Option<i64>, String) = (None, "no lower bound".into());
        let offer = |v: Option<i64>, why: &dyn Fn() -> String, best: &mut (Option<i64>, String)| {
            if let Some(v) = v {
                if best.0.is_none_or(|b| v > b) {
                    *best = (Some(v), why());
                }
            }
        };
        if c.iter().all(|&n| n == 0) {
            offer(Some(-1), &|| "unknot".into(), &mut best);
        }
        if let Some(e) = self.stored(c) {
            offer(
                e.interval.lo,
                &|| format!("ledger entry ({})", e.provenance.join("; ")),
                &mut best,
            );
        }
        if let Some(v) = self.closed_form(c) {
            offer(Some(v), &|| "closed form 2*tau - 1".into(), &mut best);
        }
        for (a, b) in Self::splits(c) {
            let (la, _) = self.lo(&a);
            let (lb, _) = self.lo(&b);
            if let (Some(x), Some(y)) = (la, lb) {
                offer(
                    Some(x + y),
                    &|| format!("lo({}) + lo({}) = {x} + {y}", self.knot(&a), self.knot(&b)),
                    &mut best,
                );
            }
        }
        self.lo_memo.insert(c.clone(), best.clone());
        best
    }

    fn hi(&mut self, c: &Sub) -> (Option<i64>, String) {
        if let Some(v) = self.hi_memo.get(c) {
            return v.clone();
        }
        let mut best: (Option<i64>, String) = (None, "no upper bound".into());
        let offer = |v: Option<i64>, why: &dyn Fn() -> String, best: &mut (Option<i64>, String)| {
            if let Some(v) = v {
                if best.0.is_none_or(|b| v < b) {
                    *best = (Some(v), why());
                }
            }
        };
        if c.iter().all(|&n| n == 0) {
            offer(Some(-1), &|| "unknot".into(), &mut best);
        }
        if let Some(e) = self.stored(c) {
            offer(
                e.interval.hi,
                &|| format!("ledger entry ({})", e.provenance.join("; ")),
                &mut best,
            );
        }
        if let Some(v) = self.closed_form(c) {
            offer(Some(v), &|| "closed form 2*tau - 1".into(), &mut best);
        }
        // K # -K is slice, so t(K) + t(-K) <= t(U) = -1.
        let mk = self.mirror_of(c);
        if let (Some(l), _) = self.lo(&mk) {
            offer(
                Some(-1 - l),
                &|| format!("-1 - lo({}) = -1 - {l}", self.knot(&mk)),
                &mut best,
            );
        }
        for (a, b) in Self::splits(c) {
            for (x, y) in [(&a, &b), (&b, &a)] {
                let (hx, _) = self.hi(x);
                let my = self.mirror_of(y);
                let (lmy, _) = self.lo(&my);
                if let (Some(h), Some(l)) = (hx, lmy) {
                    offer(
                        Some(h - l),
                        &|| format!("hi({}) - lo({}) = {h} - {l}", self.knot(x), self.knot(&my)),
                        &mut best,
                    );
                }
            }
        }
        self.hi_memo.insert(c.clone(), best.clone());
        best
    }
}

impl BoundsLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an interval, intersecting with anything already known.
    pub fn insert(
        &mut self,
        invariant: &str,
        knot: &CanonicalKnot,
        interval: Interval,
        provenance: &str,
    ) -> Result<()> {
        if interval.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "empty interval {interval} for {knot}"
            )));
        }
        let key = (invariant.to_string(), knot.clone());
        let entry = self.entries.entry(key).or_insert(BoundEntry {
            interval: Interval::unbounded(),
            provenance: vec![],
        });
        let merged = entry.interval.intersect(&interval);
        if merged.is_empty() {
            return Err(Error::InconsistentLedger(format!(
                "t_{invariant}({knot}): {} meets {interval} from {provenance}",
                entry.interval
            )));
        }
        entry.interval = merged;
        entry.provenance.push(provenance.to_string());
        Ok(())
    }

    pub fn get(&self, invariant: &str, knot: &CanonicalKnot) -> Option<&BoundEntry> {
        self.entries.get(&(invariant.to_string(), knot.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CanonicalKnot, &BoundEntry)> {
        self.entries.iter().map(|((i, k), e)| (i.as_str(), k, e))
    }

    /// Tightest interval for `t_invariant(knot)` derivable from the ledger
    /// by the connected-sum inequalities, the slice relation `K # -K ~ U`
    /// and, for `tau`, the closed form. Every prime summand left after
    /// cancelling mirror pairs must have a ledger entry or a closed form.
    pub fn propagate(
        &self,
        invariant: &str,
        knot: &CanonicalKnot,
        registry: Option<&KnotRegistry>,
    ) -> Result<Derivation> {
        let knot = &slice_reduce(knot);
        let mut p = Propagator::new(self, invariant, registry, knot);
        for leaf in knot.leaves() {
            let single = p.sub_of(&CanonicalKnot::from_leaves(vec![leaf.clone()]));
            if p.stored(&single).is_none() && p.closed_form(&single).is_none() {
                return Err(Error::MissingLeaf(format!("{leaf} (t_{invariant})")));
            }
        }
        let c = p.sub_of(knot);
        let (lo, lo_reason) = p.lo(&c);
        let (hi, hi_reason) = p.hi(&c);
        let interval = Interval { lo, hi };
        if interval.is_empty() {
            return Err(Error::InconsistentLedger(format!(
                "t_{invariant}({knot}), derived {interval}"
            )));
        }
        Ok(Derivation {
            interval,
            lo_reason,
            hi_reason,
        })
    }
}
