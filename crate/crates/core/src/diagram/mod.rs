//! Oriented knot diagrams stored as planar-diagram (PD) codes.
//!
//! A crossing `X[a,b,c,d]` lists its four arc labels counterclockwise,
//! starting from the incoming under-strand, so the under-strand always runs
//! `a -> c`. The orientation of the over-strand (and with it the crossing
//! sign) is recovered by walking the knot once.

mod builder;
mod pd;

pub(crate) use builder::{Axis, DiagramBuilder};

use std::fmt;

use crate::error::{Error, Result};

/// One crossing of a PD code together with its sign under the diagram's
/// orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    arcs: [u32; 4],
    sign: i8,
}

impl Crossing {
    pub fn arcs(&self) -> [u32; 4] {
        self.arcs
    }

    /// `+1` when the over-strand enters at position `d`, `-1` when it enters at `b`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Arc pairs of the 0-smoothing (`(a,b)(c,d)`), as slot indices.
    pub const ZERO_SMOOTHING: [(usize, usize); 2] = [(0, 1), (2, 3)];
    /// Arc pairs of the 1-smoothing (`(a,d)(b,c)`), as slot indices.
    pub const ONE_SMOOTHING: [(usize, usize); 2] = [(0, 3), (1, 2)];

    /// The oriented (Seifert) smoothing of this crossing.
    pub fn oriented_smoothing(&self) -> [(usize, usize); 2] {
        if self.is_positive() {
            Self::ZERO_SMOOTHING
        } else {
            Self::ONE_SMOOTHING
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    n_arcs: u32,
}

/// Slot of a crossing: (crossing index, position 0..4).
pub(crate) type Slot = (usize, usize);

struct Walk {
    signs: Vec<i8>,
    /// Arc labels in orientation order.
    arc_order: Vec<u32>,
    /// For each label, the slot where the arc ends (entry slot).
    end_slot: Vec<Slot>,
}

impl PlanarDiagram {
    /// The 0-crossing unknot `PD[]`.
    pub fn unknot() -> Self {
        PlanarDiagram {
            crossings: vec![],
            n_arcs: 1,
        }
    }

    /// Validates raw crossing tuples and derives crossing signs.
    pub fn from_tuples(tuples: &[[u32; 4]]) -> Result<Self> {
        if tuples.is_empty() {
            return Ok(Self::unknot());
        }
        let n_arcs = 2 * tuples.len() as u32;
        let mut count = vec![0usize; n_arcs as usize + 1];
        for t in tuples {
            for &l in t {
                if l == 0 || l > n_arcs {
                    let c = tuples.iter().flatten().filter(|&&x| x == l).count();
                    return Err(Error::ArcMultiplicity { label: l, count: c });
                }
                count[l as usize] += 1;
            }
        }
        if let Some(l) = (1..=n_arcs).find(|&l| count[l as usize] != 2) {
            return Err(Error::ArcMultiplicity {
                label: l,
                count: count[l as usize],
            });
        }
        let mut d = PlanarDiagram {
            crossings: tuples
                .iter()
                .map(|&arcs| Crossing { arcs, sign: 0 })
                .collect(),
            n_arcs,
        };
        let walk = d.walk()?;
        for (x, s) in d.crossings.iter_mut().zip(walk.signs) {
            x.sign = s;
        }
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_arcs(&self) -> u32 {
        self.n_arcs
    }

    pub fn tuples(&self) -> Vec<[u32; 4]> {
        self.crossings.iter().map(|x| x.arcs).collect()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    pub fn positive_count(&self) -> usize {
        self.crossings.iter().filter(|x| x.is_positive()).count()
    }

    pub fn negative_count(&self) -> usize {
        self.crossing_count() - self.positive_count()
    }

    fn slots_of(&self) -> Vec<[Slot; 2]> {
        let mut slots = vec![[(usize::MAX, 0); 2]; self.n_arcs as usize + 1];
        let mut filled = vec![0usize; self.n_arcs as usize + 1];
        for (ci, x) in self.crossings.iter().enumerate() {
            for (p, &l) in x.arcs.iter().enumerate() {
                slots[l as usize][filled[l as usize]] = (ci, p);
                filled[l as usize] += 1;
            }
        }
        slots
    }

    /// Walks the knot once starting with the under-strand of crossing 0.
    fn walk(&self) -> Result<Walk> {
        let n = self.crossings.len();
        let slots = self.slots_of();
        let mut signs = vec![0i8; n];
        let mut entered = vec![[false; 4]; n];
        let mut arc_order = Vec::with_capacity(2 * n);
        let mut end_slot = vec![(0, 0); self.n_arcs as usize + 1];

        let start: Slot = (0, 0);
        let mut cur = start;
        let mut steps = 0;
        loop {
            let (ci, p) = cur;
            if entered[ci][p] {
                break;
            }
            entered[ci][p] = true;
            match p {
                0 => {}
                1 => signs[ci] = -1,
                2 => return Err(Error::InconsistentOrientation(ci)),
                _ => signs[ci] = 1,
            }
            end_slot[self.crossings[ci].arcs[p] as usize] = cur;
            let exit = (ci, (p + 2) % 4);
            let label = self.crossings[ci].arcs[exit.1];
            arc_order.push(label);
            let [s0, s1] = slots[label as usize];
            cur = if s0 == exit { s1 } else { s0 };
            steps += 1;
            if cur == start || steps > 2 * n {
                break;
            }
        }
        if steps != 2 * n || cur != start {
            return Err(Error::MultiComponent {
                visited: 2 * steps,
                total: 4 * n,
            });
        }
        Ok(Walk {
            signs,
            arc_order,
            end_slot,
        })
    }

    /// Arc labels in orientation order, starting with the arc leaving
    /// crossing 0 along its under-strand.
    pub fn arc_order(&self) -> Vec<u32> {
        if self.crossings.is_empty() {
            return vec![1];
        }
        self.walk().expect("validated diagram").arc_order
    }

    /// Over/under swapped at every crossing.
    pub fn mirror(&self) -> Self {
        let tuples: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.arcs;
                if x.is_positive() {
                    [d, a, b, c]
                } else {
                    [b, c, d, a]
                }
            })
            .collect();
        Self::from_tuples(&tuples).expect("mirror of a valid diagram is valid")
    }

    /// Same diagram with the orientation reversed; arc `i` becomes `n+1-i`.
    pub fn reverse(&self) -> Self {
        let n = self.n_arcs;
        let tuples: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.arcs.map(|l| n + 1 - l);
                [c, d, a, b]
            })
            .collect();
        Self::from_tuples(&tuples).expect("reverse of a valid diagram is valid")
    }

    /// Connected sum, spliced at arc 1 of each summand; arcs of the result
    /// are renumbered in orientation order.
    pub fn connected_sum(&self, other: &Self) -> Self {
        if self.crossings.is_empty() {
            return other.clone();
        }
        if other.crossings.is_empty() {
            return self.clone();
        }
        let off = self.n_arcs;
        let mut tuples: Vec<[u32; 4]> = self.tuples();
        tuples.extend(other.crossings.iter().map(|x| x.arcs.map(|l| l + off)));

        let wa = self.walk().expect("validated diagram");
        let wb = other.walk().expect("validated diagram");
        let nb = self.crossings.len();
        // Arc 1 of `self` now runs into the end of other's arc 1, and other's
        // arc 1 (relabelled 1+off) runs into the end of self's arc 1.
        let (be_c, be_p) = wb.end_slot[1];
        tuples[nb + be_c][be_p] = 1;
        let (ae_c, ae_p) = wa.end_slot[1];
        tuples[ae_c][ae_p] = 1 + off;
        Self::from_tuples(&tuples)
            .expect("connected sum is valid")
            .relabeled()
    }

    /// Number of circles in the oriented smoothing.
    pub fn seifert_circle_count(&self) -> usize {
        if self.crossings.is_empty() {
            return 1;
        }
        let mut uf = UnionFind::new(self.n_arcs as usize + 1);
        for x in &self.crossings {
            for (i, j) in x.oriented_smoothing() {
                uf.union(x.arcs[i] as usize, x.arcs[j] as usize);
            }
        }
        (1..=self.n_arcs as usize)
            .filter(|&l| uf.find(l) == l)
            .count()
    }

    fn relabel_from(&self, order: &[u32], start: usize) -> Vec<[u32; 4]> {
        let n = order.len();
        let mut map = vec![0u32; n + 1];
        for i in 0..n {
            map[order[(start + i) % n] as usize] = i as u32 + 1;
        }
        self.crossings
            .iter()
            .map(|x| x.arcs.map(|l| map[l as usize]))
            .collect()
    }

    /// Arcs renumbered `1..n` in orientation order starting from the
    /// lowest-labelled arc; crossing order is kept.
    pub fn relabeled(&self) -> Self {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let order = self.arc_order();
        let start = order.iter().position(|&l| l == 1).unwrap_or(0);
        Self::from_tuples(&self.relabel_from(&order, start))
            .expect("relabelling preserves validity")
    }

    /// Canonical representative: over all choices of starting arc, the
    /// lexicographically least sorted tuple list. Two diagrams that differ
    /// only by arc relabelling or crossing order have equal canonical forms.
    pub fn canonical(&self) -> Self {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let order = self.arc_order();
        let best = (0..order.len())
            .map(|start| {
                let mut t = self.relabel_from(&order, start);
                t.sort_unstable();
                t
            })
            .min()
            .expect("non-empty");
        Self::from_tuples(&best).expect("relabelling preserves validity")
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.crossings.len() == other.crossings.len() && self.canonical() == other.canonical()
    }
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
