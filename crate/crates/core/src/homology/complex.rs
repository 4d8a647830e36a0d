//! Chain complexes over the dotted cobordism category of a planar tangle,
//! stored as sparse matrices of disk-family morphisms, together with
//! Gaussian elimination.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};

use super::field::Field;
use super::frobenius::Algebra;
use super::tangle::{composition_skeleton, mor_add, MatchingTable, Mor, PairCycles, Pos, Skeleton};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Obj {
    pub m: u32,
    pub h: i32,
    pub q: i32,
    pub alive: bool,
}

/// Limits on the size and duration of a computation.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Budget {
    pub max_entries: usize,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn check(&self, entries: usize) -> Result<()> {
        if entries > self.max_entries {
            return Err(Error::ResourceBudgetExceeded(format!(
                "{entries} matrix entries exceed the limit of {}",
                self.max_entries
            )));
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::ResourceBudgetExceeded("time limit reached".into()));
            }
        }
        Ok(())
    }
}

/// A complex over the cobordism category of a tangle with boundary arcs
/// `boundary`. Objects are crossingless matchings with homological and
/// quantum gradings; the differential is a sparse matrix of morphisms.
pub struct ScanComplex<F: Field> {
    pub(crate) alg: Algebra<F>,
    pub(crate) boundary: Vec<u32>,
    pub(crate) matchings: MatchingTable,
    pub(crate) objs: Vec<Obj>,
    pub(crate) out: Vec<FxHashMap<u32, Mor<F>>>,
    pub(crate) inc: Vec<FxHashSet<u32>>,
    pub(crate) entries: usize,
    pub(crate) alive: usize,
    compose_cache: FxHashMap<(u32, u32, u32), Arc<Skeleton>>,
}

impl<F: Field> ScanComplex<F> {
    /// The complex of the empty tangle: one object in bidegree (0, 0).
    pub fn new(h: F, u: F) -> Self {
        let mut matchings = MatchingTable::default();
        let m = matchings.intern(Vec::new());
        ScanComplex {
            alg: Algebra::new(h, u),
            boundary: Vec::new(),
            matchings,
            objs: vec![Obj {
                m,
                h: 0,
                q: 0,
                alive: true,
            }],
            out: vec![FxHashMap::default()],
            inc: vec![FxHashSet::default()],
            entries: 0,
            alive: 1,
            compose_cache: FxHashMap::default(),
        }
    }

    /// Arc labels on the boundary of the tangle scanned so far, sorted.
    pub fn boundary(&self) -> &[u32] {
        &self.boundary
    }

    pub fn object_count(&self) -> usize {
        self.alive
    }

    pub fn entry_count(&self) -> usize {
        self.entries
    }

    /// Bidegrees `(h, q)` of the remaining objects.
    pub fn gradings(&self) -> Vec<(i32, i32)> {
        self.objs
            .iter()
            .filter(|o| o.alive)
            .map(|o| (o.h, o.q))
            .collect()
    }

    pub(crate) fn reset(&mut self, boundary: Vec<u32>, matchings: MatchingTable) {
        self.boundary = boundary;
        self.matchings = matchings;
        self.objs.clear();
        self.out.clear();
        self.inc.clear();
        self.entries = 0;
        self.alive = 0;
        self.compose_cache.clear();
    }

    pub(crate) fn push_obj(&mut self, o: Obj) -> u32 {
        self.objs.push(o);
        self.out.push(FxHashMap::default());
        self.inc.push(FxHashSet::default());
        self.alive += 1;
        (self.objs.len() - 1) as u32
    }

    pub(crate) fn add_term(&mut self, a: u32, b: u32, pat: u32, c: F) {
        if c.is_zero() {
            return;
        }
        let map = &mut self.out[a as usize];
        let existed = map.contains_key(&b);
        let e = map.entry(b).or_default();
        mor_add(e, pat, c);
        let empty = e.is_empty();
        match (existed, empty) {
            (false, false) => {
                self.inc[b as usize].insert(a);
                self.entries += 1;
            }
            (true, true) => {
                map.remove(&b);
                self.inc[b as usize].remove(&a);
                self.entries -= 1;
            }
            (false, true) => {
                map.remove(&b);
            }
            (true, false) => {}
        }
    }

    fn matching(&self, id: u32) -> &[Pos] {
        self.matchings.get(id)
    }

    /// `g ∘ f` for `f: m1 -> m2`, `g: m2 -> m3`, scaled by `scale`.
    fn compose(&mut self, m: (u32, u32, u32), f: &Mor<F>, g: &Mor<F>, scale: &F) -> Mor<F> {
        let sk = match self.compose_cache.get(&m) {
            Some(s) => s.clone(),
            None => {
                let s = Arc::new(composition_skeleton(
                    self.matching(m.0),
                    self.matching(m.1),
                    self.matching(m.2),
                ));
                self.compose_cache.insert(m, s.clone());
                s
            }
        };
        let mut res = Mor::new();
        for (pf, cf) in f {
            for (pg, cg) in g {
                let c = cf.mul(cg).mul(scale);
                sk.apply(&mut self.alg, *pf, *pg, &c, &mut |p, v| {
                    mor_add(&mut res, p, v)
                });
            }
        }
        res
    }

    /// Coefficient of the undotted identity if `a -> b` is an isomorphism.
    fn iso_coef(&self, a: u32, b: u32) -> Option<F> {
        let (oa, ob) = (&self.objs[a as usize], &self.objs[b as usize]);
        if !oa.alive || !ob.alive || oa.m != ob.m || oa.q != ob.q || ob.h != oa.h + 1 {
            return None;
        }
        let mor = self.out[a as usize].get(&b)?;
        mor.iter().find(|(p, _)| *p == 0).map(|(_, c)| c.clone())
    }

    fn cost(&self, a: u32, b: u32) -> u64 {
        let ia = self.inc[b as usize].len().saturating_sub(1) as u64;
        let oa = self.out[a as usize].len().saturating_sub(1) as u64;
        ia * oa
    }

    /// Gaussian elimination of the isomorphism `c: a -> b`. Returns the
    /// entries that were created or modified.
    fn cancel(&mut self, a: u32, b: u32, c: &F) -> Vec<(u32, u32)> {
        let cinv = c.inv().neg();
        let ma = self.objs[a as usize].m;
        let sources: Vec<(u32, Mor<F>)> = self.inc[b as usize]
            .iter()
            .filter(|&&x| x != a)
            .map(|&x| (x, self.out[x as usize][&b].clone()))
            .collect();
        let targets: Vec<(u32, Mor<F>)> = self.out[a as usize]
            .iter()
            .filter(|(&y, _)| y != b)
            .map(|(&y, m)| (y, m.clone()))
            .collect();
        let mut touched = Vec::with_capacity(sources.len() * targets.len());
        for (x, phi) in &sources {
            let mx = self.objs[*x as usize].m;
            for (y, psi) in &targets {
                let my = self.objs[*y as usize].m;
                let prod = self.compose((mx, ma, my), phi, psi, &cinv);
                for (p, v) in prod {
                    self.add_term(*x, *y, p, v);
                }
                touched.push((*x, *y));
            }
        }
        self.remove_obj(a);
        self.remove_obj(b);
        touched
    }

    fn remove_obj(&mut self, a: u32) {
        let ins: Vec<u32> = self.inc[a as usize].drain().collect();
        for x in ins {
            self.out[x as usize].remove(&a);
            self.entries -= 1;
        }
        let outs: Vec<u32> = self.out[a as usize].drain().map(|(y, _)| y).collect();
        for y in outs {
            self.inc[y as usize].remove(&a);
            self.entries -= 1;
        }
        self.out[a as usize].shrink_to_fit();
        self.inc[a as usize].shrink_to_fit();
        self.objs[a as usize].alive = false;
        self.alive -= 1;
    }

    /// Eliminates entries selected by `pick` (returning the pivot
    /// coefficient) until none remain, cheapest pivots first.
    fn eliminate(
        &mut self,
        budget: &Budget,
        pick: impl Fn(&Self, u32, u32) -> Option<F>,
    ) -> Result<usize> {
        let mut heap = BinaryHeap::new();
        for a in 0..self.objs.len() as u32 {
            if !self.objs[a as usize].alive {
                continue;
            }
            for &b in self.out[a as usize].keys() {
                if pick(self, a, b).is_some() {
                    heap.push(Reverse((self.cost(a, b), a, b)));
                }
            }
        }
        let mut done = 0usize;
        while let Some(Reverse((cost, a, b))) = heap.pop() {
            let Some(c) = pick(self, a, b) else { continue };
            let now = self.cost(a, b);
            if now > cost {
                heap.push(Reverse((now, a, b)));
                continue;
            }
            for (x, y) in self.cancel(a, b, &c) {
                if pick(self, x, y).is_some() {
                    heap.push(Reverse((self.cost(x, y), x, y)));
                }
            }
            done += 1;
            if done.is_multiple_of(256) {
                budget.check(self.entries)?;
            }
        }
        budget.check(self.entries)?;
        Ok(done)
    }

    /// Cancels every isomorphism in the differential.
    pub(crate) fn reduce_isomorphisms(&mut self, budget: &Budget) -> Result<usize> {
        self.eliminate(budget, |s, a, b| s.iso_coef(a, b))
    }

    /// For a closed diagram: cancels entries in order of increasing quantum
    /// jump, which runs the spectral sequence of the quantum filtration.
    /// Returns the gradings of the surviving objects.
    pub(crate) fn reduce_filtered(&mut self, budget: &Budget) -> Result<Vec<(i32, i32)>> {
        if !self.boundary.is_empty() {
            return Err(Error::InternalInvariantViolation(
                "filtered reduction needs a closed diagram".into(),
            ));
        }
        self.reduce_isomorphisms(budget)?;
        loop {
            let jump = self
                .objs
                .iter()
                .enumerate()
                .filter(|(_, o)| o.alive)
                .flat_map(|(a, o)| self.out[a].keys().map(move |&b| (o.q, b)))
                .map(|(qa, b)| self.objs[b as usize].q - qa)
                .min();
            let Some(jump) = jump else { break };
            if jump <= 0 {
                return Err(Error::InternalInvariantViolation(format!(
                    "differential lowers the filtration by {}",
                    -jump
                )));
            }
            self.eliminate(budget, move |s, a, b| {
                let (oa, ob) = (&s.objs[a as usize], &s.objs[b as usize]);
                if !oa.alive || !ob.alive || ob.q - oa.q != jump {
                    return None;
                }
                s.out[a as usize]
                    .get(&b)
                    .and_then(|m| m.first())
                    .map(|(_, c)| c.clone())
            })?;
        }
        Ok(self.gradings())
    }

    /// Power of the deformation variable carried by the term `pat` of
    /// `a -> b`; must be a non-negative integer.
    fn deformation_power(&self, a: u32, b: u32, pat: u32) -> Option<i32> {
        let (oa, ob) = (&self.objs[a as usize], &self.objs[b as usize]);
        let (ma, mb) = (self.matching(oa.m), self.matching(ob.m));
        let cycles = PairCycles::new(ma, mb).count as i32;
        let twice = ob.q - oa.q + cycles - ma.len() as i32 / 2 - 2 * pat.count_ones() as i32;
        (twice % 2 == 0).then_some(twice / 2)
    }

    /// Checks `d∘d = 0`, that the differential raises `h` by one and that
    /// every term has a well-defined grading.
    pub fn check_invariants(&mut self) -> Result<()> {
        let fail = |m: String| Err(Error::InternalInvariantViolation(m));
        for a in 0..self.objs.len() as u32 {
            if !self.objs[a as usize].alive {
                continue;
            }
            let row: Vec<(u32, Mor<F>)> = self.out[a as usize]
                .iter()
                .map(|(&b, m)| (b, m.clone()))
                .collect();
            let mut square: FxHashMap<u32, Mor<F>> = FxHashMap::default();
            for (b, f) in &row {
                let (oa, ob) = (self.objs[a as usize], self.objs[*b as usize]);
                if !ob.alive || ob.h != oa.h + 1 {
                    return fail(format!("entry {a}->{b} does not raise h by one"));
                }
                for (p, _) in f {
                    match self.deformation_power(a, *b, *p) {
                        Some(k) if k >= 0 => {}
                        _ => return fail(format!("entry {a}->{b} is not homogeneous")),
                    }
                }
                let next: Vec<(u32, Mor<F>)> = self.out[*b as usize]
                    .iter()
                    .map(|(&c, m)| (c, m.clone()))
                    .collect();
                for (c, g) in next {
                    let mc = self.objs[c as usize].m;
                    let one = self.alg.one();
                    let prod = self.compose((oa.m, ob.m, mc), f, &g, &one);
                    let e = square.entry(c).or_default();
                    for (p, v) in prod {
                        mor_add(e, p, v);
                    }
                }
            }
            if let Some((c, _)) = square.iter().find(|(_, m)| !m.is_empty()) {
                return fail(format!("d∘d is nonzero from {a} to {c}"));
            }
        }
        Ok(())
    }
}
