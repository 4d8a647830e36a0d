//! Adding one crossing at a time to a tangle complex, and choosing the order
//! in which crossings are added.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::complex::{Budget, Obj, ScanComplex};
use super::field::Field;
use super::tangle::{MatchingTable, PairCycles, Pos, Skeleton};
use crate::diagram::{Crossing, PlanarDiagram};
use crate::error::{Error, Result};

/// Largest tangle boundary the engine accepts.
pub(crate) const MAX_BOUNDARY: usize = 56;

/// Partner of each slot under the 0- and 1-smoothing.
const SMOOTHINGS: [[Pos; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];

#[derive(Clone, Copy, Debug)]
enum SlotKind {
    Shared(usize),
    SelfPair(usize),
    New,
}

/// The old boundary positions and the four slots of the new crossing,
/// viewed as points `0..nb` and `nb..nb+4`.
struct Gluing {
    nb: usize,
    slots: [SlotKind; 4],
    /// Glue partner of a point, if it is not on the new boundary.
    partner: Vec<Option<usize>>,
    /// New boundary position of a point, if any.
    terminal: Vec<Option<usize>>,
    /// Point sitting at each new boundary position.
    term_point: Vec<usize>,
}

/// Result of gluing an old matching with a smoothing of the new crossing.
struct Glued {
    m: u32,
    loops: usize,
    /// One point on each closed loop.
    loop_rep: Vec<usize>,
}

struct HSkeleton {
    sk: Skeleton,
    n_main: usize,
    l1: usize,
}

impl Gluing {
    fn new(old: &[u32], labels: [u32; 4]) -> (Self, Vec<u32>) {
        let nb = old.len();
        let mut new_boundary: Vec<u32> = old
            .iter()
            .copied()
            .filter(|l| !labels.contains(l))
            .collect();
        let mut slots = [SlotKind::New; 4];
        for i in 0..4 {
            slots[i] = if let Ok(p) = old.binary_search(&labels[i]) {
                SlotKind::Shared(p)
            } else if let Some(j) = (0..4).find(|&j| j != i && labels[j] == labels[i]) {
                SlotKind::SelfPair(j)
            } else {
                new_boundary.push(labels[i]);
                SlotKind::New
            };
        }
        new_boundary.sort_unstable();
        let pos_new = |l: u32| new_boundary.binary_search(&l).ok();
        let mut partner = vec![None; nb + 4];
        let mut terminal = vec![None; nb + 4];
        for (p, &l) in old.iter().enumerate() {
            match labels.iter().position(|&x| x == l) {
                Some(i) => partner[p] = Some(nb + i),
                None => terminal[p] = pos_new(l),
            }
        }
        for i in 0..4 {
            match slots[i] {
                SlotKind::Shared(p) => partner[nb + i] = Some(p),
                SlotKind::SelfPair(j) => partner[nb + i] = Some(nb + j),
                SlotKind::New => {
                    let q = pos_new(labels[i]).expect("new label on boundary");
                    terminal[nb + i] = Some(q);
                }
            }
        }
        let mut term_point = vec![0; new_boundary.len()];
        for (pt, t) in terminal.iter().enumerate() {
            if let Some(q) = t {
                term_point[*q] = pt;
            }
        }
        (
            Gluing {
                nb,
                slots,
                partner,
                terminal,
                term_point,
            },
            new_boundary,
        )
    }

    fn internal(&self, m: &[Pos], s: usize, pt: usize) -> usize {
        if pt < self.nb {
            m[pt] as usize
        } else {
            self.nb + SMOOTHINGS[s][pt - self.nb] as usize
        }
    }

    fn glue(&self, m: &[Pos], s: usize, table: &mut MatchingTable) -> Glued {
        let n = self.nb + 4;
        let mut seen = vec![false; n];
        let mut matching = vec![0 as Pos; self.term_point.len()];
        for (q, &t) in self.term_point.iter().enumerate() {
            if seen[t] {
                continue;
            }
            let mut x = t;
            loop {
                seen[x] = true;
                let y = self.internal(m, s, x);
                seen[y] = true;
                if let Some(q2) = self.terminal[y] {
                    matching[q] = q2 as Pos;
                    matching[q2] = q as Pos;
                    break;
                }
                x = self.partner[y].expect("interior point is glued");
            }
        }
        let mut loop_rep = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            loop_rep.push(start);
            let mut x = start;
            loop {
                seen[x] = true;
                let y = self.internal(m, s, x);
                seen[y] = true;
                x = self.partner[y].expect("interior point is glued");
                if x == start {
                    break;
                }
            }
        }
        Glued {
            m: table.intern(matching),
            loops: loop_rep.len(),
            loop_rep,
        }
    }

    /// Skeleton of `(old morphism m1 -> m2) ⊗ (smoothing cobordism s1 -> s2)`
    /// in terms of the glued matchings, with output disks ordered as the
    /// cycles of the new matchings, then source loops, then target loops.
    fn horizontal(
        &self,
        (m1, m2): (&[Pos], &[Pos]),
        (s1, s2): (usize, usize),
        (g1, g2): (&Glued, &Glued),
        (n1, n2): (&[Pos], &[Pos]),
    ) -> HSkeleton {
        let ct = PairCycles::new(m1, m2);
        let cx = PairCycles::new(&SMOOTHINGS[s1], &SMOOTHINGS[s2]);
        let nt = ct.count;
        let disk = |pt: usize| {
            if pt < self.nb {
                ct.of_pos[pt] as usize
            } else {
                nt + cx.of_pos[pt - self.nb] as usize
            }
        };
        let mut glues = Vec::new();
        for i in 0..4 {
            match self.slots[i] {
                SlotKind::Shared(p) => glues.push((disk(p), disk(self.nb + i))),
                SlotKind::SelfPair(j) if i < j => {
                    glues.push((disk(self.nb + i), disk(self.nb + j)))
                }
                _ => {}
            }
        }
        let cm = PairCycles::new(n1, n2);
        let mut out: Vec<usize> = cm
            .representatives()
            .into_iter()
            .map(|q| disk(self.term_point[q]))
            .collect();
        out.extend(g1.loop_rep.iter().map(|&pt| disk(pt)));
        out.extend(g2.loop_rep.iter().map(|&pt| disk(pt)));
        HSkeleton {
            sk: Skeleton::new(nt, cx.count, &glues, &out),
            n_main: cm.count,
            l1: g1.loops,
        }
    }
}

/// Splits an output family of a horizontal skeleton into the delooped
/// summands: returns `(pattern, source summand, target summand, h-power)`.
fn deloop(pat: u32, n_main: usize, l1: usize, l2: usize, mut emit: impl FnMut(u32, u32, u32, u32)) {
    let mask = |n: usize| (1u32 << n) - 1;
    let main = pat & mask(n_main);
    let src = (pat >> n_main) & mask(l1);
    let tgt = (pat >> (n_main + l1)) & mask(l2);
    let base = !src & mask(l1);
    // Dotted source caps pair with either summand; the second costs a factor h.
    let mut sub = src;
    loop {
        emit(main, base | sub, tgt, sub.count_ones());
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & src;
    }
}

/// Gradings shift of the two resolutions of a crossing.
fn shifts(sign: i8) -> [(i32, i32); 2] {
    if sign > 0 {
        [(0, 1), (1, 2)]
    } else {
        [(-1, -2), (0, -1)]
    }
}

impl<F: Field> ScanComplex<F> {
    /// Tensors the complex with the two-term complex of `x`, delooping any
    /// closed circles, then cancels all isomorphisms.
    pub(crate) fn add_crossing(&mut self, x: &Crossing, budget: &Budget) -> Result<()> {
        let labels = x.arcs();
        let (gl, new_boundary) = Gluing::new(&self.boundary, labels);
        if new_boundary.len() > MAX_BOUNDARY {
            return Err(Error::ResourceBudgetExceeded(format!(
                "tangle boundary of {} points exceeds {MAX_BOUNDARY}",
                new_boundary.len()
            )));
        }
        let old_objs = std::mem::take(&mut self.objs);
        let old_out = std::mem::take(&mut self.out);
        let old_matchings = std::mem::take(&mut self.matchings);
        let mut table = MatchingTable::default();

        let mut glued: FxHashMap<(u32, usize), Arc<Glued>> = FxHashMap::default();
        let mut glue = |m: u32, s: usize, table: &mut MatchingTable| -> Arc<Glued> {
            glued
                .entry((m, s))
                .or_insert_with(|| Arc::new(gl.glue(old_matchings.get(m), s, table)))
                .clone()
        };

        // New objects: old object, resolution, loop labels.
        let mut base = vec![[u32::MAX; 2]; old_objs.len()];
        let mut new_objs = Vec::new();
        let sh = shifts(x.sign());
        for (a, o) in old_objs.iter().enumerate() {
            if !o.alive {
                continue;
            }
            for s in 0..2 {
                let g = glue(o.m, s, &mut table);
                base[a][s] = new_objs.len() as u32;
                for sigma in 0..1u32 << g.loops {
                    let q = o.q + sh[s].1 + g.loops as i32 - 2 * sigma.count_ones() as i32;
                    new_objs.push(Obj {
                        m: g.m,
                        h: o.h + sh[s].0,
                        q,
                        alive: true,
                    });
                }
            }
        }
        self.reset(new_boundary, table);
        for o in new_objs {
            self.push_obj(o);
        }

        let mut hcache: FxHashMap<(u32, u32, usize, usize), Arc<HSkeleton>> = FxHashMap::default();
        let h = self.alg.h.clone();
        for (a, o) in old_objs.iter().enumerate() {
            if !o.alive {
                continue;
            }
            // Saddle between the two resolutions, with the Koszul sign.
            let mut arrows: Vec<(u32, usize, usize, u32, F)> = Vec::new();
            arrows.push((
                a as u32,
                0,
                1,
                0,
                F::from_i64(if o.h % 2 == 0 { 1 } else { -1 }, h.ctx()),
            ));
            for (&b, f) in &old_out[a] {
                for s in 0..2 {
                    for (p, c) in f {
                        arrows.push((b, s, s, *p, c.clone()));
                    }
                }
            }
            for (b, s1, s2, pat, coef) in arrows {
                let ob = &old_objs[b as usize];
                if !ob.alive {
                    continue;
                }
                let (g1, g2) = (
                    glue(o.m, s1, &mut self.matchings),
                    glue(ob.m, s2, &mut self.matchings),
                );
                let key = (o.m, ob.m, s1, s2);
                let hs = match hcache.get(&key) {
                    Some(hs) => hs.clone(),
                    None => {
                        let hs = Arc::new(gl.horizontal(
                            (old_matchings.get(o.m), old_matchings.get(ob.m)),
                            (s1, s2),
                            (&g1, &g2),
                            (self.matchings.get(g1.m), self.matchings.get(g2.m)),
                        ));
                        hcache.insert(key, hs.clone());
                        hs
                    }
                };
                let mut terms = Vec::new();
                hs.sk
                    .apply(&mut self.alg, pat, 0, &coef, &mut |p, c| terms.push((p, c)));
                let (src0, tgt0) = (base[a][s1], base[b as usize][s2]);
                for (p, c) in terms {
                    deloop(p, hs.n_main, hs.l1, g2.loops, |main, sigma, tau, hp| {
                        let mut v = c.clone();
                        for _ in 0..hp {
                            v = v.mul(&h);
                        }
                        self.add_term(src0 + sigma, tgt0 + tau, main, v);
                    });
                }
            }
            budget.check(self.entries)?;
        }
        self.reduce_isomorphisms(budget)?;
        Ok(())
    }
}

/// Boundary sizes encountered when adding crossings in `order`.
pub(crate) fn frontier_sizes(d: &PlanarDiagram, order: &[usize]) -> Vec<usize> {
    let mut boundary: Vec<u32> = Vec::new();
    order
        .iter()
        .map(|&c| {
            for l in d.crossings()[c].arcs() {
                if let Some(i) = boundary.iter().position(|&x| x == l) {
                    boundary.swap_remove(i);
                } else {
                    boundary.push(l);
                }
            }
            boundary.len()
        })
        .collect()
}

/// Greedy scan order: repeatedly add the crossing sharing the most arcs with
/// the current boundary (ties broken by smallest resulting boundary, then
/// index). Every starting crossing is tried and the order with the smallest
/// maximal, then total, boundary is kept.
pub fn scan_order(d: &PlanarDiagram) -> Vec<usize> {
    let n = d.crossing_count();
    let mut best: Option<((usize, usize), Vec<usize>)> = None;
    for start in 0..n {
        let mut used = vec![false; n];
        let mut order = vec![start];
        used[start] = true;
        let mut boundary: Vec<u32> = Vec::new();
        toggle(&mut boundary, &d.crossings()[start].arcs());
        while order.len() < n {
            let pick = (0..n)
                .filter(|&c| !used[c])
                .min_by_key(|&c| {
                    let arcs = d.crossings()[c].arcs();
                    let shared = arcs.iter().filter(|l| boundary.contains(l)).count();
                    let mut b = boundary.clone();
                    toggle(&mut b, &arcs);
                    (std::cmp::Reverse(shared), b.len(), c)
                })
                .expect("unused crossing remains");
            used[pick] = true;
            order.push(pick);
            toggle(&mut boundary, &d.crossings()[pick].arcs());
        }
        let sizes = frontier_sizes(d, &order);
        let score = (sizes.iter().copied().max().unwrap_or(0), sizes.iter().sum());
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, order));
        }
    }
    best.map(|(_, o)| o).unwrap_or_default()
}

fn toggle(boundary: &mut Vec<u32>, arcs: &[u32; 4]) {
    for &l in arcs {
        if let Some(i) = boundary.iter().position(|&x| x == l) {
            boundary.swap_remove(i);
        } else {
            boundary.push(l);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deloop_splits_dotted_source() {
        let mut got = Vec::new();
        // One main cycle, one source loop (dotted), one target loop (undotted).
        deloop(0b011, 1, 1, 1, |m, s, t, hp| got.push((m, s, t, hp)));
        got.sort();
        assert_eq!(got, vec![(1, 0, 0, 0), (1, 1, 0, 1)]);
        got.clear();
        deloop(0b000, 1, 1, 1, |m, s, t, hp| got.push((m, s, t, hp)));
        assert_eq!(got, vec![(0, 1, 0, 0)]);
    }

    #[test]
    fn scan_order_is_a_permutation() {
        let d: PlanarDiagram = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".parse().unwrap();
        let mut o = scan_order(&d);
        o.sort();
        assert_eq!(o, vec![0, 1, 2]);
        assert_eq!(frontier_sizes(&d, &[0, 1, 2]).last(), Some(&0));
    }
}
