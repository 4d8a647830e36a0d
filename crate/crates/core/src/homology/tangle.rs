//! Crossingless matchings and the combinatorics of gluing dotted cobordisms.
//!
//! A morphism between two crossingless matchings `m1, m2` of the same
//! boundary is a linear combination of "disk families": one disk for each
//! cycle of `m1 ∪ m2`, each disk carrying at most one dot. A family is
//! encoded as a bitmask over the cycles, ordered by their smallest boundary
//! position. Gluing two such families yields surfaces that are reduced back
//! to disk families with [`Algebra::surface`].

use std::sync::Arc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::field::Field;
use super::frobenius::Algebra;
use crate::diagram::UnionFind;

pub(crate) type Pos = u8;

/// Linear combination of disk families.
pub(crate) type Mor<F> = SmallVec<[(u32, F); 2]>;

pub(crate) fn mor_add<F: Field>(m: &mut Mor<F>, pat: u32, c: F) {
    if c.is_zero() {
        return;
    }
    if let Some(i) = m.iter().position(|(p, _)| *p == pat) {
        let v = m[i].1.add(&c);
        if v.is_zero() {
            m.swap_remove(i);
        } else {
            m[i].1 = v;
        }
    } else {
        m.push((pat, c));
    }
}

/// Interning table for matchings of one fixed boundary.
#[derive(Default)]
pub(crate) struct MatchingTable {
    list: Vec<Arc<[Pos]>>,
    index: FxHashMap<Arc<[Pos]>, u32>,
}

impl MatchingTable {
    pub fn intern(&mut self, m: Vec<Pos>) -> u32 {
        if let Some(&id) = self.index.get(m.as_slice()) {
            return id;
        }
        let arc: Arc<[Pos]> = m.into();
        let id = self.list.len() as u32;
        self.list.push(arc.clone());
        self.index.insert(arc, id);
        id
    }

    pub fn get(&self, id: u32) -> &[Pos] {
        &self.list[id as usize]
    }
}

/// Cycles of the union of two matchings (or smoothings) on the same points.
pub(crate) struct PairCycles {
    pub count: usize,
    pub of_pos: Box<[u8]>,
}

impl PairCycles {
    pub fn new(m1: &[Pos], m2: &[Pos]) -> Self {
        let n = m1.len();
        let mut of_pos = vec![u8::MAX; n].into_boxed_slice();
        let mut count = 0;
        for p in 0..n {
            if of_pos[p] != u8::MAX {
                continue;
            }
            let mut x = p;
            loop {
                of_pos[x] = count as u8;
                let y = m1[x] as usize;
                of_pos[y] = count as u8;
                x = m2[y] as usize;
                if x == p {
                    break;
                }
            }
            count += 1;
        }
        PairCycles { count, of_pos }
    }

    /// Smallest position lying on each cycle.
    pub fn representatives(&self) -> Vec<usize> {
        let mut rep = vec![usize::MAX; self.count];
        for (p, &c) in self.of_pos.iter().enumerate() {
            if rep[c as usize] == usize::MAX {
                rep[c as usize] = p;
            }
        }
        rep
    }
}

pub(crate) struct Component {
    mask_a: u32,
    mask_b: u32,
    genus: u32,
    out: SmallVec<[u8; 4]>,
}

/// Connected components of a glued pair of disk families.
pub(crate) struct Skeleton {
    comps: Vec<Component>,
}

impl Skeleton {
    /// Disks `0..n_a` come from the first family, `n_a..n_a+n_b` from the
    /// second. Each glue joins two disks along an interval; `out_disk[k]`
    /// names a disk touching output cycle `k`.
    pub fn new(n_a: usize, n_b: usize, glues: &[(usize, usize)], out_disk: &[usize]) -> Self {
        let n = n_a + n_b;
        let mut uf = UnionFind::new(n);
        for &(x, y) in glues {
            uf.union(x, y);
        }
        let mut comp_of_root = vec![usize::MAX; n];
        let mut comps: Vec<Component> = Vec::new();
        let mut disks: Vec<i64> = Vec::new();
        let mut nglue: Vec<i64> = Vec::new();
        for d in 0..n {
            let r = uf.find(d);
            if comp_of_root[r] == usize::MAX {
                comp_of_root[r] = comps.len();
                comps.push(Component {
                    mask_a: 0,
                    mask_b: 0,
                    genus: 0,
                    out: SmallVec::new(),
                });
                disks.push(0);
                nglue.push(0);
            }
            let c = comp_of_root[r];
            disks[c] += 1;
            if d < n_a {
                comps[c].mask_a |= 1 << d;
            } else {
                comps[c].mask_b |= 1 << (d - n_a);
            }
        }
        for &(x, _) in glues {
            nglue[comp_of_root[uf.find(x)]] += 1;
        }
        for (k, &d) in out_disk.iter().enumerate() {
            comps[comp_of_root[uf.find(d)]].out.push(k as u8);
        }
        for (c, comp) in comps.iter_mut().enumerate() {
            let chi = disks[c] - nglue[c];
            let twice_genus = 2 - comp.out.len() as i64 - chi;
            assert!(
                twice_genus >= 0 && twice_genus % 2 == 0,
                "glued surface has inconsistent Euler characteristic"
            );
            comp.genus = (twice_genus / 2) as u32;
        }
        Skeleton { comps }
    }

    /// Reduces the glued surface for disk families `pa`, `pb` (scaled by
    /// `coef`) and passes each resulting output family to `sink`.
    pub fn apply<F: Field>(
        &self,
        alg: &mut Algebra<F>,
        pa: u32,
        pb: u32,
        coef: &F,
        sink: &mut impl FnMut(u32, F),
    ) {
        let mut terms: SmallVec<[(u32, F); 4]> = SmallVec::new();
        terms.push((0, coef.clone()));
        for comp in &self.comps {
            let dots = (pa & comp.mask_a).count_ones() + (pb & comp.mask_b).count_ones();
            let elem = alg.surface(dots, comp.genus, comp.out.len() as u32);
            let mut next: SmallVec<[(u32, F); 4]> = SmallVec::new();
            for (local, e) in elem.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let mut bits = 0u32;
                for (i, &k) in comp.out.iter().enumerate() {
                    if local >> i & 1 == 1 {
                        bits |= 1 << k;
                    }
                }
                for (p, c) in &terms {
                    next.push((p | bits, c.mul(e)));
                }
            }
            terms = next;
            if terms.is_empty() {
                return;
            }
        }
        for (p, c) in terms {
            sink(p, c);
        }
    }
}

/// Skeleton for composing `m1 -> m2` with `m2 -> m3`.
pub(crate) fn composition_skeleton(m1: &[Pos], m2: &[Pos], m3: &[Pos]) -> Skeleton {
    let a = PairCycles::new(m1, m2);
    let b = PairCycles::new(m2, m3);
    let c = PairCycles::new(m1, m3);
    let glues: Vec<(usize, usize)> = (0..m2.len())
        .filter(|&p| p < m2[p] as usize)
        .map(|p| (a.of_pos[p] as usize, a.count + b.of_pos[p] as usize))
        .collect();
    let out: Vec<usize> = c
        .representatives()
        .into_iter()
        .map(|p| a.of_pos[p] as usize)
        .collect();
    Skeleton::new(a.count, b.count, &glues, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::field::{Field, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n, ())
    }

    #[test]
    fn pair_cycles_of_identity() {
        let m = [1u8, 0, 3, 2];
        let c = PairCycles::new(&m, &m);
        assert_eq!(c.count, 2);
        let other = [3u8, 2, 1, 0];
        let c = PairCycles::new(&m, &other);
        assert_eq!(c.count, 1);
    }

    #[test]
    fn identity_composes_to_identity() {
        let m = [1u8, 0, 3, 2];
        let sk = composition_skeleton(&m, &m, &m);
        let mut alg = Algebra::new(q(0), q(1));
        let mut out = Vec::new();
        sk.apply(&mut alg, 0, 0, &q(1), &mut |p, c| out.push((p, c)));
        assert_eq!(out, vec![(0, q(1))]);
    }

    #[test]
    fn saddle_then_saddle_is_handle() {
        // Two saddles through the other matching: the composite on the
        // 4-point boundary is a genus-zero surface with the identity's two
        // cycles... plus a tube, i.e. neck-cut into two terms.
        let m = [1u8, 0, 3, 2];
        let n = [3u8, 2, 1, 0];
        let sk = composition_skeleton(&m, &n, &m);
        let mut alg = Algebra::new(q(0), q(0));
        let mut out = Vec::new();
        sk.apply(&mut alg, 0, 0, &q(1), &mut |p, c| out.push((p, c)));
        out.sort_by_key(|(p, _)| *p);
        // Annulus connecting both strands: dot on either side.
        assert_eq!(out, vec![(1, q(1)), (2, q(1))]);
    }
}
