//! Diagram generators: braid closures, torus knots and t-twisted doubles.

use num_integer::Integer;

use crate::diagram::{Axis, DiagramBuilder, PlanarDiagram, Slot};
use crate::error::{Error, Result};
use crate::homology::{s_invariant_with, FieldSpec, FrobeniusParams, ScanOptions};

/// Sign of the clasp closing a twisted double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaspSign {
    Positive,
    Negative,
}

impl ClaspSign {
    pub fn value(self) -> i8 {
        match self {
            ClaspSign::Positive => 1,
            ClaspSign::Negative => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            ClaspSign::Positive => ClaspSign::Negative,
            ClaspSign::Negative => ClaspSign::Positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleSpec {
    pub companion: PlanarDiagram,
    /// Framing of the doubled band, in full twists relative to the Seifert framing.
    pub t: i64,
    pub clasp: ClaspSign,
}

impl DoubleSpec {
    pub fn new(companion: PlanarDiagram, t: i64, clasp: ClaspSign) -> Self {
        DoubleSpec {
            companion,
            t,
            clasp,
        }
    }

    pub fn positive(companion: PlanarDiagram, t: i64) -> Self {
        Self::new(companion, t, ClaspSign::Positive)
    }

    pub fn negative(companion: PlanarDiagram, t: i64) -> Self {
        Self::new(companion, t, ClaspSign::Negative)
    }

    /// Crossing count of the emitted diagram: `4c + 2|t - w| + 2`.
    pub fn crossing_count(&self) -> usize {
        let c = self.companion.crossing_count();
        4 * c + 2 * (self.t - self.companion.writhe()).unsigned_abs() as usize + 2
    }
}

/// Closure of a braid on `strands` strands. Generator `i` (1-based) is
/// sigma_i, `-i` its inverse; sigma_i is a positive crossing.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PlanarDiagram> {
    if strands == 0 {
        return Err(Error::InvalidArgument(
            "braid needs at least one strand".into(),
        ));
    }
    if let Some(&g) = word
        .iter()
        .find(|&&g| g == 0 || g.unsigned_abs() as usize >= strands)
    {
        return Err(Error::InvalidArgument(format!(
            "generator {g} out of range for {strands} strands"
        )));
    }
    if word.is_empty() {
        return if strands == 1 {
            Ok(PlanarDiagram::unknot())
        } else {
            Err(Error::MultiComponent {
                visited: 0,
                total: 0,
            })
        };
    }
    // Crossing slots: 0 bottom-right, 1 top-right, 2 top-left, 3 bottom-left.
    let mut b = DiagramBuilder::new();
    let mut first: Vec<Option<Slot>> = vec![None; strands];
    let mut top: Vec<Option<Slot>> = vec![None; strands];
    let mut attach = |b: &mut DiagramBuilder,
                      pos: usize,
                      slot: Slot,
                      top: &mut Vec<Option<Slot>>| {
        match top[pos] {
            Some(t) => b.connect(t, slot),
            None => first[pos] = Some(slot),
        }
    };
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let axis = if g > 0 { Axis::Even } else { Axis::Odd };
        let c = b.crossing(axis);
        attach(&mut b, i, (c, 3), &mut top);
        attach(&mut b, i + 1, (c, 0), &mut top);
        top[i] = Some((c, 2));
        top[i + 1] = Some((c, 1));
    }
    for pos in 0..strands {
        match (top[pos], first[pos]) {
            (Some(t), Some(f)) => b.connect(t, f),
            _ => {
                return Err(Error::MultiComponent {
                    visited: 0,
                    total: strands,
                })
            }
        }
    }
    b.build()
}

/// Closure of `(sigma_1 ... sigma_{p-1})^q`; negative `q` gives the mirror.
pub fn torus_knot(p: i64, q: i64) -> Result<PlanarDiagram> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "torus knot needs p >= 2, got {p}"
        )));
    }
    if q == 0 || p.gcd(&q) != 1 {
        return Err(Error::NonCoprime { p, q });
    }
    let sign = q.signum() as i32;
    let word: Vec<i32> = (0..q.unsigned_abs())
        .flat_map(|_| (1..p as i32).map(move |i| sign * i))
        .collect();
    braid_closure(p as usize, &word)
}

/// The t-twisted double of the companion with the requested clasp.
///
/// Every companion crossing becomes a 2x2 grid of crossings between the two
/// antiparallel copies; the blackboard framing `w = writhe` is corrected by
/// `|t - w|` full twists inserted on arc 1, next to the clasp. With the two
/// strands antiparallel, a twist raising the framing contributes negative
/// crossings, so `D_+(U,-1)` is the positive (right-handed) trefoil.
pub fn twisted_double(spec: &DoubleSpec) -> Result<PlanarDiagram> {
    let k = &spec.companion;
    let w = k.writhe();
    let excess = spec.t - w;
    let twist_sign: i8 = if excess > 0 { -1 } else { 1 };
    let n_twist = 2 * excess.unsigned_abs() as usize;

    let mut b = DiagramBuilder::new();

    // Four grid crossings per companion crossing, slots S,E,N,W = 0,1,2,3
    // with the vertical (companion under-strand) direction passing under.
    const SW: usize = 0;
    const SE: usize = 1;
    const NE: usize = 2;
    const NW: usize = 3;
    let mut grid: Vec<[usize; 4]> = Vec::with_capacity(k.crossing_count());
    for _ in 0..k.crossing_count() {
        let g: [usize; 4] = std::array::from_fn(|_| b.crossing(Axis::Even));
        b.connect((g[SW], 2), (g[NW], 0));
        b.connect((g[SW], 1), (g[SE], 3));
        b.connect((g[NW], 1), (g[NE], 3));
        b.connect((g[SE], 2), (g[NE], 0));
        grid.push(g);
    }
    // Doubled endpoint `side` (0 = right when facing out of the crossing)
    // of companion slot `pos`.
    let end = |c: usize, pos: usize, side: usize| -> Slot {
        let g = &grid[c];
        match (pos, side) {
            (0, 0) => (g[SW], 0),
            (0, _) => (g[SE], 0),
            (1, 0) => (g[SE], 1),
            (1, _) => (g[NE], 1),
            (2, 0) => (g[NE], 2),
            (2, _) => (g[NW], 2),
            (3, 0) => (g[NW], 3),
            _ => (g[SW], 3),
        }
    };

    let tuples = k.tuples();
    let mut slots_of = vec![Vec::<Slot>::with_capacity(2); k.n_arcs() as usize + 1];
    for (c, t) in tuples.iter().enumerate() {
        for (p, &l) in t.iter().enumerate() {
            slots_of[l as usize].push((c, p));
        }
    }
    let labels = if k.crossing_count() == 0 {
        &slots_of[..0]
    } else {
        &slots_of[2..=k.n_arcs() as usize]
    };
    for slots in labels {
        let [(xc, xp), (yc, yp)] = [slots[0], slots[1]];
        b.connect(end(xc, xp, 0), end(yc, yp, 1));
        b.connect(end(xc, xp, 1), end(yc, yp, 0));
    }

    // Twist region: slots 0 bottom-right, 1 top-right, 2 top-left, 3 bottom-left.
    let twists: Vec<usize> = (0..n_twist)
        .map(|_| b.signed_crossing(twist_sign))
        .collect();
    for pair in twists.windows(2) {
        b.connect((pair[0], 1), (pair[1], 0));
        b.connect((pair[0], 2), (pair[1], 3));
    }
    // Clasp: C1 joins the top-left strand to the bottom hook, C2 the
    // bottom-right strand to the top hook. Slots S,E,N,W = 0,1,2,3.
    let c1 = b.signed_crossing(spec.clasp.value());
    let c2 = b.signed_crossing(spec.clasp.value());
    b.connect((c1, 0), (c2, 3));
    b.connect((c1, 1), (c2, 2));
    let (hook_l, hook_r) = ((c1, 3), (c2, 0));
    let (top_l, top_r) = ((c1, 2), (c2, 1));

    // Open ends below the twist region, seen from the companion.
    let (low_r, low_l) = match (twists.first(), twists.last()) {
        (Some(&f), Some(&l)) => {
            b.connect((l, 1), hook_r);
            b.connect((l, 2), hook_l);
            ((f, 0), (f, 3))
        }
        _ => (hook_r, hook_l),
    };
    if k.crossing_count() == 0 {
        b.connect(low_r, top_r);
        b.connect(low_l, top_l);
    } else {
        let [(xc, xp), (yc, yp)] = [slots_of[1][0], slots_of[1][1]];
        b.connect(end(xc, xp, 0), low_r);
        b.connect(end(xc, xp, 1), low_l);
        b.connect(end(yc, yp, 1), top_r);
        b.connect(end(yc, yp, 0), top_l);
    }
    b.build()
}

/// Checks `s(D_+(K,t)) = -s(D_-(mK,-t))`, the invariant-level form of
/// `m(D_+(K,t)) = D_-(mK,-t)`.
pub fn mirror_double_identity_check(
    spec: &DoubleSpec,
    field: FieldSpec,
    opts: &ScanOptions,
) -> Result<bool> {
    let params = FrobeniusParams::for_s_invariant(field);
    let lhs = twisted_double(&DoubleSpec::new(spec.companion.clone(), spec.t, spec.clasp))?;
    let rhs = twisted_double(&DoubleSpec::new(
        spec.companion.mirror(),
        -spec.t,
        spec.clasp.flip(),
    ))?;
    let s_lhs = s_invariant_with(&lhs, &params, opts)?.s;
    let s_rhs = s_invariant_with(&rhs, &params, opts)?.s;
    Ok(s_lhs == -s_rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_knot_shapes() {
        let t23 = torus_knot(2, 3).unwrap();
        assert_eq!(t23.crossing_count(), 3);
        assert_eq!(t23.writhe(), 3);
        assert_eq!(t23.seifert_circle_count(), 2);
        let t34 = torus_knot(3, 4).unwrap();
        assert_eq!(t34.crossing_count(), 8);
        assert_eq!(t34.writhe(), 8);
        assert_eq!(torus_knot(2, -5).unwrap().writhe(), -5);
        assert_eq!(torus_knot(2, 1).unwrap().crossing_count(), 1);
        assert!(matches!(torus_knot(2, 4), Err(Error::NonCoprime { .. })));
        assert!(matches!(torus_knot(3, 0), Err(Error::NonCoprime { .. })));
    }

    #[test]
    fn torus_mirror_matches_negative_q() {
        let a = torus_knot(2, 5).unwrap().mirror();
        let b = torus_knot(2, -5).unwrap();
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn braid_closure_rejects_links() {
        assert!(braid_closure(2, &[1, 1]).is_err());
        assert!(braid_closure(3, &[1]).is_err());
        assert!(braid_closure(3, &[1, -2, 1, -2]).is_ok());
    }

    #[test]
    fn double_crossing_counts() {
        let t = torus_knot(2, 3).unwrap();
        for tw in -3..6 {
            for clasp in [ClaspSign::Positive, ClaspSign::Negative] {
                let spec = DoubleSpec::new(t.clone(), tw, clasp);
                let d = twisted_double(&spec).unwrap();
                assert_eq!(d.crossing_count(), spec.crossing_count());
                assert_eq!(d.writhe(), 2 * (3 - tw) + 2 * clasp.value() as i64);
            }
        }
        let d = twisted_double(&DoubleSpec::positive(t, 3)).unwrap();
        assert_eq!(d.crossing_count(), 14);
    }

    #[test]
    fn unknot_doubles() {
        let u = PlanarDiagram::unknot();
        let d0 = twisted_double(&DoubleSpec::positive(u.clone(), 0)).unwrap();
        assert_eq!(d0.crossing_count(), 2);
        let d = twisted_double(&DoubleSpec::positive(u, -1)).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert!(d.crossings().iter().all(|x| x.sign() == 1));
    }

    #[test]
    fn mirror_of_double_is_negative_double_of_mirror() {
        for k in [
            PlanarDiagram::unknot(),
            torus_knot(2, 3).unwrap(),
            torus_knot(3, 4).unwrap(),
        ] {
            for t in -2..3 {
                let lhs = twisted_double(&DoubleSpec::positive(k.clone(), t))
                    .unwrap()
                    .mirror();
                let rhs = twisted_double(&DoubleSpec::negative(k.mirror(), -t)).unwrap();
                assert!(lhs.is_isomorphic(&rhs), "K={k} t={t}");
            }
        }
    }
}
