//! Shared test support: a brute-force Khovanov complex, a diagram corpus and
//! random braid closures.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use knotconc::concordance::{KnotExpression, KnotRegistry};
use knotconc::{braid_closure, torus_knot, twisted_double, DoubleSpec, KhTable, PlanarDiagram};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Large prime for the oracle's ranks. Kh of small knots has only small
/// torsion, so ranks mod this prime equal ranks over Q.
const P: u64 = 2_147_483_647;

fn inv(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % P, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Rank of a sparse matrix mod `P`; rows are (column, value) lists.
fn rank(rows: Vec<BTreeMap<usize, u64>>) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, u64>> = HashMap::new();
    for mut row in rows {
        row.retain(|_, v| *v != 0);
        while let Some((&lead, &lv)) = row.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    // p is normalised so p[lead] = 1.
                    for (&c, &v) in p {
                        let e = row.entry(c).or_insert(0);
                        *e = (*e + P - lv * v % P) % P;
                        if *e == 0 {
                            row.remove(&c);
                        }
                    }
                }
                None => {
                    let s = inv(lv);
                    for v in row.values_mut() {
                        *v = *v * s % P;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Circles of a complete smoothing: circle index per arc label, circles
/// numbered by smallest arc.
fn circles(d: &PlanarDiagram, state: u32) -> (Vec<usize>, usize) {
    let n = d.n_arcs() as usize;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (k, x) in d.crossings().iter().enumerate() {
        let [a, b, c, dd] = x.arcs().map(|l| l as usize);
        let pairs = if state >> k & 1 == 0 {
            [(a, b), (c, dd)]
        } else {
            [(a, dd), (b, c)]
        };
        for (u, v) in pairs {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
    }
    let mut id = vec![usize::MAX; n + 1];
    let mut root_id: HashMap<usize, usize> = HashMap::new();
    for (a, slot) in id.iter_mut().enumerate().skip(1) {
        let r = find(&mut parent, a);
        let next = root_id.len();
        *slot = *root_id.entry(r).or_insert(next);
    }
    let count = root_id.len();
    (id, count)
}

/// Khovanov homology over Q from the full cube of resolutions.
pub fn brute_force_kh(d: &PlanarDiagram) -> KhTable {
    let n = d.crossing_count();
    if n == 0 {
        return KhTable::from_gradings([(0, 1), (0, -1)]);
    }
    assert!(n <= 16, "oracle is exponential");
    let (np, nm) = (d.positive_count() as i32, d.negative_count() as i32);
    let states: Vec<(Vec<usize>, usize)> = (0..1u32 << n).map(|s| circles(d, s)).collect();
    // Generators grouped by (i, j); x has bit c set when circle c carries X.
    let mut index: HashMap<(u32, u32), (i32, i32, usize)> = HashMap::new();
    let mut dims: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for (s, (_, c)) in states.iter().enumerate() {
        let r = (s as u32).count_ones() as i32;
        for x in 0..1u32 << c {
            let i = r - nm;
            let j = (*c as i32 - 2 * x.count_ones() as i32) + r + np - 2 * nm;
            let slot = dims.entry((i, j)).or_insert(0);
            index.insert((s as u32, x), (i, j, *slot));
            *slot += 1;
        }
    }
    // Rows of d from C^{i,j}, one per generator.
    let mut rows: BTreeMap<(i32, i32), Vec<BTreeMap<usize, u64>>> = BTreeMap::new();
    for (s, (ids, c)) in states.iter().enumerate() {
        let s = s as u32;
        for x in 0..1u32 << c {
            let (i, j, _) = index[&(s, x)];
            let mut row: BTreeMap<usize, u64> = BTreeMap::new();
            for (k, cr) in d.crossings().iter().enumerate() {
                if s >> k & 1 == 1 {
                    continue;
                }
                let t = s | 1 << k;
                let sign = if (s & ((1 << k) - 1)).count_ones().is_multiple_of(2) {
                    1
                } else {
                    P - 1
                };
                let (tids, _) = &states[t as usize];
                let [a, b, cc, _] = cr.arcs().map(|l| l as usize);
                let (ca, cc_) = (ids[a], ids[cc]);
                // Circles untouched by the saddle keep their labels.
                let mut base = 0u32;
                let mut arc_of = vec![0usize; *c];
                for arc in (1..ids.len()).rev() {
                    arc_of[ids[arc]] = arc;
                }
                for (circ, &arc) in arc_of.iter().enumerate() {
                    if circ != ca && circ != cc_ && x >> circ & 1 == 1 {
                        base |= 1 << tids[arc];
                    }
                }
                let mut targets: Vec<u32> = Vec::new();
                if ca != cc_ {
                    let (xa, xc) = (x >> ca & 1, x >> cc_ & 1);
                    let m = tids[a];
                    match xa + xc {
                        0 => targets.push(base),
                        1 => targets.push(base | 1 << m),
                        _ => {}
                    }
                } else {
                    let (u, v) = (tids[a], tids[b]);
                    if x >> ca & 1 == 0 {
                        targets.push(base | 1 << u);
                        targets.push(base | 1 << v);
                    } else {
                        targets.push(base | 1 << u | 1 << v);
                    }
                }
                for y in targets {
                    let (ti, tj, col) = index[&(t, y)];
                    debug_assert_eq!((ti, tj), (i + 1, j));
                    let e = row.entry(col).or_insert(0);
                    *e = (*e + sign) % P;
                }
            }
            rows.entry((i, j)).or_default().push(row);
        }
    }
    let ranks: BTreeMap<(i32, i32), usize> = rows.into_iter().map(|(k, r)| (k, rank(r))).collect();
    let mut gradings = Vec::new();
    for (&(i, j), &dim) in &dims {
        let h = dim
            - ranks.get(&(i, j)).copied().unwrap_or(0)
            - ranks.get(&(i - 1, j)).copied().unwrap_or(0);
        gradings.extend(std::iter::repeat_n((i, j), h));
    }
    KhTable::from_gradings(gradings)
}

fn expr(s: &str) -> PlanarDiagram {
    s.parse::<KnotExpression>()
        .unwrap()
        .diagram(&KnotRegistry::default())
        .unwrap()
}

/// Named diagrams with at most `max` crossings.
pub fn corpus(max: usize) -> Vec<(String, PlanarDiagram)> {
    let mut out: Vec<(String, PlanarDiagram)> = Vec::new();
    for e in [
        "PD[]",
        "knot:3_1",
        "knot:4_1",
        "knot:5_1",
        "knot:5_2",
        "m(knot:5_2)",
        "T(2,3)",
        "m(T(2,3))",
        "T(2,5)",
        "T(2,7)",
        "T(2,9)",
        "T(3,4)",
        "m(T(3,4))",
        "T(3,5)",
        "T(2,3)#T(2,3)",
        "T(2,3)#m(T(2,3))",
        "knot:3_1#knot:4_1",
        "knot:4_1#knot:4_1",
        "T(2,5)#m(T(2,3))",
        "T(2,3)#T(2,3)#T(2,3)",
        "T(2,11)",
        "T(3,7)",
        "T(2,5)#T(2,7)",
    ] {
        out.push((e.to_string(), expr(e)));
    }
    for t in -4..=3 {
        for (label, spec) in [
            ("D+", DoubleSpec::positive(PlanarDiagram::unknot(), t)),
            ("D-", DoubleSpec::negative(PlanarDiagram::unknot(), t)),
        ] {
            out.push((format!("{label}(U,{t})"), twisted_double(&spec).unwrap()));
        }
    }
    for t in [1, 2, 3] {
        let d = twisted_double(&DoubleSpec::positive(torus_knot(2, 3).unwrap(), t)).unwrap();
        out.push((format!("D+(T(2,3),{t})"), d));
    }
    let mut rng = StdRng::seed_from_u64(7);
    for k in 0..12 {
        let (name, d) = random_braid_knot(&mut rng, 3 + k % 2, 6 + k % 5);
        out.push((name, d));
    }
    out.retain(|(_, d)| d.crossing_count() <= max);
    out
}

/// A random braid word whose closure is a knot. The length is bumped by
/// one if needed, since an n-cycle needs a word of length n - 1 mod 2.
pub fn random_braid_knot(rng: &mut StdRng, strands: usize, len: usize) -> (String, PlanarDiagram) {
    let len = if (len + strands - 1).is_multiple_of(2) {
        len
    } else {
        len + 1
    };
    for _ in 0..100_000 {
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        if let Ok(d) = braid_closure(strands, &word) {
            return (format!("braid{strands}{word:?}"), d);
        }
    }
    panic!("no knot among random {strands}-strand braids of length {len}");
}

/// Pairs of expressions for additivity and mirror checks.
pub fn sum_pairs() -> Vec<(&'static str, &'static str)> {
    vec![
        ("T(2,3)", "T(2,3)"),
        ("T(2,3)", "m(T(2,3))"),
        ("T(2,3)", "T(2,5)"),
        ("T(2,3)", "m(T(2,5))"),
        ("T(2,5)", "T(2,5)"),
        ("T(2,5)", "m(T(2,3))"),
        ("T(2,3)", "knot:4_1"),
        ("T(2,5)", "knot:4_1"),
        ("knot:4_1", "knot:4_1"),
        ("knot:5_2", "T(2,3)"),
        ("knot:5_2", "m(knot:5_2)"),
        ("knot:5_2", "knot:5_2"),
        ("knot:5_1", "m(T(2,3))"),
        ("T(3,4)", "m(T(2,3))"),
        ("T(3,4)", "T(2,3)"),
        ("T(3,4)", "knot:4_1"),
        ("T(2,7)", "m(T(2,5))"),
        ("T(2,7)", "T(2,3)"),
        ("T(3,5)", "m(T(3,4))"),
        ("T(3,4)", "m(T(3,4))"),
        ("knot:5_2", "knot:4_1"),
        ("m(T(2,7))", "m(T(2,3))"),
        ("T(2,3)#T(2,3)", "m(T(2,5))"),
        ("knot:3_1", "m(knot:5_1)"),
    ]
}

pub fn diagram(e: &str) -> PlanarDiagram {
    expr(e)
}
