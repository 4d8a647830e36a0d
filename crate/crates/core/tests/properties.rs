mod common;

use common::{corpus, diagram, random_braid_knot, sum_pairs};
use knotconc::concordance::{t_tau, KnotExpression, KnotRegistry};
use knotconc::construct::mirror_double_identity_check;
use knotconc::homology::{kh_homology_with, s_invariant_with};
use knotconc::{
    kh_homology, s_invariant, torus_knot, twisted_double, DoubleSpec, FieldSpec, FrobeniusParams,
    PlanarDiagram, ScanOptions,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn s(d: &PlanarDiagram) -> i32 {
    s_invariant(d, FieldSpec::Rational).unwrap().s
}

#[test]
fn s_is_additive_and_odd_under_mirroring() {
    let pairs = sum_pairs();
    assert!(pairs.len() >= 20);
    for (a, b) in pairs {
        let (da, db) = (diagram(a), diagram(b));
        let sum = diagram(&format!("{a}#{b}"));
        assert_eq!(s(&sum), s(&da) + s(&db), "{a} # {b}");
        assert_eq!(s(&da.mirror()), -s(&da), "{a}");
        assert_eq!(s(&sum.mirror()), -s(&sum), "{a} # {b}");
    }
}

#[test]
fn torus_knot_values() {
    for (p, q, nu) in [
        (2, 3, 1),
        (2, 5, 2),
        (2, 7, 3),
        (3, 4, 3),
        (3, 5, 4),
        (2, 9, 4),
        (3, 7, 6),
    ] {
        let r = s_invariant(&torus_knot(p, q).unwrap(), FieldSpec::Rational).unwrap();
        assert_eq!(r.nu(), nu, "T({p},{q})");
        assert_eq!((r.s_min, r.s_max), (r.s - 1, r.s + 1));
    }
}

#[test]
fn crossing_order_does_not_matter() {
    let mut rng = StdRng::seed_from_u64(11);
    for (name, d) in corpus(12) {
        let plain = kh_homology(&d, FieldSpec::Rational).unwrap();
        let s0 = s(&d);
        for _ in 0..5 {
            let mut order: Vec<usize> = (0..d.crossing_count()).collect();
            order.shuffle(&mut rng);
            let opts = ScanOptions {
                order: Some(order.clone()),
                check_invariants: true,
                ..Default::default()
            };
            assert_eq!(
                kh_homology_with(&d, FieldSpec::Rational, &opts).unwrap(),
                plain,
                "{name} {order:?}"
            );
            let params = FrobeniusParams::for_s_invariant(FieldSpec::Rational);
            assert_eq!(
                s_invariant_with(&d, &params, &opts).unwrap().s,
                s0,
                "{name} {order:?}"
            );
        }
    }
}

#[test]
fn differential_squares_to_zero_on_random_braids() {
    let mut rng = StdRng::seed_from_u64(3);
    let opts = ScanOptions {
        check_invariants: true,
        ..Default::default()
    };
    let params = FrobeniusParams::for_s_invariant(FieldSpec::Rational);
    for k in 0..1000 {
        let strands = if k % 2 == 0 { 3 } else { 5 };
        let (name, d) = random_braid_knot(&mut rng, strands, 8);
        assert_eq!(d.crossing_count(), 8);
        kh_homology_with(&d, FieldSpec::Rational, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
        if k % 10 == 0 {
            s_invariant_with(&d, &params, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn prime_fields_agree_on_small_knots() {
    for (name, d) in corpus(10) {
        let q = s(&d);
        for p in [3, 5, 7] {
            assert_eq!(
                s_invariant(&d, FieldSpec::Prime(p)).unwrap().s,
                q,
                "{name} over F_{p}"
            );
        }
    }
}

#[test]
fn double_writhe() {
    for (name, k) in [
        ("U", PlanarDiagram::unknot()),
        ("T(2,3)", torus_knot(2, 3).unwrap()),
        ("4_1", diagram("knot:4_1")),
    ] {
        let w = k.writhe();
        for t in -3..=3 {
            let p = twisted_double(&DoubleSpec::positive(k.clone(), t)).unwrap();
            let n = twisted_double(&DoubleSpec::negative(k.clone(), t)).unwrap();
            assert_eq!(p.writhe(), 2 * (w - t) + 2, "D+({name},{t})");
            assert_eq!(n.writhe(), 2 * (w - t) - 2, "D-({name},{t})");
            assert_eq!(
                p.crossing_count(),
                4 * k.crossing_count() + 2 * (w - t).unsigned_abs() as usize + 2
            );
        }
    }
    // D+(U,-1) is the right trefoil and D+(U,1) the figure-eight knot.
    let tref = twisted_double(&DoubleSpec::positive(PlanarDiagram::unknot(), -1)).unwrap();
    assert_eq!(
        kh_homology(&tref, FieldSpec::Rational).unwrap(),
        kh_homology(&torus_knot(2, 3).unwrap(), FieldSpec::Rational).unwrap()
    );
    let eight = twisted_double(&DoubleSpec::positive(PlanarDiagram::unknot(), 1)).unwrap();
    assert_eq!(
        kh_homology(&eight, FieldSpec::Rational).unwrap(),
        kh_homology(&diagram("knot:4_1"), FieldSpec::Rational).unwrap()
    );
}

#[test]
fn mirrored_doubles() {
    let opts = ScanOptions::default();
    for k in [
        PlanarDiagram::unknot(),
        torus_knot(2, 3).unwrap(),
        diagram("knot:4_1"),
    ] {
        for t in -2..=2 {
            for spec in [
                DoubleSpec::positive(k.clone(), t),
                DoubleSpec::negative(k.clone(), t),
            ] {
                assert!(mirror_double_identity_check(&spec, FieldSpec::Rational, &opts).unwrap());
            }
        }
    }
}

fn torus_expr() -> impl Strategy<Value = KnotExpression> {
    let leaf = (2i64..5, 1i64..8, any::<bool>()).prop_filter_map("coprime", |(p, q, m)| {
        let q = q + p;
        (num_gcd(p, q) == 1).then(|| {
            let e = KnotExpression::torus(p, q);
            if m {
                e.mirror()
            } else {
                e
            }
        })
    });
    prop::collection::vec(leaf, 1..5)
        .prop_map(|v| v.into_iter().reduce(KnotExpression::sum).unwrap())
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn t_tau_is_odd(e in torus_expr()) {
        let t = t_tau(&e, &KnotRegistry::default()).unwrap();
        prop_assert_eq!(t.rem_euclid(2), 1);
        prop_assert_eq!(t_tau(&e.clone().mirror(), &KnotRegistry::default()).unwrap(), -t - 2);
    }

    #[test]
    fn kh_of_mirror_is_reflected(seed in any::<u64>(), strands in 3usize..5, len in 4usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (_, d) = random_braid_knot(&mut rng, strands, len);
        let kh = kh_homology(&d, FieldSpec::Rational).unwrap();
        prop_assert_eq!(kh_homology(&d.mirror(), FieldSpec::Rational).unwrap(), kh.mirrored());
        prop_assert_eq!(s(&d.mirror()), -s(&d));
        // The Euler characteristic at q = 1 is 2, so the total rank is even.
        prop_assert_eq!(kh.total_dim() % 2, 0);
    }

    #[test]
    fn canonical_form_ignores_relabelling(seed in any::<u64>(), shift in 0u32..20) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (_, d) = random_braid_knot(&mut rng, 3, 6);
        let n = d.n_arcs();
        let tuples: Vec<[u32; 4]> = d.tuples().iter().map(|x| x.map(|l| (l - 1 + shift) % n + 1)).collect();
        let e = PlanarDiagram::from_tuples(&tuples).unwrap();
        prop_assert!(e.is_isomorphic(&d));
        prop_assert_eq!(s(&e), s(&d));
    }

    #[test]
    fn s_bounded_by_slice_genus_proxy(seed in any::<u64>(), len in 4usize..10) {
        // |s| <= 2 g_4 <= 2 g, and a closed braid on 3 strands with `len`
        // crossings has a Seifert surface of genus (len - 2) / 2.
        let mut rng = StdRng::seed_from_u64(seed);
        let (_, d) = random_braid_knot(&mut rng, 3, len);
        let g = (d.crossing_count() as i32 - 3 + 1) / 2;
        prop_assert!(s(&d).abs() <= 2 * g);
    }
}
