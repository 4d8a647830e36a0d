mod common;

use common::{brute_force_kh, corpus};
use knotconc::homology::kauffman_bracket_jones;
use knotconc::{kh_homology, FieldSpec};

#[test]
fn scanning_matches_cube_of_resolutions() {
    let diagrams = corpus(10);
    assert!(
        diagrams.len() >= 30,
        "corpus has {} diagrams",
        diagrams.len()
    );
    for (name, d) in &diagrams {
        let want = brute_force_kh(d);
        let got = kh_homology(d, FieldSpec::Rational).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn oracle_knows_the_trefoil() {
    let d = common::diagram("T(2,3)");
    let t = brute_force_kh(&d);
    assert_eq!(
        t.iter().collect::<Vec<_>>(),
        vec![((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]
    );
}

#[test]
fn euler_characteristic_is_jones() {
    for (name, d) in corpus(16) {
        let kh = kh_homology(&d, FieldSpec::Rational).unwrap();
        assert_eq!(
            kh.euler_characteristic(),
            kauffman_bracket_jones(&d, 16).unwrap(),
            "{name}"
        );
    }
}
