//! Corpus-wide structural checks: identity and inverses exhaustively,
//! associativity exhaustively up to order 128 and on a deterministic stride
//! above, class equations, and nontrivial centers for the l-groups.

use prolrep_core::group::build_group;
use prolrep_core::suites::TABLE_CORPUS;

#[test]
fn corpus_group_axioms() {
    for spec in TABLE_CORPUS {
        let g = build_group(spec).unwrap();
        let n = g.order();
        for a in g.elements() {
            assert_eq!(g.mul(a, 0), a, "{spec}");
            assert_eq!(g.mul(0, a), a, "{spec}");
            assert_eq!(g.mul(a, g.inv(a)), 0, "{spec}");
            assert_eq!(g.mul(g.inv(a), a), 0, "{spec}");
        }
        let stride = if n <= 128 { 1 } else { 7 };
        for a in g.elements().step_by(stride) {
            for b in g.elements().step_by(stride) {
                for c in g.elements().step_by(stride) {
                    assert_eq!(
                        g.mul(g.mul(a, b), c),
                        g.mul(a, g.mul(b, c)),
                        "{spec} at ({a}, {b}, {c})"
                    );
                }
            }
        }
    }
}

#[test]
fn corpus_class_equation_and_centers() {
    for spec in TABLE_CORPUS {
        let g = build_group(spec).unwrap();
        let classes = g.conjugacy_classes();
        assert_eq!(classes.sizes.iter().sum::<u64>(), g.order(), "{spec}");
        for &s in &classes.sizes {
            assert_eq!(g.order() % s, 0, "{spec}");
        }
        if g.prime().is_some() {
            assert!(
                g.center().len() > 1,
                "{spec}: l-groups have nontrivial center"
            );
        }
        // the abelianization order divides the group order, with equality
        // exactly in the abelian case
        let ab = g.abelianization().order();
        assert_eq!(g.order() % ab, 0, "{spec}");
        assert_eq!(
            ab == g.order(),
            classes.count() as u64 == g.order(),
            "{spec}"
        );
    }
}
