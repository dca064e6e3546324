//! Property tests for the arithmetic kernels: cyclotomic ring laws, root
//! transport, ideal filtrations, fixed-point level reduction, and agreement
//! of the integer and mod-l membership routes.

use proptest::prelude::*;

use prolrep_core::cyc::Cyc;
use prolrep_core::fp::{FpSpace, ZLattice};
use prolrep_core::group::build_group;
use prolrep_core::perm::Perm;
use prolrep_core::repring::RepRing;
use prolrep_core::rootring::{perm_group, theorem_general_witness, TensorElem};

fn cyc_strategy(order: u32) -> impl Strategy<Value = Cyc> {
    proptest::collection::vec((0..order, -4i64..=4), 0..5).prop_map(move |terms| {
        let mut c = Cyc::zero(order);
        for (e, k) in terms {
            c = c.add(&Cyc::root(order, e as i64).scale(k));
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(
        a in cyc_strategy(12),
        b in cyc_strategy(12),
        c in cyc_strategy(12),
    ) {
        prop_assert!(a.mul(&b).equals(&b.mul(&a)));
        prop_assert!(a.mul(&b).mul(&c).equals(&a.mul(&b.mul(&c))));
        prop_assert!(a.mul(&b.add(&c)).equals(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn cyclotomic_conjugation_is_involutive(a in cyc_strategy(8)) {
        prop_assert!(a.conj().conj().equals(&a));
    }
}

fn tensor_strategy(l: u64, n: usize, level: u32) -> impl Strategy<Value = TensorElem> {
    let bound = l.pow(level);
    proptest::collection::vec((proptest::collection::vec(0..bound, n), 1..l), 0..6).prop_map(
        move |terms| {
            let mut t = TensorElem::zero(l, n, level);
            for (exps, coeff) in terms {
                t = t.add(&TensorElem::monomial(l, level, &exps, coeff));
            }
            t
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn root_powers_back_l2(x in tensor_strategy(2, 3, 2)) {
        let r = x.lth_root();
        prop_assert_eq!(r.pow(2).normalized(), x.normalized());
    }

    #[test]
    fn root_powers_back_l3(x in tensor_strategy(3, 2, 2)) {
        let r = x.lth_root();
        prop_assert_eq!(r.pow(3).normalized(), x.normalized());
    }

    #[test]
    fn root_commutes_with_coordinate_action(x in tensor_strategy(2, 3, 2), s in 0usize..3) {
        let p = if s == 0 {
            Perm::identity(3)
        } else {
            Perm::transposition(3, 0, s)
        };
        prop_assert_eq!(x.apply_perm(&p).lth_root(), x.lth_root().apply_perm(&p));
    }

    #[test]
    fn witness_for_arbitrary_invariant_inputs(x in tensor_strategy(2, 2, 2)) {
        // symmetrize and strip the constant term, then the identity must
        // verify end to end
        let swap = Perm::transposition(2, 0, 1);
        let sym = x.add(&x.apply_perm(&swap));
        let b = sym.sub(&TensorElem::constant(2, 2, 2, sym.augmentation()));
        let big = perm_group(2, &[swap]);
        let small = vec![Perm::identity(2)];
        let w = theorem_general_witness(&b, &small, &big);
        prop_assert!(w.is_ok(), "{:?}", w.err());
    }

    #[test]
    fn ideal_filtration_multiplicative(a in 1u32..4, b in 1u32..4) {
        let ring = RepRing::new(&build_group("heisenberg(2,1)").unwrap()).unwrap();
        let i = ring.augmentation_ideal(2);
        let pa = ring.ideal_power(2, &i, a);
        let pb = ring.ideal_power(2, &i, b);
        let pab = ring.ideal_power(2, &i, a + b);
        prop_assert!(pab.contains_space(&ring.ideal_mul(2, &pa, &pb)));
        prop_assert!(pa.contains_space(&pab));
    }

    #[test]
    fn fixed_point_witness_reduces_levels(
        f in proptest::collection::vec(0u64..8, 3),
        which in 0usize..6,
    ) {
        let perms = prolrep_core::perm::all_perms(3);
        let sigma = &perms[which];
        if prolrep_core::bar::fixed_point_witness(sigma, &f, 8).is_some() {
            let down: Vec<u64> = f.iter().map(|&x| x % 4).collect();
            prop_assert!(prolrep_core::bar::fixed_point_witness(sigma, &down, 4).is_some());
        }
    }

    #[test]
    fn integer_and_mod_l_membership_agree(
        gens in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 1..4),
        x in proptest::collection::vec(-4i64..=4, 4),
    ) {
        // lattices containing (l): the Hermite route and the mod-l row space
        // decide membership identically
        let l = 2u64;
        let mut all = vec![
            vec![l as i64, 0, 0, 0],
            vec![0, l as i64, 0, 0],
            vec![0, 0, l as i64, 0],
            vec![0, 0, 0, l as i64],
        ];
        all.extend(gens.clone());
        let lat = ZLattice::new(4, all.clone());
        let space = FpSpace::from_rows(
            l,
            4,
            gens.iter().map(|g| g.iter().map(|&c| c.rem_euclid(l as i64) as u64).collect()),
        );
        let reduced: Vec<u64> = x.iter().map(|&c| c.rem_euclid(l as i64) as u64).collect();
        prop_assert_eq!(lat.contains(&x), space.contains(&reduced));
    }
}

#[test]
fn frobenius_is_injective_at_bounded_exponents() {
    // level-(k+1) elements with exponents below l^k have distinct l-th
    // powers: exponent doubling is injective there, so constructed roots
    // are the unique preimages with bounded exponents
    let mut seen = std::collections::HashSet::new();
    for e0 in 0..2u64 {
        for e1 in 0..2u64 {
            for c in 1..2u64 {
                let x = TensorElem::monomial(2, 2, &[e0, e1], c);
                let sq = x.pow(2);
                let key = format!("{sq:?}");
                assert!(seen.insert(key), "collision at {e0},{e1}");
            }
        }
    }
}
