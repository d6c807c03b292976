//! Property tests: generator seeds and shift profiles are the shrinkable inputs.

use proptest::prelude::*;

use twc_core::confl;
use twc_core::examples;
use twc_core::gen::Gen;
use twc_core::hat::{self, HatBasis};
use twc_core::io;
use twc_core::matrix::Matrix;
use twc_core::scalar::Field;
use twc_core::tw::{b1, is_coboundary, is_cocycle, star, TwMor};

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Q), Just(Field::fp(5).unwrap()), Just(Field::fp(7).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hat_stasheff_vanishes_far_outside_the_window(k in 0usize..363, prof in proptest::collection::vec(-9i64..10, 4)) {
        let z = examples::e3(Field::Q);
        let chains = z.chains(3);
        let base = &chains[k % chains.len()];
        let c = hat::lift(base, &prof);
        prop_assert!(hat::hat_stasheff_residue(&z, &c).is_empty());
    }

    #[test]
    fn hat_products_commute_with_shift(k in 0usize..64, prof in proptest::collection::vec(-6i64..7, 4), by in -4i64..5) {
        let z = examples::e3(Field::Q);
        let chains = z.chains(3);
        let c = hat::lift(&chains[k % chains.len()], &prof);
        let shifted: Vec<HatBasis> = c.iter().map(|x| x.shift(by)).collect();
        let lhs = hat::hat_bn(&z, &shifted).unwrap();
        let rhs = hat::map_terms(&hat::hat_bn(&z, &c).unwrap(), |b| b.shift(by));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tw_identities_for_any_seed(seed in any::<u64>(), field in fields(), e3 in any::<bool>()) {
        let z = if e3 { examples::e3(field) } else { examples::e2(field) };
        let mut g = Gen::new(&z, seed, 4);
        let (w, x, y, v) = (g.object(), g.object(), g.object(), g.object());
        let h = g.morphism(&x, &y, -2);
        prop_assert!(b1(&z, &b1(&z, &h)).is_zero());
        let (f, gm, hh) = (g.cocycle(&w, &x), g.cocycle(&x, &y), g.cocycle(&y, &v));
        prop_assert!(is_cocycle(&z, &star(&z, &gm, &f)));
        let l = star(&z, &star(&z, &hh, &gm), &f);
        let r = star(&z, &hh, &star(&z, &gm, &f));
        prop_assert!(is_coboundary(&z, &l.sub(&r)));
        prop_assert!(is_coboundary(&z, &star(&z, &gm, &g.coboundary(&w, &x))));
    }

    #[test]
    fn psi_round_trip_and_j_contractible(seed in any::<u64>(), field in fields()) {
        let z = examples::e3(field);
        let mut g = Gen::new(&z, seed, 4);
        let (x, y) = (g.object(), g.object());
        let h = g.cocycle(&y, &x.shift(1));
        let c = confl::psi(&z, &x, &h).unwrap();
        prop_assert_eq!(confl::psi_inv(&z, &c).map, h.map);
        let j = confl::j_object(&z, &x);
        prop_assert_eq!(b1(&z, &j.s), TwMor::identity(&z, &j.xi.e));
    }

    #[test]
    fn printed_objects_parse_back(seed in any::<u64>()) {
        let z = examples::e3(Field::Q);
        let mut g = Gen::new(&z, seed, 5);
        let o = g.object();
        let text = format!("{}\n{}", io::print_algebra(&z), io::print_object(&z, "X", &o));
        let ws = io::parse_with(&text, None).unwrap();
        prop_assert_eq!(&ws.object("X").unwrap().delta, &o.delta);
        prop_assert_eq!(io::print(&ws), text);
    }

    #[test]
    fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..6), field in fields()) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = Matrix::from_ints(field, &refs);
        let n = m.nullspace();
        prop_assert_eq!(m.rank() + n.cols(), m.cols());
        prop_assert!(m.mul(&n).is_zero());
    }
}
