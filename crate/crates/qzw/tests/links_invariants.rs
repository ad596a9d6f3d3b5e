use proptest::prelude::*;
use qzw::graph_links::{interlace_det, link_entry, link_row, weight_wt};
use qzw::lattice::{interlace, interlace_tilde, Configuration, LatticeParams, LatticePoint, TailSpec};

fn point() -> impl Strategy<Value = LatticePoint> {
    (any::<bool>(), -4i64..6).prop_map(|(pos, m)| if pos { LatticePoint::plus(m) } else { LatticePoint::minus(m) })
}

fn configuration(n: usize) -> impl Strategy<Value = Configuration> {
    proptest::collection::btree_set(point(), n).prop_map(|s| Configuration::from_unsorted(s.into_iter().collect()).unwrap())
}

proptest! {
    #[test]
    fn interlacing_characterizations_agree(x in configuration(4), y in configuration(3)) {
        let a = interlace(&x, &y).unwrap();
        prop_assert_eq!(a, interlace_tilde(&x, &y).unwrap());
        prop_assert_eq!(a, interlace_det(&x, &y).unwrap() == 1);
    }

    #[test]
    fn link_entries_vanish_off_interlacing(x in configuration(3), y in configuration(2)) {
        let lat = LatticeParams::reference();
        let p = link_entry(&lat, &x, &y).unwrap();
        prop_assert!(p >= 0.0);
        if !interlace(&x, &y).unwrap() {
            prop_assert_eq!(p, 0.0);
            prop_assert_eq!(weight_wt(&lat, &x, &y).unwrap(), 0.0);
        }
    }

    #[test]
    fn rows_are_stochastic(x in configuration(3)) {
        let lat = LatticeParams::reference();
        let row = link_row(&lat, &x, &TailSpec::default_for(&lat)).unwrap();
        let m = row.mass();
        prop_assert!(m <= 1.0 + 1e-10 && m >= 1.0 - row.tail_mass_bound - 1e-10, "mass {}", m);
    }
}
