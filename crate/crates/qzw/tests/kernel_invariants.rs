use proptest::prelude::*;
use qzw::lattice::{LatticeParams, LatticePoint};
use qzw::limit_kernel::{f_r, f_r_ordered, h_frak, pochhammer_reversal, BoundaryKernel, Ordering};
use qzw::qspecial::{sum_real, QBase};
use qzw::zw_measures::ParamQuadruple;
use qzw::Complex64;

fn point() -> impl Strategy<Value = LatticePoint> {
    (any::<bool>(), -6i64..10).prop_map(|(pos, m)| if pos { LatticePoint::plus(m) } else { LatticePoint::minus(m) })
}

fn all_points(range: std::ops::Range<i64>) -> Vec<LatticePoint> {
    range.flat_map(|m| [LatticePoint::plus(m), LatticePoint::minus(m)]).collect()
}

#[test]
fn squared_norms_of_f_match_h() {
    // Σ_x F_r(x)^2 = 𝔥_r
    let lat = LatticeParams::reference();
    let p = ParamQuadruple::reference();
    for r in [0, 1] {
        let s = sum_real(all_points(-40..80).iter().map(|x| f_r(r, x, &p, &lat).unwrap().powi(2)));
        let h = h_frak(r, &p, &lat);
        assert!((s - h).abs() < 1e-6 * h, "r={r}: {s} {h}");
    }
}

#[test]
fn kernel_is_a_contraction() {
    let bk = BoundaryKernel::reference();
    let pts = all_points(-3..9);
    let m = bk.matrix(&pts).unwrap();
    let eig = m.symmetric_eigen().eigenvalues;
    for e in eig.iter() {
        assert!(*e > -1e-9 && *e < 1.0 + 1e-9, "eigenvalue {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_is_independent_of_parameter_order(x in point(), r in 0i32..2) {
        let lat = LatticeParams::reference();
        let p = ParamQuadruple::reference();
        let q = lat.q;
        let vals: Vec<f64> = Ordering::ALL
            .iter()
            .filter(|o| o.series_ratio(r, &p, q) < 1.0)
            .map(|o| f_r_ordered(r, &x, &p, &lat, *o).unwrap())
            .collect();
        prop_assert!(vals.len() >= 2);
        for v in &vals[1..] {
            prop_assert!((v - vals[0]).abs() <= 1e-10 * vals[0].abs().max(1e-300), "{:?}", vals);
        }
    }

    #[test]
    fn kernel_symmetric(x in point(), y in point()) {
        prop_assume!(x != y);
        let bk = BoundaryKernel::reference();
        let a = bk.eval(&x, &y).unwrap();
        let b = bk.eval(&y, &x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn pochhammer_reversal_holds(re in 0.2f64..3.0, im in -2.0f64..2.0, n in 0usize..25) {
        let (l, r) = pochhammer_reversal(Complex64::new(re, im), n, QBase::new(0.5).unwrap());
        prop_assert!((l - r).norm() <= 1e-12 * r.norm().max(1e-300));
    }
}
