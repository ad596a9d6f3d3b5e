use proptest::prelude::*;
use qzw::qspecial::*;
use qzw::Complex64;

fn q(v: f64) -> QBase {
    QBase::new(v).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1e-300)
}

#[test]
fn q_binomial_theorem() {
    // 1φ0(a;;z) = (az;q)_∞/(z;q)_∞
    let qb = q(0.4);
    let (a, z) = (c(0.7, -1.2), c(0.3, 0.25));
    let lhs = basic_hypergeometric(&[a], &[], z, qb, 1e-16, None).unwrap().value;
    let rhs = qpoch_inf(a * z, qb) / qpoch_inf(z, qb);
    assert!(close(lhs, rhs, 1e-13), "{lhs} {rhs}");
}

#[test]
fn q_chu_vandermonde() {
    // 2φ1(q^-n, b; c | q; q) = (c/b;q)_n b^n/(c;q)_n
    let qb = q(0.5);
    let (b, cc) = (c(1.3, 0.2), c(0.4, -0.7));
    for n in 0..8usize {
        let a = c(qb.pow(-(n as i64)), 0.0);
        let lhs = basic_hypergeometric(&[a, b], &[cc], c(0.5, 0.0), qb, 1e-16, Some(n)).unwrap().value;
        let rhs = qpochhammer_finite(cc / b, n, qb) * b.powi(n as i32) / qpochhammer_finite(cc, n, qb);
        assert!(close(lhs, rhs, 1e-11), "n={n}: {lhs} {rhs}");
    }
}

#[test]
fn heine_transform() {
    // 2φ1(a,b;c;z) = (b,az;q)_∞/(c,z;q)_∞ 2φ1(c/b,z;az;b)
    let qb = q(0.3);
    let (a, b, cc, z) = (c(0.8, 0.1), c(0.2, -0.3), c(-0.5, 0.4), c(0.4, 0.1));
    let lhs = phi21(a, b, cc, z, qb, 1e-16).unwrap().value;
    let pre = qpoch_inf(b, qb) * qpoch_inf(a * z, qb) / (qpoch_inf(cc, qb) * qpoch_inf(z, qb));
    let rhs = pre * phi21(cc / b, z, a * z, b, qb, 1e-16).unwrap().value;
    assert!(close(lhs, rhs, 1e-12), "{lhs} {rhs}");
}

#[test]
fn reversal_transform_of_terminating_phi32() {
    let qb = q(0.5);
    for n in [1usize, 3, 6, 9] {
        let (l, r) = phi32_transform_iii11(n, c(1.3, 0.4), c(0.7, -0.2), c(2.5, 0.5), c(1.7, -0.3), qb).unwrap();
        assert!(close(l, r, 1e-9), "n={n}: {l} {r}");
    }
}

proptest! {
    #[test]
    fn pochhammer_split(re in -2.0f64..2.0, im in -2.0f64..2.0, n in 0usize..20, qv in 0.1f64..0.8) {
        let qb = q(qv);
        let a = c(re, im);
        let whole = qpoch_inf(a, qb);
        let split = qpochhammer_finite(a, n, qb) * qpoch_inf(a * qb.pow(n as i64), qb);
        prop_assert!((whole - split).norm() <= 1e-12 * (1.0 + whole.norm()));
    }

    #[test]
    fn theta_quasi_periodic(r in 0.2f64..5.0, t in 0.0f64..6.28, qv in 0.1f64..0.8) {
        // θ(qu) = -θ(u)/u
        let qb = q(qv);
        let u = Complex64::from_polar(r, t);
        let a = theta_q(u * qv, qb, 1e-16).unwrap().value;
        let b = -theta_q(u, qb, 1e-16).unwrap().value / u;
        prop_assert!((a - b).norm() <= 1e-11 * (a.norm() + b.norm() + 1e-300));
    }

    #[test]
    fn theta_matches_scaled(r in 0.2f64..5.0, t in 0.0f64..6.28) {
        let qb = q(0.5);
        let u = Complex64::from_polar(r, t);
        let a = theta_q(u, qb, 1e-16).unwrap().value;
        let b = theta_scaled(u, qb).to_complex();
        prop_assert!((a - b).norm() <= 1e-12 * (a.norm() + 1e-300));
    }
}
