//! Pseudo big q-Jacobi polynomials: norms, orthogonality and the backward shift.
//!
//! `cargo run --release --example pbqj_polynomials`

use qzw::lattice::{LatticeParams, LatticePoint, SumOptions};
use qzw::pbqj::PbqjParams;
use qzw::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lat = LatticeParams::reference();
    let q = lat.q.value();
    let p = PbqjParams::new(Complex64::new(1.0, 0.5), Complex64::new(1.0, -0.5), Complex64::new(3.0, 1.0) / q.powi(3), Complex64::new(3.0, -1.0) / q.powi(3), lat)?;
    let opts = SumOptions::default();

    let direct = p.h0_direct(&opts);
    println!("h_0 closed form {:.12e}, lattice sum {:.12e}", p.h0().re, direct.value.re);

    println!("Gram matrix <p_m, p_n>/sqrt(h_m h_n):");
    for m in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|n| {
                let s = p.orthogonality_check(m, n, &opts).unwrap().value;
                let h = (p.norm_h(m).unwrap() * p.norm_h(n).unwrap()).sqrt();
                format!("{:>10.2e}", (s / h).norm())
            })
            .collect();
        println!("  {}", row.join(" "));
    }

    for y in [LatticePoint::plus(2), LatticePoint::minus(0)] {
        let (lhs, rhs, err) = p.backward_shift_check(2, &y, &opts)?;
        println!("backward shift n=2 at {y}: {lhs:.6e} vs {rhs:.6e} (tail {err:.1e})");
    }
    Ok(())
}
