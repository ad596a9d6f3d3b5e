//! The limit kernel and its approach by the finite-N kernels.
//!
//! `cargo run --release --example boundary_kernel`

use qzw::lattice::{LatticeParams, LatticePoint};
use qzw::limit_kernel::BoundaryKernel;
use qzw::zw_measures::{EnsembleN, ParamQuadruple};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bk = BoundaryKernel::reference();
    let lat = LatticeParams::reference();
    let x = LatticePoint::plus(0);
    let y = LatticePoint::minus(1);

    println!("F_0(x) = {:.12e}, F_1(x) = {:.12e}, h_1 = {:.12e}", bk.f(0, &x)?, bk.f(1, &x)?, bk.h1);
    let (coarse, fine) = bk.diagonal_cauchy(&x)?;
    println!("K(x,x): contour {fine:.12e} (coarse {coarse:.12e}), finite difference {:.12e}", bk.diagonal_fd(&x)?);
    let k = bk.eval(&x, &y)?;
    println!("K({x}, {y}) = {k:.12e}");

    println!("{:>4} {:>20} {:>12}", "N", "K_N", "|gap|");
    for n in [5, 10, 15, 20, 25, 30] {
        let kn = EnsembleN::new(ParamQuadruple::reference(), lat, n)?.kernel(&x, &y)?;
        println!("{n:>4} {kn:>20.12e} {:>12.3e}", (kn.abs() - k.abs()).abs());
    }

    let pts = [LatticePoint::plus(0), LatticePoint::plus(1), LatticePoint::minus(0)];
    println!("ρ({}, {}, {}) = {:.6e}", pts[0], pts[1], pts[2], bk.correlation(&pts)?);
    Ok(())
}
