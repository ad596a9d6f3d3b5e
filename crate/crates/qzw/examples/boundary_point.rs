//! A boundary point seen from finite levels: stabilizing rows and the
//! law of large numbers for the largest coordinate.
//!
//! `cargo run --release --example boundary_point`

use qzw::boundary_approx::{approx_boundary_link, lln_check, moment_check, ApproxOptions, BoundaryPoint};
use qzw::lattice::LatticeParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lat = LatticeParams::reference();
    let bp = BoundaryPoint::sparse_positive(lat, 12);
    println!("prefix {}, tail bound {:.2e}", bp.truncate(4)?, bp.tail_bound);

    let opts = ApproxOptions { paths: 20_000, seed: 3, ..ApproxOptions::default_for(&lat) };
    let rep = approx_boundary_link(&bp, 2, &[3, 4, 5, 7, 9, 11], &opts)?;
    for s in &rep.steps {
        let tv = s.tv_to_previous.map_or("-".to_string(), |t| format!("{t:.4}"));
        println!("N = {:>2}: {:>4} configurations, TV to previous {tv}", s.n, s.row.entries.len());
    }
    println!("stabilized at step {:?}", rep.stabilized_at);

    let (lhs, rhs, tail) = moment_check(&bp, 2, 5, &[2, 1], &opts)?;
    println!("Schur moment ν=(2,1): {lhs:.12e} vs {rhs:.12e} (tail {tail:.1e})");

    for row in lln_check(&bp, 1, &[1, 2, 4, 8], 2000, 11, &opts)? {
        println!("L = {:>2}: P[y_(1) = x_(1)] ≈ {:.4} ± {:.4}", row.level, row.estimate, row.std_error);
    }
    Ok(())
}
