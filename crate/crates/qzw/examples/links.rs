//! Rows of the q-links and their composition.
//!
//! `cargo run --release --example links`

use qzw::graph_links::{dim, link_compose, link_row, ComposeOptions, ComposeStrategy};
use qzw::lattice::{Configuration, LatticeParams, LatticePoint, TailSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lat = LatticeParams::reference();
    let x = Configuration::from_unsorted(vec![LatticePoint::plus(0), LatticePoint::minus(1), LatticePoint::plus(3)])?;
    println!("X = {x}, dim = {:.6e}", dim(&lat, &x));

    let row = link_row(&lat, &x, &TailSpec::default_for(&lat))?;
    println!("Λ(X, ·): {} configurations, mass {:.15}, tail ≤ {:.1e}", row.entries.len(), row.mass(), row.tail_mass_bound);
    let mut top: Vec<_> = row.entries.iter().collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (y, p) in top.iter().take(5) {
        println!("  {y:<20} {p:.6}");
    }

    // the same row twice removed, exactly and by Monte Carlo
    let opts = ComposeOptions::default_for(&lat);
    let exact = link_compose(&lat, &x, 1, ComposeStrategy::Exact { prune: 1e-14 }, &opts)?;
    let mc = link_compose(&lat, &x, 1, ComposeStrategy::MonteCarlo { paths: 50_000, seed: 1 }, &opts)?;
    println!("Λ³₁: {} points exact, TV to Monte Carlo {:.4}", exact.entries.len(), exact.tv_distance(&mc));
    Ok(())
}
