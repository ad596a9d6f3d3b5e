//! The N-particle measures: kernel, coherency and exact sampling.
//!
//! `cargo run --release --example zw_ensemble`

use qzw::lattice::{Configuration, LatticeParams, LatticePoint, TailSpec};
use qzw::zw_measures::{DppSampler, EnsembleN, GibbsEnsembleSampler, ParamQuadruple};
use qzw::stream_rng;
use std::collections::BTreeMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lat = LatticeParams::reference();
    let params = ParamQuadruple::reference();
    let n = 3;
    let ens = EnsembleN::new(params, lat, n)?;
    println!("N = {n}, ln Z = {:.6}", ens.ln_normalization());

    let window = ens.window(1e-12)?;
    let k = ens.kernel_matrix(&window)?;
    println!("window of {} points, trace K = {:.12}", window.len(), k.trace());

    // M_{N+1} pushed down by the link agrees with M_N
    let upper = EnsembleN::new(params, lat, n + 1)?;
    let y = Configuration::from_unsorted(vec![LatticePoint::plus(0), LatticePoint::plus(2), LatticePoint::minus(1)])?;
    let (lhs, rhs, _) = upper.coherency_check(&ens, &y, &TailSpec::with_cutoff(&lat, lat.q.pow(45)))?;
    println!("coherency at {y}: {lhs:.12e} vs {rhs:.12e}");

    let mut rng = stream_rng(5, 0);
    let dpp = DppSampler::new(&ens, 1e-12, 1e-6)?;
    let gibbs = GibbsEnsembleSampler::new(&ens, 1e-12, 50)?;
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let draws = 20_000;
    for _ in 0..draws {
        counts.entry(dpp.sample(&mut rng).to_string()).or_default().0 += 1;
    }
    for _ in 0..draws / 10 {
        counts.entry(gibbs.sample(&mut rng).to_string()).or_default().1 += 1;
    }
    let mut top: Vec<_> = counts.into_iter().collect();
    top.sort_by(|a, b| b.1 .0.cmp(&a.1 .0));
    println!("{:<24} {:>8} {:>8} {:>10}", "configuration", "dpp", "gibbs", "exact");
    for (c, (d, g)) in top.into_iter().take(6) {
        let conf: Configuration = Configuration::from_unsorted(
            c.trim_matches(|ch| ch == '{' || ch == '}').split(", ").map(|s| s.parse().unwrap()).collect(),
        )?;
        println!(
            "{c:<24} {:>8.4} {:>8.4} {:>10.4}",
            d as f64 / draws as f64,
            g as f64 / (draws / 10) as f64,
            ens.measure_weight(&conf)?
        );
    }
    Ok(())
}
