use qzw::lattice::{Configuration, LatticeParams};
use qzw::stream_rng;
use qzw::zw_measures::{DppSampler, EnsembleN, GibbsEnsembleSampler, ParamQuadruple};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;

fn chi_square_p(counts: &BTreeMap<Configuration, usize>, ens: &EnsembleN, draws: usize) -> f64 {
    // cells with expected count below 5 are pooled with everything unseen
    let n = draws as f64;
    let (mut stat, mut cells, mut big_obs, mut big_exp) = (0.0, 0, 0.0, 0.0);
    for (c, &o) in counts {
        let e = ens.measure_weight(c).unwrap() * n;
        if e >= 5.0 {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
            big_obs += o as f64;
            big_exp += e;
        }
    }
    let (rest_obs, rest_exp) = (n - big_obs, n - big_exp);
    stat += (rest_obs - rest_exp).powi(2) / rest_exp;
    ChiSquared::new(cells as f64).unwrap().sf(stat)
}

#[test]
fn dpp_and_gibbs_match_the_measure() {
    let ens = EnsembleN::new(ParamQuadruple::reference(), LatticeParams::reference(), 2).unwrap();
    let mut rng = stream_rng(77, 0);
    let draws = 20_000;

    let dpp = DppSampler::new(&ens, 1e-12, 1e-6).unwrap();
    let mut counts = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(dpp.sample(&mut rng)).or_insert(0) += 1;
    }
    let p = chi_square_p(&counts, &ens, draws);
    assert!(p > 1e-3, "dpp p-value {p}");

    let gibbs = GibbsEnsembleSampler::new(&ens, 1e-12, 30).unwrap();
    let draws = 4000;
    let mut counts = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(gibbs.sample(&mut rng)).or_insert(0) += 1;
    }
    let p = chi_square_p(&counts, &ens, draws);
    assert!(p > 1e-3, "gibbs p-value {p}");
}
