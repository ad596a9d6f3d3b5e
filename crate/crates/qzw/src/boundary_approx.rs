//! Finite-level approximations of boundary points and boundary measures.
//!
//! A boundary point is an infinite configuration whose variational series
//! satisfies `|x_(k)| <= |x_(1)| q^{floor((k-1)/2)}`; here it is represented
//! by a finite prefix. The measure attached to it at level `K` is the limit of
//! `Λ^N_K(X(N), ·)` with `X(N)` the first `N` terms.

use crate::graph_links::{
    branching_identity_check, link_compose, link_sample, ComposeOptions, ComposeStrategy, LinkError, LinkRow,
};
use crate::lattice::{variational_series, Configuration, LatticeParams, LatticePoint, VariationalSeries};
use crate::limit_kernel::{BoundaryKernel, LimitError};
use crate::stream_rng;
use crate::zw_measures::{EnsembleN, ParamQuadruple};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("prefix has {have} terms, level {need} requested")]
    PrefixTooShort { have: usize, need: usize },
    #[error("prefix violates the decay bound at term {0}")]
    DecayBound(usize),
    #[error("target level {k} must be below every scheduled level")]
    BadSchedule { k: usize },
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Limit(#[from] LimitError),
}

#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub lattice: LatticeParams,
    pub prefix: VariationalSeries,
    pub tail_bound: f64,
}

impl BoundaryPoint {
    pub fn new(lattice: LatticeParams, prefix: VariationalSeries) -> Result<Self, BoundaryError> {
        let first = prefix.terms.first().map(|p| p.ln_abs(&lattice)).unwrap_or(f64::NEG_INFINITY);
        for (k, t) in prefix.terms.iter().enumerate() {
            let bound = first + (k / 2) as f64 * lattice.q.ln();
            if t.ln_abs(&lattice) > bound + 1e-12 {
                return Err(BoundaryError::DecayBound(k + 1));
            }
        }
        let p = prefix.terms.len();
        let tail_bound = first.exp() * lattice.q.pow(((p.max(1) - 1) / 2) as i64);
        Ok(BoundaryPoint { lattice, prefix, tail_bound })
    }

    pub fn from_configuration(lattice: LatticeParams, x: &Configuration) -> Result<Self, BoundaryError> {
        BoundaryPoint::new(lattice, variational_series(&lattice, x))
    }

    /// `{ζ₊ q^{2k} : 0 <= k < len}`.
    pub fn sparse_positive(lattice: LatticeParams, len: usize) -> Self {
        let pts = (0..len as i64).map(|k| LatticePoint::plus(2 * k)).collect();
        BoundaryPoint::from_configuration(lattice, &Configuration::from_unsorted(pts).unwrap()).unwrap()
    }

    /// `{ζ₊ q^k, ζ₋ q^k : 0 <= k < len/2}`, first `len` terms.
    pub fn two_sided(lattice: LatticeParams, len: usize) -> Self {
        let pts = (0..len as i64).map(|i| if i % 2 == 0 { LatticePoint::plus(i / 2) } else { LatticePoint::minus(i / 2) }).collect();
        BoundaryPoint::from_configuration(lattice, &Configuration::from_unsorted(pts).unwrap()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.prefix.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.terms.is_empty()
    }

    /// `X(N)`, the first `N` terms of the variational series.
    pub fn truncate(&self, n: usize) -> Result<Configuration, BoundaryError> {
        if n > self.len() {
            return Err(BoundaryError::PrefixTooShort { have: self.len(), need: n });
        }
        Ok(self.prefix.prefix(n))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ApproxOptions {
    /// Exact composition when `N - K` is at most this.
    pub exact_max_gap: usize,
    pub prune: f64,
    pub paths: usize,
    pub seed: u64,
    pub compose: ComposeOptions,
}

impl ApproxOptions {
    pub fn default_for(p: &LatticeParams) -> Self {
        ApproxOptions { exact_max_gap: 3, prune: 1e-14, paths: 20_000, seed: 0, compose: ComposeOptions::default_for(p) }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxStep {
    pub n: usize,
    pub row: LinkRow,
    /// Total-variation distance to the previous step's row.
    pub tv_to_previous: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ApproxReport {
    pub k: usize,
    pub steps: Vec<ApproxStep>,
    /// Index of the step at which two consecutive TV distances fell below
    /// `1e-3`, if any.
    pub stabilized_at: Option<usize>,
}

pub const STABILIZATION_TV: f64 = 1e-3;

/// Rows `Λ^N_K(X(N), ·)` for each `N` of the schedule.
pub fn approx_boundary_link(
    bp: &BoundaryPoint,
    k: usize,
    schedule: &[usize],
    opts: &ApproxOptions,
) -> Result<ApproxReport, BoundaryError> {
    if schedule.iter().any(|&n| n <= k) {
        return Err(BoundaryError::BadSchedule { k });
    }
    let mut steps: Vec<ApproxStep> = Vec::new();
    let mut stabilized_at = None;
    let mut quiet = 0;
    for (i, &n) in schedule.iter().enumerate() {
        let x = bp.truncate(n)?;
        let strategy = if n - k <= opts.exact_max_gap {
            ComposeStrategy::Exact { prune: opts.prune }
        } else {
            ComposeStrategy::MonteCarlo { paths: opts.paths, seed: opts.seed.wrapping_add(n as u64) }
        };
        let row = link_compose(&bp.lattice, &x, k, strategy, &opts.compose)?;
        let tv = steps.last().map(|s| s.row.tv_distance(&row));
        if let Some(t) = tv {
            quiet = if t < STABILIZATION_TV { quiet + 1 } else { 0 };
            if quiet >= 2 && stabilized_at.is_none() {
                stabilized_at = Some(i);
            }
        }
        steps.push(ApproxStep { n, row, tv_to_previous: tv });
    }
    Ok(ApproxReport { k, steps, stabilized_at })
}

/// `Σ_Y Λ^N_K(X(N),Y) S̃_ν(Y)` against `S̃_ν(X(N))`, as `(lhs, rhs, tail)`.
pub fn moment_check(
    bp: &BoundaryPoint,
    k: usize,
    n: usize,
    nu: &[i64],
    opts: &ApproxOptions,
) -> Result<(f64, f64, f64), BoundaryError> {
    let x = bp.truncate(n)?;
    Ok(branching_identity_check(&bp.lattice, &x, k, nu, &opts.compose, opts.prune)?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LlnRow {
    pub level: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Estimates of `P[y_(k) = x_(k)]` for `Y` drawn from `Λ^P_L(X(P), ·)`,
/// `P` the full prefix length, for every `L` in the schedule.
pub fn lln_check(
    bp: &BoundaryPoint,
    k: usize,
    levels: &[usize],
    samples: usize,
    seed: u64,
    opts: &ApproxOptions,
) -> Result<Vec<LlnRow>, BoundaryError> {
    let p = bp.len();
    let x = bp.truncate(p)?;
    let target = bp.prefix.terms[k - 1];
    levels
        .iter()
        .map(|&l| {
            if l < k || l > p {
                return Err(BoundaryError::BadSchedule { k: l });
            }
            let hits: usize = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed ^ ((l as u64) << 32), i as u64);
                    let mut y = x.clone();
                    for _ in l..p {
                        y = link_sample(&bp.lattice, &y, &opts.compose.gibbs, &mut rng);
                    }
                    usize::from(variational_series(&bp.lattice, &y).terms[k - 1] == target)
                })
                .sum();
            let est = hits as f64 / samples as f64;
            Ok(LlnRow { level: l, estimate: est, std_error: (est * (1.0 - est) / samples as f64).sqrt(), samples })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorrelationRow {
    pub n: usize,
    pub finite: f64,
    pub boundary: f64,
    pub gap: f64,
}

/// `ρ_N(points)` next to the boundary value for each level in the schedule.
pub fn correlation_convergence(
    params: ParamQuadruple,
    lattice: LatticeParams,
    schedule: &[usize],
    points: &[LatticePoint],
) -> Result<Vec<CorrelationRow>, BoundaryError> {
    let bk = BoundaryKernel::new(params, lattice)?;
    let boundary = bk.correlation(points)?;
    schedule
        .iter()
        .map(|&n| {
            let ens = EnsembleN::new(params, lattice, n).map_err(LimitError::from)?;
            let finite = ens.correlation(points).map_err(LimitError::from)?;
            Ok(CorrelationRow { n, finite, boundary, gap: (finite - boundary).abs() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_bound_and_tail() {
        let lat = LatticeParams::reference();
        let bp = BoundaryPoint::two_sided(lat, 7);
        assert_eq!(bp.tail_bound, 0.125);
        assert!(bp.truncate(8).is_err());
    }

    #[test]
    fn single_step_is_exact_link() {
        let lat = LatticeParams::reference();
        let bp = BoundaryPoint::sparse_positive(lat, 5);
        let opts = ApproxOptions::default_for(&lat);
        let rep = approx_boundary_link(&bp, 3, &[4], &opts).unwrap();
        let row = &rep.steps[0].row;
        assert!(row.samples.is_none());
        assert!((row.mass() - 1.0).abs() < 1e-10 + row.tail_mass_bound);
    }
}
