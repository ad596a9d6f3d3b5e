//! Weights, dimensions and q-links of the extended Gelfand-Tsetlin graph,
//! together with Schur-function evaluations and the moment identities that
//! characterize the links.
//!
//! The link from level N+1 to level N is
//!
//! ```text
//! Λ(X,Y) = ∏|y_i| · (q;q)_N · V(Y) / V(X),   V(X) = ∏_{i<j} (x_j - x_i),
//! ```
//!
//! supported on `Y ≺ X`. The interval of `X` straddling zero is infinite; it
//! is enumerated down to `|y| >= cutoff` and the missing mass is bounded by
//! `C · S_ε · ∏_{j≠k}(|y_j| + ε)` summed over the other coordinates, where
//! `S_ε` is the sum of the omitted `|y|` and `ε` their largest modulus.

use crate::lattice::{
    interlace, interval_i, Branch, Configuration, LatticeError, LatticeParams, LatticePoint, TailSpec,
};
use crate::qspecial::{qpochhammer_finite, sum_real, CompensatedSum};
use crate::stream_rng;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("enumeration budget of {0} entries exceeded")]
    BudgetExceeded(usize),
    #[error("target level {target} must satisfy 1 <= K < N = {n}")]
    BadLevel { target: usize, n: usize },
    #[error("signature must be weakly decreasing")]
    BadSignature,
}

pub fn ln_vandermonde(vals: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 1..vals.len() {
        for i in 0..j {
            s += (vals[j] - vals[i]).ln();
        }
    }
    s
}

/// `ln ∏_{k=1}^{n} (q;q)_k`.
pub fn ln_qfactorial_product(p: &LatticeParams, n: usize) -> f64 {
    (1..=n).map(|k| qpochhammer_finite(Complex64::new(p.q.value(), 0.0), k, p.q).re.ln()).sum()
}

pub fn weight_wt(p: &LatticeParams, x: &Configuration, y: &Configuration) -> Result<f64, LatticeError> {
    if interlace(x, y)? {
        Ok(y.values(p).iter().map(|v| v.abs()).product())
    } else {
        Ok(0.0)
    }
}

pub fn ln_dim(p: &LatticeParams, x: &Configuration) -> f64 {
    ln_vandermonde(&x.values(p)) - ln_qfactorial_product(p, x.len().saturating_sub(1))
}

pub fn dim(p: &LatticeParams, x: &Configuration) -> f64 {
    ln_dim(p, x).exp()
}

/// Single link entry by the closed product formula.
pub fn link_entry(p: &LatticeParams, x: &Configuration, y: &Configuration) -> Result<f64, LatticeError> {
    if !interlace(x, y)? {
        return Ok(0.0);
    }
    let yv = y.values(p);
    let n = y.len();
    let ln_qq = qpochhammer_finite(Complex64::new(p.q.value(), 0.0), n, p.q).re.ln();
    let l = yv.iter().map(|v| v.abs().ln()).sum::<f64>() + ln_qq + ln_vandermonde(&yv) - ln_vandermonde(&x.values(p));
    Ok(l.exp())
}

#[derive(Clone, Debug, Serialize)]
pub struct RowEntry {
    pub configuration: Configuration,
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct LinkRow {
    pub source: Configuration,
    pub entries: Vec<(Configuration, f64)>,
    pub tail_mass_bound: f64,
    /// Monte-Carlo rows: number of paths and per-entry standard errors.
    pub samples: Option<usize>,
    pub std_errors: Option<Vec<f64>>,
}

impl LinkRow {
    pub fn mass(&self) -> f64 {
        sum_real(self.entries.iter().map(|e| e.1))
    }

    pub fn probability(&self, y: &Configuration) -> f64 {
        self.entries.iter().find(|e| &e.0 == y).map_or(0.0, |e| e.1)
    }

    pub fn as_map(&self) -> BTreeMap<Configuration, f64> {
        self.entries.iter().cloned().collect()
    }

    /// Total-variation distance between the enumerated parts of two rows.
    pub fn tv_distance(&self, other: &LinkRow) -> f64 {
        let mut m: BTreeMap<&Configuration, f64> = BTreeMap::new();
        for (c, v) in &self.entries {
            *m.entry(c).or_default() += v;
        }
        for (c, v) in &other.entries {
            *m.entry(c).or_default() -= v;
        }
        0.5 * sum_real(m.values().map(|v| v.abs()))
    }

    pub fn to_entries(&self) -> Vec<RowEntry> {
        self.entries.iter().map(|(c, p)| RowEntry { configuration: c.clone(), probability: *p }).collect()
    }
}

/// The candidate sets of an interlacing `Y`, one per gap of `X`.
struct LinkIntervals {
    sets: Vec<Vec<(LatticePoint, f64)>>,
    infinite: Option<usize>,
    eps_sum: f64,
    eps_max: f64,
}

fn link_intervals(p: &LatticeParams, x: &Configuration, tail: &TailSpec) -> Result<LinkIntervals, LatticeError> {
    let xs = x.points();
    let mut sets = Vec::with_capacity(xs.len() - 1);
    let mut infinite = None;
    for i in 0..xs.len() - 1 {
        let iv = interval_i(p, &xs[i], &xs[i + 1], tail)?;
        if iv.truncated_near_zero {
            infinite = Some(i);
        }
        sets.push(iv.points.iter().map(|c| (*c, c.value(p))).collect());
    }
    let q = p.q.value();
    let em = p.zeta_minus.abs() * p.q.pow(tail.inner_exponent(p, Branch::Minus) + 1);
    let ep = p.zeta_plus * p.q.pow(tail.inner_exponent(p, Branch::Plus) + 1);
    Ok(LinkIntervals { sets, infinite, eps_sum: (em + ep) / (1.0 - q), eps_max: em.max(ep) })
}

/// Calls `f(indices)` for every element of the product of `0..sizes[i]`.
fn for_each_index(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.iter().any(|&s| s == 0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        f(&idx);
        let mut k = 0;
        loop {
            if k == sizes.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub const DEFAULT_BUDGET: usize = 20_000_000;

/// Visits every enumerated `Y ≺ X` with its log-entry, then returns the
/// certified bound on the omitted mass.
fn visit_link_row(
    p: &LatticeParams,
    x: &Configuration,
    tail: &TailSpec,
    budget: usize,
    mut visit: impl FnMut(&[(LatticePoint, f64)], f64),
) -> Result<f64, LinkError> {
    if x.len() < 2 {
        return Err(LinkError::BadLevel { target: x.len().saturating_sub(1), n: x.len() });
    }
    let iv = link_intervals(p, x, tail)?;
    let total: f64 = iv.sets.iter().map(|s| s.len() as f64).product();
    if total > budget as f64 {
        return Err(LinkError::BudgetExceeded(budget));
    }
    let n = x.len() - 1;
    let ln_const =
        qpochhammer_finite(Complex64::new(p.q.value(), 0.0), n, p.q).re.ln() - ln_vandermonde(&x.values(p));
    let others: Vec<usize> = (0..n).filter(|&i| Some(i) != iv.infinite).collect();
    let sizes: Vec<usize> = others.iter().map(|&i| iv.sets[i].len()).collect();
    let mut y = vec![(LatticePoint::plus(0), 0.0); n];
    let mut tail_acc = CompensatedSum::new();
    for_each_index(&sizes, |idx| {
        for (slot, &i) in others.iter().enumerate() {
            y[i] = iv.sets[i][idx[slot]];
        }
        // factors not involving the infinite coordinate
        let mut base = ln_const;
        for (a, &i) in others.iter().enumerate() {
            base += y[i].1.abs().ln();
            for &j in &others[a + 1..] {
                base += (y[j].1 - y[i].1).abs().ln();
            }
        }
        match iv.infinite {
            None => visit(&y, base),
            Some(k) => {
                for &c in &iv.sets[k] {
                    y[k] = c;
                    let mut l = base + c.1.abs().ln();
                    for &j in &others {
                        l += (y[j].1 - c.1).abs().ln();
                    }
                    visit(&y, l);
                }
                let mut t = base + iv.eps_sum.ln();
                for &j in &others {
                    t += (y[j].1.abs() + iv.eps_max).ln();
                }
                tail_acc.add(Complex64::new(t.exp(), 0.0));
            }
        }
    });
    Ok(tail_acc.value().re)
}

pub fn link_row(p: &LatticeParams, x: &Configuration, tail: &TailSpec) -> Result<LinkRow, LinkError> {
    link_row_budget(p, x, tail, DEFAULT_BUDGET)
}

pub fn link_row_budget(p: &LatticeParams, x: &Configuration, tail: &TailSpec, budget: usize) -> Result<LinkRow, LinkError> {
    let mut entries = Vec::new();
    let tail_mass_bound = visit_link_row(p, x, tail, budget, |y, l| {
        let cfg = Configuration::new(y.iter().map(|e| e.0).collect()).expect("interlacing points increase");
        entries.push((cfg, l.exp()));
    })?;
    Ok(LinkRow { source: x.clone(), entries, tail_mass_bound, samples: None, std_errors: None })
}

/// Both sides of `Dim X = Σ_{Y≺X} |Y| Dim Y` and a bound on the truncated part.
pub fn dim_recurrence_check(p: &LatticeParams, x: &Configuration, tail: &TailSpec) -> Result<(f64, f64, f64), LinkError> {
    let lhs = dim(p, x);
    let n = x.len() - 1;
    let ln_qn = ln_qfactorial_product(p, n.saturating_sub(1));
    let mut acc = CompensatedSum::new();
    let row_tail = visit_link_row(p, x, tail, DEFAULT_BUDGET, |y, _| {
        let vals: Vec<f64> = y.iter().map(|e| e.1).collect();
        let wt: f64 = vals.iter().map(|v| v.abs()).product();
        acc.add(Complex64::new(wt * (ln_vandermonde(&vals) - ln_qn).exp(), 0.0));
    })?;
    Ok((lhs, acc.value().re, row_tail * lhs))
}

/// Both sides of `b^n - a^n = (1-q^n) Σ_{c∈I(a,b)} |c| c^{n-1}` and the
/// bound on the part of the sum omitted near zero.
pub fn geometric_summation_check(
    p: &LatticeParams,
    a: &LatticePoint,
    b: &LatticePoint,
    n: u32,
    tail: &TailSpec,
) -> Result<(f64, f64, f64), LinkError> {
    let iv = interval_i(p, a, b, tail)?;
    let (av, bv) = (a.value(p), b.value(p));
    let lhs = bv.powi(n as i32) - av.powi(n as i32);
    let s = sum_real(iv.points.iter().map(|c| {
        let v = c.value(p);
        v.abs() * v.powi(n as i32 - 1)
    }));
    let qn = 1.0 - p.q.value().powi(n as i32);
    let err = if iv.truncated_near_zero {
        let em = p.zeta_minus.abs() * p.q.pow(tail.inner_exponent(p, Branch::Minus) + 1);
        let ep = p.zeta_plus * p.q.pow(tail.inner_exponent(p, Branch::Plus) + 1);
        em.powi(n as i32) + ep.powi(n as i32)
    } else {
        0.0
    };
    Ok((lhs, qn * s, err))
}

#[derive(Clone, Copy, Debug)]
pub enum ComposeStrategy {
    /// Sum over intermediate configurations, dropping those with probability
    /// below `prune` (their mass is added to the tail bound).
    Exact { prune: f64 },
    MonteCarlo { paths: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct ComposeOptions {
    pub tail: TailSpec,
    pub budget: usize,
    pub gibbs: GibbsOptions,
}

impl ComposeOptions {
    pub fn default_for(p: &LatticeParams) -> Self {
        ComposeOptions { tail: TailSpec::default_for(p), budget: DEFAULT_BUDGET, gibbs: GibbsOptions::default_for(p) }
    }
}

/// Row of the composed link from level `N = |X|` down to level `k`.
pub fn link_compose(
    p: &LatticeParams,
    x: &Configuration,
    k: usize,
    strategy: ComposeStrategy,
    opts: &ComposeOptions,
) -> Result<LinkRow, LinkError> {
    let n = x.len();
    if k == 0 || k >= n {
        return Err(LinkError::BadLevel { target: k, n });
    }
    match strategy {
        ComposeStrategy::Exact { prune } => {
            let mut dist: BTreeMap<Configuration, f64> = BTreeMap::new();
            dist.insert(x.clone(), 1.0);
            let mut tail = 0.0;
            let mut work = 0usize;
            for _ in k..n {
                let layer: Vec<(Configuration, f64)> = std::mem::take(&mut dist).into_iter().collect();
                let rows: Vec<Result<(LinkRow, f64), LinkError>> = layer
                    .par_iter()
                    .map(|(z, pz)| link_row_budget(p, z, &opts.tail, opts.budget).map(|r| (r, *pz)))
                    .collect();
                for r in rows {
                    let (row, pz) = r?;
                    work += row.entries.len();
                    if work > opts.budget {
                        return Err(LinkError::BudgetExceeded(opts.budget));
                    }
                    tail += pz * row.tail_mass_bound;
                    for (y, py) in row.entries {
                        let m = pz * py;
                        if m < prune {
                            tail += m;
                        } else {
                            *dist.entry(y).or_default() += m;
                        }
                    }
                }
            }
            Ok(LinkRow { source: x.clone(), entries: dist.into_iter().collect(), tail_mass_bound: tail, samples: None, std_errors: None })
        }
        ComposeStrategy::MonteCarlo { paths, seed } => {
            let ends: Vec<Configuration> = (0..paths)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, i as u64);
                    let mut z = x.clone();
                    for _ in k..n {
                        z = link_sample(p, &z, &opts.gibbs, &mut rng);
                    }
                    z
                })
                .collect();
            let mut counts: BTreeMap<Configuration, usize> = BTreeMap::new();
            for z in ends {
                *counts.entry(z).or_default() += 1;
            }
            let nf = paths as f64;
            let entries: Vec<(Configuration, f64)> = counts.into_iter().map(|(c, m)| (c, m as f64 / nf)).collect();
            let se = entries.iter().map(|(_, pr)| (pr * (1.0 - pr) / nf).sqrt()).collect();
            Ok(LinkRow { source: x.clone(), entries, tail_mass_bound: 0.0, samples: Some(paths), std_errors: Some(se) })
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GibbsOptions {
    pub sweeps: usize,
    pub tail: TailSpec,
}

impl GibbsOptions {
    pub fn default_for(p: &LatticeParams) -> Self {
        let lo = p.zeta_plus.min(-p.zeta_minus);
        GibbsOptions { sweeps: 12, tail: TailSpec::with_cutoff(p, p.q.pow(40) * lo) }
    }
}

/// Index drawn with probability proportional to `exp(logw[i])`.
pub fn sample_log_weights<R: Rng + ?Sized>(logw: &[f64], rng: &mut R) -> usize {
    let mx = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - mx).exp()).collect();
    let total: f64 = w.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, wi) in w.iter().enumerate() {
        if u < *wi {
            return i;
        }
        u -= wi;
    }
    w.iter().rposition(|&v| v > 0.0).unwrap_or(0)
}

/// One draw from `Λ(X, ·)` by single-site Gibbs sweeps.
///
/// Given the other coordinates, `y_i` has law `∝ |y| ∏_{j≠i} |y_j - y|` on
/// its own interval, which is sampled exactly. The chain starts with each
/// `y_i` at the point of largest modulus in its interval.
pub fn link_sample<R: Rng + ?Sized>(p: &LatticeParams, x: &Configuration, opts: &GibbsOptions, rng: &mut R) -> Configuration {
    let iv = link_intervals(p, x, &opts.tail).expect("ordered configuration");
    let n = iv.sets.len();
    let mut cur: Vec<usize> = iv
        .sets
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .max_by(|a, b| a.1 .1.abs().partial_cmp(&b.1 .1.abs()).unwrap())
                .map(|e| e.0)
                .unwrap()
        })
        .collect();
    let mut logw = Vec::new();
    let movable: Vec<usize> = (0..n).filter(|&i| iv.sets[i].len() > 1).collect();
    for _ in 0..opts.sweeps {
        for &i in &movable {
            logw.clear();
            for c in &iv.sets[i] {
                let mut l = c.1.abs().ln();
                for j in 0..n {
                    if j != i {
                        l += (iv.sets[j][cur[j]].1 - c.1).abs().ln();
                    }
                }
                logw.push(l);
            }
            cur[i] = sample_log_weights(&logw, rng);
        }
    }
    Configuration::new((0..n).map(|i| iv.sets[i][cur[i]].0).collect()).expect("interlacing points increase")
}

/// Inverse-CDF sampler over the enumerated entries of a row.
pub struct RowSampler<'a> {
    row: &'a LinkRow,
    cdf: Vec<f64>,
}

impl<'a> RowSampler<'a> {
    pub fn new(row: &'a LinkRow) -> Self {
        let mut acc = 0.0;
        let cdf = row
            .entries
            .iter()
            .map(|e| {
                acc += e.1;
                acc
            })
            .collect();
        RowSampler { row, cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &'a Configuration {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        &self.row.entries[i].0
    }
}

/// Weakly decreasing integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature(Vec<i64>);

impl Signature {
    pub fn new(v: Vec<i64>) -> Result<Self, LinkError> {
        if v.windows(2).any(|w| w[0] < w[1]) {
            return Err(LinkError::BadSignature);
        }
        Ok(Signature(v))
    }

    /// Partition padded with zeros to length `n`.
    pub fn padded(parts: &[i64], n: usize) -> Result<Self, LinkError> {
        let mut v: Vec<i64> = parts.iter().cloned().filter(|&x| x != 0).collect();
        if v.len() > n || v.iter().any(|&x| x < 0) {
            return Err(LinkError::BadSignature);
        }
        v.resize(n, 0);
        Signature::new(v)
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// All partitions of size at most `max_size` with at most `max_len` parts.
pub fn partitions_up_to(max_size: i64, max_len: usize) -> Vec<Vec<i64>> {
    fn rec(rem: i64, max_part: i64, max_len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        for part in 1..=max_part.min(rem) {
            cur.push(part);
            rec(rem - part, part, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_size, max_size, max_len, &mut Vec::new(), &mut out);
    out
}

/// `det[x_j^{ν_i+N-i}] / ∏_{i<j}(x_i - x_j)` with an LU determinant.
pub fn schur_bialternant(nu: &Signature, xs: &[f64]) -> f64 {
    let n = xs.len();
    assert_eq!(n, nu.len());
    if n == 0 {
        return 1.0;
    }
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| xs[j].powi((nu.0[i] + (n - 1 - i) as i64) as i32));
    let mut den = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            den *= xs[i] - xs[j];
        }
    }
    m.determinant() / den
}

/// Schur polynomial through the branching rule
/// `S_ν(x_1..x_N) = Σ_{μ≺ν} x_N^{|ν|-|μ|} S_μ(x_1..x_{N-1})`.
pub fn schur_branching(nu: &Signature, xs: &[f64]) -> f64 {
    let n = xs.len();
    assert_eq!(n, nu.len());
    match n {
        0 => 1.0,
        1 => xs[0].powi(nu.0[0] as i32),
        _ => {
            let bounds: Vec<(i64, i64)> = (0..n - 1).map(|i| (nu.0[i + 1], nu.0[i])).collect();
            let sizes: Vec<usize> = bounds.iter().map(|(lo, hi)| (hi - lo + 1) as usize).collect();
            let total = nu.size();
            let mut acc = CompensatedSum::new();
            for_each_index(&sizes, |idx| {
                let mu: Vec<i64> = idx.iter().zip(&bounds).map(|(&k, (lo, _))| lo + k as i64).collect();
                let sm: i64 = mu.iter().sum();
                let v = xs[n - 1].powi((total - sm) as i32) * schur_branching(&Signature(mu), &xs[..n - 1]);
                acc.add(Complex64::new(v, 0.0));
            });
            acc.value().re
        }
    }
}

/// `S_ν(1, q, ..., q^{N-1})` by the product formula.
pub fn schur_q_specialization(nu: &Signature, q: f64) -> f64 {
    let n = nu.len();
    let mut v = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let li = nu.0[i] + (n - 1 - i) as i64;
            let lj = nu.0[j] + (n - 1 - j) as i64;
            v *= (q.powi(lj as i32) - q.powi(li as i32)) / (q.powi((n - 1 - j) as i32) - q.powi((n - 1 - i) as i32));
        }
    }
    v
}

/// `S_ν(1,...,1)` (Weyl dimension formula).
pub fn schur_at_ones(nu: &Signature) -> f64 {
    let n = nu.len();
    let mut v = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            v *= (nu.0[i] - nu.0[j] + (j - i) as i64) as f64 / (j - i) as f64;
        }
    }
    v
}

pub fn schur_eval(nu: &Signature, p: &LatticeParams, x: &Configuration) -> f64 {
    schur_bialternant(nu, &x.values(p))
}

/// `S_ν(X) / S_ν(1, q, ..., q^{N-1})`.
pub fn schur_tilde(nu: &Signature, p: &LatticeParams, x: &Configuration) -> f64 {
    schur_eval(nu, p, x) / schur_q_specialization(nu, p.q.value())
}

/// `Σ_Y Λ^N_K(X,Y) S̃_{ν|K}(Y)` against `S̃_{ν|N}(X)` for a partition `ν`.
pub fn branching_identity_check(
    p: &LatticeParams,
    x: &Configuration,
    k: usize,
    nu: &[i64],
    opts: &ComposeOptions,
    prune: f64,
) -> Result<(f64, f64, f64), LinkError> {
    let row = link_compose(p, x, k, ComposeStrategy::Exact { prune }, opts)?;
    let nu_k = Signature::padded(nu, k)?;
    let nu_n = Signature::padded(nu, x.len())?;
    let spec_k = schur_q_specialization(&nu_k, p.q.value());
    let lhs = sum_real(row.entries.iter().map(|(y, py)| py * schur_bialternant(&nu_k, &y.values(p)) / spec_k));
    let rhs = schur_tilde(&nu_n, p, x);
    let m = x.values(p).iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let err = row.tail_mass_bound * m.powi(nu_k.size() as i32) * schur_at_ones(&nu_k) / spec_k.abs();
    Ok((lhs, rhs, err))
}

/// `x ◁ y`: `x < y` when `y > 0`, `x <= y` when `y < 0`.
pub fn precedes(x: &LatticePoint, y: &LatticePoint) -> bool {
    if y.is_positive() {
        x < y
    } else {
        x <= y
    }
}

/// Determinant of `[A(x_i, y_j)]` with a final column of ones for `y = +∞`.
pub fn interlace_det(x: &Configuration, y: &Configuration) -> Result<i64, LatticeError> {
    if x.len() != y.len() + 1 {
        return Err(LatticeError::SizeMismatch(x.len(), y.len()));
    }
    let n = x.len();
    let mut a: Vec<Vec<i128>> = x
        .points()
        .iter()
        .map(|xi| {
            let mut row: Vec<i128> = y.points().iter().map(|yj| precedes(xi, yj) as i128).collect();
            row.push(1);
            row
        })
        .collect();
    Ok(bareiss_det(&mut a, n) as i64)
}

/// Fraction-free integer determinant.
fn bareiss_det(a: &mut [Vec<i128>], n: usize) -> i128 {
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint as P;

    fn cfg(v: &[P]) -> Configuration {
        Configuration::from_unsorted(v.to_vec()).unwrap()
    }

    #[test]
    fn weights_and_dims() {
        let p = LatticeParams::reference();
        let x = cfg(&[P::minus(0), P::plus(0)]);
        assert_eq!(weight_wt(&p, &x, &cfg(&[P::plus(0)])).unwrap(), 1.0);
        assert_eq!(weight_wt(&p, &x, &cfg(&[P::plus(1)])).unwrap(), 0.5);
        assert_eq!(weight_wt(&p, &cfg(&[P::plus(1), P::plus(0)]), &cfg(&[P::plus(1)])).unwrap(), 0.0);
        assert!((dim(&p, &cfg(&[P::plus(3)])) - 1.0).abs() < 1e-15);
        assert!((dim(&p, &cfg(&[P::plus(1), P::plus(0)])) - 1.0).abs() < 1e-15);
        assert!((dim(&p, &x) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn small_rows() {
        let p = LatticeParams::reference();
        let t = TailSpec::default_for(&p);
        let row = link_row(&p, &cfg(&[P::plus(1), P::plus(0)]), &t).unwrap();
        assert_eq!(row.entries.len(), 1);
        assert!((row.entries[0].1 - 1.0).abs() < 1e-15);
        let x = cfg(&[P::minus(0), P::plus(0)]);
        let row = link_row(&p, &x, &t).unwrap();
        assert!((row.mass() - 1.0).abs() <= row.tail_mass_bound + 1e-12);
        assert!(row.tail_mass_bound < 1e-15);
        for (y, pr) in &row.entries {
            let alt = weight_wt(&p, &x, y).unwrap() * dim(&p, y) / dim(&p, &x);
            assert!((pr - alt).abs() < 1e-14 * pr.max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn dim_recurrence_examples() {
        let p = LatticeParams::reference();
        let t = TailSpec::default_for(&p);
        let (l, r, _) = dim_recurrence_check(&p, &cfg(&[P::plus(1), P::plus(0)]), &t).unwrap();
        assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);
        let (l, r, e) = dim_recurrence_check(&p, &cfg(&[P::minus(0), P::plus(0)]), &t).unwrap();
        assert!((l - 4.0).abs() < 1e-14 && (l - r).abs() <= e + 1e-12);
    }

    #[test]
    fn geometric_examples() {
        let p = LatticeParams::reference();
        let t = TailSpec::default_for(&p);
        let (l, r, e) = geometric_summation_check(&p, &P::minus(0), &P::plus(0), 1, &t).unwrap();
        assert_eq!(l, 2.0);
        assert!((l - r).abs() <= e + 1e-14);
        let (l, r, _) = geometric_summation_check(&p, &P::plus(2), &P::plus(0), 1, &t).unwrap();
        assert!((l - 0.75).abs() < 1e-15 && (r - 0.75).abs() < 1e-15);
    }

    #[test]
    fn schur_examples() {
        let z = Signature::new(vec![0, 0]).unwrap();
        assert!((schur_bialternant(&z, &[0.5, 1.0]) - 1.0).abs() < 1e-15);
        let e1 = Signature::new(vec![1, 0]).unwrap();
        assert!((schur_bialternant(&e1, &[0.5, 1.0]) - 1.5).abs() < 1e-15);
        let nu = Signature::new(vec![3, 1, -2]).unwrap();
        let xs = [-1.0, 0.25, 2.0];
        assert!((schur_bialternant(&nu, &xs) - schur_branching(&nu, &xs)).abs() < 1e-12 * schur_branching(&nu, &xs).abs());
        let nu = Signature::new(vec![2, 1, 1, 0]).unwrap();
        let qs = [0.125, 0.25, 0.5, 1.0];
        assert!((schur_bialternant(&nu, &qs) - schur_q_specialization(&nu, 0.5)).abs() < 1e-13);
        assert_eq!(schur_at_ones(&Signature::new(vec![1, 0, 0]).unwrap()), 3.0);
        assert_eq!(partitions_up_to(2, 2), vec![vec![], vec![1], vec![1, 1], vec![2]]);
    }

    #[test]
    fn branching_small_example() {
        let p = LatticeParams::reference();
        let opts = ComposeOptions::default_for(&p);
        let (l, r, _) = branching_identity_check(&p, &cfg(&[P::plus(1), P::plus(0)]), 1, &[1], &opts, 0.0).unwrap();
        assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn determinant_examples() {
        let x = cfg(&[P::minus(0), P::plus(2), P::plus(0)]);
        assert_eq!(interlace_det(&x, &cfg(&[P::minus(1), P::plus(1)])).unwrap(), 1);
        // two points of X in the same gap
        assert_eq!(interlace_det(&x, &cfg(&[P::minus(1), P::minus(2)])).unwrap(), 0);
    }
}
