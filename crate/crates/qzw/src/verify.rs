//! The acceptance suite: fourteen numerical checks with fixed tolerances.
//!
//! Every check returns a [`CheckResult`] carrying the measured error next to
//! its tolerance; `passed` is decided here and never adjusted by callers.

use crate::boundary_approx::{lln_check, ApproxOptions, BoundaryPoint};
use crate::graph_links::{
    branching_identity_check, dim_recurrence_check, geometric_summation_check, link_row, partitions_up_to,
    ComposeOptions,
};
use crate::lattice::{random_configuration, Configuration, LatticeParams, LatticePoint, SumOptions, TailSpec};
use crate::limit_kernel::{h_frak, phi32_limit_check, BoundaryKernel, FiniteN};
use crate::pbqj::PbqjParams;
use crate::stream_rng;
use crate::zw_measures::{DppSampler, EnsembleN, ParamQuadruple};
use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: String,
    pub tolerance: f64,
    pub measured: f64,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<22} measured {:.3e} tol {:.1e} ({:.1}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.tolerance,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub lattice: LatticeParams,
    pub quadruple: ParamQuadruple,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { lattice: LatticeParams::reference(), quadruple: ParamQuadruple::reference(), seed: 2024 }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn finish(id: usize, name: &str, tolerance: f64, measured: f64, passed: bool, t: Instant, detail: String) -> CheckResult {
    CheckResult {
        id,
        name: name.to_string(),
        tolerance,
        measured,
        passed,
        seconds: t.elapsed().as_secs_f64(),
        detail,
    }
}

fn failed(id: usize, name: &str, tolerance: f64, t: Instant, err: impl std::fmt::Display) -> CheckResult {
    finish(id, name, tolerance, f64::NAN, false, t, format!("error: {err}"))
}

/// Generic nondegenerate parameters with at least four orthogonal polynomials.
pub fn sample_pbqj(lat: LatticeParams) -> PbqjParams {
    let cc = c(3.0, 1.0) * lat.q.pow(-3);
    PbqjParams::new(c(1.0, 0.5), c(1.0, -0.5), cc, cc.conj(), lat).expect("admissible sample")
}

/// Ten lattice points spread over both branches.
pub fn probe_points() -> Vec<LatticePoint> {
    vec![
        LatticePoint::plus(-2),
        LatticePoint::plus(0),
        LatticePoint::plus(1),
        LatticePoint::plus(3),
        LatticePoint::plus(6),
        LatticePoint::minus(-2),
        LatticePoint::minus(0),
        LatticePoint::minus(1),
        LatticePoint::minus(3),
        LatticePoint::minus(6),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Row mass of `Λ(X, ·)` within `1e-10` of `[1 - tail, 1]`.
pub fn link_stochasticity(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (1, "link_stochasticity", 1e-10);
    let t = Instant::now();
    let lat = cfg.lattice;
    let tail = TailSpec::default_for(&lat);
    let mut rng = stream_rng(cfg.seed, 1);
    let mut worst = 0.0f64;
    let mut max_tail = 0.0f64;
    for n in 2..=6 {
        for _ in 0..50 {
            let x = random_configuration(n, -3, 4, &mut rng);
            let row = match link_row(&lat, &x, &tail) {
                Ok(r) => r,
                Err(e) => return failed(id, name, tol, t, e),
            };
            let m = row.mass();
            let excess = (m - 1.0).max(1.0 - row.tail_mass_bound - m).max(0.0);
            worst = worst.max(excess);
            max_tail = max_tail.max(row.tail_mass_bound);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    finish(id, name, tol, worst, worst <= tol && secs < 60.0, t, format!("250 rows, max tail bound {max_tail:.1e}, limit 60s"))
}

/// `Dim X = Σ |Y| Dim Y`.
pub fn dimension_recurrence(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (2, "dimension_recurrence", 1e-10);
    let t = Instant::now();
    let lat = cfg.lattice;
    let tail = TailSpec::default_for(&lat);
    let mut rng = stream_rng(cfg.seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(2..=5);
        let x = random_configuration(n, -3, 4, &mut rng);
        match dim_recurrence_check(&lat, &x, &tail) {
            Ok((lhs, rhs, _)) => worst = worst.max(rel(rhs, lhs)),
            Err(e) => return failed(id, name, tol, t, e),
        }
    }
    finish(id, name, tol, worst, worst < tol, t, "50 configurations, N in 2..=5".into())
}

/// `b^n - a^n = (1 - q^n) Σ_{c ∈ I(a,b)} |c| c^{n-1}`, error relative to
/// `max(|a|^n, |b|^n)`.
pub fn geometric_summation(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (3, "geometric_summation", 1e-12);
    let t = Instant::now();
    let lat = cfg.lattice;
    let tail = TailSpec::default_for(&lat);
    let mut rng = stream_rng(cfg.seed, 3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x = random_configuration(2, -6, 6, &mut rng);
        let (a, b) = (x.points()[0], x.points()[1]);
        let n = rng.random_range(1..=6u32);
        match geometric_summation_check(&lat, &a, &b, n, &tail) {
            Ok((lhs, rhs, _)) => {
                let scale = a.abs_value(&lat).powi(n as i32).max(b.abs_value(&lat).powi(n as i32));
                worst = worst.max((lhs - rhs).abs() / scale);
            }
            Err(e) => return failed(id, name, tol, t, e),
        }
    }
    finish(id, name, tol, worst, worst < tol, t, "200 random (a, b, n)".into())
}

/// `Σ_Y Λ^N_K(X,Y) S̃_ν(Y) = S̃_ν(X)` for `|ν| <= 4`, `N <= 4`, `K < N`.
pub fn schur_branching(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (4, "schur_branching", 1e-9);
    let t = Instant::now();
    let lat = cfg.lattice;
    let opts = ComposeOptions { tail: TailSpec::with_cutoff(&lat, lat.q.pow(48)), ..ComposeOptions::default_for(&lat) };
    let mut rng = stream_rng(cfg.seed, 4);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 2..=4 {
        let x = random_configuration(n, -2, 3, &mut rng);
        for k in 1..n {
            for nu in partitions_up_to(4, k) {
                match branching_identity_check(&lat, &x, k, &nu, &opts, 0.0) {
                    Ok((lhs, rhs, _)) => {
                        worst = worst.max(rel(lhs, rhs));
                        cases += 1;
                    }
                    Err(e) => return failed(id, name, tol, t, e),
                }
            }
        }
    }
    finish(id, name, tol, worst, worst < tol, t, format!("{cases} (N, K, ν) cases"))
}

/// Gram matrix of `P_0..P_3` against `diag(h_n)`.
pub fn pbqj_orthogonality(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (5, "pbqj_orthogonality", 1e-8);
    let t = Instant::now();
    let p = sample_pbqj(cfg.lattice);
    let opts = SumOptions::default();
    let h: Vec<Complex64> = match (0..4).map(|n| p.norm_h(n)).collect::<Result<_, _>>() {
        Ok(h) => h,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let (mut off, mut diag) = (0.0f64, 0.0f64);
    for m in 0..4 {
        for n in m..4 {
            let g = match p.orthogonality_check(m, n, &opts) {
                Ok(s) => s.value,
                Err(e) => return failed(id, name, tol, t, e),
            };
            if m == n {
                diag = diag.max((g - h[n]).norm() / h[n].norm());
            } else {
                off = off.max(g.norm() / (h[m].norm() * h[n].norm()).sqrt());
            }
        }
    }
    let worst = off.max(diag);
    finish(id, name, tol, worst, worst < tol, t, format!("off-diagonal {off:.1e}, diagonal {diag:.1e}"))
}

/// Closed form of `h_0` against the direct lattice sum.
pub fn h0_closed_form(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (6, "h0_closed_form", 1e-10);
    let t = Instant::now();
    let lat = cfg.lattice;
    let qd = cfg.quadruple;
    let sets = [
        ("sample", PbqjParams::new(c(1.0, 0.5), c(1.0, -0.5), c(3.0, 1.0) * lat.q.pow(-3), c(3.0, -1.0) * lat.q.pow(-3), lat)),
        ("quadruple", PbqjParams::new(qd.alpha, qd.beta, qd.gamma, qd.delta, lat)),
        ("degenerate", PbqjParams::new(c(-1.0, 0.0), c(0.5, 0.0), c(8.0, 8.0), c(8.0, -8.0), lat)),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (label, p) in sets {
        let p = match p {
            Ok(p) => p,
            Err(e) => return failed(id, name, tol, t, e),
        };
        let direct = p.h0_direct(&SumOptions::default()).value;
        let e = (direct - p.h0()).norm() / p.h0().norm();
        parts.push(format!("{label} {e:.1e}"));
        worst = worst.max(e);
    }
    finish(id, name, tol, worst, worst < tol, t, parts.join(", "))
}

/// Backward shift relation at 20 points for `n = 0, 1, 2`.
pub fn backward_shift(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (7, "backward_shift", 1e-9);
    let t = Instant::now();
    let p = sample_pbqj(cfg.lattice);
    let opts = SumOptions::default();
    let mut worst = 0.0f64;
    for n in 0..3 {
        for m in -5..5 {
            for y in [LatticePoint::plus(m), LatticePoint::minus(m)] {
                match p.backward_shift_check(n, &y, &opts) {
                    Ok((lhs, rhs, _)) => worst = worst.max((lhs - rhs).norm() / rhs.norm()),
                    Err(e) => return failed(id, name, tol, t, e),
                }
            }
        }
    }
    // the positive-y branch of the check relies on Σ_x w* P*_{n+1} = 0
    let total = (0..3)
        .map(|n| {
            let (s, abs) = p.shifted_total(n, &opts);
            s.norm() / abs
        })
        .fold(0.0, f64::max);
    finish(
        id,
        name,
        tol,
        worst,
        worst < tol && total < 1e-12,
        t,
        format!("20 points × n ∈ {{0,1,2}}, full-line sum / Σ|terms| {total:.1e}"),
    )
}

/// `M_{N+1} Λ = M_N` at 10 random `Y` for `N = 1, 2, 3`.
pub fn coherency(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (8, "coherency", 1e-6);
    let t = Instant::now();
    let lat = cfg.lattice;
    let tail = TailSpec { cutoff: lat.q.pow(45), cap: lat.q.pow(-14) };
    let mut rng = stream_rng(cfg.seed, 8);
    let mut worst = 0.0f64;
    let mut max_tail = 0.0f64;
    let ens: Vec<EnsembleN> = match (1..=4).map(|n| EnsembleN::new(cfg.quadruple, lat, n)).collect::<Result<_, _>>() {
        Ok(e) => e,
        Err(e) => return failed(id, name, tol, t, e),
    };
    for n in 1..=3 {
        for _ in 0..10 {
            let y = random_configuration(n, -2, 4, &mut rng);
            match ens[n].coherency_check(&ens[n - 1], &y, &tail) {
                Ok((lhs, rhs, tl)) => {
                    worst = worst.max(rel(lhs, rhs));
                    max_tail = max_tail.max(tl / rhs);
                }
                Err(e) => return failed(id, name, tol, t, e),
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    finish(id, name, tol, worst, worst < tol && secs < 300.0, t, format!("max relative tail estimate {max_tail:.1e}, limit 300s"))
}

/// Large-n form of the terminating 3φ2.
pub fn phi32_asymptotics(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (9, "phi32_asymptotics", 1e-3);
    let t = Instant::now();
    let ns = [5, 10, 15, 20, 25];
    let rows = match phi32_limit_check(&ns, c(1.3, 0.4), c(0.7, -0.2), c(2.5, 0.5), c(1.7, -0.3), cfg.lattice.q) {
        Ok(r) => r,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let errs: Vec<f64> = rows.iter().map(|r| (r.ratio - 1.0).norm()).collect();
    let geometric = errs.windows(2).all(|w| w[1] < 0.5 * w[0]);
    let last = *errs.last().unwrap();
    finish(id, name, tol, last, last < tol && geometric, t, format!("|ratio-1| over n=5..25: {}", fmt_list(&errs)))
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(" ")
}

/// Errors over the schedule decrease, allowing 10% slack per step.
fn decreasing(errs: &[f64]) -> bool {
    errs.windows(2).all(|w| w[1] <= 1.1 * w[0])
}

const SCHEDULE: [usize; 5] = [10, 15, 20, 25, 30];

/// Scaled `√w P_{N-r} / k_{N-r}` against `F_r`.
pub fn polynomial_limit(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (10, "polynomial_limit", 1e-3);
    let t = Instant::now();
    let bk = match BoundaryKernel::new(cfg.quadruple, cfg.lattice) {
        Ok(b) => b,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let pts = probe_points();
    let mut errs = Vec::new();
    for n in SCHEDULE {
        let fin = match FiniteN::new(cfg.quadruple, cfg.lattice, n) {
            Ok(f) => f,
            Err(e) => return failed(id, name, tol, t, e),
        };
        let mut worst = 0.0f64;
        for x in &pts {
            for r in 0..2 {
                match (fin.g(r, x), bk.f(r as i32, x)) {
                    (Ok(g), Ok(f)) => worst = worst.max((g - f).abs()),
                    (Err(e), _) | (_, Err(e)) => return failed(id, name, tol, t, e),
                }
            }
        }
        errs.push(worst);
    }
    let last = *errs.last().unwrap();
    finish(id, name, tol, last, last < tol && decreasing(&errs), t, format!("max |G-F| over N=10..30: {}", fmt_list(&errs)))
}

/// Scaled `h_{N-r} / k_{N-r}²` against `𝔥_r`.
pub fn norm_limit(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (11, "norm_limit", 1e-3);
    let t = Instant::now();
    let mut errs = Vec::new();
    for n in SCHEDULE {
        let fin = match FiniteN::new(cfg.quadruple, cfg.lattice, n) {
            Ok(f) => f,
            Err(e) => return failed(id, name, tol, t, e),
        };
        let worst = (0..2).map(|r| rel(fin.h(r), h_frak(r as i32, &cfg.quadruple, &cfg.lattice))).fold(0.0, f64::max);
        errs.push(worst);
    }
    let last = *errs.last().unwrap();
    finish(id, name, tol, last, last < tol && decreasing(&errs), t, format!("max relative error over N=10..30: {}", fmt_list(&errs)))
}

/// Kernel limit on same-sign pairs, minors of `K` in `[0, 1]`, and the
/// one-point function against the N = 30 ensemble.
pub fn kernel_limit(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (12, "kernel_limit", 1e-3);
    let t = Instant::now();
    let bk = match BoundaryKernel::new(cfg.quadruple, cfg.lattice) {
        Ok(b) => b,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let ens = match EnsembleN::new(cfg.quadruple, cfg.lattice, 30) {
        Ok(e) => e,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let pts = probe_points();
    let (mut pair_err, mut rho1_err) = (0.0f64, 0.0f64);
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i..] {
            if x.sign() != y.sign() {
                continue;
            }
            let (kn, k) = match (ens.kernel(x, y), bk.eval(x, y)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) => return failed(id, name, tol, t, e),
                (_, Err(e)) => return failed(id, name, tol, t, e),
            };
            pair_err = pair_err.max((kn - k).abs());
            if x == y {
                rho1_err = rho1_err.max((kn - k).abs());
            }
        }
    }
    // minors on a window of 24 points
    let window: Vec<LatticePoint> =
        (-3..9).flat_map(|m| [LatticePoint::plus(m), LatticePoint::minus(m)]).collect();
    let km = match bk.matrix(&window) {
        Ok(m) => m,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let mut rng = stream_rng(cfg.seed, 12);
    let idx: Vec<usize> = (0..window.len()).collect();
    let mut outside = 0.0f64;
    for _ in 0..200 {
        let size = rng.random_range(1..=4);
        let pick: Vec<usize> = idx.choose_multiple(&mut rng, size).copied().collect();
        let d = km.select_rows(&pick).select_columns(&pick).determinant();
        outside = outside.max((-d).max(d - 1.0).max(0.0));
    }
    let minors_ok = outside <= 1e-8;
    let worst = pair_err.max(rho1_err);
    finish(
        id,
        name,
        tol,
        worst,
        worst < tol && minors_ok,
        t,
        format!("same-sign pairs {pair_err:.1e}, one-point {rho1_err:.1e}, minors outside [0,1] by {outside:.1e}"),
    )
}

/// DPP sampler against the enumerated law of the N = 2 ensemble.
pub fn dpp_sampler(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (13, "dpp_sampler", 0.02);
    let t = Instant::now();
    let ens = match EnsembleN::new(cfg.quadruple, cfg.lattice, 2) {
        Ok(e) => e,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let sampler = match DppSampler::new(&ens, 1e-12, 1e-6) {
        Ok(s) => s,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let w = sampler.window().to_vec();
    let mut law: BTreeMap<Configuration, f64> = BTreeMap::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let x = Configuration::new(vec![w[i], w[j]]).unwrap();
            match ens.measure_weight(&x) {
                Ok(m) => {
                    law.insert(x, m);
                }
                Err(e) => return failed(id, name, tol, t, e),
            }
        }
    }
    let draws = 100_000;
    let mut rng = stream_rng(cfg.seed, 13);
    let mut counts: BTreeMap<Configuration, usize> = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(sampler.sample(&mut rng)).or_default() += 1;
    }
    let mass: f64 = law.values().sum();
    let mut tv = 1.0 - mass;
    for (x, p) in &law {
        tv += (counts.get(x).copied().unwrap_or(0) as f64 / draws as f64 - p).abs();
    }
    tv /= 2.0;
    let secs = t.elapsed().as_secs_f64();
    finish(id, name, tol, tv, tv < tol && secs < 120.0, t, format!("{draws} draws, window {} points, limit 120s", w.len()))
}

/// `P[y_(1) = x_(1)]` under `Λ^P_L(X(P), ·)` for growing `L`.
pub fn lln_trend(cfg: &VerifyConfig) -> CheckResult {
    let (id, name, tol) = (14, "lln_trend", 0.99);
    let t = Instant::now();
    let bp = BoundaryPoint::sparse_positive(cfg.lattice, 16);
    let opts = ApproxOptions::default_for(&cfg.lattice);
    let rows = match lln_check(&bp, 1, &[1, 2, 4, 8, 12], 4000, cfg.seed, &opts) {
        Ok(r) => r,
        Err(e) => return failed(id, name, tol, t, e),
    };
    let monotone = rows
        .windows(2)
        .all(|w| w[1].estimate >= w[0].estimate - 2.0 * (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt());
    let last = rows.last().unwrap().estimate;
    let detail = rows.iter().map(|r| format!("L={} {:.4}±{:.4}", r.level, r.estimate, r.std_error)).collect::<Vec<_>>().join(", ");
    finish(id, name, tol, last, last > tol && monotone, t, detail)
}

pub type Check = fn(&VerifyConfig) -> CheckResult;

pub const CHECKS: [Check; 14] = [
    link_stochasticity,
    dimension_recurrence,
    geometric_summation,
    schur_branching,
    pbqj_orthogonality,
    h0_closed_form,
    backward_shift,
    coherency,
    phi32_asymptotics,
    polynomial_limit,
    norm_limit,
    kernel_limit,
    dpp_sampler,
    lln_trend,
];

pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckResult> {
    CHECKS.iter().map(|f| f(cfg)).collect()
}
