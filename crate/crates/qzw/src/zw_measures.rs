//! N-particle q-zw measures
//!
//! ```text
//! M_N(X) = Z_N^{-1} ∏ w_N(x_i) ∏_{i<j} (x_j - x_i)²,
//! w_N(x) = |x| (αx, βx; q)_∞ / (γq^{1-N}x, δq^{1-N}x; q)_∞,
//! ```
//!
//! an orthogonal polynomial ensemble for the pseudo big q-Jacobi weight with
//! parameters `(α, β, γq^{1-N}, δq^{1-N})`.

use crate::graph_links::{link_entry, ln_vandermonde, sample_log_weights};
use crate::lattice::{
    interval_i_tilde, Branch, Configuration, Endpoint, LatticeError, LatticeParams, LatticePoint, TailSpec,
};
use crate::pbqj::{lattice_point_at, pair_kind, PairKind, PbqjError, PbqjParams};
use crate::qspecial::CompensatedSum;
use crate::scaled::Scaled;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZwError {
    #[error("parameters are not admissible and nondegenerate: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Pbqj(#[from] PbqjError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("points must be distinct")]
    DuplicatePoints,
    #[error("window carries kernel trace {trace}, short of N = {n} by more than {tol}")]
    WindowTooSmall { trace: f64, n: usize, tol: f64 },
    #[error("enumeration budget of {0} configurations exceeded")]
    BudgetExceeded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadrupleClass {
    Nondegenerate,
    DegenerateExA,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamQuadruple {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub class: QuadrupleClass,
    /// `αβ < q²γδ`: the boundary kernel formula applies.
    pub kernel_regime: bool,
}

impl ParamQuadruple {
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
        lattice: &LatticeParams,
    ) -> Result<Self, ZwError> {
        let q = lattice.q.value();
        if pair_kind(gamma, delta, lattice) == PairKind::Other {
            return Err(ZwError::InvalidParams(format!("(γ,δ) = ({gamma}, {delta}) is neither a conjugate pair nor in a lattice gap")));
        }
        let ab = alpha * beta;
        let cd = gamma * delta;
        let class = match pair_kind(alpha, beta, lattice) {
            PairKind::Other => {
                let real = |z: Complex64| z.im.abs() <= 1e-12 * z.norm();
                let (lo, hi) = if alpha.re < beta.re { (alpha, beta) } else { (beta, alpha) };
                let ex_a = real(lo)
                    && real(hi)
                    && lo.re < 0.0
                    && hi.re > 0.0
                    && lattice_point_at(lattice, 1.0 / lo.re).is_some()
                    && lattice_point_at(lattice, 1.0 / hi.re).is_some()
                    && pair_kind(gamma, delta, lattice) == PairKind::ConjugateNonreal;
                if !ex_a {
                    return Err(ZwError::InvalidParams(format!("(α,β) = ({alpha}, {beta}) fails the positivity lemma")));
                }
                QuadrupleClass::DegenerateExA
            }
            _ => {
                if !(cd.re * q > ab.re) {
                    return Err(ZwError::InvalidParams(format!("need γδq > αβ, got γδq = {} and αβ = {}", cd.re * q, ab.re)));
                }
                QuadrupleClass::Nondegenerate
            }
        };
        Ok(ParamQuadruple { alpha, beta, gamma, delta, class, kernel_regime: ab.re < q * q * cd.re })
    }

    /// α = 1+i, β = 1−i, γ = 8(1+i), δ = 8(1−i) on the reference lattice.
    pub fn reference() -> Self {
        let c = Complex64::new;
        ParamQuadruple::new(c(1.0, 1.0), c(1.0, -1.0), c(8.0, 8.0), c(8.0, -8.0), &LatticeParams::reference()).unwrap()
    }
}

/// The level-N measure together with its polynomial system.
#[derive(Clone, Debug)]
pub struct EnsembleN {
    pub params: ParamQuadruple,
    pub lattice: LatticeParams,
    pub n: usize,
    pub poly: PbqjParams,
    /// `h_j / k_j²` for `j = 0..=N` (the last is used by the CD form only).
    monic_norms: Vec<Scaled>,
    ln_z: f64,
}

impl EnsembleN {
    pub fn new(params: ParamQuadruple, lattice: LatticeParams, n: usize) -> Result<Self, ZwError> {
        assert!(n >= 1);
        let s = lattice.q.pow(1 - n as i64);
        let poly = PbqjParams::new(params.alpha, params.beta, params.gamma * s, params.delta * s, lattice)?;
        if let Some(m) = poly.n_max {
            if m + 1 < n {
                return Err(ZwError::InvalidParams(format!("only {} orthogonal polynomials exist at level {n}", m + 1)));
            }
        }
        let h0 = poly.h0_scaled();
        let monic_norms: Vec<Scaled> = (0..=n)
            .map(|j| {
                let k = poly.leading_coeff_scaled(j);
                let v = h0 * poly.norm_ratio_scaled(j) / (k * k);
                Scaled::new(Complex64::new(v.mantissa().re, 0.0), v.log_scale())
            })
            .collect();
        let ln_z = monic_norms[..n].iter().map(|s| s.ln_abs()).sum();
        Ok(EnsembleN { params, lattice, n, poly, monic_norms, ln_z })
    }

    pub fn ln_normalization(&self) -> f64 {
        self.ln_z
    }

    pub fn monic_norm(&self, j: usize) -> Scaled {
        self.monic_norms[j]
    }

    pub fn weight_scaled(&self, x: &LatticePoint) -> Result<Scaled, ZwError> {
        Ok(self.poly.weight_scaled(x)?)
    }

    pub fn measure_weight(&self, x: &Configuration) -> Result<f64, ZwError> {
        if x.len() != self.n {
            return Err(ZwError::InvalidParams(format!("configuration has {} points, level is {}", x.len(), self.n)));
        }
        let mut l = 2.0 * ln_vandermonde(&x.values(&self.lattice)) - self.ln_z;
        for p in x.points() {
            let w = self.weight_scaled(p)?;
            if w.is_zero() {
                return Ok(0.0);
            }
            l += w.ln_abs();
        }
        Ok(l.exp())
    }

    /// Orthonormal functions `φ_j(x) = √(w_N(x) / (h_j/k_j²)) p_j(x)` for
    /// `j = 0..=top` (`p_j` monic).
    pub fn phi_values(&self, x: &LatticePoint, top: usize) -> Result<Vec<f64>, ZwError> {
        let w = self.weight_scaled(x)?;
        if w.is_zero() {
            return Ok(vec![0.0; top + 1]);
        }
        let xv = Complex64::new(x.value(&self.lattice), 0.0);
        (0..=top)
            .map(|j| {
                let p = self.poly.monic_eval_scaled(j, xv)?;
                Ok((p * (w / self.monic_norms[j]).sqrt()).to_complex().re)
            })
            .collect()
    }

    /// `K_N(x,y) = Σ_{j<N} φ_j(x) φ_j(y)`.
    pub fn kernel_sum(&self, x: &LatticePoint, y: &LatticePoint) -> Result<f64, ZwError> {
        let fx = self.phi_values(x, self.n - 1)?;
        let fy = if x == y { fx.clone() } else { self.phi_values(y, self.n - 1)? };
        Ok(fx.iter().zip(&fy).map(|(a, b)| a * b).sum())
    }

    /// Christoffel-Darboux form; the diagonal falls back to the sum form.
    pub fn kernel(&self, x: &LatticePoint, y: &LatticePoint) -> Result<f64, ZwError> {
        if x == y {
            return self.kernel_sum(x, y);
        }
        let n = self.n;
        let (wx, wy) = (self.weight_scaled(x)?, self.weight_scaled(y)?);
        if wx.is_zero() || wy.is_zero() {
            return Ok(0.0);
        }
        let (xv, yv) = (x.value(&self.lattice), y.value(&self.lattice));
        let cx = Complex64::new(xv, 0.0);
        let cy = Complex64::new(yv, 0.0);
        let pnx = self.poly.monic_eval_scaled(n, cx)?;
        let pmx = self.poly.monic_eval_scaled(n - 1, cx)?;
        let pny = self.poly.monic_eval_scaled(n, cy)?;
        let pmy = self.poly.monic_eval_scaled(n - 1, cy)?;
        let pre = (wx * wy).sqrt() / self.monic_norms[n - 1];
        let num = (pre * pnx * pmy).add(&-(pre * pmx * pny));
        Ok(num.to_complex().re / (xv - yv))
    }

    /// Kernel matrix on `points` (sum form, assembled from φ vectors).
    pub fn kernel_matrix(&self, points: &[LatticePoint]) -> Result<DMatrix<f64>, ZwError> {
        let phis: Vec<Vec<f64>> = points
            .par_iter()
            .map(|x| self.phi_values(x, self.n - 1))
            .collect::<Result<_, _>>()?;
        let m = points.len();
        Ok(DMatrix::from_fn(m, m, |i, j| phis[i].iter().zip(&phis[j]).map(|(a, b)| a * b).sum()))
    }

    /// `ρ(x_1..x_n) = det[K_N(x_i, x_j)]`.
    pub fn correlation(&self, points: &[LatticePoint]) -> Result<f64, ZwError> {
        check_distinct(points)?;
        Ok(clamp_probability(self.kernel_matrix(points)?.determinant(), 1e-10))
    }

    /// Window of lattice points outside of which the one-point intensity
    /// `K_N(x,x)` is negligible. Each ray is walked until `patience`
    /// consecutive intensities fall below `point_tol`.
    pub fn window(&self, point_tol: f64) -> Result<Vec<LatticePoint>, ZwError> {
        let mut pts = Vec::new();
        for b in [Branch::Minus, Branch::Plus] {
            for (start, step) in [(-1i64, -1i64), (0, 1)] {
                let mut m = start;
                let mut quiet = 0;
                for _ in 0..400 {
                    let x = LatticePoint { branch: b, m };
                    let k = self.kernel_sum(&x, &x)?;
                    pts.push(x);
                    if k < point_tol {
                        quiet += 1;
                        if quiet >= 3 {
                            break;
                        }
                    } else {
                        quiet = 0;
                    }
                    m += step;
                }
            }
        }
        pts.sort();
        Ok(pts)
    }

    /// Both sides of `Σ_{X≻Y} M_{N+1}(X) Λ(X,Y) = M_N(Y)` where `self` is the
    /// level-(N+1) ensemble and `lower` the level-N one. Returns
    /// `(lhs, rhs, tail_estimate)`; the tail estimate is the change of the
    /// sum when the window is widened by `widen` lattice steps on each
    /// truncated side.
    pub fn coherency_check(&self, lower: &EnsembleN, y: &Configuration, tail: &TailSpec) -> Result<(f64, f64, f64), ZwError> {
        assert_eq!(lower.n + 1, self.n);
        assert_eq!(y.len(), lower.n);
        let lat = &self.lattice;
        let q = lat.q;
        let widen = 6;
        let coarse = TailSpec { cutoff: tail.cutoff * q.pow(-widen), cap: tail.cap * q.pow(widen) };
        let mut ends = vec![Endpoint::NegInf];
        ends.extend(y.points().iter().map(|p| Endpoint::Point(*p)));
        ends.push(Endpoint::PosInf);
        let sets: Vec<Vec<LatticePoint>> = ends
            .windows(2)
            .map(|w| interval_i_tilde(lat, &w[0], &w[1], tail).map(|r| r.points))
            .collect::<Result<_, _>>()?;
        let in_coarse = |p: &LatticePoint| {
            let a = p.abs_value(lat);
            a >= coarse.cutoff && a <= coarse.cap
        };
        let total: f64 = sets.iter().map(|s| s.len() as f64).product();
        if total > 5e7 {
            return Err(ZwError::BudgetExceeded(5e7 as usize));
        }
        let weights: Vec<Vec<f64>> = sets
            .iter()
            .map(|s| s.iter().map(|p| self.weight_scaled(p).map(|w| w.ln_abs())).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        // split the first coordinate across threads
        let first = sets[0].len();
        let parts: Vec<(f64, f64)> = (0..first)
            .into_par_iter()
            .map(|i0| {
                let mut fine = CompensatedSum::new();
                let mut crs = CompensatedSum::new();
                let rest: Vec<usize> = sets[1..].iter().map(|s| s.len()).collect();
                let mut idx = vec![0usize; rest.len()];
                let mut pts = vec![sets[0][i0]; sets.len()];
                'outer: loop {
                    let mut lw = weights[0][i0];
                    for (k, &i) in idx.iter().enumerate() {
                        pts[k + 1] = sets[k + 1][i];
                        lw += weights[k + 1][i];
                    }
                    if lw.is_finite() {
                        let x = Configuration::new(pts.clone()).expect("one point per gap");
                        let vals = x.values(lat);
                        let m = (lw + 2.0 * ln_vandermonde(&vals) - self.ln_z).exp();
                        let v = m * link_entry(lat, &x, y).unwrap_or(0.0);
                        fine.add(Complex64::new(v, 0.0));
                        if pts.iter().all(in_coarse) {
                            crs.add(Complex64::new(v, 0.0));
                        }
                    }
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            break 'outer;
                        }
                        idx[k] += 1;
                        if idx[k] < rest[k] {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
                (fine.value().re, crs.value().re)
            })
            .collect();
        let lhs: f64 = crate::qspecial::sum_real(parts.iter().map(|p| p.0));
        let lhs_coarse: f64 = crate::qspecial::sum_real(parts.iter().map(|p| p.1));
        let rhs = lower.measure_weight(y)?;
        Ok((lhs, rhs, (lhs - lhs_coarse).abs()))
    }
}

fn check_distinct(points: &[LatticePoint]) -> Result<(), ZwError> {
    let mut v = points.to_vec();
    v.sort();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(ZwError::DuplicatePoints);
    }
    Ok(())
}

/// Clamps a determinant that should be a probability, warning when it is
/// outside `[-slack, 1 + slack]`.
pub fn clamp_probability(v: f64, slack: f64) -> f64 {
    if !(-slack..=1.0 + slack).contains(&v) {
        log::warn!("correlation {v} outside [0,1] beyond slack {slack}");
    }
    v.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMethod {
    Dpp,
    Gibbs { sweeps: usize },
}

/// Projection-DPP sampler on a fixed window.
pub struct DppSampler {
    points: Vec<LatticePoint>,
    /// Orthonormal basis of the range, one row per window point.
    basis: Vec<Vec<f64>>,
    n: usize,
}

impl DppSampler {
    pub fn new(ens: &EnsembleN, point_tol: f64, trace_tol: f64) -> Result<Self, ZwError> {
        let points = ens.window(point_tol)?;
        let k = ens.kernel_matrix(&points)?;
        let trace = k.trace();
        if trace < ens.n as f64 - trace_tol {
            return Err(ZwError::WindowTooSmall { trace, n: ens.n, tol: trace_tol });
        }
        let eig = SymmetricEigen::new(k);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        let cols = &order[..ens.n];
        let basis = (0..points.len()).map(|i| cols.iter().map(|&c| eig.eigenvectors[(i, c)]).collect()).collect();
        Ok(DppSampler { points, basis, n: ens.n })
    }

    pub fn window(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Chain-rule sampling: draw a point with probability `|row|²/k`, then
    /// restrict the basis to vectors vanishing there.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let mut v: Vec<Vec<f64>> = self.basis.clone();
        let mut cols = self.n;
        let mut chosen = Vec::with_capacity(self.n);
        while cols > 0 {
            let norms: Vec<f64> = v.iter().map(|r| r[..cols].iter().map(|x| x * x).sum::<f64>()).collect();
            let logw: Vec<f64> = norms.iter().map(|&s| if s > 0.0 { s.ln() } else { f64::NEG_INFINITY }).collect();
            let i = sample_log_weights(&logw, rng);
            chosen.push(self.points[i]);
            // pivot column with the largest entry in row i
            let j = (0..cols).max_by(|&a, &b| v[i][a].abs().partial_cmp(&v[i][b].abs()).unwrap()).unwrap();
            let last = cols - 1;
            for row in v.iter_mut() {
                row.swap(j, last);
            }
            // eliminate row i from the remaining columns
            let coeffs: Vec<f64> = (0..last).map(|c| v[i][c] / v[i][last]).collect();
            for row in v.iter_mut() {
                let pr = row[last];
                for c in 0..last {
                    row[c] -= coeffs[c] * pr;
                }
            }
            cols -= 1;
            gram_schmidt(&mut v, cols);
        }
        Configuration::from_unsorted(chosen).expect("projection sampler never repeats a point")
    }
}

fn gram_schmidt(v: &mut [Vec<f64>], cols: usize) {
    for c in 0..cols {
        for p in 0..c {
            let dot: f64 = v.iter().map(|r| r[c] * r[p]).sum();
            for r in v.iter_mut() {
                r[c] -= dot * r[p];
            }
        }
        let nrm: f64 = v.iter().map(|r| r[c] * r[c]).sum::<f64>().sqrt();
        for r in v.iter_mut() {
            r[c] /= nrm;
        }
    }
}

/// Gibbs sampler moving one particle at a time within a window.
pub struct GibbsEnsembleSampler {
    points: Vec<LatticePoint>,
    values: Vec<f64>,
    ln_w: Vec<f64>,
    n: usize,
    sweeps: usize,
}

impl GibbsEnsembleSampler {
    pub fn new(ens: &EnsembleN, point_tol: f64, sweeps: usize) -> Result<Self, ZwError> {
        let points = ens.window(point_tol)?;
        let values = points.iter().map(|p| p.value(&ens.lattice)).collect();
        let ln_w = points.iter().map(|p| ens.weight_scaled(p).map(|w| w.ln_abs())).collect::<Result<_, _>>()?;
        Ok(GibbsEnsembleSampler { points, values, ln_w, n: ens.n, sweeps })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        // start from the N heaviest sites
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.ln_w[b].partial_cmp(&self.ln_w[a]).unwrap());
        let mut cur: Vec<usize> = order[..self.n].to_vec();
        let mut logw = vec![0.0; self.points.len()];
        for _ in 0..self.sweeps {
            for i in 0..self.n {
                for (s, lw) in logw.iter_mut().enumerate() {
                    let mut l = self.ln_w[s];
                    for (j, &cj) in cur.iter().enumerate() {
                        if j != i {
                            if cj == s {
                                l = f64::NEG_INFINITY;
                                break;
                            }
                            l += 2.0 * (self.values[s] - self.values[cj]).abs().ln();
                        }
                    }
                    *lw = l;
                }
                cur[i] = sample_log_weights(&logw, rng);
            }
        }
        Configuration::from_unsorted(cur.iter().map(|&i| self.points[i]).collect()).expect("distinct sites")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_gate() {
        let lat = LatticeParams::reference();
        let c = Complex64::new;
        assert!(ParamQuadruple::reference().kernel_regime);
        let bad = ParamQuadruple::new(c(1.0, 1.0), c(1.0, -1.0), c(1.0, 1.0), c(1.0, -1.0), &lat);
        assert!(matches!(bad, Err(ZwError::InvalidParams(_))));
        assert!(bad.unwrap_err().to_string().contains("admissible and nondegenerate"));
        let ex = ParamQuadruple::new(c(-1.0, 0.0), c(0.5, 0.0), c(8.0, 8.0), c(8.0, -8.0), &lat).unwrap();
        assert_eq!(ex.class, QuadrupleClass::DegenerateExA);
    }

    #[test]
    fn one_particle_measure_is_weight_over_h0() {
        let ens = EnsembleN::new(ParamQuadruple::reference(), LatticeParams::reference(), 1).unwrap();
        let x = LatticePoint::plus(1);
        let cfg = Configuration::new(vec![x]).unwrap();
        let m = ens.measure_weight(&cfg).unwrap();
        let direct = ens.poly.weight(&x).unwrap() / ens.poly.h0().re;
        assert!((m - direct).abs() < 1e-13 * direct);
        assert!((ens.kernel_sum(&x, &x).unwrap() - m).abs() < 1e-13 * m);
    }

    #[test]
    fn cd_form_matches_sum_form() {
        let ens = EnsembleN::new(ParamQuadruple::reference(), LatticeParams::reference(), 4).unwrap();
        let pts = [LatticePoint::plus(0), LatticePoint::minus(2), LatticePoint::plus(3), LatticePoint::minus(-1)];
        for x in &pts {
            for y in &pts {
                let a = ens.kernel(x, y).unwrap();
                let b = ens.kernel_sum(x, y).unwrap();
                assert!((a - b).abs() < 1e-11 * a.abs().max(1e-3), "{x} {y} {a} {b}");
                assert!((a - ens.kernel(y, x).unwrap()).abs() < 1e-14);
            }
        }
    }
}
