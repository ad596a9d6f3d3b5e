//! Boundary correlation kernel of the q-zw measures and its finite-N
//! approximants.
//!
//! ```text
//! K(x,y) = (F_0(x) F_1(y) - F_1(x) F_0(y)) / (𝔥_1 (x - y))
//! ```
//!
//! Each `F_r` factors as `√S(x) · g_r(x)` with
//! `S(x) = |x| (xα, xβ)_∞ / (θ(xγ) θ(xδ))` and `g_r` analytic near every
//! lattice point, which is what the diagonal evaluations below rely on.

use crate::lattice::{LatticeParams, LatticePoint};
use crate::qspecial::{phi21, phi32_terminating, qpoch_inf_scaled, qpochhammer_finite, theta_scaled, QBase, QError};
use crate::scaled::Scaled;
use crate::zw_measures::{clamp_probability, EnsembleN, ParamQuadruple, ZwError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitError {
    #[error(transparent)]
    Series(#[from] QError),
    #[error(transparent)]
    Zw(#[from] ZwError),
    #[error("no ordering of (α,β), (γ,δ) gives a convergent 2φ1 for r = {0}")]
    NoConvergentRepresentation(i32),
    #[error("negative value {0} under the square root")]
    NegativeUnderSqrt(f64),
    #[error("αβ < q²γδ fails; the boundary kernel is not available")]
    NotKernelRegime,
    #[error("diagonal quadrature disagreement: contour {cauchy}, finite difference {fd}")]
    QuadratureDisagreement { cauchy: f64, fd: f64 },
    #[error("points must be distinct")]
    DuplicatePoints,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

const TOL: f64 = 1e-15;

fn cx(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Parameter order `(a, b, c, d)` after an optional α↔β and γ↔δ swap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ordering {
    pub swap_ab: bool,
    pub swap_cd: bool,
}

impl Ordering {
    pub const ALL: [Ordering; 4] = [
        Ordering { swap_ab: false, swap_cd: false },
        Ordering { swap_ab: true, swap_cd: false },
        Ordering { swap_ab: false, swap_cd: true },
        Ordering { swap_ab: true, swap_cd: true },
    ];

    fn apply(&self, p: &ParamQuadruple) -> [Complex64; 4] {
        let (a, b) = if self.swap_ab { (p.beta, p.alpha) } else { (p.alpha, p.beta) };
        let (c, d) = if self.swap_cd { (p.delta, p.gamma) } else { (p.gamma, p.delta) };
        [a, b, c, d]
    }

    /// `|q^{r-1} b / c|`, the argument of the 2φ1.
    pub fn series_ratio(&self, r: i32, p: &ParamQuadruple, q: QBase) -> f64 {
        let [_, b, c, _] = self.apply(p);
        (b / c).norm() * q.pow(r as i64 - 1)
    }
}

/// The ordering with the fastest converging 2φ1.
pub fn best_ordering(r: i32, p: &ParamQuadruple, q: QBase) -> Result<Ordering, LimitError> {
    let best = Ordering::ALL
        .iter()
        .copied()
        .min_by(|a, b| a.series_ratio(r, p, q).partial_cmp(&b.series_ratio(r, p, q)).unwrap())
        .unwrap();
    if best.series_ratio(r, p, q) < 1.0 {
        Ok(best)
    } else {
        Err(LimitError::NoConvergentRepresentation(r))
    }
}

/// `S(x)` with `|x|` replaced by `abs_x` (the analytic continuation `s·x`).
pub fn sqrt_arg(x: Complex64, abs_x: Complex64, p: &ParamQuadruple, q: QBase) -> Scaled {
    let num = qpoch_inf_scaled(p.alpha * x, q) * qpoch_inf_scaled(p.beta * x, q);
    let den = theta_scaled(p.gamma * x, q) * theta_scaled(p.delta * x, q);
    num / den * abs_x
}

/// The analytic factor `g_r(x) = F_r(x) / √S(x)`.
pub fn g_r(r: i32, x: Complex64, p: &ParamQuadruple, q: QBase, ord: Ordering) -> Result<Scaled, LimitError> {
    let [a, b, c, d] = ord.apply(p);
    if ord.series_ratio(r, p, q) >= 1.0 {
        return Err(LimitError::NoConvergentRepresentation(r));
    }
    let qr1 = q.pow(r as i64 - 1);
    let qr = q.pow(r as i64);
    let lower = cx(qr) / (d * x);
    let pref = qpoch_inf_scaled(b / c * qr1, q) * qpoch_inf_scaled(lower, q)
        / qpoch_inf_scaled(a * b / (c * d) * qr1 * qr1, q);
    let s = phi21(a * qr1 / d, cx(q.value()) / (b * x), lower, b * qr1 / c, q, TOL)?;
    Ok(Scaled::from(x).powi(1 - r) * pref * s.value)
}

/// `F_r` at a lattice point with an explicit ordering.
pub fn f_r_ordered(r: i32, x: &LatticePoint, p: &ParamQuadruple, lat: &LatticeParams, ord: Ordering) -> Result<f64, LimitError> {
    let q = lat.q;
    let v = x.value(lat);
    let s = sqrt_arg(cx(v), cx(v.abs()), p, q);
    let m = s.mantissa();
    if m.re < 0.0 && m.re.abs() > 1e-8 * m.norm() {
        return Err(LimitError::NegativeUnderSqrt(s.to_real()));
    }
    let s = Scaled::new(cx(m.re.max(0.0)), s.log_scale());
    Ok((s.sqrt() * g_r(r, cx(v), p, q, ord)?).to_complex().re)
}

/// `F_r(x)` on the lattice, using the best convergent ordering.
pub fn f_r(r: i32, x: &LatticePoint, p: &ParamQuadruple, lat: &LatticeParams) -> Result<f64, LimitError> {
    f_r_ordered(r, x, p, lat, best_ordering(r, p, lat.q)?)
}

/// `𝔥_r` in closed form.
pub fn h_frak(r: i32, p: &ParamQuadruple, lat: &LatticeParams) -> f64 {
    let q = lat.q;
    let (a, b, c, d) = (p.alpha, p.beta, p.gamma, p.delta);
    let (zm, zp) = (cx(lat.zeta_minus), cx(lat.zeta_plus));
    let qr1 = q.pow(r as i64 - 1);
    let t = c * d / (a * b);
    let head = Scaled::from(c * d).powi(r) / Scaled::from(a * b)
        * cx(q.pow(2 - (r * r) as i64))
        / Scaled::from(t * q.pow(3 - 2 * r as i64) - 1.0)
        * zp;
    let thetas = theta_scaled(zm / zp, q) * theta_scaled(c * d * zm * zp, q)
        / (theta_scaled(c * zm, q) * theta_scaled(d * zm, q) * theta_scaled(c * zp, q) * theta_scaled(d * zp, q));
    let qq = qpoch_inf_scaled(cx(q.value()), q);
    let pochs = qq * qq
        * qpoch_inf_scaled(a / d * qr1, q)
        * qpoch_inf_scaled(a / c * qr1, q)
        * qpoch_inf_scaled(b / d * qr1, q)
        * qpoch_inf_scaled(b / c * qr1, q);
    let den = qpoch_inf_scaled(a * b / (c * d) * qr1 * qr1, q);
    (head * thetas * pochs / (den * den)).to_complex().re
}

/// Diagonal evaluation settings.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    /// Contour radius as a fraction of `|x|`.
    pub radius_factor: f64,
    /// Node count of the coarse rule; the fine rule doubles it.
    pub nodes: usize,
    /// Allowed relative disagreement between contour and finite-difference values.
    pub cross_tol: f64,
}

impl QuadratureOptions {
    pub fn default_for(q: QBase) -> Self {
        QuadratureOptions { radius_factor: (1.0 - q.value()) / 4.0, nodes: 64, cross_tol: 1e-6 }
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryKernel {
    pub params: ParamQuadruple,
    pub lattice: LatticeParams,
    pub h1: f64,
    pub quad: QuadratureOptions,
    ord: [Ordering; 2],
}

/// `(√S(x), g_0(x), g_1(x))` at a lattice point.
struct Pieces {
    sqrt_s: f64,
    g0: Complex64,
    g1: Complex64,
}

impl BoundaryKernel {
    pub fn new(params: ParamQuadruple, lattice: LatticeParams) -> Result<Self, LimitError> {
        if !params.kernel_regime {
            return Err(LimitError::NotKernelRegime);
        }
        let q = lattice.q;
        let ord = [best_ordering(0, &params, q)?, best_ordering(1, &params, q)?];
        let h1 = h_frak(1, &params, &lattice);
        Ok(BoundaryKernel { params, lattice, h1, quad: QuadratureOptions::default_for(q), ord })
    }

    pub fn reference() -> Self {
        BoundaryKernel::new(ParamQuadruple::reference(), LatticeParams::reference()).unwrap()
    }

    pub fn f(&self, r: i32, x: &LatticePoint) -> Result<f64, LimitError> {
        f_r(r, x, &self.params, &self.lattice)
    }

    fn g(&self, r: i32, x: Complex64) -> Result<Complex64, LimitError> {
        Ok(g_r(r, x, &self.params, self.lattice.q, self.ord[r as usize])?.to_complex())
    }

    fn pieces(&self, x: &LatticePoint) -> Result<Pieces, LimitError> {
        let v = x.value(&self.lattice);
        let s = sqrt_arg(cx(v), cx(v.abs()), &self.params, self.lattice.q).to_complex().re;
        if s < 0.0 {
            return Err(LimitError::NegativeUnderSqrt(s));
        }
        Ok(Pieces { sqrt_s: s.sqrt(), g0: self.g(0, cx(v))?, g1: self.g(1, cx(v))? })
    }

    /// `K(x,y)`; the diagonal goes through [`BoundaryKernel::diagonal`].
    pub fn eval(&self, x: &LatticePoint, y: &LatticePoint) -> Result<f64, LimitError> {
        if x == y {
            return self.diagonal(x);
        }
        let (px, py) = (self.pieces(x)?, self.pieces(y)?);
        let (xv, yv) = (x.value(&self.lattice), y.value(&self.lattice));
        let num = (px.g0 * py.g1 - px.g1 * py.g0).re * px.sqrt_s * py.sqrt_s;
        Ok(num / (self.h1 * (xv - yv)))
    }

    /// Contour average `(1/2π) ∫ K(x, x + ρe^{iθ}) dθ` with `nodes` trapezoid
    /// nodes, returned for `nodes` and `2·nodes`.
    pub fn diagonal_cauchy(&self, x: &LatticePoint) -> Result<(f64, f64), LimitError> {
        let q = self.lattice.q;
        let xv = x.value(&self.lattice);
        let sgn = xv.signum();
        let rho = self.quad.radius_factor * xv.abs();
        let m = 2 * self.quad.nodes;
        let s0 = sqrt_arg(cx(xv), cx(xv.abs()), &self.params, q);
        let (g0x, g1x) = (self.g(0, cx(xv))?, self.g(1, cx(xv))?);
        let vals: Vec<(Complex64, Complex64, Complex64, Complex64)> = (0..m)
            .into_par_iter()
            .map(|k| {
                let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
                let y = cx(xv) + e * rho;
                let ratio = (sqrt_arg(y, y * sgn, &self.params, q) / s0).to_complex();
                Ok((e, ratio, self.g(0, y)?, self.g(1, y)?))
            })
            .collect::<Result<_, LimitError>>()?;
        // follow the branch of √(S(y)/S(x)) continuously from θ = 0
        let mut prev = Complex64::new(1.0, 0.0);
        let mut acc_all = Complex64::new(0.0, 0.0);
        let mut acc_even = Complex64::new(0.0, 0.0);
        for (k, (e, ratio, g0y, g1y)) in vals.iter().enumerate() {
            let mut r = ratio.sqrt();
            if (r - prev).norm() > (r + prev).norm() {
                r = -r;
            }
            prev = r;
            // K(x,y)/(√S(x)√S(x)) with y - x = ρe
            let kxy = (g0x * g1y - g1x * g0y) * r / (-e * rho);
            acc_all += kxy;
            if k % 2 == 0 {
                acc_even += kxy;
            }
        }
        let scale = s0.to_complex().re / self.h1;
        Ok(((acc_even / (m / 2) as f64).re * scale, (acc_all / m as f64).re * scale))
    }

    /// L'Hôpital form `S(x) (g_1 g_0' - g_0 g_1') / 𝔥_1` with Richardson-extrapolated
    /// central differences.
    pub fn diagonal_fd(&self, x: &LatticePoint) -> Result<f64, LimitError> {
        let xv = x.value(&self.lattice);
        let h = 1e-2 * xv.abs();
        let d = |r: i32, h: f64| -> Result<Complex64, LimitError> {
            Ok((self.g(r, cx(xv + h))? - self.g(r, cx(xv - h))?) / (2.0 * h))
        };
        let rich = |r: i32| -> Result<Complex64, LimitError> { Ok((d(r, h / 2.0)? * 4.0 - d(r, h)?) / 3.0) };
        let p = self.pieces(x)?;
        let w = p.g1 * rich(0)? - p.g0 * rich(1)?;
        Ok(w.re * p.sqrt_s * p.sqrt_s / self.h1)
    }

    /// Contour value, cross-checked against the coarse rule and the finite
    /// difference.
    pub fn diagonal(&self, x: &LatticePoint) -> Result<f64, LimitError> {
        let (coarse, fine) = self.diagonal_cauchy(x)?;
        let fd = self.diagonal_fd(x)?;
        let tol = self.quad.cross_tol;
        let floor = 1e-13;
        if (coarse - fine).abs() > tol * fine.abs() + floor || (fd - fine).abs() > tol * fine.abs() + floor {
            return Err(LimitError::QuadratureDisagreement { cauchy: fine, fd });
        }
        Ok(fine)
    }

    pub fn matrix(&self, points: &[LatticePoint]) -> Result<DMatrix<f64>, LimitError> {
        let n = points.len();
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let vals: Vec<f64> = cells
            .par_iter()
            .map(|&(i, j)| self.eval(&points[i], &points[j]))
            .collect::<Result<_, _>>()?;
        let mut m = DMatrix::zeros(n, n);
        for (&(i, j), v) in cells.iter().zip(vals) {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        Ok(m)
    }

    /// `ρ(x_1..x_n) = det[K(x_i,x_j)]`, clamped to `[0,1]`.
    pub fn correlation(&self, points: &[LatticePoint]) -> Result<f64, LimitError> {
        let mut v = points.to_vec();
        v.sort();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(LimitError::DuplicatePoints);
        }
        Ok(clamp_probability(self.matrix(points)?.determinant(), 1e-8))
    }
}

/// Finite-N quantities rescaled so that they converge as `N → ∞`:
///
/// ```text
/// G_r^N(x) = (sgn x)^{N-1} (γδ)^{(N-1)/2} q^{-N(N-1)/2} √w_N(x) p_{N-r}(x),
/// H_r^N    = (γδ)^{N-1} q^{-N(N-1)} h_{N-r} / k_{N-r}².
/// ```
///
/// The prefactors are applied in log scale.
#[derive(Clone, Debug)]
pub struct FiniteN {
    pub ens: EnsembleN,
    ln_prefactor: f64,
}

impl FiniteN {
    pub fn new(params: ParamQuadruple, lattice: LatticeParams, n: usize) -> Result<Self, LimitError> {
        let ens = EnsembleN::new(params, lattice, n)?;
        let nf = n as f64;
        let gd = (params.gamma * params.delta).re;
        let ln_prefactor = 0.5 * (nf - 1.0) * gd.ln() - 0.5 * nf * (nf - 1.0) * lattice.q.ln();
        Ok(FiniteN { ens, ln_prefactor })
    }

    pub fn g(&self, r: usize, x: &LatticePoint) -> Result<f64, LimitError> {
        let n = self.ens.n;
        let w = self.ens.weight_scaled(x)?;
        if w.is_zero() {
            return Ok(0.0);
        }
        let v = x.value(&self.ens.lattice);
        let p = self.ens.poly.monic_eval_scaled(n - r, cx(v)).map_err(ZwError::from)?;
        let sign = if v < 0.0 && (n - 1) % 2 == 1 { -1.0 } else { 1.0 };
        Ok(sign * (w.sqrt() * p * Scaled::from_ln(self.ln_prefactor)).to_complex().re)
    }

    pub fn h(&self, r: usize) -> f64 {
        (self.ens.monic_norm(self.ens.n - r) * Scaled::from_ln(2.0 * self.ln_prefactor)).to_complex().re
    }

    /// `(G_0(x) G_1(y) - G_1(x) G_0(y)) / (H_1 (x - y))`, which equals
    /// `(sgn x sgn y)^{N-1} K_N(x,y)`; the diagonal uses the sum form.
    pub fn assembled_kernel(&self, x: &LatticePoint, y: &LatticePoint) -> Result<f64, LimitError> {
        if x == y {
            return Ok(self.ens.kernel_sum(x, y)?);
        }
        let (xv, yv) = (x.value(&self.ens.lattice), y.value(&self.ens.lattice));
        let num = self.g(0, x)? * self.g(1, y)? - self.g(1, x)? * self.g(0, y)?;
        Ok(num / (self.h(1) * (xv - yv)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phi32Row {
    pub n: usize,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub ratio: Complex64,
}

fn in_q_lattice(z: Complex64, q: QBase) -> bool {
    if z.im.abs() > 1e-14 * z.norm() || z.re <= 0.0 {
        return false;
    }
    let k = z.re.ln() / q.ln();
    (k - k.round()).abs() < 1e-10
}

/// Terminating `3φ2(q^-n, Bq^-n, Cq^-n; Dq^-n, Eq^-n | q)` against its
/// large-n form
/// `(BC/DE)^n (-1)^n q^{-n(n-1)/2} (DE/BC)_∞ / (q/E)_∞ · 2φ1(D/B, D/C; DE/BC | q/D)`.
pub fn phi32_limit_check(
    ns: &[usize],
    b: Complex64,
    c: Complex64,
    d: Complex64,
    e: Complex64,
    q: QBase,
) -> Result<Vec<Phi32Row>, LimitError> {
    if d.norm() <= q.value() {
        return Err(LimitError::HypothesisViolated(format!("|D| = {} must exceed q", d.norm())));
    }
    if in_q_lattice(d, q) || in_q_lattice(e, q) {
        return Err(LimitError::HypothesisViolated("D and E must avoid q^Z".into()));
    }
    let debc = d * e / (b * c);
    let tail = qpoch_inf_scaled(debc, q) / qpoch_inf_scaled(cx(q.value()) / e, q)
        * phi21(d / b, d / c, debc, cx(q.value()) / d, q, TOL)?.value;
    ns.iter()
        .map(|&n| {
            let qn = q.pow(-(n as i64));
            let lhs = phi32_terminating(n, b * qn, c * qn, d * qn, e * qn, q)?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = Scaled::from(b * c / (d * e)).powi(n as i32)
                * Scaled::from_ln(-((n * n.saturating_sub(1)) as f64) / 2.0 * q.ln())
                * cx(sign)
                * tail;
            let rhs = rhs.to_complex();
            Ok(Phi32Row { n, lhs, rhs, ratio: lhs / rhs })
        })
        .collect()
}

/// Both sides of `(Eq^{-n}; q)_n = E^n (-1)^n q^{-n(n+1)/2} (q/E; q)_n`.
pub fn pochhammer_reversal(e: Complex64, n: usize, q: QBase) -> (Complex64, Complex64) {
    let lhs = qpochhammer_finite(e * q.pow(-(n as i64)), n, q);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = e.powi(n as i32) * sign * q.pow(-((n * (n + 1) / 2) as i64)) * qpochhammer_finite(cx(q.value()) / e, n, q);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let bk = BoundaryKernel::reference();
        let x = LatticePoint::plus(1);
        let f0 = bk.f(0, &x).unwrap();
        let f1 = bk.f(1, &x).unwrap();
        assert!((f0 - 0.0228525925).abs() < 1e-9, "{f0}");
        assert!((f1 - 0.0565943361).abs() < 1e-9, "{f1}");
        let p = ParamQuadruple::reference();
        let lat = LatticeParams::reference();
        for (r, want) in [(0, 0.0034799429), (1, 0.27762779), (2, 85.1294924)] {
            let h = h_frak(r, &p, &lat);
            assert!((h / want - 1.0).abs() < 1e-7, "{r} {h}");
        }
    }

    #[test]
    fn diagonal_routes_agree() {
        let bk = BoundaryKernel::reference();
        for x in [LatticePoint::plus(1), LatticePoint::minus(0), LatticePoint::plus(4), LatticePoint::minus(-2)] {
            let (c64, c128) = bk.diagonal_cauchy(&x).unwrap();
            let fd = bk.diagonal_fd(&x).unwrap();
            println!("{x} {c64} {c128} {fd}");
            assert!((c64 - c128).abs() < 1e-10);
            assert!((fd - c128).abs() < 1e-7 * c128.abs().max(1e-6));
            assert!((0.0..=1.0).contains(&c128));
        }
    }

    #[test]
    fn assembled_matches_cd() {
        let p = ParamQuadruple::reference();
        let lat = LatticeParams::reference();
        let fin = FiniteN::new(p, lat, 8).unwrap();
        let pts = [LatticePoint::plus(1), LatticePoint::minus(0), LatticePoint::plus(3)];
        for x in &pts {
            for y in &pts {
                let a = fin.assembled_kernel(x, y).unwrap();
                let s: f64 = if x.sign() * y.sign() < 0.0 { -1.0 } else { 1.0 };
                let k = fin.ens.kernel(x, y).unwrap() * s.powi(7);
                assert!((a - k).abs() < 1e-12 * k.abs().max(1e-3), "{x} {y} {a} {k}");
            }
        }
    }
}
