//! Pseudo big q-Jacobi polynomials
//!
//! ```text
//! P_n(x; a,b,c,d) = 3φ2(q^-n, cd q^{n+1}/(ab), cx; cq/b, cq/a | q),
//! w(x) = |x| (ax, bx; q)_∞ / (cx, dx; q)_∞,   x ∈ Λ,
//! ```
//!
//! orthogonal for degrees `n` with `cdq/(ab) > q^{-2n}`.
//!
//! For complex parameters `P_n`, `k_n` and `h_n = Σ P_n² w` are complex;
//! the monic norm `h_n / k_n²` is real and positive. All large quantities are
//! carried as [`Scaled`] so that parameters like `c = γ q^{1-N}` at N ≈ 30
//! stay representable.

use crate::lattice::{sum_over_lattice, sum_ray, Branch, LatticeParams, LatticePoint, LatticeSum, SumOptions};
use crate::qspecial::{
    phi32_terminating, qpoch_inf_flagged, qpoch_inf_scaled, qpochhammer_finite_scaled, theta_scaled, QBase, QError,
};
use crate::scaled::Scaled;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PbqjError {
    #[error(transparent)]
    Series(#[from] QError),
    #[error("parameters are not admissible: {0}")]
    NotAdmissible(String),
    #[error("weight has a pole at lattice point {0}")]
    PoleAtPoint(String),
    #[error("degree {n} exceeds the maximal degree {n_max}")]
    DegreeTooLarge { n: usize, n_max: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    ConjugateNonreal,
    RealGap,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightClass {
    Nondegenerate,
    /// `a < 0 < b` real with `1/a, 1/b ∈ Λ`; the weight lives on
    /// `[q/a, q/b]`.
    DegenerateExA,
}

const REAL_TOL: f64 = 1e-12;

fn is_real(z: Complex64) -> bool {
    z.im.abs() <= REAL_TOL * z.norm()
}

/// Position of the real number `v` along its branch, in units of `-log q`.
fn branch_coordinate(lat: &LatticeParams, v: f64) -> (Branch, f64) {
    let b = if v > 0.0 { Branch::Plus } else { Branch::Minus };
    (b, (v.abs() / lat.zeta(b).abs()).ln() / lat.q.ln())
}

/// Classifies a pair by the positivity lemma for `(ax, bx; q)_∞` on `Λ`.
pub fn pair_kind(a: Complex64, b: Complex64, lat: &LatticeParams) -> PairKind {
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return PairKind::Other;
    }
    if !is_real(a) && (a - b.conj()).norm() <= REAL_TOL * a.norm() {
        return PairKind::ConjugateNonreal;
    }
    if is_real(a) && is_real(b) {
        let (ba, ta) = branch_coordinate(lat, 1.0 / a.re);
        let (bb, tb) = branch_coordinate(lat, 1.0 / b.re);
        let on_lattice = |t: f64| (t - t.round()).abs() < 1e-9;
        if ba == bb && !on_lattice(ta) && !on_lattice(tb) && ta.floor() == tb.floor() {
            return PairKind::RealGap;
        }
    }
    PairKind::Other
}

/// The lattice point equal to `v`, if any.
pub fn lattice_point_at(lat: &LatticeParams, v: f64) -> Option<LatticePoint> {
    if v == 0.0 || !v.is_finite() {
        return None;
    }
    let (b, t) = branch_coordinate(lat, v);
    ((t - t.round()).abs() < 1e-9).then(|| LatticePoint { branch: b, m: t.round() as i64 })
}

#[derive(Clone, Copy, Debug)]
pub struct PbqjParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub lattice: LatticeParams,
    pub class: WeightClass,
    /// `None` when every degree is orthogonal (finite support at infinity).
    pub n_max: Option<usize>,
    /// `cdq/(ab)` lies within 1e-9 (in log scale) of a threshold `q^{-2n}`.
    pub n_max_near_boundary: bool,
    /// Outermost points of the support in the degenerate case.
    pub support: Option<(LatticePoint, LatticePoint)>,
}

impl PbqjParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64, lattice: LatticeParams) -> Result<Self, PbqjError> {
        let q = lattice.q;
        let kab = pair_kind(a, b, &lattice);
        let kcd = pair_kind(c, d, &lattice);
        if kcd == PairKind::Other {
            return Err(PbqjError::NotAdmissible(format!("pair (c,d) = ({c}, {d}) gives a weight that is not positive")));
        }
        let mut out = PbqjParams {
            a,
            b,
            c,
            d,
            lattice,
            class: WeightClass::Nondegenerate,
            n_max: None,
            n_max_near_boundary: false,
            support: None,
        };
        if kab == PairKind::Other {
            let (lo, hi) = if a.re < b.re { (a, b) } else { (b, a) };
            let ex_a = is_real(lo) && is_real(hi) && lo.re < 0.0 && hi.re > 0.0;
            let pa = lattice_point_at(&lattice, 1.0 / lo.re);
            let pb = lattice_point_at(&lattice, 1.0 / hi.re);
            match (ex_a, pa, pb) {
                (true, Some(pa), Some(pb)) => {
                    out.class = WeightClass::DegenerateExA;
                    out.support = Some((pa.inward(), pb.inward()));
                    return Ok(out);
                }
                _ => {
                    return Err(PbqjError::NotAdmissible(format!(
                        "pair (a,b) = ({a}, {b}) is neither conjugate, in a lattice gap, nor of the degenerate type"
                    )))
                }
            }
        }
        let r = c * d * q.value() / (a * b);
        if !is_real(r) || r.re <= 0.0 {
            return Err(PbqjError::NotAdmissible(format!("cdq/(ab) = {r} is not a positive real")));
        }
        let t = r.re.ln() / (2.0 * -q.ln());
        if t <= 0.0 {
            return Err(PbqjError::NotAdmissible(format!("cdq/(ab) = {} must exceed 1", r.re)));
        }
        let tr = t.round();
        if (t - tr).abs() < 1e-9 {
            log::warn!("cdq/(ab) = {} is within the guard band of q^(-2n) for n = {tr}", r.re);
            out.n_max_near_boundary = true;
        }
        out.n_max = Some(t.ceil() as usize - 1);
        Ok(out)
    }

    pub fn q(&self) -> QBase {
        self.lattice.q
    }

    /// Parameters `(a, b, c/q, d/q)` of the shifted family.
    pub fn starred(&self) -> Result<Self, PbqjError> {
        let q = self.q().value();
        PbqjParams::new(self.a, self.b, self.c / q, self.d / q, self.lattice)
    }

    fn check_degree(&self, n: usize) -> Result<(), PbqjError> {
        match self.n_max {
            Some(m) if n > m => Err(PbqjError::DegreeTooLarge { n, n_max: m }),
            _ => Ok(()),
        }
    }

    /// `w(x)` at a complex point, without positivity checks.
    pub fn weight_at(&self, x: Complex64, abs_x: Complex64) -> Scaled {
        let q = self.q();
        let num = qpoch_inf_scaled(self.a * x, q) * qpoch_inf_scaled(self.b * x, q);
        let den = qpoch_inf_scaled(self.c * x, q) * qpoch_inf_scaled(self.d * x, q);
        num / den * abs_x
    }

    pub fn weight_scaled(&self, x: &LatticePoint) -> Result<Scaled, PbqjError> {
        if let Some((lo, hi)) = self.support {
            if *x < lo || *x > hi {
                return Ok(Scaled::ZERO);
            }
        }
        let v = x.value(&self.lattice);
        let q = self.q();
        let (dc, zc) = qpoch_inf_flagged(self.c * v, q);
        let (dd, zd) = qpoch_inf_flagged(self.d * v, q);
        let den = dc * dd;
        if den.is_zero() || zc || zd {
            return Err(PbqjError::PoleAtPoint(x.to_string()));
        }
        let num = qpoch_inf_scaled(self.a * v, q) * qpoch_inf_scaled(self.b * v, q);
        let w = num / den * Complex64::new(v.abs(), 0.0);
        // real by construction; drop the rounding residue
        Ok(Scaled::new(Complex64::new(w.mantissa().re, 0.0), w.log_scale()))
    }

    pub fn weight(&self, x: &LatticePoint) -> Result<f64, PbqjError> {
        self.weight_scaled(x).map(|w| w.to_real())
    }

    /// Direct terminating-series evaluation of `P_n(x)`.
    pub fn eval(&self, n: usize, x: Complex64) -> Result<Complex64, PbqjError> {
        let q = self.q();
        let qv = q.value();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        Ok(phi32_terminating(n, c * d * q.pow(n as i64 + 1) / (a * b), c * x, c * qv / b, c * qv / a, q)?)
    }

    pub fn leading_coeff_scaled(&self, n: usize) -> Scaled {
        let q = self.q();
        let qv = q.value();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let num = qpochhammer_finite_scaled(c * d * q.pow(n as i64 + 1) / (a * b), n, q);
        let den = qpochhammer_finite_scaled(c * qv / b, n, q) * qpochhammer_finite_scaled(c * qv / a, n, q);
        Scaled::from(c).powi(n as i32) * num / den
    }

    pub fn leading_coeff(&self, n: usize) -> Complex64 {
        self.leading_coeff_scaled(n).to_complex()
    }

    /// Monic polynomial `P_n(x)/k_n` through the reversed form of the series,
    ///
    /// ```text
    /// x^n (q^{1-n}/(dx))_n (b q^{-n}/c)_n / (ab q^{-2n}/(cd))_n
    ///   · 3φ2(q^-n, (a/d) q^-n, q/(bx); cq/b, q^{1-n}/(dx) | q),
    /// ```
    ///
    /// whose ingredients stay O(1) when `c, d` are large.
    pub fn monic_eval_scaled(&self, n: usize, x: Complex64) -> Result<Scaled, PbqjError> {
        let q = self.q();
        let qv = q.value();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let qn = q.pow(-(n as i64));
        let lower2 = Complex64::new(qv * qn, 0.0) / (d * x);
        let s = phi32_terminating(n, a / d * qn, qv / (b * x), c * qv / b, lower2, q)?;
        let pre = qpochhammer_finite_scaled(lower2, n, q) * qpochhammer_finite_scaled(b / c * qn, n, q)
            / qpochhammer_finite_scaled(a * b / (c * d) * qn * qn, n, q);
        Ok(Scaled::from(x).powi(n as i32) * pre * s)
    }

    pub fn monic_eval(&self, n: usize, x: Complex64) -> Result<Complex64, PbqjError> {
        self.monic_eval_scaled(n, x).map(|s| s.to_complex())
    }

    /// `h_n / h_0` in closed form.
    pub fn norm_ratio_scaled(&self, n: usize) -> Scaled {
        let q = self.q();
        let qv = q.value();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let t = c * d / (a * b);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let num = qpochhammer_finite_scaled(Complex64::new(qv, 0.0), n, q)
            * qpochhammer_finite_scaled(qv * d / a, n, q)
            * qpochhammer_finite_scaled(qv * d / b, n, q);
        let den = qpochhammer_finite_scaled(qv * t, n, q)
            * qpochhammer_finite_scaled(qv * c / a, n, q)
            * qpochhammer_finite_scaled(qv * c / b, n, q);
        let tail = (Complex64::new(1.0, 0.0) - qv * t) / (Complex64::new(1.0, 0.0) - q.pow(2 * n as i64 + 1) * t);
        let qpow = Scaled::from_ln(((n * (n.saturating_sub(1))) as f64 / 2.0 + 2.0 * n as f64) * q.ln());
        Scaled::from(c * c / (a * b)).powi(n as i32) * qpow * num / den * Complex64::new(sign, 0.0) * tail
    }

    /// `h_0` in closed theta-function form.
    pub fn h0_scaled(&self) -> Scaled {
        let q = self.q();
        let qv = q.value();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (zm, zp) = (self.lattice.zeta_minus, self.lattice.zeta_plus);
        let one = |z: f64| Complex64::new(z, 0.0);
        let num = qpoch_inf_scaled(one(qv), q)
            * qpoch_inf_scaled(a / c, q)
            * qpoch_inf_scaled(a / d, q)
            * qpoch_inf_scaled(b / c, q)
            * qpoch_inf_scaled(b / d, q);
        let den = qpoch_inf_scaled(a * b / (qv * c * d), q);
        let th_num = theta_scaled(one(zm / zp), q) * theta_scaled(c * d * zm * zp, q);
        let th_den = theta_scaled(c * zm, q) * theta_scaled(d * zm, q) * theta_scaled(c * zp, q) * theta_scaled(d * zp, q);
        Scaled::from_real(zp) * num / den * th_num / th_den
    }

    pub fn h0(&self) -> Complex64 {
        self.h0_scaled().to_complex()
    }

    pub fn norm_h_scaled(&self, n: usize) -> Result<Scaled, PbqjError> {
        self.check_degree(n)?;
        Ok(self.h0_scaled() * self.norm_ratio_scaled(n))
    }

    pub fn norm_h(&self, n: usize) -> Result<Complex64, PbqjError> {
        self.norm_h_scaled(n).map(|s| s.to_complex())
    }

    /// `h_n / k_n²`, real and positive for orthogonal degrees.
    pub fn monic_norm_scaled(&self, n: usize) -> Result<Scaled, PbqjError> {
        let k = self.leading_coeff_scaled(n);
        let v = self.norm_h_scaled(n)? / (k * k);
        Ok(Scaled::new(Complex64::new(v.mantissa().re, 0.0), v.log_scale()))
    }

    /// `Σ_x P_m(x) P_n(x) w(x)` over the lattice.
    pub fn orthogonality_check(&self, m: usize, n: usize, opts: &SumOptions) -> Result<LatticeSum, PbqjError> {
        self.check_degree(m.max(n))?;
        let lat = self.lattice;
        let f = |x: LatticePoint| {
            let w = match self.weight(&x) {
                Ok(w) => w,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            if w == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let v = Complex64::new(x.value(&lat), 0.0);
            let pm = self.eval(m, v).unwrap_or(Complex64::new(f64::NAN, 0.0));
            let pn = self.eval(n, v).unwrap_or(Complex64::new(f64::NAN, 0.0));
            pm * pn * w
        };
        Ok(sum_over_lattice(&f, opts))
    }

    /// `Σ_x w(x)` over the lattice.
    pub fn h0_direct(&self, opts: &SumOptions) -> LatticeSum {
        let f = |x: LatticePoint| Complex64::new(self.weight(&x).unwrap_or(f64::NAN), 0.0);
        sum_over_lattice(&f, opts)
    }

    fn shifted_summand(&self, n: usize) -> impl Fn(LatticePoint) -> Complex64 + '_ {
        let star = PbqjParams { c: self.c / self.q().value(), d: self.d / self.q().value(), ..*self };
        let lat = self.lattice;
        move |x: LatticePoint| {
            let w = star.weight_at(Complex64::new(x.value(&lat), 0.0), Complex64::new(x.abs_value(&lat), 0.0));
            if w.is_zero() {
                return Complex64::new(0.0, 0.0);
            }
            let p = star.eval(n + 1, Complex64::new(x.value(&lat), 0.0)).unwrap_or(Complex64::new(f64::NAN, 0.0));
            (w * p).to_complex()
        }
    }

    /// `Σ_x w*(x) P*_{n+1}(x)` over the whole lattice, with the sum of
    /// absolute values of its terms.
    pub fn shifted_total(&self, n: usize, opts: &SumOptions) -> (Complex64, f64) {
        let f = self.shifted_summand(n);
        let g = |x: LatticePoint| Complex64::new(f(x).norm(), 0.0);
        (sum_over_lattice(&f, opts).value, sum_over_lattice(&g, opts).value.re)
    }

    /// Both sides of
    /// `Σ_{x◁y} w*(x) P*_{n+1}(x) = cq/((b-c)(a-c)) · w(y) P_n(y) / |y|`,
    /// where starred objects use `(a, b, c/q, d/q)`. Returns the left side,
    /// the right side and the tail estimate of the left-hand sum.
    ///
    /// For `y > 0` the left side is evaluated as `-Σ_{x>=y}`, which equals it
    /// because `P*_{n+1}` is orthogonal to constants; summing over `x◁y`
    /// directly cancels to a tiny remainder of O(1) terms once `y` is large.
    pub fn backward_shift_check(&self, n: usize, y: &LatticePoint, opts: &SumOptions) -> Result<(Complex64, Complex64, f64), PbqjError> {
        let lat = self.lattice;
        let f = self.shifted_summand(n);
        let lhs = if y.is_positive() {
            let s = sum_ray(Branch::Plus, y.m, -1, &f, opts);
            LatticeSum { value: -s.value, ..s }
        } else {
            sum_ray(Branch::Minus, y.m, -1, &f, opts)
        };
        let yv = Complex64::new(y.value(&lat), 0.0);
        let qv = self.q().value();
        let wy = self.weight_at(yv, Complex64::new(yv.norm(), 0.0)).to_complex();
        let rhs = self.c * qv / ((self.b - self.c) * (self.a - self.c)) * wy * self.eval(n, yv)? / yv.norm();
        Ok((lhs.value, rhs, lhs.tail_estimate))
    }
}

/// Classical big q-Jacobi `3φ2(q^-n, ABq^{n+1}, u; Aq, Cq | q)`.
pub fn big_qjacobi_eval(n: usize, u: Complex64, a: Complex64, b: Complex64, c: Complex64, q: QBase) -> Result<Complex64, QError> {
    let qv = q.value();
    phi32_terminating(n, a * b * q.pow(n as i64 + 1), u, a * qv, c * qv, q)
}

/// Both sides of the backward shift
/// `(1-A)(1-C) u P_{n+1}(u; A/q, B/q, C/q) = (u-A)(u-C) P_n(u) - A(u-1)(Bu-C) P_n(uq)`.
pub fn ks_backward_shift(n: usize, u: Complex64, a: Complex64, b: Complex64, c: Complex64, q: QBase) -> Result<(Complex64, Complex64), QError> {
    let qv = q.value();
    let one = Complex64::new(1.0, 0.0);
    let lhs = (one - a) * (one - c) * u * big_qjacobi_eval(n + 1, u, a / qv, b / qv, c / qv, q)?;
    let rhs = (u - a) * (u - c) * big_qjacobi_eval(n, u, a, b, c, q)?
        - a * (u - one) * (b * u - c) * big_qjacobi_eval(n, u * qv, a, b, c, q)?;
    Ok((lhs, rhs))
}

/// Orthogonal family with cached norms and leading coefficients.
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub params: PbqjParams,
    pub h: Vec<Scaled>,
    pub k: Vec<Scaled>,
}

impl PolySystem {
    /// Degrees `0..=degree` (capped at `n_max`).
    pub fn new(params: PbqjParams, degree: usize) -> Self {
        let top = params.n_max.map_or(degree, |m| m.min(degree));
        let h0 = params.h0_scaled();
        let h = (0..=top).map(|n| h0 * params.norm_ratio_scaled(n)).collect();
        let k = (0..=top).map(|n| params.leading_coeff_scaled(n)).collect();
        PolySystem { params, h, k }
    }

    pub fn monic_norm(&self, n: usize) -> Scaled {
        let v = self.h[n] / (self.k[n] * self.k[n]);
        Scaled::new(Complex64::new(v.mantissa().re, 0.0), v.log_scale())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_params() -> PbqjParams {
        // n_max >= 3
        let q = 0.5f64;
        let cc = c(3.0, 1.0) * q.powi(-3);
        PbqjParams::new(c(1.0, 0.5), c(1.0, -0.5), cc, cc.conj(), LatticeParams::reference()).unwrap()
    }

    #[test]
    fn classification() {
        let p = sample_params();
        assert_eq!(p.class, WeightClass::Nondegenerate);
        assert!(p.n_max.unwrap() >= 3);
        let lat = LatticeParams::reference();
        assert_eq!(pair_kind(c(0.7, 0.0), c(0.8, 0.0), &lat), PairKind::RealGap);
        assert_eq!(pair_kind(c(0.7, 0.0), c(0.3, 0.0), &lat), PairKind::Other);
        let ex = PbqjParams::new(c(-1.0, 0.0), c(0.5, 0.0), c(8.0, 8.0), c(8.0, -8.0), lat).unwrap();
        assert_eq!(ex.class, WeightClass::DegenerateExA);
        assert_eq!(ex.weight(&LatticePoint::minus(0)).unwrap(), 0.0);
        assert!(ex.weight(&LatticePoint::minus(1)).unwrap() > 0.0);
        assert!(ex.weight(&LatticePoint::plus(2)).unwrap() > 0.0);
        assert!(ex.weight(&LatticePoint::plus(0)).unwrap() > 0.0);
        assert_eq!(ex.weight(&LatticePoint::plus(-1)).unwrap(), 0.0);
        assert!(PbqjParams::new(c(1.0, 1.0), c(1.0, -1.0), c(0.5, 0.1), c(0.5, -0.1), lat).is_err());
    }

    #[test]
    fn weight_special_cases() {
        let lat = LatticeParams::reference();
        let a = c(0.3, 0.7);
        let p = PbqjParams { a, b: a.conj(), c: a, d: a.conj(), ..sample_params() };
        for m in -3..4 {
            let x = LatticePoint::minus(m);
            assert!((p.weight(&x).unwrap() - x.abs_value(&lat)).abs() < 1e-14 * x.abs_value(&lat));
        }
    }

    #[test]
    fn low_degree_forms() {
        let p = sample_params();
        assert_eq!(p.eval(0, c(0.3, 0.0)).unwrap(), c(1.0, 0.0));
        // P_1 is linear: two-point slope equals k_1
        let x0 = c(0.25, 0.0);
        let x1 = c(-0.75, 0.0);
        let slope = (p.eval(1, x1).unwrap() - p.eval(1, x0).unwrap()) / (x1 - x0);
        assert!((slope - p.leading_coeff(1)).norm() < 1e-12 * slope.norm());
        assert_eq!(p.leading_coeff(0), c(1.0, 0.0));
    }

    #[test]
    fn reversed_form_matches_direct() {
        let p = sample_params();
        for n in 0..5 {
            for &x in &[0.5, -1.0, 2.0, -0.125] {
                let x = c(x, 0.0);
                let direct = p.eval(n, x).unwrap() / p.leading_coeff(n);
                let rev = p.monic_eval(n, x).unwrap();
                assert!((direct - rev).norm() < 1e-10 * direct.norm().max(1e-3), "n={n} {direct} {rev}");
            }
        }
    }

    #[test]
    fn ks_identity() {
        let q = QBase::new(0.5).unwrap();
        let (l, r) = ks_backward_shift(2, c(0.3, 0.2), c(0.4, 0.1), c(1.3, -0.2), c(-0.6, 0.5), q).unwrap();
        assert!((l - r).norm() < 1e-12 * l.norm());
    }

    #[test]
    fn monic_norms_are_positive() {
        let p = sample_params();
        for n in 0..=p.n_max.unwrap() {
            let v = p.norm_h_scaled(n).unwrap() / (p.leading_coeff_scaled(n) * p.leading_coeff_scaled(n));
            assert!(v.mantissa().re > 0.0);
            assert!(v.mantissa().im.abs() < 1e-10 * v.mantissa().norm());
        }
    }
}
