//! q-Pochhammer symbols, the theta function and basic hypergeometric series.
//!
//! Every infinite object is truncated with a certified bound on the remainder
//! (assuming exact arithmetic per term). Tolerances are relative to the value
//! being computed.

use crate::scaled::Scaled;
use num_complex::Complex64;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-14;
const MAX_TERMS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("q must lie in the open interval (0,1), got {0}")]
    InvalidBase(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("theta function evaluated at zero")]
    ZeroArgument,
    #[error("series is non-terminating and |Z| = {0} >= 1")]
    Nonconvergent(f64),
    #[error("denominator parameter {param} hits a pole at term {term}")]
    PoleInDenominator { param: usize, term: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self, QError> {
        if q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            Err(QError::InvalidBase(q))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    /// `q^k` for any integer exponent.
    pub fn pow(self, k: i64) -> f64 {
        if k.unsigned_abs() < 1000 {
            self.0.powi(k as i32)
        } else {
            (k as f64 * self.0.ln()).exp()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub abs_error_bound: f64,
    pub terms_used: usize,
    /// Some factor came within a few ulps of zero; the value may have lost
    /// all relative accuracy.
    pub near_zero: bool,
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(s: f64, c: f64, x: f64) -> (f64, f64) {
    let t = s + x;
    let c = if s.abs() >= x.abs() { c + ((s - t) + x) } else { c + ((x - t) + s) };
    (t, c)
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum(self.sum.re, self.comp.re, x.re);
        let (im, cim) = two_sum(self.sum.im, self.comp.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp = Complex64::new(cre, cim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of reals.
pub fn sum_real<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().map(|x| Complex64::new(x, 0.0)).collect::<CompensatedSum>().value().re
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn qpochhammer_finite(a: Complex64, n: usize, q: QBase) -> Complex64 {
    let mut p = c(1.0);
    let mut qm = 1.0;
    for _ in 0..n {
        p *= c(1.0) - a * qm;
        qm *= q.0;
    }
    p
}

/// `(a;q)_n` with the magnitude carried separately.
pub fn qpochhammer_finite_scaled(a: Complex64, n: usize, q: QBase) -> Scaled {
    let mut p = Scaled::ONE;
    let mut qm = 1.0;
    for _ in 0..n {
        p = p * (c(1.0) - a * qm);
        qm *= q.0;
    }
    p
}

/// Product of `(a_i;q)_n` over several arguments.
pub fn qpochhammer_finite_multi(args: &[Complex64], n: usize, q: QBase) -> Complex64 {
    args.iter().map(|&a| qpochhammer_finite(a, n, q)).product()
}

struct ProductCore {
    value: Scaled,
    rel_bound: f64,
    terms: usize,
    near_zero: bool,
}

fn qpoch_inf_core(a: Complex64, q: QBase, tol: f64) -> ProductCore {
    let abs_a = a.norm();
    let eps = f64::EPSILON;
    let mut p = Scaled::ONE;
    let mut qm = 1.0;
    let mut near_zero = false;
    let mut m = 0usize;
    loop {
        let tail_head = abs_a * qm;
        if tail_head <= 0.5 {
            let t = 2.0 * tail_head / (1.0 - q.0);
            let rel = t.exp_m1();
            if rel <= tol || tail_head == 0.0 {
                return ProductCore { value: p, rel_bound: rel, terms: m, near_zero };
            }
        }
        let f = c(1.0) - a * qm;
        if f.norm() < 10.0 * eps {
            near_zero = true;
        }
        if f.norm() == 0.0 {
            return ProductCore { value: Scaled::ZERO, rel_bound: 0.0, terms: m + 1, near_zero };
        }
        p = p * f;
        qm *= q.0;
        m += 1;
    }
}

pub fn qpochhammer_infinite(a: Complex64, q: QBase, tol: f64) -> Result<SeriesResult, QError> {
    if !(tol > 0.0) {
        return Err(QError::InvalidTolerance(tol));
    }
    let core = qpoch_inf_core(a, q, tol);
    let v = core.value.to_complex();
    Ok(SeriesResult {
        value: v,
        abs_error_bound: v.norm() * core.rel_bound,
        terms_used: core.terms,
        near_zero: core.near_zero,
    })
}

/// `(a;q)_∞` at the default tolerance.
pub fn qpoch_inf(a: Complex64, q: QBase) -> Complex64 {
    qpoch_inf_core(a, q, DEFAULT_TOL).value.to_complex()
}

/// `(a;q)_∞` as a scaled number (large `|a|` overflows binary64 quickly).
pub fn qpoch_inf_scaled(a: Complex64, q: QBase) -> Scaled {
    qpoch_inf_core(a, q, DEFAULT_TOL).value
}

/// `(a;q)_∞` together with the near-zero flag.
pub fn qpoch_inf_flagged(a: Complex64, q: QBase) -> (Scaled, bool) {
    let core = qpoch_inf_core(a, q, DEFAULT_TOL);
    (core.value, core.near_zero)
}

pub fn theta_q(u: Complex64, q: QBase, tol: f64) -> Result<SeriesResult, QError> {
    if u.norm() == 0.0 {
        return Err(QError::ZeroArgument);
    }
    if !(tol > 0.0) {
        return Err(QError::InvalidTolerance(tol));
    }
    let a = qpoch_inf_core(u, q, tol / 2.0);
    let b = qpoch_inf_core(q.0 / u, q, tol / 2.0);
    let v = (a.value * b.value).to_complex();
    let rel = (1.0 + a.rel_bound) * (1.0 + b.rel_bound) - 1.0;
    Ok(SeriesResult {
        value: v,
        abs_error_bound: v.norm() * rel,
        terms_used: a.terms + b.terms,
        near_zero: a.near_zero || b.near_zero,
    })
}

pub fn theta_scaled(u: Complex64, q: QBase) -> Scaled {
    qpoch_inf_scaled(u, q) * qpoch_inf_scaled(q.0 / u, q)
}

/// `k` with `a = q^{-k}`, `k >= 0`, if `a` is (numerically) such a power.
pub fn q_power_index(a: Complex64, q: QBase) -> Option<usize> {
    if a.re <= 0.0 || a.im.abs() > 1e-13 * a.re {
        return None;
    }
    let k = (-(a.re.ln()) / q.ln()).round();
    if k < 0.0 || k > 10_000.0 {
        return None;
    }
    let target = q.pow(-(k as i64));
    if (a.re - target).abs() <= 1e-12 * target {
        Some(k as usize)
    } else {
        None
    }
}

/// General `_{r+1}φ_r` with `upper.len() == lower.len() + 1`.
///
/// `terminate_at` forces the sum to stop after that index (used when an upper
/// parameter is `q^{-n}` by construction). Otherwise termination is detected.
pub fn basic_hypergeometric(
    upper: &[Complex64],
    lower: &[Complex64],
    z: Complex64,
    q: QBase,
    tol: f64,
    terminate_at: Option<usize>,
) -> Result<SeriesResult, QError> {
    if !(tol > 0.0) {
        return Err(QError::InvalidTolerance(tol));
    }
    let term_len = terminate_at.or_else(|| upper.iter().filter_map(|&a| q_power_index(a, q)).min());
    let pole_guard = 1e-13;
    let mut acc = CompensatedSum::new();
    let mut t = c(1.0);
    acc.add(t);
    if z.norm() == 0.0 {
        return Ok(SeriesResult { value: c(1.0), abs_error_bound: 0.0, terms_used: 1, near_zero: false });
    }
    if let Some(k) = term_len {
        let mut qm = 1.0;
        for m in 0..k {
            let mut num = z;
            for &u in upper {
                num *= c(1.0) - u * qm;
            }
            let mut den = c(1.0 - qm * q.0);
            for (j, &l) in lower.iter().enumerate() {
                let f = c(1.0) - l * qm;
                if f.norm() < pole_guard {
                    return Err(QError::PoleInDenominator { param: j, term: m });
                }
                den *= f;
            }
            t = t * num / den;
            acc.add(t);
            qm *= q.0;
        }
        return Ok(SeriesResult { value: acc.value(), abs_error_bound: 0.0, terms_used: k + 1, near_zero: false });
    }
    let zn = z.norm();
    if zn >= 1.0 {
        return Err(QError::Nonconvergent(zn));
    }
    let mut qm = 1.0;
    let mut m = 0usize;
    loop {
        // ratio bound for all later terms, valid once every |L| q^m < 1
        let lower_ok = lower.iter().all(|l| l.norm() * qm < 1.0);
        if lower_ok && m > 0 {
            let mut rho = zn;
            for u in upper {
                rho *= 1.0 + u.norm() * qm;
            }
            for l in lower {
                rho /= 1.0 - l.norm() * qm;
            }
            rho /= 1.0 - qm * q.0;
            if rho < 1.0 {
                let tail = t.norm() * rho / (1.0 - rho);
                let s = acc.value();
                if tail <= tol * s.norm() || tail == 0.0 || m >= MAX_TERMS {
                    return Ok(SeriesResult { value: s, abs_error_bound: tail, terms_used: m + 1, near_zero: false });
                }
            }
        }
        let mut num = z;
        for &u in upper {
            num *= c(1.0) - u * qm;
        }
        let mut den = c(1.0 - qm * q.0);
        for (j, &l) in lower.iter().enumerate() {
            let f = c(1.0) - l * qm;
            if f.norm() < pole_guard {
                return Err(QError::PoleInDenominator { param: j, term: m });
            }
            den *= f;
        }
        t = t * num / den;
        acc.add(t);
        qm *= q.0;
        m += 1;
    }
}

pub fn phi21(a: Complex64, b: Complex64, cc: Complex64, z: Complex64, q: QBase, tol: f64) -> Result<SeriesResult, QError> {
    basic_hypergeometric(&[a, b], &[cc], z, q, tol, None)
}

pub fn phi32(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    d: Complex64,
    e: Complex64,
    z: Complex64,
    q: QBase,
    tol: f64,
) -> Result<SeriesResult, QError> {
    basic_hypergeometric(&[a, b, cc], &[d, e], z, q, tol, None)
}

/// `3φ2(q^{-n}, b, c; d, e | q)`, summed exactly over `0..=n`.
pub fn phi32_terminating(n: usize, b: Complex64, cc: Complex64, d: Complex64, e: Complex64, q: QBase) -> Result<Complex64, QError> {
    let a = c(q.pow(-(n as i64)));
    basic_hypergeometric(&[a, b, cc], &[d, e], c(q.0), q, DEFAULT_TOL, Some(n)).map(|r| r.value)
}

/// Both sides of the three-term 3φ2 reversal identity
/// `3φ2(q^-n, Bq^-n, Cq^-n; Dq^-n, Eq^-n | q)
///   = (DE/BC)_n (BC/D)^n q^{-n^2} / (Eq^-n)_n · 3φ2(q^-n, D/B, D/C; Dq^-n, DE/BC | q)`.
pub fn phi32_transform_iii11(
    n: usize,
    b: Complex64,
    cc: Complex64,
    d: Complex64,
    e: Complex64,
    q: QBase,
) -> Result<(Complex64, Complex64), QError> {
    let qn = q.pow(-(n as i64));
    let lhs = phi32_terminating(n, b * qn, cc * qn, d * qn, e * qn, q)?;
    let debc = d * e / (b * cc);
    let inner = phi32_terminating(n, d / b, d / cc, d * qn, debc, q)?;
    let en = qpochhammer_finite(e * qn, n, q);
    if en.norm() < 1e-300 {
        return Err(QError::PoleInDenominator { param: 1, term: n });
    }
    let pref = qpochhammer_finite(debc, n, q) * (b * cc / d).powi(n as i32) * q.pow(-((n * n) as i64)) / en;
    Ok((lhs, pref * inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q05() -> QBase {
        QBase::new(0.5).unwrap()
    }

    #[test]
    fn rejects_bad_base() {
        assert!(QBase::new(1.0).is_err());
        assert!(QBase::new(0.0).is_err());
        assert!(QBase::new(-0.2).is_err());
    }

    #[test]
    fn finite_products() {
        let q = q05();
        assert_eq!(qpochhammer_finite(c(7.3), 0, q), c(1.0));
        assert_eq!(qpochhammer_finite(c(1.0), 3, q), c(0.0));
        assert!((qpochhammer_finite(c(0.5), 2, q) - c(0.375)).norm() < 1e-16);
    }

    #[test]
    fn infinite_products() {
        let q = q05();
        assert_eq!(qpochhammer_infinite(c(0.0), q, 1e-14).unwrap().value, c(1.0));
        let oracle: f64 = (1..=60).map(|m| 1.0 - 0.5f64.powi(m)).product();
        let r = qpochhammer_infinite(c(0.5), q, 1e-15).unwrap();
        assert!((r.value.re - oracle).abs() < 1e-15);
        assert!(r.abs_error_bound < 1e-15);
        let z = qpochhammer_infinite(c(2.0), q, 1e-14).unwrap();
        assert_eq!(z.value, c(0.0));
        assert!(qpochhammer_infinite(c(0.3), q, 0.0).is_err());
    }

    #[test]
    fn theta_values() {
        let q = q05();
        assert_eq!(theta_q(c(0.25), q, 1e-14).unwrap().value, c(0.0));
        let direct: f64 = (0..60).map(|m| (1.0 + 0.5f64.powi(m)) * (1.0 + 0.5f64.powi(m + 1))).product();
        let t = theta_q(c(-1.0), q, 1e-15).unwrap().value;
        assert!((t.re - direct).abs() < 1e-13 * direct);
        let oracle2: f64 = 2.0 * (1..60).map(|m| 1.0 + 0.5f64.powi(m)).product::<f64>().powi(2);
        assert!((t.re - oracle2).abs() < 1e-13 * oracle2);
        let u = c(-1.3);
        let lhs = theta_q(u * 0.5, q, 1e-15).unwrap().value;
        let rhs = -theta_q(u, q, 1e-15).unwrap().value / u;
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        assert_eq!(theta_q(c(0.0), q, 1e-14), Err(QError::ZeroArgument));
    }

    #[test]
    fn phi21_cases() {
        let q = q05();
        assert_eq!(phi21(c(1.0), c(0.3), c(0.7), c(0.9), q, 1e-14).unwrap().value, c(1.0));
        assert_eq!(phi21(c(0.2), c(0.3), c(0.7), c(0.0), q, 1e-14).unwrap().value, c(1.0));
        // direct 200-term oracle
        let (a, b, cc, z) = (0.5, 0.5, 0.25, 0.3);
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..200 {
            let qn = 0.5f64.powi(n);
            t *= (1.0 - a * qn) * (1.0 - b * qn) / ((1.0 - cc * qn) * (1.0 - 0.5 * qn)) * z;
            s += t;
        }
        let r = phi21(c(a), c(b), c(cc), c(z), q, 1e-15).unwrap();
        assert!((r.value.re - s).abs() < 1e-14);
        assert!(matches!(phi21(c(0.2), c(0.3), c(0.7), c(1.2), q, 1e-14), Err(QError::Nonconvergent(_))));
        // terminating beats |Z| >= 1
        assert!(phi21(c(4.0), c(0.3), c(0.7), c(3.0), q, 1e-14).is_ok());
        assert!(matches!(phi21(c(0.2), c(0.3), c(4.0), c(0.5), q, 1e-14), Err(QError::PoleInDenominator { .. })));
    }

    #[test]
    fn phi32_small_cases() {
        let q = q05();
        let (b, cc, d, e) = (c(0.3), c(-0.7), c(0.2), c(1.7));
        assert_eq!(phi32(c(1.0), b, cc, d, e, c(0.5), q, 1e-14).unwrap().value, c(1.0));
        let two = c(1.0) + (c(1.0) - c(2.0) * 1.0) * (c(1.0) - b) * (c(1.0) - cc) / ((c(1.0) - d) * (c(1.0) - e) * 0.5) * 0.5;
        let r = phi32(c(2.0), b, cc, d, e, c(0.5), q, 1e-14).unwrap();
        assert!((r.value - two).norm() < 1e-15);
    }

    #[test]
    fn iii11_reference() {
        let q = q05();
        let (l, r) = phi32_transform_iii11(0, c(0.2), c(-0.3), c(2.5), c(3.1), q).unwrap();
        assert!((l - c(1.0)).norm() < 1e-15 && (r - c(1.0)).norm() < 1e-15);
        let (l, r) = phi32_transform_iii11(3, c(0.2), c(-0.3), c(2.5), c(3.1), q).unwrap();
        assert!((l - r).norm() < 1e-12 * l.norm().max(1.0), "{l} {r}");
    }
}
