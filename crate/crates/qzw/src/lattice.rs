//! The double q-lattice, its intervals, configurations and interlacing.
//!
//! Points are stored as (branch, integer exponent), so order and interval
//! membership never touch floating point. Comparing absolute values across
//! branches reduces to comparing an integer with the precomputed real number
//! `log_q(zeta_plus / |zeta_minus|)`.

use crate::qspecial::{CompensatedSum, QBase, QError};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error(transparent)]
    Base(#[from] QError),
    #[error("need zeta_minus < 0 < zeta_plus, got {0} and {1}")]
    BadZeta(f64, f64),
    #[error("interval endpoints out of order: {0} must be < {1}")]
    BadOrder(String, String),
    #[error("configuration sizes {0} and {1} do not differ by one")]
    SizeMismatch(usize, usize),
    #[error("configuration is not strictly increasing or has repeated points")]
    NotIncreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub branch: Branch,
    pub m: i64,
}

impl LatticePoint {
    pub fn plus(m: i64) -> Self {
        LatticePoint { branch: Branch::Plus, m }
    }

    pub fn minus(m: i64) -> Self {
        LatticePoint { branch: Branch::Minus, m }
    }

    pub fn is_positive(&self) -> bool {
        self.branch == Branch::Plus
    }

    pub fn sign(&self) -> f64 {
        if self.is_positive() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn value(&self, p: &LatticeParams) -> f64 {
        p.zeta(self.branch) * p.q.pow(self.m)
    }

    pub fn abs_value(&self, p: &LatticeParams) -> f64 {
        self.value(p).abs()
    }

    pub fn ln_abs(&self, p: &LatticeParams) -> f64 {
        p.zeta(self.branch).abs().ln() + self.m as f64 * p.q.ln()
    }

    /// Neighbor further from zero along the same branch.
    pub fn outward(&self) -> Self {
        LatticePoint { branch: self.branch, m: self.m - 1 }
    }

    /// Neighbor closer to zero along the same branch.
    pub fn inward(&self) -> Self {
        LatticePoint { branch: self.branch, m: self.m + 1 }
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.branch, other.branch) {
            (Branch::Minus, Branch::Plus) => Ordering::Less,
            (Branch::Plus, Branch::Minus) => Ordering::Greater,
            (Branch::Minus, Branch::Minus) => self.m.cmp(&other.m),
            (Branch::Plus, Branch::Plus) => other.m.cmp(&self.m),
        }
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.is_positive() { '+' } else { '-' };
        write!(f, "{s}q^{}", self.m)
    }
}

/// Parses the display form `+q^3`, `-q^-2`.
impl std::str::FromStr for LatticePoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("cannot parse lattice point `{s}`, expected e.g. +q^3 or -q^-2");
        let (branch, rest) = match s.chars().next() {
            Some('+') => (Branch::Plus, &s[1..]),
            Some('-') => (Branch::Minus, &s[1..]),
            _ => return Err(bad()),
        };
        let m = rest.strip_prefix("q^").ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?;
        Ok(LatticePoint { branch, m })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeParams {
    pub q: QBase,
    pub zeta_minus: f64,
    pub zeta_plus: f64,
    /// `log_q(zeta_plus / |zeta_minus|)`; an integer value means the two
    /// branches have points of equal modulus.
    kappa: f64,
    tie: Option<i64>,
}

impl LatticeParams {
    pub fn new(q: f64, zeta_minus: f64, zeta_plus: f64) -> Result<Self, LatticeError> {
        let q = QBase::new(q)?;
        if !(zeta_minus < 0.0 && zeta_plus > 0.0) || !zeta_minus.is_finite() || !zeta_plus.is_finite() {
            return Err(LatticeError::BadZeta(zeta_minus, zeta_plus));
        }
        let kappa = (zeta_plus / -zeta_minus).ln() / q.ln();
        let r = kappa.round();
        let tie = if (kappa - r).abs() < 1e-9 { Some(r as i64) } else { None };
        Ok(LatticeParams { q, zeta_minus, zeta_plus, kappa, tie })
    }

    /// q = 1/2, zeta = ±1.
    pub fn reference() -> Self {
        LatticeParams::new(0.5, -1.0, 1.0).unwrap()
    }

    pub fn zeta(&self, b: Branch) -> f64 {
        match b {
            Branch::Minus => self.zeta_minus,
            Branch::Plus => self.zeta_plus,
        }
    }

    /// Compares absolute values exactly.
    pub fn cmp_abs(&self, a: &LatticePoint, b: &LatticePoint) -> Ordering {
        if a.branch == b.branch {
            return b.m.cmp(&a.m);
        }
        // |ζ₋| q^m vs ζ₊ q^n: larger iff m - n < kappa
        let (mm, nn, flip) = match a.branch {
            Branch::Minus => (a.m, b.m, false),
            Branch::Plus => (b.m, a.m, true),
        };
        let d = mm - nn;
        let ord = match self.tie {
            Some(k) => k.cmp(&d),
            None => {
                if (d as f64) < self.kappa {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        };
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }

    /// Exponent of the point on branch `b` closest to modulus `v` from above
    /// (largest m with |ζ| q^m >= v).
    pub fn exponent_at_or_above(&self, b: Branch, v: f64) -> i64 {
        let z = self.zeta(b).abs();
        ((v / z).ln() / self.q.ln() + 1e-9).floor() as i64
    }

    /// Smallest m with |ζ| q^m <= v.
    pub fn exponent_at_or_below(&self, b: Branch, v: f64) -> i64 {
        let z = self.zeta(b).abs();
        ((v / z).ln() / self.q.ln() - 1e-9).ceil() as i64
    }
}

/// Truncation of infinite enumerations: keep points with
/// `cutoff <= |value| <= cap`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSpec {
    pub cutoff: f64,
    pub cap: f64,
}

impl TailSpec {
    pub fn default_for(p: &LatticeParams) -> Self {
        let lo = p.zeta_plus.min(-p.zeta_minus);
        let hi = p.zeta_plus.max(-p.zeta_minus);
        TailSpec { cutoff: p.q.pow(64) * lo, cap: p.q.pow(-64) * hi }
    }

    pub fn with_cutoff(p: &LatticeParams, cutoff: f64) -> Self {
        TailSpec { cutoff, ..TailSpec::default_for(p) }
    }

    /// Largest exponent kept on the branch (closest to zero).
    pub fn inner_exponent(&self, p: &LatticeParams, b: Branch) -> i64 {
        p.exponent_at_or_above(b, self.cutoff)
    }

    /// Smallest exponent kept on the branch (furthest from zero).
    pub fn outer_exponent(&self, p: &LatticeParams, b: Branch) -> i64 {
        p.exponent_at_or_below(b, self.cap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    Point(LatticePoint),
    PosInf,
}

impl Endpoint {
    fn lt(&self, other: &Endpoint) -> bool {
        match (self, other) {
            (Endpoint::NegInf, Endpoint::NegInf) | (Endpoint::PosInf, Endpoint::PosInf) => false,
            (Endpoint::NegInf, _) | (_, Endpoint::PosInf) => true,
            (_, Endpoint::NegInf) | (Endpoint::PosInf, _) => false,
            (Endpoint::Point(a), Endpoint::Point(b)) => a < b,
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::Point(p) => !p.is_positive(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::PosInf => write!(f, "+inf"),
            Endpoint::Point(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalPoints {
    pub points: Vec<LatticePoint>,
    pub truncated_near_zero: bool,
    pub truncated_at_infinity: bool,
}

fn minus_range(lo: i64, hi: i64) -> impl Iterator<Item = LatticePoint> {
    (lo..=hi).map(LatticePoint::minus)
}

fn plus_range(outer: i64, inner: i64) -> impl Iterator<Item = LatticePoint> {
    // increasing values: exponents from inner (small values) down to outer
    (outer..=inner).rev().map(LatticePoint::plus)
}

/// Membership in `I(a,b)`: `[a,b)` for `a<b<0`, `[a,b]` for `a<0<b`,
/// `(a,b]` for `0<a<b`.
pub fn in_interval_i(x: &LatticePoint, a: &LatticePoint, b: &LatticePoint) -> bool {
    if !b.is_positive() {
        a <= x && x < b
    } else if !a.is_positive() {
        a <= x && x <= b
    } else {
        a < x && x <= b
    }
}

/// Membership in `Ĩ(a,b)`: `(a,b]` for `a<b<0`, `(a,b)` for `a<0<b`,
/// `[a,b)` for `0<a<b`; endpoints may be infinite.
pub fn in_interval_tilde(x: &LatticePoint, a: &Endpoint, b: &Endpoint) -> bool {
    let xe = Endpoint::Point(*x);
    let a_lt_x = a.lt(&xe);
    let x_lt_b = xe.lt(b);
    if b.is_negative() {
        a_lt_x && (x_lt_b || xe == *b)
    } else if !a.is_negative() {
        (a_lt_x || xe == *a) && x_lt_b
    } else {
        a_lt_x && x_lt_b
    }
}

pub fn interval_i(p: &LatticeParams, a: &LatticePoint, b: &LatticePoint, tail: &TailSpec) -> Result<IntervalPoints, LatticeError> {
    if a >= b {
        return Err(LatticeError::BadOrder(a.to_string(), b.to_string()));
    }
    let mut out = IntervalPoints { points: vec![], truncated_near_zero: false, truncated_at_infinity: false };
    match (a.branch, b.branch) {
        (Branch::Minus, Branch::Minus) => out.points.extend(minus_range(a.m, b.m - 1)),
        (Branch::Plus, Branch::Plus) => out.points.extend(plus_range(b.m, a.m - 1)),
        _ => {
            let im = tail.inner_exponent(p, Branch::Minus).max(a.m - 1);
            let ip = tail.inner_exponent(p, Branch::Plus).max(b.m - 1);
            out.points.extend(minus_range(a.m, im));
            out.points.extend(plus_range(b.m, ip));
            out.truncated_near_zero = true;
        }
    }
    Ok(out)
}

pub fn interval_i_tilde(p: &LatticeParams, a: &Endpoint, b: &Endpoint, tail: &TailSpec) -> Result<IntervalPoints, LatticeError> {
    if !a.lt(b) {
        return Err(LatticeError::BadOrder(a.to_string(), b.to_string()));
    }
    let mut out = IntervalPoints { points: vec![], truncated_near_zero: false, truncated_at_infinity: false };
    let minus_outer = || tail.outer_exponent(p, Branch::Minus);
    let plus_outer = || tail.outer_exponent(p, Branch::Plus);
    if b.is_negative() {
        let Endpoint::Point(bp) = b else { unreachable!() };
        let lo = match a {
            Endpoint::Point(ap) => ap.m + 1,
            _ => {
                out.truncated_at_infinity = true;
                minus_outer().min(bp.m)
            }
        };
        out.points.extend(minus_range(lo, bp.m));
    } else if !a.is_negative() {
        let Endpoint::Point(ap) = a else { unreachable!() };
        let outer = match b {
            Endpoint::Point(bp) => bp.m + 1,
            _ => {
                out.truncated_at_infinity = true;
                plus_outer().min(ap.m)
            }
        };
        out.points.extend(plus_range(outer, ap.m));
    } else {
        let lo = match a {
            Endpoint::Point(ap) => ap.m + 1,
            _ => {
                out.truncated_at_infinity = true;
                minus_outer()
            }
        };
        let outer = match b {
            Endpoint::Point(bp) => bp.m + 1,
            _ => {
                out.truncated_at_infinity = true;
                plus_outer()
            }
        };
        let im = tail.inner_exponent(p, Branch::Minus).max(lo - 1);
        let ip = tail.inner_exponent(p, Branch::Plus).max(outer - 1);
        out.points.extend(minus_range(lo, im));
        out.points.extend(plus_range(outer, ip));
        out.truncated_near_zero = true;
    }
    Ok(out)
}

/// A finite, strictly increasing set of lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatticePoint>", into = "Vec<LatticePoint>")]
pub struct Configuration {
    points: Vec<LatticePoint>,
}

impl TryFrom<Vec<LatticePoint>> for Configuration {
    type Error = LatticeError;
    fn try_from(v: Vec<LatticePoint>) -> Result<Self, Self::Error> {
        Configuration::new(v)
    }
}

impl From<Configuration> for Vec<LatticePoint> {
    fn from(c: Configuration) -> Self {
        c.points
    }
}

impl Configuration {
    pub fn new(points: Vec<LatticePoint>) -> Result<Self, LatticeError> {
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LatticeError::NotIncreasing);
        }
        Ok(Configuration { points })
    }

    pub fn from_unsorted(mut points: Vec<LatticePoint>) -> Result<Self, LatticeError> {
        points.sort();
        Configuration::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn values(&self, p: &LatticeParams) -> Vec<f64> {
        self.points.iter().map(|x| x.value(p)).collect()
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.points.binary_search(x).is_ok()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// `Y ≺ X`: every `y_i` lies in `I(x_i, x_{i+1})`.
pub fn interlace(x: &Configuration, y: &Configuration) -> Result<bool, LatticeError> {
    if x.len() != y.len() + 1 {
        return Err(LatticeError::SizeMismatch(x.len(), y.len()));
    }
    let xs = x.points();
    Ok(y.points().iter().enumerate().all(|(i, yi)| in_interval_i(yi, &xs[i], &xs[i + 1])))
}

/// Same relation through the `Ĩ` intervals of `Y`: each of the `N+1` sets
/// `Ĩ(y_{i-1}, y_i)` holds exactly one point of `X`.
pub fn interlace_tilde(x: &Configuration, y: &Configuration) -> Result<bool, LatticeError> {
    if x.len() != y.len() + 1 {
        return Err(LatticeError::SizeMismatch(x.len(), y.len()));
    }
    let mut ends = vec![Endpoint::NegInf];
    ends.extend(y.points().iter().map(|p| Endpoint::Point(*p)));
    ends.push(Endpoint::PosInf);
    Ok(ends.windows(2).all(|w| x.points().iter().filter(|xi| in_interval_tilde(xi, &w[0], &w[1])).count() == 1))
}

/// Points ordered by decreasing modulus, positive first on ties.
#[derive(Clone, Debug, PartialEq)]
pub struct VariationalSeries {
    pub terms: Vec<LatticePoint>,
}

pub fn variational_series(p: &LatticeParams, x: &Configuration) -> VariationalSeries {
    let mut terms = x.points().to_vec();
    terms.sort_by(|a, b| p.cmp_abs(b, a).then_with(|| b.branch.cmp_pos_first(&a.branch)));
    VariationalSeries { terms }
}

impl Branch {
    fn cmp_pos_first(&self, other: &Branch) -> Ordering {
        // Plus sorts first, so it compares as "greater" in descending order
        match (self, other) {
            (Branch::Plus, Branch::Minus) => Ordering::Greater,
            (Branch::Minus, Branch::Plus) => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

impl VariationalSeries {
    /// `|x_(k)| <= |x_(1)| q^{floor((k-1)/2)}` for every term.
    pub fn decay_bound_holds(&self, p: &LatticeParams) -> bool {
        let Some(first) = self.terms.first() else { return true };
        let l1 = first.ln_abs(p);
        self.terms.iter().enumerate().all(|(i, t)| t.ln_abs(p) <= l1 + (i / 2) as f64 * p.q.ln() + 1e-12)
    }

    /// Configuration formed by the first `n` terms.
    pub fn prefix(&self, n: usize) -> Configuration {
        Configuration::from_unsorted(self.terms[..n.min(self.terms.len())].to_vec()).expect("distinct terms")
    }
}

/// Stopping rule for adaptive sums along the lattice.
#[derive(Clone, Copy, Debug)]
pub struct SumOptions {
    /// A ray stops once `patience` consecutive terms are below
    /// `rel_tol` times the accumulated absolute sum of that ray.
    pub rel_tol: f64,
    pub patience: usize,
    pub max_points: usize,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions { rel_tol: 1e-17, patience: 4, max_points: 4000 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LatticeSum {
    pub value: Complex64,
    /// Geometric extrapolation of the omitted terms from the last observed
    /// term ratio.
    pub tail_estimate: f64,
    pub points: usize,
}

impl LatticeSum {
    fn merge(self, o: LatticeSum) -> LatticeSum {
        LatticeSum { value: self.value + o.value, tail_estimate: self.tail_estimate + o.tail_estimate, points: self.points + o.points }
    }
}

/// Sums `f` along one branch starting at exponent `m0` and moving by `step`
/// (`-1` outward to infinity, `+1` inward to zero).
pub fn sum_ray<F: Fn(LatticePoint) -> Complex64>(branch: Branch, m0: i64, step: i64, f: &F, opts: &SumOptions) -> LatticeSum {
    let mut acc = CompensatedSum::new();
    let mut abs_acc = 0.0;
    let mut quiet = 0;
    let mut prev = f64::NAN;
    let mut ratio: f64 = 0.0;
    let mut last = 0.0;
    let mut m = m0;
    let mut count = 0;
    while count < opts.max_points {
        let t = f(LatticePoint { branch, m });
        count += 1;
        let a = t.norm();
        acc.add(t);
        abs_acc += a;
        if prev > 0.0 {
            ratio = a / prev;
        } else if prev == 0.0 && a == 0.0 {
            ratio = 0.0;
        }
        prev = a;
        last = a;
        if a <= opts.rel_tol * abs_acc {
            quiet += 1;
            if quiet >= opts.patience && ratio < 1.0 {
                break;
            }
        } else {
            quiet = 0;
        }
        m += step;
    }
    let tail = if ratio < 1.0 { last * ratio / (1.0 - ratio) } else { f64::INFINITY };
    LatticeSum { value: acc.value(), tail_estimate: tail, points: count }
}

/// Sum of `f` over the whole lattice.
pub fn sum_over_lattice<F: Fn(LatticePoint) -> Complex64 + Sync>(f: &F, opts: &SumOptions) -> LatticeSum {
    [Branch::Minus, Branch::Plus]
        .iter()
        .map(|&b| sum_ray(b, -1, -1, f, opts).merge(sum_ray(b, 0, 1, f, opts)))
        .reduce(LatticeSum::merge)
        .unwrap()
}

/// JSON form of a configuration together with its lattice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigurationFile {
    pub q: f64,
    pub zeta_minus: f64,
    pub zeta_plus: f64,
    pub points: Vec<LatticePoint>,
}

impl ConfigurationFile {
    pub fn parts(&self) -> Result<(LatticeParams, Configuration), LatticeError> {
        Ok((LatticeParams::new(self.q, self.zeta_minus, self.zeta_plus)?, Configuration::from_unsorted(self.points.clone())?))
    }
}

/// `n` distinct points drawn uniformly from exponents `m_lo..=m_hi` on both branches.
pub fn random_configuration<R: Rng + ?Sized>(n: usize, m_lo: i64, m_hi: i64, rng: &mut R) -> Configuration {
    let width = (m_hi - m_lo + 1) as usize;
    assert!(n <= 2 * width, "window too small");
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let k = rng.random_range(0..2 * width);
        let m = m_lo + (k % width) as i64;
        let p = if k < width { LatticePoint::minus(m) } else { LatticePoint::plus(m) };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    Configuration::from_unsorted(pts).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: &[(char, i64)]) -> Configuration {
        Configuration::from_unsorted(
            v.iter().map(|&(s, m)| if s == '+' { LatticePoint::plus(m) } else { LatticePoint::minus(m) }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn order_matches_values() {
        let p = LatticeParams::new(0.6, -1.7, 0.3).unwrap();
        let pts: Vec<_> = (-4..5).flat_map(|m| [LatticePoint::minus(m), LatticePoint::plus(m)]).collect();
        for a in &pts {
            for b in &pts {
                assert_eq!(a.cmp(b), a.value(&p).partial_cmp(&b.value(&p)).unwrap());
                assert_eq!(p.cmp_abs(a, b), a.abs_value(&p).partial_cmp(&b.abs_value(&p)).unwrap());
            }
        }
    }

    #[test]
    fn abs_ties_are_exact() {
        let p = LatticeParams::new(0.5, -4.0, 1.0).unwrap();
        assert_eq!(p.cmp_abs(&LatticePoint::minus(2), &LatticePoint::plus(0)), Ordering::Equal);
        assert_eq!(p.cmp_abs(&LatticePoint::minus(3), &LatticePoint::plus(0)), Ordering::Less);
    }

    #[test]
    fn interval_examples() {
        let p = LatticeParams::reference();
        let t = TailSpec::default_for(&p);
        let r = interval_i(&p, &LatticePoint::minus(0), &LatticePoint::minus(2), &t).unwrap();
        assert_eq!(r.points, vec![LatticePoint::minus(0), LatticePoint::minus(1)]);
        let r = interval_i(&p, &LatticePoint::plus(2), &LatticePoint::plus(0), &t).unwrap();
        assert_eq!(r.points, vec![LatticePoint::plus(1), LatticePoint::plus(0)]);
        let t2 = TailSpec::with_cutoff(&p, 0.2);
        let r = interval_i(&p, &LatticePoint::minus(0), &LatticePoint::plus(0), &t2).unwrap();
        let vals: Vec<f64> = r.points.iter().map(|x| x.value(&p)).collect();
        assert_eq!(vals, vec![-1.0, -0.5, -0.25, 0.25, 0.5, 1.0]);
        assert!(r.truncated_near_zero);
        assert!(interval_i(&p, &LatticePoint::plus(0), &LatticePoint::plus(1), &t).is_err());
    }

    #[test]
    fn tilde_examples() {
        let p = LatticeParams::reference();
        let t = TailSpec::default_for(&p);
        let e = |x: LatticePoint| Endpoint::Point(x);
        let r = interval_i_tilde(&p, &e(LatticePoint::minus(0)), &e(LatticePoint::minus(2)), &t).unwrap();
        assert_eq!(r.points, vec![LatticePoint::minus(1), LatticePoint::minus(2)]);
        let r = interval_i_tilde(&p, &e(LatticePoint::plus(2)), &e(LatticePoint::plus(0)), &t).unwrap();
        assert_eq!(r.points, vec![LatticePoint::plus(2), LatticePoint::plus(1)]);
        let r = interval_i_tilde(&p, &Endpoint::NegInf, &e(LatticePoint::minus(1)), &t).unwrap();
        assert_eq!(*r.points.last().unwrap(), LatticePoint::minus(1));
        assert_eq!(r.points[0], LatticePoint::minus(-64));
        assert!(r.truncated_at_infinity);
    }

    #[test]
    fn interlace_examples() {
        let x = cfg(&[('-', 0), ('+', 0)]);
        assert!(interlace(&x, &cfg(&[('+', 0)])).unwrap());
        assert!(!interlace(&cfg(&[('-', 0), ('-', 1)]), &cfg(&[('-', 1)])).unwrap());
        assert!(!interlace(&cfg(&[('+', 1), ('+', 0)]), &cfg(&[('+', 1)])).unwrap());
        assert!(interlace(&x, &x).is_err());
    }

    #[test]
    fn variational_examples() {
        let p = LatticeParams::reference();
        let v = variational_series(&p, &cfg(&[('-', 0), ('+', 1), ('+', 0)]));
        assert_eq!(v.terms, vec![LatticePoint::plus(0), LatticePoint::minus(0), LatticePoint::plus(1)]);
        let v = variational_series(&p, &cfg(&[('-', 1), ('+', 2), ('+', 0)]));
        assert_eq!(v.terms, vec![LatticePoint::plus(0), LatticePoint::minus(1), LatticePoint::plus(2)]);
        assert!(v.decay_bound_holds(&p));
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"q":0.5,"zeta_minus":-1,"zeta_plus":1,"points":[{"branch":"+","m":3},{"branch":"-","m":0}]}"#;
        let f: ConfigurationFile = serde_json::from_str(s).unwrap();
        let (_, c) = f.parts().unwrap();
        assert_eq!(c.points()[0], LatticePoint::minus(0));
        let back = serde_json::to_string(&c).unwrap();
        assert_eq!(back, r#"[{"branch":"-","m":0},{"branch":"+","m":3}]"#);
    }
}
