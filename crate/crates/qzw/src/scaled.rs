//! Complex numbers carried as `mantissa * exp(log_scale)`.
//!
//! Weights and norms of the ensembles at N around 30 range over several
//! hundred decades, far outside binary64. Products and quotients are exact
//! in the exponent; only sums need care.

use num_complex::Complex64;
use std::ops::{Div, Mul, Neg};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    mant: Complex64,
    log_scale: f64,
}

impl Scaled {
    pub const ONE: Scaled = Scaled { mant: Complex64::new(1.0, 0.0), log_scale: 0.0 };
    pub const ZERO: Scaled = Scaled { mant: Complex64::new(0.0, 0.0), log_scale: 0.0 };

    pub fn new(mant: Complex64, log_scale: f64) -> Self {
        Scaled { mant, log_scale }.normalized()
    }

    pub fn from_real(x: f64) -> Self {
        Scaled::new(Complex64::new(x, 0.0), 0.0)
    }

    /// `exp(ln)` as a positive real scaled number.
    pub fn from_ln(ln: f64) -> Self {
        Scaled { mant: Complex64::new(1.0, 0.0), log_scale: ln }
    }

    fn normalized(self) -> Self {
        let a = self.mant.norm();
        if a == 0.0 || !a.is_finite() {
            return Scaled { mant: self.mant, log_scale: if a == 0.0 { 0.0 } else { self.log_scale } };
        }
        if (1e-30..1e30).contains(&a) {
            return self;
        }
        let l = a.ln();
        Scaled { mant: self.mant / a, log_scale: self.log_scale + l }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.norm() == 0.0
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mant
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.mant.norm().ln() + self.log_scale
    }

    /// Unit-modulus phase factor (1 for zero).
    pub fn phase(&self) -> Complex64 {
        let a = self.mant.norm();
        if a == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.mant / a
        }
    }

    /// Collapses to a binary64 complex; may overflow to inf or underflow to 0.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.phase() * self.ln_abs().exp()
    }

    pub fn to_real(&self) -> f64 {
        self.to_complex().re
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Scaled::ONE;
        }
        let a = self.mant.norm();
        let ph = self.mant / a;
        Scaled { mant: ph.powi(n), log_scale: (a.ln() + self.log_scale) * n as f64 }
    }

    pub fn sqrt(&self) -> Self {
        let a = self.mant.norm();
        if a == 0.0 {
            return Scaled::ZERO;
        }
        Scaled { mant: (self.mant / a).sqrt(), log_scale: 0.5 * (a.ln() + self.log_scale) }
    }

    pub fn inv(&self) -> Self {
        Scaled::ONE / *self
    }

    /// Sum of two scaled numbers, aligned to the larger scale.
    pub fn add(&self, other: &Scaled) -> Scaled {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (la, lb) = (self.ln_abs(), other.ln_abs());
        let base = la.max(lb);
        let a = self.phase() * (la - base).exp();
        let b = other.phase() * (lb - base).exp();
        Scaled::new(a + b, base)
    }
}

impl From<Complex64> for Scaled {
    fn from(z: Complex64) -> Self {
        Scaled::new(z, 0.0)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant * rhs.mant, self.log_scale + rhs.log_scale)
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Complex64) -> Scaled {
        Scaled::new(self.mant * rhs, self.log_scale)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant / rhs.mant, self.log_scale - rhs.log_scale)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { mant: -self.mant, log_scale: self.log_scale }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_far_outside_double_range() {
        let big = Scaled::from_ln(800.0);
        let small = Scaled::from_ln(-790.0);
        let p = big * small;
        assert!((p.to_real() - 10f64.exp()).abs() < 1e-9 * 10f64.exp());
        assert!(big.to_real().is_infinite());
    }

    #[test]
    fn add_and_roots() {
        let a = Scaled::from_real(-3.0);
        let b = Scaled::from_real(5.0);
        assert!((a.add(&b).to_real() - 2.0).abs() < 1e-15);
        let s = Scaled::from_real(16.0).sqrt();
        assert!((s.to_real() - 4.0).abs() < 1e-14);
        let p = Scaled::from(Complex64::new(0.0, 2.0)).powi(3);
        assert!((p.to_complex() - Complex64::new(0.0, -8.0)).norm() < 1e-13);
    }
}
