//! Basic hypergeometric building blocks.
//!
//! `cargo run --release --example q_special`

use qzw::qspecial::{phi21, phi32_terminating, qpoch_inf, qpochhammer_finite, theta_q, QBase};
use qzw::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = QBase::new(0.5)?;
    let a = Complex64::new(0.3, 0.2);
    println!("(a;q)_5 = {:.12}", qpochhammer_finite(a, 5, q));
    println!("(a;q)_∞ = {:.12}", qpoch_inf(a, q));

    let u = Complex64::new(1.7, -0.4);
    let th = theta_q(u, q, 1e-16)?.value;
    let shifted = theta_q(u * q.value(), q, 1e-16)?.value;
    println!("θ(u) = {th:.12}, θ(qu)/θ(u) = {:.12}, -1/u = {:.12}", shifted / th, -1.0 / u);

    // q-Gauss: 2φ1(a,b;c;c/(ab)) = (c/a, c/b; q)_∞ / (c, c/(ab); q)_∞
    let (a, b, c) = (Complex64::new(1.5, 0.5), Complex64::new(2.0, -0.3), Complex64::new(0.6, 0.3));
    let z = c / (a * b);
    let lhs = phi21(a, b, c, z, q, 1e-16)?.value;
    let rhs = qpoch_inf(c / a, q) * qpoch_inf(c / b, q) / (qpoch_inf(c, q) * qpoch_inf(z, q));
    println!("q-Gauss: {lhs:.12} vs {rhs:.12}");

    let t = phi32_terminating(4, Complex64::new(1.3, 0.4), Complex64::new(0.7, -0.2), Complex64::new(2.5, 0.5), Complex64::new(1.7, -0.3), q)?;
    println!("3φ2(q^-4, ...; q) = {t:.12}");
    Ok(())
}
