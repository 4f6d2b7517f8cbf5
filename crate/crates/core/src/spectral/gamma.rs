//! Complex Γ by Stirling's series after an upward shift.

use std::sync::Mutex;

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// `B_0, …, B_{n}` from `Σ_{k=0}^{m} C(m+1, k)·B_k = 0`.
fn bernoulli_upto(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().expect("bernoulli cache");
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= n {
        let m = cache.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1); // C(m+1, 0)
        for (k, b) in cache.iter().enumerate() {
            acc += Rational::from(&binom * b.numer()) / b.denom();
            binom = binom * (m + 1 - k) as u64 / (k + 1) as u64;
        }
        // binom now equals C(m+1, m) = m + 1
        cache.push(-acc / binom);
    }
    cache[..=n].to_vec()
}

/// `Γ(z)` for `z` away from the poles `0, −1, −2, …`.
pub fn gamma(z: &Complex, prec: u32) -> Result<Complex> {
    let work = prec + 32;
    let re = z.real().to_f64();
    if z.imag().is_zero() && re <= 0.0 && re == re.round() {
        return Err(Error::Domain(format!("Γ has a pole at {re}")));
    }
    let radius = (work / 4).max(16);
    let terms = (work / 4).max(8) as usize;
    let shift = if re >= f64::from(radius) {
        0
    } else {
        (f64::from(radius) - re).ceil() as u32
    };

    // Γ(z) = Γ(z + shift) / (z(z+1)⋯(z+shift−1))
    let mut w = Complex::with_val(work, z);
    let mut prod = Complex::with_val(work, (1, 0));
    for _ in 0..shift {
        prod *= &w;
        w += 1u32;
    }
    if prod.real().is_zero() && prod.imag().is_zero() {
        return Err(Error::Domain("Γ argument at a pole".into()));
    }

    // ln Γ(w) ≈ (w − ½)ln w − w + ½ln 2π + Σ B_{2j}/(2j(2j−1)w^{2j−1})
    let bern = bernoulli_upto(2 * terms);
    let ln_w = Complex::with_val(work, w.ln_ref());
    let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
    let mut lg = Complex::with_val(work, &w - Float::with_val(work, 0.5)) * &ln_w - &w;
    lg += Float::with_val(work, two_pi.ln_ref()) / 2u32;
    let inv = Complex::with_val(work, w.recip_ref());
    let inv2 = Complex::with_val(work, inv.square_ref());
    let mut pow = inv; // w^{−(2j−1)}
    for j in 1..=terms {
        let b = &bern[2 * j];
        let coeff = Float::with_val(work, b) / ((2 * j) as u64 * (2 * j - 1) as u64);
        lg += Complex::with_val(work, &pow * &coeff);
        pow *= &inv2;
    }
    let g = lg.exp() / prod;
    Ok(Complex::with_val(prec, g))
}
