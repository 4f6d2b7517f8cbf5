use rug::{Complex, Float};
use serde::Serialize;

use super::KloostermanTerms;
use crate::arith::{divisor_count, gcd, omega_odd};
use crate::modular::Multiplier;
use crate::numerics::fmt_real;

/// `(c, n)` at which `|S(0, n, 2c, ψ)|` nearly attains the bound of
/// [`psi_weil_bound`]; the ratio is `0.99992…`.
pub const NEAR_EXTREMAL: (u64, i64) = (15552, 8278);

/// `2^{ω_o(c)}·√(2c)`, bounding `|A_{2c}(n − c(1+(−1)^c)/4)|`.
pub fn lehmer_bound(c: u64, prec: u32) -> Float {
    (Float::with_val(prec, 2 * c).sqrt()) << omega_odd(c)
}

/// `2^{ω_o(c)}·√(2c/(3, c))`, bounding `|S(0, n, 2c, ψ)|`.
pub fn psi_weil_bound(c: u64, prec: u32) -> Float {
    (Float::with_val(prec, 2 * c) / gcd(3, c)).sqrt() << omega_odd(c)
}

/// `τ(c)·(n, c)^{1/2}·c^{1/2}`, bounding `|S(n, n, c, (D/·)ν_θ)|`.
pub fn twisted_theta_weil_bound(n: i64, c: u64, prec: u32) -> Float {
    let g = gcd(n.unsigned_abs(), c);
    Float::with_val(prec, g * c).sqrt() * divisor_count(c)
}

/// One `c,n,re,im,bound,ratio` record; `c` is the modulus of the sum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub c: u64,
    pub n: i64,
    pub re: String,
    pub im: String,
    pub bound: String,
    pub ratio: String,
}

impl BoundRow {
    pub fn new(c: u64, n: i64, value: &Complex, bound: &Float) -> Self {
        let prec = bound.prec();
        let abs = Float::with_val(prec, value.abs_ref());
        let ratio = abs / bound;
        Self {
            c,
            n,
            re: fmt_real(value.real(), 20),
            im: fmt_real(value.imag(), 20),
            bound: fmt_real(bound, 20),
            ratio: fmt_real(&ratio, 20),
        }
    }
}

/// `|S(0, n, 2c, ψ)| / (2^{ω_o(c)}·√(2c/(3,c)))`.
pub fn near_extremal_ratio(c: u64, n: i64, prec: u32) -> Float {
    let s = KloostermanTerms::new(2 * c, Multiplier::PSI)
        .expect("even modulus")
        .sum(0, n)
        .eval(prec);
    Float::with_val(prec, s.abs_ref()) / psi_weil_bound(c, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::a_c_direct;

    const P: u32 = 128;

    fn slack() -> Float {
        Float::with_val(P, 1) + (Float::with_val(P, 1) >> 100)
    }

    #[test]
    fn lehmer_small_grid() {
        for c in 1..=60u64 {
            let bound = lehmer_bound(c, P) * slack();
            for n in 1..=30i64 {
                let shift = if c % 2 == 0 { (c / 2) as i64 } else { 0 };
                let a = a_c_direct(2 * c, n - shift).eval(P);
                assert!(Float::with_val(P, a.abs_ref()) <= bound, "c={c} n={n}");
            }
        }
    }

    #[test]
    fn psi_weil_small_grid() {
        for c in 1..=60u64 {
            let t = KloostermanTerms::new(2 * c, Multiplier::PSI).unwrap();
            let bound = psi_weil_bound(c, P) * slack();
            for n in 1..=30 {
                let s = t.sum(0, n).eval(P);
                assert!(Float::with_val(P, s.abs_ref()) <= bound, "c={c} n={n}");
            }
        }
    }

    #[test]
    fn twisted_theta_small_grid() {
        let nu = Multiplier::twisted_theta(12).unwrap();
        for c in (24..=24 * 12u64).step_by(24) {
            let t = KloostermanTerms::new(c, nu).unwrap();
            for n in 1..=12 {
                let s = t.sum(n, n).eval(P);
                assert!(Float::with_val(P, s.abs_ref()) <= twisted_theta_weil_bound(n, c, P) * slack());
            }
        }
    }

    #[test]
    fn bound_values() {
        // 15 = 3·5: two odd primes.
        let b = lehmer_bound(15, P).to_f64();
        assert!((b - 4.0 * 30f64.sqrt()).abs() < 1e-12);
        let b = psi_weil_bound(15, P).to_f64();
        assert!((b - 4.0 * 10f64.sqrt()).abs() < 1e-12);
        assert!((twisted_theta_weil_bound(6, 24, P).to_f64() - 8.0 * 144f64.sqrt()).abs() < 1e-12);
    }
}
