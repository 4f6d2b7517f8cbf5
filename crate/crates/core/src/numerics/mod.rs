//! Arbitrary-precision substrate.
//!
//! Real and complex values are MPFR/MPC numbers ([`BigReal`], [`BigComplex`]);
//! every value carries its own precision in bits. When two values of
//! different precision meet, callers construct the result at the smaller of
//! the two (see [`common_prec`]).

mod bessel;
mod precision;
mod roots;

pub use bessel::{bessel_i_half, bessel_i_three_half, bessel_j_half_odd, LANDAU_CONSTANT};
pub use precision::PrecisionPolicy;
pub use roots::{e_of, e_of_rational, RootOfUnityAccumulator, RootTable};

pub type BigReal = rug::Float;
pub type BigComplex = rug::Complex;

/// Precision for a binary operation on `a` and `b`: the smaller of the two.
pub fn common_prec(a: &BigReal, b: &BigReal) -> u32 {
    a.prec().min(b.prec())
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)` for complex values.
pub fn close(a: &BigComplex, b: &BigComplex, tol: &BigReal) -> bool {
    let prec = a.prec().0.min(b.prec().0);
    let diff = BigComplex::with_val(prec, a - b).abs().real().clone();
    let scale = a
        .clone()
        .abs()
        .real()
        .clone()
        .max(b.clone().abs().real())
        .max(&BigReal::with_val(prec, 1));
    diff <= BigReal::with_val(prec, tol * scale)
}

/// `2^exp` as a float of the given precision.
pub fn pow2(exp: i32, prec: u32) -> BigReal {
    BigReal::with_val(prec, 1) << exp
}

/// Fixed significant-digit decimal rendering used in every tabular output.
pub fn fmt_real(x: &BigReal, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}
