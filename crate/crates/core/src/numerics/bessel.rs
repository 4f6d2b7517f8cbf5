use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Landau's uniform constant: `|J_ν(x)| ≤ c₀·x^{−1/3}` for all `ν > 0`, `x > 0`.
pub const LANDAU_CONSTANT: f64 = 0.7858;

const GUARD: u32 = 32;

fn positive(x: &Float, name: &str) -> Result<()> {
    if x.is_sign_positive() && !x.is_zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} needs x > 0, got {x}")))
    }
}

/// `√(2/(πx))` at precision `prec`.
fn half_prefactor(x: &Float, prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    let mut r = Float::with_val(prec, 2) / (pi * x);
    r.sqrt_mut();
    r
}

/// `I_{1/2}(x) = √(2/(πx))·sinh x`, at the precision of `x`.
pub fn bessel_i_half(x: &Float) -> Result<Float> {
    positive(x, "I_1/2")?;
    let prec = x.prec();
    let work = prec + GUARD;
    let xs = Float::with_val(work, x);
    let sh = xs.clone().sinh();
    Ok(Float::with_val(prec, half_prefactor(&xs, work) * sh))
}

/// `I_{3/2}(x) = √(2/(πx))·(cosh x − sinh x / x)`, at the precision of `x`.
///
/// For `x < 1` the bracket is summed as `Σ_{k≥1} 2k·x^{2k}/(2k+1)!`, which has
/// no cancellation.
pub fn bessel_i_three_half(x: &Float) -> Result<Float> {
    positive(x, "I_3/2")?;
    let prec = x.prec();
    let work = prec + GUARD;
    let xs = Float::with_val(work, x);
    let bracket = if xs < 1 {
        let x2 = Float::with_val(work, xs.square_ref());
        // term_k = x^{2k}/(2k+1)!; starts at k = 1 with x²/6.
        let mut term = Float::with_val(work, &x2 / 6u32);
        let mut sum = Float::with_val(work, &term * 2u32);
        let eps = Float::with_val(work, 1) >> (work as i32 + 4);
        let mut k = 1u32;
        loop {
            k += 1;
            term *= &x2;
            term /= (2 * k) * (2 * k + 1);
            let add = Float::with_val(work, &term * (2 * k));
            sum += &add;
            if add <= Float::with_val(work, &sum * &eps) {
                break;
            }
        }
        sum
    } else {
        let (sh, ch) = xs.clone().sinh_cosh(Float::new(work));
        ch - sh / &xs
    };
    Ok(Float::with_val(prec, half_prefactor(&xs, work) * bracket))
}

/// `J_ν(x)` for `ν = two_nu/2` with `two_nu` odd, by upward recurrence from
/// `J_{±1/2}`, carried at enough extra precision to absorb the growth of the
/// discarded `Y`-type component.
pub fn bessel_j_half_odd(two_nu: u32, x: &Float) -> Result<Float> {
    if two_nu.is_multiple_of(2) {
        return Err(Error::Domain(format!("order {two_nu}/2 is not half-odd")));
    }
    positive(x, "J_nu")?;
    let prec = x.prec();
    let nu = f64::from(two_nu) / 2.0;
    let xf = x.to_f64();
    let ratio = (2.0 * nu / xf).max(2.0);
    let extra = (2.0 * nu * ratio.log2().ceil()) as u32;
    let work = prec + extra + 64;

    let xs = Float::with_val(work, x);
    let pre = half_prefactor(&xs, work);
    let (s, c) = xs.clone().sin_cos(Float::new(work));
    let mut prev = Float::with_val(work, &pre * c); // J_{-1/2}
    let mut cur = Float::with_val(work, &pre * s); // J_{1/2}

    // J_{m+1/2+1} = ((2m+1)/x)·J_{m+1/2} − J_{m−1/2}
    for m in 0..(two_nu - 1) / 2 {
        let next = Float::with_val(work, &cur * (2 * m + 1)) / &xs - &prev;
        prev = cur;
        cur = next;
    }
    Ok(Float::with_val(prec, cur))
}
