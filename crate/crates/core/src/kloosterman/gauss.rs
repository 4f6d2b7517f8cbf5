use rug::{Complex, Float};

use crate::arith::{gcd_i64, mod_inverse};
use crate::modular::{kronecker, MultiplierValue};
use crate::numerics::RootOfUnityAccumulator;

/// `𝒢(a, b, c) = Σ_{x mod c} e((ax² + bx)/c)` in closed form:
/// zero, or `coeff·√radicand·e(phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussSumValue {
    Zero,
    Closed {
        coeff: u64,
        radicand: u64,
        phase: MultiplierValue,
    },
}

impl GaussSumValue {
    pub fn eval(&self, prec: u32) -> Complex {
        match *self {
            GaussSumValue::Zero => Complex::new(prec),
            GaussSumValue::Closed { coeff, radicand, phase } => {
                let work = prec + 16;
                let r = Float::with_val(work, radicand).sqrt() * coeff;
                Complex::with_val(prec, phase.eval(work) * r)
            }
        }
    }

    fn scaled(self, factor: u64) -> Self {
        match self {
            GaussSumValue::Zero => self,
            GaussSumValue::Closed { coeff, radicand, phase } => GaussSumValue::Closed {
                coeff: coeff * factor,
                radicand,
                phase,
            },
        }
    }
}

/// `ε_d`: `1` for `d ≡ 1 (mod 4)`, `i` for `d ≡ 3 (mod 4)`.
fn epsilon(d: i64) -> MultiplierValue {
    if d.rem_euclid(4) == 1 {
        MultiplierValue::ONE
    } else {
        MultiplierValue::new(1, 4)
    }
}

fn inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        0
    } else {
        mod_inverse(a, m as u64).expect("unit") as i64
    }
}

/// Closed form for `(a, c) = 1`.
fn coprime(a: i64, b: i64, c: i64) -> GaussSumValue {
    if c % 2 == 1 {
        // e(−\overline{4a} b²/c)·ε_c·√c·(a/c)
        let inv = i128::from(inverse(4 * a.rem_euclid(c), c));
        let k = (-inv * i128::from(b) * i128::from(b)).rem_euclid(i128::from(c));
        let phase = MultiplierValue::new(k as i64, c as u64)
            .mul(&epsilon(c))
            .mul(&MultiplierValue::sign(kronecker(a, c)));
        GaussSumValue::Closed {
            coeff: 1,
            radicand: c as u64,
            phase,
        }
    } else if c % 4 == 0 {
        if b % 2 != 0 {
            return GaussSumValue::Zero;
        }
        // e(−ā(b/2)²/c)·(1+i)·ε_a^{−1}·√c·(c/a), with (1+i) = √2·e(1/8).
        let inv = i128::from(inverse(a, c));
        let h = i128::from(b / 2);
        let k = (-inv * h * h).rem_euclid(i128::from(c));
        let phase = MultiplierValue::new(k as i64, c as u64)
            .mul(&MultiplierValue::new(1, 8))
            .mul(&epsilon(a).conj())
            .mul(&MultiplierValue::sign(kronecker(c, a)));
        GaussSumValue::Closed {
            coeff: 1,
            radicand: 2 * c as u64,
            phase,
        }
    } else {
        // c = 2c′ with c′ odd: 𝒢(a,b,2c′) = 𝒢(ac′, b, 2)·𝒢(2a, b, c′), and
        // 𝒢(ac′, b, 2) = 1 + (−1)^{ac′+b}.
        if b % 2 == 0 {
            return GaussSumValue::Zero;
        }
        coprime(2 * a, b, c / 2).scaled(2)
    }
}

/// Reduce by `g = gcd(a, c)` (zero unless `g | b`), then evaluate in closed
/// form.
pub fn gauss_sum(a: i64, b: i64, c: u64) -> GaussSumValue {
    assert!(a != 0 && c > 0, "Gauss sum needs a ≠ 0, c > 0");
    let c = c as i64;
    let g = gcd_i64(a, c) as i64;
    if b % g != 0 {
        return GaussSumValue::Zero;
    }
    coprime(a / g, b / g, c / g).scaled(g as u64)
}

/// The defining sum, accumulated exactly over `c`-th roots of unity.
pub fn gauss_sum_brute(a: i64, b: i64, c: u64) -> RootOfUnityAccumulator {
    let ci = c as i128;
    let mut acc = RootOfUnityAccumulator::new(c);
    for x in 0..ci {
        let k = (i128::from(a) * x * x + i128::from(b) * x).rem_euclid(ci);
        acc.add_root(k as i64);
    }
    acc
}
