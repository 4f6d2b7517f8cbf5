use rug::{Complex, Float};

use super::KloostermanTerms;
use crate::arith::{gcd, sqrt_mod};
use crate::modular::{dedekind_sum_scaled, kronecker, Multiplier};
use crate::numerics::{close, RootOfUnityAccumulator};

/// `√(rad_num/rad_den)·acc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSum {
    pub rad_num: u64,
    pub rad_den: u64,
    pub acc: RootOfUnityAccumulator,
}

pub fn eval_scaled(s: &ScaledSum, prec: u32) -> Complex {
    let work = prec + 16;
    let r = (Float::with_val(work, s.rad_num) / s.rad_den).sqrt();
    Complex::with_val(prec, s.acc.eval(work) * r)
}

/// `A_c(n) = Σ_{d mod c, (d,c)=1} e^{πi s(d,c)}·e(−dn/c)`, over `12c`-th roots.
pub fn a_c_direct(c: u64, n: i64) -> RootOfUnityAccumulator {
    assert!(c > 0);
    let m = 12 * c as i128;
    let mut acc = RootOfUnityAccumulator::new(12 * c);
    for d in 0..c {
        if gcd(d, c) != 1 {
            continue;
        }
        let s6 = i128::from(dedekind_sum_scaled(d as i64, c));
        let k = s6 - 12 * i128::from(d as i64) * i128::from(n);
        acc.add_root(k.rem_euclid(m) as i64);
    }
    acc
}

/// Selberg–Whiteman: `A_c(n) = √(c/48)·Σ_{x mod 24c, x² ≡ 1−24n} (12/x)·e(x/(12c))`.
pub fn a_c_selberg_whiteman(c: u64, n: i64) -> ScaledSum {
    assert!(c > 0);
    let mut acc = RootOfUnityAccumulator::new(12 * c);
    for x in sqrt_mod(1 - 24 * n, 24 * c) {
        let s = kronecker(12, x as i64);
        if s != 0 {
            acc.add(x as i64, i64::from(s));
        }
    }
    ScaledSum {
        rad_num: c,
        rad_den: 48,
        acc,
    }
}

/// The residue scan `Σ_{x mod 24c, x² ≡ 1−24n} (−12/x)·e(x/(12c))`.
pub fn f_c_scan(c: u64, n: i64) -> RootOfUnityAccumulator {
    assert!(c > 0);
    let mut acc = RootOfUnityAccumulator::new(12 * c);
    for x in sqrt_mod(1 - 24 * n, 24 * c) {
        let s = kronecker(-12, x as i64);
        if s != 0 {
            acc.add(x as i64, i64::from(s));
        }
    }
    acc
}

/// `F_c(n)`; exactly zero for odd `c`.
pub fn f_c(c: u64, n: i64, prec: u32) -> Complex {
    if c % 2 == 1 {
        return Complex::new(prec);
    }
    f_c_scan(c, n).eval(prec)
}

/// `F_{2a}(n) = 2·Σ_{b mod 24a, b² ≡ 1−24n (mod 48a)} (−12/b)·e(b/(24a))`.
pub fn f_pairing(a: u64, n: i64) -> RootOfUnityAccumulator {
    assert!(a > 0);
    let mut acc = RootOfUnityAccumulator::new(24 * a);
    for b in sqrt_mod(1 - 24 * n, 48 * a) {
        if b >= 24 * a {
            continue;
        }
        let s = kronecker(-12, b as i64);
        if s != 0 {
            acc.add(b as i64, 2 * i64::from(s));
        }
    }
    acc
}

/// Both sides of `(−1)^{⌊(c+1)/2⌋}·A_{2c}(n − c(1+(−1)^c)/4) = e(1/8)·conj(S(0,n,2c,ψ))`.
pub fn a2c_psi_sides(c: u64, n: i64) -> (RootOfUnityAccumulator, RootOfUnityAccumulator) {
    let shift = if c.is_multiple_of(2) { (c / 2) as i64 } else { 0 };
    let mut lhs = a_c_direct(2 * c, n - shift);
    if c.div_ceil(2) % 2 == 1 {
        lhs = lhs.scale(-1);
    }
    let s = KloostermanTerms::new(2 * c, Multiplier::PSI)
        .expect("2c is a multiple of 2")
        .sum(0, n);
    let m = s.acc.modulus();
    let rhs = s.acc.conj().rotate((m / 8) as i64);
    (lhs, rhs)
}

/// True iff the two sides of [`a2c_psi_sides`] agree to `2^{16−prec}`.
pub fn a2c_psi_check(c: u64, n: i64, prec: u32) -> bool {
    let (lhs, rhs) = a2c_psi_sides(c, n);
    let tol = Float::with_val(prec, 1) >> (prec as i32 - 16);
    close(&lhs.eval(prec), &rhs.eval(prec), &tol)
}
