//! Kronecker symbols, Dedekind sums, multiplier systems of weight ½ and
//! enumeration of Γ₀(N) matrices.

mod dedekind;
mod multiplier;

pub use dedekind::{dedekind_sum, dedekind_sum_scaled, dedekind_sum_scaled_direct};
pub use multiplier::{
    eta_multiplier, eta_multiplier_kronecker, psi_multiplier, theta_multiplier, Multiplier, MultiplierKind,
    MultiplierValue, PSI_CUSP_ZERO,
};

use serde::Serialize;

use crate::arith::{gcd, mod_inverse};
use crate::error::{Error, Result};

/// Jacobi symbol `(a/n)` for odd `n > 0`.
fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Extended Kronecker symbol `(a/b)`.
pub fn kronecker(a: i64, b: i64) -> i32 {
    if b == 0 {
        return i32::from(a == 1 || a == -1);
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut odd = b.unsigned_abs();
    let v = odd.trailing_zeros();
    odd >>= v;
    let mut k = 1;
    if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
        k = -k;
    }
    if b < 0 && a < 0 {
        k = -k;
    }
    k * jacobi(a, odd)
}

/// `(a b; c d)` with `ad − bc = 1`. Any sign of `c` is allowed so that
/// products and inverses stay inside the type; multiplier formulas extend
/// to `c ≤ 0` by the usual sign rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GammaZeroMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GammaZeroMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if i128::from(a) * i128::from(d) - i128::from(b) * i128::from(c) != 1 {
            return Err(Error::InvalidMatrix {
                a,
                b,
                c,
                d,
                reason: "determinant is not 1",
            });
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };

    /// `(1 b; 0 1)`.
    pub fn translation(b: i64) -> Self {
        Self { a: 1, b, c: 0, d: 1 }
    }

    pub fn in_level(&self, level: u64) -> bool {
        self.c.rem_euclid(level as i64) == 0
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// Matrices `(a b; c d)` with `0 ≤ a, d < c` and `ad ≡ 1 (mod c)`, in
/// ascending `d`. For `c = 1` this is the single matrix `(0 −1; 1 0)`.
pub fn enumerate_gamma0(c: u64, level: u64) -> Result<Vec<GammaZeroMatrix>> {
    if c == 0 || level == 0 || !c.is_multiple_of(level) {
        return Err(Error::LevelMismatch { c, level });
    }
    let ci = c as i64;
    let mut out = Vec::new();
    for d in 0..c {
        if gcd(d, c) != 1 {
            continue;
        }
        let a = if c == 1 {
            0
        } else {
            mod_inverse(d as i64, c).expect("coprime")
        };
        let (a, d) = (a as i64, d as i64);
        let ad = i128::from(a) * i128::from(d) - 1;
        out.push(GammaZeroMatrix {
            a,
            b: (ad / i128::from(ci)) as i64,
            c: ci,
            d,
        });
    }
    Ok(out)
}
