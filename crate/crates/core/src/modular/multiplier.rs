use rug::Complex;
use serde::Serialize;

use super::{dedekind_sum_scaled, kronecker, GammaZeroMatrix};
use crate::arith::{gcd, lcm};
use crate::error::{Error, Result};
use crate::numerics::e_of;

/// The root of unity `e(k/m)`, kept in lowest terms so that equality is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiplierValue {
    k: u64,
    m: u64,
}

impl MultiplierValue {
    pub fn new(k: i64, m: u64) -> Self {
        assert!(m > 0);
        let k = k.rem_euclid(m as i64) as u64;
        let g = gcd(k, m);
        Self { k: k / g, m: m / g }
    }

    pub const ONE: Self = Self { k: 0, m: 1 };

    /// `(k, m)` with `value = e(k/m)`, `gcd(k, m) = 1`.
    pub fn index(&self) -> (u64, u64) {
        (self.k, self.m)
    }

    /// Index over a modulus that must be a multiple of the reduced order.
    pub fn index_mod(&self, modulus: u64) -> u64 {
        assert_eq!(modulus % self.m, 0, "modulus {modulus} is not a multiple of {}", self.m);
        self.k * (modulus / self.m)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = lcm(self.m, o.m);
        Self::new((self.index_mod(m) + o.index_mod(m)) as i64, m)
    }

    pub fn conj(&self) -> Self {
        Self::new(-(self.k as i64), self.m)
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(
            ((u128::from(self.k) * u128::from(e)) % u128::from(self.m)) as i64,
            self.m,
        )
    }

    /// `±1` as a root of unity.
    pub fn sign(s: i32) -> Self {
        match s {
            1 => Self::ONE,
            -1 => Self::new(1, 2),
            _ => panic!("sign must be ±1, got {s}"),
        }
    }

    pub fn eval(&self, prec: u32) -> Complex {
        e_of(self.k as i64, self.m, prec)
    }
}

/// `ψ((1 0; −2 1)) = e(−1/3)`: the cusp 0 is not singular for ψ.
pub const PSI_CUSP_ZERO: MultiplierValue = MultiplierValue { k: 2, m: 3 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    /// `ν_η` on SL₂(ℤ).
    Eta,
    /// `ν_θ` on Γ₀(4).
    Theta,
    /// `ψ` on Γ₀(2).
    Psi,
    /// `(D/·)·ν_θ` on Γ₀(lcm(4, |D|)).
    TwistedTheta(i64),
}

/// A weight ½ multiplier system, or its conjugate (weight −½).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Multiplier {
    pub kind: MultiplierKind,
    pub conjugate: bool,
}

impl Multiplier {
    pub const ETA: Self = Self {
        kind: MultiplierKind::Eta,
        conjugate: false,
    };
    pub const THETA: Self = Self {
        kind: MultiplierKind::Theta,
        conjugate: false,
    };
    pub const PSI: Self = Self {
        kind: MultiplierKind::Psi,
        conjugate: false,
    };

    pub fn twisted_theta(disc: i64) -> Result<Self> {
        if !matches!(disc.rem_euclid(4), 0 | 1) || disc == 0 {
            return Err(Error::Domain(format!("{disc} is not a discriminant")));
        }
        Ok(Self {
            kind: MultiplierKind::TwistedTheta(disc),
            conjugate: false,
        })
    }

    pub fn conj(self) -> Self {
        Self {
            conjugate: !self.conjugate,
            ..self
        }
    }

    pub fn level(&self) -> u64 {
        match self.kind {
            MultiplierKind::Eta => 1,
            MultiplierKind::Psi => 2,
            MultiplierKind::Theta => 4,
            MultiplierKind::TwistedTheta(disc) => lcm(4, disc.unsigned_abs()),
        }
    }

    /// `α_ν ∈ [0, 1)` as `(p, q)`, defined by `ν((1 1; 0 1)) = e(−α_ν)`.
    pub fn alpha(&self) -> (u64, u64) {
        let (p, q) = match self.kind {
            MultiplierKind::Eta => (23, 24),
            MultiplierKind::Psi => (1, 24),
            MultiplierKind::Theta | MultiplierKind::TwistedTheta(_) => (0, 1),
        };
        if self.conjugate && p > 0 {
            (q - p, q)
        } else {
            (p, q)
        }
    }

    /// `ν(γ)`. The closed formulas cover `c > 0`; `c < 0` uses
    /// `ν(γ) = i·ν(−γ)`, and `c = 0` uses `ν(T^b) = e(−α b)` and
    /// `ν(−I) = −i`, the values forced by the weight ½ cocycle with the
    /// principal square root.
    pub fn value(&self, g: &GammaZeroMatrix) -> Result<MultiplierValue> {
        let level = self.level();
        if !g.in_level(level) {
            return Err(Error::LevelMismatch {
                c: g.c.unsigned_abs(),
                level,
            });
        }
        let v = if g.c > 0 {
            self.base(g)
        } else if g.c < 0 {
            MultiplierValue::new(1, 4).mul(&self.base(&g.neg()))
        } else {
            let (p, q) = self.alpha_raw();
            if g.d == 1 {
                MultiplierValue::new(-(p as i64) * g.b, q)
            } else {
                // −T^{−b}
                MultiplierValue::new(3, 4).mul(&MultiplierValue::new(p as i64 * g.b, q))
            }
        };
        Ok(if self.conjugate { v.conj() } else { v })
    }

    fn alpha_raw(&self) -> (u64, u64) {
        Self {
            conjugate: false,
            ..*self
        }
        .alpha()
    }

    fn base(&self, g: &GammaZeroMatrix) -> MultiplierValue {
        match self.kind {
            MultiplierKind::Eta => eta_base(g),
            MultiplierKind::Psi => psi_base(g),
            MultiplierKind::Theta => theta_base(g),
            MultiplierKind::TwistedTheta(disc) => MultiplierValue::sign(kronecker(disc, g.d)).mul(&theta_base(g)),
        }
    }
}

/// Rademacher: `ν_η(γ) = e(−1/8)·e(−s(d,c)/2)·e((a+d)/(24c))` as an index
/// mod `24c`.
fn eta_base(g: &GammaZeroMatrix) -> MultiplierValue {
    let c = g.c;
    let s6 = dedekind_sum_scaled(g.d, c as u64);
    let k = i128::from(g.a) + i128::from(g.d) - 3 * i128::from(c) - 2 * i128::from(s6);
    MultiplierValue::new(k.rem_euclid(24 * i128::from(c)) as i64, 24 * c as u64)
}

fn theta_base(g: &GammaZeroMatrix) -> MultiplierValue {
    let s = MultiplierValue::sign(kronecker(g.c, g.d));
    let eps_inv = if g.d.rem_euclid(4) == 1 {
        MultiplierValue::ONE
    } else {
        MultiplierValue::new(3, 4)
    };
    s.mul(&eps_inv)
}

/// `ψ(γ) = i^{c/2}·(−1/d)^{[4|c]}·conj(ν_η(γ))`.
fn psi_base(g: &GammaZeroMatrix) -> MultiplierValue {
    let c = g.c;
    let mut v = MultiplierValue::new(c, 8).mul(&eta_base(g).conj());
    if c % 4 == 0 {
        v = v.mul(&MultiplierValue::sign(kronecker(-1, g.d)));
    }
    v
}

pub fn eta_multiplier(g: &GammaZeroMatrix) -> Result<MultiplierValue> {
    Multiplier::ETA.value(g)
}

pub fn theta_multiplier(g: &GammaZeroMatrix) -> Result<MultiplierValue> {
    Multiplier::THETA.value(g)
}

pub fn psi_multiplier(g: &GammaZeroMatrix) -> Result<MultiplierValue> {
    Multiplier::PSI.value(g)
}

/// `ν_η(γ)` for `c > 0` from the Kronecker-symbol formula; independent of
/// Dedekind sums.
pub fn eta_multiplier_kronecker(g: &GammaZeroMatrix) -> Result<MultiplierValue> {
    let (a, b, c, d) = (i128::from(g.a), i128::from(g.b), i128::from(g.c), i128::from(g.d));
    if c <= 0 {
        return Err(Error::InvalidMatrix {
            a: g.a,
            b: g.b,
            c: g.c,
            d: g.d,
            reason: "the Kronecker formula needs c > 0",
        });
    }
    let (sign, k) = if c % 2 == 1 {
        (kronecker(g.d, g.c), (a + d) * c - b * d * (c * c - 1) - 3 * c)
    } else {
        (
            kronecker(g.c, g.d),
            (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d,
        )
    };
    Ok(MultiplierValue::sign(sign).mul(&MultiplierValue::new(k.rem_euclid(24) as i64, 24)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd_i64;
    use crate::modular::enumerate_gamma0;
    use proptest::prelude::*;
    use rug::{Complex, Float};

    const P: u32 = 128;

    fn m(a: i64, b: i64, c: i64, d: i64) -> GammaZeroMatrix {
        GammaZeroMatrix::new(a, b, c, d).unwrap()
    }

    #[test]
    fn translations() {
        assert_eq!(
            eta_multiplier(&GammaZeroMatrix::translation(1)).unwrap(),
            MultiplierValue::new(1, 24)
        );
        assert_eq!(
            psi_multiplier(&GammaZeroMatrix::translation(1)).unwrap(),
            MultiplierValue::new(-1, 24)
        );
        assert_eq!(
            theta_multiplier(&GammaZeroMatrix::translation(5)).unwrap(),
            MultiplierValue::ONE
        );
        assert_eq!(Multiplier::PSI.alpha(), (1, 24));
        assert_eq!(Multiplier::PSI.conj().alpha(), (23, 24));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_multiplier(&m(1, 0, 4, 1)).unwrap(), MultiplierValue::ONE);
        assert!(theta_multiplier(&m(1, 0, 2, 1)).is_err());
    }

    #[test]
    fn psi_cusp_zero() {
        assert_eq!(psi_multiplier(&m(1, 0, -2, 1)).unwrap(), PSI_CUSP_ZERO);
        assert_eq!(PSI_CUSP_ZERO, MultiplierValue::new(-1, 3));
    }

    /// All γ with 1 ≤ c ≤ 100 and `d` over two periods on each side.
    #[test]
    fn eta_formulas_agree() {
        for c in 1..=100i64 {
            for d in -2 * c..2 * c {
                if gcd_i64(d, c) != 1 {
                    continue;
                }
                let base = enumerate_gamma0(c as u64, 1).unwrap();
                let a0 = base.iter().find(|g| g.d == d.rem_euclid(c)).unwrap().a;
                for a in [a0, a0 + c, a0 - 2 * c] {
                    let b = ((i128::from(a) * i128::from(d) - 1) / i128::from(c)) as i64;
                    let g = m(a, b, c, d);
                    assert_eq!(
                        eta_multiplier(&g).unwrap(),
                        eta_multiplier_kronecker(&g).unwrap(),
                        "{g:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn eta_unit_modulus() {
        for g in enumerate_gamma0(97, 1).unwrap() {
            let z = eta_multiplier(&g).unwrap().eval(P);
            let r = Float::with_val(P, z.abs().real() - 1u32).abs();
            assert!(r < Float::with_val(P, 1) >> (P as i32 - 4));
        }
    }

    #[test]
    fn theta_conjugation_law() {
        for c in (4..=200i64).step_by(4) {
            for g in enumerate_gamma0(c as u64, 4).unwrap() {
                let v = theta_multiplier(&g).unwrap();
                assert_eq!(v.conj(), MultiplierValue::sign(kronecker(-1, g.d)).mul(&v));
                assert_eq!(v.pow(4), MultiplierValue::ONE);
            }
        }
    }

    #[test]
    fn psi_matches_twisted_theta_after_scaling() {
        // γ ∈ Γ₀(144) ↦ γ' = (a 24b; c/24 d): ψ(γ') = (12/d)·ν_θ(γ).
        let tw = Multiplier::twisted_theta(12).unwrap();
        for c in (144..=144 * 12).step_by(144) {
            for g in enumerate_gamma0(c as u64, 144).unwrap() {
                let gp = m(g.a, 24 * g.b, g.c / 24, g.d);
                assert_eq!(psi_multiplier(&gp).unwrap(), tw.value(&g).unwrap(), "{g:?}");
            }
        }
    }

    fn sqrt_j(g: &GammaZeroMatrix, tau: &Complex) -> Complex {
        (Complex::with_val(P, tau * g.c) + g.d).sqrt()
    }

    fn act(g: &GammaZeroMatrix, tau: &Complex) -> Complex {
        let num = Complex::with_val(P, tau * g.a) + g.b;
        let den = Complex::with_val(P, tau * g.c) + g.d;
        num / den
    }

    fn word(level: i64, steps: &[(u8, i64)]) -> GammaZeroMatrix {
        let mut g = GammaZeroMatrix::IDENTITY;
        for &(kind, e) in steps {
            let h = match kind % 3 {
                0 => GammaZeroMatrix::translation(e),
                1 => m(1, 0, level * e, 1),
                _ => GammaZeroMatrix::IDENTITY.neg(),
            };
            g = g.mul(&h);
        }
        g
    }

    fn cocycle_holds(nu: Multiplier, g1: GammaZeroMatrix, g2: GammaZeroMatrix, tau: &Complex) -> bool {
        let g12 = g1.mul(&g2);
        let lhs = nu.value(&g12).unwrap().eval(P) * sqrt_j(&g12, tau);
        let rhs = nu.value(&g1).unwrap().eval(P)
            * nu.value(&g2).unwrap().eval(P)
            * sqrt_j(&g1, &act(&g2, tau))
            * sqrt_j(&g2, tau);
        let diff = Complex::with_val(P, lhs - rhs).abs().real().clone();
        let scale = Complex::with_val(P, g12.c * tau.clone() + g12.d)
            .abs()
            .real()
            .clone()
            .sqrt()
            + 1u32;
        diff <= Float::with_val(P, scale) >> (P as i32 - 8 - 24)
    }

    proptest! {
        #[test]
        fn cocycle_relation(
            w1 in proptest::collection::vec((0u8..3, -3i64..4), 1..5),
            w2 in proptest::collection::vec((0u8..3, -3i64..4), 1..5),
            x in -1.0f64..1.0,
            y in 0.2f64..2.0,
        ) {
            let tau = Complex::with_val(P, (x, y));
            for (nu, level) in [
                (Multiplier::PSI, 2),
                (Multiplier::ETA, 1),
                (Multiplier::THETA, 4),
                (Multiplier::twisted_theta(12).unwrap(), 12),
            ] {
                let g1 = word(level, &w1);
                let g2 = word(level, &w2);
                // Rademacher's Dedekind-sum input must stay within i64.
                prop_assume!(g1.c.abs() < 1 << 20 && g2.c.abs() < 1 << 20);
                prop_assert!(cocycle_holds(nu, g1, g2, &tau), "{:?} {:?} {:?}", nu, g1, g2);
            }
        }
    }
}
