//! Finite exponential sums: generalized Kloosterman sums `S(m, n, c, ν)`,
//! `A_c(n)` (by definition and by the Selberg–Whiteman formula), the
//! character sums `F_c(n)`, quadratic Gauss sums and Weil-type bounds.
//!
//! Every sum is first built as a [`RootOfUnityAccumulator`] and only rounded
//! on evaluation.

mod bounds;
mod gauss;
mod sums;

pub use bounds::{
    lehmer_bound, near_extremal_ratio, psi_weil_bound, twisted_theta_weil_bound, BoundRow, NEAR_EXTREMAL,
};
pub use gauss::{gauss_sum, gauss_sum_brute, GaussSumValue};
pub use sums::{
    a2c_psi_check, a2c_psi_sides, a_c_direct, a_c_selberg_whiteman, eval_scaled, f_c, f_c_scan, f_pairing, ScaledSum,
};

use std::io::Write;

use rug::Complex;

use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::modular::{enumerate_gamma0, Multiplier, MultiplierKind};
use crate::numerics::{RootOfUnityAccumulator, RootTable};

/// The matrices with lower-left entry `c` and their conjugated multiplier
/// values, prepared once so that many `(m, n)` can be summed cheaply.
#[derive(Clone, Debug)]
pub struct KloostermanTerms {
    c: u64,
    multiplier: Multiplier,
    modulus: u64,
    alpha: (u64, u64),
    /// `(a, d, index of conj ν(γ) over modulus)`.
    terms: Vec<(u64, u64, u64)>,
}

impl KloostermanTerms {
    pub fn new(c: u64, multiplier: Multiplier) -> Result<Self> {
        let level = multiplier.level();
        let mats = enumerate_gamma0(c, level)?;
        let alpha = multiplier.alpha();
        let order = match multiplier.kind {
            MultiplierKind::Eta | MultiplierKind::Psi => 24 * c,
            MultiplierKind::Theta | MultiplierKind::TwistedTheta(_) => 4,
        };
        let modulus = lcm(order, alpha.1 * c);
        let mut terms = Vec::with_capacity(mats.len());
        for g in &mats {
            let v = multiplier.value(g)?.conj();
            terms.push((g.a as u64, g.d as u64, v.index_mod(modulus)));
        }
        Ok(Self {
            c,
            multiplier,
            modulus,
            alpha,
            terms,
        })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// Modulus of the accumulators produced by [`sum`](Self::sum).
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `S(m, n, c, ν) = Σ conj(ν(γ))·e((m_ν a + n_ν d)/c)`, `m_ν = m − α_ν`.
    pub fn sum(&self, m: i64, n: i64) -> KloostermanValue {
        let (p, q) = (i128::from(self.alpha.0), i128::from(self.alpha.1));
        let scale = i128::from(self.modulus / (self.alpha.1 * self.c));
        let mq = i128::from(m) * q - p;
        let nq = i128::from(n) * q - p;
        let big = i128::from(self.modulus);
        let mut acc = RootOfUnityAccumulator::new(self.modulus);
        for &(a, d, k) in &self.terms {
            let e = (mq * i128::from(a) + nq * i128::from(d)).rem_euclid(big) * scale + i128::from(k);
            acc.add_root(e.rem_euclid(big) as i64);
        }
        KloostermanValue {
            c: self.c,
            m,
            n,
            multiplier: self.multiplier,
            acc,
        }
    }
}

/// `S(m, n, c, ν)` held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KloostermanValue {
    pub c: u64,
    pub m: i64,
    pub n: i64,
    pub multiplier: Multiplier,
    pub acc: RootOfUnityAccumulator,
}

impl KloostermanValue {
    pub fn eval(&self, prec: u32) -> Complex {
        self.acc.eval(prec)
    }

    pub fn eval_with(&self, table: &RootTable) -> Complex {
        self.acc.eval_with(table)
    }
}

/// `S(m, n, c, ν)`; `c` must be a positive multiple of the level of `ν`.
pub fn kloosterman_s(m: i64, n: i64, c: u64, multiplier: Multiplier) -> Result<KloostermanValue> {
    if c == 0 {
        return Err(Error::LevelMismatch {
            c,
            level: multiplier.level(),
        });
    }
    Ok(KloostermanTerms::new(c, multiplier)?.sum(m, n))
}

/// `c,n,re,im,bound,ratio` rows.
pub fn write_bound_csv<W: Write>(rows: &[BoundRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["c", "n", "re", "im", "bound", "ratio"])?;
    for r in rows {
        w.write_record([
            r.c.to_string(),
            r.n.to_string(),
            r.re.clone(),
            r.im.clone(),
            r.bound.clone(),
            r.ratio.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::psi_multiplier;
    use crate::modular::GammaZeroMatrix;
    use crate::numerics::{close, e_of};
    use rug::Float;

    const P: u32 = 192;

    fn tol() -> Float {
        Float::with_val(P, 1) >> (P as i32 - 16)
    }

    #[test]
    fn single_term_at_c_two() {
        // One matrix (1 0; 2 1): conj ψ(γ)·e((m_ψ + n_ψ)/2) with m = 0 and
        // n_ψ = n − 1/24.
        let g = GammaZeroMatrix::new(1, 0, 2, 1).unwrap();
        let psi = psi_multiplier(&g).unwrap();
        for n in -5..10i64 {
            let s = kloosterman_s(0, n, 2, Multiplier::PSI).unwrap();
            assert_eq!(s.acc.nonzero_len(), 1);
            let want = psi.conj().eval(P) * e_of(24 * n - 2, 48, P);
            assert!(close(&s.eval(P), &want, &tol()), "n={n}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for c in (2..=60u64).step_by(2) {
            let t = KloostermanTerms::new(c, Multiplier::PSI).unwrap();
            let tc = KloostermanTerms::new(c, Multiplier::PSI.conj()).unwrap();
            for (m, n) in [(0i64, 1i64), (0, 7), (2, -3), (5, 5)] {
                let lhs = t.sum(m, n).eval(P).conj();
                let rhs = tc.sum(1 - m, 1 - n).eval(P);
                assert!(close(&lhs, &rhs, &tol()), "c={c} m={m} n={n}");
            }
        }
        // α = 0 branch for the theta multiplier.
        for c in (4..=80u64).step_by(4) {
            let t = KloostermanTerms::new(c, Multiplier::THETA).unwrap();
            let tc = KloostermanTerms::new(c, Multiplier::THETA.conj()).unwrap();
            for (m, n) in [(1i64, 1i64), (3, -2)] {
                assert!(close(&t.sum(m, n).eval(P).conj(), &tc.sum(-m, -n).eval(P), &tol()));
            }
        }
    }

    #[test]
    fn level_mismatch() {
        assert!(kloosterman_s(0, 1, 3, Multiplier::PSI).is_err());
        assert!(kloosterman_s(1, 1, 6, Multiplier::THETA).is_err());
        assert!(kloosterman_s(1, 1, 0, Multiplier::ETA).is_err());
    }

    #[test]
    fn trivial_bound() {
        for c in (2..=120u64).step_by(2) {
            let t = KloostermanTerms::new(c, Multiplier::PSI).unwrap();
            let s = t.sum(0, 3).eval(P);
            assert!(s.abs().real().clone() <= t.len() as f64 + 1e-20);
        }
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        write_bound_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "c,n,re,im,bound,ratio\n");
    }
}
