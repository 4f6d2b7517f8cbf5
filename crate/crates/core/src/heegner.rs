//! Heegner points of discriminant `−D` on `Γ₀(12)` and the finite sum
//! `(i/√D)·Σ χ₋₁₂(Q)·(e(τ_Q) − e(τ̄_Q))` over classes with large `Im τ_Q`.

use std::io::Write;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

use crate::arith::sqrt_mod;
use crate::error::{Error, Result};
use crate::modular::kronecker;
use crate::numerics::{e_of, fmt_real};
use crate::series::{cutoff, psi_form_complex};

/// `[12a, b, c_coeff]` with `0 ≤ b < 24a` and `b² − 48a·c_coeff = −D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm12 {
    pub a: u64,
    pub b: u64,
    pub c_coeff: i64,
    pub disc: u64,
}

impl QuadForm12 {
    /// `χ₋₁₂(Q) = (−12/b)`.
    pub fn chi(&self) -> i32 {
        kronecker(-12, self.b as i64)
    }

    /// `Im τ_Q = √D/(24a)`.
    pub fn im_tau(&self, prec: u32) -> Float {
        Float::with_val(prec, self.disc).sqrt() / (24 * self.a)
    }

    /// `Re τ_Q = −b/(24a)`.
    pub fn re_tau(&self) -> Rational {
        Rational::from((-(self.b as i64), 24 * self.a))
    }

    /// `χ₋₁₂(Q)·(e(τ_Q) − e(τ̄_Q)) = −2χ·sinh(2π Im τ_Q)·e(−b/(24a))`.
    pub fn term(&self, prec: u32) -> Complex {
        let work = prec + 16;
        let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
        let sh = (two_pi * self.im_tau(work)).sinh();
        let mag = sh * (-2 * self.chi());
        Complex::with_val(prec, e_of(-(self.b as i64), 24 * self.a, work) * mag)
    }

    /// The translate `b ↦ b + 24a·t`, as an unreduced triple `(12a, b′, c′)`.
    pub fn translate(&self, t: i64) -> (i64, i64, i64) {
        let a12 = 12 * self.a as i64;
        let b = self.b as i64 + 2 * a12 * t;
        let c = (b * b + self.disc as i64) / (4 * a12);
        (a12, b, c)
    }
}

/// How classes on the threshold `Im τ_Q = t` are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    /// `Im τ_Q ≥ t`.
    Inclusive,
    /// `Im τ_Q > t`.
    Strict,
}

/// Largest `a` with `√D/(24a)` above `min_im` in the given mode.
pub fn max_a(disc: u64, min_im: &Rational, mode: Threshold) -> u64 {
    assert!(*min_im > 0, "threshold must be positive");
    // √D/(24a) ≥ p/q  ⇔  (24pa)² ≤ D·q²
    let lhs_unit = Integer::from(min_im.numer() * 24u32).square();
    let rhs = Integer::from(min_im.denom().square_ref()) * disc;
    let ok = |a: u64| {
        let l = Integer::from(&lhs_unit * a) * a;
        match mode {
            Threshold::Inclusive => l <= rhs,
            Threshold::Strict => l < rhs,
        }
    };
    let guess = Integer::from(&rhs / &lhs_unit).sqrt().to_u64().expect("fits in u64");
    let mut a = guess + 1;
    while a > 0 && !ok(a) {
        a -= 1;
    }
    while ok(a + 1) {
        a += 1;
    }
    a
}

/// Representatives of `Γ∞\Q_{−D,12}` with `Im τ_Q` above `min_im`, ordered
/// by `(a, b)`.
pub fn enumerate_forms_mode(disc: u64, min_im: &Rational, mode: Threshold) -> Result<Vec<QuadForm12>> {
    if disc == 0 || !matches!((disc as i64).wrapping_neg().rem_euclid(4), 0 | 1) {
        return Err(Error::Domain(format!("−{disc} is not a discriminant")));
    }
    if *min_im <= 0 {
        return Err(Error::Domain("threshold must be positive".into()));
    }
    let top = max_a(disc, min_im, mode);
    let per_a: Vec<Vec<QuadForm12>> = (1..=top)
        .into_par_iter()
        .map(|a| {
            sqrt_mod(-(disc as i64), 48 * a)
                .into_iter()
                .filter(|&b| b < 24 * a)
                .map(|b| QuadForm12 {
                    a,
                    b,
                    c_coeff: ((i128::from(b) * i128::from(b) + i128::from(disc)) / i128::from(48 * a)) as i64,
                    disc,
                })
                .collect()
        })
        .collect();
    Ok(per_a.into_iter().flatten().collect())
}

/// Forms with `Im τ_Q ≥ min_im`.
pub fn enumerate_forms(disc: u64, min_im: &Rational) -> Result<Vec<QuadForm12>> {
    enumerate_forms_mode(disc, min_im, Threshold::Inclusive)
}

/// Forms lying exactly on the threshold, where the two modes differ.
pub fn boundary_ties(disc: u64, min_im: &Rational) -> Result<Vec<QuadForm12>> {
    let strict = enumerate_forms_mode(disc, min_im, Threshold::Strict)?;
    let mut all = enumerate_forms_mode(disc, min_im, Threshold::Inclusive)?;
    all.retain(|f| !strict.contains(f));
    Ok(all)
}

/// `(i/√D)·Σ χ₋₁₂(Q)(e(τ_Q) − e(τ̄_Q))` over the given forms, with the
/// imaginary-part check and one precision escalation.
pub fn heegner_sum(forms: &[QuadForm12], prec: u32) -> Result<Float> {
    let run = |p: u32| -> Result<Float> {
        let work = p + 16;
        let Some(first) = forms.first() else {
            return Ok(Float::new(p));
        };
        let terms: Vec<Complex> = forms.iter().map(|f| f.term(work)).collect();
        let re = Float::with_val(work, Float::sum(terms.iter().map(|t| t.real())));
        let im = Float::with_val(work, Float::sum(terms.iter().map(|t| t.imag())));
        let scale = Float::with_val(
            work,
            Float::sum(
                terms
                    .iter()
                    .map(|t| Float::with_val(work, t.abs_ref()))
                    .collect::<Vec<_>>()
                    .iter(),
            ),
        );
        let inv_sqrt_d = Float::with_val(work, first.disc).sqrt().recip();
        // i·(re + i·im) = −im + i·re
        let value = Float::with_val(work, -im * &inv_sqrt_d);
        let residue = Float::with_val(work, &re * &inv_sqrt_d);
        let tol = Float::with_val(work, scale * &inv_sqrt_d).max(&Float::with_val(work, 1)) >> (p as i32 - 24);
        if residue.clone().abs() > tol {
            return Err(Error::Precision {
                imag: fmt_real(&residue, 6),
                bits: p,
            });
        }
        Ok(Float::with_val(p, value))
    };
    match run(prec) {
        Err(Error::Precision { .. }) => run(2 * prec).map(|x| Float::with_val(prec, x)),
        other => other,
    }
}

/// Geometric side with threshold `Im τ_Q ≥ γ/24`, `D = 24n − 1`.
pub fn heegner_alpha(n: u64, gamma: &Rational, prec: u32) -> Result<Float> {
    if n == 0 || *gamma <= 0 {
        return Err(Error::Domain("need n ≥ 1 and γ > 0".into()));
    }
    let forms = enumerate_forms(24 * n - 1, &Rational::from(gamma / 24u32))?;
    heegner_sum(&forms, prec)
}

/// Geometric side with the strict threshold `Im τ_Q > γ`.
pub fn heegner_alpha_strict(n: u64, gamma: &Rational, prec: u32) -> Result<Float> {
    if n == 0 || *gamma <= 0 {
        return Err(Error::Domain("need n ≥ 1 and γ > 0".into()));
    }
    let forms = enumerate_forms_mode(24 * n - 1, gamma, Threshold::Strict)?;
    heegner_sum(&forms, prec)
}

/// Kloosterman side: `ψ`-form over even moduli `c ≤ 2√D/γ`.
pub fn kloosterman_side(n: u64, gamma: &Rational, prec: u32) -> Result<Float> {
    if n == 0 || *gamma <= 0 {
        return Err(Error::Domain("need n ≥ 1 and γ > 0".into()));
    }
    let a_max = cutoff(24 * n - 1, &Rational::from(gamma.recip_ref()));
    let run = |p: u32| -> Result<Float> {
        let (z, scale) = psi_form_complex(n, 2 * a_max, p);
        let tol = scale.max(&Float::with_val(p, 1)) >> (p as i32 - 24);
        if Float::with_val(p, z.imag().abs_ref()) > tol {
            return Err(Error::Precision {
                imag: fmt_real(z.imag(), 6),
                bits: p,
            });
        }
        Ok(z.into_real_imag().0)
    };
    match run(prec) {
        Err(Error::Precision { .. }) => run(2 * prec).map(|x| Float::with_val(prec, x)),
        other => other,
    }
}

/// Both sides of the Heegner/Kloosterman identity at `(n, γ)`.
pub fn identity_sides(n: u64, gamma: &Rational, prec: u32) -> Result<(Float, Float)> {
    Ok((kloosterman_side(n, gamma, prec)?, heegner_alpha(n, gamma, prec)?))
}

/// `D,a,b,im_tau,chi,re_term,im_term` rows; the term is `χ(e(τ) − e(τ̄))`.
pub fn write_forms_csv<W: Write>(forms: &[QuadForm12], prec: u32, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["D", "a", "b", "im_tau", "chi", "re_term", "im_term"])?;
    for f in forms {
        let t = f.term(prec);
        w.write_record([
            f.disc.to_string(),
            f.a.to_string(),
            f.b.to_string(),
            fmt_real(&f.im_tau(prec), 20),
            f.chi().to_string(),
            fmt_real(t.real(), 20),
            fmt_real(t.imag(), 20),
        ])?;
    }
    w.flush()?;
    Ok(())
}
