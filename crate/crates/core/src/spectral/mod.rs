//! The Kuznetsov test function `Φ(u) = (1/8)√(π/2)·u^{−1/2}·J_{9/2}(u)`, its
//! Bessel transform `Φ̃(s) = ∫₀^∞ J_s(u)Φ(u) du/u` by quadrature and in closed
//! form, and the weight `±1/2` spectral transform `Φ̂(t)`.

mod bessel;
mod gamma;
mod quadrature;

pub use bessel::{hankel_coeffs, BesselJ};
pub use gamma::gamma;
pub use quadrature::{phi_tilde_tail, TanhSinh};

use std::io::Write;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bessel_j_half_odd, fmt_real};

/// Default upper limit of the quadrature panels.
pub const U_MAX: f64 = 200.0;
/// Width of one quadrature panel.
pub const PANEL_WIDTH: f64 = 2.0;
/// Below this argument `Φ` is summed from its power series.
pub const PHI_SERIES_BELOW: f64 = 1.0 / 256.0;

/// `Φ(u)`; `Φ(0) = 0`.
pub fn phi_eval(u: &Float) -> Result<Float> {
    if *u < 0 {
        return Err(Error::Domain("Φ needs u ≥ 0".into()));
    }
    let prec = u.prec();
    if u.is_zero() {
        return Ok(Float::new(prec));
    }
    if *u < PHI_SERIES_BELOW {
        // Φ(u) = u⁴·Σ c_k (−u²/4)^k, c_0 = 1/7560, c_k = c_{k−1}/(k(k + 9/2))
        let work = prec + 16;
        let x = -Float::with_val(work, u.square_ref()) / 4u32;
        let mut c = Float::with_val(work, 7560).recip();
        let mut sum = c.clone();
        let mut xp = Float::with_val(work, 1);
        let eps = Float::with_val(work, 1) >> (work as i32);
        for k in 1u32.. {
            c = c * 2u32 / (k * (2 * k + 9));
            xp *= &x;
            let t = Float::with_val(work, &c * &xp);
            sum += &t;
            if t.abs() < eps {
                break;
            }
        }
        let u4 = Float::with_val(work, u.square_ref()).square();
        return Ok(Float::with_val(prec, sum * u4));
    }
    let work = prec + 16;
    let uw = Float::with_val(work, u);
    let j = bessel_j_half_odd(9, &uw)?;
    let pre = Float::with_val(work, Float::with_val(work, Constant::Pi) / 2u32).sqrt() / 8u32;
    Ok(Float::with_val(prec, pre * j / uw.sqrt()))
}

/// Result of the quadrature for `Φ̃(s)`.
#[derive(Clone, Debug)]
pub struct PhiTildeQuadrature {
    pub value: Complex,
    /// Sum of the per-panel convergence gaps and the tail truncation estimate.
    pub error_estimate: f64,
    /// Contribution of `[u_max, ∞)`.
    pub tail: Complex,
}

/// `Φ̃(s)` by tanh–sinh panels on `[0, u_max]` and the Hankel tail beyond.
pub fn phi_tilde_quadrature(s: &Complex, u_max: f64, prec: u32) -> Result<PhiTildeQuadrature> {
    if u_max.is_nan() || u_max < 40.0 {
        return Err(Error::Domain("u_max must be at least 40".into()));
    }
    let work = prec + 32;
    let jb = BesselJ::new(&Complex::with_val(work, s), u_max, work)?;
    let ts = TanhSinh::new(8, work);
    let panels = (u_max / PANEL_WIDTH).ceil() as usize;
    let width = u_max / panels as f64;
    let tol = Float::with_val(work, 1) >> (prec as i32 / 2 + 16);
    let f = |u: &Float| -> Complex {
        let phi = phi_eval(u).expect("u ≥ 0");
        let j = jb.eval(u);
        Complex::with_val(work, j * phi / u)
    };
    let pieces: Vec<Result<(Complex, Float)>> = (0..panels)
        .into_par_iter()
        .map(|k| {
            let a = Float::with_val(work, width * k as f64);
            let b = Float::with_val(work, width * (k + 1) as f64);
            ts.integrate(f, &a, &b, &tol)
        })
        .collect();
    let mut value = Complex::new(work);
    let mut err = Float::new(work);
    for p in pieces {
        let (v, e) = p?;
        value += v;
        err += e;
    }
    let (tail, tail_err) = phi_tilde_tail(&Complex::with_val(work, s), width * panels as f64, work);
    value += &tail;
    err += tail_err;
    Ok(PhiTildeQuadrature {
        value: Complex::with_val(prec, value),
        error_estimate: err.to_f64(),
        tail: Complex::with_val(prec, tail),
    })
}

/// Odd integers at which the closed form for `Φ̃` is a removable `0/0`.
pub const REMOVABLE_ORDERS: [i32; 6] = [-5, -3, -1, 1, 3, 5];

fn near_removable(s: &Complex, prec: u32) -> Option<i32> {
    let eps = Float::with_val(prec, 1) >> (prec as i32 / 2);
    REMOVABLE_ORDERS.into_iter().find(|&l| {
        let d = Float::with_val(prec, Complex::with_val(prec, s - l).abs_ref());
        d < eps
    })
}

/// `Φ̃(s) = −(1/8)·s(s²−4)cos(πs/2)/((s²−1)(s²−9)(s²−25))`, with the limit
/// `(π/32)(ℓ²−4)sin(πℓ/2)/Π_{r≠|ℓ|}(ℓ²−r²)` at `s = ℓ ∈ {±1, ±3, ±5}`.
pub fn phi_tilde_closed(s: &Complex, prec: u32) -> Complex {
    let work = prec + 16;
    let pi = Float::with_val(work, Constant::Pi);
    if let Some(l) = near_removable(s, work) {
        let l2 = i64::from(l * l);
        let others: i64 = [1i64, 9, 25].iter().filter(|&&r| r != l2).map(|r| l2 - r).product();
        // sin(πℓ/2) = ±1 for odd ℓ
        let sin = if (l.rem_euclid(4)) == 1 { 1 } else { -1 };
        let v = pi / 32u32 * (l2 - 4) * sin / others;
        return Complex::with_val(prec, (v, 0));
    }
    let sw = Complex::with_val(work, s);
    let s2 = Complex::with_val(work, sw.square_ref());
    let num = Complex::with_val(work, &s2 - 4u32) * &sw * (Complex::with_val(work, &sw * &pi) / 2u32).cos();
    let den = Complex::with_val(work, &s2 - 1u32)
        * Complex::with_val(work, &s2 - 9u32)
        * Complex::with_val(work, &s2 - 25u32);
    Complex::with_val(prec, -(num / den) / 8u32)
}

/// `Φ̃(2it) = −i·t(1+t²)·ch(πt)/((1+4t²)(9+4t²)(25+4t²))` for real `t`.
pub fn phi_tilde_imaginary_order(t: &Float) -> Complex {
    let prec = t.prec();
    let work = prec + 16;
    let tw = Float::with_val(work, t);
    let t2 = Float::with_val(work, tw.square_ref());
    let ch = Float::with_val(work, Float::with_val(work, Constant::Pi) * &tw).cosh();
    let num = Float::with_val(work, &t2 + 1u32) * &tw * ch;
    let four = Float::with_val(work, &t2 * 4u32);
    let den = Float::with_val(work, &four + 1u32)
        * Float::with_val(work, &four + 9u32)
        * Float::with_val(work, &four + 25u32);
    Complex::with_val(prec, (0, -(num / den)))
}

/// Weight of the multiplier: `k = ±1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Weight {
    #[serde(rename = "1/2")]
    PlusHalf,
    #[serde(rename = "-1/2")]
    MinusHalf,
}

impl Weight {
    pub fn value(self) -> f64 {
        match self {
            Weight::PlusHalf => 0.5,
            Weight::MinusHalf => -0.5,
        }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weight::PlusHalf => "1/2",
            Weight::MinusHalf => "-1/2",
        })
    }
}

/// `D_k(t) = (1/2π²)·Γ((1+k)/2 + it)·Γ((1+k)/2 − it)`.
pub fn d_k(t: &Complex, k: Weight, prec: u32) -> Result<Complex> {
    let work = prec + 16;
    let a = Float::with_val(work, 1.0 + k.value()) / 2u32;
    let it = Complex::with_val(work, t * Complex::with_val(work, (0, 1)));
    let g1 = gamma(&Complex::with_val(work, &it + &a), work)?;
    let g2 = gamma(&Complex::with_val(work, &a - it), work)?;
    let pi2 = Float::with_val(work, Constant::Pi).square() * 2u32;
    Ok(Complex::with_val(prec, g1 * g2 / pi2))
}

/// `Φ̂(t) = i(Φ̃(2it)cos π(k/2+it) − Φ̃(−2it)cos π(k/2−it))·D_k(t)/sh πt`, with
/// the limit `2cos(πk/2)·D_k(0)/(225π)` at `t = 0`.
pub fn phi_hat(t: &Complex, k: Weight, prec: u32) -> Result<Complex> {
    let work = prec + 32;
    if k == Weight::MinusHalf && t.real().is_zero() && t.imag().clone().abs() == 0.25 {
        return Err(Error::Domain("Φ̂ has a pole at t = ±i/4 for k = −1/2".into()));
    }
    let pi = Float::with_val(work, Constant::Pi);
    let kf = Float::with_val(work, k.value());
    let half_k = Float::with_val(work, &kf / 2u32);
    let cos_k = Float::with_val(work, &pi * &half_k).cos();
    let dk = d_k(t, k, work)?;
    if t.real().is_zero() && t.imag().is_zero() {
        let v = cos_k * 2u32 / (Float::with_val(work, &pi * 225u32));
        return Ok(Complex::with_val(prec, dk * v));
    }
    let i_unit = Complex::with_val(work, (0, 1));
    let it = Complex::with_val(work, t * &i_unit);
    let s = Complex::with_val(work, &it * 2u32);
    let plus = phi_tilde_closed(&s, work) * Complex::with_val(work, Complex::with_val(work, &half_k + &it) * &pi).cos();
    let minus = phi_tilde_closed(&Complex::with_val(work, -&s), work)
        * Complex::with_val(work, Complex::with_val(work, &half_k - &it) * &pi).cos();
    let sh = Complex::with_val(work, t * &pi).sinh();
    let v = (plus - minus) * &i_unit * dk / sh;
    Ok(Complex::with_val(prec, v))
}

/// `√2·t(1+t²)·ch²(πt)·D_k(t)/((1+4t²)(9+4t²)(25+4t²)·sh πt)` for `k = ±1/2`.
pub fn phi_hat_simplified(t: &Complex, k: Weight, prec: u32) -> Result<Complex> {
    let work = prec + 32;
    let pi = Float::with_val(work, Constant::Pi);
    let tw = Complex::with_val(work, t);
    let t2 = Complex::with_val(work, tw.square_ref());
    let four = Complex::with_val(work, &t2 * 4u32);
    let den = Complex::with_val(work, &four + 1u32)
        * Complex::with_val(work, &four + 9u32)
        * Complex::with_val(work, &four + 25u32);
    let pt = Complex::with_val(work, &tw * &pi);
    let ch = Complex::with_val(work, pt.cosh_ref());
    let sh = Complex::with_val(work, pt.sinh_ref());
    let num = Complex::with_val(work, &t2 + 1u32)
        * &tw
        * Complex::with_val(work, ch.square_ref())
        * Float::with_val(work, 2u32).sqrt();
    Ok(Complex::with_val(prec, num * d_k(t, k, work)? / (den * sh)))
}

/// `lim_{t→∞} Φ̂(t)·t^{3−k} = √2/(128π)`.
pub fn phi_hat_stirling_limit(prec: u32) -> Float {
    Float::with_val(prec, 2u32).sqrt() / (Float::with_val(prec, Constant::Pi) * 128u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    /// `s = 2it`, parameter `t`.
    Imaginary,
    /// `s = ℓ` real.
    Real,
}

/// One quadrature check against the closed form.
#[derive(Clone, Debug, Serialize)]
pub struct TransformRow {
    pub kind: TransformKind,
    pub param: String,
    pub closed_re: String,
    pub closed_im: String,
    pub quad_re: String,
    pub quad_im: String,
    pub abs_err: f64,
    pub rel_err: f64,
    pub error_estimate: f64,
    /// The closed form was evaluated by its limit at a removable point.
    pub limit: bool,
}

/// Quadrature vs closed form for `s = 2it` at each `t` and `s = ℓ` at each `ℓ`.
pub fn transform_checks(ts: &[f64], ls: &[f64], u_max: f64, prec: u32) -> Result<Vec<TransformRow>> {
    let jobs: Vec<(TransformKind, f64)> = ts
        .iter()
        .map(|&t| (TransformKind::Imaginary, t))
        .chain(ls.iter().map(|&l| (TransformKind::Real, l)))
        .collect();
    jobs.par_iter()
        .map(|&(kind, x)| {
            let (s, closed) = match kind {
                TransformKind::Imaginary => {
                    let s = Complex::with_val(prec, (0, 2.0 * x));
                    (s, phi_tilde_imaginary_order(&Float::with_val(prec, x)))
                }
                TransformKind::Real => {
                    let s = Complex::with_val(prec, (x, 0));
                    let c = phi_tilde_closed(&s, prec);
                    (s, c)
                }
            };
            let q = phi_tilde_quadrature(&s, u_max, prec)?;
            let diff = Float::with_val(prec, Complex::with_val(prec, &q.value - &closed).abs_ref());
            let mag = Float::with_val(prec, closed.abs_ref());
            let rel = if mag.is_zero() {
                diff.clone()
            } else {
                Float::with_val(prec, &diff / &mag)
            };
            Ok(TransformRow {
                kind,
                param: format!("{x}"),
                closed_re: fmt_real(closed.real(), 20),
                closed_im: fmt_real(closed.imag(), 20),
                quad_re: fmt_real(q.value.real(), 20),
                quad_im: fmt_real(q.value.imag(), 20),
                abs_err: diff.to_f64(),
                rel_err: rel.to_f64(),
                error_estimate: q.error_estimate,
                limit: kind == TransformKind::Real && near_removable(&s, prec).is_some(),
            })
        })
        .collect()
}

/// `kind,param,closed_re,closed_im,quad_re,quad_im,abs_err,rel_err,error_estimate,limit` rows.
pub fn write_transform_csv<W: Write>(rows: &[TransformRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "kind",
            "param",
            "closed_re",
            "closed_im",
            "quad_re",
            "quad_im",
            "abs_err",
            "rel_err",
            "error_estimate",
            "limit",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `Φ̂` at one spectral parameter.
#[derive(Clone, Debug, Serialize)]
pub struct PhiHatRow {
    pub k: Weight,
    /// `t` real, or `t = i·y` when `imaginary` is set.
    pub t: f64,
    pub imaginary: bool,
    pub value: f64,
    /// `Φ̂(t)·t^{3−k}` for real `t`.
    pub scaled: f64,
}

/// `Φ̂` at real `t` and at `t = i·y` for each listed `y`.
pub fn phi_hat_grid(real_ts: &[f64], imag_ys: &[f64], k: Weight, prec: u32) -> Result<Vec<PhiHatRow>> {
    let jobs: Vec<(f64, bool)> = real_ts
        .iter()
        .map(|&t| (t, false))
        .chain(imag_ys.iter().map(|&y| (y, true)))
        .collect();
    jobs.par_iter()
        .map(|&(x, imaginary)| {
            let t = if imaginary {
                Complex::with_val(prec, (0, x))
            } else {
                Complex::with_val(prec, (x, 0))
            };
            let v = phi_hat(&t, k, prec)?;
            let tol = Float::with_val(prec, v.real().clone().abs()).max(&Float::with_val(prec, 1)) >> (prec as i32 / 2);
            if Float::with_val(prec, v.imag().abs_ref()) > tol {
                return Err(Error::Precision {
                    imag: fmt_real(v.imag(), 6),
                    bits: prec,
                });
            }
            let value = v.real().clone();
            let scaled = if imaginary {
                f64::NAN
            } else {
                let e = Float::with_val(prec, 3.0 - k.value());
                Float::with_val(prec, &value * Float::with_val(prec, Float::with_val(prec, x).pow(&e))).to_f64()
            };
            Ok(PhiHatRow {
                k,
                t: x,
                imaginary,
                value: value.to_f64(),
                scaled,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::close;

    const P: u32 = 128;

    #[test]
    fn phi_small_u() {
        assert!(phi_eval(&Float::new(P)).unwrap().is_zero());
        let u = Float::with_val(P, 1e-3);
        let ratio = phi_eval(&u).unwrap() / Float::with_val(P, u.square_ref()).square();
        assert!((ratio.to_f64() * 7560.0 - 1.0).abs() < 1e-6);
        // the series and the closed form agree across the switch
        for x in [PHI_SERIES_BELOW * 0.999, PHI_SERIES_BELOW * 1.001] {
            let u = Float::with_val(P, x);
            let direct = Float::with_val(P, Float::with_val(P, Constant::Pi) / 2u32).sqrt() / 8u32
                * bessel_j_half_odd(9, &u).unwrap()
                / u.clone().sqrt();
            let d = Float::with_val(P, &direct - phi_eval(&u).unwrap()).abs();
            assert!(d < Float::with_val(P, direct.abs_ref()) >> 100);
        }
        assert!(phi_eval(&Float::with_val(P, -1)).is_err());
    }

    #[test]
    fn phi_at_one() {
        let u = Float::with_val(P, 1);
        let j = bessel_j_half_odd(9, &u).unwrap();
        let want = Float::with_val(P, Float::with_val(P, Constant::Pi) / 2u32).sqrt() / 8u32 * j;
        let d = Float::with_val(P, phi_eval(&u).unwrap() - &want).abs();
        assert!(d < Float::with_val(P, want.abs_ref()) >> (P as i32 - 8));
    }

    #[test]
    fn closed_forms_consistent() {
        // the real-order form at s = 2it reproduces the imaginary-order form
        for t in [0.3f64, 1.0, 2.0, 5.0] {
            let a = phi_tilde_closed(&Complex::with_val(P, (0, 2.0 * t)), P);
            let b = phi_tilde_imaginary_order(&Float::with_val(P, t));
            assert!(close(&a, &b, &(Float::with_val(P, 1) >> 100)), "t={t}");
        }
        assert!(phi_tilde_closed(&Complex::with_val(P, (2, 0)), P).real().is_zero());
        // limits match nearby values
        for l in [1.0f64, 3.0, 5.0] {
            let at = phi_tilde_closed(&Complex::with_val(P, (l, 0)), P);
            let near = phi_tilde_closed(&Complex::with_val(P, (l + 1e-12, 0)), P);
            assert!(close(&at, &near, &Float::with_val(P, 1e-9)), "ℓ={l}");
        }
    }

    #[test]
    fn phi_hat_forms_agree_and_limit() {
        for k in [Weight::PlusHalf, Weight::MinusHalf] {
            for t in [0.1f64, 0.7, 3.0, 12.0] {
                let z = Complex::with_val(P, (t, 0));
                let a = phi_hat(&z, k, P).unwrap();
                let b = phi_hat_simplified(&z, k, P).unwrap();
                assert!(close(&a, &b, &(Float::with_val(P, 1) >> 90)), "k={k} t={t}");
            }
            let at0 = phi_hat(&Complex::new(P), k, P).unwrap();
            let near = phi_hat(&Complex::with_val(P, (1e-9, 0)), k, P).unwrap();
            assert!(close(&at0, &near, &Float::with_val(P, 1e-12)));
        }
        assert!(phi_hat(&Complex::with_val(P, (0, 0.25)), Weight::MinusHalf, P).is_err());
        assert!(phi_hat(&Complex::with_val(P, (0, 0.25)), Weight::PlusHalf, P).is_ok());
    }

    #[test]
    fn quadrature_small_grid() {
        let rows = transform_checks(&[1.0], &[2.5], U_MAX, P).unwrap();
        for r in rows {
            assert!(r.rel_err < 1e-8, "{r:?}");
        }
    }
}
