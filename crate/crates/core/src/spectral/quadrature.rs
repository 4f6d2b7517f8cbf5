//! Tanh–sinh quadrature on finite panels, and the analytic tail of
//! `∫ J_s(u)·Φ(u) du/u` beyond the last panel.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::bessel::hankel_coeffs;
use crate::error::{Error, Result};

/// Tanh–sinh nodes for `h = 2^{−max_level}`, stored by distance to the
/// nearest endpoint so that nodes crowding an endpoint keep full precision.
pub struct TanhSinh {
    max_level: u32,
    /// `(d_j, w_j)` for `t_j = j·2^{−max_level} ≥ 0`: node `±(1 − d_j)`, weight `w_j`.
    nodes: Vec<(Float, Float)>,
    prec: u32,
}

impl TanhSinh {
    pub fn new(max_level: u32, prec: u32) -> Self {
        let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
        let eps = Float::with_val(prec, 1) >> (prec as i32 + 8);
        let step = Float::with_val(prec, 1) >> max_level as i32;
        let mut nodes = Vec::new();
        for j in 0u32.. {
            let t = Float::with_val(prec, &step * j);
            let (sh, ch) = t.sinh_cosh(Float::new(prec));
            let y = Float::with_val(prec, &half_pi * sh);
            let e2y = Float::with_val(prec, &y * 2u32).exp();
            let d = Float::with_val(prec, 2u32) / (e2y + 1u32);
            let cy = y.cosh();
            let w = Float::with_val(prec, &half_pi * ch) / cy.square();
            if w < eps && j > 0 {
                break;
            }
            nodes.push((d, w));
        }
        Self { max_level, nodes, prec }
    }

    /// `∫_a^b f`, refining level by level until successive estimates differ
    /// by at most `tol`; returns the estimate and the last difference.
    pub fn integrate<F: Fn(&Float) -> Complex>(
        &self,
        f: F,
        a: &Float,
        b: &Float,
        tol: &Float,
    ) -> Result<(Complex, Float)> {
        let prec = self.prec;
        let half = Float::with_val(prec, b - a) / 2u32;
        let eval_pair = |j: usize| -> Complex {
            let (d, w) = &self.nodes[j];
            let off = Float::with_val(prec, &half * d);
            let left = f(&Float::with_val(prec, a + &off));
            if j == 0 {
                return Complex::with_val(prec, left * w);
            }
            let right = f(&Float::with_val(prec, b - &off));
            Complex::with_val(prec, (left + right) * w)
        };
        // level 0: j multiples of 2^{max_level}
        let stride0 = 1usize << self.max_level;
        let mut raw = Complex::new(prec);
        for j in (0..self.nodes.len()).step_by(stride0) {
            raw += eval_pair(j);
        }
        let mut estimate = Complex::with_val(prec, &raw * &half);
        let mut diff = Float::with_val(prec, f64::INFINITY);
        for level in 1..=self.max_level {
            let stride = 1usize << (self.max_level - level);
            for j in (stride..self.nodes.len()).step_by(2 * stride) {
                raw += eval_pair(j);
            }
            let h = Float::with_val(prec, 1) >> level as i32;
            let next = Complex::with_val(prec, &raw * &h) * &half;
            diff = Float::with_val(prec, Complex::with_val(prec, &next - &estimate).abs_ref());
            estimate = next;
            if level >= 3 && diff <= *tol {
                return Ok((estimate, diff));
            }
        }
        Err(Error::NonConvergence {
            estimate: diff.to_f64(),
            tolerance: tol.to_f64(),
        })
    }
}

/// `∫_U^∞ u^{−b}·e^{icu} du = −(e^{icU}U^{−b}/(ic))·Σ_k (b)_k/(icU)^k`, summed to
/// its smallest term.
fn oscillatory_tail(b: &Float, c: i32, upper: &Float, prec: u32) -> Complex {
    let icu = Complex::with_val(prec, (0, Float::with_val(prec, upper * c)));
    let eps = Float::with_val(prec, 1) >> (prec as i32 + 8);
    let mut term = Complex::with_val(prec, (1, 0));
    let mut sum = Complex::with_val(prec, (1, 0));
    let mut last = Float::with_val(prec, 1);
    for k in 0u32..10_000 {
        term *= Float::with_val(prec, b + k);
        term /= &icu;
        let mag = Float::with_val(prec, term.abs_ref());
        if mag > last || mag < eps {
            break;
        }
        sum += &term;
        last = mag;
    }
    let ic = Complex::with_val(prec, (0, c));
    let lead = Complex::with_val(prec, icu.exp_ref()) * upper.clone().pow(Float::with_val(prec, -b));
    -(lead * sum) / ic
}

/// `∫_U^∞ J_s(u)·(1/8)√(π/2)·u^{−3/2}·J_{9/2}(u) du` from Hankel's
/// expansions of both Bessel factors, with the size of the last group of
/// terms kept as an error estimate.
pub fn phi_tilde_tail(s: &Complex, upper: f64, prec: u32) -> (Complex, Float) {
    let work = prec + 32;
    let pi = Float::with_val(work, Constant::Pi);
    let u = Float::with_val(work, upper);
    let terms = 48usize;
    let a_s = hankel_coeffs(s, terms, work);
    let nu = Complex::with_val(work, (4.5, 0));
    let a_nu = hankel_coeffs(&nu, 5, work);

    let quarter = Float::with_val(work, &pi / 4u32);
    let theta_s = Complex::with_val(work, s * &pi) / 2u32 + &quarter;
    let theta_nu = Complex::with_val(work, &nu * &pi) / 2u32 + &quarter;
    let i_unit = Complex::with_val(work, (0, 1));
    let powers = |sigma: i32| -> Vec<Complex> {
        let base = Complex::with_val(work, &i_unit * sigma);
        let mut out = vec![Complex::with_val(work, (1, 0))];
        for k in 1..terms {
            let next = Complex::with_val(work, &out[k - 1] * &base);
            out.push(next);
        }
        out
    };

    let mut total = Complex::new(work);
    let mut err = Float::new(work);
    for (s1, s2) in [(1i32, 1i32), (-1, -1), (1, -1), (-1, 1)] {
        let p1 = powers(s1);
        let p2 = powers(s2);
        // e^{−i(σ₁θ_s + σ₂θ_ν)}
        let shift = Complex::with_val(work, &theta_s * s1) + Complex::with_val(work, &theta_nu * s2);
        let phase = Complex::with_val(work, -(shift * &i_unit)).exp();
        let mut group_sum = Complex::new(work);
        let mut last_group = Float::new(work);
        for m in 0..terms {
            let mut r = Complex::new(work);
            for k in 0..=m.min(4) {
                let j = m - k;
                r += Complex::with_val(work, &p1[j] * &a_s[j]) * Complex::with_val(work, &p2[k] * &a_nu[k]);
            }
            let b = Float::with_val(work, 5) / 2u32 + m as u32;
            let integral = if s1 + s2 == 0 {
                let e = Float::with_val(work, &b - 1u32);
                Complex::with_val(work, (u.clone().pow(Float::with_val(work, -&e)) / e, 0))
            } else {
                oscillatory_tail(&b, s1 + s2, &u, work)
            };
            let contrib = Complex::with_val(work, r * integral);
            last_group = Float::with_val(work, contrib.abs_ref());
            group_sum += contrib;
        }
        total += group_sum * phase;
        err += last_group;
    }
    // (1/8)√(π/2)/(2π) = 1/(16√(2π))
    let c0 = Float::with_val(work, Float::with_val(work, &pi * 2u32).sqrt() * 16u32).recip();
    let scale = Float::with_val(work, theta_s.imag().abs_ref()).exp();
    (
        Complex::with_val(prec, total * &c0),
        Float::with_val(prec, err * c0 * scale),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    #[test]
    fn polynomial_and_endpoint_singularity() {
        let ts = TanhSinh::new(7, P);
        let a = Float::with_val(P, 0);
        let b = Float::with_val(P, 2);
        let tol = Float::with_val(P, 1) >> 150;
        let (v, _) = ts
            .integrate(
                |x| Complex::with_val(P, (Float::with_val(P, x.square_ref()), 0)),
                &a,
                &b,
                &tol,
            )
            .unwrap();
        assert!(Float::with_val(P, v.real() - Float::with_val(P, 8) / 3u32).abs() < Float::with_val(P, 1) >> 140);
        // ∫_0^1 x^{−1/2} = 2
        let one = Float::with_val(P, 1);
        let (v, _) = ts
            .integrate(
                |x| Complex::with_val(P, (Float::with_val(P, x.sqrt_ref()).recip(), 0)),
                &a,
                &one,
                &(Float::with_val(P, 1) >> 100),
            )
            .unwrap();
        assert!(Float::with_val(P, v.real() - 2u32).abs() < Float::with_val(P, 1) >> 90);
    }

    #[test]
    fn oscillatory_tail_matches_quadrature() {
        // ∫_60^∞ u^{−5/2} e^{2iu} du, checked against panels on [60, 400] plus
        // the asymptotic series from 400.
        let ts = TanhSinh::new(8, P);
        let b = Float::with_val(P, 2.5);
        let mut acc = Complex::new(P);
        let tol = Float::with_val(P, 1) >> 120;
        for k in 0..170 {
            let lo = Float::with_val(P, 60 + 2 * k);
            let hi = Float::with_val(P, 62 + 2 * k);
            let (v, _) = ts
                .integrate(
                    |x| {
                        let ph = Complex::with_val(P, (0, Float::with_val(P, x * 2u32))).exp();
                        ph * x.clone().pow(Float::with_val(P, -2.5))
                    },
                    &lo,
                    &hi,
                    &tol,
                )
                .unwrap();
            acc += v;
        }
        acc += oscillatory_tail(&b, 2, &Float::with_val(P, 400), P);
        let direct = oscillatory_tail(&b, 2, &Float::with_val(P, 60), P);
        let d = Float::with_val(P, Complex::with_val(P, &acc - &direct).abs_ref());
        assert!(d < 1e-25, "{acc} vs {direct}");
    }
}
