//! `J_s(u)` for complex order: power series below a switch point, Hankel's
//! expansion above it.

use rug::float::Constant;
use rug::{Complex, Float};

use super::gamma::gamma;
use crate::error::Result;

/// Hankel coefficients `a_k(s) = Π_{j≤k}(4s² − (2j−1)²) / (k!·8^k)`, `k < count`.
pub fn hankel_coeffs(s: &Complex, count: usize, prec: u32) -> Vec<Complex> {
    let four_s2 = Complex::with_val(prec, s.square_ref()) * 4u32;
    let mut out = Vec::with_capacity(count);
    let mut a = Complex::with_val(prec, (1, 0));
    out.push(a.clone());
    for k in 1..count {
        let odd = (2 * k - 1) as u64;
        a *= Complex::with_val(prec, &four_s2 - odd * odd);
        a /= (8 * k) as u64;
        out.push(a.clone());
    }
    out
}

/// `J_s` for one fixed order, prepared for many arguments in `(0, u_max]`.
pub struct BesselJ {
    s: Complex,
    prec: u32,
    /// Working precision of the power series.
    work: u32,
    inv_gamma: Complex,
    /// `Π_{j≤k} 1/(j(j+s))`.
    series: Vec<Complex>,
    hankel: Vec<Complex>,
    switch: f64,
}

impl BesselJ {
    /// `u_max` bounds the arguments handed to [`eval`](Self::eval).
    pub fn new(s: &Complex, u_max: f64, prec: u32) -> Result<Self> {
        // Hankel's expansion has smallest term ≈ e^{−2u}; above `switch` it
        // is accurate to 2^{−prec−16}.
        let switch = (f64::from(prec + 16) * std::f64::consts::LN_2 / 2.0 + 4.0 * s.real().to_f64().abs()).max(30.0);
        let top = u_max.min(switch);
        let work = prec + (top * std::f64::consts::LOG2_E).ceil() as u32 + 64;
        let sw = Complex::with_val(work, s);
        let inv_gamma = gamma(&Complex::with_val(work, &sw + 1u32), work)?.recip();
        let mut series = Vec::new();
        let mut c = Complex::with_val(work, (1, 0));
        series.push(c.clone());
        // terms (top/2)^{2k}/(k!)² fall below 2^{−work} once k ≳ e·top/2 + work/8
        let kmax = (top * 1.36 + f64::from(work) / 4.0) as usize + 16;
        for k in 1..=kmax {
            let d = Complex::with_val(work, &sw + k as u64) * k as u64;
            c /= d;
            series.push(c.clone());
        }
        let hankel = hankel_coeffs(&Complex::with_val(prec + 32, s), (2.0 * switch) as usize + 8, prec + 32);
        Ok(Self {
            s: Complex::with_val(prec, s),
            prec,
            work,
            inv_gamma,
            series,
            hankel,
            switch,
        })
    }

    pub fn switch(&self) -> f64 {
        self.switch
    }

    pub fn eval(&self, u: &Float) -> Complex {
        if u.to_f64() >= self.switch {
            self.eval_hankel(u)
        } else {
            self.eval_series(u)
        }
    }

    /// `(u/2)^s/Γ(s+1)·Σ C_k·(−u²/4)^k`.
    pub fn eval_series(&self, u: &Float) -> Complex {
        let work = self.work;
        let half = Float::with_val(work, u) / 2u32;
        let x = -Float::with_val(work, half.square_ref());
        let eps = Float::with_val(work, 1) >> (work as i32);
        let mut sum = Complex::with_val(work, &self.series[0]);
        let mut xp = Float::with_val(work, 1);
        let mut peak = Float::with_val(work, 1);
        let k_min = (u.to_f64() / 2.0) as usize + 1;
        for (k, c) in self.series.iter().enumerate().skip(1) {
            xp *= &x;
            let t = Complex::with_val(work, c * &xp);
            let mag = Float::with_val(work, t.abs_ref());
            sum += &t;
            if mag > peak {
                peak = mag.clone();
            }
            if k > k_min && mag < Float::with_val(work, &peak * &eps) {
                break;
            }
        }
        let ln_half = Float::with_val(work, half.ln_ref());
        let lead = Complex::with_val(work, &self.s * ln_half).exp() * &self.inv_gamma;
        Complex::with_val(self.prec, sum * lead)
    }

    /// `√(2/(πu))·(P cos ω − Q sin ω)` with `ω = u − sπ/2 − π/4`, summed to the
    /// smallest term.
    pub fn eval_hankel(&self, u: &Float) -> Complex {
        let work = self.prec + 32;
        let pi = Float::with_val(work, Constant::Pi);
        let uw = Float::with_val(work, u);
        let inv_u = Float::with_val(work, uw.recip_ref());
        let mut p = Complex::new(work);
        let mut q = Complex::new(work);
        let mut pow = Float::with_val(work, 1);
        let mut last = Float::with_val(work, f64::INFINITY);
        for (k, a) in self.hankel.iter().enumerate() {
            let t = Complex::with_val(work, a * &pow);
            let mag = Float::with_val(work, t.abs_ref());
            if k > 0 && mag > last {
                break;
            }
            // P = Σ (−1)^m a_{2m}/u^{2m}, Q = Σ (−1)^m a_{2m+1}/u^{2m+1}
            match k % 4 {
                0 => p += &t,
                1 => q += &t,
                2 => p -= &t,
                _ => q -= &t,
            }
            last = mag;
            pow *= &inv_u;
        }
        let omega = Complex::with_val(work, &uw - Complex::with_val(work, &self.s * &pi) / 2u32)
            - Float::with_val(work, &pi / 4u32);
        let (sin, cos) = omega.sin_cos(Complex::new(work));
        let amp = (Float::with_val(work, 2u32) / (pi * &uw)).sqrt();
        Complex::with_val(self.prec, (p * cos - q * sin) * amp)
    }
}
