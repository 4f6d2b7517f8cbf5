//! Primes `p` at which `|F_{2p}(n)|` is bounded below, and the growth of the
//! absolute partial sums of the Andrews series they force.
//!
//! For `p ≥ 5` with `((1−24n)/p) = 1` let `m_p` satisfy
//! `48²m_p² ≡ 1 − 24n (mod p)`. Then
//! `F_{2p}(n) = 2√24·i·(−1)ⁿ·(−12/p)·e((p²−1)/48)·cos(4πm_p/p)`, and the set
//! `S` of primes with some `m_p/p ∈ (0, 1/16]` has `|F_{2p}(n)| ≥ 2√24·cos(π/4)`.

use std::io::Write;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float};
use serde::Serialize;

pub use crate::arith::sqrt_mod_p;
use crate::arith::{is_prime, legendre, mod_inverse, primes_up_to};
use crate::error::{Error, Result};
use crate::kloosterman::f_pairing;
use crate::modular::kronecker;
use crate::numerics::{bessel_i_half, e_of, fmt_real};

/// A prime of `S` with the square root realizing `m_p/p ≤ 1/16`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeWitness {
    pub p: u64,
    /// `0 < m_p < p`, `16·m_p ≤ p`.
    pub m_p: u64,
    pub ratio: f64,
    /// `1 + 24·ε ≡ p²(1 − 24n) (mod 48)`.
    pub eps_np: u8,
}

impl PrimeWitness {
    /// `|F_{2p}(n)| = 2√24·|cos(4πm_p/p)|`.
    pub fn f2p_abs(&self, prec: u32) -> Float {
        f2p_abs(self.p, self.m_p, prec)
    }
}

fn f2p_abs(p: u64, m: u64, prec: u32) -> Float {
    let angle = Float::with_val(prec, Constant::Pi) * 4u32 * m / p;
    Float::with_val(prec, 24).sqrt() * 2u32 * angle.cos().abs()
}

/// Both normalized solutions `0 ≤ m < p` of `48²m² ≡ 1 − 24n (mod p)`,
/// smaller first, or `None` when `1 − 24n` is a non-residue.
pub fn m_p_roots(p: u64, n: i64) -> Result<Option<(u64, u64)>> {
    if p < 5 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let t = 1 - 24 * n;
    let Some(r) = sqrt_mod_p(t, p)? else {
        return Ok(None);
    };
    let inv48 = mod_inverse(48, p).expect("p ≥ 5");
    let m = (u128::from(r) * u128::from(inv48) % u128::from(p)) as u64;
    let other = (p - m) % p;
    Ok(Some((m.min(other), m.max(other))))
}

/// `ε_{n,p} ∈ {0, 1}` with `1 + 24ε ≡ p²(1 − 24n) (mod 48)`.
pub fn eps_np(p: u64, n: i64) -> u8 {
    let v = (i128::from(p) * i128::from(p) * i128::from(1 - 24 * n)).rem_euclid(48);
    match v {
        1 => 0,
        25 => 1,
        _ => unreachable!("p ≥ 5 is prime to 6"),
    }
}

/// The witness at `p`, if `p ∈ S`.
pub fn witness(p: u64, n: i64) -> Result<Option<PrimeWitness>> {
    let Some((m, _)) = m_p_roots(p, n)? else {
        return Ok(None);
    };
    // p ∤ 1 − 24n forces m ≠ 0; ratio ≤ 1/16 ⇔ 16m ≤ p
    if m == 0 || 16 * m > p {
        return Ok(None);
    }
    Ok(Some(PrimeWitness {
        p,
        m_p: m,
        ratio: m as f64 / p as f64,
        eps_np: eps_np(p, n),
    }))
}

/// Closed form for `F_{2p}(n)`; requires `((1−24n)/p) = 1`.
pub fn f2p_closed_form(p: u64, n: i64, prec: u32) -> Result<Complex> {
    if p < 5 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if legendre(1 - 24 * n, p) != 1 {
        return Err(Error::NotResidue { t: 1 - 24 * n, p });
    }
    let (m, _) = m_p_roots(p, n)?.expect("residue");
    let work = prec + 16;
    let angle = Float::with_val(work, Constant::Pi) * 4u32 * m / p;
    let mut mag = Float::with_val(work, 24).sqrt() * 2u32 * angle.cos();
    if (n.rem_euclid(2) == 1) != (kronecker(-12, p as i64) == -1) {
        mag = -mag;
    }
    // i·e((p²−1)/48) = e((p²−1)/48 + 1/4) = e((p² + 11)/48)
    let phase = e_of((i128::from(p) * i128::from(p) % 48) as i64 + 11, 48, work);
    Ok(Complex::with_val(prec, phase * mag))
}

/// All witnesses with `p ≤ p_max`, ascending.
pub fn scan_set_s(n: i64, p_max: u64) -> Result<Vec<PrimeWitness>> {
    if n < 1 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().filter(|&p| p >= 5).collect();
    let found: Result<Vec<Option<PrimeWitness>>> = primes.par_iter().map(|&p| witness(p, n)).collect();
    Ok(found?.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityRow {
    pub x: u64,
    pub count: usize,
    pub pi_x: usize,
    pub density: f64,
}

/// `#S(X)/π(X)` at each `X` of the grid (the scan must reach `max(grid)`).
pub fn density_table(witnesses: &[PrimeWitness], grid: &[u64]) -> Vec<DensityRow> {
    grid.iter()
        .map(|&x| {
            let count = witnesses.iter().filter(|w| w.p <= x).count();
            let pi_x = primes_up_to(x).len();
            DensityRow {
                x,
                count,
                pi_x,
                density: count as f64 / pi_x.max(1) as f64,
            }
        })
        .collect()
}

/// `Σ_{c ≤ 2X even} |S(0,n,c,ψ)|/c·I_{1/2}(π√D/(6c))` against
/// `Σ_{p ∈ S, p ≤ X} 1/p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialSumRow {
    pub x: u64,
    pub partial_sum: String,
    pub prime_sum: String,
    pub ratio: f64,
}

/// `|S(0,n,2a,ψ)|/(2a)·I_{1/2}(π√D/(12a))`, with `|S(0,n,2a,ψ)| = √(a/24)·|F_{2a}(n)|`.
fn absolute_term(n: i64, a: u64, prec: u32) -> Float {
    let work = prec + 16;
    let f = f_pairing(a, n).eval(work);
    let s_abs = Float::with_val(work, f.abs_ref()) * (Float::with_val(work, a) / 24u32).sqrt();
    let d = Float::with_val(work, 24 * n - 1);
    let x = Float::with_val(work, Constant::Pi) * d.sqrt() / (12 * a);
    let i = bessel_i_half(&x).expect("positive argument");
    Float::with_val(prec, s_abs * i / (2 * a))
}

/// Absolute partial sums at each `X` of the grid (ascending), next to the
/// prime-reciprocal sum over `S`.
pub fn absolute_partial_sums(
    n: i64,
    grid: &[u64],
    witnesses: &[PrimeWitness],
    prec: u32,
) -> Result<Vec<PartialSumRow>> {
    if n < 1 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid.first().is_some_and(|&x| x < 2) {
        return Err(Error::Domain("grid must be ascending and start at X ≥ 2".into()));
    }
    let top = grid.last().copied().unwrap_or(0);
    let terms: Vec<Float> = (1..=top).into_par_iter().map(|a| absolute_term(n, a, prec)).collect();
    let mut rows = Vec::with_capacity(grid.len());
    for &x in grid {
        let partial = Float::with_val(prec, Float::sum(terms[..x as usize].iter()));
        let recips: Vec<Float> = witnesses
            .iter()
            .filter(|w| w.p <= x)
            .map(|w| Float::with_val(prec, w.p).recip())
            .collect();
        let prime_sum = Float::with_val(prec, Float::sum(recips.iter()));
        let ratio = if prime_sum.is_zero() {
            f64::INFINITY
        } else {
            Float::with_val(prec, &partial / &prime_sum).to_f64()
        };
        rows.push(PartialSumRow {
            x,
            partial_sum: fmt_real(&partial, 20),
            prime_sum: fmt_real(&prime_sum, 20),
            ratio,
        });
    }
    Ok(rows)
}

/// Single partial sum up to `X`.
pub fn absolute_partial_sum(n: i64, x: u64, prec: u32) -> Result<Float> {
    if n < 1 || x < 2 {
        return Err(Error::Domain("need n ≥ 1 and X ≥ 2".into()));
    }
    let terms: Vec<Float> = (1..=x).into_par_iter().map(|a| absolute_term(n, a, prec)).collect();
    Ok(Float::with_val(prec, Float::sum(terms.iter())))
}

/// `p,m_p,ratio,F2p_abs` rows.
pub fn write_witnesses_csv<W: Write>(witnesses: &[PrimeWitness], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "m_p", "ratio", "F2p_abs"])?;
    for x in witnesses {
        w.write_record([
            x.p.to_string(),
            x.m_p.to_string(),
            format!("{:.12}", x.ratio),
            fmt_real(&x.f2p_abs(64), 16),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::f_c;
    use crate::numerics::close;

    const P: u32 = 192;

    #[test]
    fn closed_form_matches_direct() {
        let tol = Float::with_val(P, 1) >> (P as i32 - 16);
        for p in primes_up_to(300).into_iter().filter(|&p| p >= 5) {
            for n in 1..=20i64 {
                match f2p_closed_form(p, n, P) {
                    Ok(z) => assert!(close(&z, &f_c(2 * p, n, P), &tol), "p={p} n={n}"),
                    Err(Error::NotResidue { .. }) => assert!(legendre(1 - 24 * n, p) != 1),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn witness_congruences() {
        for w in scan_set_s(1, 20_000).unwrap() {
            let p = w.p as u128;
            let lhs = (48 * 48 * u128::from(w.m_p) * u128::from(w.m_p)) % p;
            assert_eq!(lhs as i128, (1i128 - 24).rem_euclid(p as i128));
            assert!(w.m_p > 0 && 16 * w.m_p <= w.p);
            assert_eq!(
                (1 + 24 * u64::from(w.eps_np)) as i128,
                ((p * p) as i128 * -23).rem_euclid(48)
            );
            let floor = Float::with_val(64, 24).sqrt() * 2u32 * Float::with_val(64, 0.5).sqrt();
            assert!(w.f2p_abs(64) >= floor * (1.0 - 1e-15));
        }
    }

    #[test]
    fn both_roots_scan_oracle() {
        // Brute force over m in (0, p/16].
        for p in primes_up_to(2000).into_iter().filter(|&p| p >= 5) {
            let target = (1i64 - 24).rem_euclid(p as i64) as u64;
            let brute = (1..=p / 16).find(|&m| 48 * 48 * m * m % p == target);
            let w = witness(p, 1).unwrap();
            assert_eq!(w.map(|w| w.m_p), brute, "p={p}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(f2p_closed_form(9, 1, 64), Err(Error::NotPrime(9))));
        assert!(matches!(m_p_roots(3, 1), Err(Error::NotPrime(3))));
        // 1 − 24 = −23 ≡ 0 (mod 23)
        assert!(matches!(f2p_closed_form(23, 1, 64), Err(Error::NotResidue { .. })));
    }

    #[test]
    fn partial_sums_monotone() {
        let ws = scan_set_s(1, 2000).unwrap();
        let rows = absolute_partial_sums(1, &[10, 100, 1000, 2000], &ws, 64).unwrap();
        for pair in rows.windows(2) {
            let a: f64 = pair[0].partial_sum.parse().unwrap();
            let b: f64 = pair[1].partial_sum.parse().unwrap();
            assert!(b > a);
        }
        let direct = absolute_partial_sum(1, 100, 64).unwrap().to_f64();
        let from_rows: f64 = rows[1].partial_sum.parse().unwrap();
        assert!((direct - from_rows).abs() < 1e-12 * direct);
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        write_witnesses_csv(&scan_set_s(1, 100).unwrap(), &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("p,m_p,ratio,F2p_abs\n"));
    }
}
