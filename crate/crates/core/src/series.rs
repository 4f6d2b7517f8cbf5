//! Truncated Andrews and Rademacher series, residual reports and decay fits.
//!
//! The truncation parameter `N` always counts the `A_{2c}` index: the
//! Andrews series in `A`-form runs over `1 ≤ c ≤ N`, in `ψ`-form over even
//! moduli `c ≤ 2N`, and the Rademacher series over `1 ≤ c ≤ N`.

use std::io::Write;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

use crate::arith::{squarefree, Squarefree};
use crate::error::{Error, Result};
use crate::kloosterman::{a_c_direct, KloostermanTerms};
use crate::modular::Multiplier;
use crate::numerics::{bessel_i_half, bessel_i_three_half, e_of, fmt_real, PrecisionPolicy};
use crate::qseries::{alpha_exact, partition_exact};

/// Largest integer `c ≥ 0` with `c ≤ γ√n`, decided exactly.
pub fn cutoff(n: u64, gamma: &Rational) -> u64 {
    assert!(*gamma > 0, "γ must be positive");
    // c ≤ (p/q)√n  ⇔  c²q² ≤ p²n
    let bound = Integer::from(gamma.numer().square_ref()) * n;
    let q2 = Integer::from(gamma.denom().square_ref());
    let mut c = (Integer::from(&bound / &q2)).sqrt();
    while Integer::from(&c + 1u32).square() * &q2 <= bound {
        c += 1u32;
    }
    while c > 0 && Integer::from(c.square_ref()) * &q2 > bound {
        c -= 1u32;
    }
    c.to_u64().expect("cutoff fits in u64")
}

fn sum_complex(terms: &[Complex], prec: u32) -> Complex {
    let re: Vec<&Float> = terms.iter().map(|t| t.real()).collect();
    let im: Vec<&Float> = terms.iter().map(|t| t.imag()).collect();
    Complex::with_val(
        prec,
        (
            Float::with_val(prec, Float::sum(re.into_iter())),
            Float::with_val(prec, Float::sum(im.into_iter())),
        ),
    )
}

/// Real part of `z`, after checking `|Im z| ≤ 2^{24−P}·max(1, scale)`.
fn real_checked(z: Complex, scale: &Float, prec: u32) -> Result<Float> {
    let tol = Float::with_val(prec, scale.clone().max(&Float::with_val(prec, 1))) >> (prec as i32 - 24);
    if Float::with_val(prec, z.imag().abs_ref()) > tol {
        return Err(Error::Precision {
            imag: fmt_real(z.imag(), 6),
            bits: prec,
        });
    }
    Ok(z.into_real_imag().0)
}

/// Run `f` at `prec`; on a precision failure retry once at `2·prec`.
fn with_escalation<T>(prec: u32, f: impl Fn(u32) -> Result<T>) -> Result<T> {
    match f(prec) {
        Err(Error::Precision { .. }) => f(2 * prec),
        other => other,
    }
}

fn sqrt_d(n: u64, prec: u32) -> Float {
    Float::with_val(prec, 24 * n - 1).sqrt()
}

/// `(2π/D^{1/4})·e(−1/8)·Σ_{c even, c ≤ max_modulus} S(0,n,c,ψ)/c·I_{1/2}(π√D/(6c))`
/// as a complex number, with `Σ|terms|` for the imaginary-part check.
pub fn psi_form_complex(n: u64, max_modulus: u64, prec: u32) -> (Complex, Float) {
    assert!(n >= 1);
    let work = prec + 16;
    let sd = sqrt_d(n, work);
    let pi = Float::with_val(work, Constant::Pi);
    let arg0 = Float::with_val(work, &pi * &sd) / 6u32;
    let mut terms = Vec::new();
    let mut mags = Vec::new();
    for c in (2..=max_modulus).step_by(2) {
        let s = KloostermanTerms::new(c, Multiplier::PSI)
            .expect("even modulus")
            .sum(0, n as i64)
            .eval(work);
        let bessel = bessel_i_half(&Float::with_val(work, &arg0 / c)).expect("positive argument");
        let t = Complex::with_val(work, s * bessel / c);
        mags.push(Float::with_val(work, t.abs_ref()));
        terms.push(t);
    }
    let pre = Float::with_val(work, &pi * 2u32) / Float::with_val(work, sd.sqrt_ref());
    let sum = sum_complex(&terms, work) * e_of(-1, 8, work) * &pre;
    let scale = Float::with_val(work, Float::sum(mags.iter())) * &pre;
    (Complex::with_val(prec, sum), Float::with_val(prec, scale))
}

/// Andrews series in `ψ`-form, `c` even up to `2·cutoff`.
pub fn andrews_psi_form(n: u64, cutoff: u64, prec: u32) -> Result<Float> {
    with_escalation(prec, |p| {
        let (z, scale) = psi_form_complex(n, 2 * cutoff, p);
        real_checked(z, &scale, p).map(|x| Float::with_val(prec, x))
    })
}

/// Andrews series in `A`-form:
/// `(π/D^{1/4})·Σ_{c ≤ cutoff} (−1)^{⌊(c+1)/2⌋}·A_{2c}(n − c(1+(−1)^c)/4)/c·I_{1/2}(π√D/(12c))`.
pub fn andrews_a_form(n: u64, cutoff: u64, prec: u32) -> Result<Float> {
    assert!(n >= 1);
    with_escalation(prec, |p| {
        let work = p + 16;
        let sd = sqrt_d(n, work);
        let pi = Float::with_val(work, Constant::Pi);
        let arg0 = Float::with_val(work, &pi * &sd) / 12u32;
        let mut terms = Vec::new();
        let mut mags = Vec::new();
        for c in 1..=cutoff {
            let shift = if c % 2 == 0 { c / 2 } else { 0 };
            let mut a = a_c_direct(2 * c, n as i64 - shift as i64).eval(work);
            if c.div_ceil(2) % 2 == 1 {
                a = -a;
            }
            let bessel = bessel_i_half(&Float::with_val(work, &arg0 / c)).expect("positive argument");
            let t = Complex::with_val(work, a * bessel / c);
            mags.push(Float::with_val(work, t.abs_ref()));
            terms.push(t);
        }
        let pre = pi / Float::with_val(work, sd.sqrt_ref());
        let sum = sum_complex(&terms, work) * &pre;
        let scale = Float::with_val(work, Float::sum(mags.iter())) * &pre;
        real_checked(sum, &scale, work).map(|x| Float::with_val(prec, x))
    })
}

/// The truncated Andrews series; the `ψ`-form is the production path.
pub fn andrews_truncated(n: u64, cutoff: u64, prec: u32) -> Result<Float> {
    andrews_psi_form(n, cutoff, prec)
}

/// `(2π/D^{3/4})·Σ_{c ≤ cutoff} A_c(n)/c·I_{3/2}(π√D/(6c))`, `D = 24n − 1`.
pub fn rademacher_truncated(n: u64, cutoff: u64, prec: u32) -> Result<Float> {
    assert!(n >= 1);
    with_escalation(prec, |p| {
        let work = p + 16;
        let sd = sqrt_d(n, work);
        let pi = Float::with_val(work, Constant::Pi);
        let arg0 = Float::with_val(work, &pi * &sd) / 6u32;
        let mut terms = Vec::new();
        let mut mags = Vec::new();
        for c in 1..=cutoff {
            let a = a_c_direct(c, n as i64).eval(work);
            let bessel = bessel_i_three_half(&Float::with_val(work, &arg0 / c)).expect("positive argument");
            let t = Complex::with_val(work, a * bessel / c);
            mags.push(Float::with_val(work, t.abs_ref()));
            terms.push(t);
        }
        // D^{3/4} = D^{1/2}·D^{1/4}
        let d34 = Float::with_val(work, &sd * Float::with_val(work, sd.sqrt_ref()));
        let pre = Float::with_val(work, &pi * 2u32) / d34;
        let sum = sum_complex(&terms, work) * &pre;
        let scale = Float::with_val(work, Float::sum(mags.iter())) * &pre;
        real_checked(sum, &scale, work).map(|x| Float::with_val(prec, x))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// Andrews series for `α(n)`; squarefree flag refers to `24n − 1`.
    Mock,
    /// Rademacher series for `p(n)`; squarefree flag refers to `24n − 23`.
    Partition,
}

impl std::fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeriesKind::Mock => "mock",
            SeriesKind::Partition => "partition",
        })
    }
}

/// One truncated-series evaluation against the exact coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationReport {
    pub n: u64,
    pub gamma: Rational,
    /// `γ√n`.
    pub truncation: Float,
    /// `⌊γ√n⌋`, the last index summed.
    pub cutoff: u64,
    pub kind: SeriesKind,
    pub exact: Integer,
    pub series: Float,
    /// `exact − series`.
    pub residual: Float,
    pub squarefree: Squarefree,
    pub prec_bits: u32,
}

/// Flat, string-valued form of a report; the CSV and JSON schemas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub n: u64,
    #[serde(rename = "N")]
    pub truncation: String,
    pub gamma: String,
    pub kind: SeriesKind,
    pub exact: String,
    pub series: String,
    pub residual: String,
    pub squarefree: Squarefree,
    pub prec_bits: u32,
}

impl TruncationReport {
    pub fn row(&self) -> ReportRow {
        let int_digits = self.exact.significant_bits() as usize * 30103 / 100000 + 1;
        ReportRow {
            n: self.n,
            truncation: fmt_real(&self.truncation, 12),
            gamma: self.gamma.to_string(),
            kind: self.kind,
            exact: self.exact.to_string(),
            series: fmt_real(&self.series, int_digits + 20),
            residual: fmt_real(&self.residual, 20),
            squarefree: self.squarefree,
            prec_bits: self.prec_bits,
        }
    }

    /// True iff rounding the series to the nearest integer gives `exact`.
    pub fn rounds_to_exact(&self) -> bool {
        self.residual.clone().abs() < 0.5
    }
}

/// Report for one `n`, given the exact coefficient.
pub fn residual_report_with(
    n: u64,
    gamma: &Rational,
    kind: SeriesKind,
    exact: &Integer,
    policy: &PrecisionPolicy,
) -> Result<TruncationReport> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let cut = cutoff(n, gamma);
    let prec = policy.bits_for(n, cut as f64);
    let series = match kind {
        SeriesKind::Mock => andrews_truncated(n, cut, prec)?,
        SeriesKind::Partition => rademacher_truncated(n, cut, prec)?,
    };
    let residual = Float::with_val(prec, exact - &series);
    let truncation = Float::with_val(64, Float::with_val(64, n).sqrt() * gamma);
    let sf = match kind {
        SeriesKind::Mock => squarefree(24 * n - 1),
        SeriesKind::Partition => squarefree(24 * n - 23),
    };
    Ok(TruncationReport {
        n,
        gamma: gamma.clone(),
        truncation,
        cutoff: cut,
        kind,
        exact: exact.clone(),
        series,
        residual,
        squarefree: sf,
        prec_bits: prec,
    })
}

/// Report for one `n`; computes the exact coefficient table up to `n`.
pub fn residual_report(
    n: u64,
    gamma: &Rational,
    kind: SeriesKind,
    policy: &PrecisionPolicy,
) -> Result<TruncationReport> {
    let table = match kind {
        SeriesKind::Mock => alpha_exact(n as usize),
        SeriesKind::Partition => partition_exact(n as usize),
    };
    residual_report_with(n, gamma, kind, &table.values[n as usize], policy)
}

/// Reports for every `n` in `ns`, computed in parallel on the current rayon
/// pool and returned in input order.
pub fn residual_sweep(
    ns: &[u64],
    gamma: &Rational,
    kind: SeriesKind,
    policy: &PrecisionPolicy,
) -> Result<Vec<TruncationReport>> {
    let max_n = ns.iter().copied().max().unwrap_or(0) as usize;
    let table = match kind {
        SeriesKind::Mock => alpha_exact(max_n),
        SeriesKind::Partition => partition_exact(max_n),
    };
    ns.par_iter()
        .map(|&n| residual_report_with(n, gamma, kind, &table.values[n as usize], policy))
        .collect()
}

/// `n,N,gamma,kind,exact,series,residual,squarefree,prec_bits` rows.
pub fn write_reports_csv<W: Write>(reports: &[TruncationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r.row())?;
    }
    if reports.is_empty() {
        w.write_record([
            "n",
            "N",
            "gamma",
            "kind",
            "exact",
            "series",
            "residual",
            "squarefree",
            "prec_bits",
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares fit `log|residual| ≈ slope·log n + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 8;

/// Fit from `(n, |residual|)` pairs.
pub fn exponent_fit_points(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::Degenerate(format!(
            "{} points, need at least {MIN_FIT_POINTS}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(n, r)| n.is_nan() || n <= 0.0 || r == 0.0 || !r.is_finite())
    {
        return Err(Error::Domain("residuals must be finite and nonzero, n positive".into()));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.abs().ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * k {
        return Err(Error::Degenerate("all n are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = (rss / (k - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        slope_stderr,
        points: points.len(),
    })
}

/// Fit over reports that share one kind and one `γ`.
pub fn exponent_fit(reports: &[TruncationReport]) -> Result<ExponentFit> {
    if let Some(first) = reports.first() {
        if reports.iter().any(|r| r.kind != first.kind || r.gamma != first.gamma) {
            return Err(Error::Domain("reports mix kinds or γ values".into()));
        }
    }
    let pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.n as f64, r.residual.to_f64())).collect();
    exponent_fit_points(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Rational {
        Rational::from(1)
    }

    #[test]
    fn cutoff_exact() {
        assert_eq!(cutoff(1, &one()), 1);
        assert_eq!(cutoff(99, &one()), 9);
        assert_eq!(cutoff(100, &one()), 10);
        assert_eq!(cutoff(100, &Rational::from((1, 2))), 5);
        assert_eq!(cutoff(101, &Rational::from((1, 2))), 5);
        assert_eq!(cutoff(2, &Rational::from((1, 2))), 0);
    }

    #[test]
    fn single_term_values() {
        // n = 1, N = 1: one term c = 2 (ψ-form) / c = 1 (A-form).
        let p = 192;
        let a = andrews_a_form(1, 1, p).unwrap();
        let s = andrews_psi_form(1, 1, p).unwrap();
        let diff = Float::with_val(p, &a - &s).abs();
        assert!(diff < Float::with_val(p, 1) >> (p as i32 - 24));
        // A-form term: (π/23^{1/4})·(−1)·A_2(1)·I_{1/2}(π√23/12), A_2(1) = −1.
        let x = Float::with_val(p, Float::with_val(p, Constant::Pi) * Float::with_val(p, 23).sqrt()) / 12u32;
        let want = Float::with_val(p, Constant::Pi) / Float::with_val(p, 23).sqrt().sqrt() * bessel_i_half(&x).unwrap();
        assert!(Float::with_val(p, &a - &want).abs() < Float::with_val(p, 1) >> (p as i32 - 24));

        let r = rademacher_truncated(1, 1, p).unwrap();
        let x = Float::with_val(p, Float::with_val(p, Constant::Pi) * Float::with_val(p, 23).sqrt()) / 6u32;
        let d34 = Float::with_val(p, 23).sqrt() * Float::with_val(p, 23).sqrt().sqrt();
        let want = Float::with_val(p, Constant::Pi) * 2u32 / d34 * bessel_i_three_half(&x).unwrap();
        assert!(Float::with_val(p, &r - &want).abs() < Float::with_val(p, 1) >> (p as i32 - 24));
    }

    #[test]
    fn forms_agree() {
        let policy = PrecisionPolicy::default();
        for n in 1..=60u64 {
            let cut = cutoff(n, &one());
            let p = policy.bits_for(n, cut as f64);
            let a = andrews_a_form(n, cut, p).unwrap();
            let s = andrews_psi_form(n, cut, p).unwrap();
            let scale = a.clone().abs().max(&Float::with_val(p, 1));
            assert!(Float::with_val(p, &a - &s).abs() <= scale >> (p as i32 - 24), "n={n}");
        }
    }

    #[test]
    fn small_reports_round() {
        let policy = PrecisionPolicy::default();
        let ns: Vec<u64> = (1..=60).collect();
        for r in residual_sweep(&ns, &one(), SeriesKind::Mock, &policy).unwrap() {
            // n = 1 keeps a single term, 1.647…, while α(1) = 1.
            assert_eq!(r.rounds_to_exact(), r.n != 1, "alpha n={} residual={}", r.n, r.residual);
        }
        for r in residual_sweep(&ns, &one(), SeriesKind::Partition, &policy).unwrap() {
            assert!(r.rounds_to_exact(), "p n={} residual={}", r.n, r.residual);
        }
    }

    #[test]
    fn report_fields() {
        let policy = PrecisionPolicy::default();
        let r = residual_report(1, &one(), SeriesKind::Mock, &policy).unwrap();
        assert_eq!(r.squarefree, Squarefree::True);
        assert_eq!(r.exact, 1);
        assert_eq!(r.residual, Float::with_val(r.prec_bits, &r.exact - &r.series));
        let r = residual_report(24, &one(), SeriesKind::Mock, &policy).unwrap();
        assert_eq!(r.squarefree, Squarefree::False);
        let row = r.row();
        assert_eq!(row.kind, SeriesKind::Mock);
        assert_eq!(row.gamma, "1");
    }

    #[test]
    fn csv_schema() {
        let policy = PrecisionPolicy::default();
        let r = residual_report(5, &one(), SeriesKind::Partition, &policy).unwrap();
        let mut buf = Vec::new();
        write_reports_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,N,gamma,kind,exact,series,residual,squarefree,prec_bits"
        );
        assert!(lines.next().unwrap().starts_with("5,"));
    }

    #[test]
    fn fit_synthetic() {
        let pts: Vec<(f64, f64)> = (1..=20)
            .map(|n| (n as f64 * 10.0, (n as f64 * 10.0).powf(-0.5)))
            .collect();
        let f = exponent_fit_points(&pts).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-9);
        let flat: Vec<(f64, f64)> = (1..=10).map(|n| (n as f64, 0.25)).collect();
        assert!(exponent_fit_points(&flat).unwrap().slope.abs() < 1e-12);
        assert!(exponent_fit_points(&flat[..5]).is_err());
        let same: Vec<(f64, f64)> = (1..=10).map(|_| (7.0, 0.25)).collect();
        assert!(matches!(exponent_fit_points(&same), Err(Error::Degenerate(_))));
    }
}
