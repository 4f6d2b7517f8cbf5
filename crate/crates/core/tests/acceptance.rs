//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit if
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rayon::ThreadPoolBuilder;
use rug::{Complex, Float, Rational};

use mocktheta::divergence::{absolute_partial_sums, density_table, f2p_closed_form, scan_set_s, write_witnesses_csv};
use mocktheta::heegner::{enumerate_forms, identity_sides, write_forms_csv};
use mocktheta::kloosterman::{f_c, near_extremal_ratio, NEAR_EXTREMAL};
use mocktheta::numerics::{close, PrecisionPolicy};
use mocktheta::series::{residual_sweep, write_reports_csv, SeriesKind};
use mocktheta::spectral::{phi_hat_grid, phi_hat_stirling_limit, transform_checks, Weight, U_MAX};
use mocktheta::suites::{
    a2c_psi_suite, dedekind_suite, eta_agreement_suite, f_relation_suite, gauss_suite, lehmer_suite, psi_weil_suite,
    qseries_suite, selberg_whiteman_suite, twisted_theta_weil_suite, SuiteResult,
};

/// Outcome of one criterion: pass flag and detail lines.
struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details
            .push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn suite(&mut self, r: &SuiteResult) {
        let first = r.failures.first().map(|f| format!(", first: {f}")).unwrap_or_default();
        self.check(
            r.passed(),
            format!("{}: {} checked, {} failed{first}", r.name, r.checked, r.failed),
        );
    }
}

fn criterion1() -> Outcome {
    const P: u32 = 192;
    let mut o = Outcome::new();
    o.suite(&a2c_psi_suite(200, 50, P));
    o.suite(&f_relation_suite(200, 50, P));
    o.suite(&selberg_whiteman_suite(200, 24, P));
    o.suite(&gauss_suite(48, 48, P));
    o
}

fn criterion2() -> Outcome {
    const P: u32 = 192;
    let mut o = Outcome::new();
    let tol = Float::with_val(P, 1) >> (P as i32 - 32);
    for g in [1, 2] {
        let gamma = Rational::from(g);
        let mut bad = Vec::new();
        let mut worst = Float::with_val(64, 0);
        for n in 1..=200u64 {
            let (k, h) = identity_sides(n, &gamma, P).expect("valid input");
            let diff = Float::with_val(64, Float::with_val(P, &k - &h).abs_ref());
            worst = worst.max(&diff);
            if !close(&Complex::with_val(P, &k), &Complex::with_val(P, &h), &tol) {
                bad.push(n);
            }
        }
        o.check(
            bad.is_empty(),
            format!("gamma={g}: n ≤ 200, worst |difference| {worst:.3e}, failures {bad:?}"),
        );
    }
    o
}

fn criterion3() -> Outcome {
    let mut o = Outcome::new();
    let one = Rational::from(1);
    let policy = PrecisionPolicy::default();
    for (kind, top) in [(SeriesKind::Mock, 500u64), (SeriesKind::Partition, 2000)] {
        let ns: Vec<u64> = (1..=top).collect();
        let reports = residual_sweep(&ns, &one, kind, &policy).expect("series evaluates");
        let bad: Vec<String> = reports
            .iter()
            .filter(|r| !r.rounds_to_exact())
            .map(|r| format!("n={} series={:.6} exact={}", r.n, r.series.to_f64(), r.exact))
            .collect();
        let worst = reports
            .iter()
            .filter(|r| r.rounds_to_exact())
            .map(|r| r.residual.to_f64().abs())
            .fold(0.0, f64::max);
        o.check(
            bad.is_empty(),
            format!("{kind} 1 ≤ n ≤ {top}: worst rounding |residual| {worst:.3}, failures {bad:?}"),
        );
    }
    o
}

fn criterion4() -> Outcome {
    const P: u32 = 128;
    let mut o = Outcome::new();
    o.suite(&lehmer_suite(200, 50, P));
    o.suite(&psi_weil_suite(200, 50, P));
    o.suite(&twisted_theta_weil_suite(24, 1440, 24, P));
    o.suite(&twisted_theta_weil_suite(144, 1440, 24, P));
    let (c, n) = NEAR_EXTREMAL;
    let ratio = near_extremal_ratio(c, n, P).to_f64();
    o.check(
        (ratio - 0.99992).abs() <= 1e-4,
        format!("near-extremal ratio at c={c}, n={n}: {ratio:.6}"),
    );
    o
}

fn criterion5() -> Outcome {
    const P: u32 = 256;
    let mut o = Outcome::new();
    let ts = [1.0, 2.0, 5.0];
    let ls = [1.0, 2.0, 2.5, 3.0, 4.5, 5.0, 6.5];
    match transform_checks(&ts, &ls, U_MAX, P) {
        Ok(rows) => {
            for r in rows {
                let err = if r.closed_re == "0" && r.closed_im == "0" {
                    r.abs_err
                } else {
                    r.rel_err
                };
                let tag = if r.limit { " (limit)" } else { "" };
                o.check(err < 1e-8, format!("{:?} {}{tag}: error {err:.2e}", r.kind, r.param));
            }
        }
        Err(e) => o.check(false, format!("quadrature: {e}")),
    }
    let real: Vec<f64> = (1..=100).map(|j| j as f64 / 10.0).collect();
    let floor_grid: Vec<f64> = (2..=100).map(|j| j as f64 / 2.0).collect();
    let limit = phi_hat_stirling_limit(64).to_f64();
    for (k, ys) in [
        (Weight::PlusHalf, vec![0.05, 0.1, 0.15, 0.2, 0.24, 0.25]),
        (Weight::MinusHalf, vec![0.05, 0.1, 0.15, 0.2, 0.24]),
    ] {
        match phi_hat_grid(&real, &ys, k, 128) {
            Ok(rows) => {
                let neg: Vec<String> = rows
                    .iter()
                    .filter(|r| r.value <= 0.0)
                    .map(|r| format!("{}{}", r.t, if r.imaginary { "i" } else { "" }))
                    .collect();
                o.check(
                    neg.is_empty(),
                    format!(
                        "k={k}: Φ̂ > 0 on t ∈ [0.1, 10] and t = iy, y ≤ {}: non-positive at {neg:?}",
                        ys.last().unwrap()
                    ),
                );
            }
            Err(e) => o.check(false, format!("k={k}: {e}")),
        }
        match phi_hat_grid(&floor_grid, &[], k, 128) {
            Ok(rows) => {
                let min = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
                let at_50 = rows.last().expect("nonempty").scaled;
                o.check(
                    min > 0.0 && (at_50 / limit - 1.0).abs() < 0.01,
                    format!("k={k}: min Φ̂·t^(3-k) on [1, 50] = {min:.4e}, at t=50 {at_50:.6e} vs limit {limit:.6e}"),
                );
            }
            Err(e) => o.check(false, format!("k={k}: {e}")),
        }
    }
    o
}

fn criterion6() -> Outcome {
    const P: u32 = 128;
    let mut o = Outcome::new();
    let tol = Float::with_val(P, 1) >> (P as i32 - 24);
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=20 {
        for w in scan_set_s(n, 500).expect("valid n") {
            checked += 1;
            let closed = f2p_closed_form(w.p, n, P).expect("admissible prime");
            if !close(&closed, &f_c(2 * w.p, n, P), &tol) {
                bad.push((w.p, n));
            }
        }
    }
    o.check(
        bad.is_empty() && checked > 0,
        format!("F_2p closed form vs direct: {checked} admissible (p, n) with p ≤ 500, n ≤ 20, failures {bad:?}"),
    );
    let grid = [1_000, 10_000, 100_000];
    let ws = scan_set_s(1, 100_000).expect("valid n");
    for row in density_table(&ws, &grid) {
        o.check(
            row.density > 0.05,
            format!(
                "#S(X)/π(X) at X={}: {}/{} = {:.4}",
                row.x, row.count, row.pi_x, row.density
            ),
        );
    }
    let sums = absolute_partial_sums(1, &grid, &ws, P).expect("valid grid");
    let values: Vec<f64> = sums.iter().map(|r| r.partial_sum.parse().expect("decimal")).collect();
    o.check(
        values.windows(2).all(|w| w[0] < w[1]),
        format!("absolute partial sums at X = {grid:?}: {values:?}"),
    );
    o
}

fn criterion7() -> Outcome {
    let mut o = Outcome::new();
    o.suite(&dedekind_suite(500));
    o.suite(&eta_agreement_suite(100));
    o.suite(&qseries_suite(40, 30));
    o
}

/// Every tabular output of a fixed job, rendered to bytes.
fn artifacts() -> Vec<u8> {
    let mut out = Vec::new();
    let one = Rational::from(1);
    let ns: Vec<u64> = (1..=150).collect();
    let policy = PrecisionPolicy::default();
    for kind in [SeriesKind::Mock, SeriesKind::Partition] {
        let reports = residual_sweep(&ns, &one, kind, &policy).expect("series evaluates");
        write_reports_csv(&reports, &mut out).expect("in-memory write");
    }
    let forms = enumerate_forms(24 * 150 - 1, &Rational::from((1, 24))).expect("valid discriminant");
    write_forms_csv(&forms, 128, &mut out).expect("in-memory write");
    let ws = scan_set_s(1, 20_000).expect("valid n");
    write_witnesses_csv(&ws, &mut out).expect("in-memory write");
    let sums = absolute_partial_sums(1, &[1_000, 20_000], &ws, 128).expect("valid grid");
    out.extend(serde_json::to_vec(&sums).expect("serializable"));
    out.extend(serde_json::to_vec(&a2c_psi_suite(40, 10, 128)).expect("serializable"));
    let rows = transform_checks(&[1.0], &[2.5], U_MAX, 128).expect("quadrature converges");
    out.extend(serde_json::to_vec(&rows).expect("serializable"));
    out
}

fn criterion8() -> Outcome {
    let mut o = Outcome::new();
    let runs: Vec<(usize, Vec<u8>)> = [1, 2, 4, 1]
        .iter()
        .map(|&t| {
            let pool = ThreadPoolBuilder::new().num_threads(t).build().expect("thread pool");
            (t, pool.install(artifacts))
        })
        .collect();
    let reference = &runs[0].1;
    for (t, bytes) in &runs[1..] {
        o.check(
            bytes == reference,
            format!("{} bytes with {t} threads identical to the 1-thread run", bytes.len()),
        );
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 identity suite", criterion1),
        ("2 Heegner identity", criterion2),
        ("3 rounding to exact coefficients", criterion3),
        ("4 bound suite", criterion4),
        ("5 spectral transforms", criterion5),
        ("6 divergence construction", criterion6),
        ("7 arithmetic substrate", criterion7),
        ("8 determinism", criterion8),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        for d in &o.details {
            println!("      {d}");
        }
        println!(
            "[{}] criterion {name} ({secs:.1} s)",
            if o.pass { "PASS" } else { "FAIL" }
        );
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
