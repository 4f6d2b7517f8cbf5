use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rug::{Float, Integer, Rational};
use serde::Serialize;

use mocktheta::divergence::{absolute_partial_sums, density_table, scan_set_s, write_witnesses_csv};
use mocktheta::heegner::{enumerate_forms, heegner_sum, kloosterman_side, write_forms_csv};
use mocktheta::kloosterman::{gauss_sum, kloosterman_s};
use mocktheta::modular::{dedekind_sum, dedekind_sum_scaled, Multiplier};
use mocktheta::numerics::{fmt_real, PrecisionPolicy};
use mocktheta::qseries::{alpha_exact, partition_exact};
use mocktheta::series::{cutoff, exponent_fit, residual_sweep, write_reports_csv, SeriesKind};
use mocktheta::spectral::{phi_hat_grid, transform_checks, write_transform_csv, Weight, U_MAX};
use mocktheta::suites::{identity_suites, SuiteResult};

/// Numeric failures (precision exhaustion, non-convergence) exit with this.
const EXIT_NUMERIC: u8 = 3;
/// A verification ran and found a failing case.
const EXIT_CHECK: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "mocktheta",
    version,
    about = "Coefficients of the mock theta function f(q) and their exact formulas"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Working precision in bits, or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_prec, global = true)]
    prec: Prec,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, env = "MTHETA_THREADS", default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Prec {
    Auto,
    Bits(u32),
}

impl Prec {
    fn policy(self) -> PrecisionPolicy {
        match self {
            Prec::Auto => PrecisionPolicy::default(),
            Prec::Bits(b) => PrecisionPolicy::fixed(b),
        }
    }

    /// Bits for a job whose largest index is `n` with `terms` series terms.
    fn bits(self, n: u64, terms: u64) -> u32 {
        self.policy().bits_for(n, terms as f64)
    }
}

fn parse_prec(s: &str) -> Result<Prec, String> {
    if s == "auto" {
        return Ok(Prec::Auto);
    }
    let bits: u32 = s
        .parse()
        .map_err(|_| format!("`{s}` is neither `auto` nor a bit count"))?;
    if bits < 64 {
        return Err(format!("precision must be at least 64 bits, got {bits}"));
    }
    Ok(Prec::Bits(bits))
}

/// `p`, `p/q` or a terminating decimal, strictly positive.
fn parse_gamma(s: &str) -> Result<Rational, String> {
    let r = if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let num: Integer = digits.parse().map_err(|_| format!("bad decimal `{s}`"))?;
        Rational::from((num, Integer::from(Integer::u_pow_u(10, frac.len() as u32))))
    } else {
        s.parse::<Rational>().map_err(|_| format!("bad rational `{s}`"))?
    };
    if r <= 0 {
        return Err(format!("gamma must be positive, got {s}"));
    }
    Ok(r)
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    match s {
        "1/2" | "0.5" => Ok(Weight::PlusHalf),
        "-1/2" | "-0.5" => Ok(Weight::MinusHalf),
        _ => Err(format!("weight must be 1/2 or -1/2, got {s}")),
    }
}

fn parse_multiplier(s: &str) -> Result<Multiplier, String> {
    let (base, conj) = match s.strip_suffix("-conj") {
        Some(b) => (b, true),
        None => (s, false),
    };
    let m = match base {
        "eta" => Multiplier::ETA,
        "theta" => Multiplier::THETA,
        "psi" => Multiplier::PSI,
        _ => {
            let disc = base
                .strip_prefix("theta:")
                .and_then(|d| d.parse::<i64>().ok())
                .ok_or_else(|| format!("unknown multiplier `{s}`"))?;
            Multiplier::twisted_theta(disc).map_err(|e| e.to_string())?
        }
    };
    Ok(if conj { m.conj() } else { m })
}

/// A single `--n`, or an inclusive `--n-min..=--n-max` range.
#[derive(Args, Debug)]
struct NRange {
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<u64>,
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    /// Step through the range.
    #[arg(long, default_value_t = 1)]
    step: u64,
}

impl NRange {
    fn values(&self) -> Result<Vec<u64>, String> {
        let (lo, hi) = match (self.n, self.n_min, self.n_max) {
            (Some(n), _, _) => (n, n),
            (None, lo, Some(hi)) => (lo.unwrap_or(1), hi),
            _ => return Err("give --n or --n-max".into()),
        };
        if lo == 0 || lo > hi || self.step == 0 {
            return Err(format!("empty range {lo}..={hi} (step {})", self.step));
        }
        Ok((lo..=hi).step_by(self.step as usize).collect())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact α(n) (or p(n)) for 0 ≤ n ≤ n-max.
    AlphaExact {
        #[arg(long)]
        n_max: usize,
        /// Tabulate p(n) instead.
        #[arg(long)]
        partition: bool,
    },
    /// Truncated Andrews series at cutoff γ√n against α(n).
    AlphaSeries {
        #[command(flatten)]
        range: NRange,
        #[arg(long, default_value = "1", value_parser = parse_gamma)]
        gamma: Rational,
    },
    /// Truncated Rademacher series at cutoff γ√n against p(n).
    PartitionSeries {
        #[command(flatten)]
        range: NRange,
        #[arg(long, default_value = "1", value_parser = parse_gamma)]
        gamma: Rational,
    },
    /// S(m, n, c, ν) for every c in the range that the level divides.
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: Option<u64>,
        #[arg(long, conflicts_with = "c")]
        c_max: Option<u64>,
        /// eta, theta, psi or theta:D, optionally suffixed -conj.
        #[arg(long, default_value = "psi", value_parser = parse_multiplier)]
        multiplier: Multiplier,
    },
    /// s(d, c) for one d, or for every d coprime to c.
    Dedekind {
        #[arg(long)]
        c: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Quadratic Gauss sum G(a, b; c) in closed form.
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        c: u64,
    },
    /// Heegner forms of discriminant 1 − 24n with Im τ ≥ γ/24.
    Heegner {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "1", value_parser = parse_gamma)]
        gamma: Rational,
        /// Emit the two sides of the identity instead of the forms.
        #[arg(long)]
        sum: bool,
    },
    /// Identity suites over c ≤ cmax, n ≤ nmax.
    IdentityCheck {
        #[arg(long, default_value_t = 100)]
        cmax: u64,
        #[arg(long, default_value_t = 24)]
        nmax: i64,
    },
    /// The prime set S for coefficient n and the absolute partial sums.
    DivergenceScan {
        #[arg(long, default_value_t = 1)]
        n: i64,
        /// Ascending X values; the scan runs to the largest.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        grid: Vec<u64>,
        #[arg(long, value_enum, default_value_t = DivergenceTable::Density)]
        table: DivergenceTable,
    },
    /// Bessel transforms of the test function, quadrature vs closed form.
    SpectralCheck {
        /// Parameters t for s = 2it.
        #[arg(long, value_delimiter = ',', default_value = "1,2,5")]
        t: Vec<f64>,
        /// Real orders ℓ.
        #[arg(long, value_delimiter = ',', default_value = "2,2.5,4.5,6.5")]
        l: Vec<f64>,
        #[arg(long, default_value_t = U_MAX)]
        u_max: f64,
        /// Tabulate Φ̂ at weight k on the t grid (and at t = iy for --y) instead.
        #[arg(long, value_parser = parse_weight)]
        phi_hat: Option<Weight>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    /// Least-squares log|residual| against log n.
    ExponentFit {
        #[command(flatten)]
        range: NRange,
        #[arg(long, default_value = "1", value_parser = parse_gamma)]
        gamma: Rational,
        #[arg(long)]
        partition: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DivergenceTable {
    Witnesses,
    Density,
    Partial,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(mocktheta::Error),
    Check(String),
    Io(anyhow::Error),
}

impl From<mocktheta::Error> for Failure {
    fn from(e: mocktheta::Error) -> Self {
        match e {
            mocktheta::Error::Io(_) | mocktheta::Error::Csv(_) => Failure::Io(e.into()),
            mocktheta::Error::Domain(m) => Failure::Usage(m),
            e => Failure::Numeric(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Out = Box<dyn Write>;

fn json<T: Serialize + ?Sized>(value: &T, mut out: Out) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn csv_rows<T: Serialize>(rows: &[T], out: Out) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn emit<T: Serialize>(rows: &[T], format: Format, out: Out) -> Result<(), Failure> {
    match format {
        Format::Csv => csv_rows(rows, out),
        Format::Json => json(rows, out),
    }
}

#[derive(Serialize)]
struct CoeffRow {
    index: usize,
    value: String,
}

#[derive(Serialize)]
struct KloostermanRow {
    c: u64,
    m: i64,
    n: i64,
    re: String,
    im: String,
    abs: String,
}

#[derive(Serialize)]
struct DedekindRow {
    d: i64,
    c: u64,
    s: String,
    scaled: i64,
}

#[derive(Serialize)]
struct GaussRow {
    a: i64,
    b: i64,
    c: u64,
    re: String,
    im: String,
}

#[derive(Serialize)]
struct FormRow {
    #[serde(rename = "D")]
    disc: u64,
    a: u64,
    b: u64,
    im_tau: String,
    chi: i32,
    re_term: String,
    im_term: String,
}

#[derive(Serialize)]
struct SidesRow {
    n: u64,
    gamma: String,
    forms: usize,
    heegner: String,
    kloosterman: String,
    alpha: String,
    prec_bits: u32,
}

#[derive(Serialize)]
struct SuiteRow {
    name: String,
    checked: u64,
    failed: u64,
    first_failure: String,
}

#[derive(Serialize)]
struct FitRow {
    kind: SeriesKind,
    gamma: String,
    n_min: u64,
    n_max: u64,
    points: usize,
    slope: f64,
    slope_stderr: f64,
    intercept: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let Common {
        format, output, prec, ..
    } = cli.common;
    let out: Out = match &output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.command {
        Command::AlphaExact { n_max, partition } => {
            let table = if partition {
                partition_exact(n_max)
            } else {
                alpha_exact(n_max)
            };
            match format {
                Format::Csv => table.write_csv(out)?,
                Format::Json => {
                    let rows: Vec<CoeffRow> = table
                        .values
                        .iter()
                        .enumerate()
                        .map(|(index, v)| CoeffRow {
                            index,
                            value: v.to_string(),
                        })
                        .collect();
                    json(&rows, out)?;
                }
            }
        }
        Command::AlphaSeries { range, gamma } => series(&range, &gamma, SeriesKind::Mock, prec, format, out)?,
        Command::PartitionSeries { range, gamma } => series(&range, &gamma, SeriesKind::Partition, prec, format, out)?,
        Command::Kloosterman {
            m,
            n,
            c,
            c_max,
            multiplier,
        } => {
            let level = multiplier.level();
            let cs: Vec<u64> = match (c, c_max) {
                (Some(c), _) => vec![c],
                (None, Some(top)) => (1..=top / level).map(|j| j * level).collect(),
                (None, None) => return Err(Failure::Usage("give --c or --c-max".into())),
            };
            if cs.is_empty() || cs.contains(&0) {
                return Err(Failure::Usage("empty modulus range".into()));
            }
            let bits = prec.bits(0, 0).max(128);
            let mut rows = Vec::with_capacity(cs.len());
            for c in cs {
                let v = kloosterman_s(m, n, c, multiplier)?.eval(bits);
                let abs = Float::with_val(bits, v.abs_ref());
                rows.push(KloostermanRow {
                    c,
                    m,
                    n,
                    re: fmt_real(v.real(), 20),
                    im: fmt_real(v.imag(), 20),
                    abs: fmt_real(&abs, 20),
                });
            }
            emit(&rows, format, out)?;
        }
        Command::Dedekind { c, d } => {
            if c == 0 {
                return Err(Failure::Usage("c must be positive".into()));
            }
            let ds: Vec<i64> = match d {
                Some(d) => {
                    if mocktheta::arith::gcd_i64(d, c as i64) != 1 {
                        return Err(Failure::Usage(format!("gcd({d}, {c}) ≠ 1")));
                    }
                    vec![d]
                }
                None => (0..c as i64)
                    .filter(|&d| mocktheta::arith::gcd_i64(d, c as i64) == 1)
                    .collect(),
            };
            let rows: Vec<DedekindRow> = ds
                .into_iter()
                .map(|d| DedekindRow {
                    d,
                    c,
                    s: dedekind_sum(d, c).to_string(),
                    scaled: dedekind_sum_scaled(d, c),
                })
                .collect();
            emit(&rows, format, out)?;
        }
        Command::Gauss { a, b, c } => {
            if a == 0 || c == 0 {
                return Err(Failure::Usage("need a ≠ 0 and c > 0".into()));
            }
            let bits = prec.bits(0, 0).max(128);
            let v = gauss_sum(a, b, c).eval(bits);
            let rows = [GaussRow {
                a,
                b,
                c,
                re: fmt_real(v.real(), 20),
                im: fmt_real(v.imag(), 20),
            }];
            emit(&rows, format, out)?;
        }
        Command::Heegner { n, gamma, sum } => {
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let bits = prec.bits(n, cutoff(n, &gamma));
            let forms = enumerate_forms(24 * n - 1, &Rational::from(&gamma / 24u32))?;
            if sum {
                let h = heegner_sum(&forms, bits)?;
                let k = kloosterman_side(n, &gamma, bits)?;
                let rows = [SidesRow {
                    n,
                    gamma: gamma.to_string(),
                    forms: forms.len(),
                    heegner: fmt_real(&h, 30),
                    kloosterman: fmt_real(&k, 30),
                    alpha: alpha_exact(n as usize).values[n as usize].to_string(),
                    prec_bits: bits,
                }];
                emit(&rows, format, out)?;
            } else {
                match format {
                    Format::Csv => write_forms_csv(&forms, bits, out)?,
                    Format::Json => {
                        let rows: Vec<FormRow> = forms
                            .iter()
                            .map(|f| {
                                let t = f.term(bits);
                                FormRow {
                                    disc: f.disc,
                                    a: f.a,
                                    b: f.b,
                                    im_tau: fmt_real(&f.im_tau(bits), 20),
                                    chi: f.chi(),
                                    re_term: fmt_real(t.real(), 20),
                                    im_term: fmt_real(t.imag(), 20),
                                }
                            })
                            .collect();
                        json(&rows, out)?;
                    }
                }
            }
        }
        Command::IdentityCheck { cmax, nmax } => {
            if cmax == 0 || nmax < 1 {
                return Err(Failure::Usage("need --cmax ≥ 1 and --nmax ≥ 1".into()));
            }
            let bits = match prec {
                Prec::Auto => 192,
                Prec::Bits(b) => b,
            };
            let results = identity_suites(cmax, nmax, bits);
            let rows: Vec<SuiteRow> = results.iter().map(suite_row).collect();
            emit(&rows, format, out)?;
            if let Some(bad) = results.iter().find(|r| !r.passed()) {
                return Err(Failure::Check(format!(
                    "{}: {} of {} failed",
                    bad.name, bad.failed, bad.checked
                )));
            }
        }
        Command::DivergenceScan { n, grid, table } => {
            if n < 1 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let top = match grid.last() {
                Some(&x) if x >= 2 => x,
                _ => return Err(Failure::Usage("grid must be nonempty with X ≥ 2".into())),
            };
            let ws = scan_set_s(n, top)?;
            match table {
                DivergenceTable::Witnesses => match format {
                    Format::Csv => write_witnesses_csv(&ws, out)?,
                    Format::Json => json(&ws, out)?,
                },
                DivergenceTable::Density => emit(&density_table(&ws, &grid), format, out)?,
                DivergenceTable::Partial => {
                    let bits = match prec {
                        Prec::Auto => 128,
                        Prec::Bits(b) => b,
                    };
                    emit(&absolute_partial_sums(n, &grid, &ws, bits)?, format, out)?
                }
            }
        }
        Command::SpectralCheck {
            t,
            l,
            u_max,
            phi_hat,
            y,
        } => {
            let bits = match prec {
                Prec::Auto => 128,
                Prec::Bits(b) => b,
            };
            if t.iter().chain(&l).chain(&y).any(|x| !x.is_finite()) || u_max <= 0.0 {
                return Err(Failure::Usage("parameters must be finite and u-max positive".into()));
            }
            match phi_hat {
                Some(k) => emit(&phi_hat_grid(&t, &y, k, bits)?, format, out)?,
                None => {
                    let rows = transform_checks(&t, &l, u_max, bits)?;
                    match format {
                        Format::Csv => write_transform_csv(&rows, out)?,
                        Format::Json => json(&rows, out)?,
                    }
                }
            }
        }
        Command::ExponentFit {
            range,
            gamma,
            partition,
        } => {
            let ns = range.values().map_err(Failure::Usage)?;
            let kind = if partition {
                SeriesKind::Partition
            } else {
                SeriesKind::Mock
            };
            let reports = residual_sweep(&ns, &gamma, kind, &prec.policy())?;
            let fit = exponent_fit(&reports)?;
            let rows = [FitRow {
                kind,
                gamma: gamma.to_string(),
                n_min: ns[0],
                n_max: *ns.last().expect("nonempty"),
                points: fit.points,
                slope: fit.slope,
                slope_stderr: fit.slope_stderr,
                intercept: fit.intercept,
            }];
            emit(&rows, format, out)?;
        }
    }
    Ok(())
}

fn series(
    range: &NRange,
    gamma: &Rational,
    kind: SeriesKind,
    prec: Prec,
    format: Format,
    out: Out,
) -> Result<(), Failure> {
    let ns = range.values().map_err(Failure::Usage)?;
    let reports = residual_sweep(&ns, gamma, kind, &prec.policy())?;
    match format {
        Format::Csv => write_reports_csv(&reports, out)?,
        Format::Json => {
            let rows: Vec<_> = reports.iter().map(|r| r.row()).collect();
            json(&rows, out)?;
        }
    }
    Ok(())
}

fn suite_row(r: &SuiteResult) -> SuiteRow {
    SuiteRow {
        name: r.name.clone(),
        checked: r.checked,
        failed: r.failed,
        first_failure: r.failures.first().cloned().unwrap_or_default(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.common.threads;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::ValueValidation, msg).exit(),
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(EXIT_CHECK)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
