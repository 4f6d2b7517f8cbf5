//! Verification suites: each proved identity or bound checked against an
//! independent evaluation over a grid, with a pass/fail summary.

use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

use crate::arith::gcd;
use crate::kloosterman::{
    a2c_psi_sides, a_c_direct, a_c_selberg_whiteman, eval_scaled, f_c, f_c_scan, gauss_sum, gauss_sum_brute,
    lehmer_bound, psi_weil_bound, twisted_theta_weil_bound, KloostermanTerms,
};
use crate::modular::{
    dedekind_sum_scaled, dedekind_sum_scaled_direct, enumerate_gamma0, eta_multiplier, eta_multiplier_kronecker,
    GammaZeroMatrix, Multiplier,
};
use crate::numerics::{close, e_of, RootTable};
use crate::qseries::{alpha_exact, alpha_rank_oracle, partition_exact};

/// How many failing cases a summary keeps verbatim.
pub const KEPT_FAILURES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    fn from_parts(name: &str, parts: Vec<(u64, Vec<String>)>) -> Self {
        let mut checked = 0;
        let mut failures = Vec::new();
        for (n, f) in parts {
            checked += n;
            failures.extend(f);
        }
        let failed = failures.len() as u64;
        failures.truncate(KEPT_FAILURES);
        Self {
            name: name.to_string(),
            checked,
            failed,
            failures,
        }
    }
}

fn tol(prec: u32, shift: i32) -> Float {
    Float::with_val(prec, 1) >> (prec as i32 - shift)
}

/// `(−1)^{⌊(c+1)/2⌋}·A_{2c}(n − c(1+(−1)^c)/4) = e(1/8)·conj S(0,n,2c,ψ)` for
/// `c ≤ c_max`, `1 ≤ n ≤ n_max`.
pub fn a2c_psi_suite(c_max: u64, n_max: i64, prec: u32) -> SuiteResult {
    let t = tol(prec, 16);
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            for n in 1..=n_max {
                let (lhs, rhs) = a2c_psi_sides(c, n);
                if !close(&lhs.eval(prec), &rhs.eval(prec), &t) {
                    bad.push(format!("c={c} n={n}"));
                }
            }
            (n_max.max(0) as u64, bad)
        })
        .collect();
    SuiteResult::from_parts("A_2c vs S(0,n,2c,psi)", parts)
}

/// `F_c(n) = 0` for odd `c`, and `F_{2c}(n) = √(24/c)·e(−1/8)·conj S(0,n,2c,ψ)`.
pub fn f_relation_suite(c_max: u64, n_max: i64, prec: u32) -> SuiteResult {
    let t = tol(prec, 16);
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let terms = KloostermanTerms::new(2 * c, Multiplier::PSI).expect("even modulus");
            let table = RootTable::new(terms.modulus(), prec);
            let e = e_of(-1, 8, prec);
            let r = (Float::with_val(prec, 24) / c).sqrt();
            let zero = Complex::new(prec);
            for n in 1..=n_max {
                if c % 2 == 1 && !close(&f_c_scan(c, n).eval(prec), &zero, &t) {
                    bad.push(format!("F_{c}({n}) ≠ 0"));
                }
                let s = terms.sum(0, n).eval_with(&table);
                let want = s.conj() * &e * &r;
                if !close(&f_c(2 * c, n, prec), &want, &t) {
                    bad.push(format!("c={c} n={n}"));
                }
            }
            (2 * n_max.max(0) as u64, bad)
        })
        .collect();
    SuiteResult::from_parts("F_2c vs S(0,n,2c,psi)", parts)
}

/// `A_c(n)` by definition against the Selberg–Whiteman formula.
pub fn selberg_whiteman_suite(c_max: u64, n_abs_max: i64, prec: u32) -> SuiteResult {
    let t = tol(prec, 16);
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let table = RootTable::new(12 * c, prec);
            for n in -n_abs_max..=n_abs_max {
                let d = a_c_direct(c, n).eval_with(&table);
                let sw = eval_scaled(&a_c_selberg_whiteman(c, n), prec);
                if !close(&d, &sw, &t) {
                    bad.push(format!("c={c} n={n}"));
                }
            }
            ((2 * n_abs_max + 1).max(0) as u64, bad)
        })
        .collect();
    SuiteResult::from_parts("A_c direct vs Selberg-Whiteman", parts)
}

/// Closed-form Gauss sums against the defining sum, `c ≤ c_max`,
/// `0 < |a| ≤ ab_max`, `|b| ≤ ab_max`.
pub fn gauss_suite(c_max: u64, ab_max: i64, prec: u32) -> SuiteResult {
    let t = tol(prec, 16);
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let mut count = 0;
            let table = RootTable::new(c, prec);
            for a in -ab_max..=ab_max {
                if a == 0 {
                    continue;
                }
                for b in -ab_max..=ab_max {
                    count += 1;
                    let closed = gauss_sum(a, b, c).eval(prec);
                    let brute = gauss_sum_brute(a, b, c).eval_with(&table);
                    if !close(&closed, &brute, &t) {
                        bad.push(format!("a={a} b={b} c={c}"));
                    }
                }
            }
            (count, bad)
        })
        .collect();
    SuiteResult::from_parts("Gauss sums closed vs brute", parts)
}

/// Rademacher's Dedekind-sum formula for `ν_η` against the Kronecker-symbol
/// formula, on every `Γ∞\Γ/Γ∞` representative with `1 ≤ c ≤ c_max` and on
/// translates of it from either side.
pub fn eta_agreement_suite(c_max: u64) -> SuiteResult {
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let mats = enumerate_gamma0(c, 1).expect("level 1");
            for g in &mats {
                let shifted = [
                    *g,
                    g.mul(&GammaZeroMatrix::translation(3)),
                    GammaZeroMatrix::translation(-5).mul(g),
                ];
                for h in shifted {
                    let a = eta_multiplier(&h).expect("valid");
                    let b = eta_multiplier_kronecker(&h).expect("valid");
                    if a != b {
                        bad.push(format!("{h:?}"));
                    }
                }
            }
            (3 * mats.len() as u64, bad)
        })
        .collect();
    SuiteResult::from_parts("eta multiplier two formulas", parts)
}

/// `6c·s(d,c)` by reciprocity against the defining sum, and reciprocity
/// `s(a,b) + s(b,a) = −1/4 + (a²+b²+1)/(12ab)` on the defining sums, for all
/// coprime `1 ≤ a, b ≤ max`.
pub fn dedekind_suite(max: u64) -> SuiteResult {
    let parts = (1..=max)
        .into_par_iter()
        .map(|b| {
            let mut bad = Vec::new();
            let mut count = 0;
            for a in 1..=max {
                if gcd(a, b) != 1 {
                    continue;
                }
                count += 1;
                let direct_ab = dedekind_sum_scaled_direct(a as i64, b);
                if dedekind_sum_scaled(a as i64, b) != direct_ab {
                    bad.push(format!("fast s({a},{b})"));
                }
                let s_ab = Rational::from((Integer::from(direct_ab), Integer::from(6 * b)));
                let s_ba = Rational::from((
                    Integer::from(dedekind_sum_scaled_direct(b as i64, a)),
                    Integer::from(6 * a),
                ));
                let rhs = Rational::from((Integer::from(a * a + b * b + 1), Integer::from(12 * a * b)))
                    - Rational::from((1, 4));
                if s_ab + s_ba != rhs {
                    bad.push(format!("reciprocity ({a},{b})"));
                }
            }
            (count, bad)
        })
        .collect();
    SuiteResult::from_parts("Dedekind sums", parts)
}

/// `p(n)` by counting partitions with parts `≤ m`, independent of the
/// pentagonal recurrence.
pub fn partition_count(n: u64) -> Integer {
    // ways[k] = partitions of k using the parts seen so far
    let mut ways = vec![Integer::from(0); n as usize + 1];
    ways[0] = Integer::from(1);
    for part in 1..=n as usize {
        for k in part..=n as usize {
            let add = ways[k - part].clone();
            ways[k] += add;
        }
    }
    ways.swap_remove(n as usize)
}

/// `p(n)` and `α(n)` tables against enumeration oracles.
pub fn qseries_suite(partition_max: u64, alpha_max: u64) -> SuiteResult {
    let mut bad = Vec::new();
    let p = partition_exact(partition_max as usize);
    for n in 0..=partition_max {
        if p.values[n as usize] != partition_count(n) {
            bad.push(format!("p({n})"));
        }
    }
    let a = alpha_exact(alpha_max as usize);
    for n in 0..=alpha_max {
        let oracle = alpha_rank_oracle(n).expect("within oracle limit");
        if a.values[n as usize] != oracle {
            bad.push(format!("alpha({n})"));
        }
    }
    SuiteResult::from_parts("q-series vs enumeration", vec![(partition_max + alpha_max + 2, bad)])
}

/// `|A_{2c}(n − c(1+(−1)^c)/4)| ≤ 2^{ω_o(c)}√(2c)` for `c ≤ c_max`, `1 ≤ n ≤ n_max`.
pub fn lehmer_suite(c_max: u64, n_max: i64, prec: u32) -> SuiteResult {
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let bound = lehmer_bound(c, prec) * (Float::with_val(prec, 1) + tol(prec, 16));
            let table = RootTable::new(24 * c, prec);
            let shift = if c % 2 == 0 { (c / 2) as i64 } else { 0 };
            for n in 1..=n_max {
                let v = a_c_direct(2 * c, n - shift).eval_with(&table);
                if Float::with_val(prec, v.abs_ref()) > bound {
                    bad.push(format!("c={c} n={n}"));
                }
            }
            (n_max.max(0) as u64, bad)
        })
        .collect();
    SuiteResult::from_parts("Lehmer bound", parts)
}

/// `|S(0,n,2c,ψ)| ≤ 2^{ω_o(c)}√(2c/(3,c))` for `c ≤ c_max`, `1 ≤ n ≤ n_max`.
pub fn psi_weil_suite(c_max: u64, n_max: i64, prec: u32) -> SuiteResult {
    let parts = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let terms = KloostermanTerms::new(2 * c, Multiplier::PSI).expect("even modulus");
            let table = RootTable::new(terms.modulus(), prec);
            let bound = psi_weil_bound(c, prec) * (Float::with_val(prec, 1) + tol(prec, 16));
            for n in 1..=n_max {
                let v = terms.sum(0, n).eval_with(&table);
                if Float::with_val(prec, v.abs_ref()) > bound {
                    bad.push(format!("c={c} n={n}"));
                }
            }
            (n_max.max(0) as u64, bad)
        })
        .collect();
    SuiteResult::from_parts("Weil bound for S(0,n,2c,psi)", parts)
}

/// `|S(n,n,c,(12/·)ν_θ)| ≤ τ(c)·√((n,c)·c)` for `c` a multiple of `level`
/// up to `c_max`, `1 ≤ |n| ≤ n_max`.
pub fn twisted_theta_weil_suite(level: u64, c_max: u64, n_max: i64, prec: u32) -> SuiteResult {
    let nu = Multiplier::twisted_theta(12).expect("valid discriminant");
    let parts = (1..=c_max / level)
        .into_par_iter()
        .map(|j| {
            let c = j * level;
            let mut bad = Vec::new();
            let terms = KloostermanTerms::new(c, nu).expect("level divides c");
            let table = RootTable::new(terms.modulus(), prec);
            for n in (-n_max..=n_max).filter(|&n| n != 0) {
                let v = terms.sum(n, n).eval_with(&table);
                let bound = twisted_theta_weil_bound(n, c, prec) * (Float::with_val(prec, 1) + tol(prec, 16));
                if Float::with_val(prec, v.abs_ref()) > bound {
                    bad.push(format!("c={c} n={n}"));
                }
            }
            (2 * n_max.max(0) as u64, bad)
        })
        .collect();
    SuiteResult::from_parts(&format!("Weil bound twisted theta, level {level}"), parts)
}

/// The identity suites run by `identity-check`.
pub fn identity_suites(c_max: u64, n_max: i64, prec: u32) -> Vec<SuiteResult> {
    vec![
        a2c_psi_suite(c_max, n_max, prec),
        f_relation_suite(c_max, n_max, prec),
        selberg_whiteman_suite(c_max, n_max, prec),
        gauss_suite(c_max.min(48), c_max.min(48) as i64, prec),
        eta_agreement_suite(c_max),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_oracle_values() {
        let want = [1u64, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(partition_count(n as u64), *w);
        }
        assert_eq!(partition_count(100), Integer::from(190569292u64));
    }

    #[test]
    fn small_suites_pass() {
        for s in identity_suites(12, 6, 128) {
            assert!(s.passed(), "{s:?}");
        }
        assert!(dedekind_suite(40).passed());
        assert!(qseries_suite(30, 20).passed());
        assert!(lehmer_suite(20, 10, 128).passed());
        assert!(psi_weil_suite(20, 10, 128).passed());
        assert!(twisted_theta_weil_suite(24, 96, 6, 128).passed());
    }

    #[test]
    fn failures_are_counted() {
        let r = SuiteResult::from_parts(
            "x",
            vec![(3, vec!["a".into()]), (2, (0..10).map(|i| i.to_string()).collect())],
        );
        assert_eq!(r.checked, 5);
        assert_eq!(r.failed, 11);
        assert_eq!(r.failures.len(), KEPT_FAILURES);
        assert!(!r.passed());
    }
}
