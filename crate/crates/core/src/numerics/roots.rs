use std::collections::BTreeMap;

use rug::{Complex, Float, Rational};

use crate::arith::{gcd, lcm};

fn reduce(num: i64, den: u64) -> (u64, u64) {
    assert!(den > 0, "zero denominator");
    let k = num.rem_euclid(den as i64) as u64;
    let g = gcd(k, den);
    (k / g, den / g)
}

/// `e(k/m) = exp(2πik/m)` for `0 ≤ k < m`, `gcd(k, m) = 1`; quarter turns are exact.
fn unit_root(k: u64, m: u64, prec: u32) -> Complex {
    match (k, m) {
        (0, _) => return Complex::with_val(prec, (1, 0)),
        (1, 2) => return Complex::with_val(prec, (-1, 0)),
        (1, 4) => return Complex::with_val(prec, (0, 1)),
        (3, 4) => return Complex::with_val(prec, (0, -1)),
        _ => {}
    }
    if let Ok(u) = u32::try_from(m) {
        // MPFR rounds cos(2πx/u) correctly at the precision of x, which must
        // also hold k exactly.
        let x = Float::with_val(prec.max(64), k);
        let re = x.clone().cos_u(u);
        let im = x.sin_u(u);
        Complex::with_val(prec, (re, im))
    } else {
        let work = prec + 64;
        let angle = Float::with_val(work, rug::float::Constant::Pi) * 2u32 * Rational::from((k, m));
        let (s, c) = angle.sin_cos(Float::new(work));
        Complex::with_val(prec, (c, s))
    }
}

/// `e(num/den)`, reduced modulo 1 first so that `x` and `x + 1` give identical bits.
pub fn e_of(num: i64, den: u64, prec: u32) -> Complex {
    let (k, m) = reduce(num, den);
    unit_root(k, m, prec)
}

pub fn e_of_rational(x: &Rational, prec: u32) -> Complex {
    let num = x.numer().to_i64().expect("numerator fits in i64");
    let den = x.denom().to_u64().expect("denominator fits in u64");
    e_of(num, den, prec)
}

/// Every `e(k/M)`, `0 ≤ k < M`, at one precision; built once per modulus.
#[derive(Clone, Debug)]
pub struct RootTable {
    modulus: u64,
    prec: u32,
    values: Vec<Complex>,
}

impl RootTable {
    pub fn new(modulus: u64, prec: u32) -> Self {
        assert!(modulus > 0);
        let m = modulus as usize;
        let mut values = vec![Complex::new(prec); m];
        if modulus.is_multiple_of(4) {
            let q = m / 4;
            for k in 0..q {
                let z = e_of(k as i64, modulus, prec);
                let (re, im) = z.into_real_imag();
                values[k + q] = Complex::with_val(prec, (-im.clone(), re.clone()));
                values[k + 2 * q] = Complex::with_val(prec, (-re.clone(), -im.clone()));
                values[k + 3 * q] = Complex::with_val(prec, (im.clone(), -re.clone()));
                values[k] = Complex::with_val(prec, (re, im));
            }
        } else {
            for (k, v) in values.iter_mut().enumerate() {
                *v = e_of(k as i64, modulus, prec);
            }
        }
        Self { modulus, prec, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, k: u64) -> &Complex {
        &self.values[(k % self.modulus) as usize]
    }
}

/// Exact sum `Σ counts[k]·e(k/M)` of `M`-th roots of unity.
///
/// For even `M` the counts are kept in canonical form with `k < M/2`, using
/// `e((k + M/2)/M) = −e(k/M)`, so that antipodal terms cancel exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootOfUnityAccumulator {
    modulus: u64,
    counts: BTreeMap<u64, i64>,
}

impl RootOfUnityAccumulator {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self {
            modulus,
            counts: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Adds `count · e(k/M)`.
    pub fn add(&mut self, k: i64, count: i64) {
        if count == 0 {
            return;
        }
        let mut k = k.rem_euclid(self.modulus as i64) as u64;
        let mut count = count;
        if self.modulus.is_multiple_of(2) && k >= self.modulus / 2 {
            k -= self.modulus / 2;
            count = -count;
        }
        let entry = self.counts.entry(k).or_insert(0);
        *entry += count;
        if *entry == 0 {
            self.counts.remove(&k);
        }
    }

    pub fn add_root(&mut self, k: i64) {
        self.add(k, 1);
    }

    pub fn counts(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nonzero_len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Same sum over modulus `factor · M`.
    pub fn lift(&self, factor: u64) -> Self {
        assert!(factor > 0);
        let mut out = Self::new(self.modulus * factor);
        for (k, v) in self.counts() {
            out.add((k * factor) as i64, v);
        }
        out
    }

    /// Re-index over `modulus`, which must be a multiple of the current one.
    pub fn to_modulus(&self, modulus: u64) -> Self {
        assert_eq!(modulus % self.modulus, 0, "target must be a multiple");
        self.lift(modulus / self.modulus)
    }

    /// Exact sum of two accumulators, over the lcm of their moduli.
    pub fn merged(&self, other: &Self) -> Self {
        let m = lcm(self.modulus, other.modulus);
        let mut out = self.to_modulus(m);
        for (k, v) in other.to_modulus(m).counts() {
            out.add(k as i64, v);
        }
        out
    }

    /// Complex conjugate: `k ↦ −k`.
    pub fn conj(&self) -> Self {
        let mut out = Self::new(self.modulus);
        for (k, v) in self.counts() {
            out.add(-(k as i64), v);
        }
        out
    }

    /// Multiply by `e(shift/M)`.
    pub fn rotate(&self, shift: i64) -> Self {
        let mut out = Self::new(self.modulus);
        for (k, v) in self.counts() {
            out.add(k as i64 + shift, v);
        }
        out
    }

    /// Multiply every count by an integer.
    pub fn scale(&self, factor: i64) -> Self {
        let mut out = Self::new(self.modulus);
        for (k, v) in self.counts() {
            out.add(k as i64, v * factor);
        }
        out
    }

    /// Sum in ascending residue order, one rounding per root plus a correctly
    /// rounded final sum.
    pub fn eval(&self, prec: u32) -> Complex {
        self.eval_by(prec, |k| e_of(k as i64, self.modulus, prec))
    }

    /// As [`eval`](Self::eval) with roots read from a precomputed table whose
    /// modulus is a multiple of this one.
    pub fn eval_with(&self, table: &RootTable) -> Complex {
        assert_eq!(table.modulus() % self.modulus, 0, "table modulus mismatch");
        let step = table.modulus() / self.modulus;
        self.eval_by(table.prec(), |k| table.get(k * step).clone())
    }

    fn eval_by(&self, prec: u32, root: impl Fn(u64) -> Complex) -> Complex {
        let mut re = Vec::with_capacity(self.counts.len());
        let mut im = Vec::with_capacity(self.counts.len());
        for (&k, &v) in &self.counts {
            let (r, i) = root(k).into_real_imag();
            re.push(Float::with_val(prec, r * v));
            im.push(Float::with_val(prec, i * v));
        }
        Complex::with_val(
            prec,
            (
                Float::with_val(prec, Float::sum(re.iter())),
                Float::with_val(prec, Float::sum(im.iter())),
            ),
        )
    }
}
