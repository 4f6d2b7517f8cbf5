//! Machine-integer number theory: gcd and inverses, deterministic Miller–Rabin,
//! factorization (trial division then Pollard–Brent rho), squarefree
//! certification, and square roots modulo prime powers and composites.

use crate::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended Euclid on signed 128-bit values: returns `(g, x, y)` with `ax + by = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m` in `[0, m)`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64` (the first twelve prime bases suffice).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes up to and including `limit` (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table on `0..=limit`; entry 0 and 1 are 0.
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Prime factorization as `(p, e)` pairs with ascending `p`.
pub type Factorization = Vec<(u64, u32)>;

pub fn factor_with_spf(mut n: u64, spf: &[u32]) -> Factorization {
    let mut out: Factorization = Vec::new();
    while n > 1 {
        let p = spf[n as usize] as u64;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_ATTEMPTS: u64 = 64;
const RHO_STEPS: u64 = 1 << 22;

fn pollard_brent(n: u64, seed: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + seed) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let m = 128u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
        steps += r;
        if steps > RHO_STEPS {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_large(n: u64, out: &mut Vec<u64>) -> bool {
    if n == 1 {
        return true;
    }
    if is_prime(n) {
        out.push(n);
        return true;
    }
    let r = n.isqrt();
    if r * r == n {
        return split_large(r, out) && split_large(r, out);
    }
    for seed in 1..=RHO_ATTEMPTS {
        if let Some(d) = pollard_brent(n, seed) {
            return split_large(d, out) && split_large(n / d, out);
        }
    }
    false
}

/// Full factorization: trial division to 10⁶, then Pollard–Brent rho with
/// Miller–Rabin certification. Returns `None` if rho gives up.
pub fn factorize(mut n: u64) -> Option<Factorization> {
    let mut out: Factorization = Vec::new();
    if n == 0 {
        return None;
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut large = Vec::new();
        if !split_large(n, &mut large) {
            return None;
        }
        large.sort_unstable();
        for q in large {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Squarefree {
    True,
    False,
    Unknown,
}

impl std::fmt::Display for Squarefree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Squarefree::True => "true",
            Squarefree::False => "false",
            Squarefree::Unknown => "unknown",
        })
    }
}

pub fn squarefree(n: u64) -> Squarefree {
    match factorize(n) {
        Some(f) if f.iter().all(|&(_, e)| e == 1) => Squarefree::True,
        Some(_) => Squarefree::False,
        None => Squarefree::Unknown,
    }
}

/// Number of distinct odd prime divisors.
pub fn omega_odd(n: u64) -> u32 {
    factorize(n)
        .expect("factorization of small integers")
        .iter()
        .filter(|&&(p, _)| p != 2)
        .count() as u32
}

/// Number of divisors τ(n).
pub fn divisor_count(n: u64) -> u64 {
    factorize(n)
        .expect("factorization of small integers")
        .iter()
        .map(|&(_, e)| e as u64 + 1)
        .product()
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .expect("factorization of small integers")
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli–Shanks. `p` must be an odd prime and `a` a nonzero residue mod `p`.
pub(crate) fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// A square root of `t` modulo the odd prime `p`: `Ok(None)` for non-residues,
/// `Ok(Some(0))` when `p | t`.
pub fn sqrt_mod_p(t: i64, p: u64) -> Result<Option<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(tonelli_shanks(t.rem_euclid(p as i64) as u64, p))
}

/// All `x ∈ [0, p^k)` with `x² ≡ t (mod p^k)`, ascending.
pub fn sqrt_mod_prime_power(t: i64, p: u64, k: u32) -> Vec<u64> {
    let pk = p.pow(k);
    let t = t.rem_euclid(pk as i64) as u64;
    let mut roots = Vec::new();
    if !t.is_multiple_of(p) && p != 2 {
        let Some(r) = tonelli_shanks(t % p, p) else {
            return roots;
        };
        // Hensel: x ← x − (x² − t)/(2x), one power of p at a time.
        let mut x = r;
        let mut m = p;
        for _ in 1..k {
            m *= p;
            let fx = (mul_mod(x, x, m) as i128 - (t % m) as i128).rem_euclid(m as i128) as u64;
            let inv = mod_inverse((2 * x % m) as i64, m).expect("2x is a unit");
            x = (x as i128 - mul_mod(fx, inv, m) as i128).rem_euclid(m as i128) as u64;
        }
        roots.push(x);
        roots.push((pk - x) % pk);
    } else if p == 2 && t % 2 == 1 {
        match k {
            1 => roots.push(1),
            2 => {
                if t % 4 == 1 {
                    roots.extend([1, 3]);
                }
            }
            _ => {
                if t % 8 == 1 {
                    let mut x = 1u64;
                    for j in 3..k {
                        let m = 1u64 << (j + 1);
                        if mul_mod(x, x, m) != t % m {
                            x += 1 << (j - 1);
                        }
                    }
                    let half = 1u64 << (k - 1);
                    roots.extend([x, pk - x, (x + half) % pk, (pk - x + half) % pk]);
                }
            }
        }
    } else {
        // p | t: every root is divisible by p.
        let mut x = 0u64;
        while x < pk {
            if mul_mod(x, x, pk) == t {
                roots.push(x);
            }
            x += p;
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Combine root sets modulo pairwise coprime moduli by the Chinese remainder theorem.
fn crt_combine(m1: u64, r1: &[u64], m2: u64, r2: &[u64]) -> Vec<u64> {
    let inv = mod_inverse((m1 % m2) as i64, m2).expect("coprime moduli");
    let m = m1 * m2;
    let mut out = Vec::with_capacity(r1.len() * r2.len());
    for &a in r1 {
        for &b in r2 {
            let diff = (b as i128 - a as i128).rem_euclid(m2 as i128) as u64;
            let k = mul_mod(diff, inv, m2);
            out.push(((a as u128 + m1 as u128 * k as u128) % m as u128) as u64);
        }
    }
    out
}

/// All `x ∈ [0, m)` with `x² ≡ t (mod m)`, ascending, given the factorization of `m`.
pub fn sqrt_mod_factored(t: i64, factors: &[(u64, u32)]) -> Vec<u64> {
    let mut modulus = 1u64;
    let mut roots = vec![0u64];
    for &(p, e) in factors {
        let local = sqrt_mod_prime_power(t, p, e);
        if local.is_empty() {
            return Vec::new();
        }
        let pe = p.pow(e);
        roots = crt_combine(modulus, &roots, pe, &local);
        modulus *= pe;
    }
    roots.sort_unstable();
    roots
}

/// All `x ∈ [0, m)` with `x² ≡ t (mod m)`, ascending.
pub fn sqrt_mod(t: i64, m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    let f = factorize(m).expect("moduli below 2^64 factor");
    sqrt_mod_factored(t, &f)
}

/// Merge two factorizations (multiply the underlying integers).
pub fn merge_factorizations(a: &[(u64, u32)], b: &[(u64, u32)]) -> Factorization {
    let mut out: Factorization = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, f)) => *f += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    out
}
