use rug::Rational;

use crate::arith::gcd_i64;

fn reduce(num: i128, den: i128) -> (i128, i128) {
    let mut a = num.unsigned_abs();
    let mut b = den.unsigned_abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    let g = a.max(1) as i128;
    let s = if den < 0 { -1 } else { 1 };
    (s * num / g, s * den / g)
}

/// `6c·s(d, c)`, which is always an integer for coprime `d`, `c`.
///
/// Uses reciprocity `s(a,b) + s(b,a) = −1/4 + (a² + b² + 1)/(12ab)` along the
/// Euclidean chain, so the cost is `O(log c)`.
pub fn dedekind_sum_scaled(d: i64, c: u64) -> i64 {
    assert!(c > 0, "Dedekind sum needs c > 0");
    assert_eq!(gcd_i64(d, c as i64), 1, "Dedekind sum needs gcd(d, c) = 1");
    let mut a = d.rem_euclid(c as i64) as i128;
    let mut b = c as i128;
    let mut sign = 1i128;
    let (mut num, mut den) = (0i128, 1i128);
    while b > 1 {
        // term = (a² + b² + 1)/(12ab) − 1/4 = (a² + b² + 1 − 3ab)/(12ab)
        let tn = sign * (a * a + b * b + 1 - 3 * a * b);
        let td = 12 * a * b;
        (num, den) = reduce(num * td + tn * den, den * td);
        sign = -sign;
        (a, b) = (b % a, a);
    }
    let scaled = num * 6 * c as i128;
    assert_eq!(scaled % den, 0, "6c·s(d,c) must be integral");
    (scaled / den) as i64
}

/// `s(d, c)` as an exact rational.
pub fn dedekind_sum(d: i64, c: u64) -> Rational {
    Rational::from((dedekind_sum_scaled(d, c), 6 * c))
}

/// `6c·s(d, c)` straight from the defining sum over `r = 1..c−1`; `O(c)`.
pub fn dedekind_sum_scaled_direct(d: i64, c: u64) -> i64 {
    let ci = c as i128;
    let mut total = 0i128;
    for r in 1..ci {
        let frac = (d as i128 * r).rem_euclid(ci);
        total += 6 * r * frac - 3 * r * ci;
    }
    assert_eq!(total % ci, 0);
    (total / ci) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;

    #[test]
    fn small_values() {
        assert_eq!(dedekind_sum(1, 2), Rational::from(0));
        assert_eq!(dedekind_sum(1, 3), Rational::from((1, 18)));
        assert_eq!(dedekind_sum(0, 1), Rational::from(0));
        // s(1,c) = (c−1)(c−2)/(12c)
        for c in 1..60u64 {
            let want = Rational::from(((c as i64 - 1) * (c as i64 - 2), 12 * c));
            assert_eq!(dedekind_sum(1, c), want);
        }
    }

    #[test]
    fn matches_defining_sum() {
        for c in 1..=150u64 {
            for d in -(c as i64)..=(2 * c as i64) {
                if gcd(d.unsigned_abs(), c) == 1 {
                    assert_eq!(
                        dedekind_sum_scaled(d, c),
                        dedekind_sum_scaled_direct(d, c),
                        "d={d} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn reciprocity_and_oddness() {
        for c in 1..=500u64 {
            for d in 1..=c {
                if gcd(d, c) != 1 {
                    continue;
                }
                let lhs = dedekind_sum(d as i64, c) + dedekind_sum(c as i64, d);
                let rhs = Rational::from((-1, 4))
                    + (Rational::from((d, c)) + Rational::from((c, d)) + Rational::from((1, c * d))) / 12;
                assert_eq!(lhs, rhs, "d={d} c={c}");
                assert_eq!(dedekind_sum_scaled(-(d as i64), c), -dedekind_sum_scaled(d as i64, c));
            }
        }
    }
}
