//! Small exact integer helpers shared by the counting and feasibility code.

use crate::error::{Error, Result};

/// Prime factors of `n` with multiplicity, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Splits `q = p^e`, failing unless `q` is a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Ok((*p, *e)),
        _ => Err(Error::InvalidParameter(format!("{q} is not a prime power"))),
    }
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or_else(|| Error::InvalidParameter(format!("{base}^{exp} overflows u64")))
}

/// `ceil(a / b)` for `b > 0`.
pub fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `floor(a / b)` for `b > 0`.
pub fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// All positive divisors of the number whose factorization is given, ascending.
pub fn divisors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for &d in &out {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                pk = pk.saturating_mul(p);
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Merge two factorizations (multiply the numbers they describe).
pub fn merge_factors(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    out
}

/// Factorization of `|PGU(3, Q)| = Q^3 (Q^3 + 1)(Q^2 - 1)`, assembled from the
/// small factors `Q`, `Q + 1`, `Q^2 - Q + 1`, `Q - 1`, `Q + 1`.
pub fn pgu3_order_factors(q: u64) -> Result<Vec<(u64, u32)>> {
    let (p, e) = prime_power(q)?;
    let mut f = vec![(p, 3 * e)];
    for part in [q + 1, q * q - q + 1, q - 1, q + 1] {
        f = merge_factors(&f, &factorize(part));
    }
    f.retain(|&(_, e)| e > 0);
    Ok(f)
}

/// Integer square root for perfect squares.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8).unwrap(), (2, 3));
        assert_eq!(prime_power(27).unwrap(), (3, 3));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(6).is_err());
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn ceil_floor() {
        assert_eq!(div_ceil(513, 225), 3);
        assert_eq!(div_ceil(450, 225), 2);
        assert_eq!(div_ceil(-3, 2), -1);
        assert_eq!(div_floor(-3, 2), -2);
        assert_eq!(div_floor(700, 46), 15);
    }

    #[test]
    fn pgu_order() {
        // |PGU(3,2)| = 8 * 9 * 3 = 216, |PGU(3,3)| = 27 * 28 * 8 = 6048
        for (q, order) in [(2u64, 216u64), (3, 6048), (4, 64 * 65 * 15), (5, 125 * 126 * 24)] {
            let f = pgu3_order_factors(q).unwrap();
            let n: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(n, order);
        }
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(&factorize(12)), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(exact_sqrt(729), Some(27));
        assert_eq!(exact_sqrt(730), None);
    }
}
