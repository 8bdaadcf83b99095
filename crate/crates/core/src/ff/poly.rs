//! Dense polynomials over a prime field `F_p`, coefficients stored constant term first.
//!
//! This is the slow, obviously-correct layer: the lookup tables in [`super::Field`]
//! are built from it, and [`super::FieldElement`] uses it directly.

use crate::arith::factorize;

pub(crate) fn trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree of `f`, `None` for the zero polynomial.
pub(crate) fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = u64::from(a % p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        e >>= 1;
    }
    result as u32
}

pub(crate) fn add(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let n = f.len().max(g.len());
    let mut out: Vec<u32> =
        (0..n).map(|i| (f.get(i).copied().unwrap_or(0) + g.get(i).copied().unwrap_or(0)) % p).collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let n = f.len().max(g.len());
    let mut out: Vec<u32> =
        (0..n).map(|i| (f.get(i).copied().unwrap_or(0) + p - g.get(i).copied().unwrap_or(0)) % p).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let p64 = u64::from(p);
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(a) * u64::from(b)) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `f` modulo a nonzero `g`.
pub(crate) fn rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let dg = degree(g).expect("division by the zero polynomial");
    let lead_inv = u64::from(inv_mod(g[dg], p));
    let p64 = u64::from(p);
    let mut r: Vec<u32> = f.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let factor = u64::from(r[dr]) * lead_inv % p64;
        let shift = dr - dg;
        for (i, &c) in g.iter().enumerate().take(dg + 1) {
            let sub = factor * u64::from(c) % p64;
            r[shift + i] = ((u64::from(r[shift + i]) + p64 - sub) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(f: &[u32], g: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(f, g, p), modulus, p)
}

pub(crate) fn pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem(&[1], modulus, p);
    let mut b = rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, modulus, p);
        }
        b = mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

pub(crate) fn gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = u64::from(inv_mod(a[d], p));
        for c in a.iter_mut() {
            *c = (u64::from(*c) * inv % u64::from(p)) as u32;
        }
    }
    a
}

/// Rabin's test: a monic `f` of degree `m` is irreducible over `F_p` iff
/// `x^(p^m) = x mod f` and `gcd(x^(p^(m/r)) - x, f) = 1` for every prime `r | m`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(m) = degree(f) else { return false };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = [0u32, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![rem(&x, f, p)];
    for i in 0..m {
        let next = pow_mod(&frob[i], u64::from(p), f, p);
        frob.push(next);
    }
    // m >= 2, so x is already reduced mod f
    if !sub(&frob[m], &x, p).is_empty() {
        return false;
    }
    factorize(m as u64).iter().all(|&(r, _)| {
        let h = sub(&frob[m / r as usize], &x, p);
        degree(&gcd(f, &h, p)) == Some(0)
    })
}

/// Lexicographically smallest monic irreducible polynomial of degree `m` over `F_p`,
/// comparing coefficients from the constant term upward.
pub fn find_irreducible(p: u32, m: u32) -> Vec<u32> {
    assert!(m >= 1, "degree must be positive");
    let m = m as usize;
    let total = (p as u64).pow(m as u32);
    for t in 0..total {
        // the constant term is the most significant digit of `t`
        let mut f = vec![0u32; m + 1];
        let mut rest = t;
        for i in (0..m).rev() {
            f[i] = (rest % u64::from(p)) as u32;
            rest /= u64::from(p);
        }
        f[m] = 1;
        if m > 1 && f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_{p}")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent check: no monic factor of degree `1..=m/2`.
    fn irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
        let m = degree(f).unwrap();
        for d in 1..=m / 2 {
            let count = (p as u64).pow(d as u32);
            for t in 0..count {
                let mut g = vec![0u32; d + 1];
                let mut rest = t;
                for c in g.iter_mut().take(d) {
                    *c = (rest % u64::from(p)) as u32;
                    rest /= u64::from(p);
                }
                g[d] = 1;
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(find_irreducible(3, 1), vec![0, 1]);
        assert_eq!(find_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(find_irreducible(2, 2), vec![1, 1, 1]);
    }

    #[test]
    fn only_quadratic_over_f2() {
        let irreducible: Vec<_> =
            (0..4u32).map(|t| vec![t & 1, t >> 1, 1]).filter(|f| is_irreducible(f, 2)).collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for (p, m) in [(2u32, 3u32), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2), (3, 4)] {
            let count = (p as u64).pow(m);
            for t in 0..count {
                let mut f = vec![0u32; m as usize + 1];
                let mut rest = t;
                for c in f.iter_mut().take(m as usize) {
                    *c = (rest % u64::from(p)) as u32;
                    rest /= u64::from(p);
                }
                f[m as usize] = 1;
                assert_eq!(is_irreducible(&f, p), irreducible_by_trial_division(&f, p), "p={p} f={f:?}");
            }
        }
    }

    #[test]
    fn found_polynomials_are_irreducible() {
        for (p, m) in [(2u32, 6u32), (2, 10), (3, 6), (5, 4), (7, 2), (2, 12)] {
            let f = find_irreducible(p, m);
            assert_eq!(f.len(), m as usize + 1);
            assert!(is_irreducible(&f, p));
            if m <= 6 {
                assert!(irreducible_by_trial_division(&f, p));
            }
        }
    }

    #[test]
    fn gcd_is_monic() {
        // (x+1)(x+2) and (x+1)(x) over F_3
        let a = mul(&[1, 1], &[2, 1], 3);
        let b = mul(&[1, 1], &[0, 1], 3);
        assert_eq!(gcd(&a, &b, 3), vec![1, 1]);
    }
}
