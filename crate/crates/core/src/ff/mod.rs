//! Finite fields `F_{p^m}`.
//!
//! A [`Field`] is built once from a [`FieldSpec`] and owns exponent, logarithm and
//! Zech-logarithm tables, so that every operation on the compact [`Elem`] handle is
//! a couple of table lookups. Handles are plain integers: the base-`p` digits of an
//! `Elem` are the coefficients of its polynomial representative, constant term in
//! the least significant digit.
//!
//! [`FieldElement`] is the owned, checked counterpart: it carries its field, rejects
//! mixed-field operands and computes with polynomial arithmetic modulo the defining
//! polynomial instead of the tables.

mod element;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

pub use element::FieldElement;
pub use poly::{find_irreducible, is_irreducible};

/// Hard cap on the number of elements of a table-backed field.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

/// Characteristic, extension degree and defining polynomial of `F_{p^m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Monic irreducible polynomial of degree `m`, constant term first.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The spec using the lexicographically smallest irreducible modulus.
    pub fn smallest(p: u32, m: u32) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        Ok(Self { p, m, modulus: find_irreducible(p, m) })
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(u64::from(self.p)) {
            return Err(Error::InvalidParameter(format!("{} is not prime", self.p)));
        }
        let m = self.m as usize;
        if m == 0 || self.modulus.len() != m + 1 || self.modulus[m] != 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus {:?} is not monic of degree {}",
                self.modulus, self.m
            )));
        }
        if self.modulus.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter("modulus coefficient out of range".into()));
        }
        if !is_irreducible(&self.modulus, self.p) {
            return Err(Error::NotIrreducible(self.modulus.clone(), self.p));
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        u64::from(self.p).pow(self.m)
    }
}

/// Compact element handle; only meaningful together with the [`Field`] that made it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Base-`p` encoding of the coefficient vector.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

const NO_LOG: u32 = u32::MAX;

struct Tables {
    spec: FieldSpec,
    order: u32,
    /// `exp[i] = g^i` for the primitive element `g`, `0 <= i < order - 1`.
    exp: Vec<u32>,
    /// `log[exp[i]] = i`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
    generator: u32,
}

/// A table-backed finite field. Cloning is cheap (shared tables).
#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.inner.spec.p, self.inner.spec.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn decode(mut index: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let c = index % p;
            index /= p;
            c
        })
        .collect()
}

impl Field {
    /// `F_{p^m}` with the lexicographically smallest irreducible modulus.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::from_spec(FieldSpec::smallest(p, m)?)
    }

    /// The field of order `q`, a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = crate::arith::prime_power(q)?;
        Self::new(p as u32, e)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Self> {
        spec.validate()?;
        let order = spec.order();
        if order > MAX_FIELD_ORDER {
            return Err(Error::BudgetExceeded {
                what: "field tables",
                needed: order,
                limit: MAX_FIELD_ORDER,
            });
        }
        let p = spec.p;
        let m = spec.m;
        let order = order as u32;
        let modulus = spec.modulus.clone();
        let group = u64::from(order - 1);
        let prime_divisors: Vec<u64> = factorize(group).into_iter().map(|(r, _)| r).collect();

        let generator = (1..order)
            .find(|&g| {
                let gp = poly_of(g, p, m);
                prime_divisors.iter().all(|&r| poly::pow_mod(&gp, group / r, &modulus, p) != [1])
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let gp = poly_of(generator, p, m);
        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = vec![1u32];
        for i in 0..order - 1 {
            let idx = encode(&cur, p);
            exp.push(idx);
            log[idx as usize] = i;
            cur = poly::mul_mod(&cur, &gp, &modulus, p);
        }
        debug_assert_eq!(cur, vec![1]);

        let zech = exp
            .iter()
            .map(|&e| {
                let mut c = decode(e, p, m);
                c[0] = (c[0] + 1) % p;
                let s = encode(&c, p);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();

        Ok(Self { inner: Arc::new(Tables { spec, order, exp, log, zech, generator }) })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.spec.m
    }

    pub fn order(&self) -> u64 {
        u64::from(self.inner.order)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        Elem(self.inner.generator)
    }

    /// Image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(i64::from(self.inner.spec.p)) as u32)
    }

    pub fn from_index(&self, index: u32) -> Result<Elem> {
        if index < self.inner.order {
            Ok(Elem(index))
        } else {
            Err(Error::InvalidParameter(format!("element index {index} out of range")))
        }
    }

    /// Element with the given coefficients (constant term first, at most `m` of them).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        let spec = &self.inner.spec;
        if coeffs.len() > spec.m as usize || coeffs.iter().any(|&c| c >= spec.p) {
            return Err(Error::InvalidParameter(format!(
                "coefficients {coeffs:?} do not describe an element of F_{}^{}",
                spec.p, spec.m
            )));
        }
        Ok(Elem(encode(coeffs, spec.p)))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        decode(a.0, self.inner.spec.p, self.inner.spec.m)
    }

    /// Owned, checked view of `a`.
    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement::from_parts(self.clone(), self.coeffs(a))
    }

    /// All elements in index order (coefficient-lexicographic, highest degree most significant).
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.inner.order).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.inner.order).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.inner;
        if t.spec.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = t.order - 1;
        let la = t.log[a.0 as usize];
        let lb = t.log[b.0 as usize];
        // a + b = a (1 + g^(lb - la))
        let k = if lb >= la { lb - la } else { lb + n - la };
        match t.zech[k as usize] {
            NO_LOG => Elem::ZERO,
            z => Elem(t.exp[((la as u64 + z as u64) % n as u64) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let t = &*self.inner;
        if t.spec.p == 2 || a.0 == 0 {
            return a;
        }
        let n = t.order - 1;
        let l = t.log[a.0 as usize] + n / 2;
        Elem(t.exp[(l % n) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let t = &*self.inner;
        let n = t.order - 1;
        let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
        Elem(t.exp[(s % n as u64) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.inner;
        let n = t.order - 1;
        let l = t.log[a.0 as usize];
        Ok(Elem(t.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let t = &*self.inner;
        let n = u64::from(t.order - 1);
        let l = u64::from(t.log[a.0 as usize]);
        Elem(t.exp[((l as u128 * e as u128) % n as u128) as usize])
    }

    /// Discrete logarithm to the base [`Field::primitive_element`].
    pub fn log(&self, a: Elem) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(u64::from(self.inner.log[a.0 as usize]))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Result<u64> {
        let l = self.log(a)?;
        let n = self.order() - 1;
        Ok(n / gcd(n, l))
    }

    /// `v^r` for a power `r` of the characteristic.
    pub fn frobenius(&self, v: Elem, r: u64) -> Result<Elem> {
        if !self.is_power_of_characteristic(r) {
            return Err(Error::InvalidParameter(format!(
                "{r} is not a power of the characteristic {}",
                self.characteristic()
            )));
        }
        Ok(self.pow(v, r))
    }

    fn is_power_of_characteristic(&self, mut r: u64) -> bool {
        let p = u64::from(self.characteristic());
        if r == 0 {
            return false;
        }
        while r.is_multiple_of(p) {
            r /= p;
        }
        r == 1
    }

    /// Whether `F_{sub}` is a subfield of this field (`sub` a power of `p` whose
    /// exponent divides `m`).
    pub fn has_subfield(&self, sub: u64) -> bool {
        if !self.is_power_of_characteristic(sub) {
            return false;
        }
        let p = u64::from(self.characteristic());
        let mut k = 0u32;
        let mut s = sub;
        while s > 1 {
            s /= p;
            k += 1;
        }
        k >= 1 && self.degree().is_multiple_of(k)
    }

    /// Membership in the subfield of order `sub`: `v^sub = v`.
    pub fn in_subfield(&self, v: Elem, sub: u64) -> bool {
        self.pow(v, sub) == v
    }

    fn check_quadratic_subfield(&self, v: Elem, sub: u64) -> Result<()> {
        let square = sub.saturating_mul(sub);
        if !self.has_subfield(sub) || !self.has_subfield(square) {
            return Err(Error::InvalidParameter(format!(
                "F_{sub} and F_{square} are not both subfields of F_{}",
                self.order()
            )));
        }
        if !self.in_subfield(v, square) {
            return Err(Error::Precondition(format!("{v} does not lie in F_{square}")));
        }
        Ok(())
    }

    /// Relative norm `v^(Q+1)` from `F_{Q^2}` to `F_Q`.
    pub fn rel_norm(&self, v: Elem, sub: u64) -> Result<Elem> {
        self.check_quadratic_subfield(v, sub)?;
        Ok(self.pow(v, sub + 1))
    }

    /// Relative trace `v^Q + v` from `F_{Q^2}` to `F_Q`.
    pub fn rel_trace(&self, v: Elem, sub: u64) -> Result<Elem> {
        self.check_quadratic_subfield(v, sub)?;
        Ok(self.add(self.pow(v, sub), v))
    }

    /// Evaluate a polynomial with prime-field coefficients (constant first) at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), Elem(c)))
    }

    /// Embedding of `small` into this field, sending the generator `x` of `small`'s
    /// polynomial basis to the first root (in index order) of its modulus here.
    pub fn embedding_from(&self, small: &Field) -> Result<Embedding> {
        if small.characteristic() != self.characteristic() || !self.has_subfield(small.order()) {
            return Err(Error::InvalidParameter(format!(
                "F_{} does not embed in F_{}",
                small.order(),
                self.order()
            )));
        }
        let root = self
            .elements()
            .find(|&r| self.eval_prime_poly(&small.spec().modulus, r).is_zero())
            .expect("an irreducible polynomial of degree k splits in F_{p^m} when k | m");
        let image: Vec<Elem> =
            small.elements().map(|a| self.eval_prime_poly(&small.coeffs(a), root)).collect();
        let mut preimage = std::collections::HashMap::with_capacity(image.len());
        for (i, &b) in image.iter().enumerate() {
            preimage.insert(b, Elem(i as u32));
        }
        Ok(Embedding { small: small.clone(), large: self.clone(), image, preimage })
    }
}

fn poly_of(index: u32, p: u32, m: u32) -> Vec<u32> {
    let mut c = decode(index, p, m);
    poly::trim(&mut c);
    c
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Field homomorphism `small -> large` together with its partial inverse.
#[derive(Clone)]
pub struct Embedding {
    small: Field,
    large: Field,
    image: Vec<Elem>,
    preimage: std::collections::HashMap<Elem, Elem>,
}

impl Embedding {
    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn large(&self) -> &Field {
        &self.large
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a.0 as usize]
    }

    /// Preimage of `b`, if `b` lies in the image.
    pub fn pull_back(&self, b: Elem) -> Option<Elem> {
        self.preimage.get(&b).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        Field::new(3, 2).unwrap()
    }

    #[test]
    fn prime_field_inverse() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.inv(f3.from_int(2)).unwrap(), f3.from_int(2));
        assert_eq!(f3.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn f9_squares_and_frobenius() {
        let f = f9();
        assert_eq!(f.spec().modulus, vec![1, 0, 1]);
        let alpha = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(alpha, alpha), f.from_int(2));
        assert_eq!(f.coeffs(f.frobenius(alpha, 3).unwrap()), vec![0, 2]);
        assert_eq!(f.frobenius(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        assert!(f.frobenius(alpha, 2).is_err());
        for v in f.elements() {
            assert_eq!(f.frobenius(v, 9).unwrap(), v);
        }
        for v in f.nonzero_elements() {
            assert_eq!(f.pow(v, 8), Elem::ONE);
        }
        assert_eq!(f.pow(Elem::ZERO, 0), Elem::ONE);
    }

    #[test]
    fn f9_norm_and_trace() {
        let f = f9();
        let alpha = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.rel_norm(alpha, 3).unwrap(), Elem::ONE);
        assert_eq!(f.rel_trace(alpha, 3).unwrap(), Elem::ZERO);
        assert_eq!(f.rel_norm(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        assert_eq!(f.rel_trace(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        assert!(f.rel_trace(alpha, 9).is_err());
    }

    #[test]
    fn enumeration() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Elem::ZERO, Elem::ONE]);
        assert_eq!(Field::new(2, 2).unwrap().elements().count(), 4);
        let f729 = Field::new(3, 6).unwrap();
        let all: std::collections::HashSet<Vec<u32>> = f729.elements().map(|a| f729.coeffs(a)).collect();
        assert_eq!(all.len(), 729);
    }

    #[test]
    fn trace_fibers_have_size_q() {
        for q in [2u64, 3, 4] {
            let f = Field::with_order(q * q).unwrap();
            let mut fiber = std::collections::HashMap::new();
            for v in f.elements() {
                *fiber.entry(f.rel_trace(v, q).unwrap()).or_insert(0u64) += 1;
            }
            assert_eq!(fiber.len() as u64, q, "trace is onto F_{q}");
            assert!(fiber.values().all(|&n| n == q));
            assert!(fiber.keys().all(|&w| f.in_subfield(w, q)));
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = Field::new(2, 2).unwrap();
        let large = Field::new(2, 6).unwrap();
        let emb = large.embedding_from(&small).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(small.mul(a, b)), large.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(small.add(a, b)), large.add(emb.apply(a), emb.apply(b)));
            }
            assert_eq!(emb.pull_back(emb.apply(a)), Some(a));
            assert!(large.in_subfield(emb.apply(a), 4));
        }
        assert!(Field::new(2, 3).unwrap().embedding_from(&small).is_err());
    }

    #[test]
    fn rejects_reducible_modulus() {
        let spec = FieldSpec { p: 2, m: 2, modulus: vec![1, 0, 1] };
        assert!(matches!(Field::from_spec(spec), Err(Error::NotIrreducible(..))));
    }
}
