//! Pole orders at the point at infinity of `x^Q + x = y^(Q+1)`.
//!
//! `x` and `y` have poles of order `Q + 1` and `Q` there. After reducing a polynomial
//! to x-degree `< Q` with `x^Q = y^(Q+1) - x`, the monomials `x^i y^j` have pairwise
//! distinct pole orders `i(Q+1) + jQ` (they differ mod `Q` or in `j`), so the pole
//! order of the sum is the maximum over its surviving monomials.

use std::collections::BTreeMap;

use crate::ff::{Elem, Field};

/// Polynomial in `x, y`; keys are `(deg_x, deg_y)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: Elem, dx: u32, dy: u32) -> Self {
        let mut p = Self::zero();
        if !coeff.is_zero() {
            p.terms.insert((dx, dy), coeff);
        }
        p
    }

    /// `c_x * x + c_y * y + c_1`.
    pub fn linear(cx: Elem, cy: Elem, c1: Elem) -> Self {
        let mut p = Self::monomial(cx, 1, 0);
        p.add_term(cy, 0, 1);
        p.add_term(c1, 0, 0);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Elem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    fn add_term_in(&mut self, f: &Field, c: Elem, dx: u32, dy: u32) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((dx, dy)).or_insert(Elem::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&(dx, dy));
        }
    }

    // only used while building linear polynomials, before any field is involved
    fn add_term(&mut self, c: Elem, dx: u32, dy: u32) {
        if !c.is_zero() {
            debug_assert!(!self.terms.contains_key(&(dx, dy)));
            self.terms.insert((dx, dy), c);
        }
    }

    pub fn add(&self, f: &Field, other: &Self) -> Self {
        let mut out = self.clone();
        for ((dx, dy), c) in other.terms() {
            out.add_term_in(f, c, dx, dy);
        }
        out
    }

    pub fn sub(&self, f: &Field, other: &Self) -> Self {
        let mut out = self.clone();
        for ((dx, dy), c) in other.terms() {
            out.add_term_in(f, f.neg(c), dx, dy);
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((ax, ay), a) in self.terms() {
            for ((bx, by), b) in other.terms() {
                out.add_term_in(f, f.mul(a, b), ax + bx, ay + by);
            }
        }
        out
    }

    /// Reduce to x-degree `< big_q` modulo `x^Q + x - y^(Q+1)`.
    pub fn reduce_mod_hermitian(&self, f: &Field, big_q: u32) -> Self {
        let mut work = self.clone();
        loop {
            let Some((&(dx, dy), &c)) = work.terms.iter().rev().find(|((dx, _), _)| *dx >= big_q) else {
                return work;
            };
            work.terms.remove(&(dx, dy));
            // x^dx y^dy = x^(dx-Q) y^(dy+Q+1) - x^(dx-Q+1) y^dy
            work.add_term_in(f, c, dx - big_q, dy + big_q + 1);
            work.add_term_in(f, f.neg(c), dx - big_q + 1, dy);
        }
    }
}

/// Pole order at infinity of a polynomial function, `None` for the zero function.
pub fn pole_order_at_infinity(f: &Field, big_q: u32, poly: &BiPoly) -> Option<u64> {
    let reduced = poly.reduce_mod_hermitian(f, big_q);
    let q = u64::from(big_q);
    let orders: Vec<u64> =
        reduced.terms().map(|((dx, dy), _)| u64::from(dx) * (q + 1) + u64::from(dy) * q).collect();
    debug_assert!(
        {
            let mut sorted = orders.clone();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        },
        "reduced monomials have distinct pole orders"
    );
    orders.into_iter().max()
}

/// Valuation at infinity, `-pole order`; `None` for zero.
pub fn valuation_at_infinity(f: &Field, big_q: u32, poly: &BiPoly) -> Option<i64> {
    pole_order_at_infinity(f, big_q, poly).map(|o| -(o as i64))
}
