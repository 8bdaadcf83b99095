//! Automorphisms of the Hermitian curve `x^Q + x = y^(Q+1)` over `F_{Q^2}`.
//!
//! The stabilizer `H` of the point at infinity consists of the maps
//!
//! ```text
//! [a, b, c] : (x, y) -> (a^(Q+1) x + a b^Q y + c,  a y + b),   a != 0,  c^Q + c = b^(Q+1)
//! ```
//!
//! and has order `Q^3 (Q^2 - 1)`. [`Stabilizer`] implements its group law and three
//! ways of computing the Artin value `i(sigma)`: the closed-form case split, a
//! fixed-point count for elements with `a != 1`, and a valuation computation at
//! infinity for the Sylow `p`-subgroup `a = 1`. General elements of `PGU(3, Q)` are
//! handled in [`pgu`].

pub mod pgu;
pub mod valuation;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use valuation::{valuation_at_infinity, BiPoly};

/// `[a, b, c]`. Handles are only meaningful for the [`Stabilizer`] that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StabilizerElement {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
}

impl StabilizerElement {
    pub const IDENTITY: Self = Self { a: Elem::ONE, b: Elem::ZERO, c: Elem::ZERO };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Member of the Sylow `p`-subgroup (`a = 1`).
    pub fn is_wild(&self) -> bool {
        self.a == Elem::ONE
    }
}

impl fmt::Display for StabilizerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Which branch produced an Artin value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtinCase {
    /// `a = 1, b != 0`: value 2.
    WildTranslation,
    /// `a = 1, b = 0, c != 0`: value `Q + 2`.
    WildCenter,
    /// `a != 1`, order divides `Q + 1`: value `Q + 1`.
    Homology,
    /// `a != 1`, `p` divides the order: value 1.
    MixedOrder,
    /// `a != 1`, any other order: value 2.
    TameOther,
    /// Fixes a single point of degree three: value 3.
    DegreeThree,
    /// Fixes no point: value 0.
    FixedPointFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArtinValue {
    pub value: u64,
    pub case: ArtinCase,
}

/// The possible values `{0, 1, 2, 3, Q+1, Q+2}` in profile order.
pub fn artin_spectrum(big_q: u64) -> [u64; 6] {
    [0, 1, 2, 3, big_q + 1, big_q + 2]
}

/// The stabilizer of the point at infinity, with `F_{Q^2}` and cached curve data.
pub struct Stabilizer {
    field: Field,
    big_q: u64,
    p: u64,
    /// `trace_fibers[w]` lists the `c` with `c^Q + c = w`.
    trace_fibers: HashMap<Elem, Vec<Elem>>,
    affine_points: OnceLock<Vec<(Elem, Elem)>>,
}

impl fmt::Debug for Stabilizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Stabilizer(Q = {})", self.big_q)
    }
}

impl Stabilizer {
    /// Largest `Q` accepted for table construction (`F_{Q^2}` must fit the field tables).
    pub const MAX_Q: u64 = 1 << 10;

    pub fn new(big_q: u64) -> Result<Self> {
        let (p, _) = prime_power(big_q)?;
        if big_q > Self::MAX_Q {
            return Err(Error::BudgetExceeded {
                what: "stabilizer field",
                needed: big_q,
                limit: Self::MAX_Q,
            });
        }
        let field = Field::with_order(big_q * big_q)?;
        let mut trace_fibers: HashMap<Elem, Vec<Elem>> = HashMap::new();
        for c in field.elements() {
            let w = field.add(field.pow(c, big_q), c);
            trace_fibers.entry(w).or_default().push(c);
        }
        Ok(Self { field, big_q, p, trace_fibers, affine_points: OnceLock::new() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn big_q(&self) -> u64 {
        self.big_q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// `|H| = Q^3 (Q^2 - 1)`.
    pub fn order(&self) -> u64 {
        self.big_q.pow(3) * (self.big_q * self.big_q - 1)
    }

    pub fn identity(&self) -> StabilizerElement {
        StabilizerElement::IDENTITY
    }

    fn norm(&self, v: Elem) -> Elem {
        self.field.pow(v, self.big_q + 1)
    }

    fn conj(&self, v: Elem) -> Elem {
        self.field.pow(v, self.big_q)
    }

    /// Validated constructor.
    pub fn element(&self, a: Elem, b: Elem, c: Elem) -> Result<StabilizerElement> {
        let f = &self.field;
        let order = f.order() as u32;
        if [a, b, c].iter().any(|e| e.index() >= order) {
            return Err(Error::InvalidParameter("component outside F_{Q^2}".into()));
        }
        if a.is_zero() {
            return Err(Error::InvalidParameter("a must be nonzero".into()));
        }
        if f.add(self.conj(c), c) != self.norm(b) {
            return Err(Error::InvalidParameter(format!("c^Q + c != b^(Q+1) for [{a}, {b}, {c}]")));
        }
        Ok(StabilizerElement { a, b, c })
    }

    /// Constructor from coefficient vectors over the prime field.
    pub fn element_from_coeffs(&self, a: &[u32], b: &[u32], c: &[u32]) -> Result<StabilizerElement> {
        let f = &self.field;
        self.element(f.from_coeffs(a)?, f.from_coeffs(b)?, f.from_coeffs(c)?)
    }

    pub fn is_member(&self, s: &StabilizerElement) -> bool {
        self.element(s.a, s.b, s.c).is_ok()
    }

    /// `s1 ∘ s2`: apply `s2` first, then `s1`.
    pub fn compose(&self, s1: &StabilizerElement, s2: &StabilizerElement) -> StabilizerElement {
        let f = &self.field;
        let a = f.mul(s1.a, s2.a);
        let b = f.add(f.mul(s1.a, s2.b), s1.b);
        // c = a1^(Q+1) c2 + a1 b1^Q b2 + c1
        let c = f.add(f.add(f.mul(self.norm(s1.a), s2.c), f.mul(f.mul(s1.a, self.conj(s1.b)), s2.b)), s1.c);
        StabilizerElement { a, b, c }
    }

    pub fn inverse(&self, s: &StabilizerElement) -> StabilizerElement {
        let f = &self.field;
        let a = f.inv(s.a).expect("a != 0 for stabilizer elements");
        let b = f.neg(f.mul(a, s.b));
        let num = f.add(s.c, f.mul(f.mul(s.a, self.conj(s.b)), b));
        let c = f.neg(f.mul(num, f.inv(self.norm(s.a)).expect("nonzero norm")));
        StabilizerElement { a, b, c }
    }

    pub fn pow(&self, s: &StabilizerElement, mut e: u64) -> StabilizerElement {
        let mut result = self.identity();
        let mut base = *s;
        while e > 0 {
            if e & 1 == 1 {
                result = self.compose(&result, &base);
            }
            base = self.compose(&base, &base);
            e >>= 1;
        }
        result
    }

    /// `τ σ τ^{-1}`.
    pub fn conjugate(&self, tau: &StabilizerElement, sigma: &StabilizerElement) -> StabilizerElement {
        self.compose(&self.compose(tau, sigma), &self.inverse(tau))
    }

    /// Least `k >= 1` with `s^k = 1`, by iterated composition.
    pub fn element_order(&self, s: &StabilizerElement) -> u64 {
        let mut k = 1u64;
        let mut cur = *s;
        while !cur.is_identity() {
            cur = self.compose(&cur, s);
            k += 1;
            assert!(k <= self.order(), "element order exceeds |H|");
        }
        k
    }

    /// Apply `s` to an affine point.
    pub fn act(&self, s: &StabilizerElement, x: Elem, y: Elem) -> (Elem, Elem) {
        let f = &self.field;
        let nx = f.add(f.add(f.mul(self.norm(s.a), x), f.mul(f.mul(s.a, self.conj(s.b)), y)), s.c);
        let ny = f.add(f.mul(s.a, y), s.b);
        (nx, ny)
    }

    /// Affine points of the curve over `F_{Q^2}`.
    pub fn affine_points(&self) -> &[(Elem, Elem)] {
        self.affine_points.get_or_init(|| {
            let f = &self.field;
            let mut pts = Vec::with_capacity(self.big_q.pow(3) as usize);
            for y in f.elements() {
                for &x in self.trace_fibers.get(&self.norm(y)).map_or(&[][..], |v| v) {
                    pts.push((x, y));
                }
            }
            pts
        })
    }

    /// All `Q^3 (Q^2 - 1)` elements: `a` over `F_{Q^2}^*`, `b` over `F_{Q^2}`, `c` over
    /// the `Q` solutions of `c^Q + c = b^(Q+1)`.
    pub fn elements(&self) -> impl Iterator<Item = StabilizerElement> + '_ {
        let f = &self.field;
        f.nonzero_elements().flat_map(move |a| {
            f.elements().flat_map(move |b| {
                self.trace_fibers[&self.norm(b)].iter().map(move |&c| StabilizerElement { a, b, c })
            })
        })
    }

    /// The `c` with `c^Q + c = 0`, i.e. the centre-type elements `[1, 0, c]`.
    pub fn center_kernel(&self) -> &[Elem] {
        &self.trace_fibers[&Elem::ZERO]
    }

    /// Closed-form Artin value.
    pub fn isigma_formula(&self, s: &StabilizerElement) -> Result<ArtinValue> {
        if s.is_identity() {
            return Err(Error::UndefinedArtinValue);
        }
        let q = self.big_q;
        let (value, case) = if s.is_wild() {
            if !s.b.is_zero() {
                (2, ArtinCase::WildTranslation)
            } else {
                (q + 2, ArtinCase::WildCenter)
            }
        } else {
            let ord = self.element_order(s);
            if ord.is_multiple_of(self.p) {
                (1, ArtinCase::MixedOrder)
            } else if (q + 1).is_multiple_of(ord) {
                (q + 1, ArtinCase::Homology)
            } else {
                (2, ArtinCase::TameOther)
            }
        };
        Ok(ArtinValue { value, case })
    }

    /// Number of rational points fixed by `s` (affine points plus the point at
    /// infinity). Equals `i(s)` when `a != 1`, since then `s` is not in the first
    /// ramification group at infinity and every fixed point contributes 1.
    pub fn isigma_bruteforce_tame(&self, s: &StabilizerElement) -> Result<u64> {
        if s.is_wild() {
            return Err(Error::Precondition(format!("{s} lies in the Sylow p-subgroup")));
        }
        let fixed = self.affine_points().iter().filter(|&&(x, y)| self.act(s, x, y) == (x, y)).count() as u64;
        Ok(fixed + 1)
    }

    /// `v_inf(σ(t) - t)` for the uniformizer `t = y/x`, via pole orders of
    /// `σ(t) - t = (σ(y) x - y σ(x)) / (x σ(x))`.
    pub fn isigma_bruteforce_wild(&self, s: &StabilizerElement) -> Result<u64> {
        if !s.is_wild() {
            return Err(Error::Precondition(format!("{s} has a != 1")));
        }
        if s.is_identity() {
            return Err(Error::UndefinedArtinValue);
        }
        let q = self.big_q as i64;
        // the monomials y^2, x, y of the numerator have valuations -2Q, -(Q+1), -Q
        assert!(-2 * q != -(q + 1) && -(q + 1) != -q && -2 * q != -q, "Q > 1");
        let f = &self.field;
        let big_q = self.big_q as u32;
        let x = BiPoly::monomial(Elem::ONE, 1, 0);
        let y = BiPoly::monomial(Elem::ONE, 0, 1);
        let sigma_x = BiPoly::linear(self.norm(s.a), f.mul(s.a, self.conj(s.b)), s.c);
        let sigma_y = BiPoly::linear(Elem::ZERO, s.a, s.b);
        let numerator = sigma_y.mul(f, &x).sub(f, &y.mul(f, &sigma_x));
        let v_num = valuation_at_infinity(f, big_q, &numerator)
            .ok_or_else(|| Error::Inconsistent("σ(t) = t for a nonidentity element".into()))?;
        let v_x = valuation_at_infinity(f, big_q, &x).expect("x != 0");
        let v_sx = valuation_at_infinity(f, big_q, &sigma_x).expect("σ(x) != 0");
        let v = v_num - v_x - v_sx;
        u64::try_from(v).map_err(|_| Error::Inconsistent(format!("negative i(σ) = {v}")))
    }

    /// Whichever brute-force oracle applies to `s`.
    pub fn isigma_oracle(&self, s: &StabilizerElement) -> Result<u64> {
        if s.is_wild() {
            self.isigma_bruteforce_wild(s)
        } else {
            self.isigma_bruteforce_tame(s)
        }
    }
}
