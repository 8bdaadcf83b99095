//! Projective unitary matrices acting on the Hermitian curve `X^Q Z + X Z^Q = Y^(Q+1)`.
//!
//! The curve is the isotropic locus of the Hermitian form with Gram matrix
//! `J = antidiag(1, -1, 1)`, so `PGU(3, Q)` is the group of `M` with
//! `M^T J M^(Q) = λ J`, taken modulo scalars. A stabilizer element `[a, b, c]` is the
//! matrix `[[a^(Q+1), a b^Q, c], [0, a, b], [0, 0, 1]]` acting on columns `(X : Y : Z)`.
//!
//! Elements fixing a rational point are conjugated into the stabilizer of
//! `P∞ = (1 : 0 : 0)`. The others either fix a single Frobenius orbit of three points
//! over `F_{Q^6}` or fix nothing; their fixed points are eigenvectors, found from the
//! roots of the characteristic polynomial in `F_{Q^6}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ArtinCase, ArtinValue, Stabilizer, StabilizerElement};
use crate::error::{Error, Result};
use crate::ff::{Elem, Embedding, Field};

/// A projective point over some field, scaled so its first nonzero coordinate is 1.
pub type ProjPoint = [Elem; 3];

/// A `3 × 3` matrix over `F_{Q^2}`, scaled so its first nonzero entry (row-major) is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PguMatrix(pub [[Elem; 3]; 3]);

impl fmt::Display for PguMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.0.iter().map(|r| format!("[{}, {}, {}]", r[0], r[1], r[2])).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Where the fixed points of a nonidentity element lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointClass {
    /// Fixes a rational point; the value comes from the stabilizer after conjugation.
    Rational,
    /// Fixes exactly one point of degree three and no rational point.
    DegreeThree,
    /// Fixes no point of the curve.
    FixedPointFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralClassification {
    pub class: FixedPointClass,
    pub artin: ArtinValue,
    /// The conjugate inside the stabilizer, for the rational class.
    #[serde(skip)]
    pub conjugate: Option<StabilizerElement>,
}

/// `PGU(3, Q)` with the stabilizer `H`, the ambient field `F_{Q^6}` and an embedding.
pub struct Pgu {
    stab: Stabilizer,
    ambient: Field,
    embed: Embedding,
}

impl fmt::Debug for Pgu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pgu(Q = {})", self.stab.big_q())
    }
}

fn det3(f: &Field, m: &[[Elem; 3]; 3]) -> Elem {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        f.sub(f.mul(m[r1][c1], m[r2][c2]), f.mul(m[r1][c2], m[r2][c1]))
    };
    let t0 = f.mul(m[0][0], minor(1, 2, 1, 2));
    let t1 = f.mul(m[0][1], minor(1, 2, 0, 2));
    let t2 = f.mul(m[0][2], minor(1, 2, 0, 1));
    f.add(f.sub(t0, t1), t2)
}

fn mat_mul(f: &Field, a: &[[Elem; 3]; 3], b: &[[Elem; 3]; 3]) -> [[Elem; 3]; 3] {
    let mut out = [[Elem::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut s = Elem::ZERO;
            for k in 0..3 {
                s = f.add(s, f.mul(a[i][k], b[k][j]));
            }
            *entry = s;
        }
    }
    out
}

fn apply(f: &Field, m: &[[Elem; 3]; 3], v: &ProjPoint) -> ProjPoint {
    let mut out = [Elem::ZERO; 3];
    for (i, o) in out.iter_mut().enumerate() {
        for k in 0..3 {
            *o = f.add(*o, f.mul(m[i][k], v[k]));
        }
    }
    out
}

fn normalize_point(f: &Field, v: ProjPoint) -> Option<ProjPoint> {
    let lead = *v.iter().find(|e| !e.is_zero())?;
    let inv = f.inv(lead).expect("nonzero");
    Some(v.map(|e| f.mul(e, inv)))
}

/// Null space of a `3 × 3` matrix by Gaussian elimination.
fn null_space(f: &Field, m: &[[Elem; 3]; 3]) -> Vec<ProjPoint> {
    let mut rows = *m;
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..3 {
        let Some(pr) = (r..3).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).expect("pivot nonzero");
        rows[r] = rows[r].map(|e| f.mul(e, inv));
        for i in 0..3 {
            if i != r && !rows[i][c].is_zero() {
                let (factor, pivot_row) = (rows[i][c], rows[r]);
                for (e, pv) in rows[i].iter_mut().zip(pivot_row) {
                    *e = f.sub(*e, f.mul(factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..3).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = [Elem::ZERO; 3];
            v[fc] = Elem::ONE;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[ri][fc]);
            }
            v
        })
        .collect()
}

impl Pgu {
    /// Ambient fields above this order are refused.
    pub const MAX_AMBIENT_ORDER: u64 = 1 << 20;

    pub fn new(big_q: u64) -> Result<Self> {
        let stab = Stabilizer::new(big_q)?;
        let ambient_order = big_q.checked_pow(6).unwrap_or(u64::MAX);
        if ambient_order > Self::MAX_AMBIENT_ORDER {
            return Err(Error::BudgetExceeded {
                what: "F_{Q^6} tables",
                needed: ambient_order,
                limit: Self::MAX_AMBIENT_ORDER,
            });
        }
        let ambient = Field::with_order(ambient_order)?;
        let embed = ambient.embedding_from(stab.field())?;
        Ok(Self { stab, ambient, embed })
    }

    pub fn stabilizer(&self) -> &Stabilizer {
        &self.stab
    }

    pub fn big_q(&self) -> u64 {
        self.stab.big_q()
    }

    pub fn field(&self) -> &Field {
        self.stab.field()
    }

    pub fn ambient(&self) -> &Field {
        &self.ambient
    }

    /// `|PGU(3, Q)| = Q^3 (Q^3 + 1)(Q^2 - 1)`.
    pub fn order(&self) -> u64 {
        let q = self.big_q();
        q.pow(3) * (q.pow(3) + 1) * (q * q - 1)
    }

    /// Scale by the inverse of the first nonzero entry; rejects singular matrices.
    pub fn normalize(&self, m: [[Elem; 3]; 3]) -> Result<PguMatrix> {
        let f = self.field();
        if det3(f, &m).is_zero() {
            return Err(Error::NotUnitary);
        }
        let lead = *m.iter().flatten().find(|e| !e.is_zero()).expect("nonsingular");
        let inv = f.inv(lead)?;
        Ok(PguMatrix(m.map(|row| row.map(|e| f.mul(e, inv)))))
    }

    /// Validated constructor: nonsingular and unitary up to a scalar.
    pub fn matrix(&self, m: [[Elem; 3]; 3]) -> Result<PguMatrix> {
        let order = self.field().order() as u32;
        if m.iter().flatten().any(|e| e.index() >= order) {
            return Err(Error::InvalidParameter("entry outside F_{Q^2}".into()));
        }
        let n = self.normalize(m)?;
        if self.unitary_multiplier(&n.0).is_none() {
            return Err(Error::NotUnitary);
        }
        Ok(n)
    }

    /// `λ` with `M^T J M^(Q) = λ J`, if it exists.
    pub fn unitary_multiplier(&self, m: &[[Elem; 3]; 3]) -> Option<Elem> {
        let f = self.field();
        let q = self.big_q();
        let j = self.gram();
        let mt = [0, 1, 2].map(|r| [0, 1, 2].map(|c| m[c][r]));
        let mq = m.map(|row| row.map(|e| f.pow(e, q)));
        let g = mat_mul(f, &mat_mul(f, &mt, &j), &mq);
        let lambda = g[0][2];
        if lambda.is_zero() {
            return None;
        }
        let target = j.map(|row| row.map(|e| f.mul(e, lambda)));
        (g == target).then_some(lambda)
    }

    fn gram(&self) -> [[Elem; 3]; 3] {
        let f = self.field();
        let z = Elem::ZERO;
        [[z, z, Elem::ONE], [z, f.neg(Elem::ONE), z], [Elem::ONE, z, z]]
    }

    pub fn identity(&self) -> PguMatrix {
        let (z, o) = (Elem::ZERO, Elem::ONE);
        PguMatrix([[o, z, z], [z, o, z], [z, z, o]])
    }

    /// `(X : Y : Z) -> (Z : Y : X)`, exchanging the origin and `P∞`.
    pub fn swap(&self) -> PguMatrix {
        let (z, o) = (Elem::ZERO, Elem::ONE);
        PguMatrix([[z, z, o], [z, o, z], [o, z, z]])
    }

    pub fn is_identity(&self, m: &PguMatrix) -> bool {
        *m == self.identity()
    }

    /// `m1 ∘ m2`, applying `m2` first.
    pub fn compose(&self, m1: &PguMatrix, m2: &PguMatrix) -> PguMatrix {
        self.normalize(mat_mul(self.field(), &m1.0, &m2.0)).expect("product of nonsingular matrices")
    }

    /// Adjugate, which equals the inverse up to the scalar `det`.
    pub fn inverse(&self, m: &PguMatrix) -> PguMatrix {
        let f = self.field();
        let a = &m.0;
        let mut adj = [[Elem::ZERO; 3]; 3];
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // cofactor of a[j][i]
                let rs: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                let cs: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                let minor =
                    f.sub(f.mul(a[rs[0]][cs[0]], a[rs[1]][cs[1]]), f.mul(a[rs[0]][cs[1]], a[rs[1]][cs[0]]));
                *entry = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
            }
        }
        self.normalize(adj).expect("adjugate of a nonsingular matrix")
    }

    pub fn element_order(&self, m: &PguMatrix) -> u64 {
        let mut k = 1;
        let mut cur = *m;
        while !self.is_identity(&cur) {
            cur = self.compose(&cur, m);
            k += 1;
            assert!(k <= self.order(), "element order exceeds |PGU(3, Q)|");
        }
        k
    }

    pub fn from_stabilizer(&self, s: &StabilizerElement) -> PguMatrix {
        let f = self.field();
        let q = self.big_q();
        let big_a = f.pow(s.a, q + 1);
        let mid = f.mul(s.a, f.pow(s.b, q));
        let z = Elem::ZERO;
        self.normalize([[big_a, mid, s.c], [z, s.a, s.b], [z, z, Elem::ONE]])
            .expect("stabilizer matrices are nonsingular")
    }

    /// Recover `[a, b, c]` from a matrix fixing `P∞`.
    pub fn to_stabilizer(&self, m: &PguMatrix) -> Option<StabilizerElement> {
        let f = self.field();
        let a = &m.0;
        if !(a[1][0].is_zero() && a[2][0].is_zero() && a[2][1].is_zero()) || a[2][2].is_zero() {
            return None;
        }
        let inv = f.inv(a[2][2]).ok()?;
        let s = |e: Elem| f.mul(e, inv);
        let elem = self.stab.element(s(a[1][1]), s(a[1][2]), s(a[0][2])).ok()?;
        (self.from_stabilizer(&elem) == *m).then_some(elem)
    }

    /// Rational points of the curve, `P∞` first.
    pub fn rational_points(&self) -> Vec<ProjPoint> {
        let mut pts = vec![[Elem::ONE, Elem::ZERO, Elem::ZERO]];
        let f = self.field();
        pts.extend(
            self.stab
                .affine_points()
                .iter()
                .map(|&(x, y)| normalize_point(f, [x, y, Elem::ONE]).expect("Z = 1")),
        );
        pts
    }

    pub fn act(&self, m: &PguMatrix, v: &ProjPoint) -> ProjPoint {
        let f = self.field();
        normalize_point(f, apply(f, &m.0, v)).expect("nonsingular action")
    }

    /// An element of `PGU(3, Q)` sending the rational point `p` to `P∞`.
    pub fn conjugator_to_infinity(&self, p: &ProjPoint) -> PguMatrix {
        if p[1].is_zero() && p[2].is_zero() {
            return self.identity();
        }
        let f = self.field();
        let q = self.big_q();
        let zinv = f.inv(p[2]).expect("affine point");
        let (x0, y0) = (f.mul(p[0], zinv), f.mul(p[1], zinv));
        // [1, -y0, y0^(Q+1) - x0] sends (x0, y0) to the origin
        let t = self
            .stab
            .element(Elem::ONE, f.neg(y0), f.sub(f.pow(y0, q + 1), x0))
            .expect("translation satisfies the membership constraint");
        self.compose(&self.swap(), &self.from_stabilizer(&t))
    }

    fn on_curve_ambient(&self, v: &ProjPoint) -> bool {
        let f = &self.ambient;
        let q = self.big_q();
        let lhs = f.add(f.mul(f.pow(v[0], q), v[2]), f.mul(v[0], f.pow(v[2], q)));
        lhs == f.pow(v[1], q + 1)
    }

    /// Fixed points of `m` over `F_{Q^6}` lying on the curve.
    fn ambient_fixed_points(&self, m: &PguMatrix) -> Vec<ProjPoint> {
        let f = &self.ambient;
        let big = m.0.map(|row| row.map(|e| self.embed.apply(e)));
        let small = self.field();
        let a = &m.0;
        let tr = small.add(small.add(a[0][0], a[1][1]), a[2][2]);
        let principal =
            |i: usize, j: usize| small.sub(small.mul(a[i][i], a[j][j]), small.mul(a[i][j], a[j][i]));
        let c1 = small.add(small.add(principal(0, 1), principal(0, 2)), principal(1, 2));
        let det = det3(small, a);
        let (tr, c1, det) = (self.embed.apply(tr), self.embed.apply(c1), self.embed.apply(det));
        // λ^3 - tr λ^2 + c1 λ - det
        let charpoly = |l: Elem| {
            let l2 = f.mul(l, l);
            f.sub(f.add(f.sub(f.mul(l2, l), f.mul(tr, l2)), f.mul(c1, l)), det)
        };
        let mut out = Vec::new();
        for lambda in f.nonzero_elements().filter(|&l| charpoly(l).is_zero()) {
            let mut shifted = big;
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = f.sub(row[i], lambda);
            }
            let basis = null_space(f, &shifted);
            match basis.len() {
                1 => out.extend(normalize_point(f, basis[0])),
                2 => {
                    // projective line: u + t w and w
                    let (u, w) = (basis[0], basis[1]);
                    out.extend(normalize_point(f, w));
                    for t in f.elements() {
                        let v = [0, 1, 2].map(|i| f.add(u[i], f.mul(t, w[i])));
                        out.extend(normalize_point(f, v));
                    }
                }
                _ => {}
            }
        }
        out.retain(|v| self.on_curve_ambient(v));
        out.sort();
        out.dedup();
        out
    }

    fn frobenius_point(&self, v: &ProjPoint) -> ProjPoint {
        let f = &self.ambient;
        let r = self.big_q() * self.big_q();
        normalize_point(f, v.map(|e| f.pow(e, r))).expect("nonzero point")
    }

    /// Artin value of any nonidentity element of `PGU(3, Q)`.
    pub fn classify_general(&self, m: &PguMatrix) -> Result<GeneralClassification> {
        if self.unitary_multiplier(&m.0).is_none() {
            return Err(Error::NotUnitary);
        }
        if self.is_identity(m) {
            return Err(Error::UndefinedArtinValue);
        }
        if let Some(p) = self.rational_points().into_iter().find(|p| self.act(m, p) == *p) {
            let tau = self.conjugator_to_infinity(&p);
            let conj = self.compose(&self.compose(&tau, m), &self.inverse(&tau));
            let s = self
                .to_stabilizer(&conj)
                .ok_or_else(|| Error::Inconsistent(format!("conjugate of {m} does not fix P∞")))?;
            return Ok(GeneralClassification {
                class: FixedPointClass::Rational,
                artin: self.stab.isigma_formula(&s)?,
                conjugate: Some(s),
            });
        }
        let fixed = self.ambient_fixed_points(m);
        if fixed.is_empty() {
            return Ok(GeneralClassification {
                class: FixedPointClass::FixedPointFree,
                artin: ArtinValue { value: 0, case: ArtinCase::FixedPointFree },
                conjugate: None,
            });
        }
        let start = fixed[0];
        let mut orbit = vec![start];
        let mut cur = self.frobenius_point(&start);
        while cur != start {
            orbit.push(cur);
            cur = self.frobenius_point(&cur);
        }
        orbit.sort();
        if orbit.len() != 3 || orbit != fixed {
            return Err(Error::Inconsistent(format!(
                "{m} fixes {} points over F_(Q^6) in an orbit of size {}",
                fixed.len(),
                orbit.len()
            )));
        }
        Ok(GeneralClassification {
            class: FixedPointClass::DegreeThree,
            artin: ArtinValue { value: 3, case: ArtinCase::DegreeThree },
            conjugate: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn find_of_order(g: &Pgu, ord: u64) -> PguMatrix {
        let w = g.swap();
        g.stabilizer()
            .elements()
            .map(|h| g.compose(&w, &g.from_stabilizer(&h)))
            .find(|m| g.element_order(m) == ord)
            .expect("element of the requested order")
    }

    #[test]
    fn stabilizer_matrices_are_unitary() {
        for q in [2u64, 3] {
            let g = Pgu::new(q).unwrap();
            let f = g.field().clone();
            for s in g.stabilizer().elements() {
                let m = g.from_stabilizer(&s);
                let scale = f.inv(m.0[2][2]).unwrap();
                let lambda = g.unitary_multiplier(&m.0).unwrap();
                // λ = a^(Q+1) for the unscaled matrix
                let scaled_back = f.mul(lambda, f.pow(scale, q + 1));
                assert_eq!(scaled_back, f.pow(s.a, q + 1));
                assert_eq!(g.to_stabilizer(&m), Some(s));
            }
            assert!(g.unitary_multiplier(&g.swap().0).is_some());
        }
    }

    #[test]
    fn matrix_composition_matches_stabilizer() {
        let g = Pgu::new(3).unwrap();
        let h = g.stabilizer();
        let elems: Vec<_> = h.elements().step_by(11).collect();
        for s in &elems {
            for t in elems.iter().take(10) {
                let lhs = g.compose(&g.from_stabilizer(s), &g.from_stabilizer(t));
                assert_eq!(lhs, g.from_stabilizer(&h.compose(s, t)));
            }
            assert_eq!(g.inverse(&g.from_stabilizer(s)), g.from_stabilizer(&h.inverse(s)));
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let g = Pgu::new(2).unwrap();
        let (z, o) = (Elem::ZERO, Elem::ONE);
        assert_eq!(g.matrix([[o, o, z], [z, o, z], [z, z, o]]), Err(Error::NotUnitary));
        assert_eq!(g.matrix([[z; 3]; 3]), Err(Error::NotUnitary));
        assert!(g.matrix([[z, z, o], [z, o, z], [o, z, z]]).is_ok());
        assert_eq!(g.classify_general(&g.identity()), Err(Error::UndefinedArtinValue));
    }

    #[test]
    fn swap_and_translations_move_points() {
        let g = Pgu::new(3).unwrap();
        let inf = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        let pts = g.rational_points();
        assert_eq!(pts.len(), 28);
        for p in &pts {
            let tau = g.conjugator_to_infinity(p);
            assert_eq!(g.act(&tau, p), inf);
            assert!(pts.contains(&g.act(&g.swap(), p)));
        }
    }

    #[test]
    fn order_seven_element_fixes_a_cubic_orbit() {
        let g = Pgu::new(3).unwrap();
        let m = find_of_order(&g, 7);
        let c = g.classify_general(&m).unwrap();
        assert_eq!(c.class, FixedPointClass::DegreeThree);
        assert_eq!(c.artin.value, 3);
        assert_eq!(g.ambient_fixed_points(&m).len(), 3);
    }

    #[test]
    fn embedded_stabilizer_agrees_with_formula() {
        for q in [2u64, 3] {
            let g = Pgu::new(q).unwrap();
            let h = g.stabilizer();
            for s in h.elements().filter(|s| !s.is_identity()) {
                let c = g.classify_general(&g.from_stabilizer(&s)).unwrap();
                assert_eq!(c.class, FixedPointClass::Rational);
                assert_eq!(c.artin.value, h.isigma_formula(&s).unwrap().value, "{s}");
            }
        }
    }

    #[test]
    fn spectrum_over_pgu_3_2() {
        // all of PGU(3, 2) via products W h1 W h2 and h
        let g = Pgu::new(2).unwrap();
        let h: Vec<PguMatrix> = g.stabilizer().elements().map(|s| g.from_stabilizer(&s)).collect();
        let mut all = std::collections::BTreeSet::new();
        all.extend(h.iter().copied());
        for a in &h {
            let wa = g.compose(&g.swap(), a);
            for b in &h {
                all.insert(g.compose(b, &wa));
            }
        }
        assert_eq!(all.len() as u64, g.order());
        let mut seen = std::collections::BTreeSet::new();
        let mut total = 0;
        for m in all.iter().filter(|m| !g.is_identity(m)) {
            let v = g.classify_general(m).unwrap().artin.value;
            seen.insert(v);
            total += v;
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        // genus 1 curve, the full group of order 216 has a rational quotient: 0 = 216 * (-2) + deg R
        assert_eq!(total, 432);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn conjugation_invariance_general(i in 0usize..216, j in 0usize..216, k in 0usize..216) {
            let g = Pgu::new(3).unwrap();
            let h: Vec<_> = g.stabilizer().elements().collect();
            let w = g.swap();
            let sigma = g.compose(&w, &g.from_stabilizer(&h[i]));
            let tau = g.compose(&g.from_stabilizer(&h[j]), &g.compose(&w, &g.from_stabilizer(&h[k])));
            let conj = g.compose(&g.compose(&tau, &sigma), &g.inverse(&tau));
            prop_assume!(!g.is_identity(&sigma));
            prop_assert_eq!(
                g.classify_general(&conj).unwrap().artin.value,
                g.classify_general(&sigma).unwrap().artin.value
            );
        }
    }
}
