use std::fmt;

use super::{poly, Elem, Field};
use crate::error::{Error, Result};

/// An owned field element: dense coefficient vector plus the field it lives in.
///
/// Arithmetic here goes through polynomial multiplication and reduction modulo the
/// defining polynomial, never through the lookup tables, so it doubles as a
/// reference implementation for [`Field`]'s fast path.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {:?}", self.coeffs, self.field)
    }
}

impl FieldElement {
    pub(super) fn from_parts(field: Field, mut coeffs: Vec<u32>) -> Self {
        coeffs.resize(field.degree() as usize, 0);
        Self { field, coeffs }
    }

    pub fn new(field: &Field, coeffs: &[u32]) -> Result<Self> {
        let e = field.from_coeffs(coeffs)?;
        Ok(field.element(e))
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_parts(field.clone(), Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_parts(field.clone(), vec![1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficients, constant term first; always exactly `m` of them.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The compact handle for the same element.
    pub fn to_elem(&self) -> Elem {
        self.field.from_coeffs(&self.coeffs).expect("coefficients are canonical by construction")
    }

    fn p(&self) -> u32 {
        self.field.characteristic()
    }

    fn modulus(&self) -> &[u32] {
        &self.field.spec().modulus
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, mut c: Vec<u32>) -> Self {
        poly::trim(&mut c);
        Self::from_parts(self.field.clone(), c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(poly::add(&self.coeffs, &other.coeffs, self.p())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(poly::sub(&self.coeffs, &other.coeffs, self.p())))
    }

    pub fn neg(&self) -> Self {
        self.wrap(poly::sub(&[], &self.coeffs, self.p()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(poly::mul_mod(&self.coeffs, &other.coeffs, self.modulus(), self.p())))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, e: u64) -> Self {
        self.wrap(poly::pow_mod(&self.coeffs, e, self.modulus(), self.p()))
    }

    /// Inverse via `v^(p^m - 2)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn frobenius(&self, r: u64) -> Result<Self> {
        // validity of `r` is checked by the table-backed path
        self.field.frobenius(Elem::ZERO, r)?;
        Ok(self.pow(r))
    }

    pub fn rel_norm(&self, sub: u64) -> Result<Self> {
        self.field.rel_norm(self.to_elem(), sub)?;
        Ok(self.pow(sub + 1))
    }

    pub fn rel_trace(&self, sub: u64) -> Result<Self> {
        self.field.rel_trace(self.to_elem(), sub)?;
        self.pow(sub).add(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f9_examples() {
        let f = Field::new(3, 2).unwrap();
        let alpha = FieldElement::new(&f, &[0, 1]).unwrap();
        assert_eq!(alpha.mul(&alpha).unwrap().coeffs(), &[2, 0]);
        assert_eq!(alpha.frobenius(3).unwrap().coeffs(), &[0, 2]);
        assert_eq!(alpha.rel_norm(3).unwrap(), FieldElement::one(&f));
        assert!(alpha.rel_trace(3).unwrap().is_zero());
        assert_eq!(FieldElement::zero(&f).pow(0), FieldElement::one(&f));
    }

    #[test]
    fn errors() {
        let f = Field::new(3, 2).unwrap();
        let g = Field::new(2, 2).unwrap();
        assert_eq!(FieldElement::zero(&f).inv(), Err(Error::DivisionByZero));
        let a = FieldElement::one(&f);
        let b = FieldElement::one(&g);
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
        assert!(FieldElement::new(&f, &[3]).is_err());
        assert!(FieldElement::new(&f, &[0, 0, 1]).is_err());
    }

    fn fields() -> Vec<Field> {
        vec![
            Field::new(2, 1).unwrap(),
            Field::new(2, 4).unwrap(),
            Field::new(2, 6).unwrap(),
            Field::new(3, 2).unwrap(),
            Field::new(3, 6).unwrap(),
            Field::new(5, 3).unwrap(),
            Field::new(7, 1).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn tables_match_polynomial_arithmetic(which in 0usize..7, x in any::<u32>(), y in any::<u32>(), e in 0u64..2000) {
            let f = &fields()[which];
            let a = Elem(x % f.order() as u32);
            let b = Elem(y % f.order() as u32);
            let (ea, eb) = (f.element(a), f.element(b));
            prop_assert_eq!(ea.add(&eb).unwrap().to_elem(), f.add(a, b));
            prop_assert_eq!(ea.sub(&eb).unwrap().to_elem(), f.sub(a, b));
            prop_assert_eq!(ea.neg().to_elem(), f.neg(a));
            prop_assert_eq!(ea.mul(&eb).unwrap().to_elem(), f.mul(a, b));
            prop_assert_eq!(ea.pow(e).to_elem(), f.pow(a, e));
            if !a.is_zero() {
                prop_assert_eq!(ea.inv().unwrap().to_elem(), f.inv(a).unwrap());
                prop_assert_eq!(ea.mul(&ea.inv().unwrap()).unwrap(), FieldElement::one(f));
            }
        }

        #[test]
        fn norm_and_trace_land_in_subfield(which in 0usize..3, x in any::<u32>()) {
            let (f, q) = [(Field::new(2, 2).unwrap(), 2u64), (Field::new(3, 2).unwrap(), 3), (Field::new(2, 4).unwrap(), 4)]
                [which].clone();
            let v = f.element(Elem(x % f.order() as u32));
            let t = v.rel_trace(q).unwrap();
            let n = v.rel_norm(q).unwrap();
            prop_assert_eq!(t.pow(q), t);
            prop_assert_eq!(n.pow(q), n);
        }
    }
}
