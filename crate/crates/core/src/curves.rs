//! Curve models, genus formulas and rational point counts.
//!
//! All four families are given by additive ("linearized") polynomials set equal to a
//! power map, so the affine count reduces to fiber sizes: build the histogram of the
//! additive side once, then look up each value of the power side. This replaces a
//! product loop over the coordinates by a single pass over the field.

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, prime_power};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `x^Q + x = y^(Q+1)` over `F_{Q^2}`.
    Hermitian,
    /// `x^q + x = y^(q+1)`, `y^(q^2) - y = z^((q^n+1)/(q+1))` over `F_{q^(2n)}`.
    Ggk,
    /// `y^(q^2) - y = z^((q^n+1)/(q+1))` over `F_{q^(2n)}`.
    Xn,
    /// `y^(q^2) - y^q + y = x^(q^2-q+1)` over `F_{q^6}`.
    Yrem,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hermitian => "hermitian",
            Family::Ggk => "ggk",
            Family::Xn => "xn",
            Family::Yrem => "yrem",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermitian" => Ok(Family::Hermitian),
            "ggk" => Ok(Family::Ggk),
            "xn" => Ok(Family::Xn),
            "yrem" => Ok(Family::Yrem),
            other => Err(Error::InvalidParameter(format!("unknown curve family `{other}`"))),
        }
    }
}

/// Enumeration limits. Counting fails with [`Error::BudgetExceeded`] instead of sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_field_order: u64,
    pub max_loop: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_field_order: 1 << 20, max_loop: 1_000_000_000 }
    }
}

impl Budget {
    fn check_field(&self, order: u64) -> Result<()> {
        if order > self.max_field_order {
            return Err(Error::BudgetExceeded {
                what: "field enumeration",
                needed: order,
                limit: self.max_field_order,
            });
        }
        Ok(())
    }

    fn check_loop(&self, iterations: u64) -> Result<()> {
        if iterations > self.max_loop {
            return Err(Error::BudgetExceeded {
                what: "counting loop",
                needed: iterations,
                limit: self.max_loop,
            });
        }
        Ok(())
    }
}

pub fn genus_hermitian(big_q: u64) -> u64 {
    big_q * (big_q - 1) / 2
}

pub fn genus_ggk(q: u64, n: u32) -> u64 {
    let qn = q.pow(n);
    let two_g_minus_2 = (q * q - 1) * (qn + 1) - (q.pow(3) + 1);
    assert!(two_g_minus_2.is_multiple_of(2), "2g - 2 is even");
    (two_g_minus_2 + 2) / 2
}

pub fn genus_xn(q: u64, n: u32) -> u64 {
    let qn = q.pow(n);
    let two_g_minus_2 = (q - 1) * (qn + 1) - (q * q + 1);
    assert!(two_g_minus_2.is_multiple_of(2), "2g - 2 is even");
    (two_g_minus_2 + 2) / 2
}

pub fn genus_yrem(q: u64) -> u64 {
    (q - 1) * (q.pow(3) - q) / 2
}

/// A curve from one of the four families together with its field of definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    pub family: Family,
    /// `q`; for the Hermitian family this is the Hermitian parameter `Q` itself.
    pub q: u64,
    /// `n` for [`Family::Ggk`] and [`Family::Xn`]; 1 for Hermitian, 3 for Yrem.
    pub n: u32,
    pub base_field: FieldSpec,
    pub genus: u64,
    /// Degree-one places at infinity on the nonsingular model.
    pub n_infinity: u64,
}

fn check_odd_n(n: u32) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n must be odd and >= 3, got {n}")));
    }
    Ok(())
}

fn field_spec_of_order(p: u64, e: u32) -> Result<FieldSpec> {
    FieldSpec::smallest(p as u32, e)
}

impl CurveModel {
    pub fn hermitian(big_q: u64) -> Result<Self> {
        let (p, e) = prime_power(big_q)?;
        Ok(Self {
            family: Family::Hermitian,
            q: big_q,
            n: 1,
            base_field: field_spec_of_order(p, 2 * e)?,
            genus: genus_hermitian(big_q),
            n_infinity: 1,
        })
    }

    pub fn ggk(q: u64, n: u32) -> Result<Self> {
        check_odd_n(n)?;
        let (p, e) = prime_power(q)?;
        Ok(Self {
            family: Family::Ggk,
            q,
            n,
            base_field: field_spec_of_order(p, 2 * n * e)?,
            genus: genus_ggk(q, n),
            n_infinity: 1,
        })
    }

    pub fn xn(q: u64, n: u32) -> Result<Self> {
        check_odd_n(n)?;
        let (p, e) = prime_power(q)?;
        Ok(Self {
            family: Family::Xn,
            q,
            n,
            base_field: field_spec_of_order(p, 2 * n * e)?,
            genus: genus_xn(q, n),
            n_infinity: 1,
        })
    }

    pub fn yrem(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Ok(Self {
            family: Family::Yrem,
            q,
            n: 3,
            base_field: field_spec_of_order(p, 6 * e)?,
            genus: genus_yrem(q),
            n_infinity: 1,
        })
    }

    /// Build a model from family name and parameters; `n` is ignored by Hermitian and Yrem.
    pub fn new(family: Family, q: u64, n: u32) -> Result<Self> {
        match family {
            Family::Hermitian => Self::hermitian(q),
            Family::Ggk => Self::ggk(q, n),
            Family::Xn => Self::xn(q, n),
            Family::Yrem => Self::yrem(q),
        }
    }

    pub fn field_order(&self) -> u64 {
        self.base_field.order()
    }

    /// `|F| + 1 + 2 g sqrt|F|`.
    pub fn hasse_weil_target(&self) -> u64 {
        let size = self.field_order();
        let root = exact_sqrt(size).expect("fields of definition have square order");
        size + 1 + 2 * self.genus * root
    }
}

/// Exponent of the power-map side, `(q^n + 1)/(q + 1)` for Ggk and Xn.
fn power_exponent(model: &CurveModel) -> u64 {
    let q = model.q;
    match model.family {
        Family::Hermitian => q + 1,
        Family::Ggk | Family::Xn => {
            let num = q.pow(model.n) + 1;
            debug_assert_eq!(num % (q + 1), 0, "n odd makes q + 1 divide q^n + 1");
            num / (q + 1)
        }
        Family::Yrem => q * q - q + 1,
    }
}

/// `hist[w] = #{v : map(v) = w}` over the whole field.
fn fiber_histogram(field: &Field, map: impl Fn(Elem) -> Elem) -> Vec<u32> {
    let mut hist = vec![0u32; field.order() as usize];
    for v in field.elements() {
        hist[map(v).index() as usize] += 1;
    }
    hist
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

/// Sum of `weight(v)` over every field element, split across `workers` threads
/// (`0` lets the pool choose).
fn parallel_sum(field: &Field, workers: usize, weight: impl Fn(Elem) -> u64 + Sync) -> Result<u64> {
    use rayon::prelude::*;
    let order = field.order() as u32;
    Ok(pool(workers)?.install(|| {
        (0..order).into_par_iter().map(|i| weight(field.from_index(i).expect("index in range"))).sum()
    }))
}

/// Affine solutions over the field of definition.
pub fn count_affine(model: &CurveModel, budget: &Budget, workers: usize) -> Result<u64> {
    count_affine_over(model, 1, budget, workers)
}

/// Affine solutions of the model's equations over the degree-`ext` extension of
/// its field of definition.
pub fn count_affine_over(model: &CurveModel, ext: u32, budget: &Budget, workers: usize) -> Result<u64> {
    if ext == 0 {
        return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
    }
    let spec = &model.base_field;
    let order = (spec.order() as u128).pow(ext);
    let order = u64::try_from(order).unwrap_or(u64::MAX);
    budget.check_field(order)?;
    // one histogram pass (two for Ggk) plus one lookup pass
    budget.check_loop(3 * order)?;
    let field = Field::new(spec.p, spec.m * ext)?;
    let q = model.q;
    let e = power_exponent(model);
    let f = &field;

    match model.family {
        Family::Hermitian => {
            let fib = fiber_histogram(f, |x| f.add(f.pow(x, q), x));
            parallel_sum(f, workers, |y| u64::from(fib[f.pow(y, e).index() as usize]))
        }
        Family::Xn => {
            let fib = fiber_histogram(f, |y| f.sub(f.pow(y, q * q), y));
            parallel_sum(f, workers, |z| u64::from(fib[f.pow(z, e).index() as usize]))
        }
        Family::Yrem => {
            let fib = fiber_histogram(f, |y| f.add(f.sub(f.pow(y, q * q), f.pow(y, q)), y));
            parallel_sum(f, workers, |x| u64::from(fib[f.pow(x, e).index() as usize]))
        }
        Family::Ggk => {
            let x_fiber = fiber_histogram(f, |x| f.add(f.pow(x, q), x));
            // weighted[w] = sum over y with y^(q^2) - y = w of #{x : x^q + x = y^(q+1)}
            let mut weighted = vec![0u64; f.order() as usize];
            for y in f.elements() {
                let w = f.sub(f.pow(y, q * q), y);
                weighted[w.index() as usize] += u64::from(x_fiber[f.pow(y, q + 1).index() as usize]);
            }
            parallel_sum(f, workers, |z| weighted[f.pow(z, e).index() as usize])
        }
    }
}

/// Rational point count of a model against its Hasse–Weil bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub affine: u64,
    pub at_infinity: u64,
    pub total: u64,
    #[serde(rename = "target")]
    pub hasse_weil_target: u64,
    pub maximal: bool,
}

impl PointCount {
    pub fn new(model: &CurveModel, affine: u64) -> Self {
        let total = affine + model.n_infinity;
        let target = model.hasse_weil_target();
        Self {
            affine,
            at_infinity: model.n_infinity,
            total,
            hasse_weil_target: target,
            maximal: total == target,
        }
    }
}

/// Count points and compare with `|F| + 1 + 2 g sqrt|F|`.
pub fn check_maximal(model: &CurveModel, budget: &Budget, workers: usize) -> Result<PointCount> {
    let affine = count_affine(model, budget, workers)?;
    let count = PointCount::new(model, affine);
    if count.total > count.hasse_weil_target {
        return Err(Error::Inconsistent(format!(
            "{} points exceed the Hasse-Weil bound {}",
            count.total, count.hasse_weil_target
        )));
    }
    Ok(count)
}
