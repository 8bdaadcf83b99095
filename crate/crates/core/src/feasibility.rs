//! Which degrees `d` admit a Galois covering of a maximal curve of genus `g` by the
//! Hermitian curve over `F_{Q^2}`.
//!
//! Write `2g - 2 = A(Q+1) - B` with `1 <= B <= Q+1` and let `k` be maximal with
//! `k(A+1) < B`. The candidate set starts from the point-splitting lower bound and the
//! Hurwitz upper bound, is sharpened by two refined lower bounds, and each surviving
//! `d` must admit a ramification profile (see [`crate::covers::profile_exists`]).
//! Everything is exact integer arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, div_ceil, div_floor, divisors, pgu3_order_factors, prime_power};
use crate::covers::{profile_exists, ProfileOptions};
use crate::curves::{genus_ggk, genus_hermitian, genus_xn, genus_yrem, Family};
use crate::error::{Error, Result};

/// `2g - 2 = A(Q+1) - B`, `1 <= B <= Q+1`, `k = max{k : k(A+1) < B}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusClass {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub genus: u64,
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "B")]
    pub b: i64,
    pub k: i64,
}

impl GenusClass {
    pub fn two_g_minus_2(&self) -> i64 {
        2 * self.genus as i64 - 2
    }
}

pub fn genus_class(big_q: u64, genus: u64) -> GenusClass {
    let q1 = big_q as i64 + 1;
    let x = 2 * genus as i64 - 2;
    let a = div_floor(x, q1) + 1;
    let b = a * q1 - x;
    debug_assert!((1..=q1).contains(&b));
    // a >= 0 because x >= -2
    let k = div_floor(b - 1, a + 1);
    GenusClass { big_q, genus, a, b, k }
}

fn hermitian_two_g_minus_2(big_q: u64) -> i64 {
    (big_q as i64 - 2) * (big_q as i64 + 1)
}

/// `floor((2g(H) - 2) / (2g - 2))`; needs `g >= 2`.
pub fn hurwitz_upper(big_q: u64, genus: u64) -> Result<u64> {
    if genus < 2 {
        return Err(Error::Precondition(format!("Hurwitz bound needs genus >= 2, got {genus}")));
    }
    Ok(div_floor(hermitian_two_g_minus_2(big_q), 2 * genus as i64 - 2) as u64)
}

/// `ceil((Q^3 + 1) / (Q^2 + 1 + 2gQ))`: rational points of the Hermitian curve over
/// those of a maximal curve of genus `g`.
pub fn splitting_lower(big_q: u64, genus: u64) -> u64 {
    let num = (big_q.pow(3) + 1) as i64;
    let den = (big_q * big_q + 1 + 2 * genus * big_q) as i64;
    div_ceil(num, den) as u64
}

/// `ceil((Q + k)/(A + 1))` when `B != A + 2`.
pub fn lemcov_lower(gc: &GenusClass) -> Option<u64> {
    if gc.b == gc.a + 2 || gc.k * (gc.a + 1) >= gc.b {
        return None;
    }
    Some(div_ceil(gc.big_q as i64 + gc.k, gc.a + 1) as u64)
}

/// `ceil((Q + 1)/(A + 1))` when `B > A + 2`.
pub fn lemcov_corollary(gc: &GenusClass) -> Option<u64> {
    (gc.b > gc.a + 2).then(|| div_ceil(gc.big_q as i64 + 1, gc.a + 1) as u64)
}

/// `ceil((k + 1)(Q + 1)/B)` when `B > A + 2`.
pub fn proplb_lower(gc: &GenusClass) -> Option<u64> {
    (gc.b > gc.a + 2).then(|| div_ceil((gc.k + 1) * (gc.big_q as i64 + 1), gc.b) as u64)
}

/// `deg R = R0 (Q+1) + R1` with `R0 = Q - 2 - dA + k`, `R1 = dB - k(Q+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationBudget {
    pub d: u64,
    pub r0: i64,
    pub r1: i64,
    pub deg_r: i64,
}

impl RamificationBudget {
    /// `k(R0 - d) + (R1 - d) >= k(k - 3)`.
    pub fn satisfies_inequality(&self, gc: &GenusClass) -> bool {
        let d = self.d as i64;
        gc.k * (self.r0 - d) + (self.r1 - d) >= gc.k * (gc.k - 3)
    }
}

pub fn ramification_budget(gc: &GenusClass, d: u64) -> RamificationBudget {
    let q = gc.big_q as i64;
    let di = d as i64;
    let r0 = q - 2 - di * gc.a + gc.k;
    let r1 = di * gc.b - gc.k * (q + 1);
    let deg_r = r0 * (q + 1) + r1;
    assert_eq!(
        deg_r,
        hermitian_two_g_minus_2(gc.big_q) - di * gc.two_g_minus_2(),
        "budget decomposition is an identity"
    );
    RamificationBudget { d, r0, r1, deg_r }
}

/// Bound that removed a candidate degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Splitting,
    Lemcov,
    Proplb,
    Hurwitz,
    BudgetSign,
    Profile,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Layer::Splitting => "splitting",
            Layer::Lemcov => "lemcov",
            Layer::Proplb => "proplb",
            Layer::Hurwitz => "hurwitz",
            Layer::BudgetSign => "budget_sign",
            Layer::Profile => "profile",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub d: u64,
    pub reason: Layer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub splitting: u64,
    pub lemcov: Option<u64>,
    pub lemcov_corollary: Option<u64>,
    pub proplb: Option<u64>,
    pub hurwitz_upper: Option<u64>,
}

/// A surviving degree with its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleDegree {
    pub d: u64,
    pub r0: i64,
    pub r1: i64,
    pub deg_r: i64,
    /// `d` divides `|PGU(3, Q)|`; informational, not used for pruning.
    pub divides_group_order: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub q: Option<u64>,
    pub n: Option<u32>,
    pub family: Option<Family>,
    pub genus: u64,
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "B")]
    pub b: i64,
    pub k: i64,
    pub bounds: Bounds,
    pub lower: u64,
    pub upper: Option<u64>,
    /// `[lower, upper]` from the bounds alone, `None` when empty or unbounded.
    pub interval: Option<[u64; 2]>,
    pub feasible: Vec<u64>,
    pub details: Vec<FeasibleDegree>,
    pub eliminated: Vec<Elimination>,
    pub theorem_tag: Option<String>,
    pub warnings: Vec<String>,
}

impl FeasibilityReport {
    pub fn min_feasible(&self) -> Option<u64> {
        self.feasible.first().copied()
    }

    pub fn max_feasible(&self) -> Option<u64> {
        self.feasible.last().copied()
    }
}

fn group_order_divisors(big_q: u64) -> Result<(Vec<u64>, u128)> {
    let f = pgu3_order_factors(big_q)?;
    let order: u128 = f.iter().map(|&(p, e)| u128::from(p).pow(e)).product();
    Ok((divisors(&f), order))
}

fn divides_group_order(big_q: u64, d: u64) -> bool {
    let q = u128::from(big_q);
    let order = q.pow(3) * (q.pow(3) + 1) * (q * q - 1);
    order % u128::from(d) == 0
}

/// Largest `Q` accepted by the engine (keeps `Q^3` and the profile loops in range).
pub const MAX_Q: u64 = 1 << 20;

/// Run every layer for a target genus.
pub fn feasible_degrees(big_q: u64, genus: u64) -> Result<FeasibilityReport> {
    prime_power(big_q)?;
    if big_q > MAX_Q {
        return Err(Error::BudgetExceeded { what: "feasibility Q", needed: big_q, limit: MAX_Q });
    }
    let gc = genus_class(big_q, genus);
    let bounds = Bounds {
        splitting: splitting_lower(big_q, genus),
        lemcov: lemcov_lower(&gc),
        lemcov_corollary: lemcov_corollary(&gc),
        proplb: proplb_lower(&gc),
        hurwitz_upper: hurwitz_upper(big_q, genus).ok(),
    };
    let lower = [Some(bounds.splitting), bounds.lemcov, bounds.proplb]
        .into_iter()
        .flatten()
        .max()
        .expect("splitting bound always applies");
    let mut report = FeasibilityReport {
        big_q,
        q: None,
        n: None,
        family: None,
        genus,
        a: gc.a,
        b: gc.b,
        k: gc.k,
        bounds,
        lower,
        upper: bounds.hurwitz_upper,
        interval: None,
        feasible: Vec::new(),
        details: Vec::new(),
        eliminated: Vec::new(),
        theorem_tag: None,
        warnings: Vec::new(),
    };
    if genus > genus_hermitian(big_q) {
        report.warnings.push(format!(
            "genus {genus} exceeds the Hermitian genus {}; no covering exists",
            genus_hermitian(big_q)
        ));
    }

    let Some(upper) = bounds.hurwitz_upper else {
        // g <= 1: no Hurwitz bound; keep divisors of |PGU(3, Q)| above the splitting bound
        report.warnings.push(format!(
            "genus {genus} <= 1: Hurwitz bound not applicable; candidates are divisors of |PGU(3, Q)| \
             at or above the splitting bound, without profile checks"
        ));
        let (divs, _) = group_order_divisors(big_q)?;
        for d in divs {
            if d < bounds.splitting {
                report.eliminated.push(Elimination { d, reason: Layer::Splitting });
            } else {
                report.feasible.push(d);
                report.details.push(FeasibleDegree {
                    d,
                    r0: 0,
                    r1: 0,
                    deg_r: hermitian_two_g_minus_2(big_q) - d as i64 * gc.two_g_minus_2(),
                    divides_group_order: true,
                });
            }
        }
        report.interval = None;
        return Ok(report);
    };
    report.interval = (lower <= upper).then_some([lower, upper]);

    for d in 1..=upper {
        let budget = ramification_budget(&gc, d);
        let reason = if d < bounds.splitting {
            Some(Layer::Splitting)
        } else if bounds.lemcov.is_some_and(|l| d < l) {
            Some(Layer::Lemcov)
        } else if bounds.proplb.is_some_and(|l| d < l) {
            Some(Layer::Proplb)
        } else if d > upper {
            Some(Layer::Hurwitz)
        } else if budget.deg_r < 0 {
            Some(Layer::BudgetSign)
        } else if !profile_exists(big_q, genus, d, ProfileOptions::feasibility()) {
            Some(Layer::Profile)
        } else {
            None
        };
        match reason {
            Some(reason) => report.eliminated.push(Elimination { d, reason }),
            None => {
                report.feasible.push(d);
                report.details.push(FeasibleDegree {
                    d,
                    r0: budget.r0,
                    r1: budget.r1,
                    deg_r: budget.deg_r,
                    divides_group_order: divides_group_order(big_q, d),
                });
            }
        }
    }
    Ok(report)
}

/// `(Q, g)` for a family at parameters `(q, n)`.
pub fn family_parameters(family: Family, q: u64, n: u32) -> Result<(u64, u64)> {
    prime_power(q)?;
    if matches!(family, Family::Ggk | Family::Xn) && (n < 3 || n.is_multiple_of(2)) {
        return Err(Error::InvalidParameter(format!("n must be odd and >= 3, got {n}")));
    }
    Ok(match family {
        Family::Hermitian => (q, genus_hermitian(q)),
        Family::Ggk => (checked_pow(q, n)?, genus_ggk(q, n)),
        Family::Xn => (checked_pow(q, n)?, genus_xn(q, n)),
        Family::Yrem => (checked_pow(q, 3)?, genus_yrem(q)),
    })
}

/// [`feasible_degrees`] for a family curve, tagged with the theorem it instantiates.
pub fn feasible_for_family(family: Family, q: u64, n: u32) -> Result<FeasibilityReport> {
    let (big_q, genus) = family_parameters(family, q, n)?;
    let mut report = feasible_degrees(big_q, genus)?;
    report.q = Some(q);
    report.n = Some(if family == Family::Yrem { 3 } else { n });
    report.family = Some(family);
    report.theorem_tag = match family {
        Family::Ggk if q >= 3 => Some(TheoremId::T1_1.to_string()),
        Family::Ggk if n >= 5 => Some(TheoremId::T1_2.to_string()),
        Family::Xn if q > 2 => Some(TheoremId::T1_3.to_string()),
        _ => None,
    };
    if matches!(family, Family::Xn | Family::Yrem) && (family == Family::Yrem || n == 3) {
        let base = q * q + q;
        report.warnings.push(format!(
            "degrees {} and {} are not excluded here: no argument for them is implemented",
            base + 1,
            base + 2
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "1.1")]
    T1_1,
    #[serde(rename = "1.2")]
    T1_2,
    #[serde(rename = "1.3")]
    T1_3,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremId::T1_1 => "1.1",
            TheoremId::T1_2 => "1.2",
            TheoremId::T1_3 => "1.3",
        })
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1.1" | "ggk" | "ggk-empty" => Ok(TheoremId::T1_1),
            "1.2" | "ggk-q2" | "unramified" => Ok(TheoremId::T1_2),
            "1.3" | "xn" => Ok(TheoremId::T1_3),
            other => Err(Error::InvalidParameter(format!("unknown theorem id `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub id: TheoremId,
    pub q: u64,
    pub n: u32,
    pub expected: String,
    /// Largest lower bound before the budget and profile layers.
    pub lower_bound: u64,
    pub min_feasible: Option<u64>,
    pub max_feasible: Option<u64>,
    pub feasible: Vec<u64>,
    pub pass: bool,
}

/// `ceil((q+1)(q^n+1)/(q^2+1))` and `q^(n-1) + ... + q + 2`.
pub fn xn_degree_window(q: u64, n: u32) -> (u64, u64) {
    let lo = div_ceil(((q + 1) * (q.pow(n) + 1)) as i64, (q * q + 1) as i64) as u64;
    let hi = (1..n).map(|i| q.pow(i)).sum::<u64>() + 2;
    (lo, hi)
}

pub fn check_theorem(id: TheoremId, q: u64, n: u32) -> Result<TheoremCheck> {
    let bad = |why: &str| Err(Error::InvalidParameter(format!("theorem {id} needs {why}")));
    let (family, expected) = match id {
        TheoremId::T1_1 if q < 3 => return bad("q >= 3"),
        TheoremId::T1_1 => (Family::Ggk, "no feasible degree".to_string()),
        TheoremId::T1_2 if q != 2 || n < 5 => return bad("q = 2 and n >= 5"),
        TheoremId::T1_2 => (Family::Ggk, format!("{{{}}} with deg R = 0", (2u64.pow(n) + 1) / 3)),
        TheoremId::T1_3 if q < 3 => return bad("q > 2"),
        TheoremId::T1_3 => {
            let (lo, hi) = xn_degree_window(q, n);
            (Family::Xn, format!("min {lo}, max {hi}"))
        }
    };
    let report = feasible_for_family(family, q, n)?;
    let pass = match id {
        TheoremId::T1_1 => report.feasible.is_empty(),
        TheoremId::T1_2 => {
            let d = (2u64.pow(n) + 1) / 3;
            report.feasible == [d] && report.details[0].deg_r == 0
        }
        TheoremId::T1_3 => {
            // the lower expression is the combined lower bound, the upper one is the
            // largest surviving degree; every survivor lies in between
            let (lo, hi) = xn_degree_window(q, n);
            report.lower == lo
                && report.max_feasible() == Some(hi)
                && report.feasible.iter().all(|d| (lo..=hi).contains(d))
        }
    };
    Ok(TheoremCheck {
        id,
        q,
        n,
        expected,
        lower_bound: report.lower,
        min_feasible: report.min_feasible(),
        max_feasible: report.max_feasible(),
        feasible: report.feasible,
        pass,
    })
}

/// Genera of maximal curves over `F_{Q^2}` allowed by the genus bounds:
/// `0..=floor((Q-1)^2/4)` and `Q(Q-1)/2`.
pub fn maximal_genus_spectrum(big_q: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..=(big_q - 1).pow(2) / 4).collect();
    out.push(genus_hermitian(big_q));
    out
}

/// A genus where `proplb >= lemcov >= splitting` fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundChainViolation {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub genus: u64,
    pub splitting: u64,
    pub lemcov: u64,
    pub proplb: u64,
}

/// Check the bound chain at every genus of the spectrum where both refined bounds apply.
pub fn bound_chain_violations(big_q: u64) -> Vec<BoundChainViolation> {
    maximal_genus_spectrum(big_q)
        .into_iter()
        .filter_map(|g| {
            let gc = genus_class(big_q, g);
            let (lemcov, proplb) = (lemcov_lower(&gc)?, proplb_lower(&gc)?);
            let splitting = splitting_lower(big_q, g);
            (proplb < lemcov || lemcov < splitting).then_some(BoundChainViolation {
                big_q,
                genus: g,
                splitting,
                lemcov,
                proplb,
            })
        })
        .collect()
}
