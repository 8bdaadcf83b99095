//! Riemann–Hurwitz bookkeeping for Galois quotients of the Hermitian curve.
//!
//! For a subgroup `G` of order `d`, `2g(H) - 2 = d (2g' - 2) + deg R` with
//! `deg R = Σ_{σ ≠ 1} i(σ)`. A [`RamificationProfile`] records how many nontrivial
//! elements take each value in `{0, 1, 2, 3, Q+1, Q+2}`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::prime_power;
use crate::autgroup::pgu::{Pgu, PguMatrix};
use crate::autgroup::{ArtinCase, ArtinValue, Stabilizer, StabilizerElement};
use crate::error::{Error, Result};

/// Default closure cap for [`SubgroupWitness::generate`].
pub const MAX_SUBGROUP_ORDER: usize = 10_000;

/// A finite group of curve automorphisms with Artin values.
pub trait ArtinGroup: Sync {
    type Elem: Copy + Eq + Hash + Ord + Debug + Send + Sync;

    fn hermitian_q(&self) -> u64;
    fn identity(&self) -> Self::Elem;
    /// `a ∘ b`, applying `b` first.
    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn artin_value(&self, s: &Self::Elem) -> Result<ArtinValue>;
}

impl ArtinGroup for Stabilizer {
    type Elem = StabilizerElement;

    fn hermitian_q(&self) -> u64 {
        self.big_q()
    }

    fn identity(&self) -> StabilizerElement {
        StabilizerElement::IDENTITY
    }

    fn compose(&self, a: &StabilizerElement, b: &StabilizerElement) -> StabilizerElement {
        Stabilizer::compose(self, a, b)
    }

    fn artin_value(&self, s: &StabilizerElement) -> Result<ArtinValue> {
        self.isigma_formula(s)
    }
}

impl ArtinGroup for Pgu {
    type Elem = PguMatrix;

    fn hermitian_q(&self) -> u64 {
        self.big_q()
    }

    fn identity(&self) -> PguMatrix {
        Pgu::identity(self)
    }

    fn compose(&self, a: &PguMatrix, b: &PguMatrix) -> PguMatrix {
        Pgu::compose(self, a, b)
    }

    fn artin_value(&self, s: &PguMatrix) -> Result<ArtinValue> {
        Ok(self.classify_general(s)?.artin)
    }
}

/// An explicit subgroup, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupWitness<E> {
    elements: Vec<E>,
}

impl<E: Copy + Eq + Hash + Ord + Debug> SubgroupWitness<E> {
    /// Closure of `gens` under composition, failing once it exceeds `cap` elements.
    pub fn generate<G>(group: &G, gens: &[E], cap: usize) -> Result<Self>
    where
        G: ArtinGroup<Elem = E>,
    {
        let id = group.identity();
        let mut seen: HashSet<E> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = group.compose(g, &x);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(Error::SubgroupTooLarge(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<E> = seen.into_iter().collect();
        elements.sort();
        Ok(Self { elements })
    }

    /// Validate an explicit list: contains the identity and is closed under composition
    /// (a closed finite subset of a group is a subgroup).
    pub fn from_elements<G>(group: &G, elements: &[E]) -> Result<Self>
    where
        G: ArtinGroup<Elem = E>,
    {
        let set: HashSet<E> = elements.iter().copied().collect();
        if set.len() != elements.len() || !set.contains(&group.identity()) {
            return Err(Error::NotClosed);
        }
        for a in elements {
            for b in elements {
                if !set.contains(&group.compose(a, b)) {
                    return Err(Error::NotClosed);
                }
            }
        }
        let mut elements = elements.to_vec();
        elements.sort();
        Ok(Self { elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elements.binary_search(e).is_ok()
    }
}

/// Multiplicities of the Artin values over the nontrivial elements of a subgroup.
///
/// Values are bucketed by case, so for `Q = 2` a degree-three element and a
/// homology (both of value 3) land in `n3` and `n_q1` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RamificationProfile {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub d: u64,
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n_q1: u64,
    pub n_q2: u64,
    pub u: u64,
    pub v: u64,
    pub deg_r: u64,
}

impl RamificationProfile {
    /// Build from counts `[n0, n1, n2, n3, n_{Q+1}, n_{Q+2}]`.
    pub fn from_counts(big_q: u64, counts: [u64; 6]) -> Self {
        let [n0, n1, n2, n3, n_q1, n_q2] = counts;
        let u = n0 + n1 + n2 + n3;
        let v = n_q1 + n_q2;
        let deg_r = n1 + 2 * n2 + 3 * n3 + (big_q + 1) * n_q1 + (big_q + 2) * n_q2;
        Self { big_q, d: 1 + u + v, n0, n1, n2, n3, n_q1, n_q2, u, v, deg_r }
    }

    pub fn counts(&self) -> [u64; 6] {
        [self.n0, self.n1, self.n2, self.n3, self.n_q1, self.n_q2]
    }

    /// `v(Q+1) <= deg R <= v(Q+1) + 3u + v`.
    pub fn satisfies_bounds(&self) -> bool {
        let lo = self.v * (self.big_q + 1);
        lo <= self.deg_r && self.deg_r <= lo + 3 * self.u + self.v
    }

    /// Genus of the quotient implied by Riemann–Hurwitz.
    pub fn quotient_genus(&self) -> Result<u64> {
        quotient_genus_from(self.big_q, self.d, self.deg_r)
    }
}

fn bucket(big_q: u64, a: &ArtinValue) -> Result<usize> {
    Ok(match (a.case, a.value) {
        (ArtinCase::FixedPointFree, _) => 0,
        (ArtinCase::DegreeThree, _) => 3,
        (ArtinCase::Homology, _) => 4,
        (ArtinCase::WildCenter, _) => 5,
        (_, 1) => 1,
        (_, 2) => 2,
        (_, v) => {
            return Err(Error::Inconsistent(format!("Artin value {v} outside the spectrum for Q = {big_q}")))
        }
    })
}

/// `deg R` of the cover by `g`, with its profile.
pub fn ramification_degree<G: ArtinGroup>(
    group: &G,
    g: &SubgroupWitness<G::Elem>,
) -> Result<RamificationProfile> {
    let big_q = group.hermitian_q();
    let id = group.identity();
    let buckets: Vec<usize> = g
        .elements()
        .par_iter()
        .filter(|e| **e != id)
        .map(|e| bucket(big_q, &group.artin_value(e)?))
        .collect::<Result<_>>()?;
    let mut counts = [0u64; 6];
    for b in buckets {
        counts[b] += 1;
    }
    let profile = RamificationProfile::from_counts(big_q, counts);
    debug_assert_eq!(profile.d, g.order() as u64);
    Ok(profile)
}

/// `g' = ((Q-2)(Q+1) - deg R) / (2d) + 1`, failing when not a nonnegative integer.
pub fn quotient_genus_from(big_q: u64, d: u64, deg_r: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidParameter("subgroup order must be positive".into()));
    }
    let two_g_minus_2 = ((big_q - 2) * (big_q + 1)) as i64;
    let num = two_g_minus_2 - deg_r as i64;
    let den = 2 * d as i64;
    if num % den != 0 || num / den + 1 < 0 {
        return Err(Error::Inconsistent(format!(
            "Riemann-Hurwitz gives non-integral genus: Q = {big_q}, d = {d}, deg R = {deg_r}"
        )));
    }
    Ok((num / den + 1) as u64)
}

/// Genus of the quotient of the Hermitian curve by `g`.
pub fn quotient_genus<G: ArtinGroup>(group: &G, g: &SubgroupWitness<G::Elem>) -> Result<u64> {
    ramification_degree(group, g)?.quotient_genus()
}

/// Genus of the quotient by a subgroup of order `d | Q` of the centre:
/// `2g - 2 = (Q/d - 1)(Q + 1) - (Q/d + 1)`.
pub fn gsx_genus(big_q: u64, d: u64) -> Result<u64> {
    if d == 0 || !big_q.is_multiple_of(d) {
        return Err(Error::InvalidParameter(format!("{d} does not divide {big_q}")));
    }
    let e = big_q / d;
    let two_g = (e - 1) * (big_q + 1) + 2 - (e + 1);
    Ok(two_g / 2)
}

/// Required `deg R = (2g(H) - 2) - d(2g - 2)`, possibly negative.
pub fn required_deg_r(big_q: u64, genus: u64, d: u64) -> i64 {
    let hermitian = ((big_q - 2) * (big_q + 1)) as i64;
    hermitian - d as i64 * (2 * genus as i64 - 2)
}

/// Filters on candidate profiles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Every element fixes a point (the group lies in a point stabilizer): `n0 = n3 = 0`.
    pub in_stabilizer: bool,
    /// No fixed-point-free elements: `n0 = 0`.
    pub no_fixed_point_free: bool,
    /// Burnside: the group acts on the `Q^3 + 1` rational points, so the total number
    /// of fixed rational points over `G` must be divisible by `d`.
    pub orbit_integrality: bool,
}

impl ProfileOptions {
    pub fn feasibility() -> Self {
        Self { orbit_integrality: true, ..Self::default() }
    }
}

/// Rational points fixed by an element of each bucket: `(min, max)`.
fn fixed_rational_points(big_q: u64) -> [(u64, u64); 6] {
    // value 2 is either a wild translation (P∞ only) or a tame element fixing two points
    [(0, 0), (1, 1), (1, 2), (0, 0), (big_q + 1, big_q + 1), (1, 1)]
}

fn orbit_count_possible(big_q: u64, d: u64, counts: [u64; 6]) -> bool {
    let fix = fixed_rational_points(big_q);
    let mut lo = big_q.pow(3) + 1;
    let mut hi = lo;
    for (n, (a, b)) in counts.iter().zip(fix) {
        lo += n * a;
        hi += n * b;
    }
    interval_hits_multiple(lo, hi, d)
}

fn interval_hits_multiple(lo: u64, hi: u64, d: u64) -> bool {
    lo <= hi && (lo.div_ceil(d)) * d <= hi
}

/// All profiles with `Σ n_i = d - 1` and `Σ i n_i = ` the required `deg R`.
/// Fails with [`Error::BudgetExceeded`] after `limit` solutions.
pub fn profile_solutions(
    big_q: u64,
    genus: u64,
    d: u64,
    opts: ProfileOptions,
    limit: usize,
) -> Result<Vec<RamificationProfile>> {
    prime_power(big_q)?;
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let r = required_deg_r(big_q, genus, d);
    if r < 0 {
        return Ok(Vec::new());
    }
    let r = r as u64;
    let m_total = d - 1;
    let mut out = Vec::new();
    for n_q2 in 0..=m_total.min(r / (big_q + 2)) {
        for n_q1 in 0..=(m_total - n_q2).min((r - n_q2 * (big_q + 2)) / (big_q + 1)) {
            let m = m_total - n_q2 - n_q1;
            let rest = r - n_q2 * (big_q + 2) - n_q1 * (big_q + 1);
            let n3_max = if opts.in_stabilizer { 0 } else { m.min(rest / 3) };
            for n3 in 0..=n3_max {
                for n2 in 0..=(m - n3).min((rest - 3 * n3) / 2) {
                    let n1 = rest - 3 * n3 - 2 * n2;
                    let used = n1 + n2 + n3;
                    if used > m {
                        continue;
                    }
                    let n0 = m - used;
                    if n0 > 0 && (opts.in_stabilizer || opts.no_fixed_point_free) {
                        continue;
                    }
                    let counts = [n0, n1, n2, n3, n_q1, n_q2];
                    if opts.orbit_integrality && !orbit_count_possible(big_q, d, counts) {
                        continue;
                    }
                    out.push(RamificationProfile::from_counts(big_q, counts));
                    if out.len() > limit {
                        return Err(Error::BudgetExceeded {
                            what: "profile enumeration",
                            needed: out.len() as u64,
                            limit: limit as u64,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Whether [`profile_solutions`] would be nonempty, without listing solutions.
pub fn profile_exists(big_q: u64, genus: u64, d: u64, opts: ProfileOptions) -> bool {
    if d == 0 {
        return false;
    }
    let r = required_deg_r(big_q, genus, d);
    if r < 0 {
        return false;
    }
    let r = r as u64;
    let m_total = d - 1;
    let base = big_q.pow(3) + 1;
    for n_q2 in 0..=m_total.min(r / (big_q + 2)) {
        for n_q1 in 0..=(m_total - n_q2).min((r - n_q2 * (big_q + 2)) / (big_q + 1)) {
            let m = m_total - n_q2 - n_q1;
            let rest = r - n_q2 * (big_q + 2) - n_q1 * (big_q + 1);
            let fixed = base + n_q1 * (big_q + 1) + n_q2;
            let n3_max = if opts.in_stabilizer { 0 } else { m.min(rest / 3) };
            for n3 in 0..=n3_max {
                // n1 = rest - 3 n3 - 2 n2 >= 0 and n0 = m - rest + n2 + 2 n3 >= 0
                let r3 = rest - 3 * n3;
                let hi = r3 / 2;
                let lo = (rest as i64 - m as i64 - 2 * n3 as i64).max(0) as u64;
                if lo > hi {
                    continue;
                }
                let hi = if opts.in_stabilizer || opts.no_fixed_point_free {
                    // n0 = 0 pins n2 = lo
                    if rest as i64 - m as i64 - 2 * n3 as i64 != lo as i64 {
                        continue;
                    }
                    lo
                } else {
                    hi
                };
                if !opts.orbit_integrality {
                    return true;
                }
                // n1 + n2 + t fixed points with 0 <= t <= n2, i.e. r3 - n2 + t; the union
                // over n2 in [lo, hi] is [r3 - hi, r3]
                if interval_hits_multiple(fixed + r3 - hi, fixed + r3, d) {
                    return true;
                }
            }
        }
    }
    false
}

/// Subgroups of the centre `{[1, 0, c] : c^Q + c = 0}`, one per `F_p`-subspace.
pub fn center_subgroups(stab: &Stabilizer) -> Result<Vec<SubgroupWitness<StabilizerElement>>> {
    let kernel: Vec<StabilizerElement> = stab
        .center_kernel()
        .iter()
        .map(|&c| StabilizerElement { a: crate::ff::Elem::ONE, b: crate::ff::Elem::ZERO, c })
        .collect();
    let mut found: BTreeSet<Vec<StabilizerElement>> = BTreeSet::new();
    let trivial = SubgroupWitness::generate(stab, &[], 1)?;
    let mut frontier = vec![trivial];
    found.insert(frontier[0].elements().to_vec());
    while let Some(g) = frontier.pop() {
        for e in &kernel {
            if g.contains(e) {
                continue;
            }
            let mut gens: Vec<_> = g.elements().to_vec();
            gens.push(*e);
            let h = SubgroupWitness::generate(stab, &gens, kernel.len())?;
            if found.insert(h.elements().to_vec()) {
                frontier.push(h);
            }
        }
    }
    found.into_iter().map(|els| SubgroupWitness::from_elements(stab, &els)).collect()
}

/// One central subgroup of order `d`, spanned by the first independent kernel elements.
pub fn center_subgroup(stab: &Stabilizer, d: u64) -> Result<SubgroupWitness<StabilizerElement>> {
    let big_q = stab.big_q();
    let (p, _) = prime_power(big_q)?;
    if !big_q.is_multiple_of(d) || prime_power(d).map(|(pd, _)| pd != p).unwrap_or(d != 1) {
        return Err(Error::InvalidParameter(format!("{d} is not a power of p dividing {big_q}")));
    }
    let mut g = SubgroupWitness::generate(stab, &[], 1)?;
    for &c in stab.center_kernel() {
        if g.order() as u64 == d {
            break;
        }
        let e = StabilizerElement { a: crate::ff::Elem::ONE, b: crate::ff::Elem::ZERO, c };
        if !g.contains(&e) {
            let mut gens = g.elements().to_vec();
            gens.push(e);
            g = SubgroupWitness::generate(stab, &gens, big_q as usize)?;
        }
    }
    debug_assert_eq!(g.order() as u64, d);
    Ok(g)
}

/// Outcome of [`search_subgroups`].
#[derive(Debug, Clone, Serialize)]
pub struct SearchLog {
    pub d: u64,
    pub candidates: usize,
    pub single_generators_tried: usize,
    pub pairs_tried: u64,
    pub distinct_subgroups: usize,
    pub matches: Vec<RamificationProfile>,
    #[serde(skip)]
    pub witnesses: Vec<SubgroupWitness<StabilizerElement>>,
    pub lines: Vec<String>,
}

impl SearchLog {
    pub fn found(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

/// Search subgroups of order `d` of the stabilizer generated by one element, then (if
/// nothing matched) by two, keeping those whose profile satisfies `accept`.
pub fn search_subgroups(
    stab: &Stabilizer,
    d: u64,
    accept: impl Fn(&RamificationProfile) -> bool + Sync,
    max_pairs: u64,
) -> Result<SearchLog> {
    let du = d as usize;
    let candidates: Vec<StabilizerElement> = stab
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|s| stab.pow(s, d).is_identity())
        .collect();
    let mut log = SearchLog {
        d,
        candidates: candidates.len(),
        single_generators_tried: 0,
        pairs_tried: 0,
        distinct_subgroups: 0,
        matches: Vec::new(),
        witnesses: Vec::new(),
        lines: vec![format!(
            "Q = {}, d = {d}: {} elements with order dividing d",
            stab.big_q(),
            candidates.len()
        )],
    };
    let mut seen: BTreeSet<Vec<StabilizerElement>> = BTreeSet::new();
    let consider = |g: SubgroupWitness<StabilizerElement>,
                    seen: &mut BTreeSet<Vec<StabilizerElement>>,
                    log: &mut SearchLog|
     -> Result<()> {
        if g.order() != du || !seen.insert(g.elements().to_vec()) {
            return Ok(());
        }
        let profile = ramification_degree(stab, &g)?;
        if accept(&profile) {
            log.matches.push(profile);
            log.witnesses.push(g);
        }
        Ok(())
    };

    for s in &candidates {
        log.single_generators_tried += 1;
        if let Ok(g) = SubgroupWitness::generate(stab, &[*s], du) {
            consider(g, &mut seen, &mut log)?;
        }
    }
    log.lines.push(format!(
        "single generators: {} tried, {} distinct subgroups of order {d}, {} matching",
        log.single_generators_tried,
        seen.len(),
        log.witnesses.len()
    ));
    if log.witnesses.is_empty() {
        'outer: for (i, s) in candidates.iter().enumerate() {
            for t in &candidates[i + 1..] {
                if log.pairs_tried >= max_pairs {
                    log.lines.push(format!("pair budget {max_pairs} exhausted"));
                    break 'outer;
                }
                log.pairs_tried += 1;
                if let Ok(g) = SubgroupWitness::generate(stab, &[*s, *t], du) {
                    consider(g, &mut seen, &mut log)?;
                }
            }
        }
        log.lines.push(format!(
            "pairs: {} tried, {} distinct subgroups of order {d}, {} matching",
            log.pairs_tried,
            seen.len(),
            log.witnesses.len()
        ));
    }
    log.distinct_subgroups = seen.len();
    Ok(log)
}
