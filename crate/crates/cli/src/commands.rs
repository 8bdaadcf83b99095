//! One function per subcommand, each returning a rendered report and a pass flag.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context, Result};
use maxcurve_core::autgroup::pgu::{FixedPointClass, Pgu};
use maxcurve_core::autgroup::{ArtinCase, Stabilizer, StabilizerElement};
use maxcurve_core::covers::{
    center_subgroup, gsx_genus, profile_solutions, ramification_degree, required_deg_r, search_subgroups,
    ProfileOptions, RamificationProfile,
};
use maxcurve_core::curves::{count_affine, Budget, CurveModel, Family, PointCount};
use maxcurve_core::feasibility::{
    check_theorem, family_parameters, feasible_degrees, feasible_for_family, FeasibilityReport, TheoremCheck,
    TheoremId,
};
use maxcurve_core::ff::{Elem, FieldSpec};
use maxcurve_core::Error;
use serde::{Deserialize, Serialize};

use crate::output::{coeffs, opt, Rendered};
use crate::Args;

fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn budget_check(what: &'static str, needed: u64, limit: u64) -> Result<()> {
    if needed > limit {
        return Err(Error::BudgetExceeded { what, needed, limit }.into());
    }
    Ok(())
}

#[derive(Serialize)]
struct CountReport {
    command: &'static str,
    family: Family,
    q: u64,
    n: u32,
    field: FieldSpec,
    field_order: u64,
    genus: u64,
    affine: u64,
    at_infinity: u64,
    total: u64,
    target: u64,
    maximal: bool,
}

fn model(args: &Args) -> Result<CurveModel> {
    let family = args.family.unwrap_or(Family::Hermitian);
    let mut m = match family {
        Family::Hermitian => CurveModel::hermitian(args.hermitian_q()?)?,
        Family::Ggk | Family::Xn => CurveModel::new(family, args.require_q()?, args.require_n()?)?,
        Family::Yrem => CurveModel::yrem(args.require_q()?)?,
    };
    if let Some(g) = args.genus {
        m.genus = g;
    }
    Ok(m)
}

pub fn count(args: &Args, strict: bool) -> Result<(Rendered, bool)> {
    let m = model(args)?;
    let budget = Budget { max_field_order: args.budget(), ..Budget::default() };
    let affine = count_affine(&m, &budget, args.workers())?;
    let pc = PointCount::new(&m, affine);
    let report = CountReport {
        command: if strict { "maximality" } else { "count" },
        family: m.family,
        q: m.q,
        n: m.n,
        field_order: m.field_order(),
        field: m.base_field.clone(),
        genus: m.genus,
        affine: pc.affine,
        at_infinity: pc.at_infinity,
        total: pc.total,
        target: pc.hasse_weil_target,
        maximal: pc.maximal,
    };
    let header = vec![
        "family",
        "q",
        "n",
        "field_order",
        "genus",
        "affine",
        "at_infinity",
        "total",
        "target",
        "maximal",
    ];
    let row = vec![
        m.family.name().to_string(),
        m.q.to_string(),
        m.n.to_string(),
        report.field_order.to_string(),
        m.genus.to_string(),
        pc.affine.to_string(),
        pc.at_infinity.to_string(),
        pc.total.to_string(),
        pc.hasse_weil_target.to_string(),
        pc.maximal.to_string(),
    ];
    Ok((Rendered::new(&report, header, vec![row])?, !strict || pc.maximal))
}

#[derive(Debug, Deserialize)]
struct ElementInput {
    a: Vec<u32>,
    b: Vec<u32>,
    c: Vec<u32>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum ElementRepr {
    Stabilizer { a: Vec<u32>, b: Vec<u32>, c: Vec<u32> },
    Matrix(Vec<Vec<Vec<u32>>>),
}

impl ElementRepr {
    fn of(stab: &Stabilizer, s: &StabilizerElement) -> Self {
        let f = stab.field();
        ElementRepr::Stabilizer { a: f.coeffs(s.a), b: f.coeffs(s.b), c: f.coeffs(s.c) }
    }

    fn cell(&self) -> String {
        match self {
            ElementRepr::Stabilizer { a, b, c } => format!("[{}|{}|{}]", coeffs(a), coeffs(b), coeffs(c)),
            ElementRepr::Matrix(rows) => {
                let r: Vec<String> = rows
                    .iter()
                    .map(|row| row.iter().map(|e| coeffs(e)).collect::<Vec<_>>().join("|"))
                    .collect();
                format!("[{}]", r.join("; "))
            }
        }
    }
}

#[derive(Serialize)]
struct IsigmaRow {
    element: ElementRepr,
    class: FixedPointClass,
    i: u64,
    case_tag: ArtinCase,
    /// Brute-force value; `null` when the classification is itself the fixed-point scan.
    oracle: Option<u64>,
    oracle_agreement: Option<bool>,
}

#[derive(Serialize)]
struct IsigmaReport {
    #[serde(rename = "Q")]
    big_q: u64,
    elements: usize,
    mismatches: usize,
    counts_by_value: BTreeMap<u64, u64>,
    rows: Vec<IsigmaRow>,
}

fn stabilizer_row(stab: &Stabilizer, s: &StabilizerElement) -> Result<IsigmaRow> {
    let v = stab.isigma_formula(s)?;
    let o = stab.isigma_oracle(s)?;
    Ok(IsigmaRow {
        element: ElementRepr::of(stab, s),
        class: FixedPointClass::Rational,
        i: v.value,
        case_tag: v.case,
        oracle: Some(o),
        oracle_agreement: Some(o == v.value),
    })
}

pub fn isigma(args: &Args) -> Result<(Rendered, bool)> {
    let big_q = args.hermitian_q()?;
    let rows = if let Some(text) = &args.matrix {
        let raw: Vec<Vec<Vec<u32>>> =
            serde_json::from_str(text).context("usage: --matrix must be a JSON 3x3 array")?;
        if raw.len() != 3 || raw.iter().any(|r| r.len() != 3) {
            bail!("usage: --matrix must be 3x3");
        }
        let pgu = Pgu::new(big_q)?;
        let f = pgu.field();
        let mut m = [[Elem::ZERO; 3]; 3];
        for (i, row) in raw.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m[i][j] = f.from_coeffs(e)?;
            }
        }
        let m = pgu.matrix(m)?;
        let cls = pgu.classify_general(&m)?;
        let oracle = cls.conjugate.map(|s| pgu.stabilizer().isigma_oracle(&s)).transpose()?;
        vec![IsigmaRow {
            element: ElementRepr::Matrix(raw),
            class: cls.class,
            i: cls.artin.value,
            case_tag: cls.artin.case,
            oracle,
            oracle_agreement: oracle.map(|o| o == cls.artin.value),
        }]
    } else {
        let stab = Stabilizer::new(big_q)?;
        if let Some(text) = &args.element {
            let e: ElementInput = serde_json::from_str(text)
                .context("usage: --element must be JSON {\"a\": [..], \"b\": [..], \"c\": [..]}")?;
            let s = stab.element_from_coeffs(&e.a, &e.b, &e.c)?;
            vec![stabilizer_row(&stab, &s)?]
        } else {
            budget_check("stabilizer enumeration", stab.order(), args.budget())?;
            stab.elements()
                .filter(|s| !s.is_identity())
                .map(|s| stabilizer_row(&stab, &s))
                .collect::<Result<_>>()?
        }
    };
    let mut counts_by_value = BTreeMap::new();
    for r in &rows {
        *counts_by_value.entry(r.i).or_insert(0) += 1;
    }
    let mismatches = rows.iter().filter(|r| r.oracle_agreement == Some(false)).count();
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.element.cell(),
                tag(&r.class),
                r.i.to_string(),
                tag(&r.case_tag),
                opt(r.oracle),
                opt(r.oracle_agreement),
            ]
        })
        .collect();
    let report = IsigmaReport { big_q, elements: rows.len(), mismatches, counts_by_value, rows };
    let header = vec!["element", "class", "i", "case_tag", "oracle", "oracle_agreement"];
    Ok((Rendered::new(&report, header, table)?, mismatches == 0))
}

#[derive(Serialize)]
struct QuotientProfile {
    #[serde(flatten)]
    profile: RamificationProfile,
    genus: u64,
}

#[derive(Serialize)]
struct QuotientReport {
    #[serde(rename = "Q")]
    big_q: u64,
    d: u64,
    method: &'static str,
    matches: usize,
    profiles: Vec<QuotientProfile>,
    expected_genus: Option<u64>,
    agreement: Option<bool>,
    witness: Vec<ElementRepr>,
    log: Vec<String>,
}

fn is_p_power_divisor(big_q: u64, p: u64, d: u64) -> bool {
    let mut e = 1;
    while e < d {
        e *= p;
    }
    e == d && big_q.is_multiple_of(d)
}

pub fn quotient(args: &Args) -> Result<(Rendered, bool)> {
    let big_q = args.hermitian_q()?;
    let d = args.require_d()?;
    let stab = Stabilizer::new(big_q)?;
    let report = if is_p_power_divisor(big_q, stab.characteristic(), d) {
        let g = center_subgroup(&stab, d)?;
        let profile = ramification_degree(&stab, &g)?;
        let genus = profile.quotient_genus()?;
        let expected = args.genus.unwrap_or(gsx_genus(big_q, d)?);
        QuotientReport {
            big_q,
            d,
            method: "center",
            matches: 1,
            profiles: vec![QuotientProfile { profile, genus }],
            expected_genus: Some(expected),
            agreement: Some(genus == expected),
            witness: g.elements().iter().map(|s| ElementRepr::of(&stab, s)).collect(),
            log: Vec::new(),
        }
    } else {
        budget_check("stabilizer enumeration", stab.order(), args.budget())?;
        let want = args.genus;
        let log = search_subgroups(
            &stab,
            d,
            |p| want.is_none_or(|g| p.quotient_genus().ok() == Some(g)),
            args.budget(),
        )?;
        let distinct: BTreeSet<RamificationProfile> = log.matches.iter().copied().collect();
        let profiles = distinct
            .into_iter()
            .map(|profile| Ok(QuotientProfile { genus: profile.quotient_genus()?, profile }))
            .collect::<Result<Vec<_>>>()?;
        QuotientReport {
            big_q,
            d,
            method: "search",
            matches: log.witnesses.len(),
            profiles,
            expected_genus: want,
            agreement: want.map(|_| log.found()),
            witness: log
                .witnesses
                .first()
                .map(|g| g.elements().iter().map(|s| ElementRepr::of(&stab, s)).collect())
                .unwrap_or_default(),
            log: log.lines,
        }
    };
    let ok = report.agreement != Some(false) && report.matches > 0;
    let header =
        vec!["Q", "d", "method", "n0", "n1", "n2", "n3", "n_q1", "n_q2", "deg_r", "genus", "expected_genus"];
    let rows = report
        .profiles
        .iter()
        .map(|p| {
            let mut r = vec![big_q.to_string(), d.to_string(), report.method.to_string()];
            r.extend(p.profile.counts().iter().map(u64::to_string));
            r.extend([p.profile.deg_r.to_string(), p.genus.to_string(), opt(report.expected_genus)]);
            r
        })
        .collect();
    Ok((Rendered::new(&report, header, rows)?, ok))
}

/// `(Q, genus)` from a family or from `--Q`/`--q` with `--genus`.
fn target(args: &Args) -> Result<(u64, u64)> {
    let (big_q, genus) = match args.family {
        Some(Family::Hermitian) => family_parameters(Family::Hermitian, args.hermitian_q()?, 1)?,
        Some(Family::Yrem) => family_parameters(Family::Yrem, args.require_q()?, 3)?,
        Some(f) => family_parameters(f, args.require_q()?, args.require_n()?)?,
        None => {
            let g = args.genus.ok_or_else(|| anyhow::anyhow!("usage: --genus or --family is required"))?;
            (args.hermitian_q()?, g)
        }
    };
    Ok((big_q, args.genus.unwrap_or(genus)))
}

#[derive(Serialize)]
struct ProfileReport {
    #[serde(rename = "Q")]
    big_q: u64,
    genus: u64,
    d: u64,
    required_deg_r: i64,
    options: ProfileOptions,
    count: usize,
    profiles: Vec<RamificationProfile>,
}

pub fn profile(args: &Args) -> Result<(Rendered, bool)> {
    let (big_q, genus) = target(args)?;
    let d = args.require_d()?;
    let options = ProfileOptions {
        in_stabilizer: args.in_stabilizer,
        no_fixed_point_free: args.no_fixed_point_free,
        orbit_integrality: args.orbit,
    };
    let limit = usize::try_from(args.budget()).unwrap_or(usize::MAX);
    let profiles = profile_solutions(big_q, genus, d, options, limit)?;
    let rows = profiles
        .iter()
        .map(|p| {
            let mut r: Vec<String> = p.counts().iter().map(u64::to_string).collect();
            r.extend([p.u.to_string(), p.v.to_string(), p.deg_r.to_string()]);
            r
        })
        .collect();
    let report = ProfileReport {
        big_q,
        genus,
        d,
        required_deg_r: required_deg_r(big_q, genus, d),
        options,
        count: profiles.len(),
        profiles,
    };
    let header = vec!["n0", "n1", "n2", "n3", "n_q1", "n_q2", "u", "v", "deg_r"];
    Ok((Rendered::new(&report, header, rows)?, true))
}

#[derive(Serialize)]
struct FeasibleOutput {
    #[serde(flatten)]
    report: FeasibilityReport,
    /// `proplb >= lemcov >= splitting` when both refined bounds apply.
    bound_chain_holds: Option<bool>,
}

pub fn feasible(args: &Args) -> Result<(Rendered, bool)> {
    let report = match (args.family, args.genus) {
        (Some(Family::Hermitian), None) => feasible_for_family(Family::Hermitian, args.hermitian_q()?, 1)?,
        (Some(Family::Yrem), None) => feasible_for_family(Family::Yrem, args.require_q()?, 3)?,
        (Some(f), None) => feasible_for_family(f, args.require_q()?, args.require_n()?)?,
        _ => {
            let (big_q, genus) = target(args)?;
            let mut r = feasible_degrees(big_q, genus)?;
            r.q = args.q;
            r.n = args.n;
            r.family = args.family;
            r
        }
    };
    let b = &report.bounds;
    let bound_chain_holds = match (b.lemcov, b.proplb) {
        (Some(l), Some(p)) => Some(p >= l && l >= b.splitting),
        _ => None,
    };
    let mut by_d: BTreeMap<u64, (String, String, i64)> = BTreeMap::new();
    for f in &report.details {
        by_d.insert(f.d, ("feasible".into(), String::new(), f.deg_r));
    }
    for e in &report.eliminated {
        by_d.insert(
            e.d,
            ("eliminated".into(), e.reason.to_string(), required_deg_r(report.big_q, report.genus, e.d)),
        );
    }
    let family = report.family.map(|f| f.name().to_string()).unwrap_or_default();
    let rows = by_d
        .into_iter()
        .map(|(d, (status, reason, deg_r))| {
            vec![
                report.big_q.to_string(),
                opt(report.q),
                opt(report.n),
                family.clone(),
                report.genus.to_string(),
                d.to_string(),
                status,
                reason,
                deg_r.to_string(),
            ]
        })
        .collect();
    let header = vec!["Q", "q", "n", "family", "genus", "d", "status", "reason", "deg_r"];
    let out = FeasibleOutput { report, bound_chain_holds };
    Ok((Rendered::new(&out, header, rows)?, true))
}

#[derive(Serialize)]
struct TheoremReport {
    id: TheoremId,
    pass: bool,
    rows: Vec<TheoremCheck>,
}

fn default_grid(id: TheoremId) -> Vec<(u64, u32)> {
    match id {
        TheoremId::T1_1 => [3, 4, 5].iter().flat_map(|&q| [(q, 3), (q, 5)]).collect(),
        TheoremId::T1_2 => vec![(2, 5), (2, 7)],
        TheoremId::T1_3 => [3, 4].iter().flat_map(|&q| [(q, 3), (q, 5)]).collect(),
    }
}

pub fn theorem(args: &Args) -> Result<(Rendered, bool)> {
    let id: TheoremId =
        args.id.as_deref().ok_or_else(|| anyhow::anyhow!("usage: --id is required"))?.parse()?;
    let grid: Vec<(u64, u32)> = match (args.q, args.n) {
        (Some(q), Some(n)) => vec![(q, n)],
        (q, n) => default_grid(id)
            .into_iter()
            .filter(|&(gq, gn)| q.is_none_or(|q| q == gq) && n.is_none_or(|n| n == gn))
            .collect(),
    };
    let rows = grid.into_iter().map(|(q, n)| check_theorem(id, q, n)).collect::<Result<Vec<_>, _>>()?;
    let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.q.to_string(),
                r.n.to_string(),
                r.expected.clone(),
                r.lower_bound.to_string(),
                opt(r.min_feasible),
                opt(r.max_feasible),
                r.feasible.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                r.pass.to_string(),
            ]
        })
        .collect();
    let report = TheoremReport { id, pass, rows };
    let header =
        vec!["id", "q", "n", "expected", "lower_bound", "min_feasible", "max_feasible", "feasible", "pass"];
    Ok((Rendered::new(&report, header, table)?, pass))
}
