//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use maxcurve_core::autgroup::{artin_spectrum, ArtinCase, Stabilizer};
use maxcurve_core::covers::{
    center_subgroup, gsx_genus, profile_solutions, quotient_genus, search_subgroups, ProfileOptions,
    RamificationProfile,
};
use maxcurve_core::curves::{check_maximal, genus_xn, Budget, CurveModel, Family};
use maxcurve_core::feasibility::{check_theorem, feasible_for_family, xn_degree_window, TheoremId};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hermitian_counts() -> Outcome {
    let mut out = Vec::new();
    for q in 2u64..=5 {
        let start = Instant::now();
        let model = CurveModel::hermitian(q).map_err(|e| e.to_string())?;
        let pc = check_maximal(&model, &Budget::default(), workers()).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(pc.total == q.pow(3) + 1, || format!("Q={q}: {} points", pc.total))?;
        ensure(t < Duration::from_secs(1), || format!("Q={q} took {t:?}"))?;
        out.push(format!("Q={q}:{}", pc.total));
    }
    Ok(out.join(" "))
}

fn family_maximality() -> Outcome {
    let mut out = Vec::new();
    for (q, n) in [(2u64, 3u32), (2, 5), (3, 3)] {
        for model in [CurveModel::xn(q, n), CurveModel::ggk(q, n)] {
            let model = model.map_err(|e| e.to_string())?;
            let pc = check_maximal(&model, &Budget::default(), workers()).map_err(|e| e.to_string())?;
            let qn = q.pow(n);
            let want = qn * qn + 1 + 2 * model.genus * qn;
            ensure(pc.total == want && pc.maximal, || {
                format!("{} ({q},{n}): {} != {want}", model.family.name(), pc.total)
            })?;
            out.push(format!("{}({q},{n})={}", model.family.name(), pc.total));
        }
    }
    Ok(out.join(" "))
}

fn artin_oracle() -> Outcome {
    let mut checked = 0u64;
    for q in [2u64, 3, 4] {
        let h = Stabilizer::new(q).map_err(|e| e.to_string())?;
        let allowed = [1, 2, 3, q + 1, q + 2];
        for s in h.elements().filter(|s| !s.is_identity()) {
            let v = h.isigma_formula(&s).map_err(|e| e.to_string())?.value;
            let o = h.isigma_oracle(&s).map_err(|e| e.to_string())?;
            ensure(v == o, || format!("Q={q} {s}: formula {v}, oracle {o}"))?;
            ensure(allowed.contains(&v) && artin_spectrum(q).contains(&v), || {
                format!("Q={q} {s}: value {v} outside the spectrum")
            })?;
            checked += 1;
        }
    }
    ensure(checked == 23 + 215 + 959, || format!("{checked} elements checked"))?;
    Ok(format!("{checked} elements, 0 mismatches"))
}

fn census() -> Outcome {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        let h = Stabilizer::new(q).map_err(|e| e.to_string())?;
        let mut by_case = std::collections::BTreeMap::<&str, u64>::new();
        for s in h.elements().filter(|s| !s.is_identity()) {
            let v = h.isigma_formula(&s).map_err(|e| e.to_string())?;
            let key = match v.case {
                ArtinCase::WildCenter => "center",
                ArtinCase::WildTranslation => "translation",
                ArtinCase::Homology => "homology",
                ArtinCase::TameOther => "tame_other",
                ArtinCase::MixedOrder => "mixed",
                other => return Err(format!("Q={q}: unexpected case {other:?} in H")),
            };
            *by_case.entry(key).or_default() += 1;
        }
        let q3 = q.pow(3);
        let want = [
            ("center", q - 1),
            ("homology", q3),
            ("mixed", q.pow(4) - q3),
            ("tame_other", (q * q - q - 2) * q3),
            ("translation", q3 - q),
        ];
        for (k, n) in want {
            let got = by_case.get(k).copied().unwrap_or(0);
            ensure(got == n, || format!("Q={q} {k}: {got} != {n}"))?;
        }
        out.push(format!("Q={q}:{by_case:?}"));
    }
    Ok(out.join(" "))
}

fn sharp_genera() -> Outcome {
    let mut out = Vec::new();
    for q in [4u64, 8, 9] {
        let h = Stabilizer::new(q).map_err(|e| e.to_string())?;
        let p = h.characteristic();
        let mut d = 1;
        while q % d == 0 {
            let g = center_subgroup(&h, d).map_err(|e| e.to_string())?;
            let got = quotient_genus(&h, &g).map_err(|e| e.to_string())?;
            let want = gsx_genus(q, d).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("Q={q} d={d}: {got} != {want}"))?;
            out.push(format!("({q},{d})->{got}"));
            d *= p;
        }
    }
    Ok(out.join(" "))
}

fn ggk_no_degree() -> Outcome {
    for q in [3u64, 4, 5] {
        for n in [3u32, 5] {
            let c = check_theorem(TheoremId::T1_1, q, n).map_err(|e| e.to_string())?;
            ensure(c.pass && c.feasible.is_empty(), || format!("({q},{n}): {:?}", c.feasible))?;
        }
    }
    Ok("empty for {3,4,5}x{3,5}".into())
}

fn ggk_unramified() -> Outcome {
    let mut out = Vec::new();
    for (n, d) in [(5u32, 11u64), (7, 43)] {
        let r = feasible_for_family(Family::Ggk, 2, n).map_err(|e| e.to_string())?;
        ensure(r.feasible == [d], || format!("(2,{n}): {:?}", r.feasible))?;
        ensure(r.details[0].deg_r == 0, || format!("(2,{n}): deg R = {}", r.details[0].deg_r))?;
        out.push(format!("(2,{n})->{{{d}}} degR=0"));
    }
    Ok(out.join(" "))
}

fn xn_window() -> Outcome {
    let r = feasible_for_family(Family::Xn, 3, 3).map_err(|e| e.to_string())?;
    ensure(r.feasible == [12, 13, 14], || format!("(3,3): {:?}", r.feasible))?;
    let mut out = vec![format!("(3,3)->{:?}", r.feasible)];
    for (q, n) in [(3u64, 5u32), (4, 3)] {
        let (lo, hi) = xn_degree_window(q, n);
        let r = feasible_for_family(Family::Xn, q, n).map_err(|e| e.to_string())?;
        let got = (r.min_feasible(), r.max_feasible());
        ensure(got == (Some(lo), Some(hi)), || format!("({q},{n}): {got:?} vs [{lo},{hi}]"))?;
        let c = check_theorem(TheoremId::T1_3, q, n).map_err(|e| e.to_string())?;
        ensure(c.pass, || format!("({q},{n}): theorem check failed"))?;
        out.push(format!("({q},{n})->[{lo},{hi}]"));
    }
    Ok(out.join(" "))
}

fn order6_profile() -> Outcome {
    let p = RamificationProfile::from_counts(8, [0, 2, 0, 0, 2, 1]);
    ensure(p.deg_r == 30, || format!("deg R = {}", p.deg_r))?;
    // 2g(H) - 2 = 54 = 6 (2*3 - 2) + 30
    ensure(54 == 6 * 4 + p.deg_r, || "Riemann-Hurwitz".into())?;
    let sols = profile_solutions(8, 3, 6, ProfileOptions::default(), 100_000).map_err(|e| e.to_string())?;
    ensure(sols.contains(&p), || format!("{} profiles, target missing", sols.len()))?;
    Ok(format!("degR=30, among {} profiles", sols.len()))
}

fn order6_subgroup() -> Outcome {
    let h = Stabilizer::new(8).map_err(|e| e.to_string())?;
    let want = [0, 2, 0, 0, 2, 1];
    let log = search_subgroups(&h, 6, |p| p.counts() == want, u64::MAX).map_err(|e| e.to_string())?;
    for line in &log.lines {
        eprintln!("    {line}");
    }
    ensure(log.found(), || "no matching subgroup of order 6".into())?;
    for g in &log.witnesses {
        let genus = quotient_genus(&h, g).map_err(|e| e.to_string())?;
        ensure(genus == 3, || format!("quotient genus {genus}"))?;
    }
    Ok(format!("{} matching subgroups of order 6, genus 3", log.witnesses.len()))
}

fn yrem_maximality() -> Outcome {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        let model = CurveModel::yrem(q).map_err(|e| e.to_string())?;
        let want_g = (q - 1) * (q.pow(3) - q) / 2;
        ensure(model.genus == want_g && want_g == genus_xn(q, 3), || {
            format!("q={q}: genus {} != {want_g}", model.genus)
        })?;
        let pc = check_maximal(&model, &Budget::default(), workers()).map_err(|e| e.to_string())?;
        ensure(pc.maximal, || format!("q={q}: {} < {}", pc.total, pc.hasse_weil_target))?;
        out.push(format!("q={q}: g={want_g} N={}", pc.total));
    }
    Ok(out.join(" "))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "hermitian point counts", limit: secs(4), run: hermitian_counts },
        Criterion { id: 2, name: "Xn and GGK maximality", limit: secs(60), run: family_maximality },
        Criterion { id: 3, name: "Artin value oracle agreement", limit: secs(30), run: artin_oracle },
        Criterion { id: 4, name: "stabilizer census", limit: None, run: census },
        Criterion { id: 5, name: "sharp subcover genera", limit: None, run: sharp_genera },
        Criterion { id: 6, name: "GGK not Galois covered", limit: secs(1), run: ggk_no_degree },
        Criterion { id: 7, name: "unramified GGK quotients", limit: None, run: ggk_unramified },
        Criterion { id: 8, name: "Xn degree window", limit: None, run: xn_window },
        Criterion { id: 9, name: "order 6 profile at Q = 8", limit: None, run: order6_profile },
        Criterion {
            id: 10,
            name: "order 6 subgroup search at Q = 8",
            limit: secs(600),
            run: order6_subgroup,
        },
        Criterion { id: 11, name: "Y curve maximality", limit: secs(60), run: yrem_maximality },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let t = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if t > limit => Err(format!("over the {limit:?} limit")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} ({detail}; {:.2}s)", c.id, c.name, t.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({why}; {:.2}s)", c.id, c.name, t.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
