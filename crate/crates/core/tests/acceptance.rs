//! Acceptance checklist. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use altcsit_core::bound::permutations;
use altcsit_core::catalog;
use altcsit_core::polytope::vertices;
use altcsit_core::rational::{int, rat};
use altcsit_core::schemes::{
    alternating_order2_scheme, corner_scheme_case_a, fixed_delayed_scheme, hybrid_corner_scheme, mat_min_delay,
    mat_schedule, rate_slope, retransmission_scheme, simulate_decode, SchemeConfig, SchemeResult,
};
use altcsit_core::{
    build_region, build_symmetric_region, compare_regions, contains, is_redundant, lp_max, pattern_weighted_inequality,
    remove_redundant, sum_inequality, tightened_region, ConstraintTag, DofPoint, MarginalProfile,
    PatternInequalitySpec, Rational, Region, RegionRelation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ones(k: usize) -> Vec<Rational> {
    vec![int(1); k]
}

fn point(v: &[Rational]) -> DofPoint {
    DofPoint::new(v.to_vec()).unwrap()
}

fn sum_bound(region: &Region) -> Result<Rational, String> {
    lp_max(region, &ones(region.dim()))
        .map_err(err)?
        .value()
        .cloned()
        .ok_or_else(|| "lp not optimal".to_string())
}

fn sum_dof_bound() -> Outcome {
    let v = sum_bound(&build_region(&catalog::mixed_profile()))?;
    ensure(v == rat(28, 11), format!("got {v}"))?;
    Ok(format!("sum bound {v}"))
}

fn asymmetric_bounds() -> Outcome {
    let a = sum_bound(&build_region(&catalog::ascending_perfect_profile()))?;
    let b = sum_bound(&build_region(&catalog::capped_perfect_profile()))?;
    ensure(a == rat(7, 4) && b == rat(7, 4), format!("got {a} and {b}"))?;
    Ok(format!("both {a}"))
}

fn retransmission_end_to_end() -> Outcome {
    let start = Instant::now();
    let (schedule, result) = retransmission_scheme();
    ensure(
        result.dof.coords() == [rat(2, 3), rat(2, 3), rat(1, 3)],
        format!("dof {}", result.dof),
    )?;
    let bound = sum_inequality(&result.realized.marginals(), &[0, 1, 2]).map_err(err)?;
    ensure(bound.rhs() == &rat(5, 3), format!("sum inequality rhs {}", bound.rhs()))?;
    ensure(bound.is_tight(result.dof.coords()), "bound not met with equality")?;
    let config = SchemeConfig {
        trials: 100,
        seed: 7,
        ..SchemeConfig::new(3)
    };
    let verdict = simulate_decode(&schedule, &config).map_err(err)?;
    let passed = (0..100)
        .filter(|&t| {
            verdict
                .diagnostics
                .iter()
                .filter(|d| d.trial == t)
                .all(|d| d.decodable())
        })
        .count();
    ensure(passed == 100, format!("{passed}/100 trials decodable"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!(
        "dof {}, bound {} tight, {passed}/100 trials, {elapsed:.2?}",
        result.dof,
        bound.rhs()
    ))
}

fn mat_census() -> Outcome {
    for k in 1..=6 {
        for j in 1..=k {
            let s = mat_schedule(k, j).map_err(err)?;
            let expected = mat_min_delay(k, j).map_err(err)?;
            ensure(
                s.feedback_census() == expected,
                format!("K={k} j={j}: census {} vs {expected}", s.feedback_census()),
            )?;
        }
    }
    let s = mat_schedule(3, 1).map_err(err)?;
    let sum = s.result().sum_dof();
    ensure(sum == rat(18, 11), format!("sum dof {sum}"))?;
    let delay = mat_min_delay(3, 1).map_err(err)?;
    ensure(delay == rat(5, 11), format!("min delay {delay}"))?;
    Ok(format!("21 (K, j) pairs match; K=3 sum dof {sum}, min delay {delay}"))
}

fn alternating_vs_fixed() -> Outcome {
    let (_, alt) = alternating_order2_scheme();
    ensure(
        alt.sum_dof() == rat(24, 17),
        format!("alternating sum dof {}", alt.sum_dof()),
    )?;
    let (fixed_schedule, fixed) = fixed_delayed_scheme();
    let marginals = fixed_schedule.declared().ok_or("no declared pattern")?.marginals();
    let bound = sum_inequality(&marginals, &[0, 1, 2]).map_err(err)?;
    ensure(bound.rhs() == &int(1), format!("fixed bound {}", bound.rhs()))?;
    ensure(fixed.sum_dof() == int(1), format!("fixed sum dof {}", fixed.sum_dof()))?;
    Ok(format!(
        "alternating {} in {} slots; fixed bound {} achieved",
        alt.sum_dof(),
        alt.slots,
        bound.rhs()
    ))
}

fn corners(a: Rational, b: Rational) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = permutations(&[0, 1, 2])
        .into_iter()
        .map(|p| {
            let base = [a.clone(), b.clone(), b.clone()];
            p.iter().map(|&i| base[i].clone()).collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn case_a() -> Outcome {
    let lp = rat(1, 3);
    let region = build_symmetric_region(lp.clone(), int(0), 3).map_err(err)?;
    let irr = remove_redundant(&region);
    let families_ok = irr
        .inequalities()
        .iter()
        .all(|i| matches!(i.tag(), ConstraintTag::Box(_) | ConstraintTag::Sum(_)));
    ensure(
        irr.len() == 7 && families_ok,
        format!("{} inequalities remain", irr.len()),
    )?;
    let verts = vertices(&region).map_err(err)?;
    for (favored, c) in corners(int(1), lp.clone()).into_iter().rev().enumerate() {
        let p = point(&c);
        ensure(verts.contains(&p), format!("{p} is not a vertex"))?;
        let (_, r) = corner_scheme_case_a(3, &lp, favored).map_err(err)?;
        ensure(r.dof == p, format!("scheme for user {favored} gives {}", r.dof))?;
    }
    Ok("7 inequalities remain; 3 corners are vertices and achieved".into())
}

fn case_b() -> Outcome {
    // λ_N ≤ λ_D / (5/6) on a few symmetric profiles
    let profiles = [
        (rat(1, 3), rat(1, 3)),
        (rat(1, 2), rat(5, 18)),
        (int(0), int(1)),
        (rat(1, 5), rat(1, 2)),
    ];
    let mut checked = 0;
    for (lp, ld) in profiles {
        let ln = int(1) - &lp - &ld;
        ensure(ln <= &ld / rat(5, 6), format!("profile ({lp}, {ld}) outside the case"))?;
        let region = build_symmetric_region(lp.clone(), ld.clone(), 3).map_err(err)?;
        for (i, ineq) in region.inequalities().iter().enumerate() {
            if let ConstraintTag::Sum(set) = ineq.tag() {
                if set.len() >= 2 {
                    ensure(
                        is_redundant(&region, i).map_err(err)?,
                        format!("{ineq} active at ({lp}, {ld})"),
                    )?;
                }
            }
        }
        let verts = vertices(&region).map_err(err)?;
        let pair = (int(2) + &lp) / int(3);
        let all = (int(6) + int(5) * &lp) / int(11);
        for c in corners(lp.clone(), pair.clone()) {
            let p = point(&c);
            ensure(verts.contains(&p), format!("{p} is not a vertex at ({lp}, {ld})"))?;
            let subset: Vec<usize> = (0..3).filter(|&i| c[i] == pair).collect();
            let (_, r) = hybrid_corner_scheme(&lp, &ld, 3, &subset).map_err(err)?;
            ensure(r.dof == p, format!("hybrid on {subset:?} gives {}", r.dof))?;
        }
        let sym = point(&[all.clone(), all.clone(), all.clone()]);
        ensure(verts.contains(&sym), format!("{sym} is not a vertex"))?;
        let (_, r) = hybrid_corner_scheme(&lp, &ld, 3, &[0, 1, 2]).map_err(err)?;
        ensure(r.dof == sym, format!("hybrid on all users gives {}", r.dof))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} profiles: sum inequalities redundant, 4 corners each achieved"
    ))
}

fn pattern_dependence() -> Outcome {
    let a = catalog::shared_perfect();
    let b = catalog::diagonal_perfect();
    ensure(a.marginals() == b.marginals(), "marginals differ")?;
    let spec = PatternInequalitySpec::new(0, 1).map_err(err)?;
    let ineq = pattern_weighted_inequality(&b, spec).map_err(err)?;
    ensure(ineq.rhs() == &rat(8, 3), format!("pattern bound {}", ineq.rhs()))?;
    let rel = compare_regions(&tightened_region(&b).map_err(err)?, &tightened_region(&a).map_err(err)?).map_err(err)?;
    match rel {
        RegionRelation::FirstInsideSecond(s) if s.point == point(&[int(1), rat(1, 3), rat(1, 3)]) => Ok(format!(
            "strict inclusion, separator {} violating {}",
            s.point, s.violated
        )),
        other => Err(format!("{other:?}")),
    }
}

fn random_profile(rng: &mut ChaCha8Rng, k: usize) -> MarginalProfile {
    let pairs: Vec<(Rational, Rational)> = (0..k)
        .map(|_| {
            let den = rng.random_range(1..=12i64);
            let p = rng.random_range(0..=den);
            let d = rng.random_range(0..=den - p);
            (rat(p, den), rat(d, den))
        })
        .collect();
    MarginalProfile::from_pairs(&pairs).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, k: usize) -> DofPoint {
    point(&(0..k).map(|_| rat(rng.random_range(0..=36), 24)).collect::<Vec<_>>())
}

fn random_scheme(rng: &mut ChaCha8Rng, k: usize) -> Result<SchemeResult, String> {
    let den = rng.random_range(1..=6i64);
    let lp = rat(rng.random_range(0..=den), den);
    match rng.random_range(0..3) {
        0 => Ok(corner_scheme_case_a(k, &lp, rng.random_range(0..k)).map_err(err)?.1),
        1 => {
            let mut subset: Vec<usize> = (0..k).filter(|_| rng.random_bool(0.6)).collect();
            if subset.is_empty() {
                subset.push(rng.random_range(0..k));
            }
            // the largest λ_D keeps every group feasible
            let ld = int(1) - &lp;
            Ok(hybrid_corner_scheme(&lp, &ld, k, &subset).map_err(err)?.1)
        }
        _ => Ok(mat_schedule(k, rng.random_range(1..=k)).map_err(err)?.result()),
    }
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = 500;
    for case in 0..cases {
        let k = rng.random_range(1..=4usize);
        let tag = |msg: String| format!("case {case} (K={k}): {msg}");

        let result = random_scheme(&mut rng, k).map_err(tag)?;
        let region = build_region(&result.realized.marginals());
        let m = contains(&region, &result.dof).map_err(err).map_err(tag)?;
        ensure(
            m.is_member(),
            tag(format!("dof {} outside its realized bound", result.dof)),
        )?;

        let profile = random_profile(&mut rng, k);
        let region = build_region(&profile);
        let mut perm: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let permuted = build_region(&profile.permuted(&perm).unwrap());
        ensure(
            permuted.same_constraints(&region.permuted(&perm)),
            tag("not equivariant".into()),
        )?;

        let weights: Vec<Rational> = (0..k)
            .map(|_| rat(rng.random_range(0..=5), rng.random_range(1..=3)))
            .collect();
        let best = lp_max(&region, &weights).map_err(err).map_err(tag)?;
        let verts = vertices(&region).map_err(err).map_err(tag)?;
        let over_vertices = verts
            .iter()
            .map(|v| v.coords().iter().zip(&weights).map(|(x, w)| x * w).sum::<Rational>())
            .max()
            .ok_or_else(|| tag("no vertices".into()))?;
        ensure(
            best.value() == Some(&over_vertices),
            tag(format!("lp {:?} vs vertices {over_vertices}", best.value())),
        )?;

        let irr = remove_redundant(&region);
        for _ in 0..20 {
            let p = random_point(&mut rng, k);
            let before = contains(&region, &p).unwrap().is_member();
            let after = contains(&irr, &p).unwrap().is_member();
            ensure(before == after, tag(format!("membership of {p} changed")))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("{cases} random cases in {elapsed:.1?}"))
}

fn slopes() -> Outcome {
    let (zf, _) = corner_scheme_case_a(2, &int(1), 0).map_err(err)?;
    let config = SchemeConfig {
        seed: 7,
        ..SchemeConfig::new(2)
    };
    let s = rate_slope(&zf, &config).map_err(err)?;
    ensure(
        s.iter().all(|v| (v - 1.0).abs() <= 0.05),
        format!("zero-forcing slopes {s:?}"),
    )?;
    let (schedule, _) = retransmission_scheme();
    let config = SchemeConfig {
        seed: 7,
        ..SchemeConfig::new(3)
    };
    let f = rate_slope(&schedule, &config).map_err(err)?;
    let target = [2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0];
    ensure(
        f.iter().zip(target).all(|(v, t)| (v - t).abs() <= 0.05),
        format!("retransmission slopes {f:?}"),
    )?;
    Ok(format!("zero forcing {s:.3?}, retransmission {f:.3?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sum-DoF bound for the mixed profile is 28/11", sum_dof_bound),
        (
            "asymmetric perfect-CSIT profiles both bound the sum by 7/4",
            asymmetric_bounds,
        ),
        ("three-slot retransmission scheme end to end", retransmission_end_to_end),
        ("MAT feedback census and sum DoF", mat_census),
        ("alternating beats fixed delayed CSIT", alternating_vs_fixed),
        ("case A structure and corner schemes", case_a),
        ("case B structure and hybrid schemes", case_b),
        ("same marginals, different regions", pattern_dependence),
        ("randomised property suite", property_suite),
        ("finite-SNR slope diagnostics", slopes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
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
