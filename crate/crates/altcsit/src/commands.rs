use altcsit_core::bound::check_antennas;
use altcsit_core::polytope::MAX_VERTEX_USERS;
use altcsit_core::rational::int;
use altcsit_core::schemes::{
    alternating_order2_scheme, corner_scheme_case_a, hybrid_corner_scheme, mat_min_delay, mat_schedule_with,
    rate_curve, rate_slope, retransmission_scheme, simulate_decode, Repetitions, Schedule, SchemeConfig, SchemeResult,
};
use altcsit_core::{
    build_region, compare_regions, contains, inequality_count, lp_max, pareto_vertices, remove_redundant,
    tightened_region, vertices, Rational, Region, RegionRelation,
};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input::{guard_users, load_pattern, rational, rationals, user_list, RegionArgs, MAX_BOUND_USERS};
use crate::output::{exact, inequality, marginals, pattern_rows, point, write_csv, OutputDocument};
use crate::schedule::schedule as schedule_json;
use crate::{
    BoundArgs, Cli, Command, CompareArgs, MaxsumArgs, PlotData, RepetitionMode, SchemeArgs, SchemeName, SimulateArgs,
};

/// Redundancy removal solves one LP per inequality; keep it interactive.
const MAX_REDUNDANCY_USERS: usize = 5;

/// Outer-bound checks of a scheme's DoF need one LP over the full region.
const MAX_CHECK_USERS: usize = 5;

/// Collects what a command reports besides its results.
struct Report {
    warnings: Vec<String>,
    seed: Option<u64>,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

pub fn run(cli: &Cli, argv: Vec<String>) -> CliResult<OutputDocument> {
    let mut report = Report {
        warnings: Vec::new(),
        seed: None,
        table: None,
    };
    let (name, (inputs, results)) = match &cli.command {
        Command::Bound(args) => ("bound", bound(args, &mut report)?),
        Command::Maxsum(args) => ("maxsum", maxsum(args, &mut report)?),
        Command::Vertices(args) => ("vertices", vertex_list(args, &mut report)?),
        Command::Simulate(args) => ("simulate", simulate(args, &mut report)?),
        Command::Compare(args) => ("compare", compare(args, &mut report)?),
        Command::Plotdata { what } => match what {
            PlotData::Rates(args) => ("plotdata rates", rates(args, &mut report)?),
            PlotData::Vertices(args) => ("plotdata vertices", vertex_list(args, &mut report)?),
        },
    };
    if let Some(path) = &cli.csv {
        match &report.table {
            Some((header, rows)) => write_csv(path, header, rows)?,
            None => report
                .warnings
                .push(format!("{name} has no table; {} not written", path.display())),
        }
    }
    Ok(OutputDocument {
        command: name.to_string(),
        argv,
        inputs,
        results,
        seed: report.seed,
        warnings: report.warnings,
    })
}

fn coordinate_header(users: usize) -> Vec<String> {
    (1..=users).map(|u| format!("d{u}")).collect()
}

fn bound(args: &BoundArgs, report: &mut Report) -> CliResult<(Value, Value)> {
    let source = args.region.source(&mut report.warnings)?;
    let users = source.users();
    let mut region = args.region.region(&source, &mut report.warnings)?;
    if args.dedup {
        region = region.dedup();
    }
    if args.irredundant {
        guard_users(users, MAX_REDUNDANCY_USERS)?;
        region = remove_redundant(&region);
    }
    let mut header = vec!["family".to_string(), "users".to_string()];
    header.extend(coordinate_header(users));
    header.push("rhs".into());
    let rows = region
        .inequalities()
        .iter()
        .map(|ineq| {
            let mut row = vec![ineq.tag().family().to_string()];
            let tag = crate::output::tag(ineq.tag());
            let members: Vec<String> = tag["users"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|u| u.to_string())
                .collect();
            row.push(members.join(" "));
            row.extend(ineq.coeffs().iter().map(Rational::to_string));
            row.push(ineq.rhs().to_string());
            row
        })
        .collect();
    report.table = Some((header, rows));
    let results = json!({
        "count": region.len(),
        "formula_count": u64::try_from(inequality_count(users)).ok(),
        "inequalities": region.inequalities().iter().map(inequality).collect::<Vec<_>>(),
    });
    Ok((region_inputs(&source, &args.region), results))
}

fn region_inputs(source: &crate::input::Source, args: &RegionArgs) -> Value {
    let mut v = source.describe();
    v["symmetric"] = json!(args.symmetric);
    v["tightened"] = json!(args.tightened);
    v
}

fn maxsum(args: &MaxsumArgs, report: &mut Report) -> CliResult<(Value, Value)> {
    let source = args.region.source(&mut report.warnings)?;
    let region = args.region.region(&source, &mut report.warnings)?;
    let weights = match &args.weights {
        Some(w) => rationals(w)?,
        None => vec![int(1); source.users()],
    };
    let lp = lp_max(&region, &weights)?;
    let results = json!({
        "weights": crate::output::exacts(&weights),
        "status": lp.status(),
        "value": lp.value().map(exact),
        "optimizer": lp.optimizer().map(point),
    });
    Ok((region_inputs(&source, &args.region), results))
}

fn vertex_list(args: &RegionArgs, report: &mut Report) -> CliResult<(Value, Value)> {
    let source = args.source(&mut report.warnings)?;
    guard_users(source.users(), MAX_VERTEX_USERS)?;
    let region = args.region(&source, &mut report.warnings)?;
    let all = vertices(&region)?;
    let top = pareto_vertices(&region)?;
    let mut header = coordinate_header(source.users());
    header.push("pareto".into());
    let mut rows = Vec::new();
    let mut listed = Vec::new();
    for v in &all {
        let pareto = top.contains(v);
        let mut row: Vec<String> = v.coords().iter().map(Rational::to_string).collect();
        row.push(pareto.to_string());
        rows.push(row);
        let mut entry = point(v);
        entry["pareto"] = json!(pareto);
        listed.push(entry);
    }
    report.table = Some((header, rows));
    let results = json!({
        "count": all.len(),
        "pareto_count": top.len(),
        "vertices": listed,
    });
    Ok((region_inputs(&source, args), results))
}

/// A scheme as built from flags, with what only some schemes report.
struct Built {
    schedule: Schedule,
    result: SchemeResult,
    min_delay: Option<Rational>,
    antennas: usize,
}

fn fixed_three_users(args: &SchemeArgs, report: &mut Report) {
    if args.k.is_some_and(|k| k != 3) {
        report
            .warnings
            .push("this scheme is defined for three users; --k ignored".into());
    }
}

fn build_scheme(args: &SchemeArgs, report: &mut Report) -> CliResult<Built> {
    let k = args.k.unwrap_or(3);
    let lp = || -> CliResult<Rational> {
        let text = args
            .lp
            .as_deref()
            .ok_or_else(|| CliError::input("this scheme needs --lp"))?;
        rational(text)
    };
    let (schedule, result, min_delay) = match args.scheme {
        SchemeName::CaseA => {
            let favored = user_list(&args.favored.to_string(), k)?[0];
            let (s, r) = corner_scheme_case_a(k, &lp()?, favored)?;
            (s, r, None)
        }
        SchemeName::Mat => {
            let mode = match args.repetitions {
                RepetitionMode::Standard => Repetitions::Standard,
                RepetitionMode::Minimal => Repetitions::Minimal,
            };
            let s = mat_schedule_with(k, args.start, mode)?;
            let r = s.result();
            (s, r, Some(mat_min_delay(k, args.start)?))
        }
        SchemeName::Hybrid => {
            let ld = args.ld.as_deref().map_or(Ok(int(0)), rational)?;
            let subset = match &args.subset {
                Some(s) => user_list(s, k)?,
                None => (0..k).collect(),
            };
            let (s, r) = hybrid_corner_scheme(&lp()?, &ld, k, &subset)?;
            (s, r, None)
        }
        SchemeName::Retransmission => {
            fixed_three_users(args, report);
            let (s, r) = retransmission_scheme();
            (s, r, None)
        }
        SchemeName::Alternating => {
            fixed_three_users(args, report);
            let (s, r) = alternating_order2_scheme();
            (s, r, None)
        }
    };
    let antennas = args.m.unwrap_or(schedule.users());
    check_antennas(schedule.users(), antennas)?;
    schedule.validate(antennas)?;
    Ok(Built {
        schedule,
        result,
        min_delay,
        antennas,
    })
}

fn config(args: &SchemeArgs, built: &Built, report: &mut Report) -> CliResult<SchemeConfig> {
    let mut cfg = SchemeConfig::new(built.schedule.users());
    cfg.antennas = built.antennas;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    if let Some(grid) = &args.snr {
        cfg.snr = grid
            .split(',')
            .map(|t| {
                let db: f64 = t
                    .trim()
                    .parse()
                    .map_err(|_| CliError::input(format!("bad SNR value {t:?}")))?;
                Ok(10f64.powf(db / 10.0))
            })
            .collect::<CliResult<_>>()?;
    }
    cfg.validate()?;
    report.seed = Some(cfg.seed);
    Ok(cfg)
}

fn scheme_inputs(args: &SchemeArgs, built: &Built, cfg: Option<&SchemeConfig>) -> Value {
    let name = args.scheme.to_possible_value().map(|v| v.get_name().to_string());
    json!({
        "scheme": name,
        "users": built.schedule.users(),
        "antennas": built.antennas,
        "trials": cfg.map(|c| c.trials),
        "seed": cfg.map(|c| c.seed),
        "snr_db": cfg.map(|c| c.snr.iter().map(|p| 10.0 * p.log10()).collect::<Vec<_>>()),
    })
}

fn rate_table(curve: &[(f64, Vec<f64>)], users: usize) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["snr_db".to_string(), "power".to_string()];
    header.extend((1..=users).map(|u| format!("rate{u}")));
    let rows = curve
        .iter()
        .map(|(p, rates)| {
            let mut row = vec![(10.0 * p.log10()).to_string(), p.to_string()];
            row.extend(rates.iter().map(f64::to_string));
            row
        })
        .collect();
    (header, rows)
}

fn simulate(args: &SimulateArgs, report: &mut Report) -> CliResult<(Value, Value)> {
    let built = build_scheme(&args.scheme, report)?;
    let cfg = if args.no_decode && !args.slopes {
        None
    } else {
        Some(config(&args.scheme, &built, report)?)
    };
    let (s, r) = (&built.schedule, &built.result);
    let users = s.users();

    let decoding = match (&cfg, args.no_decode) {
        (Some(cfg), false) => {
            let verdict = simulate_decode(s, cfg)?;
            let per_user: Vec<Value> = verdict
                .users
                .iter()
                .enumerate()
                .map(|(u, v)| {
                    let worst = verdict
                        .diagnostics
                        .iter()
                        .filter(|d| d.user == u)
                        .map(|d| d.conditioning)
                        .fold(f64::INFINITY, f64::min);
                    json!({
                        "user": u + 1,
                        "decodable": v.decodable,
                        "desired": v.desired,
                        "deficient_trials": v.deficient_trials,
                        "worst_conditioning": worst.is_finite().then_some(worst),
                    })
                })
                .collect();
            json!({
                "verdict": if verdict.all_decodable() { "decodable" } else { "not decodable" },
                "trials": verdict.trials,
                "seed": verdict.seed,
                "users": per_user,
            })
        }
        _ => Value::Null,
    };

    let (slopes, curve) = match (&cfg, args.slopes) {
        (Some(cfg), true) => {
            let curve = rate_curve(s, cfg)?;
            let slopes = rate_slope(s, cfg)?;
            report.table = Some(rate_table(&curve, users));
            let points: Vec<Value> = curve
                .iter()
                .map(|(p, rates)| json!({ "snr_db": 10.0 * p.log10(), "power": p, "rates": rates }))
                .collect();
            (json!(slopes), json!(points))
        }
        _ => (Value::Null, Value::Null),
    };

    let census: Vec<Value> = s
        .phase_census()
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "order": c.order,
                "repetitions": c.repetitions,
                "slots": c.slots,
                "feedbacks": c.feedbacks,
            })
        })
        .collect();

    let outer = if users <= MAX_CHECK_USERS {
        let region = build_region(&r.realized.marginals());
        let inside = contains(&region, &r.dof)?.is_member();
        let tight: Vec<Value> = region
            .inequalities()
            .iter()
            .filter(|i| i.is_tight(r.dof.coords()))
            .map(inequality)
            .collect();
        let sum_bound = lp_max(&region, &vec![int(1); users])?;
        json!({
            "inside": inside,
            "sum_bound": sum_bound.value().map(exact),
            "sum_dof_meets_bound": sum_bound.value() == Some(&r.sum_dof()),
            "tight": tight,
        })
    } else {
        report
            .warnings
            .push(format!("outer-bound check skipped above {MAX_CHECK_USERS} users"));
        Value::Null
    };

    let results = json!({
        "slots": r.slots,
        "decoded": r.decoded,
        "common": r.common,
        "dof": point(&r.dof),
        "sum_dof": exact(&r.sum_dof()),
        "min_delay": built.min_delay.as_ref().map(exact),
        "feedback": { "count": s.feedback_ledger().len(), "per_slot": exact(&s.feedback_census()) },
        "phases": census,
        "realized": { "rows": pattern_rows(&r.realized), "marginals": marginals(&r.realized.marginals()) },
        "declared": s.declared().map(pattern_rows),
        "outer_bound": outer,
        "decoding": decoding,
        "slopes": slopes,
        "rate_curve": curve,
        "schedule": if args.schedule { schedule_json(s) } else { Value::Null },
    });
    Ok((scheme_inputs(&args.scheme, &built, cfg.as_ref()), results))
}

fn rates(args: &SchemeArgs, report: &mut Report) -> CliResult<(Value, Value)> {
    let built = build_scheme(args, report)?;
    let cfg = config(args, &built, report)?;
    let users = built.schedule.users();
    let curve = rate_curve(&built.schedule, &cfg)?;
    let (header, rows) = rate_table(&curve, users);
    let results = json!({ "columns": header, "rows": rows });
    report.table = Some((header, rows));
    Ok((scheme_inputs(args, &built, Some(&cfg)), results))
}

fn compare(args: &CompareArgs, report: &mut Report) -> CliResult<(Value, Value)> {
    let (la, pa) = load_pattern(&args.first)?;
    let (lb, pb) = load_pattern(&args.second)?;
    if pa.users() != pb.users() {
        return Err(CliError::input(format!(
            "{} has {} users, {} has {}",
            args.first,
            pa.users(),
            args.second,
            pb.users()
        )));
    }
    let users = pa.users();
    guard_users(users, MAX_VERTEX_USERS.min(MAX_BOUND_USERS))?;
    let tightened = !args.marginal_only && users == 3;
    if !args.marginal_only && !tightened {
        report
            .warnings
            .push("pattern inequalities need three users; comparing marginal bounds".into());
    }
    let region = |p| -> CliResult<Region> {
        Ok(if tightened {
            tightened_region(p)?
        } else {
            build_region(&p.marginals())
        })
    };
    let (ra, rb) = (region(&pa)?, region(&pb)?);
    let separator =
        |s: &altcsit_core::Separator| json!({ "point": point(&s.point), "violates": inequality(&s.violated) });
    let (relation, summary, separators) = match compare_regions(&ra, &rb)? {
        RegionRelation::Equal => ("equal", "equal regions".to_string(), Value::Null),
        RegionRelation::FirstInsideSecond(s) => (
            "first-inside-second",
            format!("strict inclusion: {la} ⊂ {lb}, separator {}", s.point),
            json!([separator(&s)]),
        ),
        RegionRelation::SecondInsideFirst(s) => (
            "second-inside-first",
            format!("strict inclusion: {lb} ⊂ {la}, separator {}", s.point),
            json!([separator(&s)]),
        ),
        RegionRelation::Incomparable {
            first_only,
            second_only,
        } => (
            "incomparable",
            format!(
                "incomparable: {} lies only in {la}, {} only in {lb}",
                first_only.point, second_only.point
            ),
            json!([separator(&first_only), separator(&second_only)]),
        ),
    };
    let describe = |label: &str, p: &altcsit_core::CsitPattern| json!({ "label": label, "rows": pattern_rows(p), "marginals": marginals(&p.marginals()) });
    let inputs = json!({
        "first": describe(&la, &pa),
        "second": describe(&lb, &pb),
        "tightened": tightened,
        "same_marginals": pa.marginals() == pb.marginals(),
    });
    let results = json!({
        "relation": relation,
        "summary": summary,
        "separators": separators,
        "first_inequalities": ra.len(),
        "second_inequalities": rb.len(),
    });
    Ok((inputs, results))
}
