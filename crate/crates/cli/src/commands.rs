use bispectra::error::Error;
use bispectra::family::{verify_bispectrality, FamilyConfig, PolyFamily};
use bispectra::moments::{moment_sequence, verify_d_orthogonality, verify_duality};
use bispectra::rational::{parse_rational, Rational};
use bispectra::sato::{
    partitions_up_to, plane_from_family, plucker_coordinate, plucker_relations_check, tau_series,
    GrassmannPlane,
};
use bispectra::second_kind::{
    asymptotic_expansion, eval_nu, expansion_check, residual_checks, ContourSpec,
};
use bispectra::series::TauSeries;
use bispectra::toda::{dth_root, flow_rhs, lax_operator, PseudoDiffOperator};
use bispectra::virasoro::{build_virasoro, check_commutation, check_constraints, BosonicOperator};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, ContourArgs, FamilyArgs, PlaneArgs, Toda, Verify, Virasoro, Weights,
};
use crate::output::{check_table, numeric_table, poly, rat, rats, Output, Table};

type Res = Result<Output, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn family(a: &FamilyArgs) -> Result<FamilyConfig, String> {
    match &a.q {
        None => {
            if a.d == 0 {
                return Err("d must be positive".into());
            }
            Ok(FamilyConfig::gould_hopper(a.d))
        }
        Some(s) => {
            let qs = s
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<Rational>, _>>()
                .map_err(err)?;
            FamilyConfig::new(a.d, qs).map_err(err)
        }
    }
}

pub fn run(cli: &Cli) -> Res {
    match &cli.command {
        Command::Polys { family: f, max_n } => polys(f, *max_n),
        Command::Verify {
            what: Verify::Bochner { family: f, max_n },
        } => {
            let rep = verify_bispectrality(&family(f)?, *max_n);
            Ok(Output {
                command: "verify bochner".into(),
                passed: Some(rep.passed),
                table: check_table(&[&rep]),
                result: json!(rep),
            })
        }
        Command::Verify {
            what: Verify::Orthogonality { family: f, max_n },
        } => {
            let cfg = family(f)?;
            let dual = verify_duality(&cfg, *max_n);
            let orth = verify_d_orthogonality(&cfg, *max_n);
            Ok(Output {
                command: "verify orthogonality".into(),
                passed: Some(dual.passed && orth.passed),
                table: check_table(&[&dual, &orth]),
                result: json!({ "duality": dual, "d_orthogonality": orth }),
            })
        }
        Command::Moments { family: f, count } => moments(f, *count),
        Command::Weights {
            what:
                Weights::Eval {
                    contour,
                    s,
                    s_im,
                    x,
                    x_im,
                },
        } => weights_eval(
            contour,
            Complex64::new(*s, *s_im),
            Complex64::new(*x, *x_im),
        ),
        Command::Weights {
            what: Weights::Residuals { contour, points },
        } => weights_residuals(contour, *points, cli.seed),
        Command::Expand { d, s, order } => expand(*d, *s, *order),
        Command::Tau { plane, log } => tau(plane, *log),
        Command::Plucker { plane } => plucker(plane),
        Command::Virasoro {
            what: Virasoro::Build { d, m, cap, k_max },
        } => virasoro_build(*d, *m, *cap, *k_max),
        Command::Virasoro {
            what:
                Virasoro::Check {
                    d,
                    m,
                    degree,
                    k_max,
                    commutator_weight,
                    trivial_plane,
                },
        } => virasoro_check(*d, *m, *degree, *k_max, *commutator_weight, *trivial_plane),
        Command::Toda {
            what: Toda::Root { d, order },
        } => toda_root(*d, *order),
        Command::Toda {
            what: Toda::Flow { d, k, order },
        } => toda_flow(*d, *k, *order),
    }
}

fn polys(f: &FamilyArgs, max_n: usize) -> Res {
    let fam = PolyFamily::new(&family(f)?, max_n);
    let mut table = Table::new(&["n", "degree", "coefficient"]);
    let mut rows = Vec::new();
    for (n, p) in fam.polys().iter().enumerate() {
        for (k, c) in p.dense().iter().enumerate() {
            table.push(vec![n.to_string(), k.to_string(), c.to_string()]);
        }
        rows.push(json!({ "n": n, "coeffs": poly(p) }));
    }
    Ok(Output {
        command: "polys".into(),
        passed: None,
        result: Value::Array(rows),
        table,
    })
}

fn moments(f: &FamilyArgs, count: usize) -> Res {
    if count == 0 {
        return Err("count must be positive".into());
    }
    let mu = moment_sequence(&family(f)?, count - 1);
    let header: Vec<String> = (0..count).map(|k| format!("mu_{k}")).collect();
    let table = Table {
        header,
        rows: vec![mu.moments.iter().map(|c| c.to_string()).collect()],
    };
    Ok(Output {
        command: "moments".into(),
        passed: None,
        result: json!({ "moments": rats(&mu.moments) }),
        table,
    })
}

fn contour(a: &ContourArgs) -> Result<(FamilyConfig, ContourSpec), String> {
    if a.d == 0 {
        return Err("d must be positive".into());
    }
    if !(a.tolerance > 0.0 && a.tolerance < 1.0) {
        return Err("tolerance must lie in (0, 1)".into());
    }
    let cfg = FamilyConfig::gould_hopper(a.d);
    let spec = ContourSpec::for_config(&cfg)
        .map_err(err)?
        .with_tolerance(a.tolerance);
    Ok((cfg, spec))
}

fn weights_eval(a: &ContourArgs, s: Complex64, x: Complex64) -> Res {
    let (cfg, spec) = contour(a)?;
    let v = eval_nu(&cfg, s, x, &spec).map_err(err)?;
    let n = v.normalized();
    let mut table = Table::new(&[
        "re",
        "im",
        "normalized_re",
        "normalized_im",
        "error_estimate",
    ]);
    table.push(vec![
        format!("{:e}", v.value.re),
        format!("{:e}", v.value.im),
        format!("{:e}", n.re),
        format!("{:e}", n.im),
        format!("{:e}", v.error_estimate),
    ]);
    let result = json!({
        "s": [s.re, s.im], "x": [x.re, x.im],
        "value": [v.value.re, v.value.im],
        "normalized": [n.re, n.im],
        "error_estimate": v.error_estimate,
    });
    Ok(Output {
        command: "weights eval".into(),
        passed: None,
        result,
        table,
    })
}

fn weights_residuals(a: &ContourArgs, points: usize, seed: u64) -> Res {
    let (cfg, spec) = contour(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for _ in 0..points {
        let s = Complex64::new(rng.gen_range(-4.0..3.0), rng.gen_range(-1.0..1.0));
        let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
        let mut rep = residual_checks(&cfg, s, x, &spec).map_err(err)?;
        rep.check = format!("s={s:.6} x={x:.6}");
        reports.push(rep);
    }
    let passed = reports.iter().all(|r| r.passed);
    let table = numeric_table(&reports);
    Ok(Output {
        command: "weights residuals".into(),
        passed: Some(passed),
        result: json!(reports),
        table,
    })
}

fn expand(d: usize, s: i64, order: usize) -> Res {
    let cfg = FamilyConfig::gould_hopper(d.max(1));
    let e = asymptotic_expansion(&cfg, s, order).map_err(err)?;
    let rep = expansion_check(&e);
    let mut table = Table::new(&["offset", "coefficient"]);
    let mut tail = Vec::new();
    for (f, c) in e.tail.iter().rev() {
        table.push(vec![f.to_string(), c.to_string()]);
        tail.push(json!({ "offset": f, "coeff": rat(c) }));
    }
    let zeta: Vec<Rational> = (0..=order).map(|k| e.zeta_coeff(k)).collect();
    let result = json!({
        "d": d, "s": s,
        "exponent_coeff": rat(&e.exponent_coeff),
        "power_shift": rat(&e.power_shift),
        "tail": tail,
        "zeta_coeffs": rats(&zeta),
        "floor": e.floor,
        "check": rep,
    });
    Ok(Output {
        command: "expand".into(),
        passed: Some(rep.passed),
        result,
        table,
    })
}

/// `t_1^2 t_3` becomes `[1, 1, 3]`.
fn variable_list(m: &[u32]) -> Vec<usize> {
    m.iter()
        .enumerate()
        .flat_map(|(i, &e)| std::iter::repeat_n(i + 1, e as usize))
        .collect()
}

fn series_output(tau: &TauSeries) -> (Value, Table) {
    let mut table = Table::new(&["monomial", "coefficient"]);
    let mut terms: Vec<(Vec<usize>, &Rational)> = tau
        .terms()
        .iter()
        .map(|(m, c)| (variable_list(m), c))
        .collect();
    terms.sort();
    let json_terms = terms
        .iter()
        .map(|(vars, c)| {
            let name = if vars.is_empty() {
                "1".to_string()
            } else {
                vars.iter()
                    .map(|v| format!("t{v}"))
                    .collect::<Vec<_>>()
                    .join("*")
            };
            table.push(vec![name, c.to_string()]);
            json!({ "vars": vars, "coeff": rat(c) })
        })
        .collect();
    (Value::Array(json_terms), table)
}

fn plane_tau(p: &PlaneArgs) -> Result<(GrassmannPlane, TauSeries), String> {
    let cfg = FamilyConfig::gould_hopper(p.d.max(1));
    let plane = plane_from_family(&cfg, p.m, p.weight as usize + 4).map_err(err)?;
    let tau = tau_series(&plane, p.weight).map_err(err)?;
    Ok((plane, tau))
}

fn tau(p: &PlaneArgs, log: bool) -> Res {
    let (_, tau) = plane_tau(p)?;
    let series = if log { tau.log().map_err(err)? } else { tau };
    let (terms, table) = series_output(&series);
    let result = json!({ "d": p.d, "m": p.m, "weight": p.weight, "log": log, "terms": terms });
    Ok(Output {
        command: "tau".into(),
        passed: None,
        result,
        table,
    })
}

fn plucker(p: &PlaneArgs) -> Res {
    let cfg = FamilyConfig::gould_hopper(p.d.max(1));
    let plane = plane_from_family(&cfg, p.m, p.weight as usize + 4).map_err(err)?;
    let mut table = Table::new(&["partition", "coordinate"]);
    let mut coords = Vec::new();
    for lambda in partitions_up_to(p.weight) {
        let c = plucker_coordinate(&plane, &lambda).map_err(err)?;
        table.push(vec![lambda.to_string(), c.to_string()]);
        coords.push(json!({ "partition": lambda.parts(), "coordinate": rat(&c) }));
    }
    let rep = plucker_relations_check(&plane, p.weight);
    let result = json!({ "d": p.d, "m": p.m, "coordinates": coords, "relations": rep });
    Ok(Output {
        command: "plucker".into(),
        passed: Some(rep.passed),
        result,
        table,
    })
}

fn operator_terms(n: i64, op: &BosonicOperator, table: &mut Table) -> Value {
    let mut terms = Vec::new();
    let mut push = |kind: &str, idx: Vec<usize>, c: &Rational| {
        let label = idx
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        table.push(vec![n.to_string(), kind.to_string(), label, c.to_string()]);
        terms.push(json!({ "kind": kind, "indices": idx, "coeff": rat(c) }));
    };
    for (&(k, l), c) in &op.quadratic_creation {
        push("t t", vec![k, l], c);
    }
    for (&(k, l), c) in &op.mixed {
        push("t d", vec![k, l], c);
    }
    for (&(k, l), c) in &op.quadratic_annihilation {
        push("d d", vec![k, l], c);
    }
    for (&k, c) in &op.linear_creation {
        push("t", vec![k], c);
    }
    for (&k, c) in &op.linear {
        push("d", vec![k], c);
    }
    if op.constant != Rational::from_integer(0.into()) {
        push("1", vec![], &op.constant);
    }
    Value::Array(terms)
}

fn virasoro_build(d: usize, m: i64, cap: usize, k_max: i64) -> Res {
    let fam = build_virasoro(d, m, cap, k_max).map_err(err)?;
    let mut table = Table::new(&["mode", "kind", "indices", "coefficient"]);
    let modes: Vec<Value> = fam
        .operators
        .iter()
        .map(|(&n, op)| json!({ "n": n, "terms": operator_terms(n, op, &mut table) }))
        .collect();
    let result =
        json!({ "d": d, "m": m, "cap": cap, "convention_log": fam.convention_log, "modes": modes });
    Ok(Output {
        command: "virasoro build".into(),
        passed: None,
        result,
        table,
    })
}

fn virasoro_check(
    d: usize,
    m: i64,
    degree: u32,
    k_max: i64,
    commutator_weight: u32,
    trivial: bool,
) -> Res {
    let di = d as i64;
    let window = (-1..=k_max)
        .map(|n| (di * (n + 1) + 1).max(di * n))
        .max()
        .unwrap_or(0);
    let cap = (degree as i64 + window).max(3 * di) as u32;
    let fam = build_virasoro(d, m, cap as usize, k_max).map_err(err)?;
    let comm = check_commutation(&fam, k_max, commutator_weight);
    let tau = if trivial {
        tau_series(&GrassmannPlane::trivial(m, cap as usize), cap).map_err(err)?
    } else {
        plane_tau(&PlaneArgs { d, m, weight: cap })?.1
    };
    let cons = check_constraints(&tau, &fam, k_max);
    let result = json!({
        "d": d, "m": m, "tau_weight": cap,
        "convention_log": fam.convention_log,
        "commutation": comm, "constraints": cons,
    });
    Ok(Output {
        command: "virasoro check".into(),
        passed: Some(comm.passed && cons.passed),
        table: check_table(&[&comm, &cons]),
        result,
    })
}

fn pdo_json(p: &PseudoDiffOperator, label: &str, table: &mut Table) -> Value {
    let terms: Vec<Value> = p
        .terms
        .iter()
        .map(|(k, c)| {
            for (j, a) in c.dense().iter().enumerate() {
                table.push(vec![
                    label.to_string(),
                    k.to_string(),
                    j.to_string(),
                    a.to_string(),
                ]);
            }
            json!({ "degree": k, "coeffs": poly(c) })
        })
        .collect();
    json!({ "terms": terms, "reliable_through": p.truncation, "text": p.to_string() })
}

fn lax(d: usize) -> Result<PseudoDiffOperator, String> {
    if d == 0 {
        return Err("d must be positive".into());
    }
    Ok(lax_operator(&FamilyConfig::gould_hopper(d)))
}

fn toda_root(d: usize, order: usize) -> Res {
    let r = dth_root(&lax(d)?, d, order).map_err(err)?;
    let mut table = Table::new(&["operator", "degree", "s_power", "coefficient"]);
    let result = json!({ "d": d, "order": order, "root": pdo_json(&r, "root", &mut table) });
    Ok(Output {
        command: "toda root".into(),
        passed: None,
        result,
        table,
    })
}

fn toda_flow(d: usize, k: usize, order: usize) -> Res {
    let mut table = Table::new(&["operator", "degree", "s_power", "coefficient"]);
    match flow_rhs(&lax(d)?, k, d, order) {
        Ok(f) => {
            let result = json!({
                "d": d, "k": k, "order": order,
                "plus_form": pdo_json(&f.plus_form, "plus_form", &mut table),
                "minus_form": pdo_json(&f.minus_form, "minus_form", &mut table),
                "wave_flow": pdo_json(&f.wave_flow, "wave_flow", &mut table),
            });
            Ok(Output {
                command: "toda flow".into(),
                passed: Some(true),
                result,
                table,
            })
        }
        Err(Error::InsufficientDepth(msg)) => Ok(Output {
            command: "toda flow".into(),
            passed: Some(false),
            result: json!({ "d": d, "k": k, "order": order, "error": msg }),
            table,
        }),
        Err(e) => Err(err(e)),
    }
}
