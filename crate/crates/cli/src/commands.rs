use anyhow::Result;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thetagrad_core::chars::{orbit_census, EVEN, ODD, PUBLISHED_ORBIT_COUNTS};
use thetagrad_core::config::RunConfig;
use thetagrad_core::gradmap::{gamma_invariance_suite, pattern_census, pgr_th2};
use thetagrad_core::jacobi::{OddPair, JACOBI_ERRATA};
use thetagrad_core::relcat::cusp::{check_generator, cusp_generators};
use thetagrad_core::relcat::families::rank_report;
use thetagrad_core::relcat::{catalog, certify, sample_snapshots};
use thetagrad_core::riemann::{printed_r2_relations, r2_catalog, r4_catalog, R2_ERRATA};
use thetagrad_core::sympl::{character_table, membership, G_BASIS, G_BASIS_NAMES};
use thetagrad_core::theta::verify::{
    merge_reports, riemann_rows, verify_jacobi_table, verify_jacobi_verified, verify_transformation, JacobiRow,
    TransformObject,
};
use thetagrad_core::theta::ThetaSnapshot;
use thetagrad_core::{classify_set, ApproxValue, Char2, CharSet, Error, Family, SiegelPoint, SpMatrix, ThetaEvaluator};

use crate::report::{num, Report};
use crate::{Command, TauArg};

/// Imaginary-part shift of sampled points.
const SAMPLE_SHIFT: f64 = 0.3;
/// Points used to fix signs before certification on an independent sample.
const SIGN_FIT_POINTS: usize = 5;
const LIMIT_LAMBDAS: [f64; 4] = [5.0, 10.0, 20.0, 40.0];
const INVARIANCE_TOLERANCE: f64 = 1e-8;

pub fn run(command: &Command, config: &RunConfig) -> Result<Report> {
    match command {
        Command::EvalTheta(t) => eval_theta(config, t),
        Command::EvalGrad(t) => eval_grad(config, t),
        Command::EvalDet(t) => eval_det(config, t),
        Command::ClassifySet { set, chars } => classify(set.as_deref(), chars.as_deref()),
        Command::OrbitCensus => census(),
        Command::CharTable => char_table(),
        Command::CheckMember { matrix } => check_member(matrix),
        Command::VerifyRiemann { printed } => verify_riemann(config, *printed),
        Command::VerifyJacobi { printed } => verify_jacobi(config, *printed),
        Command::VerifyTransform { matrix, objects } => verify_transform(config, matrix.as_ref(), objects.as_deref()),
        Command::Catalog { family } => run_catalog(config, family),
        Command::CuspGens { check } => cusp(config, *check),
        Command::GradMap { tau, invariance, word_len } => grad_map(config, tau, *invariance, *word_len),
        Command::PatternCensus => census_of_patterns(),
    }
}

fn point(config: &RunConfig, t: &TauArg) -> SiegelPoint {
    t.tau.unwrap_or_else(|| SiegelPoint::random(&mut ChaCha8Rng::seed_from_u64(config.seed), SAMPLE_SHIFT))
}

fn samples(config: &RunConfig, ev: &ThetaEvaluator, offset: u64, count: usize) -> Result<Vec<ThetaSnapshot>> {
    Ok(sample_snapshots(ev, config.seed.wrapping_add(offset), count, SAMPLE_SHIFT)?)
}

#[derive(Serialize)]
struct ValueRow {
    label: String,
    re: f64,
    im: f64,
    abs_error: f64,
}

impl ValueRow {
    fn new(label: String, v: &ApproxValue) -> ValueRow {
        ValueRow { label, re: v.value.re, im: v.value.im, abs_error: v.abs_error }
    }

    fn cells(&self) -> Vec<String> {
        vec![self.label.clone(), num(self.re), num(self.im), num(self.abs_error)]
    }
}

fn value_report(command: &'static str, tau: SiegelPoint, radius: f64, rows: Vec<ValueRow>) -> Result<Report> {
    let cells = rows.iter().map(ValueRow::cells).collect();
    Ok(Report::new(command, json!({ "tau": tau, "radius": radius, "values": rows }))?
        .table(vec!["label", "re", "im", "abs_error"], cells))
}

fn eval_theta(config: &RunConfig, t: &TauArg) -> Result<Report> {
    let tau = point(config, t);
    let s = config.evaluator()?.snapshot(&tau)?;
    let rows = (0..10).map(|i| ValueRow::new(format!("th{}[{}]", i + 1, EVEN[i]), &s.even(i))).collect();
    value_report("eval-theta", tau, s.radius, rows)
}

fn eval_grad(config: &RunConfig, t: &TauArg) -> Result<Report> {
    let tau = point(config, t);
    let s = config.evaluator()?.snapshot(&tau)?;
    let rows = (0..6)
        .flat_map(|k| {
            let g = s.odd_grad(k);
            [
                ValueRow::new(format!("n{}[{}]/dz1", k + 1, ODD[k]), &g.g1),
                ValueRow::new(format!("n{}[{}]/dz2", k + 1, ODD[k]), &g.g2),
            ]
        })
        .collect();
    value_report("eval-grad", tau, s.radius, rows)
}

fn eval_det(config: &RunConfig, t: &TauArg) -> Result<Report> {
    let tau = point(config, t);
    let s = config.evaluator()?.snapshot(&tau)?;
    let rows = OddPair::lex().map(|p| ValueRow::new(p.to_string(), &s.det(p))).collect();
    value_report("eval-det", tau, s.radius, rows)
}

fn classify(set: Option<&str>, chars: Option<&str>) -> Result<Report> {
    let parsed = match (set, chars) {
        (Some(s), None) => {
            let labels: Vec<usize> = s
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad label {t:?}"))))
                .collect::<std::result::Result<_, _>>()?;
            CharSet::from_labels(&labels)?
        }
        (None, Some(c)) => {
            let list: Vec<Char2> = c.split(',').map(|t| t.trim().parse()).collect::<std::result::Result<_, _>>()?;
            CharSet::from_chars(&list)?
        }
        _ => return Err(Error::InvalidArgument("give exactly one of --set or --chars".into()).into()),
    };
    let class = classify_set(parsed);
    Ok(Report::new("classify-set", json!({ "set": parsed, "chars": parsed.chars(), "class": class }))?
        .table(vec!["set", "class"], vec![vec![parsed.to_string(), class.to_string()]]))
}

fn census() -> Result<Report> {
    let counts = orbit_census();
    #[derive(Serialize)]
    struct Row {
        class: String,
        count: usize,
        published: Option<usize>,
    }
    let rows: Vec<Row> = counts
        .iter()
        .map(|(class, &count)| Row {
            class: class.to_string(),
            count,
            published: PUBLISHED_ORBIT_COUNTS.iter().find(|(c, _)| c == class).map(|&(_, n)| n),
        })
        .collect();
    let pass = PUBLISHED_ORBIT_COUNTS.iter().all(|(c, n)| counts.get(c) == Some(n));
    let cells = rows
        .iter()
        .map(|r| vec![r.class.clone(), r.count.to_string(), r.published.map_or(String::new(), |n| n.to_string())])
        .collect();
    Ok(Report::new("orbit-census", &rows)?.pass(pass).table(vec!["class", "count", "published"], cells))
}

fn char_table() -> Result<Report> {
    let table = character_table();
    let mismatches = table.mismatches();
    let pairs: Vec<String> = OddPair::lex().map(|p| p.to_string()).collect();
    let cells = table
        .rows
        .iter()
        .zip(&pairs)
        .map(|(row, p)| std::iter::once(p.clone()).chain(row.iter().map(|v| v.to_string())).collect())
        .collect();
    let mut header = vec!["pair"];
    header.extend(G_BASIS_NAMES);
    let body = json!({
        "basis": G_BASIS_NAMES,
        "pairs": pairs,
        "rows": table.rows,
        "gf2_rank": table.gf2_rank(),
        "mismatches": mismatches,
    });
    Ok(Report::new("char-table", body)?.pass(mismatches.is_empty()).table(header, cells))
}

fn check_member(matrix: &SpMatrix) -> Result<Report> {
    let m = membership(matrix);
    let g = m.g_coordinates.map_or(String::new(), |v| v.coords().iter().map(|c| c.to_string()).collect());
    let cells = vec![
        vec!["gamma1".into(), m.level1.principal.to_string()],
        vec!["gamma1_2".into(), m.level1.theta.to_string()],
        vec!["gamma1_2_4".into(), m.level1.igusa.to_string()],
        vec!["gamma2".into(), m.level2.principal.to_string()],
        vec!["gamma2_4".into(), m.level2.theta.to_string()],
        vec!["gamma2_4_8".into(), m.level2.igusa.to_string()],
        vec!["gamma4".into(), m.level4.principal.to_string()],
        vec!["gamma4_8".into(), m.level4.theta.to_string()],
        vec!["gamma4_8_16".into(), m.level4.igusa.to_string()],
        vec!["in_gamma".into(), m.in_gamma.to_string()],
        vec!["kappa_squared".into(), m.kappa_squared.map_or(String::new(), |k| k.to_string())],
        vec!["g_coordinates".into(), g],
    ];
    Ok(Report::new("check-member", &m)?.table(vec!["property", "value"], cells))
}

fn residual_cells(rows: &[thetagrad_core::theta::verify::ResidualRow]) -> Vec<Vec<String>> {
    rows.iter().map(|r| vec![r.relation_id.clone(), num(r.residual), num(r.budget), r.pass.to_string()]).collect()
}

fn verify_riemann(config: &RunConfig, printed: bool) -> Result<Report> {
    let ev = config.evaluator()?;
    let snaps = samples(config, &ev, 0, config.tau_samples)?;
    let r2 = if printed { printed_r2_relations() } else { r2_catalog() };
    let r4 = r4_catalog();
    let reports: Vec<_> = snaps.iter().map(|s| riemann_rows(&r2, &r4, s)).collect();
    let rows = merge_reports(&reports);
    let pass = rows.iter().all(|r| r.pass);
    let body = json!({
        "source": if printed { "printed" } else { "corrected" },
        "corrected_rows": R2_ERRATA,
        "samples": snaps.len(),
        "rows": rows,
    });
    Ok(Report::new("verify-riemann", body)?.pass(pass).table(vec!["relation", "residual", "budget", "pass"], residual_cells(&rows)))
}

fn verify_jacobi(config: &RunConfig, printed: bool) -> Result<Report> {
    let ev = config.evaluator()?;
    let snaps = samples(config, &ev, 0, config.tau_samples)?;
    let mut rows: Vec<JacobiRow> = Vec::new();
    for s in &snaps {
        let here = if printed { verify_jacobi_table(s) } else { verify_jacobi_verified(s) };
        if rows.is_empty() {
            rows = here;
            continue;
        }
        for (acc, r) in rows.iter_mut().zip(here) {
            acc.residual = acc.residual.max(r.residual);
            acc.opposite_residual = acc.opposite_residual.min(r.opposite_residual).max(0.0);
            acc.budget = acc.budget.max(r.budget);
            acc.pass &= r.pass;
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    let cells = rows
        .iter()
        .map(|r| vec![r.pair.to_string(), r.sign.to_string(), num(r.residual), num(r.budget), r.pass.to_string()])
        .collect();
    let body = json!({
        "signs": if printed { "printed" } else { "corrected" },
        "corrected_pairs": JACOBI_ERRATA,
        "samples": snaps.len(),
        "rows": rows,
    });
    Ok(Report::new("verify-jacobi", body)?.pass(pass).table(vec!["pair", "sign", "residual", "budget", "pass"], cells))
}

fn all_objects() -> Vec<TransformObject> {
    let mut v: Vec<TransformObject> =
        (0..10).flat_map(|i| (i..10).map(move |j| TransformObject::ThetaPair(i, j))).collect();
    v.extend(OddPair::lex().map(TransformObject::Det));
    v
}

fn verify_transform(config: &RunConfig, matrix: Option<&SpMatrix>, objects: Option<&str>) -> Result<Report> {
    let ev = config.evaluator()?;
    let objects: Vec<TransformObject> = match objects {
        Some(list) => list.split(',').map(|t| t.trim().parse()).collect::<std::result::Result<_, _>>()?,
        None => all_objects(),
    };
    let matrices: Vec<(String, SpMatrix)> = match matrix {
        Some(m) => vec![("matrix".into(), *m)],
        None => G_BASIS_NAMES.iter().map(|n| n.to_string()).zip(G_BASIS).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let taus: Vec<SiegelPoint> = (0..config.tau_samples).map(|_| SiegelPoint::random(&mut rng, SAMPLE_SHIFT)).collect();
    #[derive(Serialize)]
    struct Row {
        matrix: String,
        object: String,
        multiplier: i8,
        residual: f64,
        budget: f64,
        pass: bool,
    }
    let mut rows: Vec<Row> = Vec::new();
    for (name, gamma) in &matrices {
        let start = rows.len();
        for tau in &taus {
            for (k, r) in verify_transformation(&ev, gamma, &objects, tau)?.into_iter().enumerate() {
                match rows.get_mut(start + k) {
                    Some(acc) => {
                        acc.residual = acc.residual.max(r.residual);
                        acc.budget = acc.budget.max(r.budget);
                        acc.pass &= r.pass;
                    }
                    None => rows.push(Row {
                        matrix: name.clone(),
                        object: r.object,
                        multiplier: r.multiplier,
                        residual: r.residual,
                        budget: r.budget,
                        pass: r.pass,
                    }),
                }
            }
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    let cells = rows
        .iter()
        .map(|r| vec![r.matrix.clone(), r.object.clone(), r.multiplier.to_string(), num(r.residual), num(r.budget), r.pass.to_string()])
        .collect();
    Ok(Report::new("verify-transform", json!({ "samples": taus.len(), "rows": rows }))?
        .pass(pass)
        .table(vec!["matrix", "object", "multiplier", "residual", "budget", "pass"], cells))
}

fn run_catalog(config: &RunConfig, tag: &str) -> Result<Report> {
    let families: Vec<Family> = if tag.eq_ignore_ascii_case("all") { Family::all() } else { vec![tag.parse()?] };
    let ev = config.evaluator()?;
    let fit = samples(config, &ev, 0, SIGN_FIT_POINTS)?;
    let check = samples(config, &ev, 1, config.tau_samples)?;
    let mut relations = Vec::new();
    let mut ranks = Vec::new();
    for &f in &families {
        let rels = catalog(f, &fit)?;
        ranks.push(rank_report(f, &rels));
        relations.extend(rels);
    }
    let cert = certify(&relations, &check);
    let pass = cert.iter().all(|r| r.pass);
    let cells = cert
        .iter()
        .map(|r| vec![r.family.to_string(), r.key.clone(), num(r.max_residual), num(r.budget), r.pass.to_string()])
        .collect();
    let body = json!({ "relations": relations, "certification": cert, "ranks": ranks });
    Ok(Report::new("catalog", body)?.pass(pass).table(vec!["family", "key", "max_residual", "budget", "pass"], cells))
}

fn cusp(config: &RunConfig, check: usize) -> Result<Report> {
    let gens = cusp_generators();
    if check == 0 {
        let listed: Vec<_> = gens.iter().map(|g| json!({ "source": g.source, "monomial": g.monomial, "text": g.monomial.to_string() })).collect();
        let cells = gens
            .iter()
            .map(|g| vec![g.source.clone(), g.monomial.to_string(), g.monomial.weight().to_string()])
            .collect();
        return Ok(Report::new("cusp-gens", json!({ "count": gens.len(), "generators": listed }))?
            .table(vec!["source", "monomial", "weight"], cells));
    }
    let ev = config.evaluator()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let chosen: Vec<_> = gens.choose_multiple(&mut rng, check.min(gens.len())).collect();
    let tau1 = Complex64::new(0.1, 1.1);
    let checks = chosen
        .iter()
        .map(|g| check_generator(&ev, g, tau1, &LIMIT_LAMBDAS))
        .collect::<thetagrad_core::Result<Vec<_>>>()?;
    let ok = |c: &thetagrad_core::relcat::cusp::CuspCheck| c.decay < 1e-6 && c.reference_ratio > 0.1;
    let pass = checks.iter().all(ok);
    let cells = checks
        .iter()
        .map(|c| vec![c.source.clone(), num(c.decay), num(c.reference_ratio), ok(c).to_string()])
        .collect();
    Ok(Report::new("cusp-gens", json!({ "count": gens.len(), "lambdas": LIMIT_LAMBDAS, "checks": checks }))?
        .pass(pass)
        .table(vec!["source", "decay", "reference_ratio", "pass"], cells))
}

fn grad_map(config: &RunConfig, t: &TauArg, invariance: bool, word_len: usize) -> Result<Report> {
    let ev = config.evaluator()?;
    let tau = point(config, t);
    let p = pgr_th2(&ev, &tau)?;
    let pairs: Vec<OddPair> = OddPair::ordered().collect();
    let cells = (0..15)
        .map(|k| vec![pairs[k].to_string(), num(p.coords[k].re), num(p.coords[k].im), num(p.errors[k])])
        .collect();
    let (report, pass) = if invariance {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
        let r = gamma_invariance_suite(&ev, config.tau_samples, word_len, INVARIANCE_TOLERANCE, &mut rng)?;
        let pass = r.pass;
        (Some(r), pass)
    } else {
        (None, true)
    };
    let body = json!({ "tau": tau, "order": pairs, "point": p, "invariance": report });
    Ok(Report::new("grad-map", body)?.pass(pass).table(vec!["pair", "re", "im", "abs_error"], cells))
}

fn census_of_patterns() -> Result<Report> {
    let c = pattern_census()?;
    let pass = c.homomorphism_consistent && c.kernel_matches_gamma;
    let cells = c
        .witness_patterns
        .iter()
        .map(|w| vec![w.g.coords().iter().map(|b| b.to_string()).collect::<String>(), w.pattern.clone()])
        .collect();
    Ok(Report::new("pattern-census", &c)?.pass(pass).table(vec!["g", "pattern"], cells))
}
