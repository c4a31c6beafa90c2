//! The subcommands. Each takes the raw instance text and produces a report
//! (a JSON value with keys in sorted order) plus, for `extend` and
//! `convert`, a new instance.

use std::sync::Arc;
use std::time::Instant;

use ainfty::ainfty::{ArStructure, Convention};
use ainfty::complexes::{differential_multimap, hom_differential, GradedModule, MultiMap};
use ainfty::generate::{random_element, random_element_where, rng};
use ainfty::hochschild::HochschildComplex;
use ainfty::homology::{check_assumption_a, homology};
use ainfty::obstruction::{exhaustive_non_membership, extend_to_ainfty, lift_once, Extension, ObstructionReport};
use ainfty::prelie::{
    bracket, check_graded_system, check_weight_system, circle, convert_graded_to_weight, jacobi_holds,
    koszul_suspension_constant, odd_square_identities, odd_square_identities_degree, pre_lie_identity_holds,
    prelie_differential, star, theta, theta_inv, EndSystem, Grading,
};
use ainfty::{Error, RingSpec};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format::{
    complex_of, instance_of, module_to_json, parse_instance, structure_of, to_json_text, witness,
};
use crate::{CliError, Cli, Command};

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub report: Value,
    /// A new instance (canonical JSON text) for `extend` and `convert`.
    pub instance: Option<String>,
}

/// Largest tensor power rank for which the Koszul constant is checked on
/// the explicit tensor power.
const KOSZUL_MAX_RANK: usize = 256;

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Runs a parsed command on the instance text.
pub fn execute(cli: &Cli, text: &str) -> Outcome {
    let start = Instant::now();
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Validate { .. } => validate(text),
        Command::Homology { .. } => homology_cmd(text),
        Command::CheckPrelie { trials, seed, .. } => check_prelie(text, *trials, *seed),
        Command::CheckAr { r, .. } => check_ar(text, *r),
        Command::Hochschild { n, i, .. } => hochschild(text, *n, *i),
        Command::Obstruct { r, .. } => obstruct(text, *r),
        Command::Extend { to, .. } => extend(text, *to),
        Command::Convert { from, to, .. } => convert(text, (*from).into(), (*to).into()),
    };
    let mut outcome = match result {
        Ok(o) => o,
        Err(e) => Outcome {
            exit: e.exit_code(),
            report: json!({ "error": e.to_string() }),
            instance: None,
        },
    };
    if let Value::Object(map) = &mut outcome.report {
        map.insert("command".into(), json!(name));
        map.insert("input_sha256".into(), json!(digest(text)));
        map.insert("exit_code".into(), json!(outcome.exit));
        if cli.timing {
            map.insert("timing_ms".into(), json!(start.elapsed().as_secs_f64() * 1000.0));
        }
    }
    outcome
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Homology { .. } => "homology",
        Command::CheckPrelie { .. } => "check-prelie",
        Command::CheckAr { .. } => "check-ar",
        Command::Hochschild { .. } => "hochschild",
        Command::Obstruct { .. } => "obstruct",
        Command::Extend { .. } => "extend",
        Command::Convert { .. } => "convert",
    }
}

fn ok(report: Value) -> Outcome {
    Outcome { exit: 0, report, instance: None }
}

fn verdict(pass: bool, report: Value) -> Outcome {
    Outcome { exit: if pass { 0 } else { 1 }, report, instance: None }
}

fn load(text: &str) -> Result<ArStructure, CliError> {
    structure_of(&parse_instance(text)?)
}

fn map_json(f: &MultiMap) -> Value {
    serde_json::to_value(witness(f)).expect("serializable")
}

fn opt_map_json(f: Option<&MultiMap>) -> Value {
    f.map(map_json).unwrap_or(Value::Null)
}

fn validate(text: &str) -> Result<Outcome, CliError> {
    let file = parse_instance(text)?;
    match complex_of(&file) {
        Err(CliError::Math(Error::NotADifferential(deg))) => {
            return Ok(verdict(
                false,
                json!({ "d_squared_zero": false, "failing_degree": deg }),
            ));
        }
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let s = structure_of(&file)?;
    let report = s.check_ar()?;
    Ok(verdict(
        report.passed(),
        json!({
            "d_squared_zero": true,
            "degrees_consistent": true,
            "convention": s.convention().name(),
            "r": s.r(),
            "relations": report.relations,
            "first_failure": report.first_failure.as_ref().map(|d| d.n),
        }),
    ))
}

fn homology_cmd(text: &str) -> Result<Outcome, CliError> {
    let file = parse_instance(text)?;
    let c = complex_of(&file)?;
    let data = homology(&c);
    let degrees: Vec<Value> = data
        .degrees()
        .iter()
        .map(|d| {
            json!({
                "degree": d.degree,
                "rank": d.rank,
                "cycles": d.cycles,
                "boundaries": d.boundaries,
                "homology": d.homology,
                "torsion": d.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let assumption = match check_assumption_a(&c) {
        Ok(_) => json!({ "holds": true }),
        Err(Error::AssumptionAViolated { degree, factors }) => {
            json!({ "holds": false, "degree": degree, "invariant_factors": factors })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(ok(json!({
        "ring": c.ring().to_string(),
        "degrees": degrees,
        "assumption_a": assumption,
    })))
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: usize,
}

impl Tally {
    fn record(&mut self, pass: bool) {
        self.checked += 1;
        if !pass {
            self.failures += 1;
        }
    }

    fn json(&self) -> Value {
        json!({ "checked": self.checked, "failures": self.failures })
    }
}

fn check_prelie(text: &str, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let file = parse_instance(text)?;
    let c = complex_of(&file)?;
    let v = c.module_arc().clone();
    let sv = Arc::new(v.suspend());
    let m1 = differential_multimap(&c);
    let mut r = rng(seed);

    let triples: Vec<_> = (0..trials)
        .map(|_| (random_element(&mut r, &v), random_element(&mut r, &v), random_element(&mut r, &v)))
        .collect();
    let graded = check_graded_system(&EndSystem, &triples)?;
    let weight = check_weight_system(&convert_graded_to_weight(EndSystem), &triples)?;

    let (mut pre_lie, mut jacobi) = (Tally::default(), Tally::default());
    for (a, b, cc) in &triples {
        for g in [Grading::Degree, Grading::Weight] {
            pre_lie.record(pre_lie_identity_holds(a, b, cc, g)?);
            jacobi.record(jacobi_holds(a, b, cc, g)?);
        }
    }

    let (mut odd_weight, mut odd_degree) = (Tally::default(), Tally::default());
    for (f, _, _) in &triples {
        let g = random_element_where(&mut r, &v, |n, i| (n as i64 + i - 1).rem_euclid(2) == 1);
        odd_weight.record(odd_square_identities(f, &g)?.holds());
        let g = random_element_where(&mut r, &v, |_, i| i.rem_euclid(2) == 1);
        odd_degree.record(odd_square_identities_degree(f, &g)?.holds());
    }

    let (mut theta_compat, mut theta_round) = (Tally::default(), Tally::default());
    for _ in 0..trials {
        let f = random_element(&mut r, &sv);
        let g = random_element(&mut r, &sv);
        let (tf, tg) = (theta(&f, &v)?, theta(&g, &v)?);
        theta_compat.record(circle(&tf, &tg)? == theta(&star(&f, &g)?, &v)?);
        theta_round.record(theta_inv(&tf)? == f);
    }

    let mut koszul = Vec::new();
    let rank = v.total_rank().max(1);
    for n in 1..=5u32 {
        if rank.pow(n) <= KOSZUL_MAX_RANK {
            koszul.push(json!({ "n": n, "holds": koszul_suspension_constant(&c, n as usize)? }));
        }
    }
    let koszul_ok = koszul.iter().all(|k| k["holds"] == json!(true));

    let mut derivation = Tally::default();
    for (f, g, _) in &triples {
        let df = prelie_differential(f, &m1)?;
        let dg = prelie_differential(g, &m1)?;
        let agrees = df == hom_differential(f, &m1)? && df == bracket(&m1, f)?;
        let squares = prelie_differential(&df, &m1)?.is_zero();
        let leibniz = prelie_differential(&circle(f, g)?, &m1)?
            == circle(&df, g)?.checked_add(&circle(f, &dg)?.signed(f.weight()))?;
        derivation.record(agrees && squares && leibniz);
    }

    let tallies = [&pre_lie, &jacobi, &odd_weight, &odd_degree, &theta_compat, &theta_round, &derivation];
    let pass = graded.passed() && weight.passed() && koszul_ok && tallies.iter().all(|t| t.failures == 0);
    Ok(verdict(
        pass,
        json!({
            "seed": seed,
            "trials": trials,
            "graded_system": { "checked": graded.checked, "failures": graded.violations.len() },
            "weight_system": { "checked": weight.checked, "failures": weight.violations.len() },
            "pre_lie_identity": pre_lie.json(),
            "jacobi": jacobi.json(),
            "odd_square_weight": odd_weight.json(),
            "odd_square_degree": odd_degree.json(),
            "theta_compatibility": theta_compat.json(),
            "theta_round_trip": theta_round.json(),
            "koszul_constant": koszul,
            "differential": derivation.json(),
        }),
    ))
}

fn check_ar(text: &str, r: Option<usize>) -> Result<Outcome, CliError> {
    let s = load(text)?;
    let n = r.unwrap_or(s.r());
    if n == 0 {
        return Err(CliError::Input("--r must be at least 1".into()));
    }
    let report = s.check_up_to(n)?;
    Ok(verdict(
        report.passed(),
        json!({
            "convention": s.convention().name(),
            "r": n,
            "relations": report.relations,
            "first_failure": report.first_failure.as_ref().map(|d| json!({ "n": d.n, "defect": map_json(&d.value) })),
        }),
    ))
}

fn hochschild(text: &str, n: usize, i: i64) -> Result<Outcome, CliError> {
    let s = load(text)?;
    let alg = s.homology_algebra()?;
    let hc = HochschildComplex::with_max_arity(alg, n.max(ainfty::hochschild::DEFAULT_MAX_ARITY));
    let h = hc.hh(n, i)?;
    Ok(ok(json!({
        "homology_module": module_to_json(hc.module()),
        "product": map_json(hc.algebra().product()),
        "n": n,
        "i": i,
        "cochains": h.cochains,
        "cocycles": h.cocycles,
        "coboundaries": h.coboundaries,
        "rank": h.rank,
        "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "representatives": h.representatives.iter().map(map_json).collect::<Vec<_>>(),
    })))
}

/// `Some(verdict)` over `F_2` when the image is small enough, else `None`.
fn exhaustive_check(s: &ArStructure, class: &MultiMap) -> Result<Option<bool>, CliError> {
    if s.complex().ring() != RingSpec::prime_field(2)? {
        return Ok(None);
    }
    let hc = HochschildComplex::new(s.homology_algebra()?);
    Ok(exhaustive_non_membership(&hc, class)?)
}

fn obstruction_json(s: &ArStructure, rep: &ObstructionReport) -> Result<Value, CliError> {
    let certificate = match rep.certificate() {
        Some(c) => json!({
            "class": map_json(c),
            "exhaustively_non_exact": exhaustive_check(s, c)?,
        }),
        None => Value::Null,
    };
    Ok(json!({
        "r": rep.r,
        "cocycle": map_json(&rep.cocycle),
        "cocycle_closed": rep.cocycle_closed,
        "class": map_json(&rep.class),
        "class_closed": rep.class_closed,
        "class_zero": rep.class_zero,
        "u": opt_map_json(rep.u.as_ref()),
        "m_prime": opt_map_json(rep.m_prime.as_ref()),
        "m_next": opt_map_json(rep.m_next.as_ref()),
        "certificate": certificate,
    }))
}

fn obstruct(text: &str, r: Option<usize>) -> Result<Outcome, CliError> {
    let s = load(text)?;
    let r = r.unwrap_or(s.r());
    let rep = lift_once(&s, r)?;
    let h = s.homology_algebra()?;
    let mut body = obstruction_json(&s, &rep)?;
    body["homology_module"] = json!(module_to_json(h.module()));
    body["lifted"] = match &rep.structure {
        Some(t) => serde_json::to_value(instance_of(t)).expect("serializable"),
        None => Value::Null,
    };
    Ok(verdict(rep.class_zero, body))
}

fn extend(text: &str, to: usize) -> Result<Outcome, CliError> {
    let s = load(text)?;
    let convention = s.convention();
    match extend_to_ainfty(&s, to)? {
        Extension::Complete(t) => {
            let t = t.convert(convention)?;
            let check = t.check_ar()?;
            Ok(Outcome {
                exit: if check.passed() { 0 } else { 1 },
                report: json!({
                    "to": to,
                    "complete": true,
                    "r": t.r(),
                    "relations": check.relations,
                    "blocked": Value::Null,
                }),
                instance: Some(to_json_text(&instance_of(&t))),
            })
        }
        Extension::Blocked { report, reached } => Ok(Outcome {
            exit: 1,
            report: json!({
                "to": to,
                "complete": false,
                "r": reached.r(),
                "relations": reached.check_ar()?.relations,
                "blocked": obstruction_json(&reached, &report)?,
                "homology_module": module_to_json(reached.homology_algebra()?.module()),
            }),
            instance: None,
        }),
    }
}

fn convert(text: &str, from: Convention, to: Convention) -> Result<Outcome, CliError> {
    let s = load(text)?;
    if s.convention() != from {
        return Err(CliError::Input(format!(
            "instance uses the {} convention, not {from}",
            s.convention()
        )));
    }
    let t = s.convert(to)?;
    Ok(Outcome {
        exit: 0,
        report: json!({ "from": from.name(), "to": to.name(), "r": t.r(), "relations": t.check_ar()?.relations }),
        instance: Some(to_json_text(&instance_of(&t))),
    })
}

/// A module in a report, for re-loading witnesses.
pub fn module_from_json(ring: RingSpec, v: &Value) -> Result<Arc<GradedModule>, CliError> {
    let dims: Vec<crate::format::DegreeDim> =
        serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("module: {e}")))?;
    Ok(Arc::new(GradedModule::new(ring, dims.into_iter().map(|d| (d.degree, d.dim)))))
}
