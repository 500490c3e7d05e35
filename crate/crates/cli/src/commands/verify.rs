use std::collections::BTreeSet;
use std::sync::Arc;

use local_scores::scoring::ScoringRule;
use local_scores::space::{check_condition_disjoint, NeighborhoodSystem, OutcomeSpace};
use local_scores::verify::{
    check_entropy_gradient, check_homogeneity, check_key_equation, check_locality,
    check_mixed_partials, check_properness, check_rule_homogeneity, check_supergradient,
    simplex_probes, KeyClass,
};
use serde_json::{json, Map, Value};

use crate::args::{CheckName, VerifyRuleArgs};
use crate::error::{CliError, CliResult};
use crate::input::{digests, read_graph, read_source};
use crate::report::{check_json, envelope, Outcome, Status};

fn check_label(c: CheckName) -> &'static str {
    match c {
        CheckName::Properness => "properness",
        CheckName::Homogeneity => "homogeneity",
        CheckName::Locality => "locality",
        CheckName::Supergradient => "supergradient",
        CheckName::Key => "key",
        CheckName::MixedPartials => "mixed-partials",
        CheckName::EntropyGradient => "entropy-gradient",
        CheckName::ConditionDisjoint => "condition-disjoint",
    }
}

fn locality<'a>(
    rule: &'a ScoringRule<f64>,
    graph: Option<&'a NeighborhoodSystem>,
) -> CliResult<&'a NeighborhoodSystem> {
    graph.or(rule.locality()).ok_or_else(|| {
        CliError::Invalid(format!(
            "rule `{}` declares no locality structure; pass --graph",
            rule.name()
        ))
    })
}

fn labels(space: &OutcomeSpace, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter().map(|&x| space.label(x).to_owned()).collect()
}

fn run_check(
    check: CheckName,
    rule: &ScoringRule<f64>,
    ns: Option<&NeighborhoodSystem>,
    args: &VerifyRuleArgs,
) -> CliResult<Vec<Value>> {
    let name = check_label(check);
    let n = rule.space().size();
    let out = match check {
        CheckName::Properness => vec![check_json(name, &check_properness(rule, args.grid, args.tol)?)],
        CheckName::Homogeneity => {
            let mut v = vec![check_json(name, &check_rule_homogeneity(rule, args.probes, args.seed))];
            if rule.is_homogeneous() {
                let h = rule.entropy_function()?;
                let r = check_homogeneity("entropy", |a: &[f64]| h.value(a), n, 1, args.probes, args.seed);
                v.push(check_json(name, &r));
            }
            v
        }
        CheckName::Locality => {
            vec![check_json(name, &check_locality(rule, locality(rule, ns)?, args.probes, args.seed)?)]
        }
        CheckName::Supergradient => {
            let h = rule.entropy_function()?;
            vec![check_json(name, &check_supergradient(&h, rule, args.probes, args.seed))]
        }
        CheckName::EntropyGradient => {
            let h = rule.entropy_function()?;
            vec![check_json(name, &check_entropy_gradient(&h, rule, args.probes, args.seed))]
        }
        CheckName::MixedPartials => {
            vec![check_json(name, &check_mixed_partials(rule, args.probes, args.seed))]
        }
        CheckName::Key => {
            let probes = simplex_probes::<f64>(n, args.probes, args.seed);
            let k = check_key_equation(rule, &probes);
            let mut v = check_json(name, &k.report);
            let (class, lambda) = match k.class {
                KeyClass::Key => ("key", Some(0.0)),
                KeyClass::ProperWithLambda(l) => ("proper-with-lambda", Some(l)),
                KeyClass::Neither => ("neither", None),
            };
            let obj = v.as_object_mut().expect("check report is an object");
            obj.insert("class".into(), json!(class));
            obj.insert("lambda".into(), json!(lambda));
            obj.insert("lambdas".into(), json!(k.lambdas));
            vec![v]
        }
        CheckName::ConditionDisjoint => {
            let ns = locality(rule, ns)?;
            let space = ns.space();
            let witness = check_condition_disjoint(ns);
            vec![json!({
                "check": name,
                "passed": witness.is_some(),
                "witness": witness.map(|w| json!({
                    "y1": space.label(w.y1),
                    "y2": space.label(w.y2),
                    "rho1": labels(space, &w.rho1),
                    "rho2": labels(space, &w.rho2),
                    "outside": space.label(w.outside),
                })),
            })]
        }
    };
    Ok(out)
}

pub fn run(args: &VerifyRuleArgs) -> CliResult<Outcome> {
    let mut inputs = Map::new();
    let (space, graph): (Arc<OutcomeSpace>, _) = match &args.graph {
        Some(path) => {
            let src = read_source(path)?;
            let g = read_graph(&src)?;
            inputs.extend(digests(&[("graph", &src)]));
            (g.space().clone(), Some(g.neighborhood_system()))
        }
        None => (OutcomeSpace::integers(0, args.outcomes)?, None),
    };
    let rule = args.rule.build::<f64>(space.clone())?;
    let checks: BTreeSet<CheckName> = args.check.iter().copied().collect();
    let mut reports = Vec::new();
    for &c in &checks {
        reports.extend(run_check(c, &rule, graph.as_ref(), args)?);
    }
    let passed = reports.iter().all(|r| r["passed"] == json!(true));
    let result = json!({
        "rule": rule.name(),
        "outcomes": space.labels(),
        "passed": passed,
        "checks": reports,
    });
    let config = json!({
        "rule": args.rule.to_string(),
        "checks": checks.iter().map(|&c| check_label(c)).collect::<Vec<_>>(),
        "outcomes": space.size(),
        "graph": args.graph.as_ref().map(|p| p.display().to_string()),
        "grid": args.grid,
        "tol": args.tol,
        "probes": args.probes,
        "seed": args.seed,
    });
    Ok(Outcome {
        status: if passed { Status::Ok } else { Status::CheckFailed },
        report: envelope("verify-rule", config, inputs, result),
    })
}
