use local_scores::verify::{mobius_decompose, random_weights, Anchor};
use serde_json::json;

use crate::args::{AnchorArg, DecomposeArgs};
use crate::error::CliResult;
use crate::input::{digests, read_graph, read_source};
use crate::report::{envelope, Outcome, Status};

pub fn run(args: &DecomposeArgs) -> CliResult<Outcome> {
    let src = read_source(&args.graph)?;
    let graph = read_graph(&src)?;
    let space = graph.space().clone();
    let n = space.size();
    let rule = args.rule.build::<f64>(space.clone())?;
    let h = rule.entropy_function()?;
    let (anchor, anchor_name) = match args.anchor {
        AnchorArg::Zero => (Anchor::Zero, "zero"),
        AnchorArg::Ones => (Anchor::Ones, "ones"),
    };
    let probes = random_weights::<f64>(n, args.probes, args.seed);
    let dec = mobius_decompose(&h, &graph, &anchor, &probes)?;
    let label_set = |set: &std::collections::BTreeSet<usize>| -> Vec<&str> {
        set.iter().map(|&x| space.label(x)).collect()
    };
    let passed = dec.passed();
    let result = json!({
        "rule": rule.name(),
        "outcomes": space.labels(),
        "anchor": dec.anchor,
        "incomplete_residual": dec.incomplete_residual,
        "reconstruction_error": dec.reconstruction_error,
        "homogeneity_violation": dec.homogeneity_violation,
        "nonzero_terms": dec.nonzero_terms.iter().map(label_set).collect::<Vec<_>>(),
        "witnesses": dec.witnesses.iter().map(|w| {
            let (probe, subset) = w.input.split_at(n);
            let subset: Vec<&str> = subset.iter().map(|&x| space.label(x as usize)).collect();
            json!({ "probe": probe, "subset": subset, "observed": w.observed })
        }).collect::<Vec<_>>(),
        "passed": passed,
    });
    let config = json!({
        "graph": args.graph.display().to_string(),
        "rule": args.rule.to_string(),
        "anchor": anchor_name,
        "probes": args.probes,
        "seed": args.seed,
    });
    Ok(Outcome {
        status: if passed { Status::Ok } else { Status::CheckFailed },
        report: envelope("decompose", config, digests(&[("graph", &src)]).into_iter().collect(), result),
    })
}
