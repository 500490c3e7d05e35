use local_scores::estimate::{
    capture_recapture_score_estimate, poisson_pair_estimate, truncate_pair_rule_window,
    truncated_poisson_mle, zelterman_estimate, CaptureRecaptureData, PopulationEstimate,
};
use serde_json::{json, Value};

use crate::args::{CaptureRecaptureArgs, EstimatePoissonArgs};
use crate::error::{CliError, CliResult};
use crate::input::{digests, read_frequency_table, read_source};
use crate::report::{envelope, Outcome, Status};

fn parse_edge(s: &str) -> CliResult<(u64, u64)> {
    let bad = || CliError::Invalid(format!("window edge `{s}` is not of the form `y-z`"));
    let (u, v) = s.trim().split_once('-').ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
}

pub fn poisson(args: &EstimatePoissonArgs) -> CliResult<Outcome> {
    let src = read_source(&args.input)?;
    let ft = read_frequency_table(&src)?;
    let edges: Vec<(u64, u64)> = match &args.window {
        Some(list) => list.iter().map(|s| parse_edge(s)).collect::<CliResult<_>>()?,
        None => (0..=ft.max_value().unwrap_or(0)).map(|y| (y, y + 1)).collect(),
    };
    let window = truncate_pair_rule_window(&ft, &edges)?;
    let theta = match &args.window {
        Some(_) => window.estimate(args.a, args.m)?,
        None => poisson_pair_estimate(&ft, args.a, args.m)?,
    };
    let (denominator, numerator) = window.sums(args.a, args.m)?;
    let result = json!({
        "estimator": "poisson-pair",
        "theta": theta,
        "diagnostics": {
            "edges": window.edges().iter().map(|&y| [y, y + 1]).collect::<Vec<_>>(),
            "denominator": denominator,
            "numerator": numerator,
            "residual": window.residual(theta, args.a, args.m)?,
            "n": ft.n_total(),
            "sum": ft.sum_total(),
            "mean": ft.mean().ok(),
        },
    });
    let config = json!({
        "input": args.input.display().to_string(),
        "a": args.a,
        "m": args.m,
        "window": args.window,
    });
    Ok(Outcome {
        status: Status::Ok,
        report: envelope("estimate-poisson", config, digests(&[("input", &src)]).into_iter().collect(), result),
    })
}

fn estimate_json(
    name: &str,
    est: local_scores::Result<PopulationEstimate<f64>>,
    diagnostics: Value,
) -> Value {
    match est {
        Ok(e) => json!({
            "estimator": name,
            "theta": e.theta,
            "N_hat": e.population,
            "diagnostics": diagnostics,
        }),
        Err(e) => json!({ "estimator": name, "error": e.to_string() }),
    }
}

pub fn capture_recapture(args: &CaptureRecaptureArgs) -> CliResult<Outcome> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(CliError::Invalid(format!("--tol must be positive, got {}", args.tol)));
    }
    let src = read_source(&args.input)?;
    let ft = read_frequency_table(&src)?;
    let d = CaptureRecaptureData::new(args.catches as f64, ft)?;
    let counts = d.counts();
    let score = estimate_json(
        "score",
        capture_recapture_score_estimate(&d),
        json!({ "f1": counts.get(1) }),
    );
    let zelterman = estimate_json(
        "zelterman",
        zelterman_estimate(&d),
        json!({ "f1": counts.get(1), "f2": counts.get(2) }),
    );
    let mle = match truncated_poisson_mle(&d, args.tol) {
        Ok(r) => estimate_json(
            "mle",
            Ok(r.estimate),
            json!({ "residual": r.residual, "iterations": r.iterations, "tol": args.tol }),
        ),
        Err(e) => estimate_json("mle", Err(e), Value::Null),
    };
    let result = json!({
        "catches": d.catches(),
        "units": d.units(),
        "estimates": { "score": score, "zelterman": zelterman, "mle": mle },
    });
    let config = json!({
        "input": args.input.display().to_string(),
        "catches": args.catches,
        "tol": args.tol,
    });
    Ok(Outcome {
        status: Status::Ok,
        report: envelope("capture-recapture", config, digests(&[("input", &src)]).into_iter().collect(), result),
    })
}
