use std::fs;

use local_scores::estimate::fit_mrf;
use local_scores::product::{gibbs_sample, Component, GibbsConfig};
use serde_json::json;

use crate::args::{MrfFitArgs, MrfSampleArgs, ScoreArg};
use crate::error::{CliError, CliResult};
use crate::input::{digests, read_model, read_samples, read_source, sha256_hex};
use crate::report::{envelope, Outcome, Status};

pub fn fit(args: &MrfFitArgs) -> CliResult<Outcome> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(CliError::Invalid(format!("--tol must be positive, got {}", args.tol)));
    }
    let model_src = read_source(&args.model)?;
    let model = read_model(&model_src)?;
    let data_src = read_source(&args.input)?;
    let data = read_samples(&data_src, model.space())?;
    let (component, score) = match args.score {
        ScoreArg::PseudoLikelihood => (Component::Log, "pseudo-likelihood"),
        ScoreArg::RatioMatching => (Component::Brier, "ratio-matching"),
    };
    let fit = fit_mrf(&model, &data, &component, model.parameter_box(), args.tol)?;
    let result = json!({
        "family": model.family(),
        "score": score,
        "rows": data.len(),
        "theta": fit.theta,
        "objective": fit.objective,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "gap": fit.gap,
        "trace": fit.trace.iter().map(|(t, o)| json!({ "theta": t, "objective": o })).collect::<Vec<_>>(),
    });
    let config = json!({
        "model": args.model.display().to_string(),
        "input": args.input.display().to_string(),
        "score": score,
        "tol": args.tol,
        "parameter_box": model.parameter_box(),
    });
    let inputs = digests(&[("model", &model_src), ("input", &data_src)]);
    Ok(Outcome {
        status: Status::Ok,
        report: envelope("mrf-fit", config, inputs.into_iter().collect(), result),
    })
}

pub fn sample(args: &MrfSampleArgs) -> CliResult<Outcome> {
    let model_src = read_source(&args.model)?;
    let model = read_model(&model_src)?;
    let cfg = GibbsConfig {
        samples: args.samples,
        seed: args.seed,
        burn_in: args.burn_in,
        thin: args.thin,
    };
    let data = gibbs_sample(&model, &args.theta, cfg)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=model.space().k()).map(|i| format!("x{i}")).collect();
    let write_err = |e: csv::Error| CliError::Invalid(format!("cannot encode samples: {e}"));
    writer.write_record(&header).map_err(write_err)?;
    for row in data.rows() {
        writer
            .write_record(row.iter().map(|v| v.to_string()))
            .map_err(write_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Invalid(format!("cannot encode samples: {e}")))?;
    fs::write(&args.samples_out, &bytes).map_err(|source| CliError::Write {
        path: args.samples_out.clone(),
        source,
    })?;
    let result = json!({
        "family": model.family(),
        "rows": data.len(),
        "samples_out": {
            "path": args.samples_out.display().to_string(),
            "sha256": sha256_hex(&bytes),
        },
    });
    let config = json!({
        "model": args.model.display().to_string(),
        "theta": args.theta,
        "samples": args.samples,
        "seed": args.seed,
        "burn_in": args.burn_in,
        "thin": args.thin,
    });
    Ok(Outcome {
        status: Status::Ok,
        report: envelope("mrf-sample", config, digests(&[("model", &model_src)]).into_iter().collect(), result),
    })
}
