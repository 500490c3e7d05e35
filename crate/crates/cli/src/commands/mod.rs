mod decompose;
mod estimate;
mod mrf;
mod verify;

use crate::args::Command;
use crate::error::CliResult;
use crate::report::Outcome;

pub fn dispatch(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::EstimatePoisson(a) => estimate::poisson(a),
        Command::CaptureRecapture(a) => estimate::capture_recapture(a),
        Command::MrfFit(a) => mrf::fit(a),
        Command::MrfSample(a) => mrf::sample(a),
        Command::VerifyRule(a) => verify::run(a),
        Command::Decompose(a) => decompose::run(a),
    }
}
