use qmeasure::sim::scenario::{
    scenario_repeated_measurement, scenario_two_peak, RepeatedConfig, RepeatedScheme, TwoPeakRun, WINDOW_METRIC_NOTE,
};
use qmeasure::sim::{sample_gaussian, Grid1D};
use serde_json::{json, Value};

use crate::args::{grid_points, parse_gaussian, RepeatedArgs, SchemeArg, TwoPeakArgs};
use crate::report::{csv_path, write_csv, RunReport};
use crate::{CliError, EXIT_NUMERICAL};

const SSM_SPREAD_TOL: f64 = 1e-6;

fn run_summary(run: &TwoPeakRun<f64>) -> Value {
    json!({
        "lambda": run.lambda,
        "peaks": run.peaks,
        "distribution": {
            "integral": run.distribution.integral(),
            "variance": run.distribution.variance(),
        },
    })
}

pub fn two_peak(args: &TwoPeakArgs, r: &mut RunReport) -> Result<(), CliError> {
    r.input("lambda", args.lambda);
    r.input("separation", args.sep);
    r.input("probe_width", args.probe_width);
    let rep = scenario_two_peak(args.lambda, args.sep, args.probe_width)?;
    r.result("separation", rep.separation);
    r.result("requested_probe_width", rep.requested_probe_width);
    r.result("probe_width", rep.probe_width);
    r.result("system_width", rep.system_width);
    r.result("scaled", run_summary(&rep.scaled));
    r.result("unscaled", run_summary(&rep.unscaled));
    r.result("resolved", rep.scaled.peaks.resolved);
    r.result("resolved_criterion", "valley/peak < 0.8");
    if let Some(path) = csv_path(args.csv.as_deref(), args.out.as_deref()) {
        write_csv(&path, &rep.scaled.distribution.rows())?;
        r.result("csv", path.display().to_string());
    }
    Ok(())
}

pub fn repeated(args: &RepeatedArgs, r: &mut RunReport) -> Result<(), CliError> {
    let scheme = match args.scheme {
        SchemeArg::Csm => RepeatedScheme::Csm,
        SchemeArg::Ssm => RepeatedScheme::Ssm,
    };
    let config = RepeatedConfig {
        scheme,
        rounds: args.rounds,
        lambda: args.lambda,
        p: args.p,
        seed: args.seed,
    };
    let system = parse_gaussian("system", &args.system)?;
    let probe = parse_gaussian("probe", &args.probe)?;
    let n = grid_points(None)?;
    r.input("scheme", scheme);
    r.input("rounds", args.rounds);
    r.input("seed", args.seed);
    r.input("lambda", args.lambda);
    if scheme == RepeatedScheme::Ssm {
        r.input("p", args.p);
    }
    r.input("system", system);
    r.input("probe", probe);
    r.input("grid_points", n);

    let grid = Grid1D::with_points(n)?;
    let psi = sample_gaussian(&system, grid)?;
    let phi = sample_gaussian(&probe, grid)?;
    let rep = scenario_repeated_measurement(&config, &psi, &phi)?;
    r.result("rounds", &rep.rounds);
    r.result("post_state_spread", rep.post_state_spread);
    r.result("center_spread", rep.center_spread);
    r.result(
        "resolution_window",
        json!({
            "center_spread": rep.window_center_spread,
            "union_width": rep.window_union_width,
            "note": WINDOW_METRIC_NOTE,
        }),
    );
    r.result(
        "final_state",
        json!({ "center": rep.final_state.mean(), "width": rep.final_state.variance().sqrt() }),
    );
    if scheme == RepeatedScheme::Ssm {
        r.residual("ssm_post_state_spread", rep.post_state_spread, SSM_SPREAD_TOL);
    }
    if let Some(path) = csv_path(args.csv.as_deref(), args.out.as_deref()) {
        write_csv(&path, &rep.rounds)?;
        r.result("csv", path.display().to_string());
    }
    if !r.all_residuals_pass() {
        return Err(CliError {
            code: EXIT_NUMERICAL,
            message: "post-state spread above tolerance".into(),
        });
    }
    Ok(())
}
