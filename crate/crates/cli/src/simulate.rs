use qmeasure::sim::closed_form::{gaussian_marginal, scaled_born};
use qmeasure::sim::grid::MAX_POINTS;
use qmeasure::sim::{apply_transform_on, outcome_distribution, postmeasurement_state, sample_gaussian, Grid1D, WaveFunction};
use qmeasure::{CoordTransform64, GaussianSpec64};
use serde_json::json;

use crate::args::{grid_points, parse_gaussian, Preset, SimulateArgs};
use crate::report::{csv_path, write_csv, RunReport};
use crate::{CliError, EXIT_NUMERICAL};

const DISTRIBUTION_L1_TOL: f64 = 1e-3;
const POST_STATE_L2_TOL: f64 = 1e-5;
/// Points used to sample ψ and φ on their own grids.
const SOURCE_POINTS: usize = 2048;
/// Source grids cover center ± this many widths.
const SOURCE_SPAN: f64 = 10.0;
const X_SPAN: f64 = 8.0;

/// Grid for the integrated coordinate x. At fixed y the joint density varies
/// on the scales width_ψ/|a| and width_φ/|c|; x itself is Gaussian with the
/// mean and spread computed from the inverse substitution.
fn x_grid(t: &CoordTransform64, s: &GaussianSpec64, p: &GaussianSpec64) -> Result<Grid1D<f64>, CliError> {
    let det = t.det();
    let mean = (t.d * s.center - t.b * p.center) / det;
    let std = ((t.d * s.width).powi(2) + (t.b * p.width).powi(2)).sqrt() / det.abs();
    let mut scale = std;
    if t.a != 0.0 {
        scale = scale.min(s.width / t.a.abs());
    }
    if t.c != 0.0 {
        scale = scale.min(p.width / t.c.abs());
    }
    let h = scale / 4.0;
    let n = (2.0 * X_SPAN * std / h).ceil() as usize + 1;
    if n > MAX_POINTS {
        return Err(CliError::validation(format!(
            "resolving the joint state needs {n} points along x (limit {MAX_POINTS}); widen the narrowest input"
        )));
    }
    Ok(Grid1D::new(mean - X_SPAN * std, mean + X_SPAN * std, n.max(256))?)
}

fn source(spec: &GaussianSpec64) -> Result<WaveFunction<f64>, CliError> {
    let half = SOURCE_SPAN * spec.width;
    let grid = Grid1D::new(spec.center - half, spec.center + half, SOURCE_POINTS)?;
    Ok(sample_gaussian(spec, grid)?)
}

fn post_state_formula(preset: Option<Preset>) -> &'static str {
    match preset {
        Some(Preset::Vnm) => "psi'(x) ~ psi(x) phi(a - lambda x)",
        Some(Preset::Csm) => "psi'(x) ~ phi(a - lambda x)",
        Some(Preset::Ssm) => "psi'(x) ~ phi((-1)^(p+1) lambda x), independent of a",
        None => "psi'(x) ~ psi(a_x x + b a) phi(c x + d a)",
    }
}

pub fn run(args: &SimulateArgs, r: &mut RunReport) -> Result<(), CliError> {
    let t = args.target.resolve(r)?;
    let system = parse_gaussian("system", &args.system)?;
    let probe = match args.probe_width {
        Some(w) => parse_gaussian("probe-width", &format!("0,{w}"))?,
        None => parse_gaussian("probe", &args.probe)?,
    };
    let n = grid_points(args.grid.grid_points)?;
    let out_grid = Grid1D::symmetric(args.grid.grid_half_width, n)?;
    r.input("system", system);
    r.input("probe", probe);
    r.input("grid", json!({ "half_width": args.grid.grid_half_width, "points": n }));

    let xg = x_grid(&t, &system, &probe)?;
    let psi = source(&system)?;
    let phi = source(&probe)?;
    let joint = apply_transform_on(&t, &psi, &phi, xg, out_grid)?;
    let dist = outcome_distribution(&joint);

    let closed = gaussian_marginal(&t, &system, &probe, out_grid);
    r.residual("l1_to_gaussian_closed_form", dist.l1_distance(&closed)?, DISTRIBUTION_L1_TOL);
    let preset = args.target.preset;
    let lambda = args.target.lambda;
    match preset {
        Some(Preset::Csm | Preset::Ssm) => {
            let born = scaled_born(&psi, lambda, out_grid);
            r.residual("l1_to_scaled_born", dist.l1_distance(&born)?, DISTRIBUTION_L1_TOL);
        }
        Some(Preset::Vnm) => {
            // finite probe width blurs the scaled Born distribution; reported, not judged
            let born = scaled_born(&psi, lambda, out_grid);
            let rescaled = dist.rescaled(lambda)?;
            r.result(
                "vnm",
                json!({
                    "l1_to_scaled_born": dist.l1_distance(&born)?,
                    "rescaled_outcome": {
                        "note": "distribution of a/lambda",
                        "mean": rescaled.mean(),
                        "variance": rescaled.variance(),
                    },
                    "system": { "mean": system.center, "variance": system.width * system.width },
                }),
            );
        }
        None => {}
    }

    // nearest outcome node to the mean, so no interpolation across y is involved
    let k = ((dist.mean() - out_grid.x_min()) / out_grid.spacing()).round().clamp(0.0, (n - 1) as f64) as usize;
    let a0 = out_grid.point(k);
    let post = postmeasurement_state(&joint, a0)?;
    let want = WaveFunction::from_fn(xg, |x| system.amplitude(t.a * x + t.b * a0) * probe.amplitude(t.c * x + t.d * a0))
        .normalized()?;
    r.residual("post_state_l2_up_to_phase", post.l2_distance_up_to_phase(&want)?, POST_STATE_L2_TOL);

    r.result(
        "distribution",
        json!({
            "integral": dist.integral(),
            "mean": dist.mean(),
            "variance": dist.variance(),
            "closed_form": { "mean": closed.mean(), "variance": closed.variance() },
        }),
    );
    r.result(
        "joint",
        json!({
            "norm": joint.norm_sqr(),
            "source_grid_misses": joint.off_grid_samples(),
            "x_grid": { "min": xg.x_min(), "max": xg.x_max(), "points": xg.len() },
        }),
    );
    r.result(
        "post_state",
        json!({
            "outcome": a0,
            "formula": post_state_formula(preset),
            "center": post.mean(),
            "width": post.variance().sqrt(),
        }),
    );

    if let Some(path) = csv_path(args.csv.as_deref(), args.out.as_deref()) {
        write_csv(&path, &dist.rows())?;
        r.result("csv", path.display().to_string());
    }
    if !r.all_residuals_pass() {
        return Err(CliError {
            code: EXIT_NUMERICAL,
            message: "simulation residual above tolerance".into(),
        });
    }
    Ok(())
}
