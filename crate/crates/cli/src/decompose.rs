use qmeasure::cv::{
    decompose_single_mode, decompose_two_mode, decompose_von_neumann, hamiltonian_params, ssm_alternative_sequence,
};
use qmeasure::CoordTransform64;
use serde_json::{json, Value};

use crate::args::{DecomposeArgs, Family, Preset};
use crate::report::{to_value, RunReport};
use crate::{CliError, EXIT_NUMERICAL};

const VON_NEUMANN_TOL: f64 = 1e-12;
const OPTICAL_TOL: f64 = 1e-10;

impl Family {
    fn key(self) -> &'static str {
        match self {
            Family::VonNeumann => "von_neumann",
            Family::TwoMode => "two_mode",
            Family::SingleMode => "single_mode",
            Family::Hamiltonian => "hamiltonian",
            Family::SsmAlternative => "ssm_alternative",
            Family::All => "all",
        }
    }
}

/// Round-trip error relative to the target's largest entry (at least 1).
fn round_trip(target: &CoordTransform64, got: &CoordTransform64) -> f64 {
    let scale = target.to_array().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    target.max_abs_diff(got) / scale
}

struct FamilyResult {
    body: Value,
    residual: f64,
    tolerance: f64,
}

fn decompose_family(
    family: Family,
    target: &CoordTransform64,
    ssm: Option<(f64, u8)>,
) -> Result<FamilyResult, CliError> {
    if family != Family::Hamiltonian {
        target.check_unitary()?;
    }
    let (body, recomposed, tolerance) = match family {
        Family::VonNeumann => {
            let v = decompose_von_neumann(target)?;
            (json!({ "params": v, "gates": v.gate_sequence() }), v.transform(), VON_NEUMANN_TOL)
        }
        Family::TwoMode => {
            let o = decompose_two_mode(target)?;
            (json!({ "params": o, "gates": o.gate_sequence() }), o.transform(), OPTICAL_TOL)
        }
        Family::SingleMode => {
            let o = decompose_single_mode(target)?;
            (json!({ "params": o, "gates": o.gate_sequence() }), o.transform(), OPTICAL_TOL)
        }
        Family::Hamiltonian => {
            let h = hamiltonian_params(target)?;
            let mut body = to_value(h);
            body["D"] = json!(h.d());
            body["generator"] = json!("K = [[u, v], [w, -u]], exp(-K) = [[a, b], [c, d]]");
            (body, h.transform(), OPTICAL_TOL)
        }
        Family::SsmAlternative => {
            let (lambda, p) =
                ssm.ok_or_else(|| CliError::validation("family ssm-alternative requires --preset ssm"))?;
            let seq = ssm_alternative_sequence(lambda, p)?;
            let t = seq.compose();
            (json!({ "gates": seq }), t, OPTICAL_TOL)
        }
        Family::All => unreachable!("expanded by the caller"),
    };
    let mut body = body;
    body["recomposed"] = to_value(recomposed);
    Ok(FamilyResult {
        body,
        residual: round_trip(target, &recomposed),
        tolerance,
    })
}

pub fn run(args: &DecomposeArgs, report: &mut RunReport) -> Result<(), CliError> {
    let target = args.target.resolve(report)?;
    report.input("family", args.family.key());
    let ssm = (args.target.preset == Some(Preset::Ssm)).then_some((args.target.lambda, args.target.p));

    if args.family != Family::All {
        let r = decompose_family(args.family, &target, ssm)?;
        report.result(args.family.key(), r.body);
        report.residual(&format!("{}.round_trip", args.family.key()), r.residual, r.tolerance);
    } else {
        let mut families = vec![Family::VonNeumann, Family::TwoMode, Family::SingleMode, Family::Hamiltonian];
        if ssm.is_some() {
            families.push(Family::SsmAlternative);
        }
        for f in families {
            match decompose_family(f, &target, ssm) {
                Ok(mut r) => {
                    r.body["status"] = json!("ok");
                    report.result(f.key(), r.body);
                    report.residual(&format!("{}.round_trip", f.key()), r.residual, r.tolerance);
                }
                Err(e) => report.result(
                    f.key(),
                    json!({ "status": "error", "class": e.class_name(), "message": e.message }),
                ),
            }
        }
    }
    if !report.all_residuals_pass() {
        return Err(CliError {
            code: EXIT_NUMERICAL,
            message: "round-trip residual above tolerance".into(),
        });
    }
    Ok(())
}
