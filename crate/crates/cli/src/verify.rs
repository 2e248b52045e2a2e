use std::f64::consts::{FRAC_PI_2, PI};

use qmeasure::cv::{csm, hamiltonian_params, ssm, ssm_p1_quadratic_form};
use qmeasure::linalg::equal_up_to_global_phase;
use qmeasure::qubit::{build_unitary, hamiltonian_generator, pulse_sequence, QubitScheme};
use qmeasure::sim::{evolve_quadratic_fock, parity_via_fock, sample_gaussian, GaussianSpec, Grid1D, JointWaveFunction, WaveFunction};
use serde_json::json;

use crate::args::{Suite, VerifyArgs};
use crate::report::RunReport;
use crate::{CliError, EXIT_NUMERICAL};

const QUBIT_TOL: f64 = 1e-10;
const OZAWA_TOL: f64 = 1e-10;
const APPENDIX_B_TOL: f64 = 1e-4;
const PARITY_TOL: f64 = 1e-6;
const PARITY_N_FOCK: usize = 48;

impl Suite {
    fn key(self) -> &'static str {
        match self {
            Suite::QubitHamiltonians => "qubit_hamiltonians",
            Suite::PulseSequences => "pulse_sequences",
            Suite::Ozawa => "ozawa",
            Suite::AppendixB => "appendix_b",
            Suite::Parity => "parity",
            Suite::All => "all",
        }
    }
}

fn qubit_hamiltonians(r: &mut RunReport) -> Result<(), CliError> {
    let a = hamiltonian_generator::<f64>(QubitScheme::Cnot);
    let ua = a.unitary()?;
    r.residual("qubit_hamiltonians.exp_i_pi_A_minus_U_cnot", ua.max_abs_diff(&build_unitary(QubitScheme::Cnot))?, QUBIT_TOL);
    let a2 = a.generator.matmul(&a.generator)?;
    r.residual("qubit_hamiltonians.A_squared_minus_A", a2.max_abs_diff(&a.generator)?, QUBIT_TOL);

    let b = hamiltonian_generator::<f64>(QubitScheme::Dcnot);
    let ub = b.unitary()?;
    r.residual("qubit_hamiltonians.exp_2i_pi_3_B_minus_U_dcnot", ub.max_abs_diff(&build_unitary(QubitScheme::Dcnot))?, QUBIT_TOL);
    let b3 = b.generator.powi(3)?;
    r.residual("qubit_hamiltonians.B_cubed_minus_B", b3.max_abs_diff(&b.generator)?, QUBIT_TOL);

    let s = hamiltonian_generator::<f64>(QubitScheme::Swap);
    let m = equal_up_to_global_phase(&s.unitary()?, &build_unitary::<f64>(QubitScheme::Swap), QUBIT_TOL)?;
    r.residual("qubit_hamiltonians.exp_i_pi_4_SS_vs_U_swap_up_to_phase", m.residual, QUBIT_TOL);
    r.result(
        "qubit_hamiltonians",
        json!({
            "angles": { "cnot": a.angle, "dcnot": b.angle, "swap": s.angle },
            "swap_global_phase": m.phase,
        }),
    );
    Ok(())
}

fn pulse_sequences(r: &mut RunReport) -> Result<(), CliError> {
    let mut phases = serde_json::Map::new();
    for scheme in [QubitScheme::Cnot, QubitScheme::Dcnot] {
        let seq = pulse_sequence::<f64>(scheme)?;
        let m = equal_up_to_global_phase(&seq.compose()?, &build_unitary(scheme), QUBIT_TOL)?;
        r.residual(&format!("pulse_sequences.{}_up_to_phase", scheme.name().to_lowercase()), m.residual, QUBIT_TOL);
        let pulses: Vec<_> = seq.pulses.iter().map(|p| json!({ "pulse": p.name(), "params": p.params() })).collect();
        phases.insert(scheme.name().to_lowercase(), json!({ "global_phase": m.phase, "pulses": pulses }));
    }
    phases.insert("swap".into(), json!("no pulse sequence"));
    r.result("pulse_sequences", phases);
    Ok(())
}

fn ozawa(lambdas: &[f64], r: &mut RunReport) -> Result<(), CliError> {
    let k = PI / (3.0 * 3f64.sqrt());
    let mut rows = Vec::new();
    let (mut csm_worst, mut ssm_worst, mut exp_worst) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &l in lambdas {
        let tc = csm(l)?;
        let hc = hamiltonian_params(&tc)?;
        csm_worst = csm_worst
            .max((hc.u - k).abs())
            .max((hc.v + 2.0 * k / l).abs())
            .max((hc.w - 2.0 * k * l).abs());
        let ts = ssm(l, 0)?;
        let hs = hamiltonian_params(&ts)?;
        ssm_worst = ssm_worst
            .max(hs.u.abs())
            .max((hs.v + PI / (2.0 * l)).abs())
            .max((hs.w - PI * l / 2.0).abs());
        exp_worst = exp_worst.max(hc.transform().max_abs_diff(&tc)).max(hs.transform().max_abs_diff(&ts));
        rows.push(json!({ "lambda": l, "csm": hc, "ssm_p0": hs }));
    }
    r.residual("ozawa.csm_uvw", csm_worst, OZAWA_TOL);
    r.residual("ozawa.ssm_uvw", ssm_worst, OZAWA_TOL);
    r.residual("ozawa.reexponentiation", exp_worst, OZAWA_TOL);
    r.result("ozawa", rows);
    Ok(())
}

fn appendix_b(n_fock: usize, r: &mut RunReport) -> Result<(), CliError> {
    let grid = Grid1D::symmetric(10.0, 256)?;
    let sigma0 = 0.5_f64.sqrt();
    let mut worst = 0.0_f64;
    let mut rows = Vec::new();
    for lam in [1.0_f64, 2.0] {
        let sp = GaussianSpec::real(0.0, sigma0 / lam.sqrt())?;
        let sq = GaussianSpec::real(0.0, sigma0 * lam.sqrt())?;
        let psi = sample_gaussian(&sp, grid)?;
        let phi = sample_gaussian(&sq, grid)?;
        let evolved = evolve_quadratic_fock(&ssm_p1_quadratic_form(lam)?, FRAC_PI_2, &psi, &phi, n_fock)?;
        let xs = grid.points();
        let samples = xs
            .iter()
            .flat_map(|&x| xs.iter().map(move |&y| sp.amplitude(y / lam) * sq.amplitude(lam * x)))
            .collect();
        let want = JointWaveFunction::new(grid, grid, samples)?;
        let d = evolved.l2_distance_up_to_phase(&want)?;
        worst = worst.max(d);
        rows.push(json!({ "lambda": lam, "l2_up_to_phase": d }));
    }
    r.residual("appendix_b.swap_with_scaling_l2", worst, APPENDIX_B_TOL);
    r.result("appendix_b", json!({ "n_fock": n_fock, "cases": rows }));
    Ok(())
}

fn parity(r: &mut RunReport) -> Result<(), CliError> {
    let grid = Grid1D::symmetric(10.0, 512)?;
    let spec = GaussianSpec::real(0.7, 0.5_f64.sqrt())?;
    let psi = sample_gaussian(&spec, grid)?;
    let reflected = WaveFunction::from_fn(grid, |x| spec.amplitude(-x)).normalized()?;
    let once = parity_via_fock(&psi, PARITY_N_FOCK)?;
    let twice = parity_via_fock(&once, PARITY_N_FOCK)?;
    r.residual("parity.reflection_l2", once.l2_distance(&reflected)?, PARITY_TOL);
    r.residual("parity.squared_minus_identity_l2", twice.l2_distance(&psi)?, PARITY_TOL);
    r.result("parity", json!({ "n_fock": PARITY_N_FOCK, "state": spec }));
    Ok(())
}

pub fn run(args: &VerifyArgs, r: &mut RunReport) -> Result<(), CliError> {
    r.input("suite", args.suite.key());
    let all = args.suite == Suite::All;
    if all || args.suite == Suite::QubitHamiltonians {
        qubit_hamiltonians(r)?;
    }
    if all || args.suite == Suite::PulseSequences {
        pulse_sequences(r)?;
    }
    if all || args.suite == Suite::Ozawa {
        r.input("lambdas", &args.lambdas);
        ozawa(&args.lambdas, r)?;
    }
    if all || args.suite == Suite::AppendixB {
        r.input("n_fock", args.n_fock);
        appendix_b(args.n_fock, r)?;
    }
    if all || args.suite == Suite::Parity {
        parity(r)?;
    }
    let failed: Vec<_> = r
        .residuals
        .iter()
        .filter(|(_, v)| v["pass"] != json!(true))
        .map(|(k, _)| k.clone())
        .collect();
    for (k, v) in &r.residuals {
        let mark = if v["pass"] == json!(true) { "ok  " } else { "FAIL" };
        let (value, tol) = (v["value"].as_f64().unwrap_or(f64::NAN), v["tolerance"].as_f64().unwrap_or(f64::NAN));
        eprintln!("{mark} {k}: {value:.3e} (tol {tol:.0e})");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_NUMERICAL,
            message: format!("residuals above tolerance: {}", failed.join(", ")),
        })
    }
}
