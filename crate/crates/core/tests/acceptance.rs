//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmeasure::cv::{
    self, decompose_single_mode, decompose_two_mode, decompose_von_neumann, hamiltonian_params, CoordTransform,
    CvGate, GateSequence,
};
use qmeasure::linalg::{matrix_exponential, ComplexMatrix};
use qmeasure::qubit::{self, QubitScheme, QubitState};
use qmeasure::sim::scenario::{scenario_repeated_measurement, scenario_two_peak, RepeatedConfig, RepeatedScheme};
use qmeasure::sim::snr::snr;
use qmeasure::sim::{
    apply_transform, evolve_quadratic_fock, gaussian_superposition, outcome_distribution, parity_via_fock,
    postmeasurement_state, sample_gaussian, GaussianSpec, Grid1D, JointWaveFunction, WaveFunction,
};

type M = ComplexMatrix<f64>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- oracles

/// 4×4 permutation matrix sending basis index j to f(j).
fn permutation(f: impl Fn(usize) -> usize) -> M {
    let mut m = M::zeros(4, 4);
    for j in 0..4 {
        m[(f(j), j)] = C::new(1.0, 0.0);
    }
    m
}

fn bits(j: usize) -> (usize, usize) {
    (j / 2, j % 2)
}

fn u_cnot() -> M {
    permutation(|j| {
        let (s, p) = bits(j);
        2 * s + (p ^ s)
    })
}

fn u_dcnot() -> M {
    permutation(|j| {
        let (s, p) = bits(j);
        let s2 = s ^ p;
        2 * s2 + (p ^ s2)
    })
}

fn u_swap() -> M {
    permutation(|j| {
        let (s, p) = bits(j);
        2 * p + s
    })
}

fn max_diff(a: &M, b: &M) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// max|a − e^{iθ}b| with θ fixed by the largest entry of b.
fn phase_diff(a: &M, b: &M) -> (f64, f64) {
    let (k, _) = b
        .as_slice()
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bk, bv), (k, z)| if z.norm() > bv { (k, z.norm()) } else { (bk, bv) });
    let ph = a.as_slice()[k] / b.as_slice()[k];
    let ph = ph / ph.norm();
    let d = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - ph * y).norm())
        .fold(0.0, f64::max);
    (d, ph.arg())
}

fn paulis() -> [M; 4] {
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    [
        M::identity(2),
        M::from_vec(2, 2, vec![z, o, o, z]).unwrap(),
        M::from_vec(2, 2, vec![z, -i, i, z]).unwrap(),
        M::from_vec(2, 2, vec![o, z, z, -o]).unwrap(),
    ]
}

/// 2×2 substitution matrix of a named gate, straight from the gate table.
fn gate_table(g: &CvGate<f64>) -> [f64; 4] {
    match *g {
        CvGate::Vxpy(a) => [1.0, 0.0, -a, 1.0],
        CvGate::Vypx(b) => [1.0, -b, 0.0, 1.0],
        CvGate::ParityY => [1.0, 0.0, 0.0, -1.0],
        CvGate::ParityX => [-1.0, 0.0, 0.0, 1.0],
        CvGate::Rot(t) => [t.cos(), t.sin(), -t.sin(), t.cos()],
        CvGate::TwoModeSqueeze(r) => [r.cosh(), r.sinh(), r.sinh(), r.cosh()],
        CvGate::SqueezeX(r) => [r.exp(), 0.0, 0.0, 1.0],
        CvGate::SqueezeY(r) => [1.0, 0.0, 0.0, r.exp()],
    }
}

/// Substituting gate after gate: the running matrix multiplies on the right.
fn recompose(seq: &GateSequence<f64>) -> [f64; 4] {
    seq.gates.iter().fold([1.0, 0.0, 0.0, 1.0], |m, g| {
        let n = gate_table(g);
        [
            m[0] * n[0] + m[1] * n[2],
            m[0] * n[1] + m[1] * n[3],
            m[2] * n[0] + m[3] * n[2],
            m[2] * n[1] + m[3] * n[3],
        ]
    })
}

fn abcd_diff(m: [f64; 4], t: &CoordTransform<f64>) -> f64 {
    m.iter().zip(t.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

// --------------------------------------------------------------- criteria

fn c1_qubit_hamiltonians() -> Outcome {
    let [id, _x, _y, z] = paulis();
    let x = &paulis()[1];
    // Â = (I − σz) ⊗ (I − σx) / 4 is a projector: exp(iπÂ) = I − 2Â
    let a = (&id - &z).tensor(&(&id - x)).scale_real(0.25);
    let gen_a = qubit::hamiltonian_generator::<f64>(QubitScheme::Cnot);
    let e_a = matrix_exponential(&gen_a.generator, C::new(0.0, gen_a.angle)).unwrap();
    let closed_a = &M::identity(4) - &a.scale_real(2.0);
    let r_a = max_diff(&e_a, &u_cnot()).max(max_diff(&closed_a, &u_cnot())).max(max_diff(&gen_a.generator, &a));

    // B³ = B: exp(iθB) = I + i sinθ B + (cosθ − 1)B²
    let gen_b = qubit::hamiltonian_generator::<f64>(QubitScheme::Dcnot);
    let b = &gen_b.generator;
    let th = 2.0 * PI / 3.0;
    let b2 = b.matmul(b).unwrap();
    let closed_b = &(&M::identity(4) + &b.scale(C::new(0.0, th.sin()))) + &b2.scale_real(th.cos() - 1.0);
    let e_b = matrix_exponential(b, C::new(0.0, gen_b.angle)).unwrap();
    let r_b = max_diff(&e_b, &u_dcnot()).max(max_diff(&closed_b, &u_dcnot()));

    let gen_s = qubit::hamiltonian_generator::<f64>(QubitScheme::Swap);
    let e_s = matrix_exponential(&gen_s.generator, C::new(0.0, gen_s.angle)).unwrap();
    let (r_s, phase) = phase_diff(&e_s, &u_swap());

    let worst = r_a.max(r_b).max(r_s);
    outcome(
        worst < 1e-10 && (gen_a.angle - PI).abs() < 1e-15,
        format!("CNOT {r_a:.1e}, DCNOT {r_b:.1e}, SWAP {r_s:.1e} (phase {phase:.6}); tol 1e-10"),
    )
}

fn c2_pulse_sequences() -> Outcome {
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for (scheme, target) in [(QubitScheme::Cnot, u_cnot()), (QubitScheme::Dcnot, u_dcnot())] {
        let u = qubit::pulse_sequence::<f64>(scheme).unwrap().compose().unwrap();
        let (d, ph) = phase_diff(&u, &target);
        worst = worst.max(d);
        parts.push(format!("{} {d:.1e} (phase {ph:.4})", scheme.name()));
    }
    outcome(worst < 1e-10, format!("{}; tol 1e-10", parts.join(", ")))
}

fn c3_kraus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut completeness: f64 = 0.0;
    let mut closed: f64 = 0.0;
    let ket = |a: C, b: C| M::from_vec(2, 1, vec![a, b]).unwrap();
    let plus = ket(C::new(1.0, 0.0), C::new(0.0, 0.0));
    let minus = ket(C::new(0.0, 0.0), C::new(1.0, 0.0));
    for _ in 0..200 {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let probe = QubitState::normalized(C::new(v[0], v[1]), C::new(v[2], v[3])).unwrap();
        let (c, d) = (probe.amp_plus, probe.amp_minus);
        for scheme in QubitScheme::ALL {
            let k = qubit::kraus_operators(scheme, &probe).unwrap();
            let sum = &k.m_plus.adjoint().matmul(&k.m_plus).unwrap() + &k.m_minus.adjoint().matmul(&k.m_minus).unwrap();
            completeness = completeness.max(max_diff(&sum, &M::identity(2)));
            let (want_p, want_m) = match scheme {
                // c|+⟩⟨+| + d|−⟩⟨−| and d|+⟩⟨+| + c|−⟩⟨−|; |±⟩⟨±| for c = 1
                QubitScheme::Cnot => (
                    M::diag(&[c, d]),
                    M::diag(&[d, c]),
                ),
                // |ψ′±⟩⟨±| with ψ′₊ = c|+⟩ + d|−⟩, ψ′₋ = d|+⟩ + c|−⟩
                QubitScheme::Dcnot => (
                    ket(c, d).matmul(&plus.adjoint()).unwrap(),
                    ket(d, c).matmul(&minus.adjoint()).unwrap(),
                ),
                // |φ⟩⟨±|
                QubitScheme::Swap => (
                    ket(c, d).matmul(&plus.adjoint()).unwrap(),
                    ket(c, d).matmul(&minus.adjoint()).unwrap(),
                ),
            };
            closed = closed.max(phase_diff(&k.m_plus, &want_p).0).max(phase_diff(&k.m_minus, &want_m).0);
        }
    }
    let k = qubit::kraus_operators(QubitScheme::Cnot, &QubitState::plus()).unwrap();
    let proj = max_diff(&k.m_plus, &plus.matmul(&plus.adjoint()).unwrap())
        .max(max_diff(&k.m_minus, &minus.matmul(&minus.adjoint()).unwrap()));
    outcome(
        completeness < 1e-10 && closed < 1e-10 && proj < 1e-10,
        format!("200 probes x 3 schemes: completeness {completeness:.1e}, closed forms {closed:.1e}, CNOT projectors {proj:.1e}; tol 1e-10"),
    )
}

fn random_target(rng: &mut ChaCha8Rng) -> CoordTransform<f64> {
    // |det| = 1 with b bounded away from zero: d = (det + bc)/a
    loop {
        let a: f64 = rng.random_range(-3.0..3.0);
        let b: f64 = rng.random_range(-3.0..3.0);
        let c: f64 = rng.random_range(-3.0..3.0);
        if a.abs() < 0.1 || b.abs() < 0.1 {
            continue;
        }
        let det = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        return CoordTransform { a, b, c, d: (det + b * c) / a };
    }
}

fn c4_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut vn, mut tm, mut sm) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut failures = 0;
    for _ in 0..1000 {
        let t = random_target(&mut rng);
        match (decompose_von_neumann(&t), decompose_two_mode(&t), decompose_single_mode(&t)) {
            (Ok(v), Ok(o), Ok(s)) => {
                vn = vn.max(abcd_diff(recompose(&v.gate_sequence()), &t));
                tm = tm.max(abcd_diff(recompose(&o.gate_sequence()), &t));
                sm = sm.max(abcd_diff(recompose(&s.gate_sequence()), &t));
            }
            _ => failures += 1,
        }
    }
    outcome(
        failures == 0 && vn < 1e-12 && tm < 1e-10 && sm < 1e-10,
        format!("1000 targets: von Neumann {vn:.1e} (tol 1e-12), two-mode {tm:.1e}, single-mode {sm:.1e} (tol 1e-10), errors {failures}"),
    )
}

fn c5_parameter_tables() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut upd = |x: f64| worst = worst.max(x.abs());
    for lam in [0.5, 1.0, 2.0, 3.7] {
        let l: f64 = lam;
        let o = decompose_two_mode(&cv::vnm(l).unwrap()).unwrap();
        upd(o.r - ((l + (l * l + 4.0).sqrt()) / 2.0).ln());
        upd(o.theta1 - 0.5 * (l / 2.0).atan());
        upd(o.theta2 - 0.5 * (l / 2.0).atan());
        upd((2.0 * o.theta1).sin() - o.r.tanh());
        upd(f64::from(o.p));

        let (lp, lm) = (l + 1.0 / l, l - 1.0 / l);
        let o = decompose_two_mode(&cv::csm(l).unwrap()).unwrap();
        upd(o.r - (((lp * lp + 1.0).sqrt() + (lm * lm + 1.0).sqrt()) / 2.0).ln());
        upd(o.theta1 - ((lp.atan() - lm.atan()) / 2.0 + FRAC_PI_4));
        upd(o.theta2 - ((lp.atan() + lm.atan()) / 2.0 - FRAC_PI_4));

        let k = PI / (3.0 * 3f64.sqrt());
        let h = hamiltonian_params(&cv::csm(l).unwrap()).unwrap();
        upd(h.u - k);
        upd(h.v + 2.0 * k / l);
        upd(h.w - 2.0 * k * l);
        let h = hamiltonian_params(&cv::ssm(l, 0).unwrap()).unwrap();
        upd(h.u);
        upd(h.v + PI / (2.0 * l));
        upd(h.w - PI * l / 2.0);
    }
    // SSM table: r = ln λ, θ₁ = θ₂ = π/4 (branch r ≥ 0, hence λ ≥ 1)
    for lam in [1.0, 1.5, 2.0, 10.0] {
        for p in [0u8, 1] {
            let o = decompose_two_mode(&cv::ssm(lam, p).unwrap()).unwrap();
            let l: f64 = lam;
            upd(o.r - l.ln());
            upd(o.theta1 - FRAC_PI_4);
            upd(o.theta2 - FRAC_PI_4);
            upd(f64::from(o.p) - f64::from(p));
        }
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let o = decompose_two_mode(&cv::vnm(1.0).unwrap()).unwrap();
    upd(o.r - phi.ln());
    upd(o.theta1 - (phi.atan() - FRAC_PI_4));
    let o = decompose_two_mode(&cv::csm(1.0).unwrap()).unwrap();
    upd(o.r - phi.ln());
    upd(o.theta1 - ((1.0 / phi).atan() + FRAC_PI_4));
    upd(o.theta2 - ((1.0 / phi).atan() - FRAC_PI_4));
    outcome(worst < 1e-12, format!("VNM, CSM, SSM, golden-ratio and Hamiltonian tables: max deviation {worst:.1e}; tol 1e-12"))
}

fn gaussian_density(center: f64, width: f64, a: f64) -> f64 {
    (-(a - center).powi(2) / (2.0 * width * width)).exp() / (2.0 * PI * width * width).sqrt()
}

fn l1(grid: &Grid1D<f64>, p: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let v: Vec<f64> = grid.points().iter().zip(p).map(|(&y, &d)| (d - f(y)).abs()).collect();
    grid.integrate(&v)
}

fn c6_grid_simulation() -> Outcome {
    let grid = Grid1D::<f64>::default_grid();
    let (sc, sw) = (0.4, 1.0);
    let psi = sample_gaussian(&GaussianSpec::real(sc, sw).unwrap(), grid).unwrap();
    let gauss_probe = sample_gaussian(&GaussianSpec::real(0.0, 0.5).unwrap(), grid).unwrap();
    let double_probe = gaussian_superposition(
        &[GaussianSpec::real(-1.0, 0.3).unwrap(), GaussianSpec::real(1.2, 0.4).unwrap()],
        grid,
    )
    .unwrap();
    let mut closed: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for lam in [1.0, 2.0] {
        for t in [cv::csm(lam).unwrap(), cv::ssm(lam, 0).unwrap(), cv::ssm(lam, 1).unwrap()] {
            let dists: Vec<Vec<f64>> = [&gauss_probe, &double_probe]
                .iter()
                .map(|phi| outcome_distribution(&apply_transform(&t, &psi, phi).unwrap()).density().to_vec())
                .collect();
            for d in &dists {
                closed = closed.max(l1(&grid, d, |a| gaussian_density(sc, sw, a / lam) / lam));
            }
            let diff: Vec<f64> = dists[0].iter().zip(&dists[1]).map(|(a, b)| (a - b).abs()).collect();
            spread = spread.max(grid.integrate(&diff));
        }
    }

    // SSM post-states at 10 sampled outcomes
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let t = cv::ssm(2.0, 1).unwrap();
    let joint = apply_transform(&t, &psi, &double_probe).unwrap();
    let dist = outcome_distribution(&joint);
    let posts: Vec<WaveFunction<f64>> = (0..10)
        .map(|_| postmeasurement_state(&joint, dist.quantile(rng.random_range(0.02..0.98))).unwrap())
        .collect();
    let post_spread = posts[1..]
        .iter()
        .map(|p| posts[0].l2_distance(p).unwrap())
        .fold(0.0, f64::max);
    let cfg = RepeatedConfig {
        scheme: RepeatedScheme::Ssm,
        rounds: 10,
        lambda: 2.0,
        p: 1,
        seed: 7,
    };
    let rep = scenario_repeated_measurement(&cfg, &psi, &gauss_probe).unwrap();
    let post_spread = post_spread.max(rep.post_state_spread);
    outcome(
        closed < 1e-3 && spread < 1e-4 && post_spread < 1e-6,
        format!("L1 to (1/λ)|ψ(a/λ)|² {closed:.1e} (tol 1e-3), probe spread {spread:.1e} (tol 1e-4), SSM post-state spread {post_spread:.1e} (tol 1e-6)"),
    )
}

fn c7_snr() -> Outcome {
    let mut worst: f64 = 0.0;
    for lam in [1.0_f64, 3.0, 10.0] {
        for alpha in [0.5, 1.0] {
            for d in [0.5, 2.0] {
                let r = snr(&GaussianSpec::real(0.0, d).unwrap(), lam, alpha).unwrap();
                let want = (lam * alpha / d).powi(2);
                worst = worst.max((r.simulated - want).abs() / want);
                worst = worst.max((r.analytic - want).abs() / want);
            }
        }
    }
    outcome(worst < 1e-2, format!("12 (λ, α, d) cases: max relative error {worst:.1e}; tol 1e-2"))
}

fn c8_appendix_b() -> Outcome {
    let grid = Grid1D::symmetric(10.0, 256).unwrap();
    let sigma0 = 0.5_f64.sqrt();
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for lam in [1.0_f64, 2.0] {
        // ψ squeezed by √λ and φ stretched by √λ, so both outputs have vacuum width
        let sp = GaussianSpec::real(0.0, sigma0 / lam.sqrt()).unwrap();
        let sq = GaussianSpec::real(0.0, sigma0 * lam.sqrt()).unwrap();
        let psi = sample_gaussian(&sp, grid).unwrap();
        let phi = sample_gaussian(&sq, grid).unwrap();
        let form = cv::ssm_p1_quadratic_form(lam).unwrap();
        let evolved = evolve_quadratic_fock(&form, FRAC_PI_2, &psi, &phi, 32).unwrap();
        // ψ(y/λ)φ(λx), evaluated analytically
        let samples = grid
            .points()
            .iter()
            .flat_map(|&x| grid.points().into_iter().map(move |y| (x, y)))
            .map(|(x, y)| sp.amplitude(y / lam) * sq.amplitude(lam * x))
            .collect();
        let want = JointWaveFunction::new(grid, grid, samples).unwrap();
        let d = evolved.l2_distance_up_to_phase(&want).unwrap();
        worst = worst.max(d);
        parts.push(format!("λ={lam}: {d:.1e}"));
    }
    outcome(worst < 1e-4, format!("n_fock=32, {}; tol 1e-4 (up to global phase)", parts.join(", ")))
}

fn c9_parity() -> Outcome {
    let grid = Grid1D::symmetric(10.0, 512).unwrap();
    let spec = GaussianSpec::real(0.7, 0.5_f64.sqrt()).unwrap();
    let psi = sample_gaussian(&spec, grid).unwrap();
    let reflected = WaveFunction::from_fn(grid, |x| spec.amplitude(-x)).normalized().unwrap();
    let once = parity_via_fock(&psi, 48).unwrap();
    let twice = parity_via_fock(&once, 48).unwrap();
    let d1 = once.l2_distance(&reflected).unwrap();
    let d2 = twice.l2_distance(&psi).unwrap();
    outcome(
        d1 < 2e-6 && d2 < 2e-6,
        format!("reflection {d1:.1e}, parity² vs identity {d2:.1e}; tol 2e-6"),
    )
}

fn c10_two_peak() -> Outcome {
    // convolution-width oracle: peaks at ±λ/2 of width √(w² + (λσ)²)
    let oracle = |lam: f64| {
        let (m, s) = (lam / 2.0, (16.0 + (lam * 0.05_f64).powi(2)).sqrt());
        let f = |y: f64| gaussian_density(m, s, y) + gaussian_density(-m, s, y);
        let peak = (0..=2000).map(|k| f(2.0 * m * k as f64 / 2000.0)).fold(0.0, f64::max);
        f(0.0) / peak < 0.8
    };
    let r = scenario_two_peak(20.0, 1.0, 4.0).unwrap();
    let (lo, hi) = (r.unscaled.peaks, r.scaled.peaks);
    outcome(
        !lo.resolved && hi.resolved && lo.resolved == oracle(1.0) && hi.resolved == oracle(20.0),
        format!(
            "λ=1 valley/peak {:.3} resolved={}, λ=20 valley/peak {:.3} resolved={}",
            lo.valley_peak_ratio, lo.resolved, hi.valley_peak_ratio, hi.resolved
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("qubit Hamiltonian identities", c1_qubit_hamiltonians),
        ("qubit pulse sequences", c2_pulse_sequences),
        ("Kraus completeness and closed forms", c3_kraus),
        ("decomposition round trips", c4_round_trips),
        ("parameter tables", c5_parameter_tables),
        ("grid simulation vs closed forms", c6_grid_simulation),
        ("signal-to-noise ratio", c7_snr),
        ("Fock-basis swap with scaling", c8_appendix_b),
        ("Hermite-basis parity", c9_parity),
        ("two-peak resolution scenario", c10_two_peak),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {name}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
