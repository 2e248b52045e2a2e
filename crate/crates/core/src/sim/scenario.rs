//! Resolution-by-scaling and repeated-measurement scenarios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::grid::Grid1D;
use super::joint::{apply_transform, outcome_distribution, postmeasurement_state, OutcomeDistribution};
use super::wavefunction::{gaussian_superposition, sample_gaussian, GaussianSpec, WaveFunction};
use crate::cv::transform::check_lambda;
use crate::cv::{csm, ssm, vnm, CoordTransform};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Valley-to-peak density ratio below which two peaks count as resolved.
pub const RESOLVED_RATIO: f64 = 0.8;

/// Two-peak analysis of a distribution symmetric about the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeakAnalysis<T> {
    pub left_peak: T,
    pub right_peak: T,
    pub valley: T,
    /// valley density / smaller peak density; 1 for a single central peak.
    pub valley_peak_ratio: T,
    pub resolved: bool,
}

/// Largest density left and right of the origin, and the smallest density
/// between those two maxima.
pub fn analyze_peaks<T: Real>(p: &OutcomeDistribution<T>) -> PeakAnalysis<T> {
    let ys = p.grid().points();
    let d = p.density();
    let argmax = |range: &mut dyn Iterator<Item = usize>| {
        range.fold(None, |best: Option<usize>, i| match best {
            Some(b) if d[b] >= d[i] => Some(b),
            _ => Some(i),
        })
    };
    let split = ys.partition_point(|&y| y < T::zero());
    let l = argmax(&mut (0..split.max(1))).unwrap_or(0);
    let r = argmax(&mut (split.min(ys.len() - 1)..ys.len())).unwrap_or(ys.len() - 1);
    let valley = d[l..=r.max(l)].iter().copied().fold(T::infinity(), T::min);
    let peak = d[l].min(d[r]);
    let ratio = if peak > T::zero() { valley / peak } else { T::one() };
    PeakAnalysis {
        left_peak: ys[l],
        right_peak: ys[r],
        valley,
        valley_peak_ratio: ratio,
        resolved: ratio < T::lit(RESOLVED_RATIO),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoPeakRun<T> {
    pub lambda: T,
    pub distribution: OutcomeDistribution<T>,
    pub peaks: PeakAnalysis<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoPeakReport<T> {
    pub separation: T,
    pub requested_probe_width: T,
    /// Probe width actually used: at least eight probe-grid spacings.
    pub probe_width: T,
    pub system_width: T,
    pub scaled: TwoPeakRun<T>,
    pub unscaled: TwoPeakRun<T>,
}

/// A system localized at ±separation/2 (each packet of width separation/20)
/// measured by the von Neumann circuit with a Gaussian probe, with the given
/// λ and with λ = 1.
pub fn scenario_two_peak<T: Real>(lambda: T, separation: T, probe_width: T) -> Result<TwoPeakReport<T>> {
    check_lambda(lambda)?;
    if !(separation.is_finite() && separation > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "separation",
            value: separation.as_f64(),
            constraint: "separation must be finite and > 0",
        });
    }
    if !(probe_width.is_finite() && probe_width >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "probe_width",
            value: probe_width.as_f64(),
            constraint: "probe width must be finite and >= 0",
        });
    }
    let sigma = separation / T::lit(20.0);
    let half = separation * T::lit(0.5);
    let run = |lam: T| -> Result<(TwoPeakRun<T>, T)> {
        let span = lam * half + T::lit(8.0) * (probe_width + lam * sigma);
        let grid_y = Grid1D::symmetric(span, 1024)?;
        let width = probe_width.max(T::lit(8.0) * grid_y.spacing());
        // resolve both the packets and the probe's image φ(y − λx) in x
        let feature = sigma.min(width / lam) / T::lit(4.0);
        let nx = (T::lit(2.0) * separation / feature).ceil().to_usize().unwrap_or(4096).clamp(512, 4096);
        let grid_x = Grid1D::symmetric(separation, nx)?;
        let psi = gaussian_superposition(
            &[GaussianSpec::real(-half, sigma)?, GaussianSpec::real(half, sigma)?],
            grid_x,
        )?;
        let phi = sample_gaussian(&GaussianSpec::real(T::zero(), width)?, grid_y)?;
        let joint = apply_transform(&vnm(lam)?, &psi, &phi)?;
        let distribution = outcome_distribution(&joint);
        let peaks = analyze_peaks(&distribution);
        Ok((
            TwoPeakRun {
                lambda: lam,
                distribution,
                peaks,
            },
            width,
        ))
    };
    let (scaled, width) = run(lambda)?;
    let (unscaled, _) = run(T::one())?;
    Ok(TwoPeakReport {
        separation,
        requested_probe_width: probe_width,
        probe_width: width,
        system_width: sigma,
        scaled,
        unscaled,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepeatedScheme {
    Csm,
    Ssm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepeatedConfig<T> {
    pub scheme: RepeatedScheme,
    pub rounds: usize,
    pub lambda: T,
    /// SSM sign choice; ignored for CSM.
    pub p: u8,
    pub seed: u64,
}

impl<T: Real> RepeatedConfig<T> {
    pub fn transform(&self) -> Result<CoordTransform<T>> {
        match self.scheme {
            RepeatedScheme::Csm => csm(self.lambda),
            RepeatedScheme::Ssm => ssm(self.lambda, self.p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundRecord<T> {
    pub round: usize,
    pub outcome: T,
    /// ∫x|ψ′|² of the post-measurement state.
    pub post_center: T,
    /// Central 99% interval of this round's outcome distribution.
    pub window_low: T,
    pub window_high: T,
}

/// Definition of the resolution-window statistic reported below; it is a
/// modelling choice, not a quantity with an independent reference value.
pub const WINDOW_METRIC_NOTE: &str = "resolution window = central 99% interval of each round's outcome \
distribution; spread statistics use rounds 2.. (measurements made on post-measurement states)";

#[derive(Clone, Debug, PartialEq)]
pub struct RepeatedReport<T> {
    pub rounds: Vec<RoundRecord<T>>,
    /// max over rounds of the L² distance (up to phase) between a post-state
    /// and the first one.
    pub post_state_spread: T,
    /// max − min of post-state centers.
    pub center_spread: T,
    /// max − min of window midpoints.
    pub window_center_spread: T,
    /// Width of the union of all windows.
    pub window_union_width: T,
    pub final_state: WaveFunction<T>,
}

/// Measures the system `rounds` times in a row, each round starting from the
/// previous post-measurement state with a fresh copy of `probe`. Outcomes are
/// drawn by inverse-CDF sampling from a ChaCha8 stream seeded with `seed`.
pub fn scenario_repeated_measurement<T: Real>(
    config: &RepeatedConfig<T>,
    system: &WaveFunction<T>,
    probe: &WaveFunction<T>,
) -> Result<RepeatedReport<T>> {
    if config.rounds < 2 {
        return Err(Error::InvalidParameter {
            name: "rounds",
            value: config.rounds as f64,
            constraint: "repeated measurement needs at least 2 rounds",
        });
    }
    let t = config.transform()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = system.clone();
    let mut records = Vec::with_capacity(config.rounds);
    let mut posts: Vec<WaveFunction<T>> = Vec::with_capacity(config.rounds);
    let q = T::lit(0.005);
    for round in 1..=config.rounds {
        let joint = apply_transform(&t, &state, probe)?;
        let dist = outcome_distribution(&joint);
        let u: f64 = rng.random();
        let outcome = dist.quantile(T::lit(u));
        let post = postmeasurement_state(&joint, outcome)?;
        records.push(RoundRecord {
            round,
            outcome,
            post_center: post.mean(),
            window_low: dist.quantile(q),
            window_high: dist.quantile(T::one() - q),
        });
        posts.push(post.clone());
        state = post;
    }
    let mut spread = T::zero();
    for p in &posts[1..] {
        spread = spread.max(posts[0].l2_distance_up_to_phase(p)?);
    }
    let range = |v: &mut dyn Iterator<Item = T>| {
        let (lo, hi) = v.fold((T::infinity(), T::neg_infinity()), |(lo, hi), x| (lo.min(x), hi.max(x)));
        hi - lo
    };
    let later = &records[1..];
    let window_union_width = later.iter().map(|r| r.window_high).fold(T::neg_infinity(), T::max)
        - later.iter().map(|r| r.window_low).fold(T::infinity(), T::min);
    Ok(RepeatedReport {
        post_state_spread: spread,
        center_spread: range(&mut records.iter().map(|r| r.post_center)),
        window_center_spread: range(&mut later.iter().map(|r| (r.window_low + r.window_high) * T::lit(0.5))),
        window_union_width,
        rounds: records,
        final_state: state,
    })
}
