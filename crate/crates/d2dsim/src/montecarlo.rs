//! Batch trial engine: outage estimates with confidence intervals,
//! deterministically seeded and parallel over independent trials.
//!
//! Every trial owns substream `trial_index` of the master seed, so the
//! estimate is bit-identical for a fixed `(master_seed, trials)` pair no
//! matter how many workers run it or how the trials are partitioned.
//! Aggregation is a pure count reduction; no floating-point accumulation
//! order can leak into the result.

use crate::analytic::{cellular_outage, d2d_outage, CellularVariant};
use crate::channel::draw_channels;
use crate::config::{ConfigError, SystemConfig};
use crate::protocol::run_trial;
use crate::rng::TrialRng;

pub use crate::rng::point_seed;

/// 99% two-sided normal quantile used for all confidence intervals.
pub const CI_Z: f64 = 2.576;

/// Monte Carlo outage estimate over a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub trials: u64,
    /// Empirical cellular outage probability.
    pub p_oc_hat: f64,
    /// Empirical D2D outage probability.
    pub p_od_hat: f64,
    /// 99% half-width for the cellular estimate.
    pub ci_halfwidth_oc: f64,
    /// 99% half-width for the D2D estimate.
    pub ci_halfwidth_od: f64,
    /// Trials that ended in operating case 1..4, in order.
    pub case_histogram: [u64; 4],
}

#[derive(Default, Clone, Copy)]
struct Counts {
    cellular: u64,
    d2d: u64,
    cases: [u64; 4],
}

impl Counts {
    fn add(&mut self, other: Counts) {
        self.cellular += other.cellular;
        self.d2d += other.d2d;
        for (a, b) in self.cases.iter_mut().zip(other.cases) {
            *a += b;
        }
    }
}

/// Estimate both outage probabilities over `trials` independent channel
/// draws. `workers` only controls the partitioning; the result is the
/// same for any value of it.
pub fn estimate_outage(
    cfg: &SystemConfig,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> EstimateResult {
    assert!(trials >= 1, "at least one trial");
    let workers = workers.clamp(1, trials.min(1024) as usize);

    let totals = if workers == 1 {
        run_range(cfg, master_seed, 0..trials)
    } else {
        let chunk = trials.div_ceil(workers as u64);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let start = w * chunk;
                    let end = (start + chunk).min(trials);
                    scope.spawn(move || run_range(cfg, master_seed, start..end))
                })
                .collect();
            let mut totals = Counts::default();
            for handle in handles {
                totals.add(handle.join().expect("worker panicked"));
            }
            totals
        })
    };

    let n = trials as f64;
    EstimateResult {
        trials,
        p_oc_hat: totals.cellular as f64 / n,
        p_od_hat: totals.d2d as f64 / n,
        ci_halfwidth_oc: ci_halfwidth(totals.cellular, trials),
        ci_halfwidth_od: ci_halfwidth(totals.d2d, trials),
        case_histogram: totals.cases,
    }
}

fn run_range(cfg: &SystemConfig, master_seed: u64, range: std::ops::Range<u64>) -> Counts {
    let mut counts = Counts::default();
    for trial in range {
        let mut rng = TrialRng::substream(master_seed, trial);
        let ch = draw_channels(cfg, &mut rng);
        let result = run_trial(&ch, cfg);
        counts.cellular += u64::from(result.cellular_outage);
        counts.d2d += u64::from(result.d2d_outage);
        counts.cases[result.outcome.operating_case.index()] += 1;
    }
    counts
}

/// 99% binomial half-width: normal approximation `z sqrt(p(1-p)/n)`,
/// replaced by the Wilson half-width when fewer than 10 successes were
/// observed (the normal approximation collapses at the extremes).
pub fn ci_halfwidth(successes: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let p = successes as f64 / n;
    if successes < 10 {
        let z2 = CI_Z * CI_Z;
        CI_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
    } else {
        CI_Z * (p * (1.0 - p) / n).sqrt()
    }
}

/// Sweep axis for parameter scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Rho,
    NPairs,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::Rho => "rho",
            SweepAxis::NPairs => "n_pairs",
        }
    }

    /// A copy of `base` with this axis set to `value`, validated.
    pub fn apply(self, base: &SystemConfig, value: f64) -> Result<SystemConfig, ConfigError> {
        let mut cfg = base.clone();
        match self {
            SweepAxis::Alpha => cfg.alpha = value,
            SweepAxis::Rho => cfg.rho = value,
            SweepAxis::NPairs => {
                if !(value.is_finite() && value > 0.0 && value.fract() == 0.0) {
                    return Err(ConfigError::Invalid {
                        field: "n_pairs",
                        constraint: "axis value must be a positive integer",
                    });
                }
                cfg.n_pairs = value as usize;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(SweepAxis::Alpha),
            "rho" => Ok(SweepAxis::Rho),
            "n_pairs" => Ok(SweepAxis::NPairs),
            other => Err(format!(
                "unknown axis `{other}` (expected alpha, rho or n_pairs)"
            )),
        }
    }
}

/// Monte Carlo estimate plus the three closed-form values at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointData {
    pub estimate: EstimateResult,
    pub p_oc_literal: f64,
    pub p_oc_corrected: f64,
    pub p_od_analytic: f64,
}

/// One sweep point; failed points carry the validation error so output
/// rows stay aligned with the requested values.
#[derive(Debug)]
pub struct SweepPoint {
    pub value: f64,
    pub seed: u64,
    pub data: Result<PointData, ConfigError>,
}

/// A full sweep along one axis.
#[derive(Debug)]
pub struct OutageCurve {
    pub axis: SweepAxis,
    pub trials: u64,
    pub points: Vec<SweepPoint>,
}

impl OutageCurve {
    pub fn all_ok(&self) -> bool {
        self.points.iter().all(|p| p.data.is_ok())
    }
}

/// Run `estimate_outage` at each axis value, pairing it with the
/// closed-form curves. Each point gets an independent seed derived from
/// `(seed, point index)`; invalid axis values are carried as failed
/// points and the sweep continues.
pub fn sweep(
    base: &SystemConfig,
    axis: SweepAxis,
    values: &[f64],
    trials: u64,
    seed: u64,
    workers: usize,
) -> OutageCurve {
    let points = values
        .iter()
        .enumerate()
        .map(|(idx, &value)| {
            let point_seed = point_seed(seed, idx);
            let data = axis.apply(base, value).map(|cfg| PointData {
                estimate: estimate_outage(&cfg, trials, point_seed, workers),
                p_oc_literal: cellular_outage(&cfg, CellularVariant::Literal),
                p_oc_corrected: cellular_outage(&cfg, CellularVariant::Corrected),
                p_od_analytic: d2d_outage(&cfg),
            });
            SweepPoint {
                value,
                seed: point_seed,
                data,
            }
        })
        .collect();
    OutageCurve {
        axis,
        trials,
        points,
    }
}
