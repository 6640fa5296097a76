//! Monte-Carlo oracle for the analytic quantities.
//!
//! Conditional Lévy models are simulated exactly in law: the Brownian part is
//! a single Gaussian draw at the horizon and the jumps form a compound Poisson
//! process on the atoms of `ν`. The density `Z_T` of the minimal measure is
//! built path-wise from the solved `(β, Y)`. The Brownian-bridge model of the
//! GBM case is simulated on a time grid.
//!
//! Every path draws from its own ChaCha stream keyed by `(seed, path index)`,
//! and results are reduced sequentially in path order, so estimates do not
//! depend on the number of worker threads.

use indiff_core::measure::GirsanovSolution;
use indiff_core::sum::CompensatedSum;
use indiff_core::{CheckedTriplet, GbmModel};
use rand::distr::weighted::WeightedIndex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid Monte-Carlo configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("jump law cannot be sampled: {0}")]
    JumpLaw(String),
    #[error(transparent)]
    Core(#[from] indiff_core::Error),
    #[error("time grid too coarse: halving the step moves the estimate from {coarse} to {fine} (std error {std_error})")]
    GridTooCoarse { fine: f64, coarse: f64, std_error: f64 },
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Stream domains so that P-, Q- and pilot simulations never share draws.
const DOMAIN_P: u64 = 0;
const DOMAIN_Q: u64 = 1;
const DOMAIN_PILOT_P: u64 = 2;
const DOMAIN_PILOT_Q: u64 = 3;
const DOMAIN_BRIDGE: u64 = 4;

/// Paths used to choose between the direct and the measure-change Hellinger
/// estimator.
pub const PILOT_PATHS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_paths: usize,
    /// Time steps of the bridge simulation; the Lévy simulation is exact.
    #[serde(default = "default_steps")]
    pub n_steps: usize,
    #[serde(default)]
    pub seed: u64,
    /// Pairs each path with its Brownian mirror image.
    #[serde(default)]
    pub antithetic: bool,
}

fn default_steps() -> usize {
    200
}

impl McConfig {
    pub fn new(n_paths: usize, seed: u64) -> Self {
        Self { n_paths, n_steps: default_steps(), seed, antithetic: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(OracleError::InvalidConfig("n_paths must be positive"));
        }
        if self.n_steps == 0 {
            return Err(OracleError::InvalidConfig("n_steps must be positive"));
        }
        Ok(())
    }

    fn rng(&self, domain: u64, path: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        rng.set_stream(path as u64);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Independent draws behind the estimate (pairs when antithetic).
    pub n_effective: usize,
}

impl McEstimate {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mut sum = CompensatedSum::new();
        sum.extend(values.iter().copied());
        let mean = sum.value() / n as f64;
        if n < 2 {
            return Self { mean, std_error: 0.0, n_effective: n };
        }
        let mut sq = CompensatedSum::new();
        sq.extend(values.iter().map(|v| (v - mean) * (v - mean)));
        let var = sq.value() / (n - 1) as f64;
        Self { mean, std_error: (var / n as f64).sqrt(), n_effective: n }
    }

    /// `|mean − target| / std_error`; zero when both sides agree exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    /// Within `k` standard errors of `target`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// Terminal values of one path: `ln 𝓔(X)_T` and `ln Z_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalSample {
    pub log_exp: f64,
    pub log_z: f64,
}

/// Terminal samples; with antithetic sampling consecutive entries are pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub values: Vec<TerminalSample>,
    pub antithetic: bool,
}

impl Samples {
    /// Estimate of `E f(sample)`, averaging antithetic pairs first.
    pub fn estimate<F: Fn(&TerminalSample) -> f64>(&self, f: F) -> McEstimate {
        let raw: Vec<f64> = self.values.iter().map(f).collect();
        if self.antithetic {
            let paired: Vec<f64> = raw.chunks(2).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
            McEstimate::from_values(&paired)
        } else {
            McEstimate::from_values(&raw)
        }
    }
}

/// Measure under which paths are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    P,
    Q,
}

/// Simulation inputs that do not change from path to path.
struct LevySim {
    sigma: f64,
    horizon: f64,
    beta: f64,
    /// Deterministic part of `ln 𝓔(X)_T`.
    exp_drift: f64,
    /// Deterministic part of `ln Z_T`.
    z_drift: f64,
    /// Drift of `W` under the simulation measure.
    w_drift: f64,
    log_one_plus: Vec<f64>,
    log_y: Vec<f64>,
    jumps: Option<(Poisson<f64>, WeightedIndex<f64>)>,
}

impl LevySim {
    fn new(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64, measure: Measure) -> Result<Self> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(OracleError::InvalidConfig("horizon must be finite and non-negative"));
        }
        let masses: Vec<(f64, f64)> = t.measure().point_masses().into_iter().filter(|&(_, m)| m > 0.0).collect();
        let sigma2 = t.sigma2();
        let sigma = sigma2.sqrt();
        let mut y_minus_one = CompensatedSum::new();
        let mut x_mass = CompensatedSum::new();
        let mut log_one_plus = Vec::with_capacity(masses.len());
        let mut log_y = Vec::with_capacity(masses.len());
        let mut rates = Vec::with_capacity(masses.len());
        for &(x, m) in &masses {
            let y = s.y(x)?;
            y_minus_one.add(m * (y - 1.0));
            x_mass.add(m * x);
            log_one_plus.push((1.0 + x).ln());
            log_y.push(y.ln());
            rates.push(match measure {
                Measure::P => m,
                Measure::Q => m * y,
            });
        }
        let total: f64 = rates.iter().sum();
        let jumps = if total * horizon > 0.0 {
            let count = Poisson::new(total * horizon).map_err(|e| OracleError::JumpLaw(e.to_string()))?;
            let pick = WeightedIndex::new(&rates).map_err(|e| OracleError::JumpLaw(e.to_string()))?;
            Some((count, pick))
        } else {
            None
        };
        let beta = s.beta;
        Ok(Self {
            sigma,
            horizon,
            beta,
            exp_drift: (t.drift() - 0.5 * sigma2 - x_mass.value()) * horizon,
            z_drift: -(0.5 * beta * beta * sigma2 + y_minus_one.value()) * horizon,
            w_drift: match measure {
                Measure::P => 0.0,
                Measure::Q => beta * sigma,
            },
            log_one_plus,
            log_y,
            jumps,
        })
    }

    /// Paths generated from one stream: one, or a mirrored pair.
    fn paths(&self, rng: &mut ChaCha8Rng, antithetic: bool) -> [Option<TerminalSample>; 2] {
        let normal: f64 = StandardNormal.sample(rng);
        let root_t = self.horizon.sqrt();
        let (mut jump_exp, mut jump_z) = (0.0, 0.0);
        if let Some((count, pick)) = &self.jumps {
            let n = count.sample(rng) as u64;
            for _ in 0..n {
                let i = pick.sample(rng);
                jump_exp += self.log_one_plus[i];
                jump_z += self.log_y[i];
            }
        }
        let sample = |z: f64| {
            let w = self.w_drift * self.horizon + root_t * z;
            TerminalSample {
                log_exp: self.sigma * w + self.exp_drift + jump_exp,
                log_z: self.beta * self.sigma * w + self.z_drift + jump_z,
            }
        };
        [Some(sample(normal)), antithetic.then(|| sample(-normal))]
    }
}

fn simulate(
    t: &CheckedTriplet,
    s: &GirsanovSolution,
    horizon: f64,
    cfg: &McConfig,
    measure: Measure,
    domain: u64,
) -> Result<Samples> {
    cfg.validate()?;
    let sim = LevySim::new(t, s, horizon, measure)?;
    let streams = if cfg.antithetic { cfg.n_paths.div_ceil(2) } else { cfg.n_paths };
    let values: Vec<TerminalSample> = (0..streams)
        .into_par_iter()
        .map(|i| sim.paths(&mut cfg.rng(domain, i), cfg.antithetic))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .flatten()
        .collect();
    Ok(Samples { values, antithetic: cfg.antithetic })
}

/// Samples of `(ln 𝓔(X)_T, ln Z_T)` under `P`.
pub fn simulate_terminal(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64, cfg: &McConfig) -> Result<Samples> {
    simulate(t, s, horizon, cfg, Measure::P, DOMAIN_P)
}

/// Samples under the solved measure `Q`: `W` gains drift `βσ` and the jump
/// intensities become `Y(x)ν(dx)`.
pub fn simulate_terminal_q(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64, cfg: &McConfig) -> Result<Samples> {
    simulate(t, s, horizon, cfg, Measure::Q, DOMAIN_Q)
}

/// `E_P[−ln Z_T]`.
pub fn estimate_entropy_pq(samples: &Samples) -> McEstimate {
    samples.estimate(|s| -s.log_z)
}

/// `E_P[Z_T ln Z_T]`.
pub fn estimate_kl_qp(samples: &Samples) -> McEstimate {
    samples.estimate(|s| s.log_z.exp() * s.log_z)
}

/// `E_P[Z_T^q]`.
pub fn estimate_hellinger(samples: &Samples, q: f64) -> McEstimate {
    if q == 0.0 {
        return samples.estimate(|_| 1.0);
    }
    samples.estimate(|s| (q * s.log_z).exp())
}

/// `E_P[Z_T 𝓔(X)_T]`, which is 1 exactly when `S = 𝓔(X)` is a `Q`-martingale.
pub fn estimate_martingale(samples: &Samples) -> McEstimate {
    samples.estimate(|s| (s.log_z + s.log_exp).exp())
}

/// Hellinger estimator actually used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HellingerMethod {
    /// `E_P[Z^q]`.
    Direct,
    /// `E_Q[Z^{q−1}]`.
    MeasureChange,
}

impl HellingerMethod {
    pub fn name(&self) -> &'static str {
        match self {
            HellingerMethod::Direct => "direct",
            HellingerMethod::MeasureChange => "measure_change",
        }
    }
}

/// Hellinger integral of order `q`. For `q < 0` a pilot run decides between
/// the direct estimator and `E_Q[Z^{q−1}]` by their standard errors.
pub fn estimate_hellinger_adaptive(
    t: &CheckedTriplet,
    s: &GirsanovSolution,
    horizon: f64,
    q: f64,
    cfg: &McConfig,
) -> Result<(McEstimate, HellingerMethod)> {
    let direct = |c: &McConfig, domain| -> Result<McEstimate> {
        Ok(estimate_hellinger(&simulate(t, s, horizon, c, Measure::P, domain)?, q))
    };
    let changed = |c: &McConfig, domain| -> Result<McEstimate> {
        let samples = simulate(t, s, horizon, c, Measure::Q, domain)?;
        Ok(samples.estimate(|v| ((q - 1.0) * v.log_z).exp()))
    };
    if q >= 0.0 {
        return Ok((direct(cfg, DOMAIN_P)?, HellingerMethod::Direct));
    }
    let pilot = McConfig { n_paths: PILOT_PATHS.min(cfg.n_paths), ..*cfg };
    let d = direct(&pilot, DOMAIN_PILOT_P)?;
    let m = changed(&pilot, DOMAIN_PILOT_Q)?;
    if m.std_error < d.std_error {
        Ok((changed(cfg, DOMAIN_Q)?, HellingerMethod::MeasureChange))
    } else {
        Ok((direct(cfg, DOMAIN_P)?, HellingerMethod::Direct))
    }
}

/// Martingale check of a solved measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MartingaleCheck {
    pub estimate: McEstimate,
    pub pass: bool,
}

/// Estimates `E_P[Z_T 𝓔(X)_T]` and flags it as passing within 3 standard
/// errors of 1.
pub fn verify_martingale(
    t: &CheckedTriplet,
    s: &GirsanovSolution,
    horizon: f64,
    cfg: &McConfig,
) -> Result<MartingaleCheck> {
    let estimate = estimate_martingale(&simulate_terminal(t, s, horizon, cfg)?);
    Ok(MartingaleCheck { estimate, pass: estimate.within(1.0, 3.0) })
}

/// Bridge-oracle estimates for one factor value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeEstimates {
    pub entropy_pq: McEstimate,
    pub kl_qp: McEstimate,
    /// `(q, E_P[Z^q])` for each requested order.
    pub hellinger: Vec<(f64, McEstimate)>,
    /// `E_P[Z_T]`; 1 up to sampling error.
    pub normalization: McEstimate,
    /// `E_P[1/Z_T]`, the expectation of the density with both exponent signs
    /// flipped.
    pub flipped_density: McEstimate,
    /// Entropy estimate on the grid with twice the step.
    pub entropy_coarse: f64,
}

/// `(ln Z on the grid, ln Z on the grid with doubled step)`.
fn bridge_path(m: &GbmModel, u: f64, n_steps: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (mu, s1, rho, t, tp) = (m.mu1, m.sigma1, m.rho, m.horizon, m.claim_horizon);
    let perp = (1.0 - rho * rho).sqrt();
    let h = t / n_steps as f64;
    let root_h = h.sqrt();
    let mut v = 0.0;
    let mut log_z = 0.0;
    // Coarse grid: β frozen at even steps, increments summed over two steps.
    let (mut coarse, mut coarse_beta, mut coarse_dg) = (0.0, 0.0, 0.0);
    for k in 0..n_steps {
        let s = k as f64 * h;
        let pull = (u - v) / (tp - s);
        let beta = mu + s1 * rho * pull;
        let db = root_h * Distribution::<f64>::sample(&StandardNormal, rng);
        let dw = root_h * Distribution::<f64>::sample(&StandardNormal, rng);
        let dg = rho * db + perp * dw;
        log_z += -s1 * beta * dg - 0.5 * s1 * s1 * beta * beta * h;
        if k % 2 == 0 {
            coarse_beta = beta;
            coarse_dg = dg;
        } else {
            coarse_dg += dg;
        }
        if k % 2 == 1 || k + 1 == n_steps {
            let span = if k % 2 == 1 { 2.0 * h } else { h };
            coarse += -s1 * coarse_beta * coarse_dg - 0.5 * s1 * s1 * coarse_beta * coarse_beta * span;
        }
        v += pull * h + db;
    }
    (log_z, coarse)
}

/// Simulates the bridge model given `ξ = u` and estimates the entropy, the
/// Kullback–Leibler information and the Hellinger integrals of the density
/// `Z_T = exp(−σ₁∫β dγ̂ − (σ₁²/2)∫β² ds)`.
///
/// Fails with [`OracleError::GridTooCoarse`] when the entropy estimate on the
/// doubled step differs from the fine one by more than one standard error;
/// both grids share their Gaussian increments.
pub fn gbm_bridge(m: &GbmModel, u: f64, orders: &[f64], cfg: &McConfig) -> Result<BridgeEstimates> {
    cfg.validate()?;
    m.validate()?;
    if !u.is_finite() {
        return Err(OracleError::InvalidConfig("factor value must be finite"));
    }
    let paths: Vec<(f64, f64)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| bridge_path(m, u, cfg.n_steps, &mut cfg.rng(DOMAIN_BRIDGE, i)))
        .collect();
    let fine: Vec<f64> = paths.iter().map(|p| p.0).collect();
    let over = |f: &dyn Fn(f64) -> f64| McEstimate::from_values(&fine.iter().map(|&l| f(l)).collect::<Vec<_>>());
    let entropy_pq = over(&|l| -l);
    let coarse: Vec<f64> = paths.iter().map(|p| -p.1).collect();
    let entropy_coarse = McEstimate::from_values(&coarse).mean;
    if (entropy_pq.mean - entropy_coarse).abs() > entropy_pq.std_error {
        return Err(OracleError::GridTooCoarse {
            fine: entropy_pq.mean,
            coarse: entropy_coarse,
            std_error: entropy_pq.std_error,
        });
    }
    let hellinger = orders
        .iter()
        .map(|&q| (q, if q == 0.0 { over(&|_| 1.0) } else { over(&|l| (q * l).exp()) }))
        .collect();
    Ok(BridgeEstimates {
        entropy_pq,
        kl_qp: over(&|l| l.exp() * l),
        hellinger,
        normalization: over(&|l| l.exp()),
        flipped_density: over(&|l| (-l).exp()),
        entropy_coarse,
    })
}
