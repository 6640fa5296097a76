//! Correlated Geometric Brownian motion with a Brownian factor.
//!
//! The traded log-driver is `X_t = μ₁t + σ₁W¹_t` and the factor is
//! `ξ = W²_{T′}` with `corr(W¹, W²) = ρ`, so `α = N(0, T′)`. Given `ξ = u`,
//! `W²` is a Brownian bridge `V(u)` from 0 to `u` on `[0, T′]` and
//!
//! `X_t(u) = μ₁t + σ₁ρ ∫₀ᵗ (u − V_s)/(T′ − s) ds + σ₁γ̂_t`.
//!
//! The information quantities below are in closed form with the convention
//! `β_s = μ₁ + σ₁ρ(u − V_s)/(T′ − s)` and prefactor `σ₁²/2` on `∫β²ds`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::factor::{nodes, AlphaSpec, PayoffSpec};
use crate::info::InfoQuantities;
use crate::levy::HaraUtility;
use crate::pricer::{price_report, NodeReport, PriceReport, PricingSettings};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmModel {
    /// Drift of the traded asset.
    pub mu1: f64,
    /// Volatility of the traded asset.
    pub sigma1: f64,
    /// Correlation between the asset and the factor driver.
    pub rho: f64,
    /// Trading horizon `T`.
    pub horizon: f64,
    /// Claim horizon `T′ > T`.
    pub claim_horizon: f64,
}

impl GbmModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [self.mu1, self.sigma1, self.rho, self.horizon, self.claim_horizon];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("non-finite parameter"));
        }
        if self.sigma1 <= 0.0 {
            return Err(Error::InvalidModel("sigma1 must be positive"));
        }
        if self.rho.abs() >= 1.0 {
            return Err(Error::InvalidModel("|rho| must be below 1"));
        }
        if !(self.horizon > 0.0 && self.horizon < self.claim_horizon) {
            return Err(Error::InvalidModel("need 0 < T < T'"));
        }
        Ok(())
    }

    /// `c = μ₁ / (σ₁√(1 − ρ²))`.
    pub fn c(&self) -> f64 {
        self.mu1 / (self.sigma1 * (1.0 - self.rho * self.rho).sqrt())
    }

    /// `ln(T′/(T′ − T))`.
    fn log_ratio(&self) -> f64 {
        (self.claim_horizon / (self.claim_horizon - self.horizon)).ln()
    }

    /// Smallest admissible Hellinger order, `−(T′/T − 1)` (excluded).
    pub fn min_hellinger_order(&self) -> f64 {
        -(self.claim_horizon / self.horizon - 1.0)
    }

    /// Factor law `N(0, T′)` discretised with `n` nodes.
    pub fn alpha(&self, n: usize) -> AlphaSpec {
        AlphaSpec::GaussianQuadrature { mean: 0.0, variance: self.claim_horizon, nodes: n }
    }
}

fn entropy_with_sign(m: &GbmModel, u: f64, sign: f64) -> Result<f64> {
    m.validate()?;
    let (s1, rho, t, tp) = (m.sigma1, m.rho, m.horizon, m.claim_horizon);
    let mean_drift = m.mu1 + sign * s1 * rho * u / tp;
    let bridge = s1 * s1 * rho * rho / tp * (tp * m.log_ratio() - t);
    Ok(0.5 * s1 * s1 * (mean_drift * mean_drift * t + bridge))
}

/// Entropy of `P^u` with respect to `Q^{u,*}`:
/// `(σ₁²/2)[(μ₁ + σ₁ρu/T′)²T + (σ₁²ρ²/T′)(T′ ln(T′/(T′−T)) − T)]`.
pub fn gbm_entropy_pq(m: &GbmModel, u: f64) -> Result<f64> {
    entropy_with_sign(m, u, 1.0)
}

/// The same expression with `μ₁ − σ₁ρu/T′`; only used to report how far the
/// opposite sign convention lies from the simulated value.
pub fn gbm_entropy_pq_minus_sign(m: &GbmModel, u: f64) -> Result<f64> {
    entropy_with_sign(m, u, -1.0)
}

/// Kullback–Leibler information of `Q^{u,*}` with respect to `P^u`.
pub fn gbm_kl_qp(m: &GbmModel, u: f64) -> Result<f64> {
    m.validate()?;
    let (mu, s1, rho, t, tp) = (m.mu1, m.sigma1, m.rho, m.horizon, m.claim_horizon);
    let l = m.log_ratio();
    let s2r2 = s1 * s1 * rho * rho;
    let inner = mu * mu * t
        + 2.0 * s1 * mu * rho * u * l
        + s2r2 * u * u * t / (tp * (tp - t))
        + s2r2 * (t / (tp - t) - l);
    Ok(0.5 * s1 * s1 * inner)
}

/// Hellinger integral of order `q`:
/// `(T′/(T′−T+qT))^{1/2} exp{−((1−q)/2)[u²/T′ − (u+cT)²/(T′−T+qT)]}`.
pub fn gbm_hellinger(m: &GbmModel, u: f64, q: f64) -> Result<f64> {
    m.validate()?;
    let min = m.min_hellinger_order();
    if !(q.is_finite() && q > min) {
        return Err(Error::QOutOfDomain { q, min });
    }
    let (t, tp) = (m.horizon, m.claim_horizon);
    if q == 1.0 {
        return Ok(1.0);
    }
    let denom = tp - t + q * t;
    let shifted = u + m.c() * t;
    let exponent = -0.5 * (1.0 - q) * (u * u / tp - shifted * shifted / denom);
    Ok((tp / denom).sqrt() * exponent.exp())
}

/// Exp-utility indifference prices with `α = N(0, T′)` discretised by
/// `n_nodes` Gauss–Hermite nodes and `I_T(u)` from [`gbm_kl_qp`].
pub fn gbm_price_exp(
    m: &GbmModel,
    x: f64,
    gamma: f64,
    payoff: &PayoffSpec,
    n_nodes: usize,
) -> Result<PriceReport> {
    m.validate()?;
    let factor_nodes = nodes(&m.alpha(n_nodes))?;
    let g = payoff.values(&factor_nodes)?;
    let reports: Vec<NodeReport> = factor_nodes
        .iter()
        .map(|n| {
            Ok(NodeReport {
                u: n.u,
                weight: n.weight,
                payoff: 0.0,
                beta: None,
                residual: None,
                info: InfoQuantities { kl_qp: Some(gbm_kl_qp(m, n.u)?), ..InfoQuantities::default() },
            })
        })
        .collect::<Result<_>>()?;
    price_report(HaraUtility::Exp { gamma }, x, &g, reports, &PricingSettings::default())
}
