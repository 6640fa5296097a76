//! Deterministic information processes of the Lévy case.
//!
//! With constant Girsanov parameters `(β, Y)` each information process is
//! linear in time, so its value at the horizon `T` is `T` times a rate made of
//! a diffusion part `∝ (βσ)²` and a `ν`-integral.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::levy::{CheckedTriplet, HaraUtility};
use crate::measure::GirsanovSolution;

/// Information quantities of one conditional model.
///
/// Only the quantity matching the solved utility is populated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InfoQuantities {
    /// Entropy of `P` with respect to `Q*` (log utility).
    pub entropy_pq: Option<f64>,
    /// Kullback–Leibler information of `Q*` with respect to `P` (exp utility).
    pub kl_qp: Option<f64>,
    /// Hellinger exponent `h^(q)_T` (power utility).
    pub hellinger_exponent: Option<f64>,
    /// Hellinger integral `H^(q)_T = exp(h^(q)_T)`.
    pub hellinger_integral: Option<f64>,
    /// Hellinger order `q = p/(p−1)`.
    pub q: Option<f64>,
}

impl InfoQuantities {
    /// Evaluates the quantity belonging to `s.utility` at horizon `horizon`.
    pub fn evaluate(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64) -> Result<Self> {
        let mut out = InfoQuantities::default();
        match s.utility {
            HaraUtility::Log => out.entropy_pq = Some(info_entropy_pq(t, s, horizon)?),
            HaraUtility::Exp { .. } => out.kl_qp = Some(info_kl_qp(t, s, horizon)?),
            HaraUtility::Power { .. } => {
                let h = hellinger_exponent(t, s, horizon)?;
                out.hellinger_exponent = Some(h);
                out.hellinger_integral = Some(h.exp());
                out.q = s.utility.hellinger_order();
            }
        }
        Ok(out)
    }

    /// The value the pricer needs for `utility`: `𝓘_T`, `H^(q)_T` or `I_T`.
    pub fn for_utility(&self, utility: &HaraUtility) -> Option<f64> {
        match utility {
            HaraUtility::Log => self.entropy_pq,
            HaraUtility::Power { .. } => self.hellinger_integral,
            HaraUtility::Exp { .. } => self.kl_qp,
        }
    }
}

fn check_horizon(horizon: f64) -> Result<()> {
    if horizon.is_finite() && horizon >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidHorizon(horizon))
    }
}

fn require(s: &GirsanovSolution, expected: &'static str) -> Result<()> {
    if s.utility.name() == expected {
        Ok(())
    } else {
        Err(Error::UtilityMismatch { expected, found: s.utility.name() })
    }
}

fn diffusion_rate(t: &CheckedTriplet, s: &GirsanovSolution) -> f64 {
    0.5 * s.beta * s.beta * t.sigma2()
}

/// `𝓘_T = T·{½(βσ)² + ∫(−ln Y + Y − 1) ν(dx)}` for a log-utility solution.
pub fn info_entropy_pq(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64) -> Result<f64> {
    require(s, "log")?;
    check_horizon(horizon)?;
    let jumps = t.measure().try_integrate(|x| {
        let y = s.y(x)?;
        Ok(-y.ln() + y - 1.0)
    })?;
    Ok(horizon * (diffusion_rate(t, s) + jumps))
}

/// `I_T = T·{½(βσ)² + ∫(Y ln Y − Y + 1) ν(dx)}` for an exp-utility solution.
pub fn info_kl_qp(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64) -> Result<f64> {
    require(s, "exp")?;
    check_horizon(horizon)?;
    let jumps = t.measure().try_integrate(|x| {
        let y = s.y(x)?;
        Ok(y * y.ln() - y + 1.0)
    })?;
    Ok(horizon * (diffusion_rate(t, s) + jumps))
}

/// `h^(q)_T = T·{½q(q−1)(βσ)² + ∫(Y^q − q(Y−1) − 1) ν(dx)}` for a
/// power-utility solution; `q` is derived from the utility.
pub fn hellinger_exponent(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64) -> Result<f64> {
    require(s, "power")?;
    check_horizon(horizon)?;
    let q = s.utility.hellinger_order().expect("power utility");
    let jumps = t.measure().try_integrate(|x| {
        let y = s.y(x)?;
        Ok(y.powf(q) - q * (y - 1.0) - 1.0)
    })?;
    Ok(horizon * (q * (q - 1.0) * diffusion_rate(t, s) + jumps))
}

/// `H^(q)_T = exp(h^(q)_T)`.
pub fn hellinger_integral(t: &CheckedTriplet, s: &GirsanovSolution, horizon: f64) -> Result<f64> {
    hellinger_exponent(t, s, horizon).map(f64::exp)
}
