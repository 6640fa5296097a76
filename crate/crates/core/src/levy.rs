//! Lévy model primitives: jump measures, triplets and HARA utilities.
//!
//! Jump locations are jumps of the driving process `X` of the stochastic
//! exponential `S = 𝓔(X)`. They must lie in `(-1, 1]`: above `-1` so that the
//! price stays positive, and inside the truncation window so that the
//! "small jumps" and "all jumps" integrals coincide. Only finite-activity
//! measures are representable.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// A point mass of the Lévy measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// Jump size of `X` (dimensionless).
    pub location: f64,
    /// Jump intensity (per unit time).
    pub intensity: f64,
}

impl Atom {
    pub fn new(location: f64, intensity: f64) -> Self {
        Self { location, intensity }
    }
}

/// Finite-activity Lévy measure.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasure {
    /// `ν = Σ λ_i δ_{x_i}`.
    FiniteAtoms(Vec<Atom>),
    /// Bounded density tabulated at cell midpoints; integrals use the
    /// midpoint rule `Σ w_j ρ_j f(x_j)`.
    DensityGrid {
        nodes: Vec<f64>,
        widths: Vec<f64>,
        density: Vec<f64>,
    },
}

impl Default for LevyMeasure {
    fn default() -> Self {
        LevyMeasure::FiniteAtoms(Vec::new())
    }
}

impl LevyMeasure {
    /// The zero measure.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atoms(pairs: &[(f64, f64)]) -> Self {
        LevyMeasure::FiniteAtoms(pairs.iter().map(|&(x, l)| Atom::new(x, l)).collect())
    }

    /// Point masses `(x, mass)` the measure is made of. For a grid the mass of
    /// a cell is `width · density`.
    pub fn point_masses(&self) -> Vec<(f64, f64)> {
        match self {
            LevyMeasure::FiniteAtoms(atoms) => {
                atoms.iter().map(|a| (a.location, a.intensity)).collect()
            }
            LevyMeasure::DensityGrid { nodes, widths, density } => nodes
                .iter()
                .zip(widths)
                .zip(density)
                .map(|((&x, &w), &rho)| (x, w * rho))
                .collect(),
        }
    }

    /// Number of atoms or grid nodes.
    pub fn len(&self) -> usize {
        match self {
            LevyMeasure::FiniteAtoms(atoms) => atoms.len(),
            LevyMeasure::DensityGrid { nodes, .. } => nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total mass `∫ν(dx)`.
    pub fn total_mass(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.extend(self.point_masses().into_iter().map(|(_, m)| m));
        acc.value()
    }

    /// Most negative and most positive charged locations, if any.
    ///
    /// Locations with zero mass are ignored.
    pub fn support_extremes(&self) -> (Option<f64>, Option<f64>) {
        let mut min_neg: Option<f64> = None;
        let mut max_pos: Option<f64> = None;
        for (x, m) in self.point_masses() {
            if m <= 0.0 {
                continue;
            }
            if x < 0.0 {
                min_neg = Some(min_neg.map_or(x, |v| v.min(x)));
            } else if x > 0.0 {
                max_pos = Some(max_pos.map_or(x, |v| v.max(x)));
            }
        }
        (min_neg, max_pos)
    }

    /// Multiplies every intensity (or density value) by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            LevyMeasure::FiniteAtoms(atoms) => LevyMeasure::FiniteAtoms(
                atoms.iter().map(|a| Atom::new(a.location, a.intensity * factor)).collect(),
            ),
            LevyMeasure::DensityGrid { nodes, widths, density } => LevyMeasure::DensityGrid {
                nodes: nodes.clone(),
                widths: widths.clone(),
                density: density.iter().map(|d| d * factor).collect(),
            },
        }
    }

    /// `∫ f(x) ν(dx)`: an exact sum for atoms, the midpoint rule for a grid.
    ///
    /// Cells with zero mass are skipped, so `f` only has to be finite on the
    /// charged support.
    pub fn integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        self.try_integrate(|x| Ok(f(x)))
    }

    /// Like [`integrate`](Self::integrate) for fallible integrands.
    pub fn try_integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut acc = CompensatedSum::new();
        for (x, m) in self.point_masses() {
            if m == 0.0 {
                continue;
            }
            let v = f(x)?;
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand(x));
            }
            acc.add(m * v);
        }
        Ok(acc.value())
    }

    fn validate(&self) -> Result<()> {
        if let LevyMeasure::DensityGrid { nodes, widths, density } = self {
            if nodes.len() != widths.len() || nodes.len() != density.len() {
                return Err(Error::GridShape {
                    nodes: nodes.len(),
                    widths: widths.len(),
                    density: density.len(),
                });
            }
            for &w in widths {
                if !w.is_finite() {
                    return Err(Error::NonFiniteField("measure.widths"));
                }
                if w < 0.0 {
                    return Err(Error::NegativeMass(w));
                }
            }
        }
        for (x, m) in self.point_masses() {
            if !x.is_finite() {
                return Err(Error::NonFiniteField("measure.location"));
            }
            if !m.is_finite() {
                return Err(Error::NonFiniteField("measure.intensity"));
            }
            if x <= -1.0 {
                return Err(Error::JumpBelowFloor(x));
            }
            if x > 1.0 {
                return Err(Error::UnsupportedSupport(x));
            }
            if m < 0.0 {
                return Err(Error::NegativeMass(m));
            }
        }
        Ok(())
    }
}

/// Lévy triplet `(b, σ², ν)` with truncation `x·1{|x|≤1}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LevyTriplet {
    /// Drift rate.
    pub drift: f64,
    /// Diffusion variance rate.
    pub sigma2: f64,
    pub measure: LevyMeasure,
}

impl LevyTriplet {
    pub fn new(drift: f64, sigma2: f64, measure: LevyMeasure) -> Self {
        Self { drift, sigma2, measure }
    }

    pub fn diffusion(drift: f64, sigma2: f64) -> Self {
        Self::new(drift, sigma2, LevyMeasure::empty())
    }
}

/// A triplet that passed [`validate_triplet`]; the only form accepted by the
/// solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedTriplet(LevyTriplet);

impl CheckedTriplet {
    pub fn drift(&self) -> f64 {
        self.0.drift
    }

    pub fn sigma2(&self) -> f64 {
        self.0.sigma2
    }

    pub fn measure(&self) -> &LevyMeasure {
        &self.0.measure
    }

    pub fn as_triplet(&self) -> &LevyTriplet {
        &self.0
    }

    pub fn into_inner(self) -> LevyTriplet {
        self.0
    }
}

impl AsRef<LevyTriplet> for CheckedTriplet {
    fn as_ref(&self) -> &LevyTriplet {
        &self.0
    }
}

/// Checks finiteness, `σ² ≥ 0`, nonnegative masses and the `(-1, 1]` support.
pub fn validate_triplet(t: LevyTriplet) -> Result<CheckedTriplet> {
    if !t.drift.is_finite() {
        return Err(Error::NonFiniteField("drift"));
    }
    if !t.sigma2.is_finite() {
        return Err(Error::NonFiniteField("sigma2"));
    }
    if t.sigma2 < 0.0 {
        return Err(Error::NegativeMass(t.sigma2));
    }
    t.measure.validate()?;
    Ok(CheckedTriplet(t))
}

/// Hyperbolic absolute risk aversion utilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HaraUtility {
    /// `U(x) = ln x`.
    Log,
    /// `U(x) = x^p / p` with `p < 1`, `p ≠ 0`.
    Power { p: f64 },
    /// `U(x) = 1 − e^{−γx}` with `γ > 0`.
    Exp { gamma: f64 },
}

impl HaraUtility {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HaraUtility::Log => Ok(()),
            HaraUtility::Power { p } => {
                if !p.is_finite() || p >= 1.0 || p == 0.0 {
                    Err(Error::InvalidUtility("power exponent must satisfy p < 1, p != 0"))
                } else {
                    Ok(())
                }
            }
            HaraUtility::Exp { gamma } => {
                if !gamma.is_finite() || gamma <= 0.0 {
                    Err(Error::InvalidUtility("risk aversion must be positive"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Hellinger order `q = p/(p−1)` of the power utility.
    pub fn hellinger_order(&self) -> Option<f64> {
        match *self {
            HaraUtility::Power { p } => Some(p / (p - 1.0)),
            _ => None,
        }
    }

    /// Power utility whose Hellinger order is `q` (`q < 1`, `q ≠ 0`).
    pub fn power_for_order(q: f64) -> Self {
        HaraUtility::Power { p: q / (q - 1.0) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HaraUtility::Log => "log",
            HaraUtility::Power { .. } => "power",
            HaraUtility::Exp { .. } => "exp",
        }
    }

    /// `U(w)`; `-inf` outside the domain of the log and power utilities.
    pub fn eval(&self, wealth: f64) -> f64 {
        match *self {
            HaraUtility::Log => {
                if wealth > 0.0 {
                    wealth.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            HaraUtility::Power { p } => {
                if wealth > 0.0 {
                    wealth.powf(p) / p
                } else {
                    f64::NEG_INFINITY
                }
            }
            HaraUtility::Exp { gamma } => 1.0 - (-gamma * wealth).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pure_diffusion_is_valid() {
        assert!(validate_triplet(LevyTriplet::diffusion(0.1, 0.04)).is_ok());
    }

    #[test]
    fn jump_below_floor_rejected() {
        let t = LevyTriplet::new(0.1, 0.04, LevyMeasure::atoms(&[(-1.2, 1.0)]));
        assert_eq!(validate_triplet(t), Err(Error::JumpBelowFloor(-1.2)));
        let t = LevyTriplet::new(0.1, 0.04, LevyMeasure::atoms(&[(-1.0, 1.0)]));
        assert_eq!(validate_triplet(t), Err(Error::JumpBelowFloor(-1.0)));
    }

    #[test]
    fn pure_jump_is_valid() {
        let t = LevyTriplet::new(0.0, 0.0, LevyMeasure::atoms(&[(0.5, 2.0)]));
        assert!(validate_triplet(t).is_ok());
    }

    #[test]
    fn other_validation_errors() {
        let big = LevyTriplet::new(0.0, 0.1, LevyMeasure::atoms(&[(1.5, 1.0)]));
        assert_eq!(validate_triplet(big), Err(Error::UnsupportedSupport(1.5)));
        let unit = LevyTriplet::new(0.0, 0.1, LevyMeasure::atoms(&[(1.0, 1.0)]));
        assert!(validate_triplet(unit).is_ok());
        let neg = LevyTriplet::new(0.0, 0.1, LevyMeasure::atoms(&[(0.5, -1.0)]));
        assert_eq!(validate_triplet(neg), Err(Error::NegativeMass(-1.0)));
        let nan = LevyTriplet::diffusion(f64::NAN, 0.1);
        assert_eq!(validate_triplet(nan), Err(Error::NonFiniteField("drift")));
        let neg_var = LevyTriplet::diffusion(0.0, -0.1);
        assert!(matches!(validate_triplet(neg_var), Err(Error::NegativeMass(_))));
        let grid = LevyTriplet::new(
            0.0,
            0.1,
            LevyMeasure::DensityGrid { nodes: vec![0.1, 0.2], widths: vec![0.1], density: vec![1.0, 1.0] },
        );
        assert!(matches!(validate_triplet(grid), Err(Error::GridShape { .. })));
    }

    #[test]
    fn validation_is_idempotent() {
        let t = LevyTriplet::new(0.02, 0.01, LevyMeasure::atoms(&[(0.3, 0.5), (-0.4, 0.8)]));
        let once = validate_triplet(t).unwrap();
        let twice = validate_triplet(once.clone().into_inner()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn integral_examples() {
        let m = LevyMeasure::atoms(&[(0.5, 2.0)]);
        assert_eq!(m.integrate(|x| x).unwrap(), 1.0);
        assert_eq!(LevyMeasure::empty().integrate(|x| x * 100.0).unwrap(), 0.0);
        let m = LevyMeasure::atoms(&[(0.5, 1.0), (-0.25, 4.0)]);
        assert!((m.integrate(|x| x * x).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grid_uses_midpoint_rule() {
        let m = LevyMeasure::DensityGrid {
            nodes: vec![-0.25, 0.25],
            widths: vec![0.5, 0.5],
            density: vec![2.0, 4.0],
        };
        assert!((m.integrate(|_| 1.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((m.integrate(|x| x).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn non_finite_integrand_reported() {
        let m = LevyMeasure::atoms(&[(0.5, 1.0)]);
        assert_eq!(m.integrate(|x| 1.0 / (x - 0.5)), Err(Error::NonFiniteIntegrand(0.5)));
    }

    #[test]
    fn support_extremes_skip_empty_cells() {
        let m = LevyMeasure::atoms(&[(0.5, 1.0), (-0.3, 1.0), (-0.8, 0.0), (0.9, 2.0)]);
        assert_eq!(m.support_extremes(), (Some(-0.3), Some(0.9)));
        assert_eq!(LevyMeasure::empty().support_extremes(), (None, None));
    }

    #[test]
    fn utility_parameters() {
        assert!(HaraUtility::Power { p: 1.0 }.validate().is_err());
        assert!(HaraUtility::Power { p: 0.0 }.validate().is_err());
        assert!(HaraUtility::Exp { gamma: 0.0 }.validate().is_err());
        assert_eq!(HaraUtility::Power { p: 0.5 }.hellinger_order(), Some(-1.0));
        assert_eq!(HaraUtility::Power { p: -1.0 }.hellinger_order(), Some(0.5));
        assert_eq!(HaraUtility::power_for_order(0.5), HaraUtility::Power { p: -1.0 });
    }
}
