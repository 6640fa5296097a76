//! Factor law `α`, conditional model families and payoffs on the factor.
//!
//! The factor law is always discretised into weighted nodes before pricing,
//! so every integral against `α` is a finite weighted sum. A Gaussian law uses
//! an `n`-point Gauss–Hermite rule, exact for polynomials of degree `2n − 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::levy::{validate_triplet, CheckedTriplet, LevyTriplet};
use crate::sum::CompensatedSum;

/// Default node count for Gaussian factor laws.
pub const DEFAULT_GAUSS_NODES: usize = 64;

/// Law of the factor `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    /// `Σ w_i δ_{u_i}` with `w_i > 0`, `Σ w_i = 1`.
    DiscreteAtoms(Vec<(f64, f64)>),
    /// `N(mean, variance)` discretised by Gauss–Hermite.
    GaussianQuadrature { mean: f64, variance: f64, nodes: usize },
}

/// One node of a discretised factor law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorNode {
    pub u: f64,
    pub weight: f64,
}

/// Gauss–Hermite rule for the weight `e^{−t²}`: nodes in increasing order and
/// weights summing to `√π`.
///
/// Newton iteration on orthonormal Hermite polynomials, with the classical
/// asymptotic starting guesses.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    if n == 0 {
        return (nodes, weights);
    }
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        // Store the positive half at the front for the starting guesses above.
        nodes[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    // Newton lands on +z for the front half; lay out the symmetric rule.
    let front: Vec<(f64, f64)> = nodes.iter().copied().zip(weights.iter().copied()).take(m).collect();
    for (i, &(z, w)) in front.iter().enumerate() {
        nodes[i] = -z;
        weights[i] = w;
        nodes[n - 1 - i] = z;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Discretises the factor law into weighted nodes.
pub fn nodes(alpha: &AlphaSpec) -> Result<Vec<FactorNode>> {
    match alpha {
        AlphaSpec::DiscreteAtoms(atoms) => {
            if atoms.is_empty() {
                return Err(Error::InvalidAlpha("no atoms"));
            }
            let mut total = CompensatedSum::new();
            for &(u, w) in atoms {
                if !u.is_finite() || !w.is_finite() {
                    return Err(Error::InvalidAlpha("non-finite atom"));
                }
                if w <= 0.0 {
                    return Err(Error::InvalidAlpha("atom weights must be positive"));
                }
                total.add(w);
            }
            if (total.value() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidAlpha("atom weights must sum to 1"));
            }
            Ok(atoms.iter().map(|&(u, weight)| FactorNode { u, weight }).collect())
        }
        &AlphaSpec::GaussianQuadrature { mean, variance, nodes: n } => {
            if !mean.is_finite() || !variance.is_finite() || variance <= 0.0 {
                return Err(Error::InvalidAlpha("gaussian law needs finite mean and positive variance"));
            }
            if n == 0 {
                return Err(Error::InvalidAlpha("at least one quadrature node"));
            }
            let (t, w) = gauss_hermite(n);
            let scale = (2.0 * variance).sqrt();
            let total: f64 = crate::sum::compensated_sum(w.iter().copied());
            Ok(t.iter()
                .zip(&w)
                .map(|(&ti, &wi)| FactorNode { u: mean + scale * ti, weight: wi / total })
                .collect())
        }
    }
}

/// `Σ w_i f(u_i)`.
pub fn expect_over_alpha<F>(nodes: &[FactorNode], mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut acc = CompensatedSum::new();
    for n in nodes {
        let v = f(n.u);
        if !v.is_finite() {
            return Err(Error::NonFiniteNode(n.u));
        }
        acc.add(n.weight * v);
    }
    Ok(acc.value())
}

/// Conditional model family `u ↦ (b^u, σ², ν^u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorFamily {
    /// `b^u = b0 + sensitivity·u`; `σ²` and `ν` fixed.
    AffineDrift { base: LevyTriplet, sensitivity: f64 },
    /// Every jump intensity multiplied by `exp(rate·u)`.
    IntensityScaled { base: LevyTriplet, rate: f64 },
    /// Explicit triplets at the atoms of a discrete factor law.
    Tabulated(Vec<(f64, LevyTriplet)>),
}

impl FactorFamily {
    /// Checks that `σ²` is the same for every tabulated entry.
    pub fn validate(&self) -> Result<()> {
        if let FactorFamily::Tabulated(rows) = self {
            if rows.is_empty() {
                return Err(Error::InvalidFamily("empty table"));
            }
            let s0 = rows[0].1.sigma2;
            for (_, t) in rows {
                if t.sigma2 != s0 {
                    return Err(Error::InconsistentDiffusion(s0, t.sigma2));
                }
            }
        }
        Ok(())
    }
}

/// Validated triplet of the family at factor value `u`.
pub fn conditional_triplet(family: &FactorFamily, u: f64) -> Result<CheckedTriplet> {
    let t = match family {
        FactorFamily::AffineDrift { base, sensitivity } => {
            LevyTriplet::new(base.drift + sensitivity * u, base.sigma2, base.measure.clone())
        }
        FactorFamily::IntensityScaled { base, rate } => {
            LevyTriplet::new(base.drift, base.sigma2, base.measure.scaled((rate * u).exp()))
        }
        FactorFamily::Tabulated(rows) => {
            family.validate()?;
            rows.iter()
                .find(|(v, _)| *v == u)
                .map(|(_, t)| t.clone())
                .ok_or(Error::NodeNotTabulated(u))?
        }
    };
    validate_triplet(t)
}

/// Payoff `g(ξ)` of a European claim written on the factor.
#[derive(Debug, Clone, PartialEq)]
pub enum PayoffSpec {
    /// Values at the factor nodes, in node order.
    Tabulated(Vec<f64>),
    /// `max(s0·exp(m + v·u) − strike, 0)`.
    CallOnFactor { s0: f64, m: f64, v: f64, strike: f64 },
    Constant(f64),
}

impl PayoffSpec {
    /// Payoff at each node.
    pub fn values(&self, nodes: &[FactorNode]) -> Result<Vec<f64>> {
        let out: Vec<f64> = match self {
            PayoffSpec::Tabulated(v) => {
                if v.len() != nodes.len() {
                    return Err(Error::PayoffLength { expected: nodes.len(), found: v.len() });
                }
                v.clone()
            }
            &PayoffSpec::CallOnFactor { s0, m, v, strike } => {
                nodes.iter().map(|n| (s0 * (m + v * n.u).exp() - strike).max(0.0)).collect()
            }
            &PayoffSpec::Constant(c) => alloc::vec![c; nodes.len()],
        };
        if let Some(i) = out.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFiniteNode(nodes[i].u));
        }
        Ok(out)
    }
}

/// Factor law, conditional family and trading horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    pub alpha: AlphaSpec,
    pub family: FactorFamily,
    pub horizon: f64,
}

impl FactorModel {
    /// Nodes of `α` paired with their conditional triplets.
    pub fn conditional_models(&self) -> Result<Vec<(FactorNode, CheckedTriplet)>> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidHorizon(self.horizon));
        }
        self.family.validate()?;
        nodes(&self.alpha)?
            .into_iter()
            .map(|n| conditional_triplet(&self.family, n.u).map(|t| (n, t)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::LevyMeasure;
    use alloc::vec;

    #[test]
    fn hermite_rule_reproduces_gaussian_moments() {
        for n in [1usize, 2, 3, 5, 10, 20, 64, 100] {
            let (t, w) = gauss_hermite(n);
            let total: f64 = w.iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-12, "n={n} total={total}");
            // ∫ t² e^{−t²} dt = √π/2, exact for n ≥ 2
            if n >= 2 {
                let m2: f64 = t.iter().zip(&w).map(|(t, w)| w * t * t).sum();
                assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12, "n={n}");
            }
            // ∫ t⁴ e^{−t²} dt = 3√π/4, exact for n ≥ 3
            if n >= 3 {
                let m4: f64 = t.iter().zip(&w).map(|(t, w)| w * t.powi(4)).sum();
                assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-10, "n={n}");
            }
            assert!(t.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn node_examples() {
        let one = nodes(&AlphaSpec::DiscreteAtoms(vec![(0.0, 1.0)])).unwrap();
        assert_eq!(one, vec![FactorNode { u: 0.0, weight: 1.0 }]);
        let g1 = nodes(&AlphaSpec::GaussianQuadrature { mean: 0.0, variance: 1.0, nodes: 1 }).unwrap();
        assert_eq!(g1.len(), 1);
        assert_eq!(g1[0].u, 0.0);
        assert!((g1[0].weight - 1.0).abs() < 1e-15);
        let g2 = nodes(&AlphaSpec::GaussianQuadrature { mean: 0.0, variance: 1.0, nodes: 2 }).unwrap();
        assert!((g2[0].u + 1.0).abs() < 1e-14 && (g2[1].u - 1.0).abs() < 1e-14);
        assert!((g2[0].weight - 0.5).abs() < 1e-15 && (g2[1].weight - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weights_normalised() {
        for n in [1usize, 7, 64, 128] {
            let ns = nodes(&AlphaSpec::GaussianQuadrature { mean: 0.3, variance: 2.0, nodes: n }).unwrap();
            let total: f64 = ns.iter().map(|n| n.weight).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(ns.iter().all(|n| n.weight > 0.0));
        }
    }

    #[test]
    fn invalid_alpha() {
        assert!(nodes(&AlphaSpec::DiscreteAtoms(vec![(0.0, 0.5)])).is_err());
        assert!(nodes(&AlphaSpec::DiscreteAtoms(vec![(0.0, 1.5), (1.0, -0.5)])).is_err());
        assert!(nodes(&AlphaSpec::DiscreteAtoms(vec![])).is_err());
        assert!(nodes(&AlphaSpec::GaussianQuadrature { mean: 0.0, variance: 0.0, nodes: 3 }).is_err());
        assert!(nodes(&AlphaSpec::GaussianQuadrature { mean: 0.0, variance: 1.0, nodes: 0 }).is_err());
    }

    #[test]
    fn expectation_examples() {
        let ns = nodes(&AlphaSpec::GaussianQuadrature { mean: 0.0, variance: 2.0, nodes: 9 }).unwrap();
        assert!((expect_over_alpha(&ns, |_| 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(expect_over_alpha(&ns, |u| u).unwrap().abs() < 1e-14);
        let ns2 = nodes(&AlphaSpec::GaussianQuadrature { mean: 0.0, variance: 2.0, nodes: 2 }).unwrap();
        assert!((expect_over_alpha(&ns2, |u| u * u).unwrap() - 2.0).abs() < 1e-13);
        assert_eq!(expect_over_alpha(&ns, |u| 1.0 / u), Err(Error::NonFiniteNode(0.0)));
    }

    #[test]
    fn conditional_triplet_examples() {
        let fam = FactorFamily::AffineDrift { base: LevyTriplet::diffusion(0.1, 0.04), sensitivity: 0.2 };
        let t = conditional_triplet(&fam, 0.0).unwrap();
        assert_eq!((t.drift(), t.sigma2()), (0.1, 0.04));
        assert!(conditional_triplet(&fam, -0.5).unwrap().drift().abs() < 1e-17);

        let base = LevyTriplet::new(0.0, 0.0, LevyMeasure::atoms(&[(0.5, 1.0)]));
        let fam = FactorFamily::IntensityScaled { base: base.clone(), rate: 1.0 };
        assert_eq!(conditional_triplet(&fam, 0.0).unwrap().measure(), &base.measure);
        let scaled = conditional_triplet(&fam, 1.0).unwrap();
        assert!((scaled.measure().total_mass() - 1.0f64.exp()).abs() < 1e-15);

        let fam = FactorFamily::Tabulated(vec![(0.0, base.clone()), (1.0, base.clone())]);
        assert!(conditional_triplet(&fam, 1.0).is_ok());
        assert_eq!(conditional_triplet(&fam, 0.5), Err(Error::NodeNotTabulated(0.5)));
        let bad = FactorFamily::Tabulated(vec![(0.0, base), (1.0, LevyTriplet::diffusion(0.0, 0.1))]);
        assert!(matches!(conditional_triplet(&bad, 0.0), Err(Error::InconsistentDiffusion(..))));
    }

    #[test]
    fn payoff_values() {
        let ns = nodes(&AlphaSpec::DiscreteAtoms(vec![(-1.0, 0.5), (1.0, 0.5)])).unwrap();
        assert_eq!(PayoffSpec::Constant(0.3).values(&ns).unwrap(), vec![0.3, 0.3]);
        let call = PayoffSpec::CallOnFactor { s0: 1.0, m: 0.0, v: 1.0f64.ln(), strike: 0.5 };
        assert_eq!(call.values(&ns).unwrap(), vec![0.5, 0.5]);
        let call = PayoffSpec::CallOnFactor { s0: 1.0, m: 0.0, v: 2.0f64.ln(), strike: 1.0 };
        let v = call.values(&ns).unwrap();
        assert_eq!(v[0], 0.0);
        assert!((v[1] - 1.0).abs() < 1e-15);
        assert!(matches!(PayoffSpec::Tabulated(vec![1.0]).values(&ns), Err(Error::PayoffLength { .. })));
    }
}
