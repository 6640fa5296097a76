//! Girsanov parameter of the f-divergence minimal martingale measure.
//!
//! For a Lévy model the minimal measure for a HARA utility is described by a
//! constant `β` (drift shift of the continuous part) and a jump density
//! `Y(x)` that belongs to a one-parameter family fixed by the utility:
//!
//! | utility | `Y(x)` |
//! |---|---|
//! | log | `(1 − βx)^{-1}` |
//! | power `p` | `(1 − aβx)^{p−1}`, `a = |p|/(p−1)²` |
//! | exp | `exp(βx)` |
//!
//! `β` is the root of the martingale condition, which in [`ConditionMode::Corrected`]
//! reads `b + βσ² + ∫ x (Y(x) − 1) ν(dx) = 0`. The residual is strictly increasing
//! in `β` on the admissible interval (where `Y > 0` on the support), so the root
//! is unique and is found by bracketed bisection.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::levy::{CheckedTriplet, HaraUtility, LevyMeasure};
use crate::root::bisect;

/// Form of the jump term in the martingale condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConditionMode {
    /// `∫ (Y(x) − 1) ν(dx)`, without the truncation function.
    PaperLiteral,
    /// `∫ x (Y(x) − 1) ν(dx)`: the drift of `X` under the new measure.
    #[default]
    Corrected,
}

impl ConditionMode {
    pub fn name(&self) -> &'static str {
        match self {
            ConditionMode::PaperLiteral => "paper-literal",
            ConditionMode::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Required `|residual|` at the returned root.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative shrink of the admissible interval ends.
    pub boundary_margin: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, boundary_margin: 1e-9 }
    }
}

/// Solved Girsanov parameters for one conditional model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GirsanovSolution {
    pub utility: HaraUtility,
    pub beta: f64,
    pub condition_mode: ConditionMode,
    /// Martingale condition evaluated at `beta`.
    pub residual: f64,
    /// Open interval of `β` for which `Y > 0` on the support.
    pub admissible_interval: (f64, f64),
    pub iterations: usize,
}

impl GirsanovSolution {
    /// Jump density `Y(x)` of the solved measure.
    pub fn y(&self, x: f64) -> Result<f64> {
        girsanov_y(&self.utility, self.beta, x)
    }
}

/// Scale `a = |p|/(p−1)²` applied to `βx` in the power family.
pub(crate) fn power_scale(p: f64) -> f64 {
    p.abs() / ((p - 1.0) * (p - 1.0))
}

/// Jump density of the minimal measure for `utility` at jump size `x`.
pub fn girsanov_y(utility: &HaraUtility, beta: f64, x: f64) -> Result<f64> {
    match *utility {
        HaraUtility::Log => {
            let base = 1.0 - beta * x;
            if base <= 0.0 {
                return Err(Error::YNotPositive { beta, x });
            }
            Ok(1.0 / base)
        }
        HaraUtility::Power { p } => {
            let base = 1.0 - power_scale(p) * beta * x;
            if base <= 0.0 {
                return Err(Error::YNotPositive { beta, x });
            }
            Ok(base.powf(p - 1.0))
        }
        HaraUtility::Exp { .. } => Ok((beta * x).exp()),
    }
}

/// Martingale condition `b + βσ² + ∫ j(x)(Y(x) − 1) ν(dx)` with `j(x) = x`
/// (corrected) or `j(x) = 1` (paper-literal).
pub fn martingale_residual(
    t: &CheckedTriplet,
    utility: &HaraUtility,
    beta: f64,
    mode: ConditionMode,
) -> Result<f64> {
    let jumps = t.measure().try_integrate(|x| {
        let y = girsanov_y(utility, beta, x)?;
        Ok(match mode {
            ConditionMode::Corrected => x * (y - 1.0),
            ConditionMode::PaperLiteral => y - 1.0,
        })
    })?;
    Ok(t.drift() + beta * t.sigma2() + jumps)
}

/// Open interval of `β` on which `Y(x) > 0` for every charged `x`.
pub fn admissible_interval(measure: &LevyMeasure, utility: &HaraUtility) -> (f64, f64) {
    let scale = match *utility {
        HaraUtility::Log => 1.0,
        HaraUtility::Power { p } => power_scale(p),
        HaraUtility::Exp { .. } => return (f64::NEG_INFINITY, f64::INFINITY),
    };
    let (min_neg, max_pos) = measure.support_extremes();
    let lo = min_neg.map_or(f64::NEG_INFINITY, |x| 1.0 / (scale * x));
    let hi = max_pos.map_or(f64::INFINITY, |x| 1.0 / (scale * x));
    (lo, hi)
}

/// Largest bracket magnitude tried when an end of the admissible interval is
/// infinite.
const MAX_BRACKET: f64 = 1.0e12;

/// Solves the martingale condition for `β`.
///
/// Brackets are grown geometrically from `β = 0` and clipped to the admissible
/// interval shrunk by `settings.boundary_margin`. Bisection then runs until the
/// bracket cannot be halved further, and the end with the smaller residual is
/// returned.
pub fn solve_beta(
    t: &CheckedTriplet,
    utility: &HaraUtility,
    mode: ConditionMode,
    settings: &SolverSettings,
) -> Result<GirsanovSolution> {
    utility.validate()?;
    let admissible = admissible_interval(t.measure(), utility);
    let residual = |beta: f64| martingale_residual(t, utility, beta, mode);

    let r0 = residual(0.0)?;
    if r0 == 0.0 {
        return Ok(GirsanovSolution {
            utility: *utility,
            beta: 0.0,
            condition_mode: mode,
            residual: 0.0,
            admissible_interval: admissible,
            iterations: 0,
        });
    }

    let margin = settings.boundary_margin;
    let lo_limit = if admissible.0.is_finite() { admissible.0 * (1.0 - margin) } else { -MAX_BRACKET };
    let hi_limit = if admissible.1.is_finite() { admissible.1 * (1.0 - margin) } else { MAX_BRACKET };

    // The corrected residual increases in β, so a positive value at 0 puts the
    // root below 0. The literal form need not be monotone; there the other
    // direction is searched too.
    let preferred_down = r0 > 0.0;
    let directions: &[bool] = match mode {
        ConditionMode::Corrected => {
            if preferred_down {
                &[true]
            } else {
                &[false]
            }
        }
        ConditionMode::PaperLiteral => {
            if preferred_down {
                &[true, false]
            } else {
                &[false, true]
            }
        }
    };

    let mut last = (0.0, r0);
    let mut iterations = 0;
    for &down in directions {
        let limit = if down { lo_limit } else { hi_limit };
        let mut inner = 0.0;
        let mut r_inner = r0;
        let mut step: f64 = 1.0;
        loop {
            let mut candidate = if down { -step } else { step };
            let at_limit = if down { candidate <= limit } else { candidate >= limit };
            if at_limit {
                candidate = limit;
            }
            let r = match residual(candidate) {
                Ok(r) if r.is_finite() => r,
                // Overflow of exp(βx) far out: treat as the end of the search.
                Ok(_) | Err(Error::NonFiniteIntegrand(_)) => break,
                Err(e) => return Err(e),
            };
            iterations += 1;
            last = (candidate, r);
            if (r < 0.0) != (r0 < 0.0) || r == 0.0 {
                let (lo, hi, r_lo, r_hi) =
                    if down { (candidate, inner, r, r_inner) } else { (inner, candidate, r_inner, r) };
                let found = bisect(residual, lo, hi, r_lo, r_hi, 0.0, settings.max_iter)?
                    .expect("bracket has a sign change");
                iterations += found.iterations;
                if found.value.abs() > settings.tol {
                    return Err(Error::ToleranceNotReached {
                        beta: found.root,
                        residual: found.value,
                        tol: settings.tol,
                    });
                }
                return Ok(GirsanovSolution {
                    utility: *utility,
                    beta: found.root,
                    condition_mode: mode,
                    residual: found.value,
                    admissible_interval: admissible,
                    iterations,
                });
            }
            if at_limit {
                break;
            }
            inner = candidate;
            r_inner = r;
            step *= 2.0;
        }
    }

    let (lo, hi, r_lo, r_hi) = if last.0 < 0.0 { (last.0, 0.0, last.1, r0) } else { (0.0, last.0, r0, last.1) };
    Err(Error::NoSignChange { lo, hi, r_lo, r_hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{validate_triplet, LevyTriplet};

    fn checked(b: f64, s2: f64, atoms: &[(f64, f64)]) -> CheckedTriplet {
        validate_triplet(LevyTriplet::new(b, s2, LevyMeasure::atoms(atoms))).unwrap()
    }

    const UTILITIES: [HaraUtility; 5] = [
        HaraUtility::Log,
        HaraUtility::Power { p: 0.5 },
        HaraUtility::Power { p: -1.0 },
        HaraUtility::Power { p: -3.0 },
        HaraUtility::Exp { gamma: 1.0 },
    ];

    #[test]
    fn y_examples() {
        assert_eq!(girsanov_y(&HaraUtility::Log, 0.0, 0.5).unwrap(), 1.0);
        let y = girsanov_y(&HaraUtility::Exp { gamma: 1.0 }, -0.2107, 0.5).unwrap();
        assert!((y - 0.9).abs() < 5e-5);
        assert!(matches!(
            girsanov_y(&HaraUtility::Power { p: 0.5 }, 2.1, 0.5),
            Err(Error::YNotPositive { .. })
        ));
        assert!(girsanov_y(&HaraUtility::Log, 2.0, 0.5).is_err());
    }

    #[test]
    fn residual_examples() {
        let t = checked(0.1, 0.04, &[]);
        let r = martingale_residual(&t, &HaraUtility::Exp { gamma: 1.0 }, 0.0, ConditionMode::Corrected);
        assert_eq!(r.unwrap(), 0.1);
        let r = martingale_residual(&t, &HaraUtility::Log, -2.5, ConditionMode::Corrected).unwrap();
        assert!(r.abs() < 1e-15);
        let t = checked(0.05, 0.0, &[(0.5, 1.0)]);
        let beta = 2.0 * 0.9f64.ln();
        let r = martingale_residual(&t, &HaraUtility::Exp { gamma: 1.0 }, beta, ConditionMode::Corrected);
        assert!(r.unwrap().abs() < 1e-12);
    }

    #[test]
    fn pure_diffusion_root_for_every_utility() {
        let t = checked(0.1, 0.04, &[]);
        for u in UTILITIES {
            for mode in [ConditionMode::Corrected, ConditionMode::PaperLiteral] {
                let s = solve_beta(&t, &u, mode, &SolverSettings::default()).unwrap();
                assert!((s.beta + 2.5).abs() < 1e-12, "{u:?} {mode:?} {}", s.beta);
            }
        }
    }

    #[test]
    fn zero_drift_gives_identity_measure() {
        let t = checked(0.0, 0.02, &[(0.4, 1.0), (-0.3, 2.0)]);
        for u in UTILITIES {
            let s = solve_beta(&t, &u, ConditionMode::Corrected, &SolverSettings::default()).unwrap();
            assert_eq!(s.beta, 0.0);
            assert_eq!(s.y(0.4).unwrap(), 1.0);
            assert_eq!(s.y(-0.3).unwrap(), 1.0);
        }
    }

    #[test]
    fn exp_single_atom_matches_closed_form() {
        let t = checked(0.05, 0.0, &[(0.5, 1.0)]);
        let s = solve_beta(&t, &HaraUtility::Exp { gamma: 1.0 }, ConditionMode::Corrected, &SolverSettings::default())
            .unwrap();
        assert!((s.beta - 2.0 * 0.9f64.ln()).abs() < 1e-12);
        assert!(s.residual.abs() < 1e-12);
    }

    #[test]
    fn solution_stays_admissible() {
        let t = checked(0.3, 0.01, &[(0.8, 1.0), (-0.6, 0.5)]);
        for u in UTILITIES {
            let s = solve_beta(&t, &u, ConditionMode::Corrected, &SolverSettings::default()).unwrap();
            let (lo, hi) = s.admissible_interval;
            assert!(lo < s.beta && s.beta < hi);
            assert!(s.y(0.8).unwrap() > 0.0 && s.y(-0.6).unwrap() > 0.0);
        }
    }

    #[test]
    fn admissible_interval_ends() {
        let m = LevyMeasure::atoms(&[(0.5, 1.0), (-0.25, 1.0)]);
        assert_eq!(admissible_interval(&m, &HaraUtility::Log), (-4.0, 2.0));
        assert_eq!(admissible_interval(&m, &HaraUtility::Power { p: 0.5 }), (-2.0, 1.0));
        let up = LevyMeasure::atoms(&[(0.5, 1.0)]);
        assert_eq!(admissible_interval(&up, &HaraUtility::Log), (f64::NEG_INFINITY, 2.0));
        assert_eq!(
            admissible_interval(&m, &HaraUtility::Exp { gamma: 2.0 }),
            (f64::NEG_INFINITY, f64::INFINITY)
        );
    }

    #[test]
    fn no_sign_change_when_drift_exceeds_jump_compensation() {
        // Under the log family the jump term is bounded below by -∫xν = -0.5.
        let t = checked(1.0, 0.0, &[(0.5, 1.0)]);
        let err = solve_beta(&t, &HaraUtility::Log, ConditionMode::Corrected, &SolverSettings::default());
        assert!(matches!(err, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn deterministic_drift_has_no_measure() {
        let t = checked(0.1, 0.0, &[]);
        let err = solve_beta(&t, &HaraUtility::Log, ConditionMode::Corrected, &SolverSettings::default());
        assert!(matches!(err, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn modes_differ_with_jumps() {
        let t = checked(0.05, 0.0, &[(0.5, 1.0)]);
        let u = HaraUtility::Exp { gamma: 1.0 };
        let c = solve_beta(&t, &u, ConditionMode::Corrected, &SolverSettings::default()).unwrap();
        let l = solve_beta(&t, &u, ConditionMode::PaperLiteral, &SolverSettings::default()).unwrap();
        // literal: 0.05 + e^{0.5β} − 1 = 0
        assert!((l.beta - 2.0 * 0.95f64.ln()).abs() < 1e-12);
        assert!((c.beta - l.beta).abs() > 0.1);
    }
}
