//! Maximal expected utilities and utility indifference prices.
//!
//! With information quantities evaluated per factor node, the value function
//! of each HARA utility is a weighted sum over the nodes, and a claim `g`
//! enters by replacing the capital `x` with `x + g(u)`:
//!
//! * log: `V(x, g) = Σ w_i [ln(x + g_i) + 𝓘_i]`
//! * power: `V(x, g) = (1/p) Σ w_i (x + g_i)^p H_i^{1−p}`
//! * exp: `V(x, g) = 1 − Σ w_i exp(−γ(x + g_i) − I_i)`
//!
//! The buyer's price solves `V(x, 0) = V(x − p^b, g)` and the seller's price
//! solves `V(x, 0) = V(x + p^s, −g)`. Log and power prices are found by
//! bisection of the normalised equations; the exp price is closed form.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::factor::{FactorModel, FactorNode, PayoffSpec};
use crate::info::InfoQuantities;
use crate::levy::HaraUtility;
use crate::measure::{solve_beta, ConditionMode, SolverSettings};
use crate::root::bisect;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Buyer,
    Seller,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Buyer => "buyer",
            Side::Seller => "seller",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingSettings {
    /// Bracket width at which the price bisection stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative distance kept from the edge of the wealth domain.
    pub domain_margin: f64,
}

impl Default for PricingSettings {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200, domain_margin: 1e-12 }
    }
}

/// A solved price with root-finder statistics (zero for closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceSolve {
    pub price: f64,
    pub iterations: usize,
    pub width: f64,
}

impl PriceSolve {
    fn closed_form(price: f64) -> Self {
        Self { price, iterations: 0, width: 0.0 }
    }
}

fn weighted_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(terms);
    acc.value()
}

/// `ln Σ exp(a_i)` with the largest exponent factored out.
fn log_sum_exp(exponents: &[f64]) -> Result<f64> {
    if exponents.iter().any(|a| a.is_nan() || *a == f64::INFINITY) {
        return Err(Error::OverflowGuard);
    }
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(max);
    }
    Ok(max + weighted_sum(exponents.iter().map(|a| (a - max).exp())).ln())
}

/// Per-node information value used by `utility`.
pub fn relevant_info(utility: &HaraUtility, infos: &[InfoQuantities]) -> Result<Vec<f64>> {
    infos
        .iter()
        .enumerate()
        .map(|(i, q)| q.for_utility(utility).ok_or(Error::MissingInfo(i)))
        .collect()
}

fn check_lengths(nodes: &[FactorNode], other: usize) -> Result<()> {
    if nodes.len() != other {
        return Err(Error::PayoffLength { expected: nodes.len(), found: other });
    }
    Ok(())
}

/// Maximal expected utility `V(x, g)`; pass a zero claim for `V(x, 0)`.
pub fn value_function(
    utility: &HaraUtility,
    x: f64,
    claim: &[f64],
    nodes: &[FactorNode],
    infos: &[InfoQuantities],
) -> Result<f64> {
    check_lengths(nodes, claim.len())?;
    check_lengths(nodes, infos.len())?;
    let info = relevant_info(utility, infos)?;
    value_from_info(utility, x, claim, nodes, &info)
}

fn value_from_info(utility: &HaraUtility, x: f64, claim: &[f64], nodes: &[FactorNode], info: &[f64]) -> Result<f64> {
    let wealth = |g: f64| -> Result<f64> {
        let w = x + g;
        if w > 0.0 {
            Ok(w)
        } else {
            Err(Error::DomainViolation(w))
        }
    };
    match *utility {
        HaraUtility::Log => {
            let mut acc = CompensatedSum::new();
            for ((n, &g), &ent) in nodes.iter().zip(claim).zip(info) {
                acc.add(n.weight * (wealth(g)?.ln() + ent));
            }
            Ok(acc.value())
        }
        HaraUtility::Power { p } => {
            let mut acc = CompensatedSum::new();
            for ((n, &g), &h) in nodes.iter().zip(claim).zip(info) {
                acc.add(n.weight * wealth(g)?.powf(p) * h.powf(1.0 - p));
            }
            Ok(acc.value() / p)
        }
        HaraUtility::Exp { gamma } => {
            let exps: Vec<f64> =
                nodes.iter().zip(claim).zip(info).map(|((n, &g), &i)| n.weight.ln() - gamma * (x + g) - i).collect();
            Ok(1.0 - log_sum_exp(&exps)?.exp())
        }
    }
}

/// Indifference pricing for one utility, capital and set of weighted nodes.
///
/// [`price`](Self::price) solves the indifference equation on its natural
/// domain (all wealth arguments positive) without the `0 < g < x` restriction;
/// the `price_*` functions add that check.
#[derive(Debug, Clone, PartialEq)]
pub struct IndifferenceProblem {
    utility: HaraUtility,
    capital: f64,
    weights: Vec<f64>,
    /// Log: unused. Power: `H_i^{1−p}`-normalised weights. Exp: `I_i`.
    info: Vec<f64>,
}

impl IndifferenceProblem {
    /// `info` holds `𝓘_i` (log, ignored), `H_i` (power) or `I_i` (exp).
    pub fn new(utility: HaraUtility, capital: f64, nodes: &[FactorNode], info: &[f64]) -> Result<Self> {
        utility.validate()?;
        check_lengths(nodes, info.len())?;
        if !capital.is_finite() || (capital <= 0.0 && !matches!(utility, HaraUtility::Exp { .. })) {
            return Err(Error::InvalidCapital(capital));
        }
        if let Some(i) = info.iter().position(|v| !v.is_finite()) {
            return Err(Error::MissingInfo(i));
        }
        let mut weights: Vec<f64> = nodes.iter().map(|n| n.weight).collect();
        if let HaraUtility::Power { p } = utility {
            if let Some(i) = info.iter().position(|&h| h <= 0.0) {
                return Err(Error::MissingInfo(i));
            }
            // Factor out the largest H^{1−p} and normalise, in log space.
            let logs: Vec<f64> = weights.iter().zip(info).map(|(w, h)| w.ln() + (1.0 - p) * h.ln()).collect();
            let total = log_sum_exp(&logs)?;
            weights = logs.iter().map(|l| (l - total).exp()).collect();
        }
        Ok(Self { utility, capital, weights, info: info.to_vec() })
    }

    pub fn utility(&self) -> HaraUtility {
        self.utility
    }

    pub fn capital(&self) -> f64 {
        self.capital
    }

    /// Normalised indifference equation; `None` outside the wealth domain.
    fn equation(&self, claim: &[f64], side: Side, y: f64) -> Option<f64> {
        let x = self.capital;
        let mut acc = CompensatedSum::new();
        for (&w, &g) in self.weights.iter().zip(claim) {
            let ratio = match side {
                Side::Buyer => 1.0 - y / x + g / x,
                Side::Seller => 1.0 + y / x - g / x,
            };
            if ratio <= 0.0 {
                return None;
            }
            let term = match self.utility {
                HaraUtility::Log => ratio.ln(),
                HaraUtility::Power { p } => ratio.powf(p) - 1.0,
                HaraUtility::Exp { .. } => unreachable!("closed form"),
            };
            acc.add(w * term);
        }
        Some(acc.value())
    }

    /// Indifference price of `claim` for `side`.
    pub fn price(&self, claim: &[f64], side: Side, settings: &PricingSettings) -> Result<PriceSolve> {
        if claim.len() != self.weights.len() {
            return Err(Error::PayoffLength { expected: self.weights.len(), found: claim.len() });
        }
        if let Some(i) = claim.iter().position(|g| !g.is_finite()) {
            return Err(Error::PayoffOutOfRange { node: i, g: claim[i], x: self.capital });
        }
        if let HaraUtility::Exp { gamma } = self.utility {
            return self.price_exp(claim, gamma, side).map(PriceSolve::closed_form);
        }
        let x = self.capital;
        let f = |y: f64| -> core::result::Result<f64, Error> {
            self.equation(claim, side, y).ok_or(Error::DomainViolation(y))
        };

        // Paper bracket first.
        if let (Some(f0), Some(fx)) = (self.equation(claim, side, 0.0), self.equation(claim, side, x)) {
            if let Some(b) = bisect(f, 0.0, x, f0, fx, settings.tol, settings.max_iter)? {
                return Ok(PriceSolve { price: b.root, iterations: b.iterations, width: b.width });
            }
        }

        // Otherwise start next to the edge of the wealth domain and walk away
        // from it until the equation changes sign.
        let (edge, away) = match side {
            Side::Buyer => (x + claim.iter().copied().fold(f64::INFINITY, f64::min), -1.0),
            Side::Seller => (claim.iter().copied().fold(f64::NEG_INFINITY, f64::max) - x, 1.0),
        };
        let margin = settings.domain_margin * x.max(edge.abs());
        let near = edge + away * margin;
        let f_near = f(near)?;
        let mut step = x;
        for _ in 0..64 {
            let far = near + away * step;
            let f_far = f(far)?;
            if (f_far < 0.0) != (f_near < 0.0) || f_far == 0.0 {
                let (lo, hi, f_lo, f_hi) = if far < near { (far, near, f_far, f_near) } else { (near, far, f_near, f_far) };
                let b = bisect(f, lo, hi, f_lo, f_hi, settings.tol, settings.max_iter)?
                    .expect("bracket has a sign change");
                return Ok(PriceSolve { price: b.root, iterations: b.iterations, width: b.width });
            }
            step *= 2.0;
        }
        Err(Error::NoConvergence { lo: edge.min(near + away * step), hi: edge.max(near + away * step) })
    }

    fn price_exp(&self, claim: &[f64], gamma: f64, side: Side) -> Result<f64> {
        let sign = match side {
            Side::Buyer => -1.0,
            Side::Seller => 1.0,
        };
        let base: Vec<f64> = self.weights.iter().zip(&self.info).map(|(w, i)| w.ln() - i).collect();
        let shifted: Vec<f64> = base.iter().zip(claim).map(|(b, g)| b + sign * gamma * g).collect();
        let lse_base = log_sum_exp(&base)?;
        let lse_shifted = log_sum_exp(&shifted)?;
        let price = match side {
            Side::Buyer => (lse_base - lse_shifted) / gamma,
            Side::Seller => (lse_shifted - lse_base) / gamma,
        };
        if price.is_finite() {
            Ok(price)
        } else {
            Err(Error::OverflowGuard)
        }
    }
}

fn check_payoff_range(x: f64, g: &[f64]) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidCapital(x));
    }
    match g.iter().position(|&v| !(v > 0.0 && v < x)) {
        Some(node) => Err(Error::PayoffOutOfRange { node, g: g[node], x }),
        None => Ok(()),
    }
}

/// Log-utility indifference price; requires `0 < g(u) < x` at every node.
pub fn price_log(x: f64, g: &[f64], nodes: &[FactorNode], side: Side, settings: &PricingSettings) -> Result<PriceSolve> {
    check_lengths(nodes, g.len())?;
    check_payoff_range(x, g)?;
    let zeros = alloc::vec![0.0; nodes.len()];
    IndifferenceProblem::new(HaraUtility::Log, x, nodes, &zeros)?.price(g, side, settings)
}

/// Power-utility indifference price given `H^(q)_T` per node; requires
/// `0 < g(u) < x` at every node.
pub fn price_power(
    x: f64,
    g: &[f64],
    nodes: &[FactorNode],
    hellinger: &[f64],
    p: f64,
    side: Side,
    settings: &PricingSettings,
) -> Result<PriceSolve> {
    check_lengths(nodes, g.len())?;
    check_payoff_range(x, g)?;
    IndifferenceProblem::new(HaraUtility::Power { p }, x, nodes, hellinger)?.price(g, side, settings)
}

/// Exp-utility indifference price given `I_T` per node; independent of the
/// capital.
pub fn price_exp(g: &[f64], nodes: &[FactorNode], kl: &[f64], gamma: f64, side: Side) -> Result<f64> {
    check_lengths(nodes, g.len())?;
    let problem = IndifferenceProblem::new(HaraUtility::Exp { gamma }, 0.0, nodes, kl)?;
    problem.price(g, side, &PricingSettings::default()).map(|s| s.price)
}

/// Per-node inputs and outputs of a pricing run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeReport {
    pub u: f64,
    pub weight: f64,
    pub payoff: f64,
    /// Solved Girsanov parameter, when the node came from a Lévy model.
    pub beta: Option<f64>,
    pub residual: Option<f64>,
    pub info: InfoQuantities,
}

/// Buyer and seller prices with the value functions they equalise.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceReport {
    pub utility: HaraUtility,
    pub capital: f64,
    pub p_buyer: f64,
    pub p_seller: f64,
    /// `V(x, 0)`.
    pub v_zero: f64,
    /// `V(x − p^b, g)`.
    pub v_claim_buyer: f64,
    /// `V(x + p^s, −g)`.
    pub v_claim_seller: f64,
    pub buyer_solve: PriceSolve,
    pub seller_solve: PriceSolve,
    /// `p^b(g) + p^s(−g)`.
    pub duality_gap: f64,
    pub nodes: Vec<NodeReport>,
}

impl PriceReport {
    /// Largest `|V(claim) − V(x, 0)|`, relative to `max(1, |V(x, 0)|)`.
    pub fn value_mismatch(&self) -> f64 {
        let scale = self.v_zero.abs().max(1.0);
        (self.v_claim_buyer - self.v_zero).abs().max((self.v_claim_seller - self.v_zero).abs()) / scale
    }
}

/// Prices `payoff` on nodes whose information quantities are known.
///
/// Log and power prices enforce `0 < g < x`. The duality gap is computed on
/// the natural domain of the seller's equation for `−g`.
pub fn price_report(
    utility: HaraUtility,
    x: f64,
    payoff: &[f64],
    nodes: Vec<NodeReport>,
    settings: &PricingSettings,
) -> Result<PriceReport> {
    let weighted: Vec<FactorNode> = nodes.iter().map(|n| FactorNode { u: n.u, weight: n.weight }).collect();
    let infos: Vec<InfoQuantities> = nodes.iter().map(|n| n.info).collect();
    let info = match utility {
        // Log prices do not depend on the entropies.
        HaraUtility::Log => alloc::vec![0.0; nodes.len()],
        _ => relevant_info(&utility, &infos)?,
    };
    check_lengths(&weighted, payoff.len())?;
    if !matches!(utility, HaraUtility::Exp { .. }) {
        check_payoff_range(x, payoff)?;
    }
    let problem = IndifferenceProblem::new(utility, x, &weighted, &info)?;
    let buyer = problem.price(payoff, Side::Buyer, settings)?;
    let seller = problem.price(payoff, Side::Seller, settings)?;
    let negated: Vec<f64> = payoff.iter().map(|g| -g).collect();
    let seller_neg = problem.price(&negated, Side::Seller, settings)?;

    let zeros = alloc::vec![0.0; nodes.len()];
    let v_zero = value_function(&utility, x, &zeros, &weighted, &infos)?;
    let v_claim_buyer = value_function(&utility, x - buyer.price, payoff, &weighted, &infos)?;
    let v_claim_seller = value_function(&utility, x + seller.price, &negated, &weighted, &infos)?;
    let nodes = nodes.into_iter().zip(payoff).map(|(n, &g)| NodeReport { payoff: g, ..n }).collect();
    Ok(PriceReport {
        utility,
        capital: x,
        p_buyer: buyer.price,
        p_seller: seller.price,
        v_zero,
        v_claim_buyer,
        v_claim_seller,
        buyer_solve: buyer,
        seller_solve: seller,
        duality_gap: buyer.price + seller_neg.price,
        nodes,
    })
}

/// Solves the minimal measure at every factor node, evaluates its
/// information quantity and prices `payoff`.
pub fn price_factor_model(
    model: &FactorModel,
    utility: HaraUtility,
    x: f64,
    payoff: &PayoffSpec,
    mode: ConditionMode,
    solver: &SolverSettings,
    settings: &PricingSettings,
) -> Result<PriceReport> {
    let reports = solve_nodes(model, utility, mode, solver)?;
    let weighted: Vec<FactorNode> = reports.iter().map(|n| FactorNode { u: n.u, weight: n.weight }).collect();
    let g = payoff.values(&weighted)?;
    price_report(utility, x, &g, reports, settings)
}

/// Girsanov solution and information quantity at every factor node.
pub fn solve_nodes(
    model: &FactorModel,
    utility: HaraUtility,
    mode: ConditionMode,
    solver: &SolverSettings,
) -> Result<Vec<NodeReport>> {
    utility.validate()?;
    model
        .conditional_models()?
        .into_iter()
        .map(|(n, t)| {
            let s = solve_beta(&t, &utility, mode, solver)?;
            let info = InfoQuantities::evaluate(&t, &s, model.horizon)?;
            Ok(NodeReport {
                u: n.u,
                weight: n.weight,
                payoff: 0.0,
                beta: Some(s.beta),
                residual: Some(s.residual),
                info,
            })
        })
        .collect()
}

/// One randomised instance for [`risk_axioms`].
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCase {
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    /// Mixing weight in `(0, 1)`.
    pub mix: f64,
    /// Cash amount added for translation invariance.
    pub shift: f64,
}

/// Largest observed violation of each property (negative means slack).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AxiomReport {
    pub trials: usize,
    pub seller_translation: f64,
    pub seller_monotonicity: f64,
    pub seller_convexity: f64,
    pub buyer_translation: f64,
    pub buyer_monotonicity: f64,
    pub buyer_convexity: f64,
    pub duality: f64,
}

impl AxiomReport {
    /// `(name, worst violation)` pairs.
    pub fn rows(&self) -> [(&'static str, f64); 7] {
        [
            ("seller_translation", self.seller_translation),
            ("seller_monotonicity", self.seller_monotonicity),
            ("seller_convexity", self.seller_convexity),
            ("buyer_translation", self.buyer_translation),
            ("buyer_monotonicity", self.buyer_monotonicity),
            ("buyer_convexity", self.buyer_convexity),
            ("duality", self.duality),
        ]
    }
}

/// Checks that `p^s` and `−p^b` are convex risk measures on the given cases:
/// translation invariance, monotonicity, convexity, and the duality
/// `p^b(g) = −p^s(−g)`.
///
/// `seller` and `buyer` must accept payoffs outside `(0, x)`, since the
/// duality check prices `−g`.
pub fn risk_axioms<S, B>(seller: S, buyer: B, cases: &[AxiomCase], tol: f64) -> Result<AxiomReport>
where
    S: Fn(&[f64]) -> Result<f64>,
    B: Fn(&[f64]) -> Result<f64>,
{
    let mut report = AxiomReport { trials: cases.len(), ..AxiomReport::default() };
    for slot in [
        &mut report.seller_translation,
        &mut report.seller_monotonicity,
        &mut report.seller_convexity,
        &mut report.buyer_translation,
        &mut report.buyer_monotonicity,
        &mut report.buyer_convexity,
        &mut report.duality,
    ] {
        *slot = f64::NEG_INFINITY;
    }
    for (trial, case) in cases.iter().enumerate() {
        let shifted: Vec<f64> = case.g1.iter().map(|g| g + case.shift).collect();
        let upper: Vec<f64> = case.g1.iter().zip(&case.g2).map(|(a, b)| a.max(*b)).collect();
        let mixed: Vec<f64> =
            case.g1.iter().zip(&case.g2).map(|(a, b)| case.mix * a + (1.0 - case.mix) * b).collect();
        let negated: Vec<f64> = case.g1.iter().map(|g| -g).collect();

        let s1 = seller(&case.g1)?;
        let s2 = seller(&case.g2)?;
        let b1 = buyer(&case.g1)?;
        let b2 = buyer(&case.g2)?;

        let check = |axiom: &'static str, slot: &mut f64, lhs: f64, rhs: f64| -> Result<()> {
            let excess = lhs - rhs;
            *slot = slot.max(excess);
            if excess > tol || excess.is_nan() {
                return Err(Error::AxiomViolation { axiom, trial, lhs, rhs });
            }
            Ok(())
        };

        let st = seller(&shifted)?;
        check("seller translation", &mut report.seller_translation, (st - s1 - case.shift).abs(), 0.0)?;
        check("seller monotonicity", &mut report.seller_monotonicity, s1, seller(&upper)?)?;
        let mix_rhs = case.mix * s1 + (1.0 - case.mix) * s2;
        check("seller convexity", &mut report.seller_convexity, seller(&mixed)?, mix_rhs)?;

        let bt = buyer(&shifted)?;
        check("buyer translation", &mut report.buyer_translation, (bt - b1 - case.shift).abs(), 0.0)?;
        check("buyer monotonicity", &mut report.buyer_monotonicity, b1, buyer(&upper)?)?;
        let neg_mix_rhs = -(case.mix * b1 + (1.0 - case.mix) * b2);
        check("buyer convexity", &mut report.buyer_convexity, -buyer(&mixed)?, neg_mix_rhs)?;

        check("duality", &mut report.duality, (b1 + seller(&negated)?).abs(), 0.0)?;
    }
    Ok(report)
}
