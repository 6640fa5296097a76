use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by model validation, solvers and pricing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jump location {0} is at or below -1")]
    JumpBelowFloor(f64),
    #[error("jump location {0} lies outside the supported range (-1, 1]")]
    UnsupportedSupport(f64),
    #[error("negative jump intensity or density {0}")]
    NegativeMass(f64),
    #[error("non-finite value in field `{0}`")]
    NonFiniteField(&'static str),
    #[error("density grid arrays have mismatched lengths ({nodes}, {widths}, {density})")]
    GridShape {
        nodes: usize,
        widths: usize,
        density: usize,
    },
    #[error("integrand is not finite at jump location {0}")]
    NonFiniteIntegrand(f64),
    #[error("invalid utility parameter: {0}")]
    InvalidUtility(&'static str),

    #[error("jump density base is not positive at beta={beta}, x={x}")]
    YNotPositive { beta: f64, x: f64 },
    #[error("martingale residual has one sign on [{lo}, {hi}] (residuals {r_lo}, {r_hi})")]
    NoSignChange { lo: f64, hi: f64, r_lo: f64, r_hi: f64 },
    #[error("residual {residual} at beta={beta} exceeds tolerance {tol}")]
    ToleranceNotReached { beta: f64, residual: f64, tol: f64 },

    #[error("information quantity requires {expected} utility, solution was for {found}")]
    UtilityMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),

    #[error("invalid factor law: {0}")]
    InvalidAlpha(&'static str),
    #[error("invalid factor family: {0}")]
    InvalidFamily(&'static str),
    #[error("functional is not finite at factor node {0}")]
    NonFiniteNode(f64),
    #[error("factor value {0} is not a tabulated node")]
    NodeNotTabulated(f64),
    #[error("diffusion variance differs across factor values ({0} vs {1})")]
    InconsistentDiffusion(f64, f64),
    #[error("payoff table has {found} values for {expected} nodes")]
    PayoffLength { expected: usize, found: usize },

    #[error("non-positive wealth argument {0} in value function")]
    DomainViolation(f64),
    #[error("missing information quantity for node {0}")]
    MissingInfo(usize),
    #[error("payoff {g} at node {node} is outside (0, {x})")]
    PayoffOutOfRange { node: usize, g: f64, x: f64 },
    #[error("price equation has no root in [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },
    #[error("non-finite input to exponential aggregation")]
    OverflowGuard,
    #[error("invalid capital {0}")]
    InvalidCapital(f64),
    #[error("{axiom} violated in trial {trial}: {lhs} > {rhs}")]
    AxiomViolation {
        axiom: &'static str,
        trial: usize,
        lhs: f64,
        rhs: f64,
    },

    #[error("invalid GBM model: {0}")]
    InvalidModel(&'static str),
    #[error("Hellinger order {q} must exceed {min}")]
    QOutOfDomain { q: f64, min: f64 },
}
