//! Rigorous shooting for radial self-similar singular profiles of the
//! nonlinear Schrödinger and complex Ginzburg-Landau equations.
//!
//! The profile equation is matched at an intermediate point: a solution from
//! infinity (a fixed point of an integral operator, enclosed through
//! asymptotic bounds on confluent hypergeometric functions) against a
//! solution from zero (a Taylor step across the removable singularity
//! followed by validated Taylor/Lohner integration). The interval Newton
//! method then certifies existence and local uniqueness of matching
//! parameters, and sign enclosures of d|Q|^2/dxi count the monotone
//! intervals of the profile.

pub mod branch;
pub mod cases;
pub mod coeffs;
pub mod matching;
pub mod params;
pub mod qinf;
pub mod qzero;
pub mod specfun;

pub use params::Params;

/// Errors across the verification pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    /// A lemma hypothesis failed for the given inputs.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// No radius satisfies the contraction inequalities.
    #[error("no contraction radius (xi1 too small or |gamma| too large)")]
    NoContraction,
    /// |c^-a gamma| <= C_pQ: the leading asymptotic term does not dominate.
    #[error("leading term not dominant")]
    LeadingTermNotDominant,
    /// Taylor tail bounds are only proved for sigma = 1.
    #[error("tail bounds unsupported for this sigma")]
    UnsupportedSigma,
    /// No admissible tail radius found on the search grid.
    #[error("tail bound failed")]
    TailBoundFailed,
    /// r * xi0 >= 1: the geometric tail diverges at this expansion point.
    #[error("taylor tail diverges at xi0")]
    TailDiverges,
    /// A priori enclosure failed to validate after the step-halving budget.
    #[error("integration blowup at xi = {0}")]
    IntegrationBlowup(f64),
    #[error("singular interval enclosure")]
    SingularEnclosure,
    /// A curve cell has undecidable sign; refine the grid.
    #[error("monotone interval count inconclusive")]
    CountInconclusive,
    #[error("branch segment failed at subinterval {0}")]
    SegmentFailed(usize),
    #[error("branch parts could not be joined")]
    JoinFailed,
}

impl From<ival::IvError> for Error {
    fn from(e: ival::IvError) -> Error {
        match e {
            ival::IvError::Domain(msg) => Error::Domain(msg.to_string()),
            ival::IvError::SingularEnclosure => Error::SingularEnclosure,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
