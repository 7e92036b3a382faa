use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall into two families: input validation (bad zeros, bad
/// parameters, malformed files) and numeric failure (quadrature that did not
/// converge, root residuals that are too large). [`Error::is_numeric`] tells
/// them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero ({re}, {im}) is not strictly inside the unit disk")]
    ZeroOutsideDisk { re: f64, im: f64 },

    #[error("point ({re}, {im}) is not strictly inside the unit disk")]
    PointOutsideDisk { re: f64, im: f64 },

    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,

    #[error("zero ({re}, {im}) is listed more than once; use its multiplicity instead")]
    DuplicateZero { re: f64, im: f64 },

    #[error("total degree {degree} exceeds the configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("empty zero list; use BlaschkeProduct::one() for the constant product")]
    EmptyZeroList,

    #[error("unimodular factor has modulus {modulus}, expected 1")]
    NotUnimodular { modulus: f64 },

    #[error("parameter `{name}` = {value} is out of range: {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid family specification: {0}")]
    InvalidFamily(String),

    #[error("degenerate sweep grid: {0}")]
    DegenerateGrid(String),

    #[error("{what} did not converge: {detail}")]
    NotConverged { what: &'static str, detail: String },

    #[error("boundary value {boundary} and interior mean {interior} differ by {rel_diff:.3e} (relative)")]
    CrossCheckMismatch {
        boundary: f64,
        interior: f64,
        rel_diff: f64,
    },

    #[error("sublevel enclosure [{lower}, {upper}] is wider than the tolerance allows")]
    EnclosureTooWide { lower: f64, upper: f64 },

    #[error("preimage residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    RootResidual { residual: f64, tol: f64 },

    #[error("preimage solver: {0}")]
    RootSolver(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::CrossCheckMismatch { .. }
                | Error::EnclosureTooWide { .. }
                | Error::RootResidual { .. }
                | Error::RootSolver(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, expected })
    }
}
