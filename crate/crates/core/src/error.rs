use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A domain description is malformed: wrong orientation, self-intersections,
    /// holes leaving the outer boundary, and so on.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A point that must lie inside the domain does not.
    #[error("point {re}{im:+}i is not an interior point of the domain", re = .0.re, im = .0.im)]
    NotInDomain(Complex64),

    /// Invalid numerical configuration (too few nodes, basis too small, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller-supplied argument is outside the operation's domain.
    #[error("argument error: {0}")]
    Argument(String),

    /// An iterative or least-squares solve did not reach its tolerance.
    #[error("{what} did not converge: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Convergence {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    /// A Gram or collocation matrix lost all rank under the cutoff.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// Requested configuration has no closed form / is not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Other numerical breakdown (degenerate fits, non-finite values).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A failure while computing one named quantity of a larger report.
    #[error("{entry}: {source}")]
    Entry { entry: &'static str, source: Box<Error> },
}

impl Error {
    pub fn in_entry(self, entry: &'static str) -> Error {
        Error::Entry { entry, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
