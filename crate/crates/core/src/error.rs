use thiserror::Error;

/// Failures raised by the library. Input problems and numerical failures are
/// kept apart so front ends can map them to different exit statuses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("point {re}+{im}i lies outside the admissible region: {what}")]
    OutOfDomain { re: f64, im: f64, what: &'static str },
    #[error("non-finite integrand value at node {index}")]
    NonFinite { index: usize },
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("quadrature under-resolved: {0}")]
    UnderResolved(String),
    #[error("envelope violated at {count} sample(s); worst at {re}+{im}i")]
    EnvelopeViolation { count: usize, re: f64, im: f64 },
    #[error("corona condition not certified: {0}")]
    Uncertified(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn out_of_domain(z: num_complex::Complex64, what: &'static str) -> Self {
        Error::OutOfDomain { re: z.re, im: z.im, what }
    }

    /// True for errors caused by malformed or inadmissible input rather than
    /// by a failed numerical check.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::InvalidMeasure(_) | Error::OutOfDomain { .. } | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
