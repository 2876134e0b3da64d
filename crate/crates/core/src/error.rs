use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} outside its domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("{what}: s = {re} + {im}i lies within {distance:e} of a pole")]
    PoleProximity {
        what: &'static str,
        re: f64,
        im: f64,
        distance: f64,
    },

    #[error("branch tracking failed for Z^({j})({t}): imaginary part {im:e} against real part {re:e}")]
    Branch { t: f64, j: usize, re: f64, im: f64 },

    #[error("imaginary leak in {what}: |Im| = {im:e} exceeds {bound:e}")]
    ImaginaryLeak { what: String, im: f64, bound: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    Convergence { what: &'static str, iterations: usize },

    #[error("accuracy check failed for {what}: {detail}")]
    Accuracy { what: String, detail: String },

    #[error("quadrature refinement stalled on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("zero census alarm for k = {k}, T = {t}: deviation {deviation:.3} exceeds {bound:.3}")]
    Census {
        k: usize,
        t: f64,
        deviation: f64,
        bound: f64,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    /// True for failures of a numerical self-check, as opposed to bad input.
    pub fn is_numerical_alarm(&self) -> bool {
        !matches!(self, Error::Domain { .. } | Error::PoleProximity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
