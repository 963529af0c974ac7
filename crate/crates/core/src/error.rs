use thiserror::Error;

/// Errors raised by the numerical kernels and the physics models.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function}: argument {value} outside domain ({domain})")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{function}: result for argument {value} is not representable as f64")]
    Range { function: &'static str, value: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "inconsistent condensate inputs: chemical potential from trap radius {mu_trap:.6e} J \
         vs from atom number {mu_number:.6e} J (relative difference {rel_diff:.3})"
    )]
    InconsistentCondensate {
        mu_trap: f64,
        mu_number: f64,
        rel_diff: f64,
    },

    #[error("condensate-to-waveguide distance {d:.3e} m below the minimum {min:.3e} m (d0 + a)")]
    DistanceTooSmall { d: f64, min: f64 },

    #[error("semi-infinite integral tail does not decay after {panels} panels (last panel {last:.3e})")]
    NonDecayingTail { panels: usize, last: f64 },

    #[error("spectrum sample {index} is negative ({value:.3e})")]
    NegativeSpectrum { index: usize, value: f64 },

    #[error("field series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable short name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Range { .. } => "range",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::InconsistentCondensate { .. } => "inconsistent_condensate",
            Error::DistanceTooSmall { .. } => "distance_too_small",
            Error::NonDecayingTail { .. } => "non_decaying_tail",
            Error::NegativeSpectrum { .. } => "negative_spectrum",
            Error::SeriesNonConvergence { .. } => "series_non_convergence",
        }
    }
}
