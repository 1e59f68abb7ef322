use thiserror::Error;

/// Errors raised by the analytic and numerical routines.
///
/// Unbounded results (zero noise with an on/off receiver, a divergence with
/// disjoint support) are not errors: they come back as `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the valid domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("receiver mode {mode} cannot be used with {noise} noise")]
    Incompatible {
        mode: &'static str,
        noise: &'static str,
    },

    #[error("photocount distribution still carries tail mass {tail:e} at k_max = {k_max}")]
    Truncation { k_max: usize, tail: f64 },

    #[error("objective returned NaN at n_f = {nf}")]
    Objective { nf: f64 },

    #[error("invalid grid: {0}")]
    Grid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(
    ok: bool,
    name: &'static str,
    value: f64,
    expected: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}
