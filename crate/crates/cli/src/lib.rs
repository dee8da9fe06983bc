//! File formats, run manifests, parallel drivers and the verification suite
//! behind the `risewell` command.

pub mod config;
pub mod manifest;
pub mod output;
pub mod plot;
pub mod run;
pub mod verify;

use risewell_core::Error;

/// Exit status: success.
pub const EXIT_OK: u8 = 0;
/// Exit status: bad usage or an unsupported exponent.
pub const EXIT_USAGE: u8 = 2;
/// Exit status: the computation asks for a finer grid, more precision or a better seed.
pub const EXIT_REFINE: u8 = 3;
/// Exit status: a verification check failed.
pub const EXIT_VERIFY: u8 = 4;
const EXIT_IO: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Solver(e) => solver_exit_code(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Input and regime errors map to 2; numerical outcomes that a finer grid,
/// more precision or a better seed would fix map to 3.
pub fn solver_exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::UnsupportedRegime { .. } | Error::RegimeMismatch { .. } | Error::Contract(_) => EXIT_USAGE,
        _ => EXIT_REFINE,
    }
}

/// Parses an exponent given as `p/q` (or a bare integer `p`).
pub fn parse_exponent(s: &str) -> Result<risewell_core::exponent::ExponentParam, CliError> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| CliError::Usage(format!("exponent must be p/q with integers, got {s:?}")))?;
    let q: i64 = q.parse().map_err(|_| CliError::Usage(format!("exponent must be p/q with integers, got {s:?}")))?;
    risewell_core::exponent::ExponentParam::new(p, q).map_err(|e| match e {
        Error::UnsupportedRegime { .. } => CliError::Solver(e),
        other => CliError::Usage(other.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_parsing() {
        let a = parse_exponent("7/1").unwrap();
        assert_eq!((a.p(), a.q()), (7, 1));
        let a = parse_exponent("10/4").unwrap();
        assert_eq!((a.p(), a.q()), (5, 2));
        assert_eq!(parse_exponent("3").unwrap(), parse_exponent("3/1").unwrap());
        assert_eq!(parse_exponent("3/2").unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(parse_exponent("2.75").unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(parse_exponent("0/1").unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(solver_exit_code(&Error::RefinementNeeded { near: 1.0 }), EXIT_REFINE);
        assert_eq!(solver_exit_code(&Error::UnwrapAmbiguity { intervals: vec![(0.0, 1.0)] }), EXIT_REFINE);
        assert_eq!(solver_exit_code(&Error::RegimeMismatch { operation: "x", regime: "linear" }), EXIT_USAGE);
        assert_eq!(CliError::Verification("x".into()).exit_code(), EXIT_VERIFY);
    }
}
