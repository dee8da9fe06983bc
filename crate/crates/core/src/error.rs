use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("exponent a = {p}/{q} is not supported; in (0, 2] only a = 1/2, 1 and 2 are handled")]
    UnsupportedRegime { p: u32, q: u32 },

    #[error("{operation} is not available in the {regime} regime")]
    RegimeMismatch { operation: &'static str, regime: &'static str },

    #[error("recurrence pivot vanishes at n = {n} with a nonzero right-hand side")]
    DegenerateIndex { n: usize },

    #[error("series did not converge within {terms} terms (last relative tail {tail:e})")]
    Convergence { terms: usize, tail: f64 },

    #[error("asymptotic expansion too coarse at this point (estimated relative error {estimate:e})")]
    AsymptoticRange { estimate: f64 },

    #[error("inner sum did not settle within {terms} terms (smallest term magnitude {smallest:e})")]
    Divergence { terms: usize, smallest: f64 },

    #[error("gamma function pole at {0}")]
    GammaPole(i64),

    #[error("wronskian extraction failed for n0 = {n0} and n0 + 1")]
    Extraction { n0: usize },

    #[error("connection factors fail the determinant test (relative residual {residual:e}); increase precision")]
    Inconsistency { residual: f64 },

    #[error("denominator nearly vanishes (|D|/|N| = {ratio:e}); energy is close to a Gamow pole")]
    PoleProximity { ratio: f64 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("no representation meets tolerance on [{from}, {to}]")]
    Coverage { from: f64, to: f64 },

    #[error("phase jumps by at least pi/2 between grid points; refine the intervals {intervals:?}")]
    UnwrapAmbiguity { intervals: Vec<(f64, f64)> },

    #[error("root search did not converge after {iterations} iterations (last iterates {trace:?})")]
    NonConvergence { iterations: usize, trace: Vec<(f64, f64)> },

    #[error("roots closer than the scan resolution near {near}; refine the grid")]
    RefinementNeeded { near: f64 },

    #[error("quadrature error estimate {estimate:e} above tolerance")]
    Quadrature { estimate: f64 },
}
