//! Crate-wide error type.

use std::path::PathBuf;

use crate::cycle::InfeasibleReason;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("ramp requires v_hi > v_lo, got v_lo={v_lo} m/s, v_hi={v_hi} m/s")]
    DegenerateRamp { v_lo: f64, v_hi: f64 },
    #[error("speed must be non-negative, got {0} m/s")]
    NegativeSpeed(f64),
    #[error("sample step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("chromosome width {chromosome} does not match layout width {layout}")]
    LayoutMismatch { chromosome: u32, layout: u32 },
    #[error("search space of {bits} bits exceeds the {max}-bit enumeration guard")]
    SpaceTooLarge { bits: u32, max: u32 },
    #[error("chromosome widths differ: {0} vs {1}")]
    LengthMismatch(u32, u32),
    #[error("population size {population} does not match fitness count {fitnesses}")]
    SizeMismatch { population: usize, fitnesses: usize },
    #[error("value {value} for field {field} is not on the decode grid")]
    OffGrid { field: &'static str, value: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("candidate is infeasible: {0}")]
    Infeasible(InfeasibleReason),
    #[error("run {run} found no feasible candidate")]
    NoFeasibleCandidate { run: usize },
    #[error("histogram input is empty")]
    EmptyInput,
    #[error("histogram bin width must be positive, got {0}")]
    NonPositiveBinWidth(f64),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
