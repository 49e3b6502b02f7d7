use thiserror::Error;

use crate::geometry::{MidEdge, Rhombus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice angle {0} rad lies outside [pi/3, 2pi/3]")]
    AngleOutOfRange(f64),

    #[error("spin {0} is not of the form l/8 with l odd")]
    InvalidSpin(f64),

    #[error("degenerate weight denominator ({0})")]
    DegenerateWeights(&'static str),

    #[error("step budget exceeded: requested {requested}, cap is {cap}")]
    BudgetExceeded { requested: u32, cap: u32 },

    #[error("inadmissible step from {from} to {to}: {reason}")]
    InvalidStep {
        from: MidEdge,
        to: MidEdge,
        reason: &'static str,
    },

    #[error("turn of {0} rad is not one of 0, +-theta, +-(pi - theta)")]
    InadmissibleTurn(f64),

    #[error("rhombus {0} is not inside the domain")]
    RhombusOutsideDomain(Rhombus),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid length rule: {0}")]
    InvalidLengthRule(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
