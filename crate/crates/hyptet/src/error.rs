use thiserror::Error;

/// Errors produced by construction, validation and counting routines.
///
/// Variants split into two groups: input validation (`AngleOutOfRange`,
/// `NotCoprime`, `NotCanonical`, `BadInput`, `DegenerateInput`) and internal
/// consistency failures (`VertexHit`, `SegmentEscapesDevelopment`,
/// `StructureViolation`, `InvariantViolation`). The CLI maps the first group
/// to exit code 2 and the second to exit code 3.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("face angle {0} outside the open interval (0, pi/3)")]
    AngleOutOfRange(f64),

    #[error("({p}, {q}) is not a coprime pair")]
    NotCoprime { p: u32, q: u32 },

    #[error("({p}, {q}) is not canonical: require 0 <= p < q")]
    NotCanonical { p: u32, q: u32 },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("trace passes through a tiling vertex at x = {x}, y = {w}*sqrt(3)")]
    VertexHit { x: String, w: String },

    #[error("faces {0} and {1} are not glued along an edge")]
    NonAdjacentFaces(usize, usize),

    #[error("chord leaves the development at crossing {crossing}: {detail}")]
    SegmentEscapesDevelopment { crossing: usize, detail: String },

    #[error("combinatorial structure violation: {0}")]
    StructureViolation(String),

    #[error("numeric invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// True for errors that indicate bad caller input rather than an
    /// internal consistency failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::AngleOutOfRange(_)
                | Error::NotCoprime { .. }
                | Error::NotCanonical { .. }
                | Error::DegenerateInput(_)
                | Error::BadInput(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
