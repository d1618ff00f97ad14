use std::fmt;

/// Library-wide error type.
///
/// Geometry construction and the solvers are total functions on valid input;
/// every failure mode is an explicit variant so callers (and the CLI exit-code
/// mapping) can tell validation errors from resource limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Vertex chain is not a closed axis-parallel cycle (diagonal edge, odd
    /// structure after normalization, or alternation failure).
    NotClosedOrthogonal,
    /// Boundary touches or crosses itself (includes repeated vertices and
    /// zero-width spikes).
    SelfIntersecting,
    /// Closed and orthogonal but encloses zero area.
    DegenerateArea,
    /// Fewer than four vertices after normalization.
    TooFewVertices,
    /// A coordinate exceeds the documented bound (2^20 for integer polygons);
    /// the exact-arithmetic width guarantees below would not hold.
    CoordinateOutOfRange,
    /// A batch query asked for a translation that is not on the candidate grid.
    QueryOffGrid,
    /// A requested computation exceeds the configured size limit.
    InstanceTooLarge,
    /// A sum-problem instance is malformed: empty or mismatched set sizes,
    /// non-positive elements, or elements too large for exact construction.
    InvalidSumInstance,
    /// An operation received an empty point/slab/vertex collection.
    EmptyInput,
    /// A randomized generator could not produce a valid instance within its
    /// retry budget.
    GenerationFailed,
    /// A soft time budget was exhausted; partial results were produced.
    BudgetExceeded,
    /// An input polygon file or instance failed validation on load.
    NonSimpleInput,
    /// Text format violation while reading a polygon or instance file.
    Parse { line: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotClosedOrthogonal => write!(f, "polygon is not a closed orthogonal cycle"),
            Error::SelfIntersecting => write!(f, "polygon boundary is self-intersecting"),
            Error::DegenerateArea => write!(f, "polygon encloses zero area"),
            Error::TooFewVertices => write!(f, "polygon has fewer than four vertices"),
            Error::CoordinateOutOfRange => {
                write!(f, "coordinate magnitude exceeds the supported range")
            }
            Error::QueryOffGrid => write!(f, "query point is not on the candidate grid"),
            Error::InstanceTooLarge => write!(f, "instance exceeds the configured size limit"),
            Error::InvalidSumInstance => write!(f, "sum-problem instance is malformed"),
            Error::EmptyInput => write!(f, "input collection is empty"),
            Error::GenerationFailed => write!(f, "generator failed to produce a valid instance"),
            Error::BudgetExceeded => write!(f, "time budget exceeded; results are partial"),
            Error::NonSimpleInput => write!(f, "input polygon is not simple"),
            Error::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
