use core::fmt;

/// Domain and construction failures shared by all modules.
#[derive(Clone, Debug, PartialEq)]
pub enum GeomError {
    /// An operation required a spacelike vector.
    NotSpacelike,
    /// An operation required a non-null vector.
    NullVector,
    /// An operation required a unit timelike (or future timelike) vector.
    NotUnitTimelike,
    /// A matrix failed the isometry/unimodularity checks.
    NotIsometry,
    /// The isometry class is outside the operation's domain
    /// (e.g. an elliptic element where a hyperbolic one is needed).
    WrongIsometryClass,
    /// Inputs are coincident or dependent where general position is required.
    Degenerate(&'static str),
    /// A trace triple violates the admissibility constraints.
    InadmissibleTraces,
    /// Exact integer arithmetic overflowed 64 bits.
    IntegerOverflow,
    /// Invalid Farey/word data (non-neighbors, non-basis, bad slot index).
    InvalidCombinatorics(&'static str),
    /// A linear solve hit a (numerically) singular system.
    SingularSystem,
    /// A requested deformation direction is not realized by any tile.
    OutsideTiles,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::NotSpacelike => write!(f, "expected a spacelike vector"),
            GeomError::NullVector => write!(f, "expected a non-null vector"),
            GeomError::NotUnitTimelike => write!(f, "expected a unit future-timelike vector"),
            GeomError::NotIsometry => write!(f, "matrix is not a (future-preserving) isometry"),
            GeomError::WrongIsometryClass => write!(f, "isometry class outside operation domain"),
            GeomError::Degenerate(what) => write!(f, "degenerate configuration: {what}"),
            GeomError::InadmissibleTraces => write!(f, "trace triple violates admissibility"),
            GeomError::IntegerOverflow => write!(f, "integer overflow in exact arithmetic"),
            GeomError::InvalidCombinatorics(what) => write!(f, "invalid combinatorics: {what}"),
            GeomError::SingularSystem => write!(f, "singular linear system"),
            GeomError::OutsideTiles => write!(f, "direction not contained in any tile"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeomError {}
