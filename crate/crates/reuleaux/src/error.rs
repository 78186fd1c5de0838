//! Crate-wide error type.

use std::fmt;

use crate::geom::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// A coordinate was NaN or infinite.
    NonFinite,
    /// Vertex/side count violates a parity or minimum-size rule.
    InvalidN { n: usize, reason: &'static str },
    /// Two unit circles are tangent, coincident or disjoint; no transversal
    /// intersection exists.
    DegenerateCircles { separation: f64 },
    /// A scalar argument left its admissible interval.
    OutOfRange { name: &'static str, value: f64 },
    /// An arc is too short (or too close to a half circle) for the 2x2
    /// radial-decomposition system to be solvable.
    SingularArc { theta: f64 },
    /// A constrained vertex step left the feasible region (an arc length
    /// exited (0, pi/3)) or the circle-intersection branch flipped.
    StepTooLarge,
    /// Reuleaux triangles admit no constant-width-preserving vertex motion.
    TriangleImmovable,
    /// Two points that must be distinct coincide (within tolerance).
    CoincidentPoints { i: usize, j: usize },
    /// The constraint-gradient system lost rank.
    RankDeficient,
    /// A disk contributes no boundary arc to the disk-polygon.
    RedundantCenter { index: usize },
    /// A q-coefficient vector does not close up around the diameter cycle.
    InconsistentQ { residual: f64 },
    /// No feasible improving step above the minimal step size exists.
    Stall,
    /// Internal consistency failure: a merge produced an even vertex count.
    NonOddReduction { n: usize },
    /// The vertex set fails the constant-width constraints.
    NotConstantWidth(Box<ValidationReport>),
    /// The vertex set does not bound a valid disk-polygon.
    InvalidPolygon { reason: String },
    /// Malformed input data (JSON polygon files, generator specs).
    Parse(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "non-finite coordinate"),
            Error::InvalidN { n, reason } => write!(f, "invalid vertex count {n}: {reason}"),
            Error::DegenerateCircles { separation } => {
                write!(f, "unit circles at separation {separation} do not intersect transversally")
            }
            Error::OutOfRange { name, value } => write!(f, "{name} = {value} is out of range"),
            Error::SingularArc { theta } => write!(f, "arc of length {theta} is singular"),
            Error::StepTooLarge => write!(f, "perturbation step too large to stay feasible"),
            Error::TriangleImmovable => {
                write!(f, "a Reuleaux triangle admits no vertex perturbation")
            }
            Error::CoincidentPoints { i, j } => write!(f, "points {i} and {j} coincide"),
            Error::RankDeficient => write!(f, "constraint gradients are rank deficient"),
            Error::RedundantCenter { index } => {
                write!(f, "disk {index} contributes no boundary arc")
            }
            Error::InconsistentQ { residual } => {
                write!(f, "q-coefficients fail the cycle closure condition (residual {residual})")
            }
            Error::Stall => write!(f, "no feasible improving step found"),
            Error::NonOddReduction { n } => {
                write!(f, "vertex merge produced even count {n}")
            }
            Error::NotConstantWidth(report) => {
                write!(f, "constant-width validation failed: {} violation(s)", report.violations.len())
            }
            Error::InvalidPolygon { reason } => write!(f, "invalid disk-polygon: {reason}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
