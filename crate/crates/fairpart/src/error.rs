use thiserror::Error;

/// Everything that can go wrong while building polygons or running solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("polygon is not convex (reflex or collapsed corner at vertex {index})")]
    NotConvex { index: usize },

    #[error("polygon winds more than once around itself")]
    SelfWinding,

    #[error("degenerate chord: boundary parameters {s_start} and {s_end} coincide")]
    DegenerateChord { s_start: f64, s_end: f64 },

    #[error("unsupported piece count {n}: only powers of two are supported")]
    UnsupportedPieceCount { n: u64 },

    #[error("ambiguous branch continuation near theta = {theta}")]
    AmbiguousContinuation { theta: f64 },

    #[error("no spanning component: theta interval [{gap_lo}, {gap_hi}] is uncovered")]
    NoSpanningComponent { gap_lo: f64, gap_hi: f64 },

    #[error("no phase intersection found after grid refinement")]
    NoIntersection,

    #[error("evaluation budget exhausted after {spent} piece evaluations")]
    BudgetExhausted { spent: u64 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
