use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the geometric pipeline.
///
/// Several variants are expected on real inputs (singular gauges, umbilic
/// points, rank transitions); callers sweeping a grid should record them per
/// node rather than abort.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Conformal dimension below the supported minimum.
    Dimension { n: usize },
    /// Vector or matrix size does not match the ambient dimension.
    Shape { expected: usize, found: usize },
    /// The zero vector does not represent a projective point.
    InvalidPoint,
    /// Two points do not span a line.
    DegenerateLine,
    /// Curve input unusable for the geodesic test.
    InvalidGeodesic(&'static str),
    /// The tangent map of the immersion is degenerate.
    ImmersionRank { singular_values: Vec<f64> },
    /// A lifted point failed the quadric test.
    NotOnQuadric { value: f64 },
    /// The `E_∞` gauge cannot be imposed; `suggestion` is a usable gauge vector.
    Gauge { suggestion: Vec<f64> },
    /// Frame matrix singular or Gram pattern violated.
    FrameDegenerate { deviation: f64 },
    /// A finite-difference stencil left the parameter domain.
    Stencil { axis: usize },
    /// Numerical rank falls inside the ambiguity dead band.
    RankAmbiguity { spectrum: Vec<f64> },
    /// The generator family has rank below `n-1`; use the reduced branch.
    ReducedRank { rank: usize },
    /// Input has full rank but the reduced branch was requested.
    MaximalRank,
    /// `A_n` sits at a focus, so the `ω_n^i` coframe is singular.
    SingularGauge { det: f64 },
    /// The tensor `a_ij` is degenerate; the invariant normalization does not exist.
    NormalizationUndefined { det: f64 },
    /// The relative invariant vanishes or `ρ = 0`; the screen `Δ` does not exist.
    ScreenUndefined { invariant: f64 },
    /// Linear system too ill-conditioned for a trustworthy solve.
    Conditioning { condition: f64 },
    /// Eigenpair tracking across the stencil lost its match.
    Tracking { overlap: f64 },
    /// Root multiplicity changes within the stencil.
    MultiplicityChange,
    /// Two independent integrability tests disagree.
    Consistency { antisymmetric: f64, frobenius: f64 },
    /// Operation precondition not met.
    Precondition(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Stable short name, used for error taxonomies in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::Shape { .. } => "shape",
            Error::InvalidPoint => "invalid_point",
            Error::DegenerateLine => "degenerate_line",
            Error::InvalidGeodesic(_) => "invalid_geodesic",
            Error::ImmersionRank { .. } => "immersion_rank",
            Error::NotOnQuadric { .. } => "not_on_quadric",
            Error::Gauge { .. } => "gauge",
            Error::FrameDegenerate { .. } => "frame_degenerate",
            Error::Stencil { .. } => "stencil",
            Error::RankAmbiguity { .. } => "rank_ambiguity",
            Error::ReducedRank { .. } => "reduced_rank",
            Error::MaximalRank => "maximal_rank",
            Error::SingularGauge { .. } => "singular_gauge",
            Error::NormalizationUndefined { .. } => "normalization_undefined",
            Error::ScreenUndefined { .. } => "screen_undefined",
            Error::Conditioning { .. } => "conditioning",
            Error::Tracking { .. } => "tracking",
            Error::MultiplicityChange => "multiplicity_change",
            Error::Consistency { .. } => "consistency",
            Error::Precondition(_) => "precondition",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { n } => write!(f, "conformal dimension {n} is below 2"),
            Error::Shape { expected, found } => {
                write!(f, "shape mismatch: expected length {expected}, found {found}")
            }
            Error::InvalidPoint => write!(f, "zero vector is not a projective point"),
            Error::DegenerateLine => write!(f, "points are linearly dependent"),
            Error::InvalidGeodesic(why) => write!(f, "invalid geodesic input: {why}"),
            Error::ImmersionRank { singular_values } => {
                write!(f, "degenerate tangent map, singular values {singular_values:?}")
            }
            Error::NotOnQuadric { value } => write!(f, "lifted point off the quadric: (x,x) = {value:e}"),
            Error::Gauge { suggestion } => write!(
                f,
                "lift passes through infinity; (A_0, E_inf) = 0. Suggested gauge vector {suggestion:?}"
            ),
            Error::FrameDegenerate { deviation } => write!(f, "degenerate frame (deviation {deviation:e})"),
            Error::Stencil { axis } => write!(f, "finite-difference stencil leaves the domain along axis {axis}"),
            Error::RankAmbiguity { spectrum } => write!(f, "rank undecidable, spectrum {spectrum:?}"),
            Error::ReducedRank { rank } => write!(f, "reduced rank {rank}; use the reduced branch"),
            Error::MaximalRank => write!(f, "input has maximal rank"),
            Error::SingularGauge { det } => {
                write!(f, "A_n is a focus (det = {det:e}); shift the gauge")
            }
            Error::NormalizationUndefined { det } => {
                write!(f, "tensor a_ij is degenerate (det = {det:e}); invariant normalization undefined")
            }
            Error::ScreenUndefined { invariant } => {
                write!(f, "relative invariant a = {invariant:e}; screen distribution undefined")
            }
            Error::Conditioning { condition } => write!(f, "ill-conditioned system (condition {condition:e})"),
            Error::Tracking { overlap } => write!(f, "eigenvector tracking lost (overlap {overlap:.3})"),
            Error::MultiplicityChange => write!(f, "root multiplicity changes inside the stencil"),
            Error::Consistency { antisymmetric, frobenius } => write!(
                f,
                "integrability tests disagree: antisymmetric part {antisymmetric:e}, Frobenius residual {frobenius:e}"
            ),
            Error::Precondition(why) => write!(f, "precondition failed: {why}"),
        }
    }
}

impl core::error::Error for Error {}
