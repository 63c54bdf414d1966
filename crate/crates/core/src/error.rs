use alloc::string::String;

/// Errors raised by the constructions and checkers in this crate.
///
/// Checkers that *find* violations do not error; they return reports. Errors
/// are reserved for malformed input and exhausted resources.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("element {element} is not valid for the {backend} backend")]
    BackendMismatch { backend: &'static str, element: String },

    #[error("ball of radius {radius} exceeds the cap of {cap} elements")]
    BallCap { radius: u32, cap: usize },

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("invalid group definition: {0}")]
    InvalidGroup(String),

    #[error("operation needs a finite group backend")]
    NotFinite,

    #[error("G-sets are over different groups")]
    ContextMismatch,

    #[error("relations live on carriers of different sizes ({0} vs {1})")]
    BaseMismatch(usize, usize),

    #[error("point {point} is outside a carrier of {size} points")]
    PointOutOfRange { point: usize, size: usize },

    #[error("map is not equivariant: f({point}·{letter}) != f({point})·{letter}")]
    NotEquivariant { point: usize, letter: String },

    #[error("map is not injective: points {0} and {1} share an image")]
    NotInjective(usize, usize),

    #[error("order is undetermined on the window: cannot compare {0} with {1}")]
    Undetermined(String, String),

    #[error("cone is inconsistent on the window: {0}")]
    InconsistentCone(String),

    #[error("oracle reports Equal on distinct points {0} and {1}")]
    EqualOnDistinct(usize, usize),

    #[error("point {0} appears twice in the enumeration")]
    RepeatedPoint(usize),

    #[error("no height assigned to vertex {0}")]
    MissingHeight(usize),

    #[error("order is not invariant on the window: {0} < {1} but their images are not")]
    NotInvariant(usize, usize),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("certificate rejected by the {check} check: {detail}")]
    Rejected { check: &'static str, detail: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
