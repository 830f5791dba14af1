use thiserror::Error;

/// Coarse grouping of errors, used for CLI exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid vertex partition: {0}")]
    Partition(String),
    #[error("a digraph needs at least one arc")]
    EmptyDigraph,
    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: usize },
    #[error("arc adjacency needs two distinct arcs")]
    SameArc,
    #[error("the query needs two distinct vertices")]
    SameVertex,
    #[error("arc selection is empty")]
    EmptySelection,

    #[error("residue {residue} is not below period {period}")]
    BadResidue { residue: usize, period: usize },
    #[error("period must be at least 1")]
    ZeroPeriod,

    #[error("tail polynomial takes a negative value at n = {at}")]
    NegativeTail { at: u64 },
    #[error("tail polynomial takes a non-integral value at n = {at}")]
    NonIntegralTail { at: u64 },
    #[error("polynomial list has {found} entries, period is {period}")]
    PolyCount { period: usize, found: usize },

    #[error("unknown builtin family `{0}`")]
    UnknownBuiltin(String),
    #[error("malformed family spec: {0}")]
    MalformedSpec(String),
    #[error("explicit family has no eventually constant tail")]
    NonEventuallyConstantExplicit,
    #[error("selector is not valid for almost every index: {0}")]
    InvalidSelector(String),
    #[error("selector sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: &'static str, found: &'static str },
    #[error("internal elements belong to different families")]
    FamilyMismatch,
    #[error("family is not the enlargement of a finite digraph")]
    NotFiniteEnlargement,
    #[error("selector form not supported on this family: {0}")]
    UnsupportedSelector(String),

    #[error("no hyperfinite dipath between the vertices")]
    NotReachable,
    #[error("the two internal vertices are equal")]
    EqualVertices,
    #[error("family is not hyperfinite")]
    NotHyperfinite,
    #[error("family has parallel arcs or self-loops on an ultrafilter-large set")]
    NotSimple,

    #[error("family is not weakly connected almost everywhere")]
    NotWeaklyConnectedAe,
    #[error("anchor is not a standard vertex")]
    AnchorNotStandard,
    #[error("ordering is only defined for non-principal galaxies")]
    PrincipalGalaxy,
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("family is not locally finite")]
    NotLocallyFinite,
    #[error("family is not infinite")]
    NotInfinite,
    #[error("arc {0} is not incident to any galaxy of the roster")]
    ArcOutsideRoster(usize),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) | Error::MalformedSpec(_) | Error::UnknownBuiltin(_) => ErrorClass::Parse,
            Error::UnsupportedFamily(_)
            | Error::UnsupportedSelector(_)
            | Error::NotHyperfinite
            | Error::NotSimple
            | Error::NotFiniteEnlargement
            | Error::NotLocallyFinite
            | Error::NotInfinite
            | Error::NotWeaklyConnectedAe => ErrorClass::Unsupported,
            _ => ErrorClass::Validation,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Partition(_) => "PartitionError",
            Error::EmptyDigraph => "EmptyDigraph",
            Error::UnknownId { .. } => "UnknownId",
            Error::SameArc => "SameArc",
            Error::SameVertex => "SameVertex",
            Error::EmptySelection => "EmptySelection",
            Error::BadResidue { .. } => "BadResidue",
            Error::ZeroPeriod => "ZeroPeriod",
            Error::NegativeTail { .. } => "NegativeTail",
            Error::NonIntegralTail { .. } => "NonIntegralTail",
            Error::PolyCount { .. } => "PolyCount",
            Error::UnknownBuiltin(_) => "UnknownBuiltin",
            Error::MalformedSpec(_) => "MalformedSpec",
            Error::NonEventuallyConstantExplicit => "NonEventuallyConstantExplicit",
            Error::InvalidSelector(_) => "InvalidSelector",
            Error::SortMismatch { .. } => "SortMismatch",
            Error::FamilyMismatch => "FamilyMismatch",
            Error::NotFiniteEnlargement => "NotFiniteEnlargement",
            Error::UnsupportedSelector(_) => "UnsupportedSelector",
            Error::NotReachable => "NotReachable",
            Error::EqualVertices => "EqualVertices",
            Error::NotHyperfinite => "NotHyperfinite",
            Error::NotSimple => "NotSimple",
            Error::NotWeaklyConnectedAe => "NotWeaklyConnectedAE",
            Error::AnchorNotStandard => "AnchorNotStandard",
            Error::PrincipalGalaxy => "PrincipalGalaxy",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::NotLocallyFinite => "NotLocallyFinite",
            Error::NotInfinite => "NotInfinite",
            Error::ArcOutsideRoster(_) => "ArcOutsideRoster",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
