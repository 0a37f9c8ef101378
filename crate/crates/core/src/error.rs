use std::fmt;

use thiserror::Error;

/// A single reason a raw relation fails to be a preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreorderViolation {
    MissingReflexive(usize),
    /// `x ≤ y` and `y ≤ z` hold but `x ≤ z` does not.
    BrokenTransitivity(usize, usize, usize),
}

impl fmt::Display for PreorderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreorderViolation::MissingReflexive(x) => write!(f, "missing reflexive pair at {x}"),
            PreorderViolation::BrokenTransitivity(x, y, z) => {
                write!(f, "{x} <= {y} <= {z} but not {x} <= {z}")
            }
        }
    }
}

/// Operator axioms. `C*` are the closure axioms, `K*` the kernel axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// inflationary: p <= c(p)
    C1,
    /// monotone
    C2,
    /// idempotent
    C3,
    /// deflationary: k(s) <= s
    K1,
    /// monotone
    K2,
    /// idempotent
    K3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::C1 => "C.1",
            Axiom::C2 => "C.2",
            Axiom::C3 => "C.3",
            Axiom::K1 => "K.1",
            Axiom::K2 => "K.2",
            Axiom::K3 => "K.3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxiomWitness {
    pub axiom: Axiom,
    pub elements: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("carrier has no elements")]
    EmptyCarrier,
    #[error("relation is not a preorder: {}", join_display(.0))]
    InvalidPreorder(Vec<PreorderViolation>),
    #[error("relation is not antisymmetric: {0} and {1} are equivalent but distinct")]
    NotAntisymmetric(usize, usize),
    #[error("relation matrix must be {expected}x{expected}")]
    RelationShape { expected: usize },
    #[error("ground set of {size} labels exceeds the cap of {cap}")]
    GroundSetTooLarge { size: usize, cap: usize },
    #[error("space of {size} elements exceeds the cap of {cap}")]
    SpaceTooLarge { size: usize, cap: usize },
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("poset of {size} elements has more than {cap} filters")]
    PosetTooLarge { size: usize, cap: usize },
    #[error("map is not order-preserving: {0} <= {1} but images are not ordered")]
    NotMonotone(usize, usize),
    #[error("map has {got} images for a domain of {expected} elements")]
    MapArity { expected: usize, got: usize },
    #[error("image {image} out of range for codomain of {len} elements")]
    ImageOutOfRange { image: usize, len: usize },
    #[error("operator axioms violated: {}", fmt_axioms(.0))]
    AxiomViolation(Vec<AxiomWitness>),
    #[error("not a Moore family: {0}")]
    NotMooreFamily(String),
    #[error("operation requires a powerset carrier")]
    NotPowerset,
    #[error("carriers do not match")]
    CarrierMismatch,
    #[error("{0} is not finitely cocomplete")]
    NotCocomplete(&'static str),
    #[error("{0} is not a complete lattice")]
    NotLattice(&'static str),
    #[error("phenome {phenome} has no minimum explanation (minimal explanations: {minimal:?})")]
    NoMinimumExplanation { phenome: usize, minimal: Vec<usize> },
    #[error("meet not preserved on {subset:?}")]
    MeetNotPreserved { subset: Vec<usize> },
    #[error("descriptions are over different ground sets")]
    GroundMismatch,
    #[error("horizon {horizon} too short; dynamics still active at the last step")]
    HorizonTooShort { horizon: usize },
    #[error("delay {delay} exceeds declared maximum {d_max}")]
    DelayTooLarge { delay: u32, d_max: u32 },
    #[error("map is not injective: {0} and {1} share an image")]
    NotInjective(usize, usize),
    #[error("map is not surjective: {0} has no preimage")]
    NotSurjective(usize),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// A proven proposition failed to hold. Always a bug in this crate.
    #[error("internal proposition violated: {0}")]
    PropositionViolated(String),
}

impl Error {
    /// True when the error signals a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::PropositionViolated(_))
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyCarrier => "EmptyCarrier",
            Error::InvalidPreorder(_) => "InvalidPreorder",
            Error::NotAntisymmetric(..) => "NotAntisymmetric",
            Error::RelationShape { .. } => "RelationShape",
            Error::GroundSetTooLarge { .. } => "GroundSetTooLarge",
            Error::SpaceTooLarge { .. } => "SpaceTooLarge",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::PosetTooLarge { .. } => "PosetTooLarge",
            Error::NotMonotone(..) => "NotMonotone",
            Error::MapArity { .. } => "MapArity",
            Error::ImageOutOfRange { .. } => "ImageOutOfRange",
            Error::AxiomViolation(_) => "AxiomViolation",
            Error::NotMooreFamily(_) => "NotMooreFamily",
            Error::NotPowerset => "NotPowerset",
            Error::CarrierMismatch => "CarrierMismatch",
            Error::NotCocomplete(_) => "NotCocomplete",
            Error::NotLattice(_) => "NotLattice",
            Error::NoMinimumExplanation { .. } => "NoMinimumExplanation",
            Error::MeetNotPreserved { .. } => "MeetNotPreserved",
            Error::GroundMismatch => "GroundMismatch",
            Error::HorizonTooShort { .. } => "HorizonTooShort",
            Error::DelayTooLarge { .. } => "DelayTooLarge",
            Error::NotInjective(..) => "NotInjective",
            Error::NotSurjective(_) => "NotSurjective",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::Schema(_) => "SchemaError",
            Error::Json(e) if e.classify() == serde_json::error::Category::Data => "SchemaError",
            Error::Json(_) => "ParseError",
            Error::PropositionViolated(_) => "PropositionViolated",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn join_display<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

fn fmt_axioms(ws: &[AxiomWitness]) -> String {
    ws.iter()
        .map(|w| format!("{} at {:?}", w.axiom, w.elements))
        .collect::<Vec<_>>()
        .join("; ")
}

macro_rules! ensure_prop {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::PropositionViolated(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_prop;
