use thiserror::Error;

use crate::report::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("unknown builtin Hopf algebra `{0}`")]
    UnknownBuiltin(String),
    #[error("F_{p} has no primitive {n}-th root of unity")]
    MissingRoot { n: u64, p: u64 },
    #[error("bad leg position {position} for a level-{level} comodule")]
    BadPosition { position: usize, level: usize },
    #[error("operands live over different Hopf algebras")]
    HopfMismatch,
    #[error("the Hopf algebra carries no r-form")]
    NoRForm,
    #[error("no ribbon data: {0}")]
    NoRibbonData(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("not a coalgebra homomorphism: {0}")]
    NotACoalgebraHom(String),
    #[error("generators are not jointly surjective: rank {rank} of {dim}")]
    NotGenerating { rank: usize, dim: usize },
    #[error("parse error at {position}: {message}")]
    ParseError { position: usize, message: String },
    #[error("duplicate index {target}^{order} at {position}")]
    DuplicateIndex { position: usize, target: usize, order: usize },
    #[error("targets must be exactly 1..=p, found {targets:?} (at {position})")]
    NonContiguousTargets { position: usize, targets: Vec<usize> },
    #[error("target {target} has order set {orders:?} at {position}; expected {{0}} or {{1..k}}")]
    BadOrderSet { position: usize, target: usize, orders: Vec<usize> },
    #[error("operand `{name}` has {found} indices but the bound comodule has level {expected}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("no binding for operand `{0}`")]
    UnboundName(String),
    #[error("not a comodule morphism: {context} {witness}")]
    NotAMorphism { context: String, witness: Witness },
    #[error("not natural: {0}")]
    NotNatural(String),
    #[error("induced map is not well defined: {0}")]
    WellDefinednessFailure(String),
    #[error("diagram is not monoidal: {0}")]
    NotMonoidalDiagram(String),
    #[error("diagram is not closed under duals: {0}")]
    NotDualClosed(String),
    #[error("no source for the double-dual isomorphism")]
    MissingZeta,
    #[error("invalid input: {0}")]
    Invalid(String),
}
