use thiserror::Error;

use crate::diagram::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("invalid diagram: {0}")]
    Validation(String),

    #[error("crossing {0} does not exist")]
    NoSuchCrossing(usize),

    #[error("sign undefined for virtual crossing {0}")]
    VirtualCrossing(usize),

    #[error("crossing {0} is classical, expected a virtual crossing")]
    ClassicalCrossing(usize),

    #[error("edge {0} does not exist")]
    NoSuchEdge(Edge),

    #[error("edges must be distinct (got {0} twice)")]
    SameEdge(Edge),

    #[error("component {0} does not exist")]
    NoSuchComponent(usize),

    #[error("self-linking undefined (component {0} given twice)")]
    SelfLinking(usize),

    #[error("{what}: {actual} exceeds the enumeration bound of {limit}")]
    BoundExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("diagram has no components")]
    EmptyDiagram,

    #[error("move site no longer applies: {0}")]
    StaleSite(String),

    #[error("invalid twist: {0}")]
    InvalidTwist(String),

    #[error("crossing {0} must have sign +1 for the skein triple")]
    NegativeCrossing(usize),

    #[error("invalid assignment: {0}")]
    Assignment(String),

    #[error("invalid handle grouping: {0}")]
    Grouping(String),

    #[error("handle {0} does not exist")]
    NoSuchHandle(usize),

    #[error("handle {0} has zero intersection pair for every component")]
    ZeroIntersection(usize),

    #[error("invalid torus class ({p}, {n}): p must be at least 1")]
    TorusClass { p: i64, n: i64 },
}
