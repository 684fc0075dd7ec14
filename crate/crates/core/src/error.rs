use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("order cycle: `{0}` and `{1}` are distinct but related both ways")]
    Cycle(String, String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("{what} has {got} elements, above the configured bound {limit}")]
    Size {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("map is not monotone: {p} <= {q} but images are unordered")]
    NotMonotone { p: String, q: String },

    #[error("map is not open: no lift above {p} hits {q}")]
    NotOpen { p: String, q: String },

    #[error("codomain mismatch: expected maps into the same poset")]
    CodomainMismatch,

    #[error("not a parallel pair: domains or codomains differ")]
    ParallelPair,

    #[error("family member {index} does not target the stated poset")]
    BadFamily { index: usize },

    #[error("family is not jointly surjective, so it is not a cover")]
    NotCover,

    #[error("order is not a lattice: elements {a}, {b} lack a {missing}")]
    NotALattice {
        a: String,
        b: String,
        missing: &'static str,
    },

    #[error("lattice is not distributive at ({a}, {b}, {c})")]
    NotDistributive { a: String, b: String, c: String },

    #[error("lattice carries no implication table (not flagged Heyting)")]
    NotHeyting,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("search budget of {limit} steps exhausted")]
    Resource { limit: u64 },

    #[error("zigzag search exhausted at stage bound {bound}")]
    SearchExhausted { bound: usize },

    #[error("poset is not rooted (no unique minimum)")]
    NotRooted,

    #[error("product upsets live over different base posets")]
    BaseMismatch,

    #[error("map does not preserve finite meets (fails at {a}, {b})")]
    NotMeetPreserving { a: String, b: String },

    #[error("relation variable `{var}` is not among the declared generators")]
    UndeclaredGenerator { var: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
