//! Error and diagnostic types shared by every stage.
use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The dimer invariant that a [`Diagnostic`] reports as violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Invariant {
    /// Vertex, arrow or face references are out of range or ids are not dense.
    Indexing,
    /// The underlying graph of the quiver is not connected.
    Connected,
    /// V - E + F differs from zero.
    Euler,
    /// An arrow does not lie in exactly one face of each sign.
    FaceIncidence,
    /// A face boundary is too short or does not chain head to tail.
    FaceCycle,
    /// A face boundary has nonzero total winding.
    FaceWinding,
    /// The faces around a vertex do not close up into a single disc.
    VertexLink,
}

/// One violated invariant together with a human readable explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub invariant: Invariant,
    pub message: String,
}

impl Diagnostic {
    pub fn new(invariant: Invariant, message: impl Into<String>) -> Self {
        Self { invariant, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.invariant, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse dimer model: {0}")]
    Parse(String),
    #[error("invalid dimer model: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("bad input: {0}")]
    Input(String),
    #[error("non-generic stability parameter: {0}")]
    NonGeneric(String),
    #[error("dimer model is not consistent: {0}")]
    Inconsistent(String),
    #[error("cross-check `{check}` failed at vertex {vertex}: {detail}")]
    CrossCheck { vertex: usize, check: &'static str, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn cross_check(vertex: usize, check: &'static str, detail: impl Into<String>) -> Self {
        Error::CrossCheck { vertex, check, detail: detail.into() }
    }
}

fn join(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}
