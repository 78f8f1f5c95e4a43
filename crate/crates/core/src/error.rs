use thiserror::Error;

use crate::certificate::CertificateError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("rank {rank} out of range for k={k}, q={q}")]
    RankOutOfRange { rank: u64, k: usize, q: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("words with mismatched shape: expected k={k}, q={q}, found k={found_k}, q={found_q}")]
    MixedShape {
        k: usize,
        q: u32,
        found_k: usize,
        found_q: u32,
    },

    #[error("set is not independent: {0} ~ {1}")]
    NotIndependent(String, String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("gadget site {site} at {coords:?} is in the wrong state (expected {expected})")]
    GadgetSite {
        site: &'static str,
        coords: [u32; 3],
        expected: &'static str,
    },

    #[error("local hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("identity violated: {0}")]
    Identity(String),

    #[error("incomplete phase assignment: no phase for orbit {0}")]
    PartialAssignment(String),

    #[error(transparent)]
    Certificate(#[from] CertificateError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
