use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("node id {0} is out of range")]
    InvalidNode(usize),

    #[error("seed set is empty")]
    EmptySeedSet,

    #[error("seed set contains node {0} twice")]
    DuplicateSeed(usize),

    #[error("scaling factor exceeds every community size")]
    AllCommunitiesFiltered,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point with seed fraction {seed_fraction} lies beyond the reference bound {bound}")]
    InfeasiblePoint { seed_fraction: f64, bound: f64 },

    #[error("reference hypervolume is zero")]
    ZeroReferenceVolume,

    #[error("degree sequence is degenerate: {0}")]
    DegenerateDegrees(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
