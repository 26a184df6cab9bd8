use std::path::PathBuf;

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Configuration rejected; `fields` lists every violated field name.
    #[error("invalid configuration: {}", fields.join(", "))]
    Config { fields: Vec<String> },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image codec error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// ADMM primal residual grew for too many consecutive iterations.
    #[error(
        "admm diverged at iteration {iter} (rho {rho:.3e}, residual {residual:.3e} after {growth_streak} growing steps)"
    )]
    Divergence {
        iter: usize,
        rho: f64,
        residual: f64,
        growth_streak: usize,
    },

    /// Pipeline failure wrapped with the stage that produced it.
    #[error("pipeline stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
