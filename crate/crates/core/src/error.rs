use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("degenerate polytope: {0}")]
    Degenerate(String),
    #[error("unbounded covolume: {0}")]
    UnboundedCovolume(String),
    #[error("no stabilization after {0} doublings of the truncation radius")]
    NonStabilization(u32),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
