use std::fmt;

/// Process exit status for each outcome class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Internal = 1,
    Input = 2,
    Degenerate = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    /// Pipeline stage the error came from, when known.
    pub stage: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::Input,
            stage: None,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::Internal,
            stage: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, stage: &str) -> Self {
        if self.stage.is_none() {
            self.stage = Some(stage.to_string());
        }
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.stage {
            Some(stage) => write!(f, "[{stage}] {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<coughrank::error::Error> for CliError {
    fn from(e: coughrank::error::Error) -> Self {
        use coughrank::error::Error as E;
        let status = match &e {
            E::Degenerate(_) => ExitStatus::Degenerate,
            _ => ExitStatus::Input,
        };
        Self {
            status,
            stage: None,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::internal(format!("json encoding failed: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Tags the error of `r` with `stage`.
pub(crate) fn staged<T, E: Into<CliError>>(stage: &str, r: Result<T, E>) -> CliResult<T> {
    r.map_err(|e| e.into().at(stage))
}
