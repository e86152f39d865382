use briesz_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Nyquist, admissibility or size guard.
    #[error("numerical guard: {0}")]
    Guard(CoreError),
    #[error(transparent)]
    Core(CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for tripped guards, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            _ => 1,
        }
    }

    /// Classify a core error raised while validating a configuration.
    pub fn validation(e: CoreError) -> Self {
        if is_guard(&e) {
            CliError::Guard(e)
        } else {
            CliError::Config(e.to_string())
        }
    }
}

fn is_guard(e: &CoreError) -> bool {
    matches!(e, CoreError::Nyquist { .. } | CoreError::Inadmissible(_) | CoreError::SizeGuard(_))
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if is_guard(&e) {
            CliError::Guard(e)
        } else {
            CliError::Core(e)
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
