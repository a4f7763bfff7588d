use std::fmt;

/// Errors surfaced by a subcommand, with their exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config: exit code 2.
    Usage(String),
    /// Failure inside the library: exit code 2 for rejected parameters, 1 otherwise.
    Core(kdescan::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "usage" | "parameter" => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<kdescan::Error> for CliError {
    fn from(e: kdescan::Error) -> Self {
        CliError::Core(e)
    }
}

pub fn io_error(path: &std::path::Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| {
        CliError::Core(kdescan::Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

pub fn csv_error(path: &std::path::Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |source| {
        CliError::Core(kdescan::Error::Csv {
            path: path.to_path_buf(),
            source,
        })
    }
}
