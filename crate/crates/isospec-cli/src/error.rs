//! Exit-code contract: 0 success, 2 validity (bad lambda / bad arguments),
//! 3 numerical failure, 4 I/O failure.

use isospec_core::Error as CoreError;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: 4, message: message.into() }
    }

    pub fn from_csv(e: csv::Error) -> Self {
        CliError::io(format!("csv: {e}"))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match &e {
            CoreError::SingularLambda { lambda, zeros } => {
                let list: Vec<String> = zeros.iter().map(|z| format!("{z:.12}")).collect();
                CliError {
                    code: 2,
                    message: format!(
                        "lambda = {lambda} is singular on this domain; denominator zeros at [{}]",
                        list.join(", ")
                    ),
                }
            }
            CoreError::InvalidArgument(_) | CoreError::Unsupported(_) => {
                CliError { code: 2, message: e.to_string() }
            }
            _ => CliError { code: 3, message: e.to_string() },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
