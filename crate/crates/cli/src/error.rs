use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerical,
}

/// A failure reported as `{"error": ..., "field": ...}` on stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub field: Option<String>,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Config,
            message: message.into(),
            field: Some(field.into()),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Numerical,
            message: message.into(),
            field: None,
        }
    }

    /// Maps a library error, attributing parameter errors to `field`.
    pub fn from_core(err: selfchain::Error, field: &str) -> Self {
        use selfchain::Error as E;
        let message = err.to_string();
        match err {
            E::Domain { .. } | E::OutsideLogDomain | E::InvalidRectangle { .. } => Self {
                kind: ErrorKind::Numerical,
                message,
                field: None,
            },
            E::InvalidParameter { .. }
            | E::DimensionMismatch { .. }
            | E::NotPositiveSemidefinite { .. }
            | E::Unsupported(_) => Self::config(field, message),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Numerical => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson {
            error: &self.message,
            field: self.field.as_deref(),
        })
        .expect("error serializes")
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        let domain = CliError::from_core(
            selfchain::Error::Domain {
                op: "x",
                reason: "y".into(),
            },
            "copula",
        );
        assert_eq!((domain.exit_code(), domain.field.clone()), (3, None));
        let log = CliError::from_core(selfchain::Error::OutsideLogDomain, "copula");
        assert_eq!(log.exit_code(), 3);
        let dims = CliError::from_core(
            selfchain::Error::DimensionMismatch {
                expected: 2,
                got: 3,
            },
            "lambdas",
        );
        assert_eq!(
            (dims.exit_code(), dims.field.as_deref()),
            (2, Some("lambdas"))
        );
    }

    #[test]
    fn json_shape() {
        assert_eq!(
            CliError::config("seed", "bad \"seed\"").to_json(),
            r#"{"error":"bad \"seed\"","field":"seed"}"#
        );
        assert_eq!(CliError::numerical("nan").to_json(), r#"{"error":"nan"}"#);
    }
}
