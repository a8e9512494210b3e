use std::fmt;

use serde_json::{Map, Value};

/// Result document of one computation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
}

#[derive(Debug)]
pub enum CliError {
    /// Argument parsing or validation failed.
    Usage(String),
    Core(abext_core::Error),
    Io(String),
    /// A computed number was NaN or infinite.
    NonFinite(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::NonFinite(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "invalid_input",
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::NonFinite(_) => "non_finite",
        }
    }

    /// One-line error object for standard error.
    pub fn to_json_line(&self) -> String {
        let mut obj = Map::new();
        obj.insert("error".into(), self.kind().into());
        obj.insert("message".into(), self.to_string().into());
        obj.insert("exit_code".into(), self.exit_code().into());
        Value::Object(obj).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => {
                // keep the error object on one line
                let flat: Vec<&str> = msg
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .collect();
                write!(f, "{}", flat.join(" "))
            }
            CliError::Core(e) => write!(f, "{e}"),
            CliError::NonFinite(field) => write!(f, "non-finite value in field `{field}`"),
        }
    }
}

impl From<abext_core::Error> for CliError {
    fn from(e: abext_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub(crate) fn put_f64(map: &mut Map<String, Value>, key: &str, x: f64) -> Result<(), CliError> {
    match serde_json::Number::from_f64(x) {
        Some(n) => {
            map.insert(key.into(), Value::Number(n));
            Ok(())
        }
        None => Err(CliError::NonFinite(key.into())),
    }
}

pub(crate) fn put<V: Into<Value>>(map: &mut Map<String, Value>, key: &str, v: V) {
    map.insert(key.into(), v.into());
}

impl Report {
    pub fn input_f64(&mut self, key: &str, x: f64) -> Result<(), CliError> {
        put_f64(&mut self.inputs, key, x)
    }

    pub fn output_f64(&mut self, key: &str, x: f64) -> Result<(), CliError> {
        put_f64(&mut self.outputs, key, x)
    }

    pub fn diagnostic_f64(&mut self, key: &str, x: f64) -> Result<(), CliError> {
        put_f64(&mut self.diagnostics, key, x)
    }

    pub fn input<V: Into<Value>>(&mut self, key: &str, v: V) {
        put(&mut self.inputs, key, v);
    }

    pub fn output<V: Into<Value>>(&mut self, key: &str, v: V) {
        put(&mut self.outputs, key, v);
    }

    pub fn diagnostic<V: Into<Value>>(&mut self, key: &str, v: V) {
        put(&mut self.diagnostics, key, v);
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("inputs".into(), Value::Object(self.inputs.clone()));
        doc.insert("outputs".into(), Value::Object(self.outputs.clone()));
        doc.insert(
            "diagnostics".into(),
            Value::Object(self.diagnostics.clone()),
        );
        doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        Value::Object(doc)
    }
}
