use std::fmt;

use serde::Serialize;
use serde_json::Value;

/// Result of one command: a verdict, a JSON body and an optional table for
/// CSV output.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub check: String,
    /// The relation being tested, in words.
    pub relation: String,
    pub pass: bool,
    pub result: Value,
    #[serde(skip)]
    pub table: Table,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(|e| CliError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad command line, configuration or parameters: exit code 2.
    Usage(String),
    /// The computation could not be completed as requested: exit code 1.
    Failed(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Io(m) => write!(f, "i/o: {}", m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<dynsym::Error> for CliError {
    fn from(e: dynsym::Error) -> Self {
        match e {
            dynsym::Error::Accuracy(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}
