use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope for every JSON report except `list` and `expand`, which emit bare arrays.
#[derive(Debug, Serialize)]
pub struct ReportDocument<T> {
    pub tool_version: &'static str,
    pub command: String,
    pub items: Vec<T>,
    pub status: &'static str,
}

impl<T: Serialize> ReportDocument<T> {
    pub fn new(command: &str, items: Vec<T>, passed: bool) -> Self {
        ReportDocument {
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            items,
            status: if passed { "pass" } else { "fail" },
        }
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

/// Serializes flat rows; `header` is only written out for an empty table.
pub fn to_csv<R: Serialize>(header: &[&str], rows: &[R]) -> String {
    if rows.is_empty() {
        return header.join(",") + "\n";
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize to csv");
    }
    let bytes = w.into_inner().expect("in-memory writer does not fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}
