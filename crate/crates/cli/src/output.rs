use serde_json::Value;

use crate::args::Format;

/// Rows for CSV output, header first.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Coordinate columns `x0..x{dim-1}`, after any leading columns.
    pub fn coords<S: Into<String>>(lead: impl IntoIterator<Item = S>, dim: usize) -> Self {
        let mut header: Vec<String> = lead.into_iter().map(Into::into).collect();
        header.extend((0..dim).map(|i| format!("x{i}")));
        Self { header, rows: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    /// Defaults to one row built from the top-level JSON fields.
    pub table: Option<Table>,
    /// A check ran fine but did not hold.
    pub failed_check: bool,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Self {
            json,
            table: None,
            failed_check: false,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn failing_if(mut self, failed: bool) -> Self {
        self.failed_check = failed;
        self
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn record_table(json: &Value) -> Table {
    match json {
        Value::Object(map) => {
            let mut t = Table::new(map.keys().cloned());
            t.push(map.values().map(cell).collect());
            t
        }
        other => {
            let mut t = Table::new(["value"]);
            t.push(vec![cell(other)]);
            t
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, crate::CliError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&report.json)? + "\n"),
        Format::Csv => {
            let owned;
            let table = match &report.table {
                Some(t) => t,
                None => {
                    owned = record_table(&report.json);
                    &owned
                }
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn default_table_flattens_fields() {
        let r = Report::new(json!({"size": 2, "projections": [2, 2], "gap": 2}));
        let out = render(&r, Format::Csv).unwrap();
        assert_eq!(out, "gap,projections,size\n2,\"[2,2]\",2\n");
    }

    #[test]
    fn json_is_pretty_with_newline() {
        let r = Report::new(json!({"a": 1}));
        assert_eq!(render(&r, Format::Json).unwrap(), "{\n  \"a\": 1\n}\n");
    }
}
