use bispectra::poly::Poly;
use bispectra::rational::{to_pair, Rational};
use bispectra::report::{CheckReport, NumericReport};
use serde_json::{json, Value};

use crate::args::Format;

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug)]
pub struct Output {
    pub command: String,
    /// `None` for pure computations.
    pub passed: Option<bool>,
    pub result: Value,
    pub table: Table,
}

pub fn rat(r: &Rational) -> Value {
    json!(to_pair(r))
}

pub fn rats(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rat).collect())
}

/// Ascending coefficients.
pub fn poly(p: &Poly) -> Value {
    rats(&p.dense())
}

pub fn check_rows(table: &mut Table, rep: &CheckReport) {
    table.push(vec![
        rep.check.clone(),
        rep.passed.to_string(),
        rep.cases.to_string(),
        rep.failures.len().to_string(),
    ]);
}

pub fn check_table(reports: &[&CheckReport]) -> Table {
    let mut t = Table::new(&["check", "passed", "cases", "failures"]);
    for r in reports {
        check_rows(&mut t, r);
    }
    t
}

pub fn numeric_table(reports: &[NumericReport]) -> Table {
    let mut t = Table::new(&[
        "check",
        "identity",
        "residual",
        "scale",
        "error_estimate",
        "passed",
    ]);
    for r in reports {
        for x in &r.residuals {
            t.push(vec![
                r.check.clone(),
                x.identity.clone(),
                format!("{:e}", x.residual),
                format!("{:e}", x.scale),
                format!("{:e}", x.error_estimate),
                x.passed.to_string(),
            ]);
        }
    }
    t
}

pub fn render(out: &Output, format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let v = json!({ "command": out.command, "passed": out.passed, "result": out.result });
            serde_json::to_string(&v)
                .map(|s| s + "\n")
                .map_err(|e| e.to_string())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.table.header)
                .map_err(|e| e.to_string())?;
            for row in &out.table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}
