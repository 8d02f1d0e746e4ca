use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub statistic: String,
    pub expected: f64,
    pub observed: f64,
    pub n: usize,
    pub pass: bool,
}

/// Rows of `statistic, expected, observed, n, pass`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn push(&mut self, statistic: impl Into<String>, expected: f64, observed: f64, n: usize, pass: bool) {
        self.rows.push(ReportRow {
            statistic: statistic.into(),
            expected,
            observed,
            n,
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wtr.serialize(row)?;
        }
        wtr.flush().map_err(|e| Error::io("<report>", e))?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::default();
        r.push("variance", 0.25, 0.5, 10, false);
        let mut buf = Vec::new();
        r.write_to(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "statistic,expected,observed,n,pass\nvariance,0.25,0.5,10,false\n"
        );
        assert!(!r.all_pass());
    }
}
