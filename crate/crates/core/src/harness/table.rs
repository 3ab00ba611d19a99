//! Named-column result tables with deterministic CSV output.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::metrics::{mean, sample_std};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Real(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            // shortest round-trip form, stable across runs
            Cell::Real(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<f32> for Cell {
    fn from(v: f32) -> Self {
        Cell::Real(v as f64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// One row per (configuration, trial) or per summary cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl MetricsTable {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        MetricsTable { columns: columns.iter().map(|c| c.as_ref().to_owned()).collect(), rows: Vec::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: MetricsTable) {
        assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column; panics if the column is missing or holds text.
    pub fn column_f64(&self, name: &str) -> Vec<f64> {
        let k = self.column_index(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].as_f64().unwrap_or_else(|| panic!("column {name} is not numeric"))).collect()
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column_index(name).map(|k| &self.rows[row][k])
    }

    /// Rows whose `name` column satisfies `pred`.
    pub fn filter(&self, name: &str, pred: impl Fn(&Cell) -> bool) -> MetricsTable {
        let k = self.column_index(name).unwrap_or_else(|| panic!("no column {name}"));
        MetricsTable { columns: self.columns.clone(), rows: self.rows.iter().filter(|r| pred(&r[k])).cloned().collect() }
    }

    /// Groups rows by the `keys` columns (in order of first appearance) and
    /// reports `trials` plus mean and sample std of each `values` column.
    pub fn summarize(&self, keys: &[&str], values: &[&str]) -> MetricsTable {
        let ki: Vec<usize> = keys.iter().map(|k| self.column_index(k).unwrap_or_else(|| panic!("no column {k}"))).collect();
        let vi: Vec<usize> = values.iter().map(|v| self.column_index(v).unwrap_or_else(|| panic!("no column {v}"))).collect();
        let mut index: HashMap<Vec<String>, usize> = HashMap::new();
        let mut groups: Vec<(Vec<Cell>, Vec<Vec<f64>>)> = Vec::new();
        for r in &self.rows {
            let key: Vec<String> = ki.iter().map(|&k| r[k].to_string()).collect();
            let g = *index.entry(key).or_insert_with(|| {
                groups.push((ki.iter().map(|&k| r[k].clone()).collect(), vec![Vec::new(); vi.len()]));
                groups.len() - 1
            });
            for (slot, &v) in groups[g].1.iter_mut().zip(&vi) {
                slot.push(r[v].as_f64().unwrap_or(f64::NAN));
            }
        }
        let mut columns: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
        columns.push("trials".into());
        for v in values {
            columns.push(format!("{v}_mean"));
            columns.push(format!("{v}_std"));
        }
        let mut out = MetricsTable { columns, rows: Vec::with_capacity(groups.len()) };
        for (key, samples) in groups {
            let mut row = key;
            row.push(samples.first().map_or(0, Vec::len).into());
            for xs in &samples {
                row.push(mean(xs).into());
                row.push(sample_std(xs).into());
            }
            out.rows.push(row);
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(|c| c.to_string()))?;
        }
        out.flush().map_err(Error::from)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}
