use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentId;
use crate::error::{Error, Result};

pub const RECORD_COLUMNS: [&str; 16] = [
    "experiment",
    "N",
    "L",
    "P",
    "M_train",
    "seed",
    "train_error",
    "test_error",
    "train_acc",
    "test_acc",
    "h_gap_train",
    "h_gap_test",
    "div_pre",
    "div_post",
    "bound",
    "seconds",
];

/// One trained (or evaluated) model at one grid point and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: ExperimentId,
    pub n_qubits: usize,
    pub layers: usize,
    pub repetitions: usize,
    pub train_size: usize,
    pub seed: u64,
    pub train_error: Option<f64>,
    pub test_error: Option<f64>,
    pub train_acc: Option<f64>,
    pub test_acc: Option<f64>,
    pub h_gap_train: Option<f64>,
    pub h_gap_test: Option<f64>,
    pub div_pre: Option<f64>,
    pub div_post: Option<f64>,
    pub bound: Option<f64>,
    pub seconds: Option<f64>,
}

impl RunRecord {
    pub fn empty(experiment: ExperimentId, point: &GridPoint, seed: u64) -> Self {
        Self {
            experiment,
            n_qubits: point.n_qubits,
            layers: point.layers,
            repetitions: point.repetitions,
            train_size: point.train_size,
            seed,
            train_error: None,
            test_error: None,
            train_acc: None,
            test_acc: None,
            h_gap_train: None,
            h_gap_test: None,
            div_pre: None,
            div_post: None,
            bound: None,
            seconds: None,
        }
    }

    pub fn point(&self) -> GridPoint {
        GridPoint {
            n_qubits: self.n_qubits,
            layers: self.layers,
            repetitions: self.repetitions,
            train_size: self.train_size,
        }
    }

    /// Named optional metrics in column order.
    pub fn metrics(&self) -> [(&'static str, Option<f64>); 10] {
        [
            ("train_error", self.train_error),
            ("test_error", self.test_error),
            ("train_acc", self.train_acc),
            ("test_acc", self.test_acc),
            ("h_gap_train", self.h_gap_train),
            ("h_gap_test", self.h_gap_test),
            ("div_pre", self.div_pre),
            ("div_post", self.div_post),
            ("bound", self.bound),
            ("seconds", self.seconds),
        ]
    }

    fn cells(&self) -> Vec<String> {
        let mut row = vec![
            self.experiment.name().to_string(),
            self.n_qubits.to_string(),
            self.layers.to_string(),
            self.repetitions.to_string(),
            self.train_size.to_string(),
            self.seed.to_string(),
        ];
        row.extend(self.metrics().iter().map(|(_, v)| fmt_opt(*v)));
        row
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    #[serde(rename = "N")]
    pub n_qubits: usize,
    #[serde(rename = "L")]
    pub layers: usize,
    #[serde(rename = "P")]
    pub repetitions: usize,
    #[serde(rename = "M_train")]
    pub train_size: usize,
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// A header plus string cells; the on-disk form of every result file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn from_records(records: &[RunRecord]) -> Self {
        let mut t = Self::new(&RECORD_COLUMNS);
        t.rows = records.iter().map(RunRecord::cells).collect();
        t
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format(format!("missing column `{name}`")))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("cells are UTF-8")
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Parses records written by [`Table::from_records`].
pub fn records_from_table(table: &Table) -> Result<Vec<RunRecord>> {
    if table.header != RECORD_COLUMNS {
        return Err(Error::Format("table does not use the run-record columns".into()));
    }
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let line = i + 2;
            let bad = |what: &str| Error::Parse {
                line,
                message: format!("invalid {what}"),
            };
            let int = |k: usize| row[k].parse::<usize>().map_err(|_| bad(RECORD_COLUMNS[k]));
            let opt = |k: usize| -> Result<Option<f64>> {
                if row[k].is_empty() {
                    Ok(None)
                } else {
                    row[k].parse::<f64>().map(Some).map_err(|_| bad(RECORD_COLUMNS[k]))
                }
            };
            Ok(RunRecord {
                experiment: ExperimentId::parse(&row[0]).ok_or_else(|| bad("experiment"))?,
                n_qubits: int(1)?,
                layers: int(2)?,
                repetitions: int(3)?,
                train_size: int(4)?,
                seed: row[5].parse().map_err(|_| bad("seed"))?,
                train_error: opt(6)?,
                test_error: opt(7)?,
                train_acc: opt(8)?,
                test_acc: opt(9)?,
                h_gap_train: opt(10)?,
                h_gap_test: opt(11)?,
                div_pre: opt(12)?,
                div_post: opt(13)?,
                bound: opt(14)?,
                seconds: opt(15)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let p = GridPoint {
            n_qubits: 2,
            layers: 3,
            repetitions: 1,
            train_size: 600,
        };
        let mut r = RunRecord::empty(ExperimentId::Regression, &p, 7);
        r.test_error = Some(0.125);
        r.bound = Some(1.0 / 3.0);
        let t = Table::from_records(&[r.clone()]);
        let text = t.to_csv_string();
        assert!(text.starts_with("experiment,N,L,P,M_train,seed,train_error,"));
        assert!(text.contains("regression,2,3,1,600,7,,0.125,"));
        let back = Table::read_csv(text.as_bytes()).unwrap();
        assert_eq!(records_from_table(&back).unwrap(), vec![r]);
    }

    #[test]
    fn missing_column_is_reported() {
        let t = Table::new(&["a", "b"]);
        assert!(matches!(t.column("c"), Err(Error::Format(_))));
    }
}
