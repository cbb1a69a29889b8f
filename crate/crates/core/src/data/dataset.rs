use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Classification,
    Regression,
}

/// One example: encoding angles plus a class label (0/1) or regression target.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: f64,
}

impl Sample {
    pub fn class(&self) -> usize {
        usize::from(self.label >= 0.5)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    task: Task,
    dim: usize,
    samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(task: Task, dim: usize, samples: Vec<Sample>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.features.len(),
                });
            }
            if s.features.iter().any(|v| !v.is_finite()) {
                return Err(domain(format!("sample {i} has a non-finite feature")));
            }
            let ok = match task {
                Task::Classification => s.label == 0.0 || s.label == 1.0,
                Task::Regression => (0.0..=1.0).contains(&s.label),
            };
            if !ok {
                return Err(domain(format!("sample {i} has invalid label {}", s.label)));
            }
        }
        Ok(Self { task, dim, samples })
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Sample counts per class `[class 0, class 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.samples.iter().filter(|s| s.class() == 1).count();
        [self.samples.len() - ones, ones]
    }

    /// Copy with every feature vector zero-padded to `dim`.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(domain(format!("cannot pad dimension {} down to {dim}", self.dim)));
        }
        let samples = self
            .samples
            .iter()
            .map(|s| {
                let mut f = s.features.clone();
                f.resize(dim, 0.0);
                Sample {
                    features: f,
                    label: s.label,
                }
            })
            .collect();
        Ok(Self {
            task: self.task,
            dim,
            samples,
        })
    }

    /// Writes `f0,…,f{D−1},label` rows. Floats use the shortest text that
    /// parses back to the same value.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        let header: Vec<String> = (0..self.dim)
            .map(|d| format!("f{d}"))
            .chain(std::iter::once("label".to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for s in &self.samples {
            let mut row = String::new();
            for v in &s.features {
                row.push_str(&format!("{v},"));
            }
            row.push_str(&format!("{}", s.label));
            writeln!(out, "{row}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(File::create(path)?)
    }

    pub fn read_csv<R: Read>(input: R, task: Task) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(input);
        let headers = reader.headers()?.clone();
        let width = headers.len();
        if width == 0 || &headers[width - 1] != "label" {
            return Err(Error::Parse {
                line: 1,
                message: "last header column must be `label`".into(),
            });
        }
        for (d, h) in headers.iter().take(width - 1).enumerate() {
            if h != format!("f{d}") {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected header `f{d}`, found `{h}`"),
                });
            }
        }
        let dim = width - 1;
        let mut samples = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.len() != width {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {width} fields, found {}", record.len()),
                });
            }
            let mut values = Vec::with_capacity(width);
            for (col, field) in record.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("column {} is not a number: `{field}`", headers[col].to_string()),
                })?;
                values.push(v);
            }
            let label = values.pop().expect("width ≥ 1");
            samples.push(Sample {
                features: values,
                label,
            });
        }
        Self::new(task, dim, samples)
    }

    pub fn load_csv(path: impl AsRef<Path>, task: Task) -> Result<Self> {
        Self::read_csv(File::open(path)?, task)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_rows() -> Dataset {
        Dataset::new(
            Task::Classification,
            2,
            vec![
                Sample {
                    features: vec![0.5, -0.25],
                    label: 1.0,
                },
                Sample {
                    features: vec![std::f64::consts::PI, 1e-17],
                    label: 0.0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn exact_text_rows() {
        let mut buf = Vec::new();
        two_rows().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("f0,f1,label"));
        assert_eq!(lines.next(), Some("0.5,-0.25,1"));
        assert_eq!(lines.next(), Some("3.141592653589793,0.00000000000000001,0"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn round_trip_is_exact() {
        let d = two_rows();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(Dataset::read_csv(buf.as_slice(), Task::Classification).unwrap(), d);
    }

    #[test]
    fn empty_dataset_is_header_only() {
        let d = Dataset::new(Task::Regression, 3, vec![]).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "f0,f1,f2,label\n");
        assert_eq!(Dataset::read_csv(buf.as_slice(), Task::Regression).unwrap(), d);
    }

    #[test]
    fn malformed_rows_report_line() {
        let bad = "f0,f1,label\n0.1,0.2,0\n0.3,x,1\n";
        match Dataset::read_csv(bad.as_bytes(), Task::Classification) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let ragged = "f0,f1,label\n0.1,0.2,0\n0.3,1\n";
        assert!(matches!(
            Dataset::read_csv(ragged.as_bytes(), Task::Classification),
            Err(Error::Parse { line: 3, .. })
        ));
        let label = "f0,label\n0.1,0.5\n";
        assert!(Dataset::read_csv(label.as_bytes(), Task::Classification).is_err());
    }
}
