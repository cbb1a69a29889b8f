use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::record::{GridPoint, RunRecord};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        // Sorting first makes the sum independent of record order.
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v[0],
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    #[serde(flatten)]
    pub point: GridPoint,
    pub runs: usize,
    pub metrics: BTreeMap<String, Stat>,
}

impl PointSummary {
    pub fn mean(&self, metric: &str) -> Option<f64> {
        self.metrics.get(metric).map(|s| s.mean)
    }
}

/// Mean, min and max of every present metric per grid point, in order of
/// first appearance.
pub fn aggregate(records: &[RunRecord]) -> Vec<PointSummary> {
    let mut order: Vec<GridPoint> = Vec::new();
    let mut groups: BTreeMap<GridPoint, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let p = r.point();
        groups
            .entry(p)
            .or_insert_with(|| {
                order.push(p);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|p| {
            let rs = &groups[&p];
            let mut metrics = BTreeMap::new();
            for (k, (name, _)) in rs[0].metrics().iter().enumerate() {
                let vals: Vec<f64> = rs.iter().filter_map(|r| r.metrics()[k].1).collect();
                if let Some(s) = Stat::of(&vals) {
                    metrics.insert(name.to_string(), s);
                }
            }
            PointSummary {
                point: p,
                runs: rs.len(),
                metrics,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::config::ExperimentId;

    fn rec(seed: u64, err: f64) -> RunRecord {
        let p = GridPoint {
            n_qubits: 1,
            layers: 2,
            repetitions: 1,
            train_size: 10,
        };
        let mut r = RunRecord::empty(ExperimentId::LinsepSweep, &p, seed);
        r.test_error = Some(err);
        r
    }

    #[test]
    fn single_and_pair() {
        let one = aggregate(&[rec(1, 0.3)]);
        let s = one[0].metrics["test_error"];
        assert_eq!((s.mean, s.min, s.max), (0.3, 0.3, 0.3));
        assert!(!one[0].metrics.contains_key("train_error"));
        let two = aggregate(&[rec(1, 0.4), rec(2, 0.6)]);
        let s = two[0].metrics["test_error"];
        assert_eq!((s.mean, s.min, s.max), (0.5, 0.4, 0.6));
        assert_eq!(two[0].runs, 2);
    }
}
