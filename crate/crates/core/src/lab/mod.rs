//! Experiment definitions, multi-seed runners, aggregation and plotting.

pub mod aggregate;
pub mod config;
pub mod plot;
pub mod record;
pub mod runners;

pub use aggregate::{aggregate, PointSummary, Stat};
pub use config::{DataSettings, ExperimentConfig, ExperimentId, Grid, Profile};
pub use plot::{plot_svg, series, PlotOptions, Series, SeriesPoint};
pub use record::{records_from_table, GridPoint, RunRecord, Table, RECORD_COLUMNS};
pub use runners::{datasets, grid_points, run_experiment, Check, ExperimentOutput, Summary};
